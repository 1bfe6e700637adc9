//! Line-oriented text form of motifs.
//!
//! ```text
//! cycle(stride=1,step=1,offset=0,boundary=periodic,map=eY)
//! [@block
//!   pivot(pattern=1*,map=eZY)
//!   mask(pattern=!*)
//! ]
//! ```
//!
//! Nested tensors are written inline as `net(n=2,tie=1)[ ... ]`.

use std::sync::Arc;

use super::{Boundary, DslError, Motif, Node, Pattern, Primitive, TensorKind, TensorSpec};

const INDENT: &str = "  ";

pub(crate) fn serialize(m: &Motif, canonical: bool) -> String {
    let mut out = String::new();
    let flat;
    let m = if canonical {
        flat = m.flatten();
        &flat
    } else {
        m
    };
    write_nodes(&m.nodes, 0, canonical, &mut out);
    out
}

pub(crate) fn tensor_text(t: &TensorSpec, canonical: bool) -> String {
    let mut out = String::new();
    write_tensor(t, 0, canonical, &mut out);
    out
}

fn write_nodes(nodes: &[Node], indent: usize, canonical: bool, out: &mut String) {
    for (i, node) in nodes.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write_node(node, indent, canonical, out);
    }
}

fn push_indent(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push_str(INDENT);
    }
}

fn write_node(node: &Node, indent: usize, canonical: bool, out: &mut String) {
    push_indent(indent, out);
    match node {
        Node::Primitive(p) => write_primitive(p, indent, canonical, out),
        Node::Motif(m) => {
            out.push('[');
            if let Some(name) = &m.name {
                out.push('@');
                out.push_str(name);
            }
            if !m.nodes.is_empty() {
                out.push('\n');
                write_nodes(&m.nodes, indent + 1, canonical, out);
                out.push('\n');
                push_indent(indent, out);
            }
            out.push(']');
        }
    }
}

fn write_primitive(p: &Primitive, indent: usize, canonical: bool, out: &mut String) {
    match p {
        Primitive::Cycle(c) => {
            out.push_str(&format!(
                "cycle(stride={},step={},offset={},boundary={},map=",
                c.stride,
                c.step,
                c.offset,
                c.boundary.as_str()
            ));
            write_tensor(&c.mapping, indent, canonical, out);
            if !c.shared {
                out.push_str(",share=0");
            }
            out.push(')');
        }
        Primitive::Pivot(p) => {
            out.push_str(&format!("pivot(pattern={},map=", p.pattern));
            write_tensor(&p.mapping, indent, canonical, out);
            if !p.shared {
                out.push_str(",share=0");
            }
            out.push(')');
        }
        Primitive::Mask(pat) => out.push_str(&format!("mask(pattern={pat})")),
        Primitive::Init(None) => out.push_str("init()"),
        Primitive::Init(Some(n)) => out.push_str(&format!("init(n={n})")),
    }
}

fn write_tensor(t: &TensorSpec, indent: usize, canonical: bool, out: &mut String) {
    let TensorKind::Nested(net) = t.kind() else {
        out.push_str(t.id());
        return;
    };
    out.push_str(&format!("net(n={},tie={}", net.n_sub, u8::from(net.tie)));
    if let (false, Some(name)) = (canonical, &net.name) {
        out.push_str(&format!(",name={name}"));
    }
    out.push_str(")[");
    let flat;
    let sub = if canonical {
        flat = net.motif.flatten();
        &flat
    } else {
        &net.motif
    };
    if !sub.nodes.is_empty() {
        out.push('\n');
        write_nodes(&sub.nodes, indent + 1, canonical, out);
        out.push('\n');
        push_indent(indent, out);
    }
    out.push(']');
}

/// Parse the text form produced by [`Motif::serialize`] or [`Motif::canonical`].
/// Whitespace between tokens is insignificant.
pub fn parse_motif(src: &str) -> Result<Motif, DslError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let nodes = p.nodes(false)?;
    Ok(Motif::new(nodes))
}

enum Value {
    Raw(String),
    Tensor(TensorSpec),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> DslError {
        DslError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), DslError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String, DslError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'-' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.err("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn raw_value(&mut self) -> Result<String, DslError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() || b",()[]".contains(&c) {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected value"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn nodes(&mut self, bracketed: bool) -> Result<Vec<Node>, DslError> {
        let mut nodes = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None if bracketed => return Err(self.err("unclosed '['")),
                None => return Ok(nodes),
                Some(b']') if bracketed => return Ok(nodes),
                Some(b']') => return Err(self.err("unmatched ']'")),
                _ => nodes.push(self.node()?),
            }
        }
    }

    fn node(&mut self) -> Result<Node, DslError> {
        self.skip_ws();
        if self.peek() == Some(b'[') {
            self.pos += 1;
            self.skip_ws();
            let name = if self.peek() == Some(b'@') {
                self.pos += 1;
                Some(self.ident()?)
            } else {
                None
            };
            let nodes = self.nodes(true)?;
            self.expect(b']')?;
            return Ok(Node::Motif(Motif { nodes, name }));
        }
        let head = self.ident()?;
        let args = self.args()?;
        self.primitive(&head, args).map(Node::Primitive)
    }

    fn args(&mut self) -> Result<Vec<(String, Value)>, DslError> {
        self.expect(b'(')?;
        let mut args: Vec<(String, Value)> = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() == Some(b')') {
                self.pos += 1;
                return Ok(args);
            }
            if !args.is_empty() {
                self.expect(b',')?;
            }
            let key = self.ident()?;
            if args.iter().any(|(k, _)| *k == key) {
                return Err(self.err(format!("duplicate key '{key}'")));
            }
            self.expect(b'=')?;
            let value = if key == "map" {
                Value::Tensor(self.tensor()?)
            } else {
                Value::Raw(self.raw_value()?)
            };
            args.push((key, value));
        }
    }

    fn tensor(&mut self) -> Result<TensorSpec, DslError> {
        let id = self.ident()?;
        if id != "net" {
            return TensorSpec::from_id(&id);
        }
        let args = self.args()?;
        let mut fields = Fields::new(self.pos, args);
        let n_sub = fields.usize("n")?.ok_or_else(|| self.err("net needs n="))?;
        let tie = fields.flag("tie", false)?;
        let name = fields.raw("name");
        fields.finish()?;
        self.expect(b'[')?;
        let nodes = self.nodes(true)?;
        self.expect(b']')?;
        let motif = Motif::new(nodes);
        if tie {
            TensorSpec::nested_tied(motif, n_sub, name)
        } else {
            TensorSpec::nested(motif, n_sub, name)
        }
    }

    fn primitive(&self, head: &str, args: Vec<(String, Value)>) -> Result<Primitive, DslError> {
        let mut f = Fields::new(self.pos, args);
        let prim = match head {
            "cycle" => {
                let boundary = match f.raw("boundary").as_deref() {
                    None | Some("periodic") => Boundary::Periodic,
                    Some("open") => Boundary::Open,
                    Some(other) => return Err(self.err(format!("unknown boundary '{other}'"))),
                };
                Primitive::cycle_with(
                    f.usize("stride")?.unwrap_or(1),
                    f.usize("step")?.unwrap_or(1),
                    f.usize("offset")?.unwrap_or(0),
                    boundary,
                    f.tensor()?,
                    f.flag("share", true)?,
                )?
            }
            "pivot" => {
                let src = f.raw("pattern").ok_or_else(|| self.err("pivot needs pattern="))?;
                Primitive::Pivot(super::Pivot {
                    pattern: Pattern::parse(&src)?,
                    mapping: f.tensor()?,
                    shared: f.flag("share", true)?,
                })
            }
            "mask" => {
                let src = f.raw("pattern").ok_or_else(|| self.err("mask needs pattern="))?;
                Primitive::Mask(Pattern::parse(&src)?)
            }
            "init" => Primitive::Init(f.usize("n")?),
            other => return Err(self.err(format!("unknown primitive '{other}'"))),
        };
        f.finish()?;
        Ok(prim)
    }
}

struct Fields {
    pos: usize,
    args: Vec<(String, Value)>,
}

impl Fields {
    fn new(pos: usize, args: Vec<(String, Value)>) -> Self {
        Fields { pos, args }
    }

    fn err(&self, msg: String) -> DslError {
        DslError::Parse { pos: self.pos, msg }
    }

    fn take(&mut self, key: &str) -> Option<Value> {
        let i = self.args.iter().position(|(k, _)| k == key)?;
        Some(self.args.remove(i).1)
    }

    fn raw(&mut self, key: &str) -> Option<String> {
        match self.take(key) {
            Some(Value::Raw(s)) => Some(s),
            Some(Value::Tensor(_)) | None => None,
        }
    }

    fn usize(&mut self, key: &str) -> Result<Option<usize>, DslError> {
        match self.raw(key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| self.err(format!("'{key}' expects a non-negative integer, got '{s}'"))),
        }
    }

    fn flag(&mut self, key: &str, default: bool) -> Result<bool, DslError> {
        match self.raw(key).as_deref() {
            None => Ok(default),
            Some("1") => Ok(true),
            Some("0") => Ok(false),
            Some(other) => Err(self.err(format!("'{key}' expects 0 or 1, got '{other}'"))),
        }
    }

    fn tensor(&mut self) -> Result<Arc<TensorSpec>, DslError> {
        match self.take("map") {
            Some(Value::Tensor(t)) => Ok(Arc::new(t)),
            _ => Err(self.err("missing map=".to_string())),
        }
    }

    fn finish(self) -> Result<(), DslError> {
        match self.args.first() {
            None => Ok(()),
            Some((k, _)) => Err(self.err(format!("unexpected key '{k}'"))),
        }
    }
}
