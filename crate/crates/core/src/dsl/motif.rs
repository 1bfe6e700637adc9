use std::fmt;
use std::sync::Arc;

use super::{text, DslError, Pattern, TensorSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Periodic,
    Open,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    pub stride: usize,
    pub step: usize,
    pub offset: usize,
    pub boundary: Boundary,
    pub mapping: Arc<TensorSpec>,
    /// One parameter range for every edge of this primitive.
    pub shared: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pivot {
    pub pattern: Pattern,
    pub mapping: Arc<TensorSpec>,
    pub shared: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    Cycle(Cycle),
    Pivot(Pivot),
    Mask(Pattern),
    /// Marks the start of a network. The size itself is supplied at
    /// instantiation; a recorded `n` is informational.
    Init(Option<usize>),
}

impl Primitive {
    /// Periodic, weight-shared cycle with the given geometry.
    pub fn cycle(
        stride: usize,
        step: usize,
        offset: usize,
        mapping: Arc<TensorSpec>,
    ) -> Result<Self, DslError> {
        Self::cycle_with(stride, step, offset, Boundary::Periodic, mapping, true)
    }

    pub fn cycle_with(
        stride: usize,
        step: usize,
        offset: usize,
        boundary: Boundary,
        mapping: Arc<TensorSpec>,
        shared: bool,
    ) -> Result<Self, DslError> {
        if stride == 0 || step == 0 {
            return Err(DslError::InvalidPrimitive(format!(
                "stride and step must be at least 1 (got stride={stride}, step={step})"
            )));
        }
        Ok(Primitive::Cycle(Cycle {
            stride,
            step,
            offset,
            boundary,
            mapping,
            shared,
        }))
    }

    pub fn pivot(pattern: Pattern, mapping: Arc<TensorSpec>) -> Self {
        Primitive::Pivot(Pivot {
            pattern,
            mapping,
            shared: true,
        })
    }

    pub fn mapping(&self) -> Option<&Arc<TensorSpec>> {
        match self {
            Primitive::Cycle(c) => Some(&c.mapping),
            Primitive::Pivot(p) => Some(&p.mapping),
            Primitive::Mask(_) | Primitive::Init(_) => None,
        }
    }

    pub fn mapping_mut(&mut self) -> Option<&mut Arc<TensorSpec>> {
        match self {
            Primitive::Cycle(c) => Some(&mut c.mapping),
            Primitive::Pivot(p) => Some(&mut p.mapping),
            Primitive::Mask(_) | Primitive::Init(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Primitive(Primitive),
    Motif(Motif),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Motif {
    pub nodes: Vec<Node>,
    pub name: Option<String>,
}

impl Motif {
    pub fn new(nodes: Vec<Node>) -> Self {
        Motif { nodes, name: None }
    }

    pub fn from_primitives(prims: impl IntoIterator<Item = Primitive>) -> Self {
        Motif::new(prims.into_iter().map(Node::Primitive).collect())
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Depth of bracket nesting; a flat motif has depth 1.
    pub fn depth(&self) -> usize {
        1 + self
            .nodes
            .iter()
            .map(|n| match n {
                Node::Motif(m) => m.depth(),
                Node::Primitive(_) => 0,
            })
            .max()
            .unwrap_or(0)
    }

    /// Primitives in depth-first order, sub-motif brackets removed.
    /// Nested tensors are left as they are.
    pub fn flatten(&self) -> Motif {
        let mut out = Vec::new();
        self.collect_primitives(&mut out);
        Motif::from_primitives(out)
    }

    fn collect_primitives(&self, out: &mut Vec<Primitive>) {
        for node in &self.nodes {
            match node {
                Node::Primitive(p) => out.push(p.clone()),
                Node::Motif(m) => m.collect_primitives(out),
            }
        }
    }

    pub fn primitives(&self) -> Vec<Primitive> {
        let mut out = Vec::new();
        self.collect_primitives(&mut out);
        out
    }

    /// Structure-preserving text form.
    pub fn serialize(&self) -> String {
        text::serialize(self, false)
    }

    /// Genome identity: the text of the fully flattened motif without labels,
    /// also inside nested tensors.
    pub fn canonical(&self) -> String {
        text::serialize(self, true)
    }

    pub fn same_genome(&self, other: &Motif) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Display for Motif {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Sequence `a` then `b`. An empty operand is dropped so that `compose(m, empty)`
/// returns `m` unchanged.
pub fn compose(a: &Motif, b: &Motif) -> Motif {
    match (a.is_empty(), b.is_empty()) {
        (_, true) => a.clone(),
        (true, false) => b.clone(),
        _ => Motif::new(vec![Node::Motif(a.clone()), Node::Motif(b.clone())]),
    }
}

/// Site tuples of a cycle over `n_active` sites, in increasing generator index.
pub fn cycle_edges(
    n_active: usize,
    arity: usize,
    stride: usize,
    step: usize,
    offset: usize,
    boundary: Boundary,
) -> Result<Vec<Vec<usize>>, DslError> {
    if arity == 0 || stride == 0 || step == 0 {
        return Err(DslError::InvalidPrimitive(format!(
            "arity, stride and step must be positive (arity={arity}, stride={stride}, step={step})"
        )));
    }
    if n_active < arity {
        return Err(DslError::TooFewSites { n_active, arity });
    }
    let count = n_active / step;
    let mut edges = Vec::with_capacity(count);
    for k in 0..count {
        let start = offset + k * step;
        let raw: Vec<usize> = (0..arity).map(|j| start + j * stride).collect();
        let tuple: Vec<usize> = match boundary {
            Boundary::Periodic => raw.iter().map(|&i| i % n_active).collect(),
            Boundary::Open => {
                if raw.iter().any(|&i| i >= n_active) {
                    continue;
                }
                raw
            }
        };
        if has_repeats(&tuple) {
            continue;
        }
        edges.push(tuple);
    }
    Ok(edges)
}

fn has_repeats(t: &[usize]) -> bool {
    t.iter().enumerate().any(|(i, a)| t[..i].contains(a))
}

/// Hub-to-all tuples for the site selected by `pattern`.
pub fn pivot_edges(
    pattern: &Pattern,
    n_active: usize,
    arity: usize,
) -> Result<Vec<Vec<usize>>, DslError> {
    let bits = pattern.resolve(n_active)?;
    let selected: Vec<usize> = bits
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect();
    if selected.is_empty() {
        return Err(DslError::EmptyPivot(pattern.source().to_string()));
    }
    match arity {
        1 => Ok(selected.into_iter().map(|i| vec![i]).collect()),
        2 => {
            if selected.len() > 1 {
                return Err(DslError::MultiPivot {
                    pattern: pattern.source().to_string(),
                    count: selected.len(),
                });
            }
            let p = selected[0];
            Ok((0..n_active).filter(|&j| j != p).map(|j| vec![p, j]).collect())
        }
        other => Err(DslError::UnsupportedPivotArity(other)),
    }
}

/// The subset of `active` kept by a mask, in original order. May be empty;
/// the instantiator reports an error only if a tensor primitive follows.
pub fn apply_mask(pattern: &Pattern, active: &[usize]) -> Result<Vec<usize>, DslError> {
    if active.is_empty() {
        return Err(DslError::AllSitesMasked);
    }
    let keep = pattern.resolve(active.len())?;
    Ok(active
        .iter()
        .zip(keep)
        .filter_map(|(&s, k)| k.then_some(s))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_pattern;

    #[test]
    fn stride_two_cycles() {
        let e = cycle_edges(4, 2, 2, 1, 0, Boundary::Periodic).unwrap();
        assert_eq!(e, vec![vec![0, 2], vec![1, 3], vec![2, 0], vec![3, 1]]);
        let e = cycle_edges(5, 2, 2, 1, 0, Boundary::Periodic).unwrap();
        assert_eq!(
            e,
            vec![vec![0, 2], vec![1, 3], vec![2, 4], vec![3, 0], vec![4, 1]]
        );
    }

    #[test]
    fn single_site_cycle_and_open_boundary() {
        let e = cycle_edges(3, 1, 1, 1, 0, Boundary::Periodic).unwrap();
        assert_eq!(e, vec![vec![0], vec![1], vec![2]]);
        let e = cycle_edges(4, 2, 1, 1, 0, Boundary::Open).unwrap();
        assert_eq!(e, vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        assert!(matches!(
            cycle_edges(1, 2, 1, 1, 0, Boundary::Periodic),
            Err(DslError::TooFewSites { .. })
        ));
    }

    #[test]
    fn step_and_offset() {
        let e = cycle_edges(7, 3, 1, 2, 0, Boundary::Periodic).unwrap();
        assert_eq!(e, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 6]]);
        let e = cycle_edges(4, 2, 1, 2, 1, Boundary::Periodic).unwrap();
        assert_eq!(e, vec![vec![1, 2], vec![3, 0]]);
    }

    #[test]
    fn pivots() {
        let p = parse_pattern("1*").unwrap();
        assert_eq!(
            pivot_edges(&p, 5, 2).unwrap(),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![0, 4]]
        );
        assert_eq!(pivot_edges(&p, 2, 2).unwrap(), vec![vec![0, 1]]);
        let q = parse_pattern("*1").unwrap();
        assert_eq!(
            pivot_edges(&q, 4, 2).unwrap(),
            vec![vec![3, 0], vec![3, 1], vec![3, 2]]
        );
        let none = parse_pattern("0*").unwrap();
        assert!(matches!(pivot_edges(&none, 3, 2), Err(DslError::EmptyPivot(_))));
        let many = parse_pattern("11*").unwrap();
        assert!(matches!(pivot_edges(&many, 4, 2), Err(DslError::MultiPivot { .. })));
    }

    #[test]
    fn repeated_halving() {
        let half = parse_pattern("!*").unwrap();
        let mut active: Vec<usize> = (0..8).collect();
        let mut sizes = vec![active.len()];
        for _ in 0..3 {
            active = apply_mask(&half, &active).unwrap();
            sizes.push(active.len());
        }
        assert_eq!(sizes, vec![8, 4, 2, 1]);
        let all = parse_pattern("*").unwrap();
        assert_eq!(apply_mask(&all, &[0, 1, 2]).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn compose_with_empty_is_identity() {
        let m = Motif::from_primitives([Primitive::Init(None)]);
        assert_eq!(compose(&m, &Motif::default()), m);
        assert_eq!(compose(&Motif::default(), &m), m);
    }
}
