use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use super::{apply_mask, cycle_edges, pivot_edges, DslError, Motif, Node, Primitive, TensorSpec};

/// One parameterised tensor occurrence. All steps that share weights point
/// at the same operation.
#[derive(Debug, Clone, PartialEq)]
pub struct Operation {
    pub tensor: Arc<TensorSpec>,
    pub params: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub op: usize,
    pub sites: Vec<usize>,
}

/// A motif instantiated on `n` sites: steps in application order.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkProgram {
    pub n: usize,
    pub ops: Vec<Operation>,
    pub steps: Vec<Step>,
    /// Sites visible to the primitive that produced each step.
    pub active_trace: Vec<Vec<usize>>,
    pub num_params: usize,
}

impl NetworkProgram {
    pub fn empty(n: usize) -> Self {
        NetworkProgram {
            n,
            ops: Vec::new(),
            steps: Vec::new(),
            active_trace: Vec::new(),
            num_params: 0,
        }
    }

    pub fn tensor(&self, step: &Step) -> &TensorSpec {
        &self.ops[step.op].tensor
    }

    pub fn param_range(&self, step: &Step) -> Range<usize> {
        self.ops[step.op].params.clone()
    }

    /// Sum of tensor ranks over all steps.
    pub fn total_rank(&self) -> usize {
        self.steps.iter().map(|s| self.tensor(s).rank()).sum()
    }
}

impl fmt::Display for NetworkProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={} params={}", self.n, self.num_params)?;
        for s in &self.steps {
            let op = &self.ops[s.op];
            writeln!(
                f,
                "{} {:?} {}..{}",
                op.tensor.text().replace('\n', " "),
                s.sites,
                op.params.start,
                op.params.end
            )?;
        }
        Ok(())
    }
}

/// Expand a motif into a concrete program on `n` sites.
pub fn instantiate(m: &Motif, n: usize) -> Result<NetworkProgram, DslError> {
    if n == 0 {
        return Err(DslError::InvalidPrimitive("system size must be at least 1".into()));
    }
    let mut b = Builder {
        prog: NetworkProgram::empty(n),
        active: (0..n).collect(),
    };
    b.walk(m)?;
    Ok(b.prog)
}

struct Builder {
    prog: NetworkProgram,
    active: Vec<usize>,
}

impl Builder {
    fn walk(&mut self, m: &Motif) -> Result<(), DslError> {
        for node in &m.nodes {
            match node {
                Node::Motif(sub) => self.walk(sub)?,
                Node::Primitive(p) => self.primitive(p)?,
            }
        }
        Ok(())
    }

    fn primitive(&mut self, p: &Primitive) -> Result<(), DslError> {
        let (tensor, shared, local) = match p {
            Primitive::Init(_) => return Ok(()),
            Primitive::Mask(pat) => {
                self.active = apply_mask(pat, &self.active)?;
                return Ok(());
            }
            Primitive::Cycle(c) => {
                self.require_active()?;
                let e = cycle_edges(
                    self.active.len(),
                    c.mapping.arity(),
                    c.stride,
                    c.step,
                    c.offset,
                    c.boundary,
                )?;
                (&c.mapping, c.shared, e)
            }
            Primitive::Pivot(pv) => {
                self.require_active()?;
                let e = pivot_edges(&pv.pattern, self.active.len(), pv.mapping.arity())?;
                (&pv.mapping, pv.shared, e)
            }
        };
        let mut shared_op = None;
        for edge in local {
            let op = match (shared, shared_op) {
                (true, Some(op)) => op,
                _ => {
                    let op = self.new_op(tensor);
                    if shared {
                        shared_op = Some(op);
                    }
                    op
                }
            };
            let sites = edge.iter().map(|&i| self.active[i]).collect();
            self.prog.steps.push(Step { op, sites });
            self.prog.active_trace.push(self.active.clone());
        }
        Ok(())
    }

    fn require_active(&self) -> Result<(), DslError> {
        if self.active.is_empty() {
            Err(DslError::AllSitesMasked)
        } else {
            Ok(())
        }
    }

    fn new_op(&mut self, tensor: &Arc<TensorSpec>) -> usize {
        let start = self.prog.num_params;
        self.prog.num_params += tensor.param_slots();
        self.prog.ops.push(Operation {
            tensor: Arc::clone(tensor),
            params: start..self.prog.num_params,
        });
        self.prog.ops.len() - 1
    }
}
