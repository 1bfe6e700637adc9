use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{instantiate, text, DslError, Motif, NetworkProgram};
use crate::sim;

pub type OpMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn letter(self) -> char {
        match self {
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        match c {
            'X' => Some(PauliAxis::X),
            'Y' => Some(PauliAxis::Y),
            'Z' => Some(PauliAxis::Z),
            _ => None,
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            PauliAxis::X => [[o, l], [l, o]],
            PauliAxis::Y => [[o, -i], [i, o]],
            PauliAxis::Z => [[l, o], [o, -l]],
        }
    }
}

/// Single-site operators of the ladder pool. `Raise` maps |1> to |0>,
/// `Lower` maps |0> to |1>; |0> is spin up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LadderOp {
    Raise,
    Lower,
    Z,
}

impl LadderOp {
    pub const ALL: [LadderOp; 3] = [LadderOp::Raise, LadderOp::Lower, LadderOp::Z];

    pub fn letter(self) -> char {
        match self {
            LadderOp::Raise => 'P',
            LadderOp::Lower => 'M',
            LadderOp::Z => 'Z',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        match c {
            'P' => Some(LadderOp::Raise),
            'M' => Some(LadderOp::Lower),
            'Z' => Some(LadderOp::Z),
            _ => None,
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        match self {
            LadderOp::Raise => [[o, l], [o, o]],
            LadderOp::Lower => [[o, o], [l, o]],
            LadderOp::Z => [[l, o], [o, -l]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisTag {
    PauliExponential,
    Ladder,
    Nested,
}

/// A sub-network promoted to a single k-site tensor.
#[derive(Debug, Clone)]
pub struct NestedNetwork {
    pub motif: Motif,
    pub n_sub: usize,
    /// All parameters of the sub-network bound to one slot.
    pub tie: bool,
    pub name: Option<String>,
    program: NetworkProgram,
}

impl NestedNetwork {
    pub fn program(&self) -> &NetworkProgram {
        &self.program
    }
}

#[derive(Debug, Clone)]
pub enum TensorKind {
    /// exp(-i p/2 sigma)
    PauliRotation(PauliAxis),
    /// exp(+i p/2 sigma_a (x) sigma_b)
    PauliCoupling(PauliAxis, PauliAxis),
    /// I + p op
    LadderAffine(LadderOp),
    /// exp(p op_a (x) op_b)
    LadderCoupling(LadderOp, LadderOp),
    Nested(Box<NestedNetwork>),
}

#[derive(Debug, Clone)]
pub struct TensorSpec {
    id: String,
    arity: usize,
    param_slots: usize,
    basis: BasisTag,
    kind: TensorKind,
}

impl PartialEq for TensorSpec {
    fn eq(&self, other: &Self) -> bool {
        self.text() == other.text()
    }
}

impl Eq for TensorSpec {}

impl TensorSpec {
    pub fn pauli_rotation(axis: PauliAxis) -> Self {
        TensorSpec {
            id: format!("e{}", axis.letter()),
            arity: 1,
            param_slots: 1,
            basis: BasisTag::PauliExponential,
            kind: TensorKind::PauliRotation(axis),
        }
    }

    pub fn pauli_coupling(a: PauliAxis, b: PauliAxis) -> Self {
        TensorSpec {
            id: format!("e{}{}", a.letter(), b.letter()),
            arity: 2,
            param_slots: 1,
            basis: BasisTag::PauliExponential,
            kind: TensorKind::PauliCoupling(a, b),
        }
    }

    pub fn ladder_affine(op: LadderOp) -> Self {
        TensorSpec {
            id: format!("l{}", op.letter()),
            arity: 1,
            param_slots: 1,
            basis: BasisTag::Ladder,
            kind: TensorKind::LadderAffine(op),
        }
    }

    pub fn ladder_coupling(a: LadderOp, b: LadderOp) -> Self {
        TensorSpec {
            id: format!("x{}{}", a.letter(), b.letter()),
            arity: 2,
            param_slots: 1,
            basis: BasisTag::Ladder,
            kind: TensorKind::LadderCoupling(a, b),
        }
    }

    /// Look up a pool tensor by its short id (`eY`, `eZY`, `lM`, `xZZ`, ...).
    pub fn from_id(id: &str) -> Result<Self, DslError> {
        let unknown = || DslError::UnknownTensor(id.to_string());
        let mut chars = id.chars();
        let head = chars.next().ok_or_else(unknown)?;
        let rest: Vec<char> = chars.collect();
        match (head, rest.as_slice()) {
            ('e', [a]) => Ok(Self::pauli_rotation(PauliAxis::from_letter(*a).ok_or_else(unknown)?)),
            ('e', [a, b]) => Ok(Self::pauli_coupling(
                PauliAxis::from_letter(*a).ok_or_else(unknown)?,
                PauliAxis::from_letter(*b).ok_or_else(unknown)?,
            )),
            ('l', [a]) => Ok(Self::ladder_affine(LadderOp::from_letter(*a).ok_or_else(unknown)?)),
            ('x', [a, b]) => Ok(Self::ladder_coupling(
                LadderOp::from_letter(*a).ok_or_else(unknown)?,
                LadderOp::from_letter(*b).ok_or_else(unknown)?,
            )),
            _ => Err(unknown()),
        }
    }

    /// Promote a motif, instantiated on `n_sub` sites, to a k-site tensor
    /// with one parameter slot per sub-network slot.
    pub fn nested(motif: Motif, n_sub: usize, name: Option<String>) -> Result<Self, DslError> {
        Self::build_nested(motif, n_sub, false, name)
    }

    /// Like [`TensorSpec::nested`] but every sub-network parameter reads the
    /// same single slot.
    pub fn nested_tied(motif: Motif, n_sub: usize, name: Option<String>) -> Result<Self, DslError> {
        Self::build_nested(motif, n_sub, true, name)
    }

    fn build_nested(
        motif: Motif,
        n_sub: usize,
        tie: bool,
        name: Option<String>,
    ) -> Result<Self, DslError> {
        let program = instantiate(&motif, n_sub)?;
        let param_slots = match (tie, program.num_params) {
            (_, 0) => 0,
            (true, _) => 1,
            (false, p) => p,
        };
        Ok(TensorSpec {
            id: name.clone().unwrap_or_else(|| "net".to_string()),
            arity: n_sub,
            param_slots,
            basis: BasisTag::Nested,
            kind: TensorKind::Nested(Box::new(NestedNetwork {
                motif,
                n_sub,
                tie,
                name,
                program,
            })),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Tensor rank as used by the structural complexity: two legs per site.
    pub fn rank(&self) -> usize {
        2 * self.arity
    }

    pub fn param_slots(&self) -> usize {
        self.param_slots
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn kind(&self) -> &TensorKind {
        &self.kind
    }

    /// Text form as it appears after `map=` in a serialized motif.
    pub fn text(&self) -> String {
        text::tensor_text(self, false)
    }

    /// The dense 2^arity x 2^arity matrix for the given parameters.
    /// Site order inside the tuple is most-significant first.
    pub fn matrix(&self, params: &[f64]) -> Result<OpMatrix, DslError> {
        if params.len() != self.param_slots {
            return Err(DslError::ParamLength {
                expected: self.param_slots,
                got: params.len(),
            });
        }
        let one = Complex64::new(1.0, 0.0);
        let m = match &self.kind {
            TensorKind::PauliRotation(axis) => {
                let (c, s) = ((params[0] / 2.0).cos(), (params[0] / 2.0).sin());
                let p = axis.matrix();
                let minus_is = Complex64::new(0.0, -s);
                OpMatrix::from_fn(2, 2, |r, k| {
                    let id = if r == k { one * c } else { Complex64::new(0.0, 0.0) };
                    id + minus_is * p[r][k]
                })
            }
            TensorKind::PauliCoupling(a, b) => {
                let (c, s) = ((params[0] / 2.0).cos(), (params[0] / 2.0).sin());
                let kron = kron2(a.matrix(), b.matrix());
                let is = Complex64::new(0.0, s);
                OpMatrix::from_fn(4, 4, |r, k| {
                    let id = if r == k { one * c } else { Complex64::new(0.0, 0.0) };
                    id + is * kron[r][k]
                })
            }
            TensorKind::LadderAffine(op) => {
                let p = op.matrix();
                OpMatrix::from_fn(2, 2, |r, k| {
                    let id = if r == k { one } else { Complex64::new(0.0, 0.0) };
                    id + p[r][k] * params[0]
                })
            }
            TensorKind::LadderCoupling(a, b) => {
                let kron = kron2(a.matrix(), b.matrix());
                let x = params[0];
                // Z(x)Z squares to the identity; every other product is nilpotent.
                let (ci, cs) = if *a == LadderOp::Z && *b == LadderOp::Z {
                    (x.cosh(), x.sinh())
                } else {
                    (1.0, x)
                };
                OpMatrix::from_fn(4, 4, |r, k| {
                    let id = if r == k { one * ci } else { Complex64::new(0.0, 0.0) };
                    id + kron[r][k] * cs
                })
            }
            TensorKind::Nested(net) => {
                let sub_params: Vec<f64> = if net.tie {
                    vec![params.first().copied().unwrap_or(0.0); net.program.num_params]
                } else {
                    params.to_vec()
                };
                sim::contract_program(&net.program, &sub_params)
                    .map_err(|e| DslError::Nested(e.to_string()))?
            }
        };
        Ok(m)
    }
}

impl fmt::Display for TensorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

fn kron2(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 4]; 4] {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (r, row) in out.iter_mut().enumerate() {
        for (k, v) in row.iter_mut().enumerate() {
            *v = a[r / 2][k / 2] * b[r % 2][k % 2];
        }
    }
    out
}

/// Promote a motif to an `n_sub`-site tensor named `name`.
pub fn promote(network: &Motif, n_sub: usize, name: &str) -> Result<Arc<TensorSpec>, DslError> {
    TensorSpec::nested(network.clone(), n_sub, Some(name.to_string())).map(Arc::new)
}

/// [`promote`] with all sub-network parameters tied to one slot.
pub fn promote_tied(
    network: &Motif,
    n_sub: usize,
    name: &str,
) -> Result<Arc<TensorSpec>, DslError> {
    TensorSpec::nested_tied(network.clone(), n_sub, Some(name.to_string())).map(Arc::new)
}
