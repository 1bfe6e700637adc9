//! Motifs of the reference ansatz family.

use std::sync::Arc;

use crate::dsl::{Motif, Primitive, TensorSpec};

fn pool(id: &str) -> Arc<TensorSpec> {
    Arc::new(TensorSpec::from_id(id).expect("built-in tensor id"))
}

fn cycle(mapping: Arc<TensorSpec>) -> Primitive {
    Primitive::cycle(1, 1, 0, mapping).expect("unit stride and step")
}

/// Two-site block: a rotation on the second site followed by a two-site
/// coupling, both driven by one shared angle.
pub fn tied_block(rotation: &str, coupling: &str) -> Arc<TensorSpec> {
    let sub = Motif::from_primitives([
        Primitive::cycle(1, 2, 1, pool(rotation)).expect("valid"),
        Primitive::cycle(1, 2, 0, pool(coupling)).expect("valid"),
    ]);
    Arc::new(TensorSpec::nested_tied(sub, 2, None).expect("two-site block instantiates"))
}

/// Rotate every site by the first angle, then sweep the entangling block
/// (rotation of site k+1 and coupling of k with k+1) around the ring.
/// Parameters: [phi, theta].
pub fn original() -> Motif {
    Motif::from_primitives([cycle(pool("eY")), cycle(tied_block("eY", "eZY"))])
}

/// Competing two-parameter ansatz: XY couplings around the ring, then a
/// rotation of every site. Parameters: [coupling angle, rotation angle].
pub fn xy_competitor() -> Motif {
    Motif::from_primitives([cycle(pool("eXY")), cycle(pool("eY"))])
}

/// Product state from one shared single-site rotation.
pub fn mean_field() -> Motif {
    Motif::from_primitives([cycle(pool("eY"))])
}

/// Ladder-basis two-parameter state: every site takes I + a sigma^-, then
/// exp(b Z Z) on every ring bond. Parameters: [a, b].
pub fn ladder() -> Motif {
    Motif::from_primitives([cycle(pool("lM")), cycle(pool("xZZ"))])
}
