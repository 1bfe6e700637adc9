//! Random genomes and the genetic operators. Genomes are kept flat: a plain
//! sequence of primitives.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::OperatorBasis;
use crate::ansatz::tied_block;
use crate::dsl::{Boundary, Cycle, Motif, Node, Pattern, Pivot, Primitive, TensorSpec};

const AXES: [char; 3] = ['X', 'Y', 'Z'];
const LADDER: [char; 3] = ['P', 'M', 'Z'];
/// Single-hub pivot patterns offered to random primitives.
const PIVOTS: [&str; 2] = ["1*", "*1"];
/// Mask edits only arise on parsed genomes; random ones never carry masks.
const MASKS: [&str; 3] = ["!*", "10", "*"];

/// Every mapping a genome may use under `basis`.
pub fn tensor_pool(basis: OperatorBasis) -> Vec<Arc<TensorSpec>> {
    let id = |s: String| Arc::new(TensorSpec::from_id(&s).expect("pool id"));
    let mut out = Vec::new();
    match basis {
        OperatorBasis::Pauli => {
            out.extend(AXES.iter().map(|a| id(format!("e{a}"))));
            for a in AXES {
                for b in AXES {
                    out.push(id(format!("e{a}{b}")));
                }
            }
            for r in AXES {
                for a in AXES {
                    for b in AXES {
                        out.push(tied_block(&format!("e{r}"), &format!("e{a}{b}")));
                    }
                }
            }
        }
        OperatorBasis::Ladder => {
            out.extend(LADDER.iter().map(|a| id(format!("l{a}"))));
            for a in LADDER {
                for b in LADDER {
                    out.push(id(format!("x{a}{b}")));
                }
            }
        }
    }
    out
}

/// Small integers with most of the mass on `base`.
fn biased<R: Rng>(rng: &mut R, base: usize, max: usize) -> usize {
    if rng.gen_bool(0.7) {
        base
    } else {
        rng.gen_range(base..=max)
    }
}

fn random_boundary<R: Rng>(rng: &mut R) -> Boundary {
    if rng.gen_bool(0.85) {
        Boundary::Periodic
    } else {
        Boundary::Open
    }
}

fn random_pattern<R: Rng>(rng: &mut R, for_mask: bool) -> Pattern {
    let choices: &[&str] = if for_mask { &MASKS } else { &PIVOTS };
    Pattern::parse(choices.choose(rng).expect("nonempty")).expect("valid pattern")
}

/// One random tensor primitive: usually a cycle, sometimes a pivot.
pub fn random_primitive<R: Rng>(pool: &[Arc<TensorSpec>], rng: &mut R) -> Primitive {
    let mapping = pool.choose(rng).expect("nonempty pool").clone();
    if rng.gen_bool(0.08) {
        Primitive::Pivot(Pivot {
            pattern: random_pattern(rng, false),
            mapping,
            shared: true,
        })
    } else {
        Primitive::Cycle(Cycle {
            stride: biased(rng, 1, 3),
            step: biased(rng, 1, 2),
            offset: biased(rng, 0, 1),
            boundary: random_boundary(rng),
            mapping,
            shared: true,
        })
    }
}

/// A motif of `min..=max` random primitives.
pub fn random_motif<R: Rng>(pool: &[Arc<TensorSpec>], min: usize, max: usize, rng: &mut R) -> Motif {
    let len = rng.gen_range(min..=max);
    Motif::from_primitives((0..len).map(|_| random_primitive(pool, rng)))
}

fn edit_property<R: Rng>(p: &mut Primitive, pool: &[Arc<TensorSpec>], rng: &mut R) {
    match p {
        Primitive::Cycle(c) => match rng.gen_range(0..4) {
            0 => c.stride = reroll(rng, c.stride, 1, 3),
            1 => c.step = reroll(rng, c.step, 1, 2),
            2 => c.offset = reroll(rng, c.offset, 0, 1),
            _ => {
                c.boundary = match c.boundary {
                    Boundary::Periodic => Boundary::Open,
                    Boundary::Open => Boundary::Periodic,
                }
            }
        },
        Primitive::Pivot(v) => v.pattern = random_pattern(rng, false),
        Primitive::Mask(m) => *m = random_pattern(rng, true),
        Primitive::Init(_) => *p = random_primitive(pool, rng),
    }
}

/// Uniform draw from lo..=hi different from `cur` (if possible).
fn reroll<R: Rng>(rng: &mut R, cur: usize, lo: usize, hi: usize) -> usize {
    let others: Vec<usize> = (lo..=hi).filter(|&v| v != cur).collect();
    others.choose(rng).copied().unwrap_or(cur)
}

fn swap_mapping<R: Rng>(p: &mut Primitive, pool: &[Arc<TensorSpec>], rng: &mut R) -> bool {
    let Some(m) = p.mapping_mut() else {
        return false;
    };
    let others: Vec<&Arc<TensorSpec>> = pool.iter().filter(|t| t.text() != m.text()).collect();
    match others.choose(rng) {
        Some(t) => {
            *m = Arc::clone(t);
            true
        }
        None => false,
    }
}

/// One uniformly chosen edit: property change, mapping swap, insertion or
/// deletion. Deleting from a length-1 motif falls back to a property edit.
pub fn mutate<R: Rng>(m: &Motif, pool: &[Arc<TensorSpec>], rng: &mut R) -> Motif {
    let mut prims = m.primitives();
    if prims.is_empty() {
        return Motif::from_primitives([random_primitive(pool, rng)]);
    }
    let at = rng.gen_range(0..prims.len());
    match rng.gen_range(0..4) {
        0 => edit_property(&mut prims[at], pool, rng),
        1 => {
            if !swap_mapping(&mut prims[at], pool, rng) {
                edit_property(&mut prims[at], pool, rng);
            }
        }
        2 => {
            let pos = rng.gen_range(0..=prims.len());
            prims.insert(pos, random_primitive(pool, rng));
        }
        _ => {
            if prims.len() > 1 {
                prims.remove(at);
            } else {
                edit_property(&mut prims[at], pool, rng);
            }
        }
    }
    Motif::from_primitives(prims)
}

fn section<R: Rng>(nodes: &[Node], rng: &mut R) -> Vec<Node> {
    if nodes.is_empty() {
        return Vec::new();
    }
    let start = rng.gen_range(0..nodes.len());
    let end = rng.gen_range(start + 1..=nodes.len());
    nodes[start..end].to_vec()
}

/// A random contiguous section of each parent, concatenated.
pub fn crossover<R: Rng>(a: &Motif, b: &Motif, rng: &mut R) -> Motif {
    let a = a.flatten();
    let b = b.flatten();
    let mut nodes = section(&a.nodes, rng);
    nodes.extend(section(&b.nodes, rng));
    Motif::new(nodes)
}
