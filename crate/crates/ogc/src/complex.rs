//! The edge-contraction differential of the full oriented graph complex, the
//! grading bookkeeping, and matrix assembly.
//!
//! Sign convention for contracting edge `a` of a representative: relabel so
//! the contracted edge is the last one and its head is the last vertex (the
//! two rotations carry the coinvariant sign), then delete both and reattach
//! the head's edges to the tail with every surviving label unchanged.

use std::collections::BTreeMap;

use crate::basis::BasisSlice;
use crate::canon::{canonicalize, CanonOutcome, GraphClass, Parity, SignedClass};
use crate::error::OgcError;
use crate::graph::{LabeledGraph, Vertex};
use crate::matrix::ExactSparseMatrix;

/// Formal integer combination of classes inside one ambient slice.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    pub terms: BTreeMap<LabeledGraph, i64>,
}

impl Chain {
    pub fn zero() -> Chain {
        Chain::default()
    }

    pub fn add_class(&mut self, g: LabeledGraph, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if *slot.get() == 0 {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &Chain, scale: i64) {
        for (g, &c) in &other.terms {
            self.add_class(g.clone(), c * scale);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Graded degrees: the contraction differential has degree +1 in the graph
/// complex grading, vertex splitting has degree +1 in the dual grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grading {
    pub loop_order: i64,
    pub degree_og: i64,
    pub degree_ogc: i64,
}

pub fn grade(d: i64, v: u16, e: usize) -> Grading {
    let (v, e) = (v as i64, e as i64);
    Grading {
        loop_order: e - v + 1,
        degree_og: (d - 1) * e - d * (v - 1),
        degree_ogc: d * (v - 1) - (d - 1) * e,
    }
}

/// Contract one edge of a signed class. Returns Zero when the contraction
/// produces a directed cycle or a passing vertex, or when the resulting
/// class dies in coinvariants.
pub fn contract_edge(
    sc: &SignedClass,
    edge_label: usize,
    d: i64,
) -> Result<CanonOutcome, OgcError> {
    let g = &sc.class.canonical;
    let e = g.edge_count();
    let v = g.vertex_count();
    if edge_label == 0 || edge_label > e {
        return Err(OgcError::EdgeOutOfRange { label: edge_label, count: e });
    }
    let parity = Parity::of(d);
    let (tail, head) = g.edges()[edge_label - 1];

    // Rotation signs for moving the edge to position e and its head to
    // position v. Only the twisted side contributes for each parity.
    let edge_rot_sign = if (e - edge_label) % 2 == 0 { 1 } else { -1 };
    let vertex_rot_sign = if (v - head) % 2 == 0 { 1 } else { -1 };
    let rot_sign = match parity {
        Parity::Even => edge_rot_sign,
        Parity::Odd => vertex_rot_sign,
    };

    // Build the contracted graph directly: drop the chosen edge, merge head
    // into tail, relabel vertices above `head` down by one. Survivor edges
    // keep their relative order, which matches the rotation convention.
    let remap = |x: Vertex| -> Vertex {
        if x == head {
            if tail > head {
                tail - 1
            } else {
                tail
            }
        } else if x > head {
            x - 1
        } else {
            x
        }
    };
    let mut new_edges = Vec::with_capacity(e - 1);
    for (j, &(t, h)) in g.edges().iter().enumerate() {
        if j + 1 == edge_label {
            continue;
        }
        let (nt, nh) = (remap(t), remap(h));
        if nt == nh {
            // Parallel partner collapses to a self-loop: a directed cycle.
            return Ok(CanonOutcome::Zero);
        }
        new_edges.push((nt, nh));
    }
    let contracted = LabeledGraph::new(v - 1, new_edges).expect("contraction stays in range");
    if contracted.has_directed_cycle() || contracted.passing_vertex().is_some() {
        return Ok(CanonOutcome::Zero);
    }
    debug_assert!(contracted.is_admissible());
    Ok(match canonicalize(&contracted, parity)? {
        CanonOutcome::Zero => CanonOutcome::Zero,
        CanonOutcome::Class(out) => CanonOutcome::Class(SignedClass {
            class: out.class,
            coefficient: out.coefficient * rot_sign * sc.coefficient,
        }),
    })
}

/// Differential of one class: the signed sum of all edge contractions,
/// landing in the (v-1, e-1) slice.
pub fn differential(class: &GraphClass, d: i64) -> Result<Chain, OgcError> {
    let sc = SignedClass { class: class.clone(), coefficient: 1 };
    let mut chain = Chain::zero();
    for label in 1..=class.canonical.edge_count() {
        if let CanonOutcome::Class(out) = contract_edge(&sc, label, d)? {
            chain.add_class(out.class.canonical, out.coefficient);
        }
    }
    Ok(chain)
}

/// Matrix of the differential from `source` (v, e) to `target` (v-1, e-1) in
/// the stored basis orders: rows index the target classes, columns the
/// source classes.
pub fn differential_matrix(
    source: &BasisSlice,
    target: &BasisSlice,
    d: i64,
) -> Result<ExactSparseMatrix, OgcError> {
    let mut m = ExactSparseMatrix::zero(target.dim(), source.dim());
    for (col, class) in source.classes.iter().enumerate() {
        let chain = differential(class, d)?;
        for (g, &coeff) in &chain.terms {
            let row = target.index_of(g).ok_or_else(|| {
                OgcError::MissingBasis(format!(
                    "target slice (v={}, e={}) lacks {g}",
                    target.v, target.e
                ))
            })?;
            m.add(row, col, coeff);
        }
    }
    Ok(m)
}

/// The dual complex is the transpose over field coefficients.
pub fn dual_matrix(m: &ExactSparseMatrix) -> ExactSparseMatrix {
    m.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::enumerate_basis;
    use crate::graph::{double_edge, fan, triple_edge};

    fn class_of(g: &LabeledGraph, d: i64) -> SignedClass {
        canonicalize(g, Parity::of(d)).unwrap().into_option().unwrap()
    }

    #[test]
    fn double_edge_contractions_vanish() {
        let sc = class_of(&double_edge(), 3);
        for label in 1..=2 {
            assert_eq!(contract_edge(&sc, label, 3).unwrap(), CanonOutcome::Zero);
        }
        assert!(differential(&sc.class, 3).unwrap().is_zero());
    }

    #[test]
    fn fan_contracts_to_triple_edge() {
        let sc = class_of(&fan(), 3);
        // Contracting the (1,3) spine edge merges vertex 3 into 1 and leaves
        // the triple edge; the other contractions produce cycles.
        let chain = differential(&sc.class, 3).unwrap();
        assert_eq!(chain.terms.len(), 1);
        let (g, &c) = chain.terms.iter().next().unwrap();
        assert_eq!(g, &triple_edge());
        assert_eq!(c.abs(), 1);
    }

    #[test]
    fn edge_label_out_of_range() {
        let sc = class_of(&double_edge(), 3);
        assert!(matches!(
            contract_edge(&sc, 3, 3),
            Err(OgcError::EdgeOutOfRange { .. })
        ));
    }

    #[test]
    fn grade_formulas() {
        let g = grade(3, 7, 9);
        assert_eq!(g.degree_ogc, 0);
        assert_eq!(g.loop_order, 3);
        assert_eq!(grade(2, 4, 6).degree_og, 0);
        // Contraction raises the graph-side degree by one.
        let before = grade(3, 4, 5);
        let after = grade(3, 3, 4);
        assert_eq!(after.degree_og - before.degree_og, 1);
        assert_eq!(before.degree_og + before.degree_ogc, 0);
    }

    #[test]
    fn shape_contract() {
        let src = enumerate_basis(3, 2, 2).unwrap();
        let tgt = enumerate_basis(3, 1, 1).unwrap();
        let m = differential_matrix(&src, &tgt, 3).unwrap();
        assert_eq!((m.rows, m.cols), (0, 1));
        assert!(m.is_zero());
    }

    #[test]
    fn differential_squares_to_zero_small() {
        for d in [2i64, 3] {
            for v in 2..=5u16 {
                for e in 2..=6usize {
                    let s2 = enumerate_basis(d, v, e).unwrap();
                    if s2.dim() == 0 || v < 3 {
                        continue;
                    }
                    let s1 = enumerate_basis(d, v - 1, e - 1).unwrap();
                    let s0 = enumerate_basis(d, v - 2, e.saturating_sub(2)).unwrap();
                    let d2 = differential_matrix(&s2, &s1, d).unwrap();
                    let d1 = differential_matrix(&s1, &s0, d).unwrap();
                    assert!(d1.mul(&d2).is_zero(), "d^2 != 0 at d={d} ({v},{e})");
                }
            }
        }
    }

    #[test]
    fn well_defined_on_relabelings() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for d in [2i64, 3] {
            let slice = enumerate_basis(d, 4, 5).unwrap();
            for class in slice.classes.iter().take(4) {
                let base = differential(class, d).unwrap();
                for _ in 0..20 {
                    let v = class.canonical.vertex_count() as usize;
                    let e = class.canonical.edge_count();
                    let mut vperm: Vec<Vertex> = (1..=v as u16).collect();
                    vperm.shuffle(&mut rng);
                    let mut eperm: Vec<usize> = (1..=e).collect();
                    eperm.shuffle(&mut rng);
                    let relabeled = class.canonical.relabel(&vperm, &eperm);
                    let sc = canonicalize(&relabeled, Parity::of(d))
                        .unwrap()
                        .into_option()
                        .unwrap();
                    // differential(pi g) = sign(pi) differential(g); the sign
                    // is exactly the canonicalization coefficient.
                    let mut via = Chain::zero();
                    for label in 1..=e {
                        let raw = SignedClass {
                            class: GraphClass {
                                canonical: relabeled.clone(),
                                parity: Parity::of(d),
                            },
                            coefficient: 1,
                        };
                        if let CanonOutcome::Class(out) = contract_edge(&raw, label, d).unwrap() {
                            via.add_class(out.class.canonical, out.coefficient);
                        }
                    }
                    let mut expected = Chain::zero();
                    expected.add(&base, sc.coefficient);
                    assert_eq!(via, expected);
                }
            }
        }
    }
}
