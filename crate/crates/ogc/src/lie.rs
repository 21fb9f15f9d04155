//! The insertion bracket on the dual complex and its one-dimensional
//! extension by the empty graph.
//!
//! Inserting g2 at a vertex x of g1 sums over all reattachments of the edges
//! incident to x onto vertices of g2; the composite keeps g1's vertex order
//! with g2's block spliced in at x and concatenates the edge lists, and every
//! sign comes from pushing the composite through canonicalization. Results
//! producing directed cycles are discarded. The bracket is validated by the
//! antisymmetry, Jacobi, derivation and involution-equivariance checks
//! rather than by decree.

use num_rational::Rational64;
use num_traits::Zero;
use std::collections::BTreeMap;

use crate::basis::enumerate_basis;
use crate::canon::{automorphism_report, canonicalize, CanonOutcome, GraphClass, Parity};
use crate::complex::{differential, grade, Chain};
use crate::error::OgcError;
use crate::graph::{LabeledGraph, Vertex};

/// Insert `inner` into every vertex of `outer`, in all ways.
pub fn insert(outer: &GraphClass, inner: &GraphClass, d: i64) -> Result<Chain, OgcError> {
    let parity = Parity::of(d);
    let g1 = &outer.canonical;
    let g2 = &inner.canonical;
    let (v1, v2) = (g1.vertex_count(), g2.vertex_count());
    let mut out = Chain::zero();
    for x in 1..=v1 {
        // Koszul sign of carrying the inserted vertex block past the vertices
        // after the slot; for odd d the vertices are the signed letters and
        // the block changes the letter count by v2 - 1. Edges are appended at
        // the end of the list, so the even case needs no slot-dependent sign.
        let slot_sign = match parity {
            Parity::Odd => {
                if ((v2 as i64 - 1) * (v1 as i64 - x as i64)) % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            Parity::Even => 1,
        };
        // Endpoint slots at x, in edge order: (edge index, is_tail).
        let mut slots: Vec<(usize, bool)> = Vec::new();
        for (j, &(t, h)) in g1.edges().iter().enumerate() {
            if t == x {
                slots.push((j, true));
            }
            if h == x {
                slots.push((j, false));
            }
        }
        let remap = |y: Vertex| -> Vertex {
            if y < x {
                y
            } else {
                y + v2 - 1
            }
        };
        let assignments = v2 as usize;
        let total = assignments.pow(slots.len() as u32);
        for code in 0..total {
            let mut choice = Vec::with_capacity(slots.len());
            let mut c = code;
            for _ in 0..slots.len() {
                choice.push((c % assignments) as Vertex + 1);
                c /= assignments;
            }
            let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(
                g1.edge_count() + g2.edge_count(),
            );
            for (j, &(t, h)) in g1.edges().iter().enumerate() {
                let nt = if t == x {
                    let slot = slots.iter().position(|&(jj, tail)| jj == j && tail).unwrap();
                    choice[slot] + x - 1
                } else {
                    remap(t)
                };
                let nh = if h == x {
                    let slot = slots.iter().position(|&(jj, tail)| jj == j && !tail).unwrap();
                    choice[slot] + x - 1
                } else {
                    remap(h)
                };
                edges.push((nt, nh));
            }
            for &(t, h) in g2.edges() {
                edges.push((t + x - 1, h + x - 1));
            }
            let g = LabeledGraph::new(v1 + v2 - 1, edges).expect("insertion stays in range");
            if !g.is_admissible() {
                continue;
            }
            if let CanonOutcome::Class(sc) = canonicalize(&g, parity)? {
                out.add_class(sc.class.canonical, sc.coefficient * slot_sign);
            }
        }
    }
    Ok(out)
}

fn degree_ogc_of(g: &LabeledGraph, d: i64) -> i64 {
    grade(d, g.vertex_count(), g.edge_count()).degree_ogc
}

/// Chains with rational coefficients, for the bracket algebra.
pub type RatChain = BTreeMap<LabeledGraph, Rational64>;

pub fn rat_chain_add(dst: &mut RatChain, g: LabeledGraph, c: Rational64) {
    if c.is_zero() {
        return;
    }
    match dst.entry(g) {
        std::collections::btree_map::Entry::Vacant(slot) => {
            slot.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut slot) => {
            *slot.get_mut() += c;
            if slot.get().is_zero() {
                slot.remove();
            }
        }
    }
}

pub fn chain_to_rat(c: &Chain) -> RatChain {
    c.terms
        .iter()
        .map(|(g, &v)| (g.clone(), Rational64::from_integer(v)))
        .collect()
}

fn insert_rat(a: &RatChain, b: &RatChain, d: i64) -> Result<RatChain, OgcError> {
    let parity = Parity::of(d);
    let mut out = RatChain::new();
    for (g1, &c1) in a {
        for (g2, &c2) in b {
            let chain = insert(
                &GraphClass { canonical: g1.clone(), parity },
                &GraphClass { canonical: g2.clone(), parity },
                d,
            )?;
            for (g, &c) in &chain.terms {
                rat_chain_add(&mut out, g.clone(), c1 * c2 * Rational64::from_integer(c));
            }
        }
    }
    Ok(out)
}

/// Graded degree of a homogeneous rational chain in the dual grading.
pub fn rat_chain_degree(c: &RatChain, d: i64) -> Option<i64> {
    let mut deg = None;
    for g in c.keys() {
        let this = degree_ogc_of(g, d);
        match deg {
            None => deg = Some(this),
            Some(x) if x == this => {}
            _ => return None,
        }
    }
    deg
}

/// Graded bracket [a, b] = a o b - (-1)^(|a||b|) b o a on homogeneous chains.
pub fn bracket(a: &RatChain, b: &RatChain, d: i64) -> Result<RatChain, OgcError> {
    let da = rat_chain_degree(a, d).unwrap_or(0);
    let db = rat_chain_degree(b, d).unwrap_or(0);
    let koszul = if (da * db) % 2 == 0 { 1 } else { -1 };
    let mut out = insert_rat(a, b, d)?;
    let ba = insert_rat(b, a, d)?;
    for (g, c) in ba {
        rat_chain_add(&mut out, g, -Rational64::from_integer(koszul) * c);
    }
    Ok(out)
}

/// Vertex-splitting differential of the dual complex, as an operation on
/// graph chains.
///
/// On each slice this is the adjoint of edge contraction conjugated into the
/// orbit-sum normalization (weight aut(source)/aut(target), matching the
/// reattachment-sum convention of `insert`) with the Koszul layer sign
/// (-1)^degree. Diagonal conjugation and layer signs leave every rank and
/// Betti number equal to the plain transpose used in the complexes module;
/// this form is the one for which the bracket derivation identity holds on
/// the nose.
pub fn dual_differential(chain: &RatChain, d: i64) -> Result<RatChain, OgcError> {
    let Some((g0, _)) = chain.iter().next() else {
        return Ok(RatChain::new());
    };
    let (v, e) = (g0.vertex_count(), g0.edge_count());
    let layer = if grade(d, v, e).degree_ogc % 2 == 0 { 1 } else { -1 };
    let parity = Parity::of(d);
    let aut = |g: &LabeledGraph| -> Result<i64, OgcError> {
        Ok(automorphism_report(g, parity)?.group_size as i64)
    };
    let upper = enumerate_basis(d, v + 1, e + 1)?;
    let mut out = RatChain::new();
    for class in &upper.classes {
        let down = differential(class, d)?;
        let mut coeff = Rational64::zero();
        for (g, &c) in &down.terms {
            if let Some(x) = chain.get(g) {
                coeff += x
                    * Rational64::from_integer(c)
                    * Rational64::new(aut(g)?, aut(&class.canonical)?);
            }
        }
        rat_chain_add(
            &mut out,
            class.canonical.clone(),
            coeff * Rational64::from_integer(layer),
        );
    }
    Ok(out)
}

/// Element of the extension by the empty graph: a scalar multiple of the
/// unit plus a body chain.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExtElement {
    pub scalar: Rational64,
    pub body: RatChain,
}

impl ExtElement {
    pub fn unit() -> ExtElement {
        ExtElement { scalar: Rational64::from_integer(1), body: RatChain::new() }
    }

    pub fn from_chain(c: &Chain) -> ExtElement {
        ExtElement { scalar: Rational64::zero(), body: chain_to_rat(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() && self.body.is_empty()
    }
}

/// Bracket with the unit: [1, G] = 2 (#V - #E) G, extended linearly.
pub fn unit_bracket(c: &RatChain) -> RatChain {
    let mut out = RatChain::new();
    for (g, &coeff) in c {
        let factor = 2 * (g.vertex_count() as i64 - g.edge_count() as i64);
        rat_chain_add(&mut out, g.clone(), coeff * Rational64::from_integer(factor));
    }
    out
}

/// Bilinear extension of the bracket to the one-dimensional extension:
/// [1,1] = 0, [1,G] = 2(#V-#E) G, [G,1] = -[1,G].
pub fn ext_bracket(a: &ExtElement, b: &ExtElement, d: i64) -> Result<ExtElement, OgcError> {
    let mut body = bracket(&a.body, &b.body, d)?;
    for (g, c) in unit_bracket(&b.body) {
        rat_chain_add(&mut body, g, a.scalar * c);
    }
    for (g, c) in unit_bracket(&a.body) {
        rat_chain_add(&mut body, g, -b.scalar * c);
    }
    Ok(ExtElement { scalar: Rational64::zero(), body })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{double_edge, triple_edge};

    fn rc(g: &LabeledGraph) -> RatChain {
        let mut c = RatChain::new();
        c.insert(g.clone(), Rational64::from_integer(1));
        c
    }

    #[test]
    fn insert_double_into_double() {
        let parity = Parity::of(3);
        let g2 = GraphClass { canonical: double_edge(), parity };
        let chain = insert(&g2, &g2, 3).unwrap();
        // All survivors live in the (3, 4) slice.
        for g in chain.terms.keys() {
            assert_eq!(g.vertex_count(), 3);
            assert_eq!(g.edge_count(), 4);
            assert!(g.is_admissible());
        }
    }

    #[test]
    fn bracket_antisymmetry() {
        let x = rc(&double_edge());
        let y = rc(&triple_edge());
        let d = 3;
        let xy = bracket(&x, &y, d).unwrap();
        let yx = bracket(&y, &x, d).unwrap();
        let dx = rat_chain_degree(&x, d).unwrap();
        let dy = rat_chain_degree(&y, d).unwrap();
        let sign = if (dx * dy) % 2 == 0 { 1 } else { -1 };
        let mut expect = RatChain::new();
        for (g, c) in yx {
            rat_chain_add(&mut expect, g, -Rational64::from_integer(sign) * c);
        }
        assert_eq!(xy, expect);
    }

    #[test]
    fn unit_rules() {
        let one = ExtElement::unit();
        assert!(ext_bracket(&one, &one, 3).unwrap().is_zero());
        // [1, double edge] = 2 (2 - 2) = 0.
        let g = ExtElement { scalar: Rational64::zero(), body: rc(&double_edge()) };
        assert!(ext_bracket(&one, &g, 3).unwrap().is_zero());
        // [1, G] = -2 (loop order - 1) G in general.
        let t = rc(&triple_edge());
        let ub = unit_bracket(&t);
        assert_eq!(
            ub.get(&triple_edge()).copied(),
            Some(Rational64::from_integer(-2))
        );
    }
}
