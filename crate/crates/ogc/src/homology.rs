//! Exact Betti numbers and quasi-isomorphism certification.
//!
//! Ranks run over two large primes; any disagreement escalates to the
//! rational oracle. The induced map on homology is decided by the standard
//! cycle/boundary rank identity, entirely over the prime field.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::basis::{Flavor, Part};
use crate::error::OgcError;
use crate::matrix::{
    rank_mod_p, rational_rank, Elimination, ExactSparseMatrix, DEFAULT_PRIMES,
};

/// A finite complex graded by consecutive positions with degree +1 maps:
/// `maps[k]` sends position k to position k+1 and has shape
/// (dims[k+1], dims[k]).
#[derive(Clone, Debug)]
pub struct GradedComplex {
    pub dims: Vec<usize>,
    pub maps: Vec<ExactSparseMatrix>,
}

impl GradedComplex {
    pub fn new(dims: Vec<usize>, maps: Vec<ExactSparseMatrix>) -> GradedComplex {
        assert_eq!(maps.len() + 1, dims.len(), "one map between consecutive positions");
        for (k, m) in maps.iter().enumerate() {
            assert_eq!((m.rows, m.cols), (dims[k + 1], dims[k]), "map shape at {k}");
        }
        GradedComplex { dims, maps }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// The differentials must compose to zero; exact integer check.
    pub fn verify_squares_to_zero(&self) -> bool {
        self.maps
            .windows(2)
            .all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// Transpose complex: reverses the grading and transposes every map.
    pub fn dual(&self) -> GradedComplex {
        let dims: Vec<usize> = self.dims.iter().rev().copied().collect();
        let maps: Vec<ExactSparseMatrix> =
            self.maps.iter().rev().map(|m| m.transpose()).collect();
        GradedComplex { dims, maps }
    }
}

/// Rank with the two-prime protocol and rational escalation.
pub fn rank_with_escalation(m: &ExactSparseMatrix, primes: &[u64]) -> Result<usize, OgcError> {
    assert!(!primes.is_empty());
    let r0 = rank_mod_p(m, primes[0]);
    for &p in &primes[1..] {
        if rank_mod_p(m, p) != r0 {
            return rational_rank(m)
                .map_err(|_| OgcError::PrimeDisagreement(primes[0], p));
        }
    }
    Ok(r0)
}

/// Betti numbers at every position of a finite complex.
pub fn betti_numbers(c: &GradedComplex, primes: &[u64]) -> Result<Vec<usize>, OgcError> {
    let ranks: Vec<usize> = c
        .maps
        .iter()
        .map(|m| rank_with_escalation(m, primes))
        .collect::<Result<_, _>>()?;
    let mut betti = Vec::with_capacity(c.dims.len());
    for k in 0..c.dims.len() {
        let out = if k < ranks.len() { ranks[k] } else { 0 };
        let into = if k > 0 { ranks[k - 1] } else { 0 };
        let b = c.dims[k]
            .checked_sub(out)
            .and_then(|x| x.checked_sub(into))
            .expect("rank bound violated");
        betti.push(b);
    }
    Ok(betti)
}

/// Alternating sums of dimensions and Betti numbers agree on any finite
/// complex; exposed as a consistency guard for complete ranges.
pub fn euler_check(c: &GradedComplex, primes: &[u64]) -> Result<bool, OgcError> {
    let betti = betti_numbers(c, primes)?;
    let dim_sum: i64 = c
        .dims
        .iter()
        .enumerate()
        .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum();
    let betti_sum: i64 = betti
        .iter()
        .enumerate()
        .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum();
    Ok(dim_sum == betti_sum)
}

fn modp_columns_rank(nrows: usize, cols: &[Vec<(usize, u64)>], p: u64) -> usize {
    let mut m = ExactSparseMatrix::zero(nrows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for &(i, v) in col {
            let lifted = crate::matrix::balanced_lift(v % p, p);
            m.add(i, j, lifted);
        }
    }
    rank_mod_p(&m, p)
}

/// Decide over one prime whether a chain map induces an isomorphism on
/// homology in every position. Returns per-position
/// (dim H source, dim H target, induced rank).
fn induced_ranks_mod_p(
    f: &[ExactSparseMatrix],
    source: &GradedComplex,
    target: &GradedComplex,
    p: u64,
) -> Vec<(usize, usize, usize)> {
    let n = source.len();
    let src_elims: Vec<Elimination> =
        source.maps.iter().map(|m| Elimination::run(m, p)).collect();
    let tgt_ranks: Vec<usize> = target.maps.iter().map(|m| rank_mod_p(m, p)).collect();
    let src_ranks: Vec<usize> = src_elims.iter().map(|e| e.rank).collect();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let s_out = if k < src_ranks.len() { src_ranks[k] } else { 0 };
        let s_in = if k > 0 { src_ranks[k - 1] } else { 0 };
        let h_s = source.dims[k] - s_out - s_in;
        let t_out = if k < tgt_ranks.len() { tgt_ranks[k] } else { 0 };
        let t_in = if k > 0 { tgt_ranks[k - 1] } else { 0 };
        let h_t = target.dims[k] - t_out - t_in;

        // Cycle basis of the source at position k.
        let kernel: Vec<Vec<(usize, u64)>> = if k < source.maps.len() {
            src_elims[k].kernel_basis()
        } else {
            (0..source.dims[k]).map(|i| vec![(i, 1u64)]).collect()
        };
        // Push cycles through f_k.
        let mut f_rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); f[k].cols];
        for (i, j, v) in f[k].iter() {
            f_rows[j].push((i, v));
        }
        let mut pushed: Vec<Vec<(usize, u64)>> = Vec::with_capacity(kernel.len());
        for z in &kernel {
            let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
            for &(j, zc) in z {
                for &(i, fv) in &f_rows[j] {
                    let fv = (fv as i128).rem_euclid(p as i128) as u64;
                    let add = (zc as u128 * fv as u128 % p as u128) as u64;
                    let e = acc.entry(i).or_insert(0);
                    *e = (*e + add) % p;
                }
            }
            acc.retain(|_, v| *v != 0);
            pushed.push(acc.into_iter().collect());
        }
        // Boundaries of the target at position k.
        let mut all_cols = pushed;
        if k > 0 {
            let mut bnd_cols: Vec<Vec<(usize, u64)>> = vec![Vec::new(); target.maps[k - 1].cols];
            for (i, j, v) in target.maps[k - 1].iter() {
                bnd_cols[j].push((i, (v as i128).rem_euclid(p as i128) as u64));
            }
            all_cols.extend(bnd_cols);
        }
        let combined = modp_columns_rank(target.dims[k], &all_cols, p);
        let induced = combined - t_in;
        out.push((h_s, h_t, induced));
    }
    out
}

/// Verify that `f` is a chain map and induces an isomorphism on homology in
/// every position. The chain-map identity is checked first, exactly over the
/// integers; its failure is an error, not `false`.
pub fn verify_quasi_iso(
    f: &[ExactSparseMatrix],
    source: &GradedComplex,
    target: &GradedComplex,
    primes: &[u64],
) -> Result<bool, OgcError> {
    assert_eq!(f.len(), source.len());
    assert_eq!(f.len(), target.len());
    for k in 0..source.maps.len() {
        let lhs = target.maps[k].mul(&f[k]);
        let rhs = f[k + 1].mul(&source.maps[k]);
        if lhs != rhs {
            return Err(OgcError::NotAChainMap(format!("degree {k}")));
        }
    }
    let first = induced_ranks_mod_p(f, source, target, primes[0]);
    for &p in &primes[1..] {
        let again = induced_ranks_mod_p(f, source, target, p);
        if again != first {
            return Err(OgcError::PrimeDisagreement(primes[0], p));
        }
    }
    Ok(first.iter().all(|&(hs, ht, r)| hs == ht && r == hs))
}

/// Keyed Betti table for export.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct BettiTable {
    pub entries: BTreeMap<String, BettiEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BettiEntry {
    pub d: i64,
    pub v: u16,
    pub e: usize,
    pub flavor: Flavor,
    pub part: Part,
    pub dim: usize,
    pub betti: usize,
}

impl BettiTable {
    pub fn insert(&mut self, entry: BettiEntry) {
        let key = format!(
            "d{}_v{}_e{}_{}_{}",
            entry.d,
            entry.v,
            entry.e,
            entry.flavor.as_str(),
            entry.part.as_str()
        );
        self.entries.insert(key, entry);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("d,v,e,flavor,part,dim,betti\n");
        for e in self.entries.values() {
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                e.d,
                e.v,
                e.e,
                e.flavor.as_str(),
                e.part.as_str(),
                e.dim,
                e.betti
            ));
        }
        s
    }
}

pub fn default_primes() -> Vec<u64> {
    DEFAULT_PRIMES.to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_step(m: ExactSparseMatrix) -> GradedComplex {
        let dims = vec![m.cols, m.rows];
        GradedComplex::new(dims, vec![m])
    }

    #[test]
    fn betti_of_zero_map() {
        let c = two_step(ExactSparseMatrix::zero(3, 2));
        let b = betti_numbers(&c, &DEFAULT_PRIMES).unwrap();
        assert_eq!(b, vec![2, 3]);
        assert!(euler_check(&c, &DEFAULT_PRIMES).unwrap());
    }

    #[test]
    fn betti_of_iso() {
        let c = two_step(ExactSparseMatrix::identity(4));
        assert_eq!(betti_numbers(&c, &DEFAULT_PRIMES).unwrap(), vec![0, 0]);
    }

    #[test]
    fn identity_is_quasi_iso() {
        let m = ExactSparseMatrix::from_entries(2, 3, [(0, 0, 1), (1, 2, 2)]);
        let c = two_step(m);
        let f = vec![
            ExactSparseMatrix::identity(3),
            ExactSparseMatrix::identity(2),
        ];
        assert!(verify_quasi_iso(&f, &c, &c, &DEFAULT_PRIMES).unwrap());
    }

    #[test]
    fn zero_map_is_not_quasi_iso() {
        let c = two_step(ExactSparseMatrix::zero(2, 2));
        let f = vec![ExactSparseMatrix::zero(2, 2), ExactSparseMatrix::zero(2, 2)];
        assert!(!verify_quasi_iso(&f, &c, &c, &DEFAULT_PRIMES).unwrap());
    }

    #[test]
    fn non_chain_map_is_an_error() {
        let m = ExactSparseMatrix::from_entries(1, 1, [(0, 0, 1)]);
        let c = two_step(m);
        let f = vec![
            ExactSparseMatrix::from_entries(1, 1, [(0, 0, 1)]),
            ExactSparseMatrix::from_entries(1, 1, [(0, 0, 2)]),
        ];
        assert!(matches!(
            verify_quasi_iso(&f, &c, &c, &DEFAULT_PRIMES),
            Err(OgcError::NotAChainMap(_))
        ));
    }

    #[test]
    fn dual_preserves_betti() {
        let m = ExactSparseMatrix::from_entries(3, 4, [(0, 0, 1), (1, 1, 3), (0, 2, -1)]);
        let c = two_step(m);
        let b = betti_numbers(&c, &DEFAULT_PRIMES).unwrap();
        let bd = betti_numbers(&c.dual(), &DEFAULT_PRIMES).unwrap();
        let rev: Vec<usize> = b.iter().rev().copied().collect();
        assert_eq!(bd, rev);
    }

    #[test]
    fn quasi_iso_with_acyclic_padding() {
        // Source 0 -> K -> 0; target 0 -> K^2 -> K where the second summand
        // maps isomorphically onto the end. Including into the first summand
        // hits the homology generator, so the map is a quasi-isomorphism.
        let source = GradedComplex::new(
            vec![0, 1, 0],
            vec![ExactSparseMatrix::zero(1, 0), ExactSparseMatrix::zero(0, 1)],
        );
        let d1 = ExactSparseMatrix::from_entries(1, 2, [(0, 1, 1)]);
        let target = GradedComplex::new(
            vec![0, 2, 1],
            vec![ExactSparseMatrix::zero(2, 0), d1],
        );
        assert!(target.verify_squares_to_zero());
        let f = vec![
            ExactSparseMatrix::zero(0, 0),
            ExactSparseMatrix::from_entries(2, 1, [(0, 0, 1)]),
            ExactSparseMatrix::zero(1, 0),
        ];
        assert!(verify_quasi_iso(&f, &source, &target, &DEFAULT_PRIMES).unwrap());
        // Including a boundary-killed vector instead fails.
        let g = vec![
            ExactSparseMatrix::zero(0, 0),
            ExactSparseMatrix::from_entries(2, 1, [(1, 0, 1)]),
            ExactSparseMatrix::zero(1, 0),
        ];
        assert!(matches!(
            verify_quasi_iso(&g, &source, &target, &DEFAULT_PRIMES),
            Err(OgcError::NotAChainMap(_))
        ));
    }
}
