//! Integer sparse matrices with exact rank over large prime fields and over
//! the rationals.
//!
//! Ranks are computed by sparse elimination with Markowitz-style pivoting;
//! the rational oracle is a fraction-free (Bareiss) elimination over big
//! integers, guarded by a size limit.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::OgcError;

/// Two fixed default primes near 2^31 for reproducible runs.
pub const DEFAULT_PRIMES: [u64; 2] = [2_147_483_629, 2_147_483_563];

/// Coordinate-format integer matrix. Entries are deduplicated and nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSparseMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), i64>,
}

impl ExactSparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactSparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.add(i, i, 1);
        }
        m
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Self {
        let mut m = Self::zero(rows, cols);
        for (i, j, v) in entries {
            m.add(i, j, v);
        }
        m
    }

    /// Accumulate into entry (i, j), dropping it when it cancels to zero.
    pub fn add(&mut self, i: usize, j: usize, v: i64) {
        assert!(i < self.rows && j < self.cols, "entry out of shape");
        if v == 0 {
            return;
        }
        let slot = self.entries.entry((i, j)).or_insert(0);
        *slot += v;
        if *slot == 0 {
            self.entries.remove(&(i, j));
        }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.entries.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> ExactSparseMatrix {
        let mut t = ExactSparseMatrix::zero(self.cols, self.rows);
        for (i, j, v) in self.iter() {
            t.add(j, i, v);
        }
        t
    }

    /// Exact integer product self * rhs.
    pub fn mul(&self, rhs: &ExactSparseMatrix) -> ExactSparseMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut rhs_rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); rhs.rows];
        for (i, j, v) in rhs.iter() {
            rhs_rows[i].push((j, v));
        }
        let mut out = ExactSparseMatrix::zero(self.rows, rhs.cols);
        for (i, k, a) in self.iter() {
            for &(j, b) in &rhs_rows[k] {
                out.add(i, j, a.checked_mul(b).expect("product overflow"));
            }
        }
        out
    }

    pub fn scaled(&self, c: i64) -> ExactSparseMatrix {
        let mut out = ExactSparseMatrix::zero(self.rows, self.cols);
        for (i, j, v) in self.iter() {
            out.add(i, j, v.checked_mul(c).expect("scale overflow"));
        }
        out
    }

    pub fn sub(&self, rhs: &ExactSparseMatrix) -> ExactSparseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (i, j, v) in rhs.iter() {
            out.add(i, j, -v);
        }
        out
    }

    /// Horizontal concatenation [self | rhs].
    pub fn hstack(&self, rhs: &ExactSparseMatrix) -> ExactSparseMatrix {
        assert_eq!(self.rows, rhs.rows);
        let mut out = ExactSparseMatrix::zero(self.rows, self.cols + rhs.cols);
        for (i, j, v) in self.iter() {
            out.add(i, j, v);
        }
        for (i, j, v) in rhs.iter() {
            out.add(i, self.cols + j, v);
        }
        out
    }

    /// Coordinate text export: `rows cols nnz`, then 1-indexed `i j value`.
    pub fn to_coord_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.nnz());
        for (i, j, v) in self.iter() {
            s.push_str(&format!("{} {} {}\n", i + 1, j + 1, v));
        }
        s
    }

    pub fn from_coord_text(text: &str) -> Result<Self, OgcError> {
        let mut nums = text.split_whitespace();
        let mut next = |what: &str| -> Result<i64, OgcError> {
            nums.next()
                .ok_or_else(|| OgcError::Io(format!("missing {what}")))?
                .parse::<i64>()
                .map_err(|e| OgcError::Io(e.to_string()))
        };
        let rows = next("rows")? as usize;
        let cols = next("cols")? as usize;
        let nnz = next("nnz")? as usize;
        let mut m = Self::zero(rows, cols);
        for _ in 0..nnz {
            let i = next("row")? as usize;
            let j = next("col")? as usize;
            let v = next("value")?;
            m.add(i - 1, j - 1, v);
        }
        Ok(m)
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Extended Euclid on i128.
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "not invertible");
    t.rem_euclid(p as i128) as u64
}

fn reduce_mod(v: i64, p: u64) -> u64 {
    (v as i128).rem_euclid(p as i128) as u64
}

/// Sparse elimination over GF(p). Keeps the echelonized rows so callers can
/// extract a kernel basis.
pub struct Elimination {
    pub p: u64,
    pub rank: usize,
    /// Echelon rows as sorted (col, value) lists; first column is the pivot
    /// with value 1.
    pub echelon: Vec<Vec<(usize, u64)>>,
    pub pivot_cols: Vec<usize>,
    cols: usize,
}

impl Elimination {
    /// Column-count Markowitz-style pivoting: rows are eliminated in order
    /// of current sparsity (lazy heap), pivots chosen in the sparsest column
    /// of the row; ties break on the smallest indices for determinism.
    /// Column-to-row incidence sets keep each elimination step local.
    pub fn run(m: &ExactSparseMatrix, p: u64) -> Elimination {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;

        let mut rows: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); m.rows];
        for (i, j, v) in m.iter() {
            let r = reduce_mod(v, p);
            if r != 0 {
                rows[i].insert(j, r);
            }
        }
        let mut col_rows: Vec<std::collections::BTreeSet<usize>> =
            vec![Default::default(); m.cols];
        for (i, row) in rows.iter().enumerate() {
            for (&j, _) in row {
                col_rows[j].insert(i);
            }
        }
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .map(|(i, r)| Reverse((r.len(), i)))
            .collect();
        let mut done = vec![false; m.rows];
        let mut echelon: Vec<Vec<(usize, u64)>> = Vec::new();
        let mut pivot_cols: Vec<usize> = Vec::new();
        while let Some(Reverse((len, i))) = heap.pop() {
            if done[i] || rows[i].len() != len {
                continue;
            }
            if rows[i].is_empty() {
                done[i] = true;
                continue;
            }
            done[i] = true;
            let row = std::mem::take(&mut rows[i]);
            let (&pc, &pv) = row
                .iter()
                .min_by_key(|&(&j, _)| (col_rows[j].len(), j))
                .unwrap();
            for (&j, _) in &row {
                col_rows[j].remove(&i);
            }
            let inv = mod_inv(pv, p);
            let norm: Vec<(usize, u64)> = row
                .iter()
                .map(|(&j, &x)| (j, (x as u128 * inv as u128 % p as u128) as u64))
                .collect();
            let victims: Vec<usize> = col_rows[pc].iter().copied().collect();
            for k in victims {
                let factor = rows[k][&pc];
                for &(j, x) in &norm {
                    let delta = (factor as u128 * x as u128 % p as u128) as u64;
                    match rows[k].entry(j) {
                        std::collections::btree_map::Entry::Vacant(slot) => {
                            slot.insert((p - delta) % p);
                            col_rows[j].insert(k);
                        }
                        std::collections::btree_map::Entry::Occupied(mut slot) => {
                            let nv = (*slot.get() + p - delta) % p;
                            if nv == 0 {
                                slot.remove();
                                col_rows[j].remove(&k);
                            } else {
                                *slot.get_mut() = nv;
                            }
                        }
                    }
                }
                debug_assert!(!rows[k].contains_key(&pc));
                if !rows[k].is_empty() {
                    heap.push(Reverse((rows[k].len(), k)));
                }
            }
            pivot_cols.push(pc);
            echelon.push(norm);
        }
        Elimination {
            p,
            rank: echelon.len(),
            echelon,
            pivot_cols,
            cols: m.cols,
        }
    }

    /// Kernel basis over GF(p): one vector per non-pivot column, as sorted
    /// (index, value) lists.
    pub fn kernel_basis(&self) -> Vec<Vec<(usize, u64)>> {
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivot_cols {
            is_pivot[c] = true;
        }
        // Fully back-substitute: bring echelon to reduced form first. Each
        // row may contain pivot columns only of later-eliminated rows, so
        // walking in reverse elimination order reduces against rows that are
        // already clean and never reintroduces pivot entries.
        let mut reduced: Vec<BTreeMap<usize, u64>> = self
            .echelon
            .iter()
            .map(|r| r.iter().copied().collect())
            .collect();
        let order: Vec<usize> = (0..reduced.len()).rev().collect();
        for &r in &order {
            let row = reduced[r].clone();
            for (&j, &x) in &row {
                if j == self.pivot_cols[r] {
                    continue;
                }
                if let Some(src) = (0..reduced.len()).find(|&s| self.pivot_cols[s] == j) {
                    // subtract x * reduced[src] from reduced[r]
                    let srow = reduced[src].clone();
                    let dst = &mut reduced[r];
                    for (&jj, &sv) in &srow {
                        let delta = (x as u128 * sv as u128 % p as u128) as u64;
                        let cur = dst.get(&jj).copied().unwrap_or(0);
                        let nv = (cur + p - delta) % p;
                        if nv == 0 {
                            dst.remove(&jj);
                        } else {
                            dst.insert(jj, nv);
                        }
                    }
                }
            }
        }
        let pivot_of_col: BTreeMap<usize, usize> = self
            .pivot_cols
            .iter()
            .enumerate()
            .map(|(r, &c)| (c, r))
            .collect();
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut vec: Vec<(usize, u64)> = vec![(f, 1)];
            for (&c, &r) in &pivot_of_col {
                if let Some(&x) = reduced[r].get(&f) {
                    // pivot row: x_c + ... + x * x_f = 0  =>  x_c = -x
                    vec.push((c, (p - x) % p));
                }
            }
            vec.retain(|&(_, v)| v != 0);
            vec.sort_unstable_by_key(|&(j, _)| j);
            basis.push(vec);
        }
        basis
    }
}

/// Rank over GF(p). The prime is required to be large (> 2^20) so random
/// unlucky characteristics cannot masquerade as rank drops at desk scale.
pub fn rank_mod_p(m: &ExactSparseMatrix, prime: u64) -> usize {
    assert!(prime > (1 << 20), "prime too small for reliable ranks");
    Elimination::run(m, prime).rank
}

const RATIONAL_GUARD: usize = 500;

/// Exact rank over the rationals by fraction-free (Bareiss) elimination.
pub fn rational_rank(m: &ExactSparseMatrix) -> Result<usize, OgcError> {
    if m.rows.max(m.cols) > RATIONAL_GUARD {
        return Err(OgcError::ResourceLimitExceeded(format!(
            "rational rank guard: {}x{} exceeds {}",
            m.rows, m.cols, RATIONAL_GUARD
        )));
    }
    let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); m.cols]; m.rows];
    for (i, j, v) in m.iter() {
        a[i][j] = BigInt::from(v);
    }
    let mut rank = 0usize;
    let mut prev = BigInt::from(1);
    let mut row = 0usize;
    for col in 0..m.cols {
        // Find a pivot in this column at or below `row`.
        let Some(pr) = (row..m.rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, pr);
        for r in row + 1..m.rows {
            for c in col + 1..m.cols {
                let num = &a[row][col] * &a[r][c] - &a[r][col] * &a[row][c];
                a[r][c] = &num / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[row][col].clone();
        if prev.is_negative() {
            // Bareiss tolerates signed pivots; keep as-is.
        }
        row += 1;
        rank += 1;
        if row == m.rows {
            break;
        }
    }
    Ok(rank)
}

/// Solve A x = b over GF(p) where the columns of A are linearly
/// independent. A is given by columns over a possibly huge row space; the
/// solver selects a square invertible row subset once and then answers each
/// right-hand side with full substitution verification.
pub struct ModPSolver {
    p: u64,
    ncols: usize,
    columns: Vec<Vec<(usize, u64)>>,
    sel_rows: Vec<usize>,
    /// Dense inverse of the selected square block, row-major.
    inv: Vec<Vec<u64>>,
}

impl ModPSolver {
    /// Prepare from column vectors (each a sorted (row, value) list over a
    /// shared row space of size `nrows`). Returns None when the columns are
    /// linearly dependent mod p.
    pub fn new(nrows: usize, columns: &[Vec<(usize, i64)>], p: u64) -> Option<ModPSolver> {
        let ncols = columns.len();
        let reduced: Vec<Vec<(usize, u64)>> = columns
            .iter()
            .map(|col| {
                let mut v: Vec<(usize, u64)> = col
                    .iter()
                    .filter_map(|&(i, x)| {
                        let r = reduce_mod(x, p);
                        (r != 0).then_some((i, r))
                    })
                    .collect();
                v.sort_unstable_by_key(|&(i, _)| i);
                v
            })
            .collect();
        if ncols == 0 {
            return Some(ModPSolver { p, ncols, columns: reduced, sel_rows: vec![], inv: vec![] });
        }
        // Echelonize the transpose to find a row subset carrying full rank.
        let mut t = ExactSparseMatrix::zero(ncols, nrows);
        for (j, col) in reduced.iter().enumerate() {
            for &(i, v) in col {
                t.add(j, i, balanced_lift(v, p));
            }
        }
        let elim = Elimination::run(&t, p);
        if elim.rank < ncols {
            return None;
        }
        let mut sel_rows = elim.pivot_cols.clone();
        sel_rows.sort_unstable();
        // Dense square block S[k][j] = column_j at selected row k; invert.
        let row_pos: BTreeMap<usize, usize> =
            sel_rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let mut s = vec![vec![0u64; ncols]; ncols];
        for (j, col) in reduced.iter().enumerate() {
            for &(i, v) in col {
                if let Some(&k) = row_pos.get(&i) {
                    s[k][j] = v;
                }
            }
        }
        let inv = dense_inverse(&s, p)?;
        Some(ModPSolver { p, ncols, columns: reduced, sel_rows, inv })
    }

    pub fn rank(&self) -> usize {
        self.ncols
    }

    /// Solve for one rhs; `b` as sparse (row, value) over the shared row
    /// space. Returns dense x mod p, or None when b is outside the span.
    pub fn solve(&self, b: &[(usize, i64)]) -> Option<Vec<u64>> {
        let p = self.p;
        let mut bmap: BTreeMap<usize, u64> = BTreeMap::new();
        for &(i, v) in b {
            let r = reduce_mod(v, p);
            let e = bmap.entry(i).or_insert(0);
            *e = (*e + r) % p;
        }
        bmap.retain(|_, v| *v != 0);
        if self.ncols == 0 {
            return bmap.is_empty().then_some(vec![]);
        }
        let bsel: Vec<u64> = self
            .sel_rows
            .iter()
            .map(|r| bmap.get(r).copied().unwrap_or(0))
            .collect();
        let mut x = vec![0u64; self.ncols];
        for (j, xi) in x.iter_mut().enumerate() {
            let mut acc: u128 = 0;
            for (k, &bk) in bsel.iter().enumerate() {
                acc = (acc + self.inv[j][k] as u128 * bk as u128) % p as u128;
            }
            *xi = acc as u64;
        }
        // Full substitution check over every row, not just the selected ones.
        let mut residual = bmap;
        for (j, col) in self.columns.iter().enumerate() {
            if x[j] == 0 {
                continue;
            }
            for &(i, v) in col {
                let delta = (x[j] as u128 * v as u128 % p as u128) as u64;
                let e = residual.entry(i).or_insert(0);
                *e = (*e + p - delta) % p;
            }
        }
        residual.values().all(|&v| v == 0).then_some(x)
    }
}

/// Gauss-Jordan inverse of a dense square matrix mod p.
fn dense_inverse(s: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = s.len();
    let mut a: Vec<Vec<u64>> = s.to_vec();
    let mut inv: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row = vec![0u64; n];
            row[i] = 1;
            row
        })
        .collect();
    for col in 0..n {
        let pr = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pr);
        inv.swap(col, pr);
        let f = mod_inv(a[col][col], p);
        for j in 0..n {
            a[col][j] = (a[col][j] as u128 * f as u128 % p as u128) as u64;
            inv[col][j] = (inv[col][j] as u128 * f as u128 % p as u128) as u64;
        }
        for r in 0..n {
            if r == col || a[r][col] == 0 {
                continue;
            }
            let f = a[r][col];
            for j in 0..n {
                let da = (f as u128 * a[col][j] as u128 % p as u128) as u64;
                a[r][j] = (a[r][j] + p - da) % p;
                let di = (f as u128 * inv[col][j] as u128 % p as u128) as u64;
                inv[r][j] = (inv[r][j] + p - di) % p;
            }
        }
    }
    Some(inv)
}

/// Rational reconstruction of a residue: the unique fraction n/d with
/// |n|, d <= sqrt(p/2) congruent to x mod p, if it exists.
pub fn rational_reconstruct(x: u64, p: u64) -> Option<(i64, i64)> {
    let bound = ((p / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (p as i128, x as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1.abs() > bound || t1 == 0 {
        return None;
    }
    let (mut n, mut d) = (r1, t1);
    if d < 0 {
        n = -n;
        d = -d;
    }
    Some((n as i64, d as i64))
}

/// Balanced lift of a residue to the integer of least absolute value.
pub fn balanced_lift(x: u64, p: u64) -> i64 {
    if x > p / 2 {
        x as i64 - p as i64
    } else {
        x as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn zero_matrix_rank() {
        let m = ExactSparseMatrix::zero(5, 7);
        assert_eq!(rank_mod_p(&m, DEFAULT_PRIMES[0]), 0);
        assert_eq!(rational_rank(&m).unwrap(), 0);
    }

    #[test]
    fn permutation_matrix_rank() {
        let mut m = ExactSparseMatrix::zero(4, 4);
        for (i, j) in [(0, 2), (1, 0), (2, 3), (3, 1)] {
            m.add(i, j, 1);
        }
        assert_eq!(rank_mod_p(&m, DEFAULT_PRIMES[0]), 4);
        assert_eq!(rational_rank(&m).unwrap(), 4);
    }

    #[test]
    fn diagonal_and_rank_one() {
        let d = ExactSparseMatrix::from_entries(3, 3, [(0, 0, 2), (1, 1, 4), (2, 2, 6)]);
        assert_eq!(rational_rank(&d).unwrap(), 3);
        let r1 = ExactSparseMatrix::from_entries(2, 2, [(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)]);
        assert_eq!(rational_rank(&r1).unwrap(), 1);
        assert_eq!(rank_mod_p(&r1, DEFAULT_PRIMES[1]), 1);
    }

    #[test]
    fn random_matrices_agree_with_rational_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..8 {
            let mut m = ExactSparseMatrix::zero(30, 30);
            for _ in 0..120 {
                let i = rng.gen_range(0..30);
                let j = rng.gen_range(0..30);
                let v = rng.gen_range(-5..=5);
                m.add(i, j, v);
            }
            let rq = rational_rank(&m).unwrap();
            for p in DEFAULT_PRIMES {
                assert_eq!(rank_mod_p(&m, p), rq);
            }
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let p = DEFAULT_PRIMES[0];
        for round in 0..20 {
            let (rows, cols, fills) = if round % 2 == 0 { (8, 12, 30) } else { (15, 20, 90) };
            let mut m = ExactSparseMatrix::zero(rows, cols);
            for _ in 0..fills {
                let i = rng.gen_range(0..rows);
                let j = rng.gen_range(0..cols);
                m.add(i, j, rng.gen_range(-3..=3));
            }
            let elim = Elimination::run(&m, p);
            let kernel = elim.kernel_basis();
            assert_eq!(kernel.len(), cols - elim.rank);
            for k in &kernel {
                // m * k == 0 mod p
                let mut out = vec![0u64; rows];
                for (i, j, v) in m.iter() {
                    if let Ok(idx) = k.binary_search_by_key(&j, |&(c, _)| c) {
                        let kv = k[idx].1;
                        out[i] = (out[i]
                            + (reduce_mod(v, p) as u128 * kv as u128 % p as u128) as u64)
                            % p;
                    }
                }
                assert!(out.iter().all(|&x| x == 0), "kernel vector escaped");
            }
            // Rank of the kernel matrix equals the nullity: vectors are
            // independent.
            let mut km = ExactSparseMatrix::zero(cols, kernel.len());
            for (j, k) in kernel.iter().enumerate() {
                for &(i, v) in k {
                    km.add(i, j, balanced_lift(v, p));
                }
            }
            assert_eq!(rank_mod_p(&km, p), kernel.len());
        }
    }

    #[test]
    fn solver_recovers_combination() {
        let p = DEFAULT_PRIMES[0];
        let cols = vec![
            vec![(0usize, 1i64), (2, 2)],
            vec![(1, 3), (2, -1)],
        ];
        let solver = ModPSolver::new(4, &cols, p).unwrap();
        assert_eq!(solver.rank(), 2);
        // b = 2*c0 - 3*c1
        let b = vec![(0usize, 2i64), (1, -9), (2, 7)];
        let x = solver.solve(&b).unwrap();
        assert_eq!(balanced_lift(x[0], p), 2);
        assert_eq!(balanced_lift(x[1], p), -3);
        // Inconsistent rhs rejected.
        let bad = vec![(3usize, 1i64)];
        assert!(solver.solve(&bad).is_none());
    }

    #[test]
    fn rational_reconstruction_round_trip() {
        let p = DEFAULT_PRIMES[0];
        for (n, d) in [(1i64, 2i64), (-3, 4), (7, 1), (0, 1), (-1, 2)] {
            let x = (n.rem_euclid(p as i64) as u128 * mod_inv(d as u64, p) as u128
                % p as u128) as u64;
            let (rn, rd) = rational_reconstruct(x, p).unwrap();
            assert_eq!(rn * d, n * rd);
        }
    }

    #[test]
    fn transpose_involution_and_rank() {
        let m = ExactSparseMatrix::from_entries(2, 3, [(0, 0, 1), (0, 2, -2), (1, 1, 5)]);
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(
            rank_mod_p(&m, DEFAULT_PRIMES[0]),
            rank_mod_p(&m.transpose(), DEFAULT_PRIMES[0])
        );
    }
}
