//! The one-reduced skeleton model of the oriented graph complex.
//!
//! Skeleton vertices are at least 3-valent; a skeleton edge is either a
//! single directed edge (arrow) or the antisymmetrized two-edge chain
//! (zigzag), stored with a direction whose flip multiplies the class by
//! -(-1)^d. A zigzag expands integrally to the sink-chain minus the
//! source-chain with a global normalization of 2^-s tracked symbolically.
//!
//! All sign conventions of this flavor are defined by transport through the
//! expansion into the full complex: the canonical representative, the kill
//! verdict, the differential, and the core/edge split are read off there, so
//! the full flavor is the single source of truth for signs.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::basis::{core_shapes, BasisSlice, FORMAT_VERSION};
use crate::canon::{canonical_form, canonicalize, CanonOutcome, GraphClass, Parity};
use crate::complex::{differential, Chain};
use crate::error::OgcError;
use crate::graph::{LabeledGraph, Vertex};
use crate::matrix::{balanced_lift, ExactSparseMatrix, ModPSolver, DEFAULT_PRIMES};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize, Deserialize)]
pub enum SkelEdgeType {
    /// Single directed edge, stored with its actual direction.
    Arrow,
    /// Antisymmetrized two-edge chain with a stored direction.
    Zigzag,
    /// Tree marker edge of the proof complexes; traversable both ways for
    /// the cycle rule and inert under the edge differential.
    Marked,
}

pub type SkelEdge = (Vertex, Vertex, SkelEdgeType);

/// Graph on >= 3-valent skeleton vertices with typed edges. Zigzag self-loops
/// are legal (they expand to a two-valent sink or source hanging on one
/// vertex); arrow or marked self-loops are directed cycles and are rejected.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize, Deserialize)]
pub struct SkeletonGraph {
    v: Vertex,
    edges: Vec<SkelEdge>,
}

impl SkeletonGraph {
    pub fn new(vertex_count: Vertex, edges: Vec<SkelEdge>) -> Result<Self, OgcError> {
        if vertex_count == 0 {
            return Err(OgcError::Graph(crate::error::GraphError::EmptyGraph));
        }
        for &(t, h, ty) in &edges {
            if t == 0 || h == 0 || t > vertex_count || h > vertex_count {
                return Err(OgcError::Graph(
                    crate::error::GraphError::OutOfRangeEndpoint { tail: t, head: h },
                ));
            }
            if t == h && ty != SkelEdgeType::Zigzag {
                return Err(OgcError::Graph(crate::error::GraphError::SelfLoop {
                    vertex: t,
                }));
            }
        }
        Ok(SkeletonGraph { v: vertex_count, edges })
    }

    pub fn vertex_count(&self) -> Vertex {
        self.v
    }

    pub fn edges(&self) -> &[SkelEdge] {
        &self.edges
    }

    pub fn zigzag_count(&self) -> usize {
        self.edges.iter().filter(|&&(_, _, t)| t == SkelEdgeType::Zigzag).count()
    }

    pub fn arrow_count(&self) -> usize {
        self.edges.iter().filter(|&&(_, _, t)| t == SkelEdgeType::Arrow).count()
    }

    pub fn has_marked(&self) -> bool {
        self.edges.iter().any(|&(_, _, t)| t == SkelEdgeType::Marked)
    }

    /// Total original vertex and edge counts of the expansion.
    pub fn total_bigrade(&self) -> (u16, usize) {
        let s = self.zigzag_count();
        (self.v + s as u16, self.arrow_count() + 2 * s)
    }

    /// Valences at skeleton level (self-loops count twice).
    pub fn valences(&self) -> Vec<u16> {
        let mut val = vec![0u16; self.v as usize];
        for &(t, h, _) in &self.edges {
            val[t as usize - 1] += 1;
            val[h as usize - 1] += 1;
        }
        val
    }

    /// Cycles through distinct edges: arrows traversed along their
    /// direction, marked edges either way, zigzags impassable. Marked edges
    /// arising from tree prefixes form a forest, so contracting them and
    /// testing the residual arrow digraph is exact; a marked edge closing a
    /// marked component is itself a cycle.
    pub fn has_directed_cycle(&self) -> bool {
        let n = self.v as usize;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != r {
                let next = parent[c];
                parent[c] = r;
                c = next;
            }
            r
        }
        for &(t, h, ty) in &self.edges {
            if ty != SkelEdgeType::Marked {
                continue;
            }
            let (rt, rh) =
                (find(&mut parent, t as usize - 1), find(&mut parent, h as usize - 1));
            if rt == rh {
                return true;
            }
            parent[rt] = rh;
        }
        let mut adj = vec![Vec::new(); n];
        for &(t, h, ty) in &self.edges {
            if ty != SkelEdgeType::Arrow {
                continue;
            }
            let (rt, rh) =
                (find(&mut parent, t as usize - 1), find(&mut parent, h as usize - 1));
            if rt == rh {
                return true;
            }
            adj[rt].push(rh);
        }
        let mut state = vec![0u8; n];
        fn dfs(u: usize, adj: &[Vec<usize>], state: &mut [u8]) -> bool {
            state[u] = 1;
            for &w in &adj[u] {
                if state[w] == 1 || (state[w] == 0 && dfs(w, adj, state)) {
                    return true;
                }
            }
            state[u] = 2;
            false
        }
        (0..n).any(|u| state[u] == 0 && dfs(u, &adj, &mut state))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.v as usize;
        let mut adj = vec![Vec::new(); n];
        for &(t, h, _) in &self.edges {
            adj[t as usize - 1].push(h as usize - 1);
            adj[h as usize - 1].push(t as usize - 1);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn is_admissible(&self) -> bool {
        self.is_connected()
            && !self.has_directed_cycle()
            && self.valences().iter().all(|&x| x >= 3)
    }

    /// Text record: `v_sk m`, then `tail head type` with type in {>, <, S, E}.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.v, self.edges.len());
        for &(t, h, ty) in &self.edges {
            let c = match ty {
                SkelEdgeType::Arrow => '>',
                SkelEdgeType::Zigzag => 'S',
                SkelEdgeType::Marked => 'E',
            };
            s.push_str(&format!("{} {} {}\n", t, h, c));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, OgcError> {
        let mut words = text.split_whitespace();
        let mut next = |what: &str| -> Result<String, OgcError> {
            words
                .next()
                .map(str::to_owned)
                .ok_or_else(|| OgcError::Io(format!("missing {what}")))
        };
        let v: Vertex = next("v_sk")?.parse().map_err(|e| OgcError::Io(format!("{e}")))?;
        let m: usize = next("m")?.parse().map_err(|e| OgcError::Io(format!("{e}")))?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let t: Vertex = next("tail")?.parse().map_err(|e| OgcError::Io(format!("{e}")))?;
            let h: Vertex = next("head")?.parse().map_err(|e| OgcError::Io(format!("{e}")))?;
            let ty = next("type")?;
            let edge = match ty.as_str() {
                ">" => (t, h, SkelEdgeType::Arrow),
                "<" => (h, t, SkelEdgeType::Arrow),
                "S" => (t, h, SkelEdgeType::Zigzag),
                "E" => (t, h, SkelEdgeType::Marked),
                other => return Err(OgcError::Io(format!("unknown edge type {other}"))),
            };
            edges.push(edge);
        }
        SkeletonGraph::new(v, edges)
    }

    /// Reverse every arrow, keep zigzags and marked edges.
    pub fn reverse_arrows(&self) -> SkeletonGraph {
        SkeletonGraph {
            v: self.v,
            edges: self
                .edges
                .iter()
                .map(|&(t, h, ty)| match ty {
                    SkelEdgeType::Arrow => (h, t, ty),
                    _ => (t, h, ty),
                })
                .collect(),
        }
    }

    /// Faithful encoding into the full flavor: every zigzag becomes the
    /// sink-chain with a fresh middle vertex. Two-valent vertices of the
    /// encoding are exactly the middles, so the typed graph and its
    /// automorphisms (including stored-direction flips, which appear as edge
    /// swaps at a middle) are recovered from the encoding.
    fn encode(&self) -> Result<LabeledGraph, OgcError> {
        if self.has_marked() {
            return Err(OgcError::ContainsEe);
        }
        let mut next_mid = self.v + 1;
        let mut edges = Vec::new();
        for &(t, h, ty) in &self.edges {
            match ty {
                SkelEdgeType::Arrow => edges.push((t, h)),
                SkelEdgeType::Zigzag => {
                    edges.push((t, next_mid));
                    edges.push((h, next_mid));
                    next_mid += 1;
                }
                SkelEdgeType::Marked => unreachable!(),
            }
        }
        Ok(LabeledGraph::new(next_mid - 1, edges).expect("encoding stays valid"))
    }

    fn decode(g: &LabeledGraph) -> SkeletonGraph {
        let vals = g.valences();
        let is_middle: Vec<bool> = vals.iter().map(|&(o, i)| o == 0 && i == 2).collect();
        let mut map = vec![0 as Vertex; g.vertex_count() as usize];
        let mut next = 1;
        for u in 0..g.vertex_count() as usize {
            if !is_middle[u] {
                map[u] = next;
                next += 1;
            }
        }
        let v_sk = next - 1;
        // Skeleton edges keyed by their smallest constituent label.
        let mut keyed: Vec<(usize, SkelEdge)> = Vec::new();
        let mut middle_in: BTreeMap<usize, Vec<(usize, Vertex)>> = BTreeMap::new();
        for (j, &(t, h)) in g.edges().iter().enumerate() {
            if is_middle[h as usize - 1] {
                middle_in.entry(h as usize - 1).or_default().push((j, t));
            } else {
                keyed.push((j, (map[t as usize - 1], map[h as usize - 1], SkelEdgeType::Arrow)));
            }
        }
        for (_, ins) in middle_in {
            debug_assert_eq!(ins.len(), 2);
            let (j1, t1) = ins[0];
            let (j2, t2) = ins[1];
            let (j1, t1, t2) = if j1 < j2 { (j1, t1, t2) } else { (j2, t2, t1) };
            keyed.push((j1, (map[t1 as usize - 1], map[t2 as usize - 1], SkelEdgeType::Zigzag)));
        }
        keyed.sort_unstable_by_key(|&(j, _)| j);
        SkeletonGraph { v: v_sk, edges: keyed.into_iter().map(|(_, e)| e).collect() }
    }
}

impl std::fmt::Display for SkeletonGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "sk{}[", self.v)?;
        for (i, &(t, h, ty)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let c = match ty {
                SkelEdgeType::Arrow => '>',
                SkelEdgeType::Zigzag => 'S',
                SkelEdgeType::Marked => 'E',
            };
            write!(f, "{}{}{}", t, c, h)?;
        }
        write!(f, "]")
    }
}

/// A nonzero skeleton class with the sign relating the input to the
/// canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedSkeleton {
    pub rep: SkeletonGraph,
    pub coefficient: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkelOutcome {
    Zero,
    Class(SignedSkeleton),
}

impl SkelOutcome {
    pub fn into_option(self) -> Option<SignedSkeleton> {
        match self {
            SkelOutcome::Zero => None,
            SkelOutcome::Class(c) => Some(c),
        }
    }
}

/// Canonicalize a skeleton graph through its full encoding. The class is
/// zero exactly when the encoded full class is zero; the sign is the product
/// of the two encoding signs through the shared canonical form.
pub fn canonicalize_skeleton(s: &SkeletonGraph, parity: Parity) -> Result<SkelOutcome, OgcError> {
    let enc = s.encode()?;
    let form = canonical_form(&enc, parity)?;
    if form.zero {
        return Ok(SkelOutcome::Zero);
    }
    let rep = SkeletonGraph::decode(&form.graph);
    let rep_form = canonical_form(&rep.encode()?, parity)?;
    debug_assert_eq!(rep_form.graph, form.graph, "decode/encode must close up");
    Ok(SkelOutcome::Class(SignedSkeleton {
        rep,
        coefficient: form.sign * rep_form.sign,
    }))
}

/// Expansion into the full flavor: the integer chain over all zigzag
/// resolutions (sink-chain coefficient +1, source-chain -1) together with
/// the suppressed normalization exponent (the true chain carries 2^-s).
pub fn expand(s: &SkeletonGraph, d: i64) -> Result<(Chain, u32), OgcError> {
    if s.has_marked() {
        return Err(OgcError::ContainsEe);
    }
    let parity = Parity::of(d);
    let zigzags: Vec<usize> = s
        .edges
        .iter()
        .enumerate()
        .filter(|&(_, &(_, _, t))| t == SkelEdgeType::Zigzag)
        .map(|(i, _)| i)
        .collect();
    let n = zigzags.len();
    let mut chain = Chain::zero();
    for mask in 0..(1usize << n) {
        let mut next_mid = s.v + 1;
        let mut edges = Vec::new();
        let mut coeff = 1i64;
        let mut z = 0usize;
        for &(t, h, ty) in &s.edges {
            match ty {
                SkelEdgeType::Arrow => edges.push((t, h)),
                SkelEdgeType::Zigzag => {
                    let m = next_mid;
                    next_mid += 1;
                    if (mask >> z) & 1 == 0 {
                        edges.push((t, m));
                        edges.push((h, m));
                    } else {
                        edges.push((m, t));
                        edges.push((m, h));
                        coeff = -coeff;
                    }
                    z += 1;
                }
                SkelEdgeType::Marked => unreachable!(),
            }
        }
        let g = LabeledGraph::new(next_mid - 1, edges).expect("expansion stays valid");
        if let CanonOutcome::Class(sc) = canonicalize(&g, parity)? {
            chain.add_class(sc.class.canonical, sc.coefficient * coeff);
        }
    }
    Ok((chain, n as u32))
}

/// Direction-reversing involution on the skeleton flavor: reverse arrows,
/// retain zigzags, sign (-1)^(e+v+s+1) for even parity or (-1)^(v+1) for odd
/// with v, e the total original counts and s the zigzag count.
pub fn iota_skeleton(s: &SkeletonGraph, d: i64) -> Result<SkelOutcome, OgcError> {
    let (v_tot, e_tot) = s.total_bigrade();
    let exp = match Parity::of(d) {
        Parity::Even => e_tot + v_tot as usize + s.zigzag_count() + 1,
        Parity::Odd => v_tot as usize + 1,
    };
    let sign = if exp % 2 == 0 { 1 } else { -1 };
    Ok(match canonicalize_skeleton(&s.reverse_arrows(), Parity::of(d))? {
        SkelOutcome::Zero => SkelOutcome::Zero,
        SkelOutcome::Class(sc) => SkelOutcome::Class(SignedSkeleton {
            rep: sc.rep,
            coefficient: sc.coefficient * sign,
        }),
    })
}

/// Ordered basis of one skeleton slice at total bigrade (v, e).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkelBasisSlice {
    pub d: i64,
    pub v: u16,
    pub e: usize,
    pub classes: Vec<SkeletonGraph>,
    pub format_version: u32,
}

impl SkelBasisSlice {
    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    pub fn index_of(&self, s: &SkeletonGraph) -> Option<usize> {
        self.classes.binary_search(s).ok()
    }

    pub fn empty(d: i64, v: u16, e: usize) -> SkelBasisSlice {
        SkelBasisSlice { d, v, e, classes: Vec::new(), format_version: FORMAT_VERSION }
    }
}

/// Enumerate every skeleton class of loop order `b`, grouped into slices by
/// total bigrade. Loop order 1 has no >= 3-valent vertex and is unsupported.
pub fn o1_basis_by_loop_order(d: i64, b: i64) -> Result<Vec<SkelBasisSlice>, OgcError> {
    if b < 2 {
        return Err(OgcError::UnsupportedLoopOrder(b));
    }
    let parity = Parity::of(d);
    let mut found: BTreeMap<(u16, usize), BTreeSet<SkeletonGraph>> = BTreeMap::new();
    let v_sk_max = (2 * (b - 1)) as u16;
    for v_sk in 1..=v_sk_max {
        let m = (v_sk as i64 + b - 1) as usize;
        for core in core_shapes(v_sk, m, 3) {
            // Assignment per core edge: arrow forward, arrow backward, or
            // zigzag in the stored (low -> high) direction. Self-loops can
            // only be zigzags.
            let mut stack: Vec<Vec<SkelEdge>> = vec![Vec::new()];
            for &(a, bb) in &core.edges {
                let mut next = Vec::new();
                for prefix in &stack {
                    if a != bb {
                        for cand in [
                            (a, bb, SkelEdgeType::Arrow),
                            (bb, a, SkelEdgeType::Arrow),
                            (a, bb, SkelEdgeType::Zigzag),
                        ] {
                            let mut p = prefix.clone();
                            p.push(cand);
                            next.push(p);
                        }
                    } else {
                        let mut p = prefix.clone();
                        p.push((a, bb, SkelEdgeType::Zigzag));
                        next.push(p);
                    }
                }
                stack = next;
            }
            for edges in stack {
                let s = SkeletonGraph { v: v_sk, edges };
                if s.has_directed_cycle() {
                    continue;
                }
                debug_assert!(s.is_admissible());
                if let SkelOutcome::Class(sc) = canonicalize_skeleton(&s, parity)? {
                    found.entry(sc.rep.total_bigrade()).or_default().insert(sc.rep);
                }
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|((v, e), classes)| SkelBasisSlice {
            d,
            v,
            e,
            classes: classes.into_iter().collect(),
            format_version: FORMAT_VERSION,
        })
        .collect())
}

/// The expansion chains of a slice, in basis order.
pub fn expansion_chains(slice: &SkelBasisSlice, d: i64) -> Result<Vec<Chain>, OgcError> {
    slice.classes.iter().map(|s| expand(s, d).map(|(c, _)| c)).collect()
}

/// Chain map matrix of the expansion into a stored full basis; rows index
/// the full slice. Denominators are cleared: column sigma is 2^(s_sigma)
/// times the normalized inclusion, which rescales basis vectors and leaves
/// every homological statement unchanged.
pub fn inclusion_matrix(
    skel: &SkelBasisSlice,
    full: &BasisSlice,
    d: i64,
) -> Result<ExactSparseMatrix, OgcError> {
    let mut m = ExactSparseMatrix::zero(full.dim(), skel.dim());
    for (col, chain) in expansion_chains(skel, d)?.iter().enumerate() {
        for (g, &c) in &chain.terms {
            let row = full.index_of(g).ok_or_else(|| {
                OgcError::MissingBasis(format!(
                    "full slice (v={}, e={}) lacks expansion term {g}",
                    full.v, full.e
                ))
            })?;
            m.add(row, col, c);
        }
    }
    Ok(m)
}

/// The transported skeleton differential: the unique matrix D with
/// expand . D = d_full . expand, solved exactly (mod-p solve, balanced or
/// rational lift, then exact integer re-verification).
pub fn skeleton_differential_matrix(
    src: &SkelBasisSlice,
    tgt: &SkelBasisSlice,
    d: i64,
) -> Result<ExactSparseMatrix, OgcError> {
    let src_chains = expansion_chains(src, d)?;
    let tgt_chains = expansion_chains(tgt, d)?;
    // Row space over all supports.
    let mut row_of: BTreeMap<LabeledGraph, usize> = BTreeMap::new();
    let row_index = |g: &LabeledGraph, row_of: &mut BTreeMap<LabeledGraph, usize>| -> usize {
        let next = row_of.len();
        *row_of.entry(g.clone()).or_insert(next)
    };
    let mut rhs: Vec<Vec<(usize, i64)>> = Vec::with_capacity(src.dim());
    let parity = Parity::of(d);
    let mut rhs_chains: Vec<Chain> = Vec::with_capacity(src.dim());
    for chain in &src_chains {
        let mut image = Chain::zero();
        for (g, &c) in &chain.terms {
            let dg = differential(&GraphClass { canonical: g.clone(), parity }, d)?;
            image.add(&dg, c);
        }
        rhs_chains.push(image);
    }
    let mut cols: Vec<Vec<(usize, i64)>> = Vec::with_capacity(tgt.dim());
    for chain in &tgt_chains {
        let mut col = Vec::new();
        for (g, &c) in &chain.terms {
            col.push((row_index(g, &mut row_of), c));
        }
        cols.push(col);
    }
    for image in &rhs_chains {
        let mut b = Vec::new();
        for (g, &c) in &image.terms {
            b.push((row_index(g, &mut row_of), c));
        }
        rhs.push(b);
    }
    let nrows = row_of.len();

    let mut out = ExactSparseMatrix::zero(tgt.dim(), src.dim());
    if src.dim() == 0 {
        return Ok(out);
    }
    if tgt.dim() == 0 {
        for image in &rhs_chains {
            if !image.is_zero() {
                return Err(OgcError::MissingBasis(
                    "differential leaves the empty target slice".into(),
                ));
            }
        }
        return Ok(out);
    }
    let solver = DEFAULT_PRIMES
        .iter()
        .find_map(|&p| ModPSolver::new(nrows, &cols, p))
        .ok_or_else(|| {
            OgcError::MissingBasis("expansion columns are linearly dependent".into())
        })?;
    for (col_idx, b) in rhs.iter().enumerate() {
        let x = solver.solve(b).ok_or_else(|| {
            OgcError::MissingBasis("differential image outside the skeleton span".into())
        })?;
        // Integer lift and exact verification against the chains.
        let mut check = rhs_chains[col_idx].clone();
        let p = DEFAULT_PRIMES[0];
        for (tau, &xv) in x.iter().enumerate() {
            let lifted = balanced_lift(xv, p);
            if lifted != 0 {
                check.add(&tgt_chains[tau], -lifted);
                out.add(tau, col_idx, lifted);
            }
        }
        if !check.is_zero() {
            return Err(OgcError::MissingBasis(
                "transported differential failed exact integer verification".into(),
            ));
        }
    }
    Ok(out)
}

/// Chains over skeleton classes, used by the per-class differential view.
pub type SkelChain = BTreeMap<SkeletonGraph, i64>;

/// Core and edge parts of the skeleton differential of one class, split by
/// the zigzag count of the targets: the core part contracts an arrow (same
/// zigzag count), the edge part resolves a zigzag (one fewer).
pub struct SkeletonDifferential {
    pub core: SkelChain,
    pub edge: SkelChain,
}

pub fn skeleton_differential(
    s: &SkeletonGraph,
    d: i64,
    tgt: &SkelBasisSlice,
) -> Result<SkeletonDifferential, OgcError> {
    let (v, e) = s.total_bigrade();
    let src = SkelBasisSlice {
        d,
        v,
        e,
        classes: vec![s.clone()],
        format_version: FORMAT_VERSION,
    };
    let m = skeleton_differential_matrix(&src, tgt, d)?;
    let mut core = SkelChain::new();
    let mut edge = SkelChain::new();
    let s_count = s.zigzag_count();
    for (row, _, val) in m.iter() {
        let target = tgt.classes[row].clone();
        if target.zigzag_count() == s_count {
            core.insert(target, val);
        } else {
            debug_assert_eq!(target.zigzag_count() + 1, s_count);
            edge.insert(target, val);
        }
    }
    Ok(SkeletonDifferential { core, edge })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta_with_zigzag() -> SkeletonGraph {
        SkeletonGraph::new(
            2,
            vec![
                (1, 2, SkelEdgeType::Arrow),
                (1, 2, SkelEdgeType::Arrow),
                (1, 2, SkelEdgeType::Zigzag),
            ],
        )
        .unwrap()
    }

    #[test]
    fn text_round_trip_and_normalization() {
        let s = theta_with_zigzag();
        let parsed = SkeletonGraph::from_text(&s.to_text()).unwrap();
        assert_eq!(parsed, s);
        // '<' swaps endpoints into an arrow with the actual direction.
        let t = SkeletonGraph::from_text("2 1\n1 2 <\n").unwrap();
        assert_eq!(t.edges()[0], (2, 1, SkelEdgeType::Arrow));
    }

    #[test]
    fn arrow_self_loop_rejected() {
        assert!(SkeletonGraph::new(1, vec![(1, 1, SkelEdgeType::Arrow)]).is_err());
        assert!(SkeletonGraph::new(1, vec![(1, 1, SkelEdgeType::Zigzag)]).is_ok());
    }

    #[test]
    fn zigzag_flip_rule() {
        // Flipping the stored direction multiplies by -(-1)^d.
        for d in [2i64, 3] {
            let s = theta_with_zigzag();
            let flipped = SkeletonGraph::new(
                2,
                vec![
                    (1, 2, SkelEdgeType::Arrow),
                    (1, 2, SkelEdgeType::Arrow),
                    (2, 1, SkelEdgeType::Zigzag),
                ],
            )
            .unwrap();
            let a = canonicalize_skeleton(&s, Parity::of(d)).unwrap().into_option();
            let b = canonicalize_skeleton(&flipped, Parity::of(d)).unwrap().into_option();
            let expected = -(if d % 2 == 0 { 1 } else { -1 });
            match (a, b) {
                (Some(x), Some(y)) => {
                    assert_eq!(x.rep, y.rep);
                    assert_eq!(y.coefficient * x.coefficient, expected);
                }
                (None, None) => {
                    // Killed classes are killed in both orientations; the
                    // even case dies on the parallel arrows.
                    assert_eq!(d, 2);
                }
                _ => panic!("flip must preserve the kill verdict"),
            }
        }
    }

    #[test]
    fn expansion_of_zigzag_is_a_difference() {
        let s = theta_with_zigzag();
        let (chain, norm) = expand(&s, 3).unwrap();
        assert_eq!(norm, 1);
        // Middle sink minus middle source; both survive for odd parity.
        assert_eq!(chain.terms.len(), 2);
        let coeffs: Vec<i64> = chain.terms.values().copied().collect();
        assert_eq!(coeffs.iter().map(|c| c.abs()).sum::<i64>(), 2);
    }

    #[test]
    fn expansion_without_zigzags_is_identity() {
        let s = SkeletonGraph::new(
            2,
            vec![
                (1, 2, SkelEdgeType::Arrow),
                (1, 2, SkelEdgeType::Arrow),
                (1, 2, SkelEdgeType::Arrow),
            ],
        )
        .unwrap();
        let (chain, norm) = expand(&s, 3).unwrap();
        assert_eq!(norm, 0);
        assert_eq!(chain.terms.len(), 1);
        assert_eq!(chain.terms.values().next(), Some(&1));
    }

    #[test]
    fn marked_edges_cannot_expand() {
        let s = SkeletonGraph::new(
            2,
            vec![(1, 2, SkelEdgeType::Marked), (1, 2, SkelEdgeType::Zigzag)],
        )
        .unwrap();
        assert!(matches!(expand(&s, 3), Err(OgcError::ContainsEe)));
    }

    #[test]
    fn unsupported_loop_order() {
        assert!(matches!(
            o1_basis_by_loop_order(3, 1),
            Err(OgcError::UnsupportedLoopOrder(1))
        ));
    }

    #[test]
    fn loop_order_two_enumeration_bounds() {
        for d in [2i64, 3] {
            let slices = o1_basis_by_loop_order(d, 2).unwrap();
            for slice in &slices {
                assert_eq!(slice.e as i64 - slice.v as i64 + 1, 2);
                for c in &slice.classes {
                    assert!(c.vertex_count() <= 2);
                    assert!(c.edges().len() <= 3);
                    assert!(c.is_admissible());
                    // Canonical representatives are stable.
                    let again = canonicalize_skeleton(c, Parity::of(d))
                        .unwrap()
                        .into_option()
                        .unwrap();
                    assert_eq!(&again.rep, c);
                    assert_eq!(again.coefficient, 1);
                }
            }
        }
    }

    #[test]
    fn iota_skeleton_is_involutive() {
        for d in [2i64, 3] {
            let slices = o1_basis_by_loop_order(d, 2).unwrap();
            {
                for slice in slices.iter() {
                    for c in &slice.classes {
                        let img = iota_skeleton(c, d).unwrap().into_option().unwrap();
                        let back = iota_skeleton(&img.rep, d).unwrap().into_option().unwrap();
                        assert_eq!(&back.rep, c);
                        assert_eq!(back.coefficient * img.coefficient, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn expansions_are_linearly_independent() {
        for d in [2i64, 3] {
            for slice in o1_basis_by_loop_order(d, 2).unwrap() {
                if slice.dim() == 0 {
                    continue;
                }
                let chains = expansion_chains(&slice, d).unwrap();
                let mut row_of: BTreeMap<LabeledGraph, usize> = BTreeMap::new();
                let mut entries = Vec::new();
                for (j, c) in chains.iter().enumerate() {
                    assert!(!c.is_zero(), "nonzero classes expand to nonzero chains");
                    for (g, &v) in &c.terms {
                        let next = row_of.len();
                        let i = *row_of.entry(g.clone()).or_insert(next);
                        entries.push((i, j, v));
                    }
                }
                let m = ExactSparseMatrix::from_entries(row_of.len(), chains.len(), entries);
                assert_eq!(crate::matrix::rank_mod_p(&m, DEFAULT_PRIMES[0]), chains.len());
            }
        }
    }

    #[test]
    fn transported_differential_squares_to_zero_loop_two() {
        for d in [2i64, 3] {
            let slices = o1_basis_by_loop_order(d, 2).unwrap();
            let by_grade: BTreeMap<(u16, usize), &SkelBasisSlice> =
                slices.iter().map(|s| ((s.v, s.e), s)).collect();
            for slice in &slices {
                let t1 = by_grade
                    .get(&(slice.v - 1, slice.e - 1))
                    .copied()
                    .cloned()
                    .unwrap_or_else(|| SkelBasisSlice::empty(d, slice.v - 1, slice.e - 1));
                let d1 = skeleton_differential_matrix(slice, &t1, d).unwrap();
                if slice.v >= 3 && slice.e >= 2 {
                    let t2 = by_grade
                        .get(&(slice.v - 2, slice.e - 2))
                        .copied()
                        .cloned()
                        .unwrap_or_else(|| SkelBasisSlice::empty(d, slice.v - 2, slice.e - 2));
                    let d2 = skeleton_differential_matrix(&t1, &t2, d).unwrap();
                    assert!(d2.mul(&d1).is_zero());
                }
            }
        }
    }
}
