//! Machine checks of the core-graph filtration argument behind the
//! acyclicity of the minus part.
//!
//! For a fixed connected core with labeled vertices and edges, the filtered
//! complexes are spanned by raw type assignments (no coinvariants are taken
//! at this level): the first i tree edges are marked, every other edge is a
//! directed single edge or a zigzag in the stored direction, and assignments
//! with a cycle are excluded, marked edges counting in both directions. The
//! edge differential resolves one zigzag at a time with a Koszul sign over
//! the edge labels, the stage maps kill zigzags on the active tree edge and
//! mark arrows (with (-1)^d on the backward one), and the involution flips
//! arrow directions with the sign -(-1)^(v + #arrows + #marked) for even d
//! and -(-1)^(v + #marked) for odd d.

use serde::Serialize;

use crate::basis::{core_shapes, CoreShape};
use crate::error::OgcError;
use crate::homology::{betti_numbers, verify_quasi_iso, GradedComplex};
use crate::involution::{matrix_in_eigenbasis, split_from_involution_images, EigenSplit};
use crate::matrix::{ExactSparseMatrix, DEFAULT_PRIMES};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize)]
pub enum PhiEdgeState {
    /// Tree marker: inert under the edge differential, bidirectional for
    /// cycles.
    Marked,
    /// Single edge along the stored core orientation (low to high label).
    Forward,
    /// Single edge against the stored orientation.
    Backward,
    /// Zigzag in the stored direction.
    Zig,
}

pub type PhiAssign = Vec<PhiEdgeState>;

/// Prefix-tree edge order: a_1..a_(v-1) such that every prefix spans a tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeOrder {
    /// 0-based core edge indices.
    pub edges: Vec<usize>,
}

/// Deterministic lowest-labeled growth: repeatedly take the smallest-labeled
/// edge joining the grown component to a new vertex, starting from vertex 1.
pub fn choose_tree_order(core: &CoreShape) -> Result<TreeOrder, OgcError> {
    let n = core.v as usize;
    let mut in_tree = vec![false; n];
    in_tree[0] = true;
    let mut picked = Vec::new();
    while picked.len() + 1 < n {
        let mut found = None;
        for (j, &(a, b)) in core.edges.iter().enumerate() {
            let (a, b) = (a as usize - 1, b as usize - 1);
            if in_tree[a] != in_tree[b] {
                found = Some((j, if in_tree[a] { b } else { a }));
                break;
            }
        }
        match found {
            Some((j, new_vertex)) => {
                in_tree[new_vertex] = true;
                picked.push(j);
            }
            None => return Err(OgcError::Disconnected),
        }
    }
    Ok(TreeOrder { edges: picked })
}

/// Cycle rule: a cycle is a closed walk through pairwise distinct edges,
/// arrows along their direction and marked edges in either direction. Since
/// the marked edges of every stage form a forest, contracting the marked
/// components and testing the residual arrow digraph is exact: a minimal
/// directed cycle there visits each component once and realizes inside it
/// along the unique (edge-disjoint) tree path.
fn has_cycle(core: &CoreShape, assign: &PhiAssign) -> bool {
    let n = core.v as usize;
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
    // Contract marked edges; a marked edge closing a marked component (or a
    // marked self-loop) is already a cycle.
    for (j, &(a, b)) in core.edges.iter().enumerate() {
        if assign[j] != PhiEdgeState::Marked {
            continue;
        }
        let (ra, rb) = (
            find(&mut parent, a as usize - 1),
            find(&mut parent, b as usize - 1),
        );
        if ra == rb {
            return true;
        }
        parent[ra] = rb;
    }
    let mut adj = vec![Vec::new(); n];
    for (j, &(a, b)) in core.edges.iter().enumerate() {
        let (t, h) = match assign[j] {
            PhiEdgeState::Forward => (a, b),
            PhiEdgeState::Backward => (b, a),
            _ => continue,
        };
        let (rt, rh) = (
            find(&mut parent, t as usize - 1),
            find(&mut parent, h as usize - 1),
        );
        if rt == rh {
            // Arrow inside one marked component (self-loops included).
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

fn zig_count(assign: &PhiAssign) -> usize {
    assign.iter().filter(|&&s| s == PhiEdgeState::Zig).count()
}

/// Basis of stage i, graded by zigzag count: `bases[k]` holds the sorted
/// assignments with exactly E - k zigzags (positions run 0..=E so the edge
/// differential has degree +1 and the stage maps degree 0).
#[derive(Clone, Debug)]
pub struct PhiBasis {
    pub stage: usize,
    pub bases: Vec<Vec<PhiAssign>>,
}

impl PhiBasis {
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.len()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.bases.iter().map(|b| b.len()).sum()
    }
}

/// Enumerate the stage-i basis: tree edges a_1..a_i marked, the rest arrows
/// in either direction or zigzags, no cycles.
pub fn phi_basis(core: &CoreShape, tree: &TreeOrder, stage: usize) -> PhiBasis {
    let e_total = core.edges.len();
    assert!(stage <= tree.edges.len(), "stage exceeds tree length");
    let marked: Vec<bool> = {
        let mut m = vec![false; e_total];
        for &j in &tree.edges[..stage] {
            m[j] = true;
        }
        m
    };
    let mut all: Vec<PhiAssign> = vec![Vec::new()];
    for j in 0..e_total {
        let states: &[PhiEdgeState] = if marked[j] {
            &[PhiEdgeState::Marked]
        } else if core.edges[j].0 == core.edges[j].1 {
            // Loops cannot be single directed edges.
            &[PhiEdgeState::Zig]
        } else {
            &[PhiEdgeState::Forward, PhiEdgeState::Backward, PhiEdgeState::Zig]
        };
        let mut next = Vec::with_capacity(all.len() * states.len());
        for prefix in &all {
            for &s in states {
                let mut p = prefix.clone();
                p.push(s);
                next.push(p);
            }
        }
        all = next;
    }
    let mut bases: Vec<Vec<PhiAssign>> = vec![Vec::new(); e_total + 1];
    for a in all {
        if has_cycle(core, &a) {
            continue;
        }
        let k = e_total - zig_count(&a);
        bases[k].push(a);
    }
    for b in &mut bases {
        b.sort_unstable();
    }
    PhiBasis { stage, bases }
}

fn index_in(basis: &[PhiAssign], a: &PhiAssign) -> Option<usize> {
    basis.binary_search(a).ok()
}

/// Koszul sign at zigzag position j: parity of the zigzag count below j.
fn koszul_sign(assign: &PhiAssign, j: usize) -> i64 {
    let below = assign[..j].iter().filter(|&&s| s == PhiEdgeState::Zig).count();
    if below % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Edge differential matrices of one stage; `maps[k]` goes from position k
/// to k+1. Resolving a zigzag into an arrow that closes a cycle contributes
/// nothing.
pub fn phi_edge_differential(core: &CoreShape, basis: &PhiBasis, d: i64) -> Vec<ExactSparseMatrix> {
    let e_total = core.edges.len();
    let back_sign = if d.rem_euclid(2) == 0 { -1 } else { 1 };
    let mut maps = Vec::with_capacity(e_total);
    for k in 0..e_total {
        let src = &basis.bases[k];
        let tgt = &basis.bases[k + 1];
        let mut m = ExactSparseMatrix::zero(tgt.len(), src.len());
        for (col, a) in src.iter().enumerate() {
            for j in 0..e_total {
                if a[j] != PhiEdgeState::Zig {
                    continue;
                }
                let sign = koszul_sign(a, j);
                for (state, coeff) in [
                    (PhiEdgeState::Forward, sign),
                    (PhiEdgeState::Backward, back_sign * sign),
                ] {
                    let mut b = a.clone();
                    b[j] = state;
                    if has_cycle(core, &b) {
                        continue;
                    }
                    let row = index_in(tgt, &b).expect("target enumerated");
                    m.add(row, col, coeff);
                }
            }
        }
        maps.push(m);
    }
    maps
}

/// Signed involution images on each graded piece of a stage basis.
pub fn phi_iota_images(core: &CoreShape, basis: &PhiBasis, d: i64) -> Vec<Vec<(usize, i64)>> {
    let even = d.rem_euclid(2) == 0;
    basis
        .bases
        .iter()
        .map(|layer| {
            layer
                .iter()
                .map(|a| {
                    let flipped: PhiAssign = a
                        .iter()
                        .map(|&s| match s {
                            PhiEdgeState::Forward => PhiEdgeState::Backward,
                            PhiEdgeState::Backward => PhiEdgeState::Forward,
                            other => other,
                        })
                        .collect();
                    let arrows = a
                        .iter()
                        .filter(|&&s| {
                            matches!(s, PhiEdgeState::Forward | PhiEdgeState::Backward)
                        })
                        .count();
                    let marked =
                        a.iter().filter(|&&s| s == PhiEdgeState::Marked).count();
                    let exp = if even {
                        core.v as usize + arrows + marked
                    } else {
                        core.v as usize + marked
                    };
                    let sign = -(if exp % 2 == 0 { 1 } else { -1 });
                    let j = index_in(layer, &flipped).expect("flip stays in the layer");
                    (j, sign)
                })
                .collect()
        })
        .collect()
}

/// Stage map f_i as matrices per position: zigzags on the active tree edge
/// die, arrows become marked, the backward one with (-1)^d; targets closing
/// a cycle are dropped.
pub fn f_map_matrices(
    core: &CoreShape,
    tree: &TreeOrder,
    i: usize,
    source: &PhiBasis,
    target: &PhiBasis,
    d: i64,
) -> Result<Vec<ExactSparseMatrix>, OgcError> {
    if source.stage + 1 != i || target.stage != i {
        return Err(OgcError::WrongStage { expected: i, got: source.stage + 1 });
    }
    let a_i = tree.edges[i - 1];
    let back = if d.rem_euclid(2) == 0 { 1 } else { -1 };
    let e_total = core.edges.len();
    let mut maps = Vec::with_capacity(e_total + 1);
    for k in 0..=e_total {
        let src = &source.bases[k];
        let tgt = &target.bases[k];
        let mut m = ExactSparseMatrix::zero(tgt.len(), src.len());
        for (col, a) in src.iter().enumerate() {
            let coeff = match a[a_i] {
                PhiEdgeState::Zig => continue,
                PhiEdgeState::Forward => 1,
                PhiEdgeState::Backward => back,
                PhiEdgeState::Marked => {
                    return Err(OgcError::WrongStage { expected: i, got: source.stage })
                }
            };
            let mut b = a.clone();
            b[a_i] = PhiEdgeState::Marked;
            if has_cycle(core, &b) {
                continue;
            }
            let row = index_in(tgt, &b).expect("target enumerated");
            m.add(row, col, coeff);
        }
        maps.push(m);
    }
    Ok(maps)
}

/// Single-class view of the stage map, used by the operations surface.
pub fn f_map(
    core: &CoreShape,
    tree: &TreeOrder,
    i: usize,
    assign: &PhiAssign,
    d: i64,
) -> Result<Option<(PhiAssign, i64)>, OgcError> {
    let a_i = tree.edges[i - 1];
    for (pos, &j) in tree.edges[..i - 1].iter().enumerate() {
        if assign[j] != PhiEdgeState::Marked {
            return Err(OgcError::WrongStage { expected: i - 1, got: pos });
        }
    }
    let back = if d.rem_euclid(2) == 0 { 1 } else { -1 };
    let coeff = match assign[a_i] {
        PhiEdgeState::Zig => return Ok(None),
        PhiEdgeState::Forward => 1,
        PhiEdgeState::Backward => back,
        PhiEdgeState::Marked => {
            return Err(OgcError::WrongStage { expected: i, got: i - 1 });
        }
    };
    let mut b = assign.clone();
    b[a_i] = PhiEdgeState::Marked;
    if has_cycle(core, &b) {
        return Ok(None);
    }
    Ok(Some((b, coeff)))
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiStageReport {
    pub i: usize,
    pub dims: Vec<usize>,
    pub minus_dims: Vec<usize>,
    pub betti_minus: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiVerdicts {
    pub edge_differential_squares_to_zero: bool,
    pub iota_involutive: bool,
    pub iota_commutes_with_differential: bool,
    pub f_maps_are_chain_maps: bool,
    pub f_maps_commute_with_iota: bool,
    pub f_minus_quasi_isomorphisms: bool,
    pub terminal_minus_is_zero: bool,
    pub minus_part_acyclic: bool,
    pub all_pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiReport {
    pub core: CoreShape,
    pub tree_order: Vec<usize>,
    pub d: i64,
    pub stages: Vec<PhiStageReport>,
    pub verdicts: PhiVerdicts,
}

struct StageData {
    basis: PhiBasis,
    complex: GradedComplex,
    splits: Vec<EigenSplit>,
    minus_complex: GradedComplex,
}

fn build_stage(core: &CoreShape, tree: &TreeOrder, stage: usize, d: i64) -> StageData {
    let basis = phi_basis(core, tree, stage);
    let maps = phi_edge_differential(core, &basis, d);
    let complex = GradedComplex::new(basis.dims(), maps.clone());
    let splits: Vec<EigenSplit> = phi_iota_images(core, &basis, d)
        .iter()
        .map(|imgs| split_from_involution_images(imgs))
        .collect();
    let minus_dims: Vec<usize> = splits.iter().map(|s| s.dims().1).collect();
    let mut minus_maps = Vec::new();
    for k in 0..maps.len() {
        let (_, mb, _) = matrix_in_eigenbasis(&maps[k], &splits[k], &splits[k + 1])
            .expect("differential respects the split");
        minus_maps.push(mb);
    }
    let minus_complex = GradedComplex::new(minus_dims, minus_maps);
    StageData { basis, complex, splits, minus_complex }
}

/// Run the full battery of exact checks for one core and one parity
/// parameter.
pub fn verify_phi_chain(core: &CoreShape, d: i64) -> Result<PhiReport, OgcError> {
    if !core.is_connected() {
        return Err(OgcError::Disconnected);
    }
    const ASSIGNMENT_GUARD: u32 = 12;
    if core.edges.len() as u32 > ASSIGNMENT_GUARD {
        return Err(OgcError::ResourceLimitExceeded(format!(
            "core with {} edges exceeds the assignment guard",
            core.edges.len()
        )));
    }
    let tree = choose_tree_order(core)?;
    let v = core.v as usize;
    let stages: Vec<StageData> = (0..v).map(|i| build_stage(core, &tree, i, d)).collect();

    let mut edge_sq = true;
    let mut iota_inv = true;
    let mut iota_comm = true;
    for st in &stages {
        edge_sq &= st.complex.verify_squares_to_zero();
        for (k, split) in st.splits.iter().enumerate() {
            let dim = st.basis.bases[k].len();
            let mut iota_m = ExactSparseMatrix::zero(dim, dim);
            for (i, vec) in phi_iota_images(core, &st.basis, d)[k].iter().enumerate() {
                iota_m.add(vec.0, i, vec.1);
            }
            iota_inv &= iota_m.mul(&iota_m) == ExactSparseMatrix::identity(dim);
            if k < st.complex.maps.len() {
                let dim2 = st.basis.bases[k + 1].len();
                let mut iota_next = ExactSparseMatrix::zero(dim2, dim2);
                for (i, vec) in phi_iota_images(core, &st.basis, d)[k + 1].iter().enumerate() {
                    iota_next.add(vec.0, i, vec.1);
                }
                iota_comm &= iota_next.mul(&st.complex.maps[k])
                    == st.complex.maps[k].mul(&iota_m);
            }
            let _ = split;
        }
    }

    let mut f_chain = true;
    let mut f_iota = true;
    let mut f_minus_qiso = true;
    for i in 1..v {
        let f = f_map_matrices(core, &tree, i, &stages[i - 1].basis, &stages[i].basis, d)?;
        for k in 0..stages[i - 1].complex.maps.len() {
            f_chain &= stages[i].complex.maps[k].mul(&f[k])
                == f[k + 1].mul(&stages[i - 1].complex.maps[k]);
        }
        // Commutation with the involution, position by position; the
        // eigencoordinate form must have no off-diagonal blocks.
        let mut f_minus = Vec::new();
        for (k, fk) in f.iter().enumerate() {
            match matrix_in_eigenbasis(fk, &stages[i - 1].splits[k], &stages[i].splits[k]) {
                Ok((_, mb, mixed)) => {
                    let (tp, _) = stages[i].splits[k].dims();
                    let (sp, _) = stages[i - 1].splits[k].dims();
                    for (r, c, _) in mixed.iter() {
                        if (r < tp) != (c < sp) {
                            f_iota = false;
                        }
                    }
                    f_minus.push(mb);
                }
                Err(_) => {
                    f_iota = false;
                    f_minus.push(ExactSparseMatrix::zero(
                        stages[i].splits[k].dims().1,
                        stages[i - 1].splits[k].dims().1,
                    ));
                }
            }
        }
        f_minus_qiso &= verify_quasi_iso(
            &f_minus,
            &stages[i - 1].minus_complex,
            &stages[i].minus_complex,
            &DEFAULT_PRIMES,
        )?;
    }

    let terminal = &stages[v - 1];
    let terminal_total: usize = terminal.basis.total_dim();
    debug_assert_eq!(terminal_total, 1, "terminal complex is one-dimensional");
    let terminal_minus_zero =
        terminal.minus_complex.dims.iter().all(|&x| x == 0);
    let betti0 = betti_numbers(&stages[0].minus_complex, &DEFAULT_PRIMES)?;
    let minus_acyclic = betti0.iter().all(|&b| b == 0);

    let mut stage_reports = Vec::new();
    for st in &stages {
        let bm = betti_numbers(&st.minus_complex, &DEFAULT_PRIMES)?;
        stage_reports.push(PhiStageReport {
            i: st.basis.stage,
            dims: st.basis.dims(),
            minus_dims: st.minus_complex.dims.clone(),
            betti_minus: bm,
        });
    }
    let verdicts = PhiVerdicts {
        edge_differential_squares_to_zero: edge_sq,
        iota_involutive: iota_inv,
        iota_commutes_with_differential: iota_comm,
        f_maps_are_chain_maps: f_chain,
        f_maps_commute_with_iota: f_iota,
        f_minus_quasi_isomorphisms: f_minus_qiso,
        terminal_minus_is_zero: terminal_minus_zero,
        minus_part_acyclic: minus_acyclic,
        all_pass: edge_sq
            && iota_inv
            && iota_comm
            && f_chain
            && f_iota
            && f_minus_qiso
            && terminal_minus_zero
            && minus_acyclic,
    };
    Ok(PhiReport {
        core: core.clone(),
        tree_order: tree.edges.iter().map(|&j| j + 1).collect(),
        d,
        stages: stage_reports,
        verdicts,
    })
}

/// Every connected core with at most `max_v` vertices and `max_e` edges, up
/// to isomorphism, self-loops included, no valence constraint.
pub fn core_sweep(max_v: u16, max_e: usize) -> Vec<CoreShape> {
    let mut out = Vec::new();
    for v in 1..=max_v {
        for m in (v as usize).saturating_sub(1)..=max_e {
            out.extend(core_shapes(v, m, 0));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta_core() -> CoreShape {
        CoreShape::new(2, vec![(1, 2), (1, 2), (1, 2)])
    }

    #[test]
    fn tree_order_star() {
        let star = CoreShape::new(4, vec![(1, 2), (1, 3), (1, 4)]);
        let tree = choose_tree_order(&star).unwrap();
        assert_eq!(tree.edges, vec![0, 1, 2]);
    }

    #[test]
    fn tree_order_prefixes_are_trees() {
        let core = CoreShape::new(4, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (3, 4)]);
        let tree = choose_tree_order(&core).unwrap();
        assert_eq!(tree.edges.len(), 3);
        for i in 1..=tree.edges.len() {
            let prefix = &tree.edges[..i];
            let shape = CoreShape::new(
                core.v,
                prefix.iter().map(|&j| core.edges[j]).collect(),
            );
            // A prefix tree touches i+1 vertices and has no cycle: check by
            // vertex count reached and edge count.
            let mut verts: std::collections::BTreeSet<u16> = Default::default();
            for &(a, b) in &shape.edges {
                verts.insert(a);
                verts.insert(b);
            }
            assert_eq!(verts.len(), i + 1);
        }
    }

    #[test]
    fn disconnected_core_is_an_error() {
        let core = CoreShape::new(3, vec![(1, 2)]);
        assert!(matches!(choose_tree_order(&core), Err(OgcError::Disconnected)));
    }

    #[test]
    fn terminal_stage_is_one_dimensional() {
        let core = theta_core();
        let tree = choose_tree_order(&core).unwrap();
        let terminal = phi_basis(&core, &tree, 1);
        assert_eq!(terminal.total_dim(), 1);
        // Spanning tree marked, everything else zigzag.
        let a = terminal.bases.iter().flatten().next().unwrap();
        assert_eq!(a[tree.edges[0]], PhiEdgeState::Marked);
        assert!(a
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != tree.edges[0])
            .all(|(_, &s)| s == PhiEdgeState::Zig));
    }

    #[test]
    fn stage_zero_counts_for_theta() {
        // Three parallel edges, each Forward/Backward/Zig, minus the
        // assignments with both directions present among the arrows.
        let core = theta_core();
        let tree = choose_tree_order(&core).unwrap();
        let b = phi_basis(&core, &tree, 0);
        let total = b.total_dim();
        // 27 assignments, minus those with at least one Forward and at
        // least one Backward arrow (two opposite parallels form a cycle).
        assert_eq!(total, 27 - 12);
    }

    #[test]
    fn theta_report_passes_both_parities() {
        let core = theta_core();
        for d in [2i64, 3] {
            let rep = verify_phi_chain(&core, d).unwrap();
            assert!(rep.verdicts.all_pass, "theta verdicts failed at d={d}: {:?}", rep.verdicts);
        }
    }

    #[test]
    fn four_vertex_seven_edge_witness_passes() {
        // Complete graph on four vertices with one doubled edge.
        let core = CoreShape::new(
            4,
            vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (3, 4)],
        );
        for d in [2i64, 3] {
            let rep = verify_phi_chain(&core, d).unwrap();
            assert!(rep.verdicts.all_pass, "witness failed at d={d}: {:?}", rep.verdicts);
        }
    }

    #[test]
    fn loop_cores_pass() {
        let core = CoreShape::new(1, vec![(1, 1), (1, 1)]);
        for d in [2i64, 3] {
            let rep = verify_phi_chain(&core, d).unwrap();
            assert!(rep.verdicts.all_pass);
        }
    }

    #[test]
    fn f_map_stage_guard() {
        let core = theta_core();
        let tree = choose_tree_order(&core).unwrap();
        let assign = vec![PhiEdgeState::Marked, PhiEdgeState::Zig, PhiEdgeState::Zig];
        assert!(matches!(
            f_map(&core, &tree, 1, &assign, 3),
            Err(OgcError::WrongStage { .. })
        ));
    }

    #[test]
    fn f_map_kills_zig_and_signs_backward() {
        let core = theta_core();
        let tree = choose_tree_order(&core).unwrap();
        let a_i = tree.edges[0];
        let mut zig = vec![PhiEdgeState::Zig; 3];
        zig[a_i] = PhiEdgeState::Zig;
        assert!(f_map(&core, &tree, 1, &zig, 3).unwrap().is_none());
        let mut bwd = vec![PhiEdgeState::Zig; 3];
        bwd[a_i] = PhiEdgeState::Backward;
        let (_, c) = f_map(&core, &tree, 1, &bwd, 3).unwrap().unwrap();
        assert_eq!(c, -1);
        let (_, c2) = f_map(&core, &tree, 1, &bwd, 2).unwrap().unwrap();
        assert_eq!(c2, 1);
    }
}
