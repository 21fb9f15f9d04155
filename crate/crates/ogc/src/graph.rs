//! Directed labeled multigraphs and the admissibility rules of the
//! oriented graph complex: connected, minimum valence two, no passing
//! vertices, no closed directed paths.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

use crate::error::GraphError;

/// 1-based vertex label. Graphs here stay far below `u16::MAX` vertices.
pub type Vertex = u16;

/// A directed multigraph with vertices labeled `1..=v` and edges labeled
/// `1..=e` by their position in the edge list. Self-loops are rejected at
/// construction: a self-loop is a directed cycle of length one and is
/// inadmissible in every flavor handled by this crate.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct LabeledGraph {
    v: Vertex,
    edges: Vec<(Vertex, Vertex)>,
}

impl LabeledGraph {
    pub fn new(vertex_count: u16, edges: Vec<(Vertex, Vertex)>) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::EmptyGraph);
        }
        for &(t, h) in &edges {
            if t == 0 || h == 0 || t > vertex_count || h > vertex_count {
                return Err(GraphError::OutOfRangeEndpoint { tail: t, head: h });
            }
            if t == h {
                return Err(GraphError::SelfLoop { vertex: t });
            }
        }
        Ok(LabeledGraph { v: vertex_count, edges })
    }

    pub fn vertex_count(&self) -> u16 {
        self.v
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// First Betti number `e - v + 1` of the underlying connected graph.
    pub fn loop_order(&self) -> i64 {
        self.edges.len() as i64 - self.v as i64 + 1
    }

    /// (out-valence, in-valence) per vertex, indexed 0-based.
    pub fn valences(&self) -> Vec<(u16, u16)> {
        let mut val = vec![(0u16, 0u16); self.v as usize];
        for &(t, h) in &self.edges {
            val[t as usize - 1].0 += 1;
            val[h as usize - 1].1 += 1;
        }
        val
    }

    pub fn is_connected(&self) -> bool {
        if self.v == 1 {
            return true;
        }
        let mut seen = vec![false; self.v as usize];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut adj = vec![Vec::new(); self.v as usize];
        for &(t, h) in &self.edges {
            adj[t as usize - 1].push(h as usize - 1);
            adj[h as usize - 1].push(t as usize - 1);
        }
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

    pub fn has_directed_cycle(&self) -> bool {
        // Kahn peeling on the multigraph.
        let mut indeg = vec![0usize; self.v as usize];
        for &(_, h) in &self.edges {
            indeg[h as usize - 1] += 1;
        }
        let mut out = vec![Vec::new(); self.v as usize];
        for &(t, h) in &self.edges {
            out[t as usize - 1].push(h as usize - 1);
        }
        let mut queue: Vec<usize> = (0..self.v as usize).filter(|&u| indeg[u] == 0).collect();
        let mut removed = 0usize;
        while let Some(u) = queue.pop() {
            removed += 1;
            for &w in &out[u] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        removed != self.v as usize
    }

    /// A passing vertex is 2-valent with exactly one incoming and one
    /// outgoing edge. Returns the first one in label order, if any.
    pub fn passing_vertex(&self) -> Option<Vertex> {
        self.valences()
            .iter()
            .position(|&(o, i)| o == 1 && i == 1)
            .map(|p| p as Vertex + 1)
    }

    /// Check order: connectivity, directed cycles, passing vertices, then
    /// valence. A directed polygon is reported as a cycle even though all of
    /// its vertices are also passing.
    pub fn check_admissible(&self, rules: &AdmissibilityRules) -> Result<(), Violation> {
        if rules.require_connected && !self.is_connected() {
            return Err(Violation::Disconnected);
        }
        if rules.forbid_directed_cycles && self.has_directed_cycle() {
            return Err(Violation::DirectedCycle);
        }
        if rules.forbid_passing {
            if let Some(vtx) = self.passing_vertex() {
                return Err(Violation::PassingVertex { vertex: vtx });
            }
        }
        for (u, &(o, i)) in self.valences().iter().enumerate() {
            if o + i < rules.min_valence {
                return Err(Violation::LowValence {
                    vertex: u as Vertex + 1,
                    valence: o + i,
                });
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.check_admissible(&AdmissibilityRules::default()).is_ok()
    }

    /// Reverse every edge, keeping vertex and edge labels.
    pub fn reverse_all(&self) -> LabeledGraph {
        LabeledGraph {
            v: self.v,
            edges: self.edges.iter().map(|&(t, h)| (h, t)).collect(),
        }
    }

    /// Apply a vertex relabeling and an edge relabeling.
    ///
    /// `vperm[i]` is the new label of vertex `i+1`; `eperm[j]` is the new
    /// label (1-based) of edge `j+1`. Both must be permutations.
    pub fn relabel(&self, vperm: &[Vertex], eperm: &[usize]) -> LabeledGraph {
        let mut edges = vec![(0, 0); self.edges.len()];
        for (j, &(t, h)) in self.edges.iter().enumerate() {
            edges[eperm[j] - 1] = (vperm[t as usize - 1], vperm[h as usize - 1]);
        }
        LabeledGraph { v: self.v, edges }
    }

    /// Multiplicity of the most repeated directed edge.
    pub fn max_edge_multiplicity(&self) -> usize {
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        let mut best = 0;
        let mut run = 0;
        let mut prev = None;
        for pair in sorted {
            if Some(pair) == prev {
                run += 1;
            } else {
                run = 1;
                prev = Some(pair);
            }
            best = best.max(run);
        }
        best
    }

    /// Text record: first line `v e`, then one `tail head` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.v, self.edges.len());
        for &(t, h) in &self.edges {
            s.push_str(&format!("{} {}\n", t, h));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut nums = text
            .split_whitespace()
            .map(|w| w.parse::<u32>().map_err(|_| GraphError::Parse(w.to_string())));
        let mut next = |what: &str| -> Result<u32, GraphError> {
            nums.next()
                .unwrap_or(Err(GraphError::Parse(format!("missing {what}"))))
        };
        let v = next("vertex count")?;
        let e = next("edge count")?;
        let mut edges = Vec::with_capacity(e as usize);
        for _ in 0..e {
            let t = next("tail")?;
            let h = next("head")?;
            edges.push((t as Vertex, h as Vertex));
        }
        LabeledGraph::new(v as u16, edges)
    }
}

/// Total order: vertex count, then edge count, then the edge list
/// lexicographically. Canonical representatives are minima under this order.
impl Ord for LabeledGraph {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.v, self.edges.len(), &self.edges).cmp(&(other.v, other.edges.len(), &other.edges))
    }
}

impl PartialOrd for LabeledGraph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}[", self.v)?;
        for (j, &(t, h)) in self.edges.iter().enumerate() {
            if j > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}>{}", t, h)?;
        }
        write!(f, "]")
    }
}

/// The admissibility parameters; the defaults reproduce the generating set of
/// the oriented graph complex (at least 2-valent, no passing vertices, no
/// directed cycles, connected).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityRules {
    pub min_valence: u16,
    pub forbid_passing: bool,
    pub forbid_directed_cycles: bool,
    pub require_connected: bool,
}

impl Default for AdmissibilityRules {
    fn default() -> Self {
        AdmissibilityRules {
            min_valence: 2,
            forbid_passing: true,
            forbid_directed_cycles: true,
            require_connected: true,
        }
    }
}

/// First failed admissibility rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    Disconnected,
    LowValence { vertex: Vertex, valence: u16 },
    PassingVertex { vertex: Vertex },
    DirectedCycle,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Disconnected => write!(f, "graph is disconnected"),
            Violation::LowValence { vertex, valence } => {
                write!(f, "vertex {vertex} has valence {valence} < minimum")
            }
            Violation::PassingVertex { vertex } => write!(f, "passing vertex at {vertex}"),
            Violation::DirectedCycle => write!(f, "directed cycle"),
        }
    }
}

/// JSON mirror of the text format: `{"v": ..., "edges": [[t, h], ...]}`.
#[derive(Serialize, Deserialize)]
pub struct GraphJson {
    pub v: u16,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl From<&LabeledGraph> for GraphJson {
    fn from(g: &LabeledGraph) -> Self {
        GraphJson { v: g.v, edges: g.edges.clone() }
    }
}

impl TryFrom<GraphJson> for LabeledGraph {
    type Error = GraphError;
    fn try_from(j: GraphJson) -> Result<Self, GraphError> {
        LabeledGraph::new(j.v, j.edges)
    }
}

/// The two-vertex double edge: the smallest admissible graph.
pub fn double_edge() -> LabeledGraph {
    LabeledGraph::new(2, vec![(1, 2), (1, 2)]).unwrap()
}

/// Three parallel edges on two vertices.
pub fn triple_edge() -> LabeledGraph {
    LabeledGraph::new(2, vec![(1, 2), (1, 2), (1, 2)]).unwrap()
}

/// The 3-vertex 4-edge fan used throughout the tests.
pub fn fan() -> LabeledGraph {
    LabeledGraph::new(3, vec![(1, 2), (1, 3), (3, 2), (3, 2)]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_validates() {
        assert!(LabeledGraph::new(2, vec![(1, 2), (1, 2)]).is_ok());
        assert!(matches!(
            LabeledGraph::new(1, vec![(1, 1)]),
            Err(GraphError::SelfLoop { vertex: 1 })
        ));
        assert!(matches!(
            LabeledGraph::new(2, vec![(1, 3)]),
            Err(GraphError::OutOfRangeEndpoint { .. })
        ));
    }

    #[test]
    fn double_edge_is_admissible() {
        assert!(double_edge().is_admissible());
    }

    #[test]
    fn directed_triangle_is_rejected() {
        let g = LabeledGraph::new(3, vec![(1, 2), (2, 3), (3, 1)]).unwrap();
        assert_eq!(
            g.check_admissible(&AdmissibilityRules::default()),
            Err(Violation::DirectedCycle)
        );
    }

    #[test]
    fn path_has_passing_vertex() {
        let g = LabeledGraph::new(3, vec![(1, 2), (2, 3)]).unwrap();
        assert_eq!(
            g.check_admissible(&AdmissibilityRules::default()),
            Err(Violation::PassingVertex { vertex: 2 })
        );
    }

    #[test]
    fn reversal_is_involutive_and_preserves_admissibility() {
        for g in [double_edge(), fan()] {
            assert_eq!(g.reverse_all().reverse_all(), g);
            assert!(g.reverse_all().is_admissible());
        }
    }

    #[test]
    fn text_round_trip() {
        let g = fan();
        assert_eq!(LabeledGraph::from_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn single_vertex_fails_valence() {
        let g = LabeledGraph::new(1, vec![]).unwrap();
        assert!(matches!(
            g.check_admissible(&AdmissibilityRules::default()),
            Err(Violation::LowValence { .. })
        ));
    }
}
