//! Undirected simple graphs, target orders and matchings.
//!
//! Vertices are `0..n` in memory. Every external format (JSON, DOT, CLI
//! output) shows them 1-based.

mod family;
mod io;
mod pyramid;
mod tree;

pub use family::{cartesian_product, generate, Family};
pub use io::{graph_from_json, graph_to_dot, graph_to_json, GraphJson};
pub use pyramid::PyramidLayout;
pub use tree::{spanning_tree, tree_contour, tree_diameter_path, Contour};

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// A connected simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    family: Option<Family>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicate
    /// edges, out-of-range endpoints and disconnected inputs.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let g = Self::new_unchecked_connectivity(n, edges)?;
        if !g.is_connected() {
            return Err(Error::Structure("graph is not connected".into()));
        }
        Ok(g)
    }

    /// Like [`Graph::new`] but allows disconnected graphs. Used for
    /// intermediate objects such as forests.
    pub(crate) fn new_unchecked_connectivity(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Param("a graph needs at least one vertex".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Structure(format!(
                    "edge ({}, {}) out of range 1..={n}",
                    u + 1,
                    v + 1
                )));
            }
            if u == v {
                return Err(Error::Structure(format!("self-loop at vertex {}", u + 1)));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Structure(format!("duplicate edge at vertex {}", u + 1)));
            }
        }
        Ok(Graph { adj, family: None })
    }

    pub fn with_family(mut self, family: Family) -> Self {
        self.family = Some(family);
        self
    }

    pub fn family(&self) -> Option<&Family> {
        self.family.as_ref()
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Breadth-first distances from `src` (`usize::MAX` when unreachable).
    pub fn bfs(&self, src: Vertex) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// BFS parents from `src`; `parent[src] == src`.
    pub fn bfs_parents(&self, src: Vertex) -> Vec<Option<Vertex>> {
        let mut parent = vec![None; self.n()];
        parent[src] = Some(src);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if parent[v].is_none() {
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    /// Shortest path from `a` to `b`, both endpoints included.
    pub fn shortest_path(&self, a: Vertex, b: Vertex) -> Option<Vec<Vertex>> {
        let parent = self.bfs_parents(b);
        parent[a]?;
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            cur = parent[cur].expect("reachable");
            path.push(cur);
        }
        Some(path)
    }

    pub fn is_connected(&self) -> bool {
        self.bfs(0).iter().all(|&d| d != usize::MAX)
    }

    pub fn is_tree(&self) -> bool {
        self.num_edges() + 1 == self.n() && self.is_connected()
    }

    /// Graph diameter via all-pairs BFS.
    pub fn diameter(&self) -> usize {
        (0..self.n())
            .map(|v| self.bfs(v).into_iter().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Subgraph induced by `vertices`; local vertex `i` is `vertices[i]`.
    pub fn induced(&self, vertices: &[Vertex]) -> Result<Graph> {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n() || local[v] != usize::MAX {
                return Err(Error::Param(format!("bad vertex list for induced subgraph at {}", v + 1)));
            }
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = local[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(vertices.len(), &edges)
    }

    /// True when every edge of `self` is an edge of `other` on the same
    /// vertex set.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n() == other.n() && self.edges().iter().all(|&(u, v)| other.has_edge(u, v))
    }

    /// Greedy maximal matching scanning edges in lexicographic order.
    pub fn maximal_matching(&self) -> Matching {
        let mut used = vec![false; self.n()];
        let mut edges = Vec::new();
        for (u, v) in self.edges() {
            if !used[u] && !used[v] {
                used[u] = true;
                used[v] = true;
                edges.push((u, v));
            }
        }
        Matching { edges }
    }
}

/// A target order: vertex `v` must end up holding the key of rank `rank[v]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexOrder {
    rank: Vec<usize>,
}

impl VertexOrder {
    pub fn identity(n: usize) -> Self {
        VertexOrder { rank: (0..n).collect() }
    }

    pub fn from_ranks(rank: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; rank.len()];
        for &r in &rank {
            if r >= rank.len() || seen[r] {
                return Err(Error::Input(format!("order is not a bijection onto 1..={}", rank.len())));
            }
            seen[r] = true;
        }
        Ok(VertexOrder { rank })
    }

    /// The order in which `vertices_by_rank[r]` receives rank `r`.
    pub fn from_sequence(vertices_by_rank: &[Vertex]) -> Result<Self> {
        let mut rank = vec![usize::MAX; vertices_by_rank.len()];
        for (r, &v) in vertices_by_rank.iter().enumerate() {
            if v >= rank.len() || rank[v] != usize::MAX {
                return Err(Error::Input("vertex sequence is not a permutation".into()));
            }
            rank[v] = r;
        }
        Ok(VertexOrder { rank })
    }

    pub fn n(&self) -> usize {
        self.rank.len()
    }

    pub fn rank(&self, v: Vertex) -> usize {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// Vertices listed by ascending rank.
    pub fn vertices_by_rank(&self) -> Vec<Vertex> {
        let mut out = vec![0; self.rank.len()];
        for (v, &r) in self.rank.iter().enumerate() {
            out[r] = v;
        }
        out
    }
}

/// A set of pairwise vertex-disjoint edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<(Vertex, Vertex)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut used = vec![false; g.n()];
        self.edges.iter().all(|&(u, v)| {
            let ok = g.has_edge(u, v) && !used[u] && !used[v];
            used[u] = true;
            used[v] = true;
            ok
        })
    }

    pub fn is_maximal_in(&self, g: &Graph) -> bool {
        let mut used = vec![false; g.n()];
        for &(u, v) in &self.edges {
            used[u] = true;
            used[v] = true;
        }
        g.edges().iter().all(|&(u, v)| used[u] || used[v])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(Graph::new(3, &[(0, 0)]), Err(Error::Structure(_))));
        assert!(matches!(Graph::new(3, &[(0, 1), (1, 0), (1, 2)]), Err(Error::Structure(_))));
        assert!(matches!(Graph::new(3, &[(0, 1)]), Err(Error::Structure(_))));
        assert!(matches!(Graph::new(2, &[(0, 5)]), Err(Error::Structure(_))));
        assert!(Graph::new(0, &[]).is_err());
    }

    #[test]
    fn maximal_matching_sizes() {
        let p4 = generate(&Family::Path(4)).unwrap();
        assert_eq!(p4.maximal_matching().len(), 2);
        let star = generate(&Family::Star(6)).unwrap();
        assert_eq!(star.maximal_matching().len(), 1);
        let k33 = generate(&Family::Multipartite { parts: 2, size: 3 }).unwrap();
        let m = k33.maximal_matching();
        assert_eq!(m.len(), 3);
        assert!(m.is_valid_in(&k33) && m.is_maximal_in(&k33));
    }

    #[test]
    fn order_roundtrip() {
        let o = VertexOrder::from_sequence(&[2, 0, 1]).unwrap();
        assert_eq!(o.ranks(), &[1, 2, 0]);
        assert_eq!(o.vertices_by_rank(), vec![2, 0, 1]);
        assert!(VertexOrder::from_ranks(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn induced_subgraph() {
        let g = generate(&Family::Complete(4)).unwrap();
        let h = g.induced(&[3, 1]).unwrap();
        assert_eq!(h.n(), 2);
        assert!(h.has_edge(0, 1));
    }
}
