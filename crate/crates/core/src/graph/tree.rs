use super::{Graph, Vertex};
use crate::error::{Error, Result};

/// Spanning tree of a connected graph.
///
/// Trees are returned unchanged. Otherwise a double BFS picks an endpoint
/// `u` of a longest shortest path and the result is the DFS tree from `u`
/// (neighbors in ascending order). Every vertex sits at least as deep in a DFS
/// tree as its BFS distance, so the tree diameter is at least the
/// eccentricity of `u`.
pub fn spanning_tree(g: &Graph) -> Graph {
    if g.is_tree() {
        return g.clone();
    }
    let u = farthest(g, 0);
    let n = g.n();
    let mut visited = vec![false; n];
    let mut edges = Vec::with_capacity(n - 1);
    let mut stack: Vec<(Vertex, usize)> = vec![(u, 0)];
    visited[u] = true;
    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        if let Some(&w) = g.neighbors(v).get(*next) {
            *next += 1;
            if !visited[w] {
                visited[w] = true;
                edges.push((v, w));
                stack.push((w, 0));
            }
        } else {
            stack.pop();
        }
    }
    Graph::new(n, &edges).expect("DFS tree of a connected graph")
}

fn farthest(g: &Graph, src: Vertex) -> Vertex {
    let dist = g.bfs(src);
    let best = dist.iter().copied().max().unwrap_or(0);
    dist.iter().position(|&d| d == best).unwrap_or(src)
}

/// A simple path realizing the diameter of a tree (double BFS).
pub fn tree_diameter_path(t: &Graph) -> Result<Vec<Vertex>> {
    if !t.is_tree() {
        return Err(Error::Structure("diameter path requested on a non-tree".into()));
    }
    let a = farthest(t, 0);
    let b = farthest(t, a);
    Ok(t.shortest_path(a, b).expect("tree is connected"))
}

/// A closed DFS walk over a tree together with one selected walk index per
/// vertex.
///
/// Vertices at even depth are marked at their first visit, vertices at odd
/// depth at their last visit; consecutive marks are at most 3 walk steps
/// apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contour {
    pub walk: Vec<Vertex>,
    pub marks: Vec<usize>,
}

impl Contour {
    /// Tree vertices in walk order of their marks.
    pub fn marked_sequence(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = (0..self.marks.len()).collect();
        v.sort_by_key(|&x| self.marks[x]);
        v
    }

    /// Largest gap between consecutive marked walk indices.
    pub fn max_mark_gap(&self) -> usize {
        let mut idx: Vec<usize> = self.marks.clone();
        idx.sort_unstable();
        idx.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    /// Checks the walk and mark invariants against `t`.
    pub fn check(&self, t: &Graph) -> Result<()> {
        let n = t.n();
        if self.walk.len() != 2 * n - 1 {
            return Err(Error::Structure("contour length is not 2n-1".into()));
        }
        let mut crossings = std::collections::HashMap::new();
        for w in self.walk.windows(2) {
            if !t.has_edge(w[0], w[1]) {
                return Err(Error::Structure("contour steps off the tree".into()));
            }
            *crossings.entry((w[0].min(w[1]), w[0].max(w[1]))).or_insert(0) += 1;
        }
        if crossings.len() != n - 1 || crossings.values().any(|&c| c != 2) {
            return Err(Error::Structure("contour does not cross every edge twice".into()));
        }
        for (v, &m) in self.marks.iter().enumerate() {
            if self.walk.get(m) != Some(&v) {
                return Err(Error::Structure("mark does not project to its vertex".into()));
            }
        }
        if self.max_mark_gap() > 3 {
            return Err(Error::Structure("mark gap exceeds 3".into()));
        }
        Ok(())
    }
}

/// DFS contour of a tree from `root`, children visited in ascending order.
pub fn tree_contour(t: &Graph, root: Vertex) -> Result<Contour> {
    if !t.is_tree() {
        return Err(Error::Structure("contour requested on a non-tree".into()));
    }
    if root >= t.n() {
        return Err(Error::Param("root out of range".into()));
    }
    let n = t.n();
    let mut walk = Vec::with_capacity(2 * n - 1);
    let mut depth = vec![0usize; n];
    let mut first = vec![usize::MAX; n];
    let mut last = vec![0usize; n];
    // (vertex, parent, next neighbor index)
    let mut stack: Vec<(Vertex, Vertex, usize)> = vec![(root, usize::MAX, 0)];
    walk.push(root);
    first[root] = 0;
    while let Some(top) = stack.last_mut() {
        let (v, parent, next) = *top;
        let nb = t.neighbors(v);
        match nb[next..].iter().position(|&w| w != parent) {
            Some(off) => {
                let w = nb[next + off];
                top.2 = next + off + 1;
                depth[w] = depth[v] + 1;
                walk.push(w);
                first[w] = walk.len() - 1;
                last[w] = walk.len() - 1;
                stack.push((w, v, 0));
            }
            None => {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    walk.push(p);
                    last[p] = walk.len() - 1;
                }
            }
        }
    }
    let marks = (0..n)
        .map(|v| if depth[v] % 2 == 0 { first[v] } else { last[v] })
        .collect();
    Ok(Contour { walk, marks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    #[test]
    fn spanning_tree_of_tree_is_itself() {
        let t = generate(&Family::RandomTree { n: 15, seed: 2 }).unwrap();
        assert_eq!(spanning_tree(&t), t);
    }

    #[test]
    fn spanning_trees_are_subgraph_trees() {
        for fam in [Family::Complete(4), Family::Mesh(vec![3, 3]), Family::Pyramid { levels: 3, dim: 2 }] {
            let g = generate(&fam).unwrap();
            let t = spanning_tree(&g);
            assert!(t.is_tree());
            assert!(t.is_subgraph_of(&g));
            assert_eq!(t.num_edges(), g.n() - 1);
        }
    }

    #[test]
    fn diameter_paths() {
        let p = generate(&Family::Path(6)).unwrap();
        assert_eq!(tree_diameter_path(&p).unwrap().len(), 6);
        let s = generate(&Family::Star(5)).unwrap();
        let d = tree_diameter_path(&s).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d[1], 0);
        assert!(tree_diameter_path(&generate(&Family::Cycle(4)).unwrap()).is_err());
    }

    #[test]
    fn diameter_matches_all_pairs_bfs() {
        for seed in 0..20 {
            let t = generate(&Family::RandomTree { n: 50, seed }).unwrap();
            let path = tree_diameter_path(&t).unwrap();
            assert_eq!(path.len() - 1, t.diameter());
            assert!(path.windows(2).all(|w| t.has_edge(w[0], w[1])));
        }
    }

    #[test]
    fn contour_small_cases() {
        let p2 = generate(&Family::Path(2)).unwrap();
        let c = tree_contour(&p2, 0).unwrap();
        assert_eq!(c.walk, vec![0, 1, 0]);
        c.check(&p2).unwrap();

        let star = generate(&Family::Star(4)).unwrap();
        let c = tree_contour(&star, 0).unwrap();
        assert_eq!(c.walk.len(), 9);
        for leaf in 1..=4 {
            assert_eq!(c.walk.iter().filter(|&&v| v == leaf).count(), 1);
        }
        assert_eq!(c.walk.iter().filter(|&&v| v == 0).count(), 5);
        c.check(&star).unwrap();
    }

    #[test]
    fn contour_visits_by_degree() {
        let t = generate(&Family::RandomTree { n: 20, seed: 9 }).unwrap();
        let c = tree_contour(&t, 0).unwrap();
        c.check(&t).unwrap();
        for v in 1..t.n() {
            assert_eq!(c.walk.iter().filter(|&&x| x == v).count(), t.degree(v));
        }
    }
}
