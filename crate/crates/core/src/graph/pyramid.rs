use std::ops::Range;

use super::{generate, Family, Graph, Vertex};
use crate::error::{Error, Result};

/// Vertex bookkeeping for the `levels`-level, `dim`-dimensional pyramid.
///
/// Level `l` is a mesh of side `2^l` with `2^(l*dim)` vertices, stored
/// contiguously after all higher levels. A vertex at level `l >= 1` with
/// 0-based coordinates `x` has parent `x / 2` (coordinate-wise) one level up.
/// The multigrid keeps only the vertical edges whose lower endpoint has all
/// coordinates even, so vertical edges form vertex-disjoint paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PyramidLayout {
    levels: usize,
    dim: usize,
    offsets: Vec<usize>,
}

impl PyramidLayout {
    pub fn new(levels: usize, dim: usize) -> Result<Self> {
        if levels == 0 || dim == 0 {
            return Err(Error::Param("pyramid needs levels >= 1 and dim >= 1".into()));
        }
        if (levels - 1) * dim > 24 {
            return Err(Error::Param("pyramid too large".into()));
        }
        let mut offsets = vec![0];
        for l in 0..levels {
            offsets.push(offsets[l] + (1usize << (l * dim)));
        }
        Ok(PyramidLayout { levels, dim, offsets })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.offsets[self.levels]
    }

    pub fn side(&self, level: usize) -> usize {
        1 << level
    }

    pub fn level_size(&self, level: usize) -> usize {
        1 << (level * self.dim)
    }

    /// Global ids of level `level`, in mesh (row-major) order.
    pub fn level_range(&self, level: usize) -> Range<Vertex> {
        self.offsets[level]..self.offsets[level + 1]
    }

    /// Number of vertices in levels `0..levels_above`.
    pub fn size_above(&self, levels_above: usize) -> usize {
        self.offsets[levels_above]
    }

    pub fn level_of(&self, v: Vertex) -> usize {
        self.offsets.partition_point(|&o| o <= v) - 1
    }

    pub fn coords(&self, v: Vertex) -> (usize, Vec<usize>) {
        let l = self.level_of(v);
        let mut local = v - self.offsets[l];
        let side = self.side(l);
        let mut c = vec![0; self.dim];
        for k in (0..self.dim).rev() {
            c[k] = local % side;
            local /= side;
        }
        (l, c)
    }

    pub fn index(&self, level: usize, coords: &[usize]) -> Vertex {
        let side = self.side(level);
        self.offsets[level] + coords.iter().fold(0, |acc, &x| acc * side + x)
    }

    /// Parent in the full pyramid.
    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        let (l, c) = self.coords(v);
        if l == 0 {
            return None;
        }
        let up: Vec<usize> = c.iter().map(|x| x / 2).collect();
        Some(self.index(l - 1, &up))
    }

    /// The unique child kept by the multigrid (all coordinates doubled).
    pub fn vertical_child(&self, v: Vertex) -> Option<Vertex> {
        let (l, c) = self.coords(v);
        if l + 1 >= self.levels {
            return None;
        }
        let down: Vec<usize> = c.iter().map(|x| 2 * x).collect();
        Some(self.index(l + 1, &down))
    }

    /// Whether `v` has a vertical edge to its parent in the multigrid.
    pub fn has_vertical_parent(&self, v: Vertex) -> bool {
        let (l, c) = self.coords(v);
        l > 0 && c.iter().all(|x| x % 2 == 0)
    }

    /// Maximal vertical paths of the multigrid, top vertex first, ordered by
    /// top vertex id.
    pub fn vertical_paths(&self) -> Vec<Vec<Vertex>> {
        (0..self.n())
            .filter(|&v| !self.has_vertical_parent(v))
            .map(|top| {
                let mut path = vec![top];
                while let Some(c) = self.vertical_child(*path.last().unwrap()) {
                    path.push(c);
                }
                path
            })
            .collect()
    }

    /// Number of maximal vertical paths with `k` edges.
    pub fn phi(&self, k: usize) -> usize {
        let m = self.levels;
        if k >= m {
            0
        } else if k == m - 1 {
            1
        } else {
            // paths of length k start at level m-k-1
            let top = m - k - 1;
            self.level_size(top) - self.level_size(top - 1)
        }
    }

    /// The mesh on one level, in local numbering.
    pub fn level_graph(&self, level: usize) -> Result<Graph> {
        generate(&Family::Mesh(vec![self.side(level); self.dim]))
    }

    pub fn graph(&self, stripped: bool) -> Result<Graph> {
        let mut edges = Vec::new();
        for l in 0..self.levels {
            let mesh = self.level_graph(l)?;
            let off = self.offsets[l];
            edges.extend(mesh.edges().into_iter().map(|(a, b)| (a + off, b + off)));
        }
        for v in self.offsets[1]..self.n() {
            if !stripped || self.has_vertical_parent(v) {
                let p = self.parent(v).expect("level >= 1");
                edges.push((p, v));
            }
        }
        Graph::new(self.n(), &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_sizes() {
        for m in 1..=4 {
            for d in 1..=3 {
                let lay = PyramidLayout::new(m, d).unwrap();
                let closed = ((1usize << (m * d)) - 1) / ((1usize << d) - 1);
                assert_eq!(lay.n(), closed, "m={m} d={d}");
                let g = generate(&Family::Pyramid { levels: m, dim: d }).unwrap();
                assert_eq!(g.n(), closed);
            }
        }
        assert_eq!(PyramidLayout::new(2, 2).unwrap().n(), 5);
    }

    #[test]
    fn multigrid_is_connected_subgraph_with_phi() {
        for m in 1..=4 {
            for d in 1..=2 {
                let lay = PyramidLayout::new(m, d).unwrap();
                let full = lay.graph(false).unwrap();
                let strip = lay.graph(true).unwrap();
                assert!(strip.is_subgraph_of(&full));
                assert!(strip.is_connected());
                let paths = lay.vertical_paths();
                let covered: usize = paths.iter().map(Vec::len).sum();
                assert_eq!(covered, lay.n());
                for k in 0..m {
                    let count = paths.iter().filter(|p| p.len() == k + 1).count();
                    assert_eq!(count, lay.phi(k), "m={m} d={d} k={k}");
                }
            }
        }
        let lay = PyramidLayout::new(3, 2).unwrap();
        assert_eq!(lay.phi(2), 1);
        assert_eq!(lay.phi(1), 3);
    }

    #[test]
    fn coords_roundtrip() {
        let lay = PyramidLayout::new(3, 2).unwrap();
        for v in 0..lay.n() {
            let (l, c) = lay.coords(v);
            assert_eq!(lay.index(l, &c), v);
        }
        assert_eq!(lay.parent(lay.index(2, &[3, 2])), Some(lay.index(1, &[1, 1])));
    }
}
