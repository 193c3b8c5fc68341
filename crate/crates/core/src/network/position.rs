use super::{Comparator, Kind, Stage};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Bijection between logical slots and the vertices currently holding them.
///
/// Constructions that move pebbles around (routing before comparing,
/// relabeling after a merge) keep one of these to translate comparisons on
/// logical slots into physical comparators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionMap {
    pos: Vec<Vertex>,
    at: Vec<usize>,
}

impl PositionMap {
    pub fn identity(n: usize) -> Self {
        PositionMap { pos: (0..n).collect(), at: (0..n).collect() }
    }

    pub fn from_positions(pos: Vec<Vertex>) -> Result<Self> {
        let mut at = vec![usize::MAX; pos.len()];
        for (l, &v) in pos.iter().enumerate() {
            if v >= pos.len() || at[v] != usize::MAX {
                return Err(Error::Input("position map is not a bijection".into()));
            }
            at[v] = l;
        }
        Ok(PositionMap { pos, at })
    }

    pub fn n(&self) -> usize {
        self.pos.len()
    }

    pub fn vertex_of(&self, logical: usize) -> Vertex {
        self.pos[logical]
    }

    pub fn logical_at(&self, v: Vertex) -> usize {
        self.at[v]
    }

    pub fn positions(&self) -> &[Vertex] {
        &self.pos
    }

    pub fn is_identity(&self) -> bool {
        self.pos.iter().enumerate().all(|(l, &v)| l == v)
    }

    /// Follows the unconditional swaps of `stage`.
    pub fn apply_swaps(&mut self, stage: &Stage) {
        for c in &stage.comparators {
            if c.kind == Kind::Swap {
                self.exchange(c.u, c.v);
            }
        }
    }

    /// Exchanges the slots held by two vertices.
    pub fn exchange(&mut self, u: Vertex, v: Vertex) {
        let (a, b) = (self.at[u], self.at[v]);
        self.at.swap(u, v);
        self.pos[a] = v;
        self.pos[b] = u;
    }

    /// Reassigns `slots[i]` to `vertices[i]`. The vertices must be exactly the
    /// ones the slots occupied before.
    pub fn relabel(&mut self, slots: &[usize], vertices: &[Vertex]) -> Result<()> {
        let mut before: Vec<Vertex> = slots.iter().map(|&s| self.pos[s]).collect();
        let mut after = vertices.to_vec();
        before.sort_unstable();
        after.sort_unstable();
        if before != after {
            return Err(Error::Internal("relabel would break the position bijection".into()));
        }
        for (&s, &v) in slots.iter().zip(vertices) {
            self.pos[s] = v;
            self.at[v] = s;
        }
        Ok(())
    }
}

/// A comparator between logical slots; `Compare` puts the minimum in `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogicalComparator {
    pub a: usize,
    pub b: usize,
    pub kind: Kind,
}

/// Translates a stage over logical slots into the physical stage acting on the
/// vertices currently holding them. A pair that is not an edge of `g` means
/// the caller routed incorrectly and is reported as an internal error.
pub fn apply_position_map(template: &[LogicalComparator], pm: &PositionMap, g: &Graph) -> Result<Stage> {
    let stage = Stage::new(
        template
            .iter()
            .map(|c| Comparator { u: pm.vertex_of(c.a), v: pm.vertex_of(c.b), kind: c.kind })
            .collect(),
    );
    stage
        .validate(g)
        .map_err(|e| Error::Internal(format!("mapped stage is not a matching of the host: {e}")))?;
    Ok(stage)
}
