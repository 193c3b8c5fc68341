//! Builders for sorting networks on graphs, each returning a network with a
//! depth certificate that is checked against the depth actually achieved.

mod auto;
mod classic;
mod contour;
mod pyramid;
mod simulate;
mod subgraph;

pub use auto::{build_named, default_sorter, CONSTRUCTIONS};
pub use classic::{batcher_complete, batcher_stages, bitonic_hypercube, odd_even_transposition, sequential_sorter};
pub use contour::contour_tree_sort;
pub use pyramid::pyramid_sort;
pub use simulate::simulate_complete;
pub use subgraph::{
    longest_path_sort, parallel_subgraph_sort, product_sort, product_sort_for, subgraph_sort, PartialRouter,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexOrder};
use crate::network::{Comparator, Kind, Provenance, SortingNetwork, Stage};

/// Depth bound a construction claims for its output, next to the depth it
/// actually achieved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthCertificate {
    pub formula_name: String,
    pub parameters: BTreeMap<String, u64>,
    pub claimed_bound: u64,
    pub achieved_depth: u64,
}

impl DepthCertificate {
    pub fn new(formula_name: &str) -> Self {
        DepthCertificate {
            formula_name: formula_name.into(),
            parameters: BTreeMap::new(),
            claimed_bound: 0,
            achieved_depth: 0,
        }
    }

    pub fn param(mut self, key: &str, value: usize) -> Self {
        self.parameters.insert(key.into(), value as u64);
        self
    }

    pub fn bound(mut self, claimed: usize) -> Self {
        self.claimed_bound = claimed as u64;
        self
    }

    pub fn holds(&self) -> bool {
        self.achieved_depth <= self.claimed_bound
    }
}

/// Comparator lists indexed by time step; sub-networks running in
/// parallel on disjoint vertices are overlaid here.
#[derive(Debug, Default, Clone)]
pub(crate) struct Layered {
    stages: Vec<Vec<Comparator>>,
}

impl Layered {
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn push_at(&mut self, t: usize, c: Comparator) {
        if self.stages.len() <= t {
            self.stages.resize(t + 1, Vec::new());
        }
        self.stages[t].push(c);
    }

    pub fn extend_stages(&mut self, start: usize, stages: &[Stage]) {
        for (k, s) in stages.iter().enumerate() {
            for &c in &s.comparators {
                self.push_at(start + k, c);
            }
        }
    }

    /// Non-empty stages only.
    pub fn into_stages(self) -> Vec<Stage> {
        self.stages.into_iter().filter(|s| !s.is_empty()).map(Stage::new).collect()
    }
}

/// Runs `stages` (local ids) with only the vertices flagged in `real`
/// holding keys that matter; every other vertex is treated as holding `+∞`.
///
/// A comparator whose `v` side holds `+∞` never moves anything and is
/// dropped; one whose `u` side holds `+∞` always moves the real key to `u`
/// and becomes a swap. The flags travel with the swaps. If the original
/// stages sort every input into an order, the real keys end sorted on the
/// lowest ranks of that order.
pub(crate) fn restrict_to_real(stages: &[Stage], real: &mut [bool]) -> Vec<Vec<Comparator>> {
    stages
        .iter()
        .map(|s| {
            let mut out = Vec::new();
            for &c in &s.comparators {
                match (c.kind, real[c.u], real[c.v]) {
                    (Kind::Swap, a, b) => {
                        if a || b {
                            out.push(c);
                        }
                        real.swap(c.u, c.v);
                    }
                    (Kind::Compare, true, true) => out.push(c),
                    (Kind::Compare, false, true) => {
                        out.push(Comparator::swap(c.u, c.v));
                        real.swap(c.u, c.v);
                    }
                    (Kind::Compare, _, false) => {}
                }
            }
            out
        })
        .collect()
}

/// Builds the network, drops empty stages when asked, fills in the achieved
/// depth and rejects a broken certificate.
pub(crate) fn finish(
    graph: Graph,
    stages: Vec<Stage>,
    order: VertexOrder,
    provenance: Provenance,
    mut cert: DepthCertificate,
    keep_empty: bool,
) -> Result<SortingNetwork> {
    let stages: Vec<Stage> = if keep_empty { stages } else { stages.into_iter().filter(|s| !s.is_empty()).collect() };
    cert.achieved_depth = stages.len() as u64;
    if !cert.holds() {
        return Err(Error::Internal(format!(
            "{}: depth {} exceeds the certified bound {}",
            cert.formula_name, cert.achieved_depth, cert.claimed_bound
        )));
    }
    Ok(SortingNetwork::new(graph, stages, order, provenance)?.with_certificate(cert))
}

/// Maps the stages of a network on local ids through `map`.
pub(crate) fn relabel_stages(stages: &[Stage], map: &[Vertex]) -> Vec<Stage> {
    stages
        .iter()
        .map(|s| Stage::new(s.comparators.iter().map(|c| Comparator { u: map[c.u], v: map[c.v], kind: c.kind }).collect()))
        .collect()
}

pub(crate) fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}
