//! Sorting networks on graphs: stages of directed comparators and
//! unconditional swaps, executed over pebble configurations.

mod json;
mod position;

pub use json::{network_from_json, network_to_json, NetworkJson};
pub use position::{apply_position_map, LogicalComparator, PositionMap};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::construct::DepthCertificate;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexOrder};
use crate::routing::RoutingPlan;

/// What a matched edge does during a stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// Compare-exchange; the smaller pebble lands on `u`.
    Compare,
    /// Exchange regardless of the pebbles.
    Swap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Comparator {
    pub u: Vertex,
    pub v: Vertex,
    pub kind: Kind,
}

impl Comparator {
    pub fn compare(u: Vertex, v: Vertex) -> Self {
        Comparator { u, v, kind: Kind::Compare }
    }

    pub fn swap(u: Vertex, v: Vertex) -> Self {
        Comparator { u, v, kind: Kind::Swap }
    }
}

/// One matching of the host graph with an action on every matched edge.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Stage {
    pub comparators: Vec<Comparator>,
}

impl Stage {
    pub fn new(comparators: Vec<Comparator>) -> Self {
        Stage { comparators }
    }

    pub fn swaps(pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        Stage { comparators: pairs.into_iter().map(|(u, v)| Comparator::swap(u, v)).collect() }
    }

    pub fn len(&self) -> usize {
        self.comparators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comparators.is_empty()
    }

    /// Checks the matching property and that every pair is an edge of `g`.
    pub fn validate(&self, g: &Graph) -> std::result::Result<(), String> {
        let mut used = vec![false; g.n()];
        for c in &self.comparators {
            if !g.has_edge(c.u, c.v) {
                return Err(format!("({}, {}) is not an edge", c.u + 1, c.v + 1));
            }
            if used[c.u] || used[c.v] {
                return Err(format!("vertex shared by two comparators at ({}, {})", c.u + 1, c.v + 1));
            }
            used[c.u] = true;
            used[c.v] = true;
        }
        Ok(())
    }

    pub fn apply<K: Ord>(&self, keys: &mut [K]) {
        for c in &self.comparators {
            match c.kind {
                Kind::Compare => {
                    if keys[c.u] > keys[c.v] {
                        keys.swap(c.u, c.v);
                    }
                }
                Kind::Swap => keys.swap(c.u, c.v),
            }
        }
    }

    /// Bit-sliced execution: `words[v]` carries 64 independent binary inputs.
    pub fn apply_words(&self, words: &mut [u64]) {
        for c in &self.comparators {
            let (a, b) = (words[c.u], words[c.v]);
            match c.kind {
                Kind::Compare => {
                    words[c.u] = a & b;
                    words[c.v] = a | b;
                }
                Kind::Swap => {
                    words[c.u] = b;
                    words[c.v] = a;
                }
            }
        }
    }

    /// Moves a pebble-tracking array through the swaps of this stage;
    /// compare-exchanges are treated as data dependent and left alone.
    pub fn apply_swaps_to<T>(&self, at: &mut [T]) {
        for c in &self.comparators {
            if c.kind == Kind::Swap {
                at.swap(c.u, c.v);
            }
        }
    }
}

/// Which construction built a network, with its parameters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    pub params: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(construction: &str) -> Self {
        Provenance { construction: construction.into(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }
}

/// A data-oblivious stage sequence on a graph together with the vertex
/// order it sorts into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortingNetwork {
    pub graph: Graph,
    pub stages: Vec<Stage>,
    pub order: VertexOrder,
    pub provenance: Provenance,
    pub certificate: Option<DepthCertificate>,
}

/// Key assignment over vertices; index `v` holds the pebble on vertex `v`.
pub type PebbleConfig<K> = Vec<K>;

impl SortingNetwork {
    pub fn new(graph: Graph, stages: Vec<Stage>, order: VertexOrder, provenance: Provenance) -> Result<Self> {
        if order.n() != graph.n() {
            return Err(Error::Input("order length differs from vertex count".into()));
        }
        for (i, s) in stages.iter().enumerate() {
            s.validate(&graph).map_err(|reason| Error::Stage { stage: i, reason })?;
        }
        Ok(SortingNetwork { graph, stages, order, provenance, certificate: None })
    }

    pub fn with_certificate(mut self, cert: DepthCertificate) -> Self {
        self.certificate = Some(cert);
        self
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    /// Total number of comparators and swaps.
    pub fn size(&self) -> usize {
        self.stages.iter().map(Stage::len).sum()
    }

    /// Runs every stage in order on a copy of `input`.
    pub fn execute<K: Ord + Clone>(&self, input: &[K]) -> Result<PebbleConfig<K>> {
        if input.len() != self.n() {
            return Err(Error::Input(format!(
                "input has {} keys, network has {} vertices",
                input.len(),
                self.n()
            )));
        }
        let mut keys = input.to_vec();
        for s in &self.stages {
            s.apply(&mut keys);
        }
        Ok(keys)
    }

    /// True when `keys` is sorted with respect to the target order.
    pub fn is_sorted<K: Ord>(&self, keys: &[K]) -> bool {
        is_sorted_by_order(keys, &self.order)
    }

    /// Appends `other`'s stages; the result sorts into `other`'s order.
    pub fn concatenate(&self, other: &SortingNetwork) -> Result<SortingNetwork> {
        if self.graph.edges() != other.graph.edges() {
            return Err(Error::GraphMismatch("networks live on different graphs".into()));
        }
        let mut stages = self.stages.clone();
        stages.extend(other.stages.iter().cloned());
        let prov = Provenance::new("concatenate")
            .with("first", &self.provenance.construction)
            .with("second", &other.provenance.construction);
        SortingNetwork::new(self.graph.clone(), stages, other.order.clone(), prov)
    }

    /// Appends a routing plan and declares the order it produces.
    pub fn then_route(&self, plan: &RoutingPlan, order: VertexOrder) -> Result<SortingNetwork> {
        let mut stages = self.stages.clone();
        stages.extend(plan.stages.iter().cloned());
        let prov = Provenance::new("concatenate")
            .with("first", &self.provenance.construction)
            .with("second", "routing");
        SortingNetwork::new(self.graph.clone(), stages, order, prov)
    }
}

pub fn is_sorted_by_order<K: Ord>(keys: &[K], order: &VertexOrder) -> bool {
    let by_rank = order.vertices_by_rank();
    by_rank.windows(2).all(|w| keys[w[0]] <= keys[w[1]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    fn p2() -> Graph {
        generate(&Family::Path(2)).unwrap()
    }

    #[test]
    fn empty_network_is_identity() {
        let net = SortingNetwork::new(p2(), vec![], VertexOrder::identity(2), Provenance::new("t")).unwrap();
        assert_eq!(net.execute(&[5, 3]).unwrap(), vec![5, 3]);
    }

    #[test]
    fn comparator_and_swap_semantics() {
        let cmp = Stage::new(vec![Comparator::compare(0, 1)]);
        let net = SortingNetwork::new(p2(), vec![cmp], VertexOrder::identity(2), Provenance::new("t")).unwrap();
        assert_eq!(net.execute(&[5, 3]).unwrap(), vec![3, 5]);
        let sw = Stage::swaps([(0, 1)]);
        let net = SortingNetwork::new(p2(), vec![sw], VertexOrder::identity(2), Provenance::new("t")).unwrap();
        assert_eq!(net.execute(&[3, 5]).unwrap(), vec![5, 3]);
        assert!(net.execute(&[1, 2, 3]).is_err());
    }

    #[test]
    fn invalid_stages_are_rejected() {
        let g = generate(&Family::Path(3)).unwrap();
        let overlap = Stage::new(vec![Comparator::compare(0, 1), Comparator::compare(1, 2)]);
        let err = SortingNetwork::new(g.clone(), vec![Stage::default(), overlap], VertexOrder::identity(3), Provenance::new("t"));
        assert!(matches!(err, Err(Error::Stage { stage: 1, .. })));
        let nonedge = Stage::new(vec![Comparator::compare(0, 2)]);
        assert!(SortingNetwork::new(g, vec![nonedge], VertexOrder::identity(3), Provenance::new("t")).is_err());
    }

    #[test]
    fn concatenation_adds_depth() {
        let g = generate(&Family::Path(4)).unwrap();
        let mk = |d: usize| {
            let stages = (0..d).map(|_| Stage::new(vec![Comparator::compare(0, 1)])).collect();
            SortingNetwork::new(g.clone(), stages, VertexOrder::identity(4), Provenance::new("t")).unwrap()
        };
        assert_eq!(mk(3).concatenate(&mk(2)).unwrap().depth(), 5);
        assert_eq!(mk(3).concatenate(&mk(0)).unwrap().stages, mk(3).stages);
        let other = SortingNetwork::new(generate(&Family::Cycle(4)).unwrap(), vec![], VertexOrder::identity(4), Provenance::new("t")).unwrap();
        assert!(matches!(mk(1).concatenate(&other), Err(Error::GraphMismatch(_))));
    }

    #[test]
    fn bitsliced_matches_scalar() {
        let g = generate(&Family::Complete(3)).unwrap();
        let stage = Stage::new(vec![Comparator::compare(2, 0)]);
        let swap = Stage::swaps([(1, 2)]);
        for input in 0u64..8 {
            let mut keys: Vec<u8> = (0..3).map(|b| ((input >> b) & 1) as u8).collect();
            let mut words: Vec<u64> = keys.iter().map(|&k| k as u64).collect();
            stage.apply(&mut keys);
            swap.apply(&mut keys);
            stage.apply_words(&mut words);
            swap.apply_words(&mut words);
            assert_eq!(keys.iter().map(|&k| k as u64).collect::<Vec<_>>(), words);
        }
        let _ = g;
    }
}
