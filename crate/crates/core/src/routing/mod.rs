//! Routing via matchings: plans of unconditional swaps that carry every
//! pebble (or a tracked subset) to a prescribed destination.

mod multigrid;
mod multipartite;
mod path;
mod product;
mod tree;

pub use multigrid::{route_multigrid, MultigridRouter};
pub use multipartite::{route_multipartite, MultipartiteRouter};
pub use path::{route_path, route_to_path, PathRouter};
pub(crate) use path::odd_even_route;
pub use product::{route_product, ProductRouter};
pub use tree::{route_tree, TreeRouter};

use crate::error::{Error, Result};
use crate::graph::{spanning_tree, Family, Graph, Vertex};
use crate::network::{Kind, Stage};

/// `dest[i]` is where the pebble starting on vertex `i` must go.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    dest: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { dest: (0..n).collect() }
    }

    pub fn new(dest: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; dest.len()];
        for &d in &dest {
            if d >= dest.len() || seen[d] {
                return Err(Error::Input("not a permutation".into()));
            }
            seen[d] = true;
        }
        Ok(Permutation { dest })
    }

    pub fn n(&self) -> usize {
        self.dest.len()
    }

    pub fn dest(&self, i: usize) -> usize {
        self.dest[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.dest
    }

    pub fn is_identity(&self) -> bool {
        self.dest.iter().enumerate().all(|(i, &d)| i == d)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &d) in self.dest.iter().enumerate() {
            inv[d] = i;
        }
        Permutation { dest: inv }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Permutation) -> Permutation {
        Permutation { dest: first.dest.iter().map(|&x| self.dest[x]).collect() }
    }

    pub fn is_involution(&self) -> bool {
        self.dest.iter().enumerate().all(|(i, &d)| self.dest[d] == i)
    }

    /// Cycles in order of their smallest element, each starting there.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut x = self.dest[s];
            while x != s {
                seen[x] = true;
                cyc.push(x);
                x = self.dest[x];
            }
            out.push(cyc);
        }
        out
    }

    /// Completes a partial assignment `src -> dst` into a permutation.
    /// Unconstrained pebbles stay where they are when their vertex is free;
    /// the rest fill the remaining vertices in ascending order.
    pub fn complete(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<Permutation> {
        let mut dest = vec![usize::MAX; n];
        let mut taken = vec![false; n];
        for &(s, d) in pairs {
            if s >= n || d >= n || dest[s] != usize::MAX || taken[d] {
                return Err(Error::Task("partial assignment is not injective".into()));
            }
            dest[s] = d;
            taken[d] = true;
        }
        for v in 0..n {
            if dest[v] == usize::MAX && !taken[v] {
                dest[v] = v;
                taken[v] = true;
            }
        }
        let mut free = (0..n).filter(|&v| !taken[v]);
        for slot in dest.iter_mut() {
            if *slot == usize::MAX {
                *slot = free.next().expect("counts balance");
            }
        }
        Ok(Permutation { dest })
    }
}

/// A stage sequence of unconditional swaps with the map it realizes:
/// `realized[i] = Some(j)` means the pebble starting on `i` ends on `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingPlan {
    pub stages: Vec<Stage>,
    pub realized: Vec<Option<Vertex>>,
}

impl RoutingPlan {
    pub fn empty(n: usize) -> Self {
        RoutingPlan { stages: Vec::new(), realized: (0..n).map(Some).collect() }
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    /// Final vertex of the pebble starting on each vertex.
    pub fn simulate(&self, n: usize) -> Vec<Vertex> {
        let mut at: Vec<usize> = (0..n).collect();
        for s in &self.stages {
            s.apply_swaps_to(&mut at);
        }
        let mut fin = vec![0; n];
        for (v, &p) in at.iter().enumerate() {
            fin[p] = v;
        }
        fin
    }

    /// Checks swap-only matchings on `g` and that simulation realizes
    /// `realized`.
    pub fn check(&self, g: &Graph) -> Result<()> {
        for (i, s) in self.stages.iter().enumerate() {
            s.validate(g).map_err(|reason| Error::Stage { stage: i, reason })?;
            if s.comparators.iter().any(|c| c.kind != Kind::Swap) {
                return Err(Error::Stage { stage: i, reason: "routing stage holds a comparator".into() });
            }
        }
        let fin = self.simulate(g.n());
        for (i, want) in self.realized.iter().enumerate() {
            if let Some(w) = want {
                if fin[i] != *w {
                    return Err(Error::Internal(format!(
                        "pebble from {} ends on {}, expected {}",
                        i + 1,
                        fin[i] + 1,
                        w + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Runs `other` after `self`.
    pub fn then(&self, other: &RoutingPlan) -> RoutingPlan {
        let mut stages = self.stages.clone();
        stages.extend(other.stages.iter().cloned());
        let realized = self
            .realized
            .iter()
            .map(|r| r.and_then(|mid| other.realized.get(mid).copied().flatten()))
            .collect();
        RoutingPlan { stages, realized }
    }
}

/// Stage lists built in local time by independent sub-plans and merged
/// in parallel; empty stages are dropped on finish.
#[derive(Debug, Default, Clone)]
pub(crate) struct Schedule {
    stages: Vec<Vec<(Vertex, Vertex)>>,
}

impl Schedule {
    pub fn new() -> Self {
        Schedule::default()
    }

    pub fn push_at(&mut self, t: usize, e: (Vertex, Vertex)) {
        if self.stages.len() <= t {
            self.stages.resize(t + 1, Vec::new());
        }
        self.stages[t].push(e);
    }

    /// Overlays `stages` starting at time `start`, translating local ids.
    pub fn overlay(&mut self, start: usize, stages: &[Stage], map: impl Fn(Vertex) -> Vertex) {
        for (k, s) in stages.iter().enumerate() {
            for c in &s.comparators {
                self.push_at(start + k, (map(c.u), map(c.v)));
            }
        }
    }

    pub fn stages_between(&self, from: usize, to: usize) -> &[Vec<(Vertex, Vertex)>] {
        let to = to.min(self.stages.len());
        &self.stages[from.min(to)..to]
    }

    pub fn append_stage(&mut self, pairs: Vec<(Vertex, Vertex)>) {
        self.stages.push(pairs);
    }

    pub fn into_stages(self) -> Vec<Stage> {
        self.stages.into_iter().filter(|s| !s.is_empty()).map(Stage::swaps).collect()
    }
}

/// A permutation router bound to one host graph.
pub trait Router: Send + Sync {
    fn graph(&self) -> &Graph;
    fn route(&self, perm: &Permutation) -> Result<RoutingPlan>;
    /// Upper bound on the depth of every plan this router returns.
    fn depth_bound(&self) -> usize;
    fn name(&self) -> String;

    /// Routes the tracked pairs `src -> dst`; untracked pebbles end anywhere.
    fn route_partial(&self, pairs: &[(Vertex, Vertex)]) -> Result<RoutingPlan> {
        let perm = Permutation::complete(self.graph().n(), pairs)?;
        self.route(&perm)
    }
}

/// Writes `perm` as `second ∘ first` with both factors involutions
/// (products of disjoint transpositions).
pub fn two_cycle_decompose(perm: &Permutation) -> (Permutation, Permutation) {
    let n = perm.n();
    let mut first: Vec<usize> = (0..n).collect();
    let mut second: Vec<usize> = (0..n).collect();
    for cyc in perm.cycles() {
        let k = cyc.len();
        if k == 1 {
            continue;
        }
        // with perm(c_i) = c_{i+1}: first is c_i <-> c_{1-i}, second is c_i <-> c_{2-i}
        for i in 0..k {
            first[cyc[i]] = cyc[(k + 1 - i % k) % k];
            second[cyc[i]] = cyc[(2 * k + 2 - i) % k];
        }
    }
    (Permutation { dest: first }, Permutation { dest: second })
}

/// Routes an involution on `K_n` in one stage.
fn involution_stage(inv: &Permutation) -> Vec<(Vertex, Vertex)> {
    (0..inv.n()).filter(|&i| inv.dest(i) > i).map(|i| (i, inv.dest(i))).collect()
}

/// Routing on the complete graph in at most two stages.
pub fn route_complete(n: usize, perm: &Permutation) -> Result<RoutingPlan> {
    if perm.n() != n {
        return Err(Error::Input("permutation size differs from n".into()));
    }
    let (first, second) = two_cycle_decompose(perm);
    let mut sched = Schedule::new();
    sched.append_stage(involution_stage(&first));
    sched.append_stage(involution_stage(&second));
    Ok(RoutingPlan { stages: sched.into_stages(), realized: perm.as_slice().iter().map(|&d| Some(d)).collect() })
}

pub struct CompleteRouter {
    graph: Graph,
}

impl CompleteRouter {
    pub fn new(graph: Graph) -> Result<Self> {
        let n = graph.n();
        if graph.num_edges() != n * (n - 1) / 2 {
            return Err(Error::Structure("complete router needs a complete graph".into()));
        }
        Ok(CompleteRouter { graph })
    }
}

impl Router for CompleteRouter {
    fn graph(&self) -> &Graph {
        &self.graph
    }
    fn route(&self, perm: &Permutation) -> Result<RoutingPlan> {
        route_complete(self.graph.n(), perm)
    }
    fn depth_bound(&self) -> usize {
        2.min(self.graph.n().saturating_sub(1))
    }
    fn name(&self) -> String {
        "complete".into()
    }
}

/// Fallback router: routes on a spanning tree.
pub struct GenericRouter {
    graph: Graph,
    tree: TreeRouter,
}

impl GenericRouter {
    pub fn new(graph: Graph) -> Self {
        let tree = TreeRouter::new(spanning_tree(&graph)).expect("spanning tree is a tree");
        GenericRouter { graph, tree }
    }
}

impl Router for GenericRouter {
    fn graph(&self) -> &Graph {
        &self.graph
    }
    fn route(&self, perm: &Permutation) -> Result<RoutingPlan> {
        self.tree.route(perm)
    }
    fn depth_bound(&self) -> usize {
        self.tree.depth_bound()
    }
    fn name(&self) -> String {
        "generic".into()
    }
}

/// Routes on any connected graph through a spanning tree.
pub fn route_generic(g: &Graph, perm: &Permutation) -> Result<RoutingPlan> {
    GenericRouter::new(g.clone()).route(perm)
}

/// Picks the most specific router for a graph from its family tag.
pub fn router_for(g: &Graph) -> Result<Box<dyn Router>> {
    let fam = match g.family() {
        Some(f) => f.clone(),
        None => {
            return Ok(if g.is_tree() {
                Box::new(TreeRouter::new(g.clone())?)
            } else {
                Box::new(GenericRouter::new(g.clone()))
            })
        }
    };
    Ok(match fam {
        Family::Path(_) => Box::new(PathRouter::new(g.clone())?),
        Family::Complete(_) => Box::new(CompleteRouter::new(g.clone())?),
        Family::Multipartite { .. } => Box::new(MultipartiteRouter::new(g.clone())?),
        Family::Star(_) | Family::RandomTree { .. } => Box::new(TreeRouter::new(g.clone())?),
        Family::Hypercube(_) | Family::Mesh(_) | Family::Product(..) => ProductRouter::for_graph(g)?,
        Family::Pyramid { .. } | Family::Multigrid { .. } => Box::new(MultigridRouter::new(g.clone())?),
        Family::Cycle(_) | Family::RandomGraph { .. } => Box::new(GenericRouter::new(g.clone())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        Permutation::new(v).unwrap()
    }

    #[test]
    fn decomposition_identity_and_transposition() {
        let (a, b) = two_cycle_decompose(&Permutation::identity(5));
        assert!(a.is_identity() && b.is_identity());
        let t = Permutation::new(vec![1, 0, 2]).unwrap();
        let (a, b) = two_cycle_decompose(&t);
        assert_eq!(a, t);
        assert!(b.is_identity());
    }

    #[test]
    fn decomposition_composes_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let p = random_perm(9, &mut rng);
            let (a, b) = two_cycle_decompose(&p);
            assert!(a.is_involution() && b.is_involution());
            assert_eq!(b.after(&a), p);
        }
    }

    #[test]
    fn complete_routing_depths() {
        assert_eq!(route_complete(4, &Permutation::identity(4)).unwrap().depth(), 0);
        let t = Permutation::new(vec![1, 0, 2, 3]).unwrap();
        assert_eq!(route_complete(4, &t).unwrap().depth(), 1);
        let c4 = Permutation::new(vec![1, 2, 3, 0]).unwrap();
        let plan = route_complete(4, &c4).unwrap();
        assert_eq!(plan.depth(), 2);
        plan.check(&generate(&Family::Complete(4)).unwrap()).unwrap();
    }

    #[test]
    fn four_cycle_needs_two_matchings() {
        // brute force: no single matching of K4 realizes (1 2 3 4)
        let c4 = [1usize, 2, 3, 0];
        let g = generate(&Family::Complete(4)).unwrap();
        let edges = g.edges();
        for mask in 0u32..(1 << edges.len()) {
            let chosen: Vec<_> = (0..edges.len()).filter(|&i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
            let stage = Stage::swaps(chosen);
            if stage.validate(&g).is_err() {
                continue;
            }
            let plan = RoutingPlan { stages: vec![stage], realized: c4.iter().map(|&d| Some(d)).collect() };
            assert!(plan.check(&g).is_err());
        }
    }

    #[test]
    fn complete_fills_partial_assignment() {
        let p = Permutation::complete(5, &[(0, 3), (4, 0)]).unwrap();
        assert_eq!(p.as_slice(), &[3, 1, 2, 4, 0]);
        assert!(Permutation::complete(3, &[(0, 1), (2, 1)]).is_err());
    }

    #[test]
    fn generic_routes_k5_and_mesh() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for fam in [Family::Complete(5), Family::Mesh(vec![4, 4])] {
            let g = generate(&fam).unwrap();
            for _ in 0..50 {
                let p = random_perm(g.n(), &mut rng);
                let plan = route_generic(&g, &p).unwrap();
                plan.check(&g).unwrap();
                assert!(plan.depth() <= 3 * g.n());
            }
            assert_eq!(route_generic(&g, &Permutation::identity(g.n())).unwrap().depth(), 0);
        }
    }
}
