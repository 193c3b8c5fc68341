use super::{finish, DepthCertificate};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexOrder};
use crate::network::{apply_position_map, Kind, LogicalComparator, PositionMap, Provenance, SortingNetwork, Stage};
use crate::routing::{Permutation, Router};

/// Runs a network for the complete graph on `g`.
///
/// The logical comparisons of each base stage are split into groups no
/// larger than a greedy maximal matching of `g`. For every group the router
/// brings each compared pair onto its own matching edge, then one stage of
/// comparators runs on those edges. A final routing returns logical slot `i`
/// to vertex `i`.
pub fn simulate_complete(g: &Graph, base: &SortingNetwork, router: &dyn Router) -> Result<SortingNetwork> {
    let n = g.n();
    if base.n() != n {
        return Err(Error::Input("base network size differs from the graph".into()));
    }
    if router.graph().edges() != g.edges() {
        return Err(Error::GraphMismatch("router is bound to another graph".into()));
    }
    let matching = g.maximal_matching().edges;
    let nu = matching.len().max(1);
    let rt = router.depth_bound();

    // logical slot i is the base vertex of rank i
    let slot_of = base.order.ranks().to_vec();
    let mut pm = PositionMap::identity(n);
    let mut stages: Vec<Stage> = Vec::new();
    for bs in &base.stages {
        let logical: Vec<LogicalComparator> = bs
            .comparators
            .iter()
            .map(|c| LogicalComparator { a: slot_of[c.u], b: slot_of[c.v], kind: c.kind })
            .collect();
        for group in logical.chunks(nu) {
            let adjacent = group.iter().all(|c| g.has_edge(pm.vertex_of(c.a), pm.vertex_of(c.b)));
            if !adjacent {
                let mut pairs = Vec::with_capacity(2 * group.len());
                for (c, &(x, y)) in group.iter().zip(&matching) {
                    pairs.push((pm.vertex_of(c.a), x));
                    pairs.push((pm.vertex_of(c.b), y));
                }
                let plan = router.route_partial(&pairs)?;
                for s in &plan.stages {
                    pm.apply_swaps(s);
                }
                stages.extend(plan.stages);
            }
            let stage = apply_position_map(group, &pm, g)?;
            // swaps inside the base network move logical slots too
            for c in &stage.comparators {
                if c.kind == Kind::Swap {
                    pm.exchange(c.u, c.v);
                }
            }
            stages.push(stage);
        }
    }
    if !pm.is_identity() {
        let mut dest = vec![0; n];
        for l in 0..n {
            dest[pm.vertex_of(l)] = l;
        }
        let plan = router.route(&Permutation::new(dest)?)?;
        stages.extend(plan.stages);
    }
    // logical slot i sits on vertex i and holds the key of base rank i
    let order = VertexOrder::identity(n);
    let groups = n.div_ceil(nu);
    let bound = base.depth() * groups * (rt + 1) + rt;
    let cert = DepthCertificate::new("simulate_complete")
        .param("n", n)
        .param("nu_hat", nu)
        .param("rt_used", rt)
        .param("base_depth", base.depth())
        .bound(bound);
    let prov = Provenance::new("simulate_complete")
        .with("base", &base.provenance.construction)
        .with("router", router.name());
    finish(g.clone(), stages, order, prov, cert, false)
}
