use super::auto::default_sorter;
use super::{batcher_stages, finish, odd_even_transposition, relabel_stages, restrict_to_real, sequential_sorter};
use super::{DepthCertificate, Layered};
use crate::error::{Error, Result};
use crate::graph::{cartesian_product, generate, spanning_tree, tree_diameter_path, Family, Graph, Vertex, VertexOrder};
use crate::network::{Comparator, Kind, PositionMap, Provenance, SortingNetwork, Stage};
use crate::routing::{route_to_path, router_for, Permutation, ProductRouter, Router, RoutingPlan};

/// How pebbles of a merge are brought into the sorting subgraph.
pub enum PartialRouter {
    /// Gathering onto the diameter path of a spanning tree.
    ToPath { tree: Graph, diameter: usize },
    /// A full permutation router; untracked pebbles go anywhere.
    Full(Box<dyn Router>),
}

impl PartialRouter {
    pub fn to_path(tree: Graph) -> Result<Self> {
        let diameter = tree_diameter_path(&tree)?.len() - 1;
        Ok(PartialRouter::ToPath { tree, diameter })
    }

    pub fn route(&self, sources: &[Vertex], targets: &[Vertex]) -> Result<RoutingPlan> {
        match self {
            PartialRouter::ToPath { tree, .. } => route_to_path(tree, sources, targets),
            PartialRouter::Full(r) => {
                let pairs: Vec<(Vertex, Vertex)> = sources.iter().copied().zip(targets.iter().copied()).collect();
                r.route_partial(&pairs)
            }
        }
    }

    /// Depth bound for gathering `k` pebbles.
    pub fn bound(&self, k: usize) -> usize {
        match self {
            PartialRouter::ToPath { diameter, .. } => diameter + 2 * k.saturating_sub(1),
            PartialRouter::Full(r) => r.depth_bound(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            PartialRouter::ToPath { .. } => "route_to_path".into(),
            PartialRouter::Full(r) => r.name(),
        }
    }
}

/// A connected subgraph with a sorting network in its own local ids.
struct Host {
    by_rank: Vec<Vertex>,
    rank_of_local: Vec<usize>,
    local_to_global: Vec<Vertex>,
    stages: Vec<Stage>,
}

impl Host {
    fn new(g: &Graph, vertices: &[Vertex], net: &SortingNetwork) -> Result<Self> {
        if net.n() != vertices.len() {
            return Err(Error::Input("subgraph network size differs from the subgraph".into()));
        }
        if !g.induced(vertices)?.is_connected() {
            return Err(Error::Structure("sorting subgraph is disconnected".into()));
        }
        for s in &net.stages {
            for c in &s.comparators {
                if !g.has_edge(vertices[c.u], vertices[c.v]) {
                    return Err(Error::Structure("subgraph network uses a non-edge of the host".into()));
                }
            }
        }
        Ok(Host {
            by_rank: net.order.vertices_by_rank().into_iter().map(|l| vertices[l]).collect(),
            rank_of_local: net.order.ranks().to_vec(),
            local_to_global: vertices.to_vec(),
            stages: net.stages.clone(),
        })
    }
}

/// Block merge sort: logical slots are cut into blocks of `s` (the last
/// one possibly shorter) and each merge of the batches routes its blocks
/// into one host, sorts them there and hands the low block the smallest
/// keys. Returns the stages including the final routing of slot `i` to
/// vertex `i`.
fn block_sort(
    g: &Graph,
    hosts: &[Host],
    router: &PartialRouter,
    fixup: &dyn Router,
    s: usize,
    batches: &[Vec<Vec<usize>>],
) -> Result<Vec<Stage>> {
    let n = g.n();
    let block = |b: usize| (b * s)..((b + 1) * s).min(n);
    let mut pm = PositionMap::identity(n);
    let mut lay = Layered::default();
    let mut t = 0;
    for batch in batches {
        if batch.len() > hosts.len() {
            return Err(Error::Internal("more merges than sorting subgraphs".into()));
        }
        let mut sources = Vec::new();
        let mut targets = Vec::new();
        let mut merges: Vec<(Vec<usize>, &Host)> = Vec::new();
        for (merge, host) in batch.iter().zip(hosts) {
            let slots: Vec<usize> = merge.iter().flat_map(|&b| block(b)).collect();
            if slots.len() > host.by_rank.len() {
                return Err(Error::Internal("merge exceeds the subgraph size".into()));
            }
            sources.extend(slots.iter().map(|&l| pm.vertex_of(l)));
            targets.extend_from_slice(&host.by_rank[..slots.len()]);
            merges.push((slots, host));
        }
        let plan = router.route(&sources, &targets)?;
        for st in &plan.stages {
            pm.apply_swaps(st);
        }
        lay.extend_stages(t, &plan.stages);
        t += plan.depth();

        let mut depth = 0;
        for (slots, host) in &merges {
            let m = slots.len();
            for &l in slots {
                let v = pm.vertex_of(l);
                if !host.by_rank[..m].contains(&v) {
                    return Err(Error::Internal("routing missed the subgraph prefix".into()));
                }
            }
            let mut real: Vec<bool> = host.rank_of_local.iter().map(|&r| r < m).collect();
            let restricted = restrict_to_real(&host.stages, &mut real);
            for (k, cs) in restricted.iter().enumerate() {
                for c in cs {
                    let (u, v) = (host.local_to_global[c.u], host.local_to_global[c.v]);
                    lay.push_at(t + k, Comparator { u, v, kind: c.kind });
                    if c.kind == Kind::Swap {
                        pm.exchange(u, v);
                    }
                }
            }
            depth = depth.max(restricted.len());
        }
        t += depth;
        for (slots, host) in &merges {
            pm.relabel(slots, &host.by_rank[..slots.len()])?;
        }
    }
    if !pm.is_identity() {
        let mut dest = vec![0; n];
        for l in 0..n {
            dest[pm.vertex_of(l)] = l;
        }
        let plan = fixup.route(&Permutation::new(dest)?)?;
        lay.extend_stages(t.max(lay.len()), &plan.stages);
    }
    Ok(lay.into_stages())
}

/// Network that runs `net` (local ids) on the vertices `map` of `g`.
fn embed(g: &Graph, map: &[Vertex], net: &SortingNetwork, prov: Provenance, cert: DepthCertificate) -> Result<SortingNetwork> {
    let mut rank = vec![0; g.n()];
    for (l, &v) in map.iter().enumerate() {
        rank[v] = net.order.rank(l);
    }
    finish(g.clone(), relabel_stages(&net.stages, map), VertexOrder::from_ranks(rank)?, prov, cert, false)
}

/// Sorting by repeated merges inside the subgraph `H` on `h_vertices`.
///
/// Keys are split into blocks of `⌊c/2⌋` where `c` is the merge capacity
/// (at most `|H|`), the blocks are sorted by a sequential comparison list,
/// and each comparison of two blocks gathers them into `H` and runs
/// `h_net` there with the vertices outside the merge acting as `+∞`.
pub fn subgraph_sort(
    g: &Graph,
    h_vertices: &[Vertex],
    h_net: &SortingNetwork,
    router: &PartialRouter,
    capacity: usize,
) -> Result<SortingNetwork> {
    let n = g.n();
    let p = h_vertices.len();
    let host = Host::new(g, h_vertices, h_net)?;
    let prov = Provenance::new("subgraph_sort").with("p", p).with("router", router.name());
    if p == n {
        let cert = DepthCertificate::new("subgraph_sort").param("n", n).param("p", p).bound(h_net.depth());
        return embed(g, h_vertices, h_net, prov, cert);
    }
    let s = capacity.min(p) / 2;
    if s == 0 {
        return Err(Error::Param("merge capacity must be at least 2".into()));
    }
    let q = n.div_ceil(s);
    let batches: Vec<Vec<Vec<usize>>> = if q == 1 {
        vec![vec![vec![0]]]
    } else {
        sequential_sorter(q).into_iter().map(|(i, j)| vec![vec![i, j]]).collect()
    };
    let fixup = router_for(g)?;
    let stages = block_sort(g, std::slice::from_ref(&host), router, fixup.as_ref(), s, &batches)?;
    let rt = router.bound((2 * s).min(n));
    let bound = batches.len() * (rt + h_net.depth()) + fixup.depth_bound();
    let cert = DepthCertificate::new("subgraph_sort")
        .param("n", n)
        .param("p", p)
        .param("q", q)
        .param("block", s)
        .param("comparisons", batches.len())
        .param("rt_used", rt)
        .param("rt_fixup", fixup.depth_bound())
        .param("base_depth", h_net.depth())
        .bound(bound);
    finish(g.clone(), stages, VertexOrder::identity(n), prov.with("q", q), cert, false)
}

/// Sorting through the longest path of a spanning tree: odd-even
/// transposition on the path, pebbles gathered onto it for each merge.
pub fn longest_path_sort(g: &Graph) -> Result<SortingNetwork> {
    let n = g.n();
    let t = spanning_tree(g);
    let path = tree_diameter_path(&t)?;
    let d = path.len() - 1;
    let h_net = odd_even_transposition(path.len())?;
    let mut net = if path.len() == n {
        let cert = DepthCertificate::new("longest_path_sort").param("n", n).param("d", d).bound(h_net.depth());
        embed(g, &path, &h_net, Provenance::new("longest_path_sort"), cert)?
    } else {
        // gathering handles at most d pebbles
        subgraph_sort(g, &path, &h_net, &PartialRouter::to_path(t)?, d)?
    };
    net.provenance = Provenance::new("longest_path_sort").with("d", d).with("n", n);
    if let Some(c) = net.certificate.as_mut() {
        c.formula_name = "longest_path_sort".into();
        c.parameters.insert("d".into(), d as u64);
    }
    Ok(net)
}

/// Sorting with `q` vertex-disjoint connected subgraphs working at once.
///
/// Keys are cut into blocks of half a part, a Batcher network on the blocks
/// schedules the merges, and the merges of one Batcher stage run in
/// parallel, one per subgraph.
pub fn parallel_subgraph_sort(
    g: &Graph,
    parts: &[Vec<Vertex>],
    nets: &[SortingNetwork],
    router: Box<dyn Router>,
) -> Result<SortingNetwork> {
    let n = g.n();
    let q = parts.len();
    if q == 0 || parts.len() != nets.len() {
        return Err(Error::Param("need one network per part".into()));
    }
    let size = parts[0].len();
    if parts.iter().any(|p| p.len() != size) || q * size != n {
        return Err(Error::Param("parts must have equal sizes covering the graph".into()));
    }
    let mut seen = vec![false; n];
    for &v in parts.iter().flatten() {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::Param("parts must partition the vertices".into()));
        }
    }
    let hosts = parts.iter().zip(nets).map(|(p, net)| Host::new(g, p, net)).collect::<Result<Vec<_>>>()?;
    let prov = Provenance::new("parallel_subgraph_sort").with("q", q).with("router", router.name());
    if q == 1 {
        let cert = DepthCertificate::new("parallel_subgraph_sort").param("n", n).param("q", 1).bound(nets[0].depth());
        return embed(g, &parts[0], &nets[0], prov, cert);
    }
    let s = size / 2;
    if s == 0 {
        return Err(Error::Param("parts need at least two vertices".into()));
    }
    let blocks = n.div_ceil(s);
    let base = batcher_stages(blocks);
    let batches: Vec<Vec<Vec<usize>>> = base
        .iter()
        .flat_map(|st| st.chunks(q).map(|c| c.iter().map(|&(i, j)| vec![i, j]).collect::<Vec<_>>()).collect::<Vec<_>>())
        .collect();
    let rt = router.depth_bound();
    let net_depth = nets.iter().map(SortingNetwork::depth).max().unwrap_or(0);
    let partial = PartialRouter::Full(router);
    let PartialRouter::Full(fixup) = &partial else { unreachable!() };
    let stages = block_sort(g, &hosts, &partial, fixup.as_ref(), s, &batches)?;
    let bound = batches.len() * (rt + net_depth) + rt;
    let cert = DepthCertificate::new("parallel_subgraph_sort")
        .param("n", n)
        .param("q", q)
        .param("blocks", blocks)
        .param("base_depth", base.len())
        .param("merge_batches", batches.len())
        .param("rt_used", rt)
        .param("net_depth", net_depth)
        .bound(bound);
    finish(g.clone(), stages, VertexOrder::identity(n), prov, cert, false)
}

/// Sorting on `G1 □ G2` through parallel sorts in the copies of one factor,
/// whichever factor gives the smaller certified bound.
pub fn product_sort(g1: &Graph, g2: &Graph) -> Result<SortingNetwork> {
    let g = cartesian_product(g1, g2);
    product_sort_on(&g, g1, g2)
}

/// [`product_sort`] for a mesh, hypercube or tagged product graph.
pub fn product_sort_for(g: &Graph) -> Result<SortingNetwork> {
    let (f1, f2) = match g.family() {
        Some(Family::Hypercube(d)) if *d >= 2 => (Family::Complete(2), Family::Hypercube(d - 1)),
        Some(Family::Mesh(dims)) if dims.len() >= 2 => (Family::Path(dims[0]), Family::Mesh(dims[1..].to_vec())),
        Some(Family::Product(a, b)) => ((**a).clone(), (**b).clone()),
        _ => return Err(Error::Structure("graph carries no product structure".into())),
    };
    product_sort_on(g, &generate(&f1)?, &generate(&f2)?)
}

fn product_sort_on(g: &Graph, g1: &Graph, g2: &Graph) -> Result<SortingNetwork> {
    let (n1, n2) = (g1.n(), g2.n());
    if g.n() != n1 * n2 {
        return Err(Error::Structure("factor sizes do not match the product".into()));
    }
    let router = || -> Result<Box<dyn Router>> { Ok(Box::new(ProductRouter::new(g.clone(), router_for(g1)?, router_for(g2)?)?)) };
    let mut options = Vec::new();
    if n2 >= 2 {
        let rows: Vec<Vec<Vertex>> = (0..n1).map(|a| (0..n2).map(|b| a * n2 + b).collect()).collect();
        let net = default_sorter(g2)?;
        options.push(parallel_subgraph_sort(g, &rows, &vec![net; n1], router()?)?);
    }
    if n1 >= 2 {
        let cols: Vec<Vec<Vertex>> = (0..n2).map(|b| (0..n1).map(|a| a * n2 + b).collect()).collect();
        let net = default_sorter(g1)?;
        options.push(parallel_subgraph_sort(g, &cols, &vec![net; n2], router()?)?);
    }
    let claimed = |x: &SortingNetwork| x.certificate.as_ref().map_or(u64::MAX, |c| c.claimed_bound);
    let mut best = match options.into_iter().min_by_key(claimed) {
        Some(b) => b,
        None => {
            let cert = DepthCertificate::new("product_sort").param("n", g.n());
            return finish(g.clone(), Vec::new(), VertexOrder::identity(g.n()), Provenance::new("product_sort"), cert, false);
        }
    };
    best.provenance = Provenance::new("product_sort").with("n1", n1).with("n2", n2);
    if let Some(c) = best.certificate.as_mut() {
        c.formula_name = "product_sort".into();
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn zero_one_ok(net: &SortingNetwork) -> bool {
        (0u32..1 << net.n()).all(|m| {
            let input: Vec<u32> = (0..net.n()).map(|i| (m >> i) & 1).collect();
            net.is_sorted(&net.execute(&input).unwrap())
        })
    }

    #[test]
    fn middle_of_a_path() {
        let g = generate(&Family::Path(8)).unwrap();
        let h = odd_even_transposition(4).unwrap();
        let router = PartialRouter::Full(router_for(&g).unwrap());
        let net = subgraph_sort(&g, &[2, 3, 4, 5], &h, &router, 4).unwrap();
        assert!(zero_one_ok(&net));
        assert!(net.certificate.as_ref().unwrap().holds());
    }

    #[test]
    fn disconnected_subgraph_is_rejected() {
        let g = generate(&Family::Path(6)).unwrap();
        let h = odd_even_transposition(2).unwrap();
        let router = PartialRouter::Full(router_for(&g).unwrap());
        assert!(matches!(subgraph_sort(&g, &[0, 2], &h, &router, 2), Err(Error::Structure(_))));
    }

    #[test]
    fn longest_path_on_star_and_random_graphs() {
        let star = generate(&Family::Star(7)).unwrap();
        assert!(zero_one_ok(&longest_path_sort(&star).unwrap()));
        for seed in 0..15 {
            let g = generate(&Family::RandomGraph { n: 10, extra: 3, seed }).unwrap();
            assert!(zero_one_ok(&longest_path_sort(&g).unwrap()), "seed {seed}");
        }
        let p = generate(&Family::Path(7)).unwrap();
        assert_eq!(longest_path_sort(&p).unwrap().depth(), 7);
    }

    #[test]
    fn products_sort() {
        let p2 = generate(&Family::Path(2)).unwrap();
        assert!(zero_one_ok(&product_sort(&p2, &p2).unwrap()));
        let mesh = generate(&Family::Mesh(vec![4, 4])).unwrap();
        let net = product_sort_for(&mesh).unwrap();
        assert!(zero_one_ok(&net));
        let k2 = generate(&Family::Complete(2)).unwrap();
        let sq = cartesian_product(&k2, &k2);
        assert!(zero_one_ok(&product_sort(&k2, &sq).unwrap()));
    }

    #[test]
    fn rows_of_a_mesh() {
        let g = generate(&Family::Mesh(vec![4, 4])).unwrap();
        let rows: Vec<Vec<Vertex>> = (0..4).map(|a| (0..4).map(|b| a * 4 + b).collect()).collect();
        let nets = vec![odd_even_transposition(4).unwrap(); 4];
        let net = parallel_subgraph_sort(&g, &rows, &nets, router_for(&g).unwrap()).unwrap();
        assert!(zero_one_ok(&net));
        let c = net.certificate.unwrap();
        assert!(c.achieved_depth <= c.claimed_bound);
    }
}
