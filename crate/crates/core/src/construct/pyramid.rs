use super::auto::default_sorter;
use super::{finish, relabel_stages, restrict_to_real, DepthCertificate};
use crate::error::{Error, Result};
use crate::graph::{generate, Family, PyramidLayout, Vertex, VertexOrder};
use crate::network::{Comparator, Provenance, SortingNetwork, Stage};
use crate::routing::{router_for, MultigridRouter, Permutation, Router};

/// Sorting network on the `m`-level, `d`-dimensional pyramid.
///
/// The upper levels `T` (everything above the bottom mesh `B`) are sorted by
/// swapping them onto the lowest-ranked bottom vertices, sorting there with
/// the rest of `B` acting as `+∞`, and swapping back. `B` is then sorted on
/// its own. A merge step compares the `i`-th largest key of `T`, held at the
/// end of the level just above `B`, with the `i`-th smallest key of `B`,
/// brought right below it. Two such rounds followed by one more sort of both
/// parts leave every key of `T` below every key of `B`.
///
/// The order is by vertex id on the upper levels, followed by the bottom
/// mesh in the order of its own sorter.
pub fn pyramid_sort(m: usize, d: usize) -> Result<SortingNetwork> {
    let lay = PyramidLayout::new(m, d)?;
    let g = generate(&Family::Pyramid { levels: m, dim: d })?;
    let prov = Provenance::new("pyramid_sort").with("levels", m).with("dim", d);
    if m == 1 {
        let cert = DepthCertificate::new("pyramid_sort").param("levels", 1).param("dim", d);
        return finish(g, Vec::new(), VertexOrder::identity(1), prov, cert, false);
    }
    let bottom = lay.level_range(m - 1);
    let t = bottom.start;
    let above = lay.level_size(m - 2);
    if t > 2 * above - 1 {
        return Err(Error::Internal("upper levels too large for two merge rounds".into()));
    }
    let gb = lay.level_graph(m - 1)?;
    let net_b = default_sorter(&gb)?;
    let router_b = router_for(&gb)?;
    let router = MultigridRouter::new(g.clone())?;
    let global_b: Vec<Vertex> = bottom.clone().collect();
    let b_stages = relabel_stages(&net_b.stages, &global_b);
    // bottom vertex holding B-rank r
    let b_by_rank: Vec<Vertex> = net_b.order.vertices_by_rank().into_iter().map(|l| l + t).collect();

    let mut dest: Vec<usize> = (0..g.n()).collect();
    for r in 0..t {
        dest[r] = b_by_rank[r];
        dest[b_by_rank[r]] = r;
    }
    let exchange = router.route(&Permutation::new(dest)?)?.stages;
    let mut real: Vec<bool> = net_b.order.ranks().iter().map(|&r| r < t).collect();
    let sentinel_sort = relabel_stages(
        &restrict_to_real(&net_b.stages, &mut real).into_iter().map(Stage::new).collect::<Vec<_>>(),
        &global_b,
    );
    // the i-th largest of T sits on z_i; B-rank i-1 goes right below it
    let z: Vec<Vertex> = (1..=above).map(|i| lay.level_range(m - 2).end - i).collect();
    let y: Vec<Vertex> = z.iter().map(|&v| lay.vertical_child(v).expect("level above the bottom")).collect();
    let pairs: Vec<(Vertex, Vertex)> = (0..above).map(|i| (b_by_rank[i] - t, y[i] - t)).collect();
    let gather = relabel_stages(&router_b.route_partial(&pairs)?.stages, &global_b);
    let merge = Stage::new(z.iter().zip(&y).map(|(&a, &b)| Comparator::compare(a, b)).collect());

    let mut stages: Vec<Stage> = Vec::new();
    for round in 0..3 {
        stages.extend(exchange.iter().cloned());
        stages.extend(sentinel_sort.iter().cloned());
        stages.extend(exchange.iter().cloned());
        stages.extend(b_stages.iter().cloned());
        if round < 2 {
            stages.extend(gather.iter().cloned());
            stages.push(merge.clone());
        }
    }

    let mut rank = vec![0; g.n()];
    for (v, r) in rank.iter_mut().enumerate().take(t) {
        *r = v;
    }
    for (l, &v) in global_b.iter().enumerate() {
        rank[v] = t + net_b.order.rank(l);
    }
    let (rt_pyr, d_b, rt_b) = (router.depth_bound(), net_b.depth(), router_b.depth_bound());
    let cert = DepthCertificate::new("pyramid_sort")
        .param("levels", m)
        .param("dim", d)
        .param("rt_pyramid", rt_pyr)
        .param("bottom_depth", d_b)
        .param("rt_bottom", rt_b)
        .bound(6 * rt_pyr + 6 * d_b + 2 * rt_b + 2);
    finish(g, stages, VertexOrder::from_ranks(rank)?, prov, cert, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_one_ok(net: &SortingNetwork) -> bool {
        (0u32..1 << net.n()).all(|m| {
            let input: Vec<u32> = (0..net.n()).map(|i| (m >> i) & 1).collect();
            net.is_sorted(&net.execute(&input).unwrap())
        })
    }

    #[test]
    fn small_pyramids_sort() {
        assert_eq!(pyramid_sort(1, 2).unwrap().depth(), 0);
        for (m, d) in [(2, 1), (2, 2), (3, 1), (4, 1), (3, 2)] {
            let net = pyramid_sort(m, d).unwrap();
            if net.n() <= 16 {
                assert!(zero_one_ok(&net), "m={m} d={d}");
            }
            assert!(net.certificate.as_ref().unwrap().holds());
        }
    }
}
