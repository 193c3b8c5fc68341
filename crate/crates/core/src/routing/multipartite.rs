use super::{two_cycle_decompose, Permutation, Router, RoutingPlan, Schedule};
use crate::error::{Error, Result};
use crate::graph::{Family, Graph, Vertex};

/// Routing on the complete multipartite graph `K_{s,...,s}` in at most six
/// stages: each of the two involution factors takes at most three.
///
/// Within one involution, a transposition across parts is a single swap. Two
/// transpositions inside different parts are resolved together in two
/// stages. When transpositions remain inside one part only, each borrows a
/// helper outside that part, either a fixed point or a cross transposition,
/// and finishes in three stages. A lone leftover with no such helper joins a
/// pair from two other parts and the three finish together in three stages.
pub struct MultipartiteRouter {
    graph: Graph,
    parts: usize,
    size: usize,
}

impl MultipartiteRouter {
    pub fn new(graph: Graph) -> Result<Self> {
        match graph.family() {
            Some(Family::Multipartite { parts, size }) if *parts >= 2 => {
                let (parts, size) = (*parts, *size);
                Ok(MultipartiteRouter { graph, parts, size })
            }
            _ => Err(Error::Structure("multipartite router needs a tagged multipartite graph".into())),
        }
    }
}

pub fn route_multipartite(parts: usize, size: usize, perm: &Permutation) -> Result<RoutingPlan> {
    let g = crate::graph::generate(&Family::Multipartite { parts, size })?;
    MultipartiteRouter::new(g)?.route(perm)
}

impl Router for MultipartiteRouter {
    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn route(&self, perm: &Permutation) -> Result<RoutingPlan> {
        if perm.n() != self.graph.n() {
            return Err(Error::Input("permutation size differs from the graph".into()));
        }
        let (first, second) = two_cycle_decompose(perm);
        let mut sched = Schedule::new();
        for inv in [&first, &second] {
            for stage in route_involution(inv, self.parts, self.size)? {
                sched.append_stage(stage);
            }
        }
        Ok(RoutingPlan { stages: sched.into_stages(), realized: perm.as_slice().iter().map(|&d| Some(d)).collect() })
    }

    fn depth_bound(&self) -> usize {
        6
    }

    fn name(&self) -> String {
        "multipartite".into()
    }
}

fn route_involution(inv: &Permutation, parts: usize, size: usize) -> Result<[Vec<(Vertex, Vertex)>; 3]> {
    let part = |v: Vertex| v / size;
    let mut same: Vec<Vec<(Vertex, Vertex)>> = vec![Vec::new(); parts];
    let mut cross = Vec::new();
    let mut fixed = Vec::new();
    for x in 0..inv.n() {
        let y = inv.dest(x);
        if y == x {
            fixed.push(x);
        } else if x < y {
            if part(x) == part(y) {
                same[part(x)].push((x, y));
            } else {
                cross.push((x, y));
            }
        }
    }
    let mut out: [Vec<(Vertex, Vertex)>; 3] = Default::default();
    let mut pairs: Vec<(usize, (Vertex, Vertex), usize, (Vertex, Vertex))> = Vec::new();

    // pair same-part transpositions across parts, busiest parts first
    loop {
        let mut order: Vec<usize> = (0..parts).filter(|&p| !same[p].is_empty()).collect();
        order.sort_by_key(|&p| (std::cmp::Reverse(same[p].len()), p));
        if order.len() < 2 {
            break;
        }
        let a = same[order[0]].pop().expect("nonempty");
        let b = same[order[1]].pop().expect("nonempty");
        pairs.push((order[0], a, order[1], b));
    }

    let leftover: Vec<(usize, (Vertex, Vertex))> =
        (0..parts).flat_map(|p| same[p].iter().map(move |&e| (p, e))).collect();
    let mut fixed_iter_used = vec![false; fixed.len()];
    let mut cross_used = vec![false; cross.len()];
    for (p, (x1, x2)) in leftover {
        if let Some(i) = (0..fixed.len()).find(|&i| !fixed_iter_used[i] && part(fixed[i]) != p) {
            fixed_iter_used[i] = true;
            let z = fixed[i];
            out[0].push((x1, z));
            out[1].push((x2, z));
            out[2].push((x1, z));
        } else if let Some(i) =
            (0..cross.len()).find(|&i| !cross_used[i] && part(cross[i].0) != p && part(cross[i].1) != p)
        {
            cross_used[i] = true;
            let (z, w) = cross[i];
            out[0].push((x1, z));
            out[1].extend([(x2, z), (x1, w)]);
            out[2].push((x1, z));
        } else if let Some(i) = pairs.iter().position(|&(pa, _, pb, _)| pa != p && pb != p) {
            // three transpositions in three different parts, three stages
            let (_, (y1, y2), _, (w1, w2)) = pairs.swap_remove(i);
            out[0].extend([(y1, w2), (y2, w1)]);
            out[1].extend([(x1, w2), (x2, y2)]);
            out[2].extend([(x1, y2), (x2, w2), (y1, w1)]);
        } else {
            return Err(Error::Internal("no helper left for a same-part transposition".into()));
        }
    }
    for (_, (x1, x2), _, (y1, y2)) in pairs {
        out[0].extend([(x1, y1), (x2, y2)]);
        out[1].extend([(x1, y2), (y1, x2)]);
    }
    for (i, &e) in cross.iter().enumerate() {
        if !cross_used[i] {
            out[0].push(e);
        }
    }
    Ok(out)
}
