use std::collections::VecDeque;

use super::{odd_even_route, Permutation, Router, RoutingPlan, Schedule};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Routing on trees.
///
/// Paths use odd-even transposition. Otherwise the region is split at a
/// centroid: pebbles first cross into the component holding their
/// destination (the centroid acts as a turnstile while pebbles bubble up to
/// the component roots), then every component is solved recursively and
/// all components run in parallel.
pub struct TreeRouter {
    graph: Graph,
}

impl TreeRouter {
    pub fn new(graph: Graph) -> Result<Self> {
        if !graph.is_tree() {
            return Err(Error::Structure("tree router needs a tree".into()));
        }
        Ok(TreeRouter { graph })
    }
}

pub fn route_tree(t: &Graph, perm: &Permutation) -> Result<RoutingPlan> {
    TreeRouter::new(t.clone())?.route(perm)
}

impl Router for TreeRouter {
    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn route(&self, perm: &Permutation) -> Result<RoutingPlan> {
        let n = self.graph.n();
        if perm.n() != n {
            return Err(Error::Input("permutation size differs from the graph".into()));
        }
        let mut holder = perm.as_slice().to_vec();
        let mut sched = Schedule::new();
        let region: Vec<Vertex> = (0..n).collect();
        let mut in_region = vec![true; n];
        solve(&self.graph, &region, &mut in_region, &mut holder, &mut sched, 0)?;
        if holder.iter().enumerate().any(|(v, &h)| v != h) {
            return Err(Error::Internal("tree routing left pebbles misplaced".into()));
        }
        Ok(RoutingPlan { stages: sched.into_stages(), realized: perm.as_slice().iter().map(|&d| Some(d)).collect() })
    }

    fn depth_bound(&self) -> usize {
        3 * self.graph.n()
    }

    fn name(&self) -> String {
        "tree".into()
    }
}

/// Solves `region` (connected, closed under destinations) starting at
/// time `start`. `in_region` is set exactly on `region` on entry and is left
/// cleared on exit.
fn solve(
    t: &Graph,
    region: &[Vertex],
    in_region: &mut [bool],
    holder: &mut [Vertex],
    sched: &mut Schedule,
    start: usize,
) -> Result<()> {
    if region.len() <= 1 {
        for &v in region {
            in_region[v] = false;
        }
        return Ok(());
    }
    let local_deg = |v: Vertex, inr: &[bool]| t.neighbors(v).iter().filter(|&&w| inr[w]).count();

    if region.iter().all(|&v| local_deg(v, in_region) <= 2) {
        let end = *region.iter().find(|&&v| local_deg(v, in_region) == 1).expect("path has an end");
        let mut seq = vec![end];
        let mut prev = usize::MAX;
        let mut cur = end;
        while let Some(&nx) = t.neighbors(cur).iter().find(|&&w| in_region[w] && w != prev) {
            seq.push(nx);
            prev = cur;
            cur = nx;
        }
        let mut index = std::collections::HashMap::with_capacity(seq.len());
        for (i, &v) in seq.iter().enumerate() {
            index.insert(v, i);
        }
        let keys: Vec<usize> = seq.iter().map(|&v| index[&holder[v]]).collect();
        for (r, swaps) in odd_even_route(&seq, &keys).into_iter().enumerate() {
            for (a, b) in swaps {
                sched.push_at(start + r, (a, b));
                holder.swap(a, b);
            }
        }
        for &v in region {
            in_region[v] = false;
        }
        return Ok(());
    }

    let c = centroid(t, region, in_region);
    // components of region - c, each listed top-down from its root
    let mut part = std::collections::HashMap::with_capacity(region.len());
    part.insert(c, 0usize);
    let mut comps: Vec<Vec<Vertex>> = Vec::new();
    let mut parent = std::collections::HashMap::with_capacity(region.len());
    for &r in t.neighbors(c).iter().filter(|&&w| in_region[w]) {
        let id = comps.len() + 1;
        let mut order = vec![r];
        part.insert(r, id);
        parent.insert(r, c);
        let mut q = VecDeque::from([r]);
        while let Some(u) = q.pop_front() {
            for &w in t.neighbors(u) {
                if in_region[w] && w != c && !part.contains_key(&w) {
                    part.insert(w, id);
                    parent.insert(w, u);
                    order.push(w);
                    q.push_back(w);
                }
            }
        }
        comps.push(order);
    }
    let roots: Vec<Vertex> = comps.iter().map(|o| o[0]).collect();

    let tp = |v: Vertex, holder: &[Vertex]| part[&holder[v]];
    let mut round = 0usize;
    let cap = 4 * region.len() + 8;
    let mut used = std::collections::HashSet::new();
    loop {
        let crossing: Vec<usize> = {
            let mut cnt = vec![0usize; comps.len() + 1];
            for &v in region {
                if tp(v, holder) != part[&v] {
                    cnt[part[&v]] += 1;
                }
            }
            cnt
        };
        if crossing.iter().all(|&x| x == 0) {
            break;
        }
        if round >= cap {
            return Err(Error::Internal("tree routing did not converge".into()));
        }
        used.clear();
        let mut swaps = Vec::new();
        let x = tp(c, holder);
        if x != 0 {
            let r = roots[x - 1];
            if tp(r, holder) != x {
                swaps.push((c, r));
            }
        } else {
            let pick = (0..comps.len())
                .filter(|&i| tp(roots[i], holder) != i + 1)
                .max_by_key(|&i| (crossing[i + 1], std::cmp::Reverse(i)));
            if let Some(i) = pick {
                swaps.push((c, roots[i]));
            }
        }
        for &(a, b) in &swaps {
            used.insert(a);
            used.insert(b);
        }
        for (i, order) in comps.iter().enumerate() {
            let own = i + 1;
            for &u in order {
                if used.contains(&u) || tp(u, holder) != own {
                    continue;
                }
                let child = t
                    .neighbors(u)
                    .iter()
                    .copied()
                    .filter(|w| parent.get(w) == Some(&u))
                    .find(|w| !used.contains(w) && tp(*w, holder) != own);
                if let Some(w) = child {
                    used.insert(u);
                    used.insert(w);
                    swaps.push((u, w));
                }
            }
        }
        if swaps.is_empty() {
            return Err(Error::Internal("tree routing stalled".into()));
        }
        for &(a, b) in &swaps {
            holder.swap(a, b);
            sched.push_at(start + round, (a, b));
        }
        round += 1;
    }

    in_region[c] = false;
    for order in &comps {
        for &v in order {
            in_region[v] = false;
        }
    }
    for order in &comps {
        for &v in order {
            in_region[v] = true;
        }
        solve(t, order, in_region, holder, sched, start + round)?;
    }
    Ok(())
}

fn centroid(t: &Graph, region: &[Vertex], in_region: &[bool]) -> Vertex {
    let root = region[0];
    let mut order = vec![root];
    let mut par = std::collections::HashMap::with_capacity(region.len());
    par.insert(root, usize::MAX);
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        for &w in t.neighbors(u) {
            if in_region[w] && !par.contains_key(&w) {
                par.insert(w, u);
                order.push(w);
            }
        }
        i += 1;
    }
    let total = order.len();
    let mut size = std::collections::HashMap::with_capacity(total);
    let mut heaviest = std::collections::HashMap::with_capacity(total);
    for &u in order.iter().rev() {
        let s = 1 + *heaviest.get(&(u, 1)).unwrap_or(&0usize);
        size.insert(u, s);
        let p = par[&u];
        if p != usize::MAX {
            *heaviest.entry((p, 1)).or_insert(0) += s;
            let h = heaviest.entry((p, 0)).or_insert(0);
            *h = (*h).max(s);
        }
    }
    order
        .iter()
        .copied()
        .min_by_key(|&u| {
            let below = *heaviest.get(&(u, 0)).unwrap_or(&0);
            let above = total - size[&u];
            (below.max(above), u)
        })
        .expect("region is nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_all(t: &Graph, rng: &mut ChaCha8Rng, trials: usize) -> usize {
        let mut worst = 0;
        for _ in 0..trials {
            let mut v: Vec<usize> = (0..t.n()).collect();
            v.shuffle(rng);
            let p = Permutation::new(v).unwrap();
            let plan = route_tree(t, &p).unwrap();
            plan.check(t).unwrap();
            worst = worst.max(plan.depth());
        }
        worst
    }

    #[test]
    fn stars_and_random_trees_stay_within_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in 1..12 {
            let t = generate(&Family::Star(k)).unwrap();
            assert!(check_all(&t, &mut rng, 30) <= 3 * t.n());
        }
        for seed in 0..60u64 {
            let n = 2 + (seed as usize * 7) % 60;
            let t = generate(&Family::RandomTree { n, seed }).unwrap();
            let w = check_all(&t, &mut rng, 10);
            assert!(w <= 3 * n, "n={n} depth={w}");
        }
    }

    #[test]
    fn reversing_a_star_rotation() {
        let t = generate(&Family::Star(5)).unwrap();
        // center and leaves rotate
        let p = Permutation::new(vec![1, 2, 3, 4, 5, 0]).unwrap();
        let plan = route_tree(&t, &p).unwrap();
        plan.check(&t).unwrap();
        assert_eq!(route_tree(&t, &Permutation::identity(6)).unwrap().depth(), 0);
    }

    #[test]
    fn rejects_cycles() {
        assert!(TreeRouter::new(generate(&Family::Cycle(4)).unwrap()).is_err());
    }
}
