use super::{Permutation, Router, RoutingPlan, Schedule};
use crate::error::{Error, Result};
use crate::graph::{tree_diameter_path, Graph, Vertex};
use pathfinding::kuhn_munkres::kuhn_munkres_min;
use pathfinding::matrix::Matrix;

/// Odd-even transposition routing along the path `seq`: the pebble on
/// `seq[i]` travels to `seq[keys[i]]`. Returns one swap list per round, at
/// most `seq.len()` rounds, possibly with empty rounds in between.
pub(crate) fn odd_even_route(seq: &[Vertex], keys: &[usize]) -> Vec<Vec<(Vertex, Vertex)>> {
    let n = seq.len();
    let mut keys = keys.to_vec();
    let mut rounds = Vec::new();
    let sorted = |k: &[usize]| k.windows(2).all(|w| w[0] < w[1]);
    let mut round = 0;
    while !sorted(&keys) {
        let mut swaps = Vec::new();
        let mut i = round % 2;
        while i + 1 < n {
            if keys[i] > keys[i + 1] {
                keys.swap(i, i + 1);
                swaps.push((seq[i], seq[i + 1]));
            }
            i += 2;
        }
        rounds.push(swaps);
        round += 1;
        debug_assert!(round <= n);
    }
    rounds
}

fn path_sequence(g: &Graph) -> Result<Vec<Vertex>> {
    if g.n() == 1 {
        return Ok(vec![0]);
    }
    if !g.is_tree() || g.max_degree() > 2 {
        return Err(Error::Structure("graph is not a path".into()));
    }
    tree_diameter_path(g)
}

/// Routes a permutation on a path graph in at most `n` stages.
pub fn route_path(g: &Graph, perm: &Permutation) -> Result<RoutingPlan> {
    PathRouter::new(g.clone())?.route(perm)
}

pub struct PathRouter {
    graph: Graph,
    seq: Vec<Vertex>,
    index: Vec<usize>,
}

impl PathRouter {
    pub fn new(graph: Graph) -> Result<Self> {
        let seq = path_sequence(&graph)?;
        let mut index = vec![0; graph.n()];
        for (i, &v) in seq.iter().enumerate() {
            index[v] = i;
        }
        Ok(PathRouter { graph, seq, index })
    }
}

impl Router for PathRouter {
    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn route(&self, perm: &Permutation) -> Result<RoutingPlan> {
        if perm.n() != self.graph.n() {
            return Err(Error::Input("permutation size differs from the graph".into()));
        }
        let keys: Vec<usize> = self.seq.iter().map(|&v| self.index[perm.dest(v)]).collect();
        let mut sched = Schedule::new();
        for r in odd_even_route(&self.seq, &keys) {
            sched.append_stage(r);
        }
        Ok(RoutingPlan { stages: sched.into_stages(), realized: perm.as_slice().iter().map(|&d| Some(d)).collect() })
    }

    fn depth_bound(&self) -> usize {
        self.graph.n()
    }

    fn name(&self) -> String {
        "path".into()
    }
}

/// Gathers the pebbles on `sources` onto the vertex set `targets`, which must
/// lie on the diameter path of the tree `t`, in at most `d + 2(k - 1)` stages
/// for `k <= d` pebbles and diameter `d`. The returned plan tracks only the
/// source pebbles; the assignment of sources to targets is chosen here.
pub fn route_to_path(t: &Graph, sources: &[Vertex], targets: &[Vertex]) -> Result<RoutingPlan> {
    let n = t.n();
    let k = sources.len();
    if targets.len() != k {
        return Err(Error::Input("sources and targets differ in size".into()));
    }
    let diam = tree_diameter_path(t)?;
    let d = diam.len() - 1;
    let mut on_diam = vec![false; n];
    for &v in &diam {
        on_diam[v] = true;
    }
    let distinct = |xs: &[Vertex]| {
        let mut seen = vec![false; n];
        xs.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
    };
    if !distinct(sources) || !distinct(targets) {
        return Err(Error::Input("sources and targets must be distinct vertices".into()));
    }
    if targets.iter().any(|&u| !on_diam[u]) {
        return Err(Error::Task("targets must lie on the diameter path".into()));
    }
    let mut realized = vec![None; n];
    if k == 0 {
        return Ok(RoutingPlan { stages: Vec::new(), realized });
    }
    if k > d {
        return Err(Error::Task(format!("{k} pebbles exceed the diameter {d}")));
    }

    let dist_from: Vec<Vec<usize>> = targets.iter().map(|&u| t.bfs(u)).collect();
    let limit = d + 2 * (k - 1);
    let (sched, tracked) = gather_greedy(t, sources, targets, &dist_from, limit)
        .or_else(|| gather_incremental(t, sources, targets, &dist_from, d))
        .ok_or_else(|| Error::Internal(format!("no gathering schedule within {limit} stages")))?;
    let mut out = Schedule::new();
    for s in sched {
        out.append_stage(s);
    }
    for &(s, g) in &tracked {
        realized[s] = Some(g);
    }
    let plan = RoutingPlan { stages: out.into_stages(), realized };
    if plan.depth() > limit {
        return Err(Error::Internal(format!("gathering used {} > {limit} stages", plan.depth())));
    }
    Ok(plan)
}

type Gathering = (Vec<Vec<(Vertex, Vertex)>>, Vec<(Vertex, Vertex)>);

/// Tracked pebbles are interchangeable, so they are moved as unlabeled
/// tokens: every step they are reassigned to targets by a minimum-cost
/// assignment with squared distances, which makes a token blocked by a
/// settled one hand over its target and lets the settled one move on. Tokens
/// step toward their targets in order of remaining distance, into free
/// vertices only. Fails when a token runs out of time or nothing can move.
fn gather_greedy(t: &Graph, sources: &[Vertex], targets: &[Vertex], dist_from: &[Vec<usize>], limit: usize) -> Option<Gathering> {
    let n = t.n();
    let k = sources.len();
    let mut pos = sources.to_vec();
    let mut holder: Vec<Option<usize>> = vec![None; n];
    for (i, &v) in pos.iter().enumerate() {
        holder[v] = Some(i);
    }
    let mut is_target = vec![false; n];
    for &u in targets {
        is_target[u] = true;
    }
    let mut sched = Vec::new();
    for step in 0..=limit {
        if pos.iter().all(|&v| is_target[v]) {
            let tracked = sources.iter().zip(&pos).map(|(&s, &p)| (s, p)).collect();
            return Some((sched, tracked));
        }
        if step == limit {
            return None;
        }
        let cost = Matrix::from_fn(k, k, |(i, j)| {
            let r = dist_from[j][pos[i]] as i64;
            r * r
        });
        let (_, assign) = kuhn_munkres_min(&cost);
        let remaining: Vec<usize> = (0..k).map(|i| dist_from[assign[i]][pos[i]]).collect();
        if remaining.iter().any(|&r| r > limit - step) {
            return None;
        }
        let mut order: Vec<usize> = (0..k).filter(|&i| remaining[i] > 0).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(remaining[i]), i));
        let mut used = vec![false; n];
        let mut moves = Vec::new();
        for i in order {
            let v = pos[i];
            let dist = &dist_from[assign[i]];
            let next = *t.neighbors(v).iter().find(|&&w| dist[w] + 1 == dist[v])?;
            if used[v] || used[next] || holder[next].is_some() {
                continue;
            }
            used[v] = true;
            used[next] = true;
            moves.push((i, v, next));
        }
        if moves.is_empty() {
            return None;
        }
        for &(i, v, w) in &moves {
            holder[v] = None;
            holder[w] = Some(i);
            pos[i] = w;
        }
        sched.push(moves.into_iter().map(|(_, v, w)| (v, w)).collect());
    }
    None
}

/// Adds pebbles one at a time, farthest from the remaining targets first,
/// each given its closest free target and scheduled through a time-expanded
/// reachability search around the moves already fixed.
fn gather_incremental(
    t: &Graph,
    sources: &[Vertex],
    targets: &[Vertex],
    dist_from: &[Vec<usize>],
    d: usize,
) -> Option<Gathering> {
    let n = t.n();
    let k = sources.len();
    // Assignment: repeatedly take the source farthest from the remaining
    // targets and give it its closest target; the farthest ends up last.
    let mut src_left: Vec<Vertex> = sources.to_vec();
    let mut tgt_left: Vec<usize> = (0..k).collect();
    let mut pairs = Vec::with_capacity(k);
    while !src_left.is_empty() {
        let near = |s: Vertex, tl: &[usize]| {
            tl.iter().map(|&j| (dist_from[j][s], targets[j], j)).min().expect("targets remain")
        };
        let (si, _) = src_left
            .iter()
            .enumerate()
            .max_by_key(|&(_, &s)| (near(s, &tgt_left).0, std::cmp::Reverse(s)))
            .expect("sources remain");
        let s = src_left.remove(si);
        let (_, _, j) = near(s, &tgt_left);
        tgt_left.retain(|&x| x != j);
        pairs.push((s, j));
    }
    pairs.reverse();

    let mut sched: Vec<Vec<(Vertex, Vertex)>> = Vec::new();
    let mut tracked: Vec<(Vertex, usize)> = Vec::new();
    for (idx, &(src, j)) in pairs.iter().enumerate() {
        let len = d + 2 * idx;
        sched.resize(len, Vec::new());
        let goal = targets[j];
        let dist = &dist_from[j];
        // tracked positions before every step
        let mut occ: Vec<Vec<bool>> = Vec::with_capacity(len + 1);
        let mut at: Vec<Vertex> = tracked.iter().map(|&(s, _)| s).collect();
        for step in 0..=len {
            let mut o = vec![false; n];
            for &v in &at {
                o[v] = true;
            }
            occ.push(o);
            if step < len {
                for v in at.iter_mut() {
                    if let Some(&(a, b)) = sched[step].iter().find(|&&(a, b)| a == *v || b == *v) {
                        *v = if a == *v { b } else { a };
                    }
                }
            }
        }
        let touched: Vec<Vec<Option<Vertex>>> = sched
            .iter()
            .map(|st| {
                let mut m = vec![None; n];
                for &(a, b) in st {
                    m[a] = Some(b);
                    m[b] = Some(a);
                }
                m
            })
            .collect();
        // ok[t][v]: from v before step t the goal is reachable by the end
        let mut ok = vec![vec![false; n]; len + 1];
        ok[len][goal] = true;
        for step in (0..len).rev() {
            for v in 0..n {
                ok[step][v] = match touched[step][v] {
                    Some(w) => ok[step + 1][w],
                    None => {
                        ok[step + 1][v]
                            || t.neighbors(v).iter().any(|&w| {
                                touched[step][w].is_none() && !occ[step][w] && ok[step + 1][w]
                            })
                    }
                };
            }
        }
        if !ok[0][src] {
            return None;
        }
        let mut p = src;
        for step in 0..len {
            if let Some(w) = touched[step][p] {
                p = w;
            } else if !ok[step + 1][p] {
                // move toward the goal, preferring the shortest-path neighbour
                let next = t
                    .neighbors(p)
                    .iter()
                    .copied()
                    .filter(|&w| touched[step][w].is_none() && !occ[step][w] && ok[step + 1][w])
                    .min_by_key(|&w| (dist[w], w))
                    ?;
                sched[step].push((p, next));
                p = next;
            }
        }
        if p != goal {
            return None;
        }
        tracked.push((src, goal));
        // the augmented schedule must still deliver everything earlier
        let mut pos: Vec<Vertex> = tracked.iter().map(|&(s, _)| s).collect();
        for stage in &sched {
            for v in pos.iter_mut() {
                if let Some(&(a, b)) = stage.iter().find(|&&(a, b)| a == *v || b == *v) {
                    *v = if a == *v { b } else { a };
                }
            }
        }
        if pos.iter().zip(&tracked).any(|(&v, &(_, g))| v != g) {
            return None;
        }
    }
    Some((sched, tracked))
}
