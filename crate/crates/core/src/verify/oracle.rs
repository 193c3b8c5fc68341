use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::next_permutation;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexOrder};
use crate::network::{Comparator, Provenance, SortingNetwork, Stage};
use crate::routing::{Permutation, RoutingPlan};

const RT_CAP: usize = 8;
const RT_PARTIAL_CAP: usize = 7;
const ST_CAP: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    St,
    Rt,
    RtPartial,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub states: u64,
    pub moves: u64,
    pub depth_reached: u64,
}

#[derive(Debug, Clone)]
pub enum Witness {
    Network(SortingNetwork),
    /// A plan moving each `(from, to)` pebble of `pairs` to its target.
    Plan { plan: RoutingPlan, pairs: Vec<(Vertex, Vertex)> },
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub quantity: Quantity,
    pub value: usize,
    pub witness: Witness,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StOptions {
    /// Leave unconditional swaps out of the stage alphabet.
    pub comparator_only: bool,
}

fn cap(g: &Graph, cap: usize, what: &'static str) -> Result<()> {
    if g.n() > cap {
        return Err(Error::Cap { n: g.n(), cap, what });
    }
    if !g.is_connected() {
        return Err(Error::Structure("oracle needs a connected graph".into()));
    }
    Ok(())
}

/// Every non-empty matching of `g`, each as a sorted edge list.
pub fn all_matchings(g: &Graph) -> Vec<Vec<(Vertex, Vertex)>> {
    fn rec(edges: &[(Vertex, Vertex)], i: usize, used: u64, cur: &mut Vec<(Vertex, Vertex)>, out: &mut Vec<Vec<(Vertex, Vertex)>>) {
        if i == edges.len() {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        rec(edges, i + 1, used, cur, out);
        let (u, v) = edges[i];
        if used & (1 << u | 1 << v) == 0 {
            cur.push((u, v));
            rec(edges, i + 1, used | 1 << u | 1 << v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&g.edges(), 0, 0, &mut Vec::new(), &mut out);
    out
}

/// Packs small vertex ids, four bits each.
fn pack(xs: &[usize]) -> u64 {
    xs.iter().enumerate().fold(0, |acc, (i, &x)| acc | (x as u64) << (4 * i))
}

fn unpack(code: u64, len: usize) -> Vec<usize> {
    (0..len).map(|i| ((code >> (4 * i)) & 0xf) as usize).collect()
}

/// Breadth-first search from `start` under the moves `step`, recording the
/// move that first reached every state.
fn bfs<F: Fn(u64, usize) -> u64>(start: u64, moves: usize, step: F) -> (HashMap<u64, (u64, u32, u32)>, SearchStats) {
    let mut seen: HashMap<u64, (u64, u32, u32)> = HashMap::new();
    seen.insert(start, (start, u32::MAX, 0));
    let mut queue = VecDeque::from([start]);
    let mut stats = SearchStats { states: 1, ..Default::default() };
    while let Some(s) = queue.pop_front() {
        let d = seen[&s].2;
        for m in 0..moves {
            stats.moves += 1;
            let t = step(s, m);
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(t) {
                e.insert((s, m as u32, d + 1));
                stats.states += 1;
                stats.depth_reached = stats.depth_reached.max(d as u64 + 1);
                queue.push_back(t);
            }
        }
    }
    (seen, stats)
}

fn trace(seen: &HashMap<u64, (u64, u32, u32)>, mut s: u64) -> Vec<usize> {
    let mut path = Vec::new();
    loop {
        let (p, m, _) = seen[&s];
        if m == u32::MAX {
            break;
        }
        path.push(m as usize);
        s = p;
    }
    path.reverse();
    path
}

fn plan_of(matchings: &[Vec<(Vertex, Vertex)>], moves: &[usize], n: usize) -> RoutingPlan {
    let stages = moves.iter().map(|&m| Stage::swaps(matchings[m].iter().copied())).collect();
    RoutingPlan { stages, realized: (0..n).map(Some).collect::<Vec<_>>() }
}

/// Exact routing number: `rt(g, pi)` when `pi` is given, otherwise the
/// maximum over all permutations with a maximising one as witness.
///
/// The search runs over vertex arrangements, one matching of swaps per move.
pub fn exact_rt(g: &Graph, pi: Option<&Permutation>) -> Result<OracleResult> {
    cap(g, RT_CAP, "exact rt")?;
    let n = g.n();
    if pi.is_some_and(|p| p.n() != n) {
        return Err(Error::Input("permutation size differs from the graph".into()));
    }
    let ms = all_matchings(g);
    // state: arr[v] = pebble on v
    let ident: Vec<usize> = (0..n).collect();
    let (seen, stats) = bfs(pack(&ident), ms.len(), |s, m| {
        let mut arr = unpack(s, n);
        for &(u, v) in &ms[m] {
            arr.swap(u, v);
        }
        pack(&arr)
    });
    let goal = match pi {
        Some(p) => {
            let mut arr = vec![0; n];
            for i in 0..n {
                arr[p.dest(i)] = i;
            }
            pack(&arr)
        }
        None => *seen.iter().max_by_key(|(&code, &(_, _, d))| (d, std::cmp::Reverse(code))).expect("start is present").0,
    };
    let moves = trace(&seen, goal);
    let arr = unpack(goal, n);
    let mut plan = plan_of(&ms, &moves, n);
    let mut dest = vec![0; n];
    for (v, &p) in arr.iter().enumerate() {
        dest[p] = v;
    }
    plan.realized = dest.iter().map(|&d| Some(d)).collect();
    Ok(OracleResult {
        quantity: Quantity::Rt,
        value: moves.len(),
        witness: Witness::Plan { plan, pairs: dest.iter().enumerate().map(|(i, &d)| (i, d)).collect() },
        stats,
    })
}

/// Tracked-pebble search from `a`: state is the tuple of tracked positions.
fn partial_search(g: &Graph, a: &[Vertex], ms: &[Vec<(Vertex, Vertex)>]) -> (HashMap<u64, (u64, u32, u32)>, SearchStats) {
    let n = g.n();
    let k = a.len();
    bfs(pack(a), ms.len(), |s, m| {
        let mut partner: Vec<usize> = (0..n).collect();
        for &(u, v) in &ms[m] {
            partner[u] = v;
            partner[v] = u;
        }
        pack(&unpack(s, k).into_iter().map(|x| partner[x]).collect::<Vec<_>>())
    })
}

/// `rt(G, A, B)`: the worst bijection `A -> B` of the fewest matchings that
/// bring every pebble starting in `A` to its image; other pebbles are free.
pub fn exact_rt_partial(g: &Graph, a: &[Vertex], b: &[Vertex]) -> Result<OracleResult> {
    cap(g, RT_PARTIAL_CAP, "exact partial rt")?;
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Input("A and B need the same non-zero size".into()));
    }
    for set in [a, b] {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != set.len() || s.iter().any(|&v| v >= g.n()) {
            return Err(Error::Input("A and B must be sets of vertices".into()));
        }
    }
    let ms = all_matchings(g);
    let (seen, stats) = partial_search(g, a, &ms);
    let mut image = b.to_vec();
    image.sort_unstable();
    let mut worst: Option<(u32, u64)> = None;
    loop {
        let code = pack(&image);
        let d = seen[&code].2;
        if worst.is_none_or(|(w, _)| d > w) {
            worst = Some((d, code));
        }
        if !next_permutation(&mut image) {
            break;
        }
    }
    let (_, code) = worst.expect("at least one bijection");
    partial_result(g, a, &ms, &seen, code, stats)
}

fn partial_result(
    g: &Graph,
    a: &[Vertex],
    ms: &[Vec<(Vertex, Vertex)>],
    seen: &HashMap<u64, (u64, u32, u32)>,
    code: u64,
    stats: SearchStats,
) -> Result<OracleResult> {
    let moves = trace(seen, code);
    let to = unpack(code, a.len());
    let mut plan = plan_of(ms, &moves, g.n());
    plan.realized = plan.simulate(g.n()).into_iter().map(Some).collect();
    Ok(OracleResult {
        quantity: Quantity::RtPartial,
        value: moves.len(),
        witness: Witness::Plan { plan, pairs: a.iter().copied().zip(to).collect() },
        stats,
    })
}

/// `rt_p(G)`: the maximum of `rt(G, A, B)` over sets with `|A| = |B| <= p`.
/// With `disjoint` only pairs of disjoint sets are considered.
pub fn exact_rt_p(g: &Graph, p: usize, disjoint: bool) -> Result<OracleResult> {
    cap(g, RT_PARTIAL_CAP, "exact partial rt")?;
    let n = g.n();
    if p == 0 || p > n {
        return Err(Error::Param("p must be in 1..=n".into()));
    }
    let ms = all_matchings(g);
    let mut best: Option<OracleResult> = None;
    let mut total = SearchStats::default();
    for k in 1..=p {
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize != k {
                continue;
            }
            let a: Vec<Vertex> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            let (seen, stats) = partial_search(g, &a, &ms);
            total.states += stats.states;
            total.moves += stats.moves;
            total.depth_reached = total.depth_reached.max(stats.depth_reached);
            let far = seen
                .iter()
                .filter(|(&c, _)| !disjoint || unpack(c, k).iter().all(|&v| mask >> v & 1 == 0))
                .max_by_key(|(&c, &(_, _, d))| (d, std::cmp::Reverse(c)));
            if let Some((&code, &(_, _, d))) = far {
                if best.as_ref().is_none_or(|b| d as usize > b.value) {
                    best = Some(partial_result(g, &a, &ms, &seen, code, stats)?);
                }
            }
        }
    }
    let mut out = best.ok_or_else(|| Error::Input("no admissible pair of sets".into()))?;
    out.stats = total;
    Ok(out)
}

/// Stage alphabet for the sorting search: every matching with every edge
/// either a comparator (both orientations) or, unless excluded, a swap.
fn st_stages(g: &Graph, opts: StOptions) -> Vec<Stage> {
    let kinds = if opts.comparator_only { 2 } else { 3 };
    let mut out = Vec::new();
    for m in all_matchings(g) {
        let combos = kinds_pow(kinds, m.len());
        for mut c in 0..combos {
            let mut comps = Vec::with_capacity(m.len());
            for &(u, v) in &m {
                comps.push(match c % kinds {
                    0 => Comparator::compare(u, v),
                    1 => Comparator::compare(v, u),
                    _ => Comparator::swap(u, v),
                });
                c /= kinds;
            }
            out.push(Stage::new(comps));
        }
    }
    out
}

fn kinds_pow(k: usize, e: usize) -> usize {
    k.pow(e as u32)
}

/// Configuration masks (bit `v` = key on `v` is 1) that are sorted for `order`.
fn sorted_mask(order: &VertexOrder) -> u64 {
    let n = order.n();
    let by_rank = order.vertices_by_rank();
    let mut set = 0u64;
    for k in 0..=n {
        // the k largest ranks hold ones
        let cfg = by_rank[n - k..].iter().fold(0usize, |c, &v| c | 1 << v);
        set |= 1 << cfg;
    }
    set
}

fn all_orders(n: usize) -> Vec<VertexOrder> {
    let mut ranks: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        out.push(VertexOrder::from_ranks(ranks.clone()).expect("a permutation"));
        if !next_permutation(&mut ranks) {
            return out;
        }
    }
}

/// Minimum sorting depth for each of `orders`, with witness stages.
///
/// A search state is the set of binary configurations reachable from all
/// `2^n` binary inputs (a bitmask over configurations); by the zero-one
/// principle a prefix sorts exactly when that set contains only sorted
/// configurations. The search stops once every order is settled.
fn st_search(g: &Graph, orders: &[VertexOrder], opts: StOptions) -> (Vec<(usize, Vec<Stage>)>, SearchStats) {
    let n = g.n();
    let configs = 1usize << n;
    let stages = st_stages(g, opts);
    let maps: Vec<Vec<usize>> = stages
        .iter()
        .map(|s| {
            (0..configs)
                .map(|c| {
                    let mut bits: Vec<u8> = (0..n).map(|v| (c >> v & 1) as u8).collect();
                    s.apply(&mut bits);
                    bits.iter().enumerate().fold(0, |acc, (v, &b)| acc | (b as usize) << v)
                })
                .collect()
        })
        .collect();
    let goals: Vec<u64> = orders.iter().map(sorted_mask).collect();
    let start: u64 = if configs == 64 { u64::MAX } else { (1u64 << configs) - 1 };

    let mut found: Vec<Option<u64>> = vec![None; orders.len()];
    let mut left = orders.len();
    let mut seen: HashMap<u64, (u64, u32, u32)> = HashMap::new();
    seen.insert(start, (start, u32::MAX, 0));
    let mut frontier = vec![start];
    let mut stats = SearchStats { states: 1, ..Default::default() };
    let settle = |s: u64, found: &mut Vec<Option<u64>>, left: &mut usize| {
        for (i, &goal) in goals.iter().enumerate() {
            if found[i].is_none() && s & !goal == 0 {
                found[i] = Some(s);
                *left -= 1;
            }
        }
    };
    settle(start, &mut found, &mut left);
    let mut depth = 0;
    while left > 0 && !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for &s in &frontier {
            for (m, map) in maps.iter().enumerate() {
                stats.moves += 1;
                let mut t = 0u64;
                let mut rest = s;
                while rest != 0 {
                    let c = rest.trailing_zeros() as usize;
                    t |= 1 << map[c];
                    rest &= rest - 1;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(t) {
                    e.insert((s, m as u32, depth));
                    next.push(t);
                }
            }
        }
        stats.states += next.len() as u64;
        stats.depth_reached = depth as u64;
        for &t in &next {
            settle(t, &mut found, &mut left);
        }
        frontier = next;
    }
    let out = found
        .into_iter()
        .map(|f| {
            let s = f.expect("a connected graph can always be sorted");
            let moves = trace(&seen, s);
            (moves.len(), moves.into_iter().map(|m| stages[m].clone()).collect())
        })
        .collect();
    (out, stats)
}

fn st_result(g: &Graph, order: VertexOrder, depth: usize, stages: Vec<Stage>, stats: SearchStats) -> Result<OracleResult> {
    let net = SortingNetwork::new(g.clone(), stages, order, Provenance::new("exact_st"))?;
    Ok(OracleResult { quantity: Quantity::St, value: depth, witness: Witness::Network(net), stats })
}

/// Exact sorting number `st(g, order)`, or `st(g)` (the best order) when
/// no order is given.
pub fn exact_st(g: &Graph, order: Option<&VertexOrder>, opts: StOptions) -> Result<OracleResult> {
    cap(g, ST_CAP, "exact st")?;
    let orders = match order {
        Some(o) if o.n() != g.n() => return Err(Error::Input("order size differs from the graph".into())),
        Some(o) => vec![o.clone()],
        None => all_orders(g.n()),
    };
    let (res, stats) = st_search(g, &orders, opts);
    let (i, (depth, stages)) = res.into_iter().enumerate().min_by_key(|(_, (d, _))| *d).expect("an order");
    st_result(g, orders[i].clone(), depth, stages, stats)
}

/// `st(g, order)` for every order, in lexicographic order of rank vectors.
pub fn exact_st_all_orders(g: &Graph, opts: StOptions) -> Result<Vec<(VertexOrder, usize)>> {
    cap(g, ST_CAP, "exact st")?;
    let orders = all_orders(g.n());
    let (res, _) = st_search(g, &orders, opts);
    Ok(orders.into_iter().zip(res.into_iter().map(|(d, _)| d)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub n: usize,
    pub rt: usize,
    pub log_n: usize,
    pub st_min: usize,
    /// `(ranks, st(g, order))` for every order checked.
    pub rows: Vec<(Vec<usize>, usize)>,
    pub violations: Vec<String>,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `max(rt(g), ⌈log₂ n⌉) <= st(g, order) <= st(g) + rt(g)` with exact
/// values, for one order or for all of them.
pub fn sandwich_check(g: &Graph, order: Option<&VertexOrder>) -> Result<SandwichReport> {
    cap(g, ST_CAP, "sandwich check")?;
    let n = g.n();
    let rt = exact_rt(g, None)?.value;
    let all = exact_st_all_orders(g, StOptions::default())?;
    let st_min = all.iter().map(|(_, d)| *d).min().expect("an order");
    let log_n = crate::construct::ceil_log2(n);
    let rows: Vec<(Vec<usize>, usize)> = all
        .into_iter()
        .filter(|(o, _)| order.is_none_or(|x| x == o))
        .map(|(o, d)| (o.ranks().to_vec(), d))
        .collect();
    if rows.is_empty() {
        return Err(Error::Input("order size differs from the graph".into()));
    }
    let mut violations = Vec::new();
    for (ranks, st) in &rows {
        if rt.max(log_n) > *st {
            violations.push(format!("order {ranks:?}: st = {st} below max(rt = {rt}, log = {log_n})"));
        }
        if *st > st_min + rt {
            violations.push(format!("order {ranks:?}: st = {st} above st(G) + rt = {}", st_min + rt));
        }
    }
    Ok(SandwichReport { n, rt, log_n, st_min, rows, violations })
}

/// Connected graphs on `n <= 6` vertices, one per isomorphism class.
pub fn connected_graphs_up_to_iso(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > 6 {
        return Err(Error::Param("n must be in 1..=6".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let relabelings: Vec<Vec<usize>> = {
        let mut p: Vec<usize> = (0..n).collect();
        let mut all = vec![p.clone()];
        while next_permutation(&mut p) {
            all.push(p.clone());
        }
        all
    };
    let index = |u: usize, v: usize| pairs.iter().position(|&e| e == (u.min(v), u.max(v))).expect("a pair");
    let images: Vec<Vec<usize>> =
        relabelings.iter().map(|r| pairs.iter().map(|&(u, v)| index(r[u], r[v])).collect()).collect();
    let mut canon_seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let canon = images
            .iter()
            .map(|img| (0..pairs.len()).filter(|&e| mask >> e & 1 == 1).fold(0u32, |c, e| c | 1 << img[e]))
            .min()
            .expect("identity relabeling");
        if canon != mask || !canon_seen.insert(canon) {
            continue;
        }
        let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|&e| mask >> e & 1 == 1).map(|e| pairs[e]).collect();
        if let Ok(g) = Graph::new(n, &edges) {
            out.push(g);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    #[test]
    fn matchings_of_small_graphs() {
        assert_eq!(all_matchings(&generate(&Family::Complete(4)).unwrap()).len(), 9);
        assert_eq!(all_matchings(&generate(&Family::Path(3)).unwrap()).len(), 2);
    }

    #[test]
    fn iso_class_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| connected_graphs_up_to_iso(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21]);
    }

    #[test]
    fn small_values() {
        let p2 = generate(&Family::Path(2)).unwrap();
        assert_eq!(exact_st(&p2, None, StOptions::default()).unwrap().value, 1);
        let k4 = generate(&Family::Complete(4)).unwrap();
        assert_eq!(exact_rt(&k4, None).unwrap().value, 2);
        assert_eq!(exact_rt(&k4, Some(&Permutation::identity(4))).unwrap().value, 0);
        assert_eq!(exact_rt_partial(&k4, &[0, 1], &[0, 1]).unwrap().value, 1);
        assert_eq!(exact_rt_partial(&k4, &[2], &[2]).unwrap().value, 0);
    }

    #[test]
    fn witnesses_replay() {
        let p4 = generate(&Family::Path(4)).unwrap();
        let r = exact_rt(&p4, None).unwrap();
        let Witness::Plan { plan, pairs } = &r.witness else { panic!() };
        assert_eq!(plan.depth(), r.value);
        plan.check(&p4).unwrap();
        let fin = plan.simulate(4);
        for &(a, b) in pairs {
            assert_eq!(fin[a], b);
        }
        let c4 = generate(&Family::Cycle(4)).unwrap();
        let r = exact_st(&c4, None, StOptions::default()).unwrap();
        let Witness::Network(net) = &r.witness else { panic!() };
        assert!(super::super::verify_exhaustive(net).unwrap().passed());
    }
}
