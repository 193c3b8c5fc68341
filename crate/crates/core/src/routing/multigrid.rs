use super::{odd_even_route, router_for, two_cycle_decompose, Permutation, Router, RoutingPlan, Schedule};
use crate::error::{Error, Result};
use crate::graph::{generate, Family, Graph, PyramidLayout, Vertex};

/// Routing on the multigrid (and therefore on the pyramid, which contains
/// it). Each involution factor is handled in five rounds: level-internal,
/// vertical, level-internal, vertical, level-internal. Transpositions whose
/// endpoints sit on different levels are carried by the vertex-disjoint
/// vertical paths, two batches per starting level.
pub struct MultigridRouter {
    graph: Graph,
    layout: PyramidLayout,
    levels: Vec<Box<dyn Router>>,
}

impl MultigridRouter {
    pub fn new(graph: Graph) -> Result<Self> {
        let layout = match graph.family() {
            Some(Family::Pyramid { levels, dim }) | Some(Family::Multigrid { levels, dim }) => {
                PyramidLayout::new(*levels, *dim)?
            }
            _ => return Err(Error::Structure("multigrid router needs a pyramid or multigrid".into())),
        };
        let levels = (0..layout.levels())
            .map(|l| router_for(&layout.level_graph(l)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultigridRouter { graph, layout, levels })
    }

    pub fn layout(&self) -> &PyramidLayout {
        &self.layout
    }

    /// Level-internal round: every tracked pebble moves to its goal on its
    /// own level; untracked pebbles fill in.
    fn level_round(&self, goals: &[(Vertex, Vertex)], sched: &mut Schedule, start: usize) -> Result<usize> {
        let lay = &self.layout;
        let mut per_level: Vec<Vec<(Vertex, Vertex)>> = vec![Vec::new(); lay.levels()];
        for &(from, to) in goals {
            let l = lay.level_of(from);
            if lay.level_of(to) != l {
                return Err(Error::Internal("level round asked to change level".into()));
            }
            let off = lay.level_range(l).start;
            per_level[l].push((from - off, to - off));
        }
        let mut depth = 0;
        for (l, pairs) in per_level.iter().enumerate() {
            if pairs.iter().all(|&(a, b)| a == b) {
                continue;
            }
            let off = lay.level_range(l).start;
            let plan = self.levels[l].route_partial(pairs)?;
            sched.overlay(start, &plan.stages, |x| x + off);
            depth = depth.max(plan.depth());
        }
        Ok(depth)
    }

    fn route_involution(&self, inv: &Permutation, sched: &mut Schedule, mut start: usize) -> Result<usize> {
        let lay = &self.layout;
        let m = lay.levels();
        let paths = lay.vertical_paths();
        let mut by_top: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (i, p) in paths.iter().enumerate() {
            by_top[lay.level_of(p[0])].push(i);
        }
        let mut groups: Vec<Vec<(Vertex, Vertex)>> = vec![Vec::new(); m];
        for a in 0..inv.n() {
            let b = inv.dest(a);
            let (la, lb) = (lay.level_of(a), lay.level_of(b));
            if la < lb {
                groups[la].push((a, b));
            }
        }
        // (upper pebble, lower pebble, path index, lower index on the path)
        let mut batches: [Vec<(Vertex, Vertex, usize, usize)>; 2] = Default::default();
        for (i, g) in groups.iter().enumerate() {
            let cnt = by_top[i].len();
            if g.len() > 2 * cnt {
                return Err(Error::Internal(format!("level {} has {} crossing pairs for {} paths", i, g.len(), cnt)));
            }
            for (t, &(a, b)) in g.iter().enumerate() {
                let pi = by_top[i][t % cnt];
                batches[t / cnt].push((a, b, pi, lay.level_of(b) - i));
            }
        }

        let n = inv.n();
        let mut loc: Vec<Vertex> = (0..n).collect();
        let t0 = start;
        let follow = |loc: &mut Vec<Vertex>, sched: &Schedule, from: usize, to: usize| {
            let mut at = vec![0; n];
            for (p, &v) in loc.iter().enumerate() {
                at[v] = p;
            }
            for stage in sched.stages_between(from, to) {
                for &(a, b) in stage {
                    at.swap(a, b);
                }
            }
            for (v, &p) in at.iter().enumerate() {
                loc[p] = v;
            }
        };
        for batch in &batches {
            let goals: Vec<(Vertex, Vertex)> = batch
                .iter()
                .flat_map(|&(a, b, pi, k)| [(loc[a], paths[pi][0]), (loc[b], paths[pi][k])])
                .collect();
            let d = self.level_round(&goals, sched, start)?;
            follow(&mut loc, sched, start, start + d);
            start += d;
            let mut d = 0;
            for &(_, _, pi, k) in batch {
                let seq = &paths[pi][..=k];
                let mut keys: Vec<usize> = (0..=k).collect();
                keys.swap(0, k);
                for (r, swaps) in odd_even_route(seq, &keys).into_iter().enumerate() {
                    d = d.max(r + 1);
                    for e in swaps {
                        sched.push_at(start + r, e);
                    }
                }
            }
            follow(&mut loc, sched, start, start + d);
            start += d;
        }
        let goals: Vec<(Vertex, Vertex)> = (0..n).map(|p| (loc[p], inv.dest(p))).collect();
        let d = self.level_round(&goals, sched, start)?;
        start += d;
        Ok(start - t0)
    }
}

pub fn route_multigrid(levels: usize, dim: usize, perm: &Permutation) -> Result<RoutingPlan> {
    let g = generate(&Family::Multigrid { levels, dim })?;
    MultigridRouter::new(g)?.route(perm)
}

impl Router for MultigridRouter {
    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn route(&self, perm: &Permutation) -> Result<RoutingPlan> {
        if perm.n() != self.graph.n() {
            return Err(Error::Input("permutation size differs from the graph".into()));
        }
        let (first, second) = two_cycle_decompose(perm);
        let mut sched = Schedule::new();
        let d = self.route_involution(&first, &mut sched, 0)?;
        self.route_involution(&second, &mut sched, d)?;
        Ok(RoutingPlan { stages: sched.into_stages(), realized: perm.as_slice().iter().map(|&d| Some(d)).collect() })
    }

    fn depth_bound(&self) -> usize {
        let bottom = self.levels.last().map_or(0, |r| r.depth_bound());
        2 * (3 * bottom + 2 * self.layout.levels())
    }

    fn name(&self) -> String {
        "multigrid".into()
    }
}
