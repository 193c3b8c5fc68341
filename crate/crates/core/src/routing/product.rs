use super::{router_for, PathRouter, Permutation, Router, RoutingPlan, Schedule};
use crate::error::{Error, Result};
use crate::graph::{cartesian_product, generate, Family, Graph, Vertex};

/// Routing on `G1 □ G2` (vertex `(a, b)` is `a·|V2| + b`) in three phases:
/// inside rows, inside columns, inside rows again, or the mirrored order,
/// whichever comes out shallower.
pub struct ProductRouter {
    graph: Graph,
    outer: Box<dyn Router>,
    inner: Box<dyn Router>,
}

impl ProductRouter {
    pub fn new(graph: Graph, outer: Box<dyn Router>, inner: Box<dyn Router>) -> Result<Self> {
        if graph.n() != outer.graph().n() * inner.graph().n() {
            return Err(Error::Structure("factor sizes do not match the product".into()));
        }
        Ok(ProductRouter { graph, outer, inner })
    }

    /// Router for a product-structured family member (hypercube, mesh or
    /// tagged product); degenerate one-factor cases get a path router.
    pub fn for_graph(g: &Graph) -> Result<Box<dyn Router>> {
        let (f1, f2) = match g.family() {
            Some(Family::Hypercube(d)) if *d >= 2 => (Family::Complete(2), Family::Hypercube(d - 1)),
            Some(Family::Mesh(dims)) if dims.len() >= 2 => (Family::Path(dims[0]), Family::Mesh(dims[1..].to_vec())),
            Some(Family::Product(a, b)) => ((**a).clone(), (**b).clone()),
            Some(Family::Hypercube(_)) | Some(Family::Mesh(_)) => return Ok(Box::new(PathRouter::new(g.clone())?)),
            _ => return Err(Error::Structure("graph carries no product structure".into())),
        };
        let (g1, g2) = (generate(&f1)?, generate(&f2)?);
        Ok(Box::new(ProductRouter::new(g.clone(), router_for(&g1)?, router_for(&g2)?)?))
    }
}

pub fn route_product(g1: &Graph, g2: &Graph, perm: &Permutation) -> Result<RoutingPlan> {
    let g = cartesian_product(g1, g2);
    ProductRouter::new(g, router_for(g1)?, router_for(g2)?)?.route(perm)
}

impl Router for ProductRouter {
    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn route(&self, perm: &Permutation) -> Result<RoutingPlan> {
        let (n1, n2) = (self.outer.graph().n(), self.inner.graph().n());
        if perm.n() != n1 * n2 {
            return Err(Error::Input("permutation size differs from the graph".into()));
        }
        let rows_first = three_phase(n1, n2, self.inner.as_ref(), self.outer.as_ref(), perm.as_slice())?;
        // transposed coordinates: (a, b) -> b·n1 + a
        let tr = |v: Vertex| (v % n2) * n1 + v / n2;
        let untr = |w: Vertex| (w % n1) * n2 + w / n1;
        let mut dest_t = vec![0; n1 * n2];
        for v in 0..n1 * n2 {
            dest_t[tr(v)] = tr(perm.dest(v));
        }
        let cols_first = three_phase(n2, n1, self.outer.as_ref(), self.inner.as_ref(), &dest_t)?;
        let best = if cols_first.len() < rows_first.len() {
            cols_first.into_iter().map(|s| s.into_iter().map(|(a, b)| (untr(a), untr(b))).collect()).collect()
        } else {
            rows_first
        };
        let mut sched = Schedule::new();
        for s in best {
            sched.append_stage(s);
        }
        Ok(RoutingPlan { stages: sched.into_stages(), realized: perm.as_slice().iter().map(|&d| Some(d)).collect() })
    }

    fn depth_bound(&self) -> usize {
        let (b1, b2) = (self.outer.depth_bound(), self.inner.depth_bound());
        b1.min(b2) + b1 + b2
    }

    fn name(&self) -> String {
        format!("product[{}|{}]", self.outer.name(), self.inner.name())
    }
}

/// Rows have `n_in` vertices and are copies of `row`'s graph; columns have
/// `n_out` vertices and are copies of `col`'s graph.
fn three_phase(
    n_out: usize,
    n_in: usize,
    row: &dyn Router,
    col: &dyn Router,
    dest: &[Vertex],
) -> Result<Vec<Vec<(Vertex, Vertex)>>> {
    let color = column_assignment(n_out, n_in, dest)?;
    let mut sched = Schedule::new();
    let mut start = 0;

    // phase 1: inside each row, pebble (a, b) moves to column color[v]
    let mut pos: Vec<Vertex> = (0..n_out * n_in).collect();
    let mut depth = 0;
    for a in 0..n_out {
        let local: Vec<usize> = (0..n_in).map(|b| color[a * n_in + b]).collect();
        let plan = row.route(&Permutation::new(local)?)?;
        depth = depth.max(plan.depth());
        sched.overlay(start, &plan.stages, |x| a * n_in + x);
        for b in 0..n_in {
            pos[a * n_in + b] = a * n_in + color[a * n_in + b];
        }
    }
    start += depth;

    // phase 2: inside each column, move to the destination row
    let mut at = vec![usize::MAX; n_out * n_in];
    for (v, &p) in pos.iter().enumerate() {
        at[p] = v;
    }
    depth = 0;
    for c in 0..n_in {
        let local: Vec<usize> = (0..n_out).map(|a| dest[at[a * n_in + c]] / n_in).collect();
        let plan = col.route(&Permutation::new(local).map_err(|_| Error::Internal("column assignment clash".into()))?)?;
        depth = depth.max(plan.depth());
        sched.overlay(start, &plan.stages, |x| x * n_in + c);
        for a in 0..n_out {
            let v = at[a * n_in + c];
            pos[v] = (dest[v] / n_in) * n_in + c;
        }
    }
    start += depth;

    // phase 3: inside each row, move to the destination column
    for (v, &p) in pos.iter().enumerate() {
        at[p] = v;
    }
    for a in 0..n_out {
        let local: Vec<usize> = (0..n_in).map(|c| dest[at[a * n_in + c]] % n_in).collect();
        let plan = row.route(&Permutation::new(local).map_err(|_| Error::Internal("row clash".into()))?)?;
        sched.overlay(start, &plan.stages, |x| a * n_in + x);
    }
    Ok(sched.into_stages().into_iter().map(|s| s.comparators.iter().map(|c| (c.u, c.v)).collect()).collect())
}

/// Assigns each pebble a column so that every row sends and every row
/// receives exactly one pebble per column: the source-row/destination-row
/// multigraph is `n_in`-regular and splits into `n_in` perfect matchings.
fn column_assignment(n_out: usize, n_in: usize, dest: &[Vertex]) -> Result<Vec<usize>> {
    let mut bucket: Vec<Vec<Vec<Vertex>>> = vec![vec![Vec::new(); n_out]; n_out];
    for v in 0..n_out * n_in {
        bucket[v / n_in][dest[v] / n_in].push(v);
    }
    let mut color = vec![0; n_out * n_in];
    for c in 0..n_in {
        let mut match_r: Vec<Option<usize>> = vec![None; n_out];
        for a in 0..n_out {
            let mut seen = vec![false; n_out];
            if !augment(a, &bucket, &mut seen, &mut match_r) {
                return Err(Error::Internal("regular multigraph lacks a perfect matching".into()));
            }
        }
        for (r, m) in match_r.iter().enumerate() {
            let a = m.expect("perfect matching");
            let v = bucket[a][r].pop().expect("edge present");
            color[v] = c;
        }
    }
    Ok(color)
}

fn augment(a: usize, bucket: &[Vec<Vec<Vertex>>], seen: &mut [bool], match_r: &mut [Option<usize>]) -> bool {
    for r in 0..bucket.len() {
        if bucket[a][r].is_empty() || seen[r] {
            continue;
        }
        seen[r] = true;
        if match_r[r].map_or(true, |a2| augment(a2, bucket, seen, match_r)) {
            match_r[r] = Some(a);
            return true;
        }
    }
    false
}
