use super::{finish, DepthCertificate};
use crate::error::{Error, Result};
use crate::graph::{tree_contour, Graph, Vertex, VertexOrder};
use crate::network::{Comparator, Provenance, SortingNetwork, Stage};

/// Sorting network on a tree by emulating odd-even transposition on the
/// virtual path of marked contour vertices.
///
/// Consecutive marked vertices are at most three contour steps apart, so
/// the tree path between them has at most three edges. Each virtual round
/// colors these paths so that paths sharing a vertex get different colors
/// (at most `4Δ - 3` colors); a color class is executed in at most three
/// stages: both endpoints step inward, compare, step back.
pub fn contour_tree_sort(t: &Graph) -> Result<SortingNetwork> {
    if !t.is_tree() {
        return Err(Error::Structure("contour sort needs a tree".into()));
    }
    let n = t.n();
    let delta = t.max_degree();
    let colors_allowed = if n <= 2 { 1 } else { 4 * delta - 3 };
    let contour = tree_contour(t, 0)?;
    let seq = contour.marked_sequence();
    let order = VertexOrder::from_sequence(&seq)?;

    let mut stages = Vec::new();
    let rounds = if n == 1 { 0 } else { n };
    for r in 0..rounds {
        let paths: Vec<Vec<Vertex>> = (r % 2..n.saturating_sub(1))
            .step_by(2)
            .map(|i| t.shortest_path(seq[i], seq[i + 1]).expect("tree is connected"))
            .collect();
        // greedy coloring of the conflict graph, in virtual-path order
        let mut color = vec![usize::MAX; paths.len()];
        for i in 0..paths.len() {
            let mut taken = vec![false; paths.len() + 1];
            for j in 0..i {
                if paths[i].iter().any(|v| paths[j].contains(v)) {
                    taken[color[j]] = true;
                }
            }
            color[i] = (0..).find(|&c| !taken[c]).expect("a color is free");
        }
        let used = color.iter().map(|&c| c + 1).max().unwrap_or(0);
        if used > colors_allowed {
            return Err(Error::Internal(format!("{used} colors exceed the 4Δ-3 budget")));
        }
        for c in 0..used {
            let class: Vec<&Vec<Vertex>> = (0..paths.len()).filter(|&i| color[i] == c).map(|i| &paths[i]).collect();
            let mut seen = vec![false; n];
            for p in &class {
                for &v in p.iter() {
                    if std::mem::replace(&mut seen[v], true) {
                        return Err(Error::Internal("conflicting intervals share a color".into()));
                    }
                }
            }
            stages.extend(emulate_class(&class));
        }
    }
    let bound = 5 * colors_allowed * rounds;
    let cert = DepthCertificate::new("contour_tree_sort").param("n", n).param("max_degree", delta).bound(bound);
    finish(t.clone(), stages, order, Provenance::new("contour_tree_sort").with("n", n), cert, false)
}

/// Compare-exchanges the endpoints of vertex-disjoint paths (one to three
/// edges); the minimum ends on the first endpoint.
fn emulate_class(class: &[&Vec<Vertex>]) -> Vec<Stage> {
    let mut inward = Vec::new();
    let mut compare = Vec::new();
    for p in class {
        match p.len() {
            2 => compare.push(Comparator::compare(p[0], p[1])),
            3 => {
                inward.push(Comparator::swap(p[0], p[1]));
                compare.push(Comparator::compare(p[1], p[2]));
            }
            4 => {
                inward.push(Comparator::swap(p[0], p[1]));
                inward.push(Comparator::swap(p[3], p[2]));
                compare.push(Comparator::compare(p[1], p[2]));
            }
            _ => unreachable!("marked vertices are at most three edges apart"),
        }
    }
    let mut out = Vec::new();
    if !inward.is_empty() {
        out.push(Stage::new(inward.clone()));
    }
    out.push(Stage::new(compare));
    if !inward.is_empty() {
        out.push(Stage::new(inward));
    }
    out
}
