use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Family, Graph, VertexOrder};
use crate::error::{Error, Result};

/// Wire form of a graph: 1-based vertices, edges `u < v` sorted
/// lexicographically, optional family tag and optional target order (the
/// rank of vertex `i` at position `i - 1`, ranks 1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub family: Option<String>,
    pub order: Option<Vec<usize>>,
}

pub fn graph_to_json(g: &Graph, order: Option<&VertexOrder>) -> GraphJson {
    GraphJson {
        n: g.n(),
        edges: g.edges().into_iter().map(|(u, v)| [u + 1, v + 1]).collect(),
        family: g.family().map(|f| f.to_string()),
        order: order.map(|o| o.ranks().iter().map(|r| r + 1).collect()),
    }
}

pub fn graph_from_json(j: &GraphJson) -> Result<(Graph, Option<VertexOrder>)> {
    let mut edges = Vec::with_capacity(j.edges.len());
    for &[u, v] in &j.edges {
        if u == 0 || v == 0 {
            return Err(Error::Parse("vertices are 1-based".into()));
        }
        edges.push((u - 1, v - 1));
    }
    let mut g = Graph::new(j.n, &edges)?;
    if let Some(f) = &j.family {
        g = g.with_family(f.parse::<Family>()?);
    }
    let order = match &j.order {
        Some(r) => {
            if r.len() != j.n || r.iter().any(|&x| x == 0) {
                return Err(Error::Parse("order must list n 1-based ranks".into()));
            }
            Some(VertexOrder::from_ranks(r.iter().map(|x| x - 1).collect())?)
        }
        None => None,
    };
    Ok((g, order))
}

/// Graphviz rendering; `labels` annotates edges (e.g. the stages using them).
pub fn graph_to_dot(g: &Graph, name: &str, labels: Option<&dyn Fn(usize, usize) -> String>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph \"{name}\" {{");
    for v in 0..g.n() {
        let _ = writeln!(s, "  {};", v + 1);
    }
    for (u, v) in g.edges() {
        match labels.map(|f| f(u, v)).filter(|l| !l.is_empty()) {
            Some(l) => {
                let _ = writeln!(s, "  {} -- {} [label=\"{}\"];", u + 1, v + 1, l);
            }
            None => {
                let _ = writeln!(s, "  {} -- {};", u + 1, v + 1);
            }
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    #[test]
    fn json_is_one_based_and_roundtrips() {
        let g = generate(&Family::Path(4)).unwrap();
        let j = graph_to_json(&g, Some(&VertexOrder::identity(4)));
        assert_eq!(j.edges, vec![[1, 2], [2, 3], [3, 4]]);
        assert_eq!(j.order, Some(vec![1, 2, 3, 4]));
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(
            text,
            r#"{"n":4,"edges":[[1,2],[2,3],[3,4]],"family":"path:4","order":[1,2,3,4]}"#
        );
        let (h, o) = graph_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(h, g);
        assert_eq!(o.unwrap(), VertexOrder::identity(4));
    }

    #[test]
    fn dot_lists_vertices_and_edges() {
        let g = generate(&Family::Pyramid { levels: 3, dim: 1 }).unwrap();
        let dot = graph_to_dot(&g, "p", None);
        assert_eq!(dot.lines().filter(|l| l.trim_end().ends_with(';') && !l.contains("--")).count(), 7);
        assert_eq!(dot.matches("--").count(), g.num_edges());
    }
}
