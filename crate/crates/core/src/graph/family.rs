use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, PyramidLayout, Vertex};
use crate::error::{Error, Result};

/// Named graph families with their canonical vertex numbering.
///
/// * `Path(n)`: `0 - 1 - ... - n-1`.
/// * `Cycle(n)`: the path plus `(n-1, 0)`.
/// * `Star(k)`: `K_{1,k}`, center `0`, leaves `1..=k`.
/// * `Multipartite { parts, size }`: part `i` is `i*size .. (i+1)*size`.
/// * `Hypercube(dim)`: vertex = bit vector, edges flip one bit.
/// * `Mesh(lengths)`: row-major, first coordinate most significant; equal to
///   the iterated cartesian product of paths.
/// * `RandomTree { n, seed }`: vertex `i >= 1` hangs off a uniform earlier vertex.
/// * `RandomGraph { n, extra, seed }`: a random tree plus `extra` random chords.
/// * `Pyramid`/`Multigrid`: level by level from the apex, each level row-major.
/// * `Product(a, b)`: vertex `(x, y)` is `x * |b| + y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    Star(usize),
    Multipartite { parts: usize, size: usize },
    Hypercube(usize),
    Mesh(Vec<usize>),
    RandomTree { n: usize, seed: u64 },
    RandomGraph { n: usize, extra: usize, seed: u64 },
    Pyramid { levels: usize, dim: usize },
    Multigrid { levels: usize, dim: usize },
    Product(Box<Family>, Box<Family>),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Path(n) => write!(f, "path:{n}"),
            Family::Cycle(n) => write!(f, "cycle:{n}"),
            Family::Complete(n) => write!(f, "complete:{n}"),
            Family::Star(k) => write!(f, "star:{k}"),
            Family::Multipartite { parts, size } => write!(f, "multipartite:{parts},{size}"),
            Family::Hypercube(d) => write!(f, "hypercube:{d}"),
            Family::Mesh(l) => {
                let dims: Vec<String> = l.iter().map(|x| x.to_string()).collect();
                write!(f, "mesh:{}", dims.join("x"))
            }
            Family::RandomTree { n, seed } => write!(f, "random_tree:{n},{seed}"),
            Family::RandomGraph { n, extra, seed } => write!(f, "random_graph:{n},{extra},{seed}"),
            Family::Pyramid { levels, dim } => write!(f, "pyramid:{levels},{dim}"),
            Family::Multigrid { levels, dim } => write!(f, "multigrid:{levels},{dim}"),
            Family::Product(a, b) => write!(f, "product[{a}|{b}]"),
        }
    }
}

fn parse_list(s: &str, sep: char) -> Result<Vec<u64>> {
    s.split(sep)
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| Error::Param(format!("expected an integer, got {x:?}")))
        })
        .collect()
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("product[").and_then(|r| r.strip_suffix(']')) {
            let mut depth = 0usize;
            for (i, c) in inner.char_indices() {
                match c {
                    '[' => depth += 1,
                    ']' => depth = depth.saturating_sub(1),
                    '|' if depth == 0 => {
                        let a = inner[..i].parse()?;
                        let b = inner[i + 1..].parse()?;
                        return Ok(Family::Product(Box::new(a), Box::new(b)));
                    }
                    _ => {}
                }
            }
            return Err(Error::Param(format!("malformed product family {s:?}")));
        }
        let (name, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Param(format!("expected family:params, got {s:?}")))?;
        let nums = |sep| parse_list(args, sep);
        let want = |v: Vec<u64>, k: usize| -> Result<Vec<u64>> {
            if v.len() == k {
                Ok(v)
            } else {
                Err(Error::Param(format!("{name} takes {k} parameter(s)")))
            }
        };
        let fam = match name {
            "path" => Family::Path(want(nums(',')?, 1)?[0] as usize),
            "cycle" => Family::Cycle(want(nums(',')?, 1)?[0] as usize),
            "complete" => Family::Complete(want(nums(',')?, 1)?[0] as usize),
            "star" => Family::Star(want(nums(',')?, 1)?[0] as usize),
            "hypercube" => Family::Hypercube(want(nums(',')?, 1)?[0] as usize),
            "multipartite" => {
                let v = want(nums(',')?, 2)?;
                Family::Multipartite { parts: v[0] as usize, size: v[1] as usize }
            }
            "mesh" => Family::Mesh(nums('x')?.into_iter().map(|x| x as usize).collect()),
            "random_tree" => {
                let v = want(nums(',')?, 2)?;
                Family::RandomTree { n: v[0] as usize, seed: v[1] }
            }
            "random_graph" => {
                let v = want(nums(',')?, 3)?;
                Family::RandomGraph { n: v[0] as usize, extra: v[1] as usize, seed: v[2] }
            }
            "pyramid" => {
                let v = want(nums(',')?, 2)?;
                Family::Pyramid { levels: v[0] as usize, dim: v[1] as usize }
            }
            "multigrid" => {
                let v = want(nums(',')?, 2)?;
                Family::Multigrid { levels: v[0] as usize, dim: v[1] as usize }
            }
            _ => return Err(Error::Param(format!("unknown graph family {name:?}"))),
        };
        Ok(fam)
    }
}

fn positive(x: usize, what: &str) -> Result<()> {
    if x == 0 {
        Err(Error::Param(format!("{what} must be positive")))
    } else {
        Ok(())
    }
}

/// Builds the named graph with its canonical numbering.
pub fn generate(family: &Family) -> Result<Graph> {
    let g = match family {
        Family::Path(n) => {
            positive(*n, "path length")?;
            let edges: Vec<_> = (1..*n).map(|i| (i - 1, i)).collect();
            Graph::new(*n, &edges)?
        }
        Family::Cycle(n) => {
            if *n < 3 {
                return Err(Error::Param("a cycle needs at least 3 vertices".into()));
            }
            let mut edges: Vec<_> = (1..*n).map(|i| (i - 1, i)).collect();
            edges.push((0, n - 1));
            Graph::new(*n, &edges)?
        }
        Family::Complete(n) => {
            positive(*n, "complete graph size")?;
            let mut edges = Vec::new();
            for u in 0..*n {
                for v in u + 1..*n {
                    edges.push((u, v));
                }
            }
            Graph::new(*n, &edges)?
        }
        Family::Star(k) => {
            positive(*k, "star leaf count")?;
            let edges: Vec<_> = (1..=*k).map(|i| (0, i)).collect();
            Graph::new(k + 1, &edges)?
        }
        Family::Multipartite { parts, size } => {
            if *parts < 2 {
                return Err(Error::Param("multipartite needs at least 2 parts".into()));
            }
            positive(*size, "part size")?;
            let n = parts * size;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if u / size != v / size {
                        edges.push((u, v));
                    }
                }
            }
            Graph::new(n, &edges)?
        }
        Family::Hypercube(dim) => {
            positive(*dim, "hypercube dimension")?;
            if *dim > 20 {
                return Err(Error::Param("hypercube dimension above 20".into()));
            }
            let n = 1usize << dim;
            let mut edges = Vec::new();
            for u in 0..n {
                for b in 0..*dim {
                    let v = u ^ (1 << b);
                    if u < v {
                        edges.push((u, v));
                    }
                }
            }
            Graph::new(n, &edges)?
        }
        Family::Mesh(lengths) => {
            if lengths.is_empty() {
                return Err(Error::Param("mesh needs at least one dimension".into()));
            }
            for &l in lengths {
                positive(l, "mesh side")?;
            }
            let (edges, n) = mesh_edges(lengths);
            Graph::new(n, &edges)?
        }
        Family::RandomTree { n, seed } => {
            positive(*n, "tree size")?;
            Graph::new(*n, &random_tree_edges(*n, &mut ChaCha8Rng::seed_from_u64(*seed)))?
        }
        Family::RandomGraph { n, extra, seed } => {
            positive(*n, "graph size")?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut edges = random_tree_edges(*n, &mut rng);
            let max_edges = n * (n - 1) / 2;
            let target = (edges.len() + extra).min(max_edges);
            let mut present: std::collections::BTreeSet<(usize, usize)> = edges.iter().copied().collect();
            while present.len() < target {
                let u = rng.gen_range(0..*n);
                let v = rng.gen_range(0..*n);
                if u != v {
                    let e = (u.min(v), u.max(v));
                    if present.insert(e) {
                        edges.push(e);
                    }
                }
            }
            Graph::new(*n, &edges)?
        }
        Family::Pyramid { levels, dim } => PyramidLayout::new(*levels, *dim)?.graph(false)?,
        Family::Multigrid { levels, dim } => PyramidLayout::new(*levels, *dim)?.graph(true)?,
        Family::Product(a, b) => {
            let ga = generate(a)?;
            let gb = generate(b)?;
            return Ok(cartesian_product(&ga, &gb).with_family(family.clone()));
        }
    };
    Ok(g.with_family(family.clone()))
}

fn mesh_edges(lengths: &[usize]) -> (Vec<(Vertex, Vertex)>, usize) {
    let n: usize = lengths.iter().product();
    let mut strides = vec![1usize; lengths.len()];
    for k in (0..lengths.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * lengths[k + 1];
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for (k, &len) in lengths.iter().enumerate() {
            let coord = (u / strides[k]) % len;
            if coord + 1 < len {
                edges.push((u, u + strides[k]));
            }
        }
    }
    (edges, n)
}

fn random_tree_edges(n: usize, rng: &mut ChaCha8Rng) -> Vec<(Vertex, Vertex)> {
    (1..n).map(|i| (rng.gen_range(0..i), i)).collect()
}

/// `G1 □ G2`: vertex `(x, y)` is numbered `x * |V2| + y`.
pub fn cartesian_product(g1: &Graph, g2: &Graph) -> Graph {
    let n2 = g2.n();
    let mut edges = Vec::new();
    for x in 0..g1.n() {
        for (a, b) in g2.edges() {
            edges.push((x * n2 + a, x * n2 + b));
        }
    }
    for (a, b) in g1.edges() {
        for y in 0..n2 {
            edges.push((a * n2 + y, b * n2 + y));
        }
    }
    let mut g = Graph::new(g1.n() * n2, &edges).expect("product of connected graphs is connected");
    if let (Some(a), Some(b)) = (g1.family(), g2.family()) {
        g = g.with_family(Family::Product(Box::new(a.clone()), Box::new(b.clone())));
    }
    g
}
