//! Benchmark suites: build networks on fixed instances, verify them and
//! report achieved depth against the certified bound.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::build_named;
use crate::error::{Error, Result};
use crate::graph::{generate, Family};
use crate::verify::{verify_auto, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Paths,
    Trees,
    Meshes,
    Hypercubes,
    Multipartite,
    Pyramids,
    All,
}

impl Suite {
    pub const NAMES: &'static [&'static str] =
        &["paths", "trees", "meshes", "hypercubes", "multipartite", "pyramids", "all"];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "paths" => Suite::Paths,
            "trees" => Suite::Trees,
            "meshes" => Suite::Meshes,
            "hypercubes" => Suite::Hypercubes,
            "multipartite" => Suite::Multipartite,
            "pyramids" => Suite::Pyramids,
            "all" => Suite::All,
            _ => return Err(Error::Param(format!("unknown suite '{s}'; known: {}", Suite::NAMES.join(", ")))),
        })
    }
}

/// One benchmark instance: a graph family and the construction to run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub family: Family,
    pub construction: &'static str,
}

fn inst(family: Family, construction: &'static str) -> Instance {
    Instance { family, construction }
}

/// Instances of a suite, in report order. Random trees draw their seeds
/// from `seed`.
pub fn suite_instances(suite: Suite, seed: u64) -> Vec<Instance> {
    match suite {
        Suite::Paths => [2, 4, 8, 16].into_iter().map(|n| inst(Family::Path(n), "odd-even")).collect(),
        Suite::Trees => vec![
            inst(Family::Star(7), "contour"),
            inst(Family::Star(7), "longest-path"),
            inst(Family::RandomTree { n: 10, seed }, "contour"),
            inst(Family::RandomTree { n: 12, seed: seed + 1 }, "contour"),
            inst(Family::RandomTree { n: 12, seed: seed + 1 }, "longest-path"),
        ],
        Suite::Meshes => vec![
            inst(Family::Mesh(vec![2, 2]), "product"),
            inst(Family::Mesh(vec![3, 3]), "product"),
            inst(Family::Mesh(vec![4, 4]), "product"),
            inst(Family::Mesh(vec![2, 2, 2]), "product"),
        ],
        Suite::Hypercubes => {
            let mut v: Vec<Instance> = (1..=4).map(|d| inst(Family::Hypercube(d), "bitonic")).collect();
            v.push(inst(Family::Hypercube(3), "product"));
            v.push(inst(Family::Hypercube(4), "product"));
            v
        }
        Suite::Multipartite => vec![
            inst(Family::Multipartite { parts: 3, size: 2 }, "simulate"),
            inst(Family::Multipartite { parts: 2, size: 4 }, "simulate"),
            inst(Family::Multipartite { parts: 4, size: 3 }, "simulate"),
        ],
        Suite::Pyramids => vec![
            inst(Family::Pyramid { levels: 2, dim: 1 }, "pyramid"),
            inst(Family::Pyramid { levels: 3, dim: 1 }, "pyramid"),
            inst(Family::Pyramid { levels: 2, dim: 2 }, "pyramid"),
            inst(Family::Pyramid { levels: 4, dim: 1 }, "pyramid"),
            inst(Family::Pyramid { levels: 3, dim: 2 }, "pyramid"),
        ],
        Suite::All => [Suite::Paths, Suite::Trees, Suite::Meshes, Suite::Hypercubes, Suite::Multipartite, Suite::Pyramids]
            .into_iter()
            .flat_map(|s| suite_instances(s, seed))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub family: String,
    pub construction: String,
    pub n: usize,
    pub achieved_depth: usize,
    pub certificate_bound: u64,
    pub method: String,
    pub verdict: String,
    pub note: String,
    /// Build plus verification time; left out of the CSV.
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    /// Instances with more vertices are skipped; 0 skips everything.
    pub max_n: usize,
    pub seed: u64,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { max_n: 32, seed: 0, jobs: 0 }
    }
}

fn run_one(i: &Instance, seed: u64) -> Result<BenchRow> {
    let start = Instant::now();
    let g = generate(&i.family)?;
    let net = build_named(i.construction, &g)?;
    let report = verify_auto(&net, seed)?;
    let mut notes = Vec::new();
    if matches!(i.family, Family::Pyramid { .. }) {
        notes.push("bottom mesh sorted by product sort (extra log factor)");
    }
    if report.verdict == Verdict::Pass && !matches!(report.method, crate::verify::Method::ZeroOne) {
        notes.push("sampled, not certified");
    }
    let note = notes.join("; ");
    Ok(BenchRow {
        family: i.family.to_string(),
        construction: i.construction.to_string(),
        n: g.n(),
        achieved_depth: net.depth(),
        certificate_bound: net.certificate.as_ref().map_or(0, |c| c.claimed_bound),
        method: report.method.to_string(),
        verdict: if report.passed() { "pass" } else { "fail" }.to_string(),
        note,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Runs a suite. Rows keep suite order whatever order workers finish in.
pub fn run_bench(suite: Suite, cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let instances: Vec<Instance> = suite_instances(suite, cfg.seed)
        .into_iter()
        .filter(|i| generate(&i.family).map(|g| g.n() <= cfg.max_n).unwrap_or(false))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    pool.install(|| instances.par_iter().map(|i| run_one(i, cfg.seed)).collect())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const CSV_HEADER: &str = "family,construction,n,achieved_depth,certificate_bound,method,verdict,note";

/// Machine-readable rows; wall time is omitted so equal runs give equal bytes.
pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            csv_field(&r.family),
            csv_field(&r.construction),
            r.n.to_string(),
            r.achieved_depth.to_string(),
            r.certificate_bound.to_string(),
            csv_field(&r.method),
            csv_field(&r.verdict),
            csv_field(&r.note),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Human-readable table with wall times.
pub fn to_table(rows: &[BenchRow], seed: u64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "seed: {seed}");
    let _ = writeln!(
        out,
        "{:<22} {:<13} {:>4} {:>6} {:>7} {:<18} {:<7} {:>9}  note",
        "family", "construction", "n", "depth", "bound", "method", "verdict", "wall_ms"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<22} {:<13} {:>4} {:>6} {:>7} {:<18} {:<7} {:>9.1}  {}",
            r.family, r.construction, r.n, r.achieved_depth, r.certificate_bound, r.method, r.verdict, r.wall_ms, r.note
        );
    }
    out
}
