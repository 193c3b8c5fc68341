//! `matchnet`: build, verify, route and benchmark sorting networks whose
//! comparators are restricted to the edges of a graph.
//!
//! Exit status: 0 on success or a passing check, 1 when a check fails,
//! 2 when a verifier or oracle refuses an instance above its size cap,
//! 3 on usage and any other error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use matchnet::bench::{run_bench, to_csv, to_table, BenchConfig, Suite};
use matchnet::construct::{build_named, CONSTRUCTIONS};
use matchnet::graph::{graph_from_json, graph_to_dot, graph_to_json, GraphJson};
use matchnet::network::Provenance;
use matchnet::routing::router_for;
use matchnet::verify::{
    exact_rt, exact_rt_p, exact_st, verify_exhaustive, verify_randomized, verify_zero_one, OracleResult, StOptions,
    VerificationReport, Witness,
};
use matchnet::{generate, Error, Family, Graph, Permutation, SortingNetwork, VertexOrder};

#[derive(Parser)]
#[command(name = "matchnet", version, about = "Sorting networks on graphs, built from matchings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a graph as JSON or DOT.
    Generate {
        #[arg(long)]
        graph: String,
        /// Target order as 1-based ranks, one per vertex, comma separated.
        #[arg(long)]
        order: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a sorting network on a graph.
    Build {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value = "auto")]
        construction: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a network sorts.
    Verify {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, value_enum, default_value = "zero-one")]
        method: VerifyMethod,
        /// Samples of each kind for the random method.
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Route a permutation with swap-only stages.
    Route {
        #[arg(long)]
        graph: String,
        /// Destination of the pebble on each vertex, 1-based: a JSON array
        /// file or an inline comma-separated list.
        #[arg(long)]
        perm: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact sorting or routing number of a tiny graph.
    Oracle {
        #[arg(long, value_enum)]
        quantity: OracleQuantity,
        #[arg(long)]
        graph: String,
        /// Target order for `st`, 1-based ranks per vertex; defaults to the
        /// graph file's order or the identity.
        #[arg(long)]
        order: Option<String>,
        /// Destinations for `rt` (as for `route`); the worst case over all
        /// permutations when omitted.
        #[arg(long)]
        perm: Option<String>,
        /// Pebble count for `rt-p`.
        #[arg(long)]
        p: Option<usize>,
        /// For `rt-p`: take sources and targets disjoint.
        #[arg(long)]
        disjoint: bool,
        /// For `st`: leave unconditional swaps out of the stage alphabet.
        #[arg(long)]
        comparator_only: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Build and verify a suite of instances and tabulate depth against bound.
    Bench {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        /// Skip instances with more vertices than this.
        #[arg(long, default_value_t = 32)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; 0 picks automatically.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: BenchFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-emit a network as JSON or as DOT with edges labelled by stage.
    Export {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchFormat {
    Table,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyMethod {
    ZeroOne,
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleQuantity {
    St,
    Rt,
    RtP,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What a successful command reports through the exit status.
enum Outcome {
    Done,
    Checked(bool),
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// A graph from a JSON file, or from `family:params` when no such file exists.
fn load_graph(arg: &str) -> anyhow::Result<(Graph, Option<VertexOrder>)> {
    if Path::new(arg).is_file() {
        let text = fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
        let j: GraphJson = serde_json::from_str(&text).with_context(|| format!("parsing {arg}"))?;
        return Ok(graph_from_json(&j)?);
    }
    let fam: Family = arg.parse()?;
    Ok((generate(&fam)?, None))
}

fn load_net(path: &Path) -> anyhow::Result<SortingNetwork> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(SortingNetwork::from_json_str(&text)?)
}

/// 1-based integers from a JSON array file or an inline comma list.
fn load_list(arg: &str) -> anyhow::Result<Vec<usize>> {
    let v: Vec<usize> = if Path::new(arg).is_file() {
        serde_json::from_str(&fs::read_to_string(arg)?).with_context(|| format!("parsing {arg}"))?
    } else {
        arg.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>().context("expected 1-based integers")?
    };
    if v.contains(&0) {
        bail!("entries are 1-based");
    }
    Ok(v.into_iter().map(|x| x - 1).collect())
}

fn parse_order(arg: &str, n: usize) -> anyhow::Result<VertexOrder> {
    let ranks = load_list(arg)?;
    if ranks.len() != n {
        bail!("order lists {} ranks for {n} vertices", ranks.len());
    }
    Ok(VertexOrder::from_ranks(ranks)?)
}

fn report_text(r: &VerificationReport) -> String {
    let mut s = format!("method: {}\nverdict: {}\ninputs: {}\n", r.method, if r.passed() { "pass" } else { "fail" }, r.inputs_checked);
    if let Some(ce) = &r.counterexample {
        let keys: Vec<String> = ce.iter().map(|k| k.to_string()).collect();
        s.push_str(&format!("counterexample: {}\n", keys.join(",")));
    }
    s
}

fn oracle_json(res: &OracleResult) -> serde_json::Value {
    let witness = match &res.witness {
        Witness::Network(net) => serde_json::to_value(matchnet::network::network_to_json(net)).unwrap_or_default(),
        Witness::Plan { plan, pairs } => serde_json::json!({
            "pairs": pairs.iter().map(|&(a, b)| [a + 1, b + 1]).collect::<Vec<_>>(),
            "stages": plan.stages.iter().map(|s| s.comparators.iter().map(|c| [c.u + 1, c.v + 1]).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
    };
    serde_json::json!({
        "quantity": res.quantity,
        "value": res.value,
        "stats": res.stats,
        "witness": witness,
    })
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.cmd {
        Cmd::Generate { graph, order, format, out } => {
            let (g, file_order) = load_graph(&graph)?;
            let order = match order {
                Some(o) => Some(parse_order(&o, g.n())?),
                None => file_order,
            };
            let text = match format {
                ExportFormat::Json => serde_json::to_string_pretty(&graph_to_json(&g, order.as_ref()))? + "\n",
                ExportFormat::Dot => graph_to_dot(&g, &graph, None),
            };
            emit(out.as_deref(), &text)?;
            Ok(Outcome::Done)
        }
        Cmd::Build { graph, construction, out } => {
            let (g, _) = load_graph(&graph)?;
            if !CONSTRUCTIONS.contains(&construction.as_str()) {
                bail!("unknown construction '{construction}'; known: {}", CONSTRUCTIONS.join(", "));
            }
            let net = build_named(&construction, &g)?;
            emit(out.as_deref(), &(net.to_json_string() + "\n"))?;
            if out.is_some() {
                let bound = net.certificate.as_ref().map_or("none".to_string(), |c| c.claimed_bound.to_string());
                eprintln!("{}: n={} depth={} bound={bound}", net.provenance.construction, net.n(), net.depth());
            }
            Ok(Outcome::Done)
        }
        Cmd::Verify { net, method, trials, seed, format } => {
            let net = load_net(&net)?;
            let report = match method {
                VerifyMethod::ZeroOne => verify_zero_one(&net)?,
                VerifyMethod::Exhaustive => verify_exhaustive(&net)?,
                VerifyMethod::Random => verify_randomized(&net, trials, seed)?,
            };
            let text = match format {
                ReportFormat::Text => report_text(&report),
                ReportFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
            };
            emit(None, &text)?;
            Ok(Outcome::Checked(report.passed()))
        }
        Cmd::Route { graph, perm, out } => {
            let (g, _) = load_graph(&graph)?;
            let perm = Permutation::new(load_list(&perm)?)?;
            let router = router_for(&g)?;
            let plan = router.route(&perm)?;
            plan.check(&g)?;
            let prov = Provenance::new("route").with("router", router.name()).with("depth_bound", router.depth_bound());
            let net = SortingNetwork::new(g.clone(), plan.stages, VertexOrder::identity(g.n()), prov)?;
            emit(out.as_deref(), &(net.to_json_string() + "\n"))?;
            Ok(Outcome::Done)
        }
        Cmd::Oracle { quantity, graph, order, perm, p, disjoint, comparator_only, format } => {
            let (g, file_order) = load_graph(&graph)?;
            let res = match quantity {
                OracleQuantity::St => {
                    let order = match order {
                        Some(o) => Some(parse_order(&o, g.n())?),
                        None => file_order,
                    };
                    exact_st(&g, order.as_ref(), StOptions { comparator_only })?
                }
                OracleQuantity::Rt => {
                    let perm = perm.map(|s| load_list(&s).and_then(|v| Ok(Permutation::new(v)?))).transpose()?;
                    exact_rt(&g, perm.as_ref())?
                }
                OracleQuantity::RtP => {
                    let p = p.context("rt-p needs --p")?;
                    exact_rt_p(&g, p, disjoint)?
                }
            };
            let text = match format {
                ReportFormat::Text => format!(
                    "quantity: {:?}\nvalue: {}\nstates: {}\n",
                    res.quantity, res.value, res.stats.states
                ),
                ReportFormat::Json => serde_json::to_string_pretty(&oracle_json(&res))? + "\n",
            };
            emit(None, &text)?;
            Ok(Outcome::Done)
        }
        Cmd::Bench { suite, max_n, seed, jobs, format, out } => {
            let rows = run_bench(suite, &BenchConfig { max_n, seed, jobs })?;
            let text = match format {
                BenchFormat::Table => to_table(&rows, seed),
                BenchFormat::Csv => to_csv(&rows),
            };
            emit(out.as_deref(), &text)?;
            Ok(Outcome::Checked(rows.iter().all(|r| r.verdict == "pass")))
        }
        Cmd::Export { net, format, out } => {
            let net = load_net(&net)?;
            let text = match format {
                ExportFormat::Json => net.to_json_string() + "\n",
                ExportFormat::Dot => {
                    let label = |u: usize, v: usize| {
                        let used: Vec<String> = net
                            .stages
                            .iter()
                            .enumerate()
                            .filter(|(_, s)| s.comparators.iter().any(|c| (c.u.min(c.v), c.u.max(c.v)) == (u, v)))
                            .map(|(i, _)| (i + 1).to_string())
                            .collect();
                        used.join(",")
                    };
                    graph_to_dot(&net.graph, &net.provenance.construction, Some(&label))
                }
            };
            emit(out.as_deref(), &text)?;
            Ok(Outcome::Done)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version requests are not errors; usage errors share
            // the general error status so 2 keeps meaning "refused by cap"
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Outcome::Done) | Ok(Outcome::Checked(true)) => ExitCode::SUCCESS,
        Ok(Outcome::Checked(false)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::Cap { .. }) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}
