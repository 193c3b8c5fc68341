use std::path::Path;
use std::process::{Command, Output};

use matchnet::routing::RoutingPlan;
use matchnet::SortingNetwork;

fn matchnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matchnet")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_build_verify_bench_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    let net = dir.path().join("net.json");

    let o = matchnet(&["generate", "--graph", "pyramid:2,2", "--out", path_str(&g)]);
    assert!(o.status.success(), "{o:?}");
    let o = matchnet(&["build", "--graph", path_str(&g), "--construction", "auto", "--out", path_str(&net)]);
    assert!(o.status.success(), "{o:?}");
    let o = matchnet(&["verify", "--net", path_str(&net)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: pass"));

    let o = matchnet(&["bench", "--suite", "paths", "--format", "csv", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    for r in rows {
        let f: Vec<&str> = r.split(',').collect();
        // achieved depth equals n on paths
        assert_eq!(f[2], f[3], "{r}");
        assert_eq!(f[6], "pass");
    }
}

#[test]
fn failing_network_exits_one_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.json");
    matchnet(&["build", "--graph", "path:5", "--out", path_str(&net)]);
    let mut parsed = SortingNetwork::from_json_str(&std::fs::read_to_string(&net).unwrap()).unwrap();
    parsed.stages.pop();
    std::fs::write(&net, parsed.to_json_string()).unwrap();
    for method in ["zero-one", "exhaustive", "random"] {
        let o = matchnet(&["verify", "--net", path_str(&net), "--method", method, "--trials", "500"]);
        assert_eq!(o.status.code(), Some(1), "{method}");
        assert!(stdout(&o).contains("counterexample:"));
    }
}

#[test]
fn cap_refusal_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.json");
    matchnet(&["build", "--graph", "path:24", "--out", path_str(&net)]);
    assert_eq!(matchnet(&["verify", "--net", path_str(&net)]).status.code(), Some(2));
    assert_eq!(matchnet(&["verify", "--net", path_str(&net), "--method", "exhaustive"]).status.code(), Some(2));
    assert_eq!(matchnet(&["oracle", "--quantity", "st", "--graph", "path:9"]).status.code(), Some(2));
}

#[test]
fn cap_override_is_guarded() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.json");
    matchnet(&["build", "--graph", "path:6", "--out", path_str(&net)]);
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_matchnet"))
            .args(["verify", "--net", path_str(&net)])
            .env("MATCHNET_CAP_OVERRIDE", cap)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("4"), Some(2));
    assert_eq!(run("22"), Some(0));
    // above the hard ceiling the override itself is rejected
    assert_eq!(run("40"), Some(3));
}

#[test]
fn empty_caps_give_empty_table() {
    let o = matchnet(&["bench", "--suite", "all", "--max-n", "0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let o = matchnet(&["bench", "--suite", "lattices"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite"));
}

#[test]
fn bench_csv_is_byte_identical_across_runs() {
    let args = ["bench", "--suite", "trees", "--format", "csv", "--seed", "7"];
    let a = matchnet(&args);
    let b = matchnet(&["bench", "--suite", "trees", "--format", "csv", "--seed", "7", "--jobs", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn table_prints_seed() {
    let o = matchnet(&["bench", "--suite", "paths", "--seed", "5"]);
    assert!(stdout(&o).starts_with("seed: 5\n"));
}

#[test]
fn export_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.json");
    let again = dir.path().join("again.json");
    matchnet(&["build", "--graph", "mesh:3x3", "--out", path_str(&net)]);
    let o = matchnet(&["export", "--net", path_str(&net), "--format", "json", "--out", path_str(&again)]);
    assert!(o.status.success());
    let a = SortingNetwork::from_json_str(&std::fs::read_to_string(&net).unwrap()).unwrap();
    let b = SortingNetwork::from_json_str(&std::fs::read_to_string(&again).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn dot_of_path_network_has_three_edges() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.json");
    matchnet(&["build", "--graph", "path:4", "--out", path_str(&net)]);
    let dot = stdout(&matchnet(&["export", "--net", path_str(&net), "--format", "dot"]));
    assert_eq!(dot.matches(" -- ").count(), 3);
    // every path edge is used by some stage
    assert_eq!(dot.matches("label=").count(), 3);
}

#[test]
fn dot_of_pyramid_lists_every_vertex() {
    let dot = stdout(&matchnet(&["generate", "--graph", "pyramid:3,2", "--format", "dot"]));
    // 1 + 4 + 16 vertices
    let vertex_lines = dot.lines().filter(|l| l.trim_end().ends_with(';') && !l.contains("--")).count();
    assert_eq!(vertex_lines, 21);
}

#[test]
fn route_emits_a_swap_plan_realizing_the_permutation() {
    let dir = tempfile::tempdir().unwrap();
    let perm_file = dir.path().join("perm.json");
    std::fs::write(&perm_file, "[3, 5, 1, 6, 2, 4]").unwrap();
    for graph in ["complete:6", "path:6", "multipartite:3,2", "star:5"] {
        let o = matchnet(&["route", "--graph", graph, "--perm", path_str(&perm_file)]);
        assert!(o.status.success(), "{graph}: {o:?}");
        let net = SortingNetwork::from_json_str(&stdout(&o)).unwrap();
        let dest = [2, 4, 0, 5, 1, 3];
        let plan = RoutingPlan { stages: net.stages.clone(), realized: dest.iter().map(|&d| Some(d)).collect() };
        plan.check(&net.graph).unwrap();
    }
    let o = matchnet(&["route", "--graph", "complete:4", "--perm", "2,1,4,3"]);
    let net = SortingNetwork::from_json_str(&stdout(&o)).unwrap();
    assert!(net.depth() <= 2);
}

#[test]
fn oracle_reports_small_values() {
    let value = |args: &[&str]| {
        let o = matchnet(args);
        assert!(o.status.success(), "{o:?}");
        stdout(&o).lines().find_map(|l| l.strip_prefix("value: ").map(|v| v.parse::<usize>().unwrap())).unwrap()
    };
    assert_eq!(value(&["oracle", "--quantity", "st", "--graph", "path:3"]), 3);
    assert_eq!(value(&["oracle", "--quantity", "st", "--graph", "complete:3"]), 3);
    assert_eq!(value(&["oracle", "--quantity", "rt", "--graph", "complete:4"]), 2);
    assert_eq!(value(&["oracle", "--quantity", "rt", "--graph", "path:3", "--perm", "3,2,1"]), 3);
    // reversing the order of P_3 needs the same depth
    assert_eq!(value(&["oracle", "--quantity", "st", "--graph", "path:3", "--order", "3,2,1"]), 3);
    let o = matchnet(&["oracle", "--quantity", "st", "--graph", "path:2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["value"], 1);
    assert_eq!(v["witness"]["stages"].as_array().unwrap().len(), 1);
}

#[test]
fn bad_inputs_exit_three() {
    assert_eq!(matchnet(&["generate", "--graph", "torus:4"]).status.code(), Some(3));
    assert_eq!(matchnet(&["build", "--graph", "path:4", "--construction", "aks"]).status.code(), Some(3));
    assert_eq!(matchnet(&["verify", "--net", "/nonexistent/net.json"]).status.code(), Some(3));
    assert_eq!(matchnet(&["route", "--graph", "path:3", "--perm", "1,1,2"]).status.code(), Some(3));
}
