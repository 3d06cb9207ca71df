//! End-to-end checks of the command-line surface: exit codes, file
//! round-trips and DOT well-formedness.

use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_chordalnet")
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin()).args(args).output().expect("spawn");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join("chordalnet-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn coloring_pipeline_counts_510() {
    let net = tmp("c9.net");
    let (code, _, err) = run(&[
        "tri",
        &fixture("coloring9.sys"),
        "--mode",
        "zerodim",
        "--squarefree",
        "--out",
        &net,
    ]);
    assert_eq!(code, 0, "{err}");
    let (code, out, _) = run(&["count", &net]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "510");
}

#[test]
fn fixture_file_has_eighteen_polynomials() {
    let text = std::fs::read_to_string(fixture("coloring9.sys")).unwrap();
    let problem = chordalnet::cli::parse_problem(&text, None).unwrap();
    assert_eq!(problem.polys.len(), 18);
    assert_eq!(problem.ring.n, 9);
}

#[test]
fn minors_pipeline_dim_and_member_exit_codes() {
    let net = tmp("m4.net");
    let (code, _, _) = run(&[
        "tri",
        &fixture("minors2x4.sys"),
        "--mode",
        "binomial",
        "--out",
        &net,
    ]);
    assert_eq!(code, 0);
    let (code, out, _) = run(&["dim", &net]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "5");
    // member prints vanishes: true|false and exits 0 either way.
    let hyper = tmp("h.poly");
    std::fs::write(&hyper, "n = 8\nx0\n").unwrap();
    let (code, out, _) = run(&["member", &net, &hyper, "--trials", "10", "--seed", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "vanishes: false");
    let gen = tmp("g.poly");
    std::fs::write(&gen, "n = 8\nx0*x3 - x1*x2\n").unwrap();
    let (code, out, _) = run(&["member", &net, &gen, "--trials", "10", "--seed", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "vanishes: true");
}

#[test]
fn roundtrip_preserves_query_answers() {
    let net_path = tmp("rt.net");
    let (code, _, _) = run(&[
        "tri",
        &fixture("example36.sys"),
        "--mode",
        "zerodim",
        "--squarefree",
        "--out",
        &net_path,
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&net_path).unwrap();
    let net = chordalnet::network::parse_network(&text).unwrap();
    // Bit-exact reprint.
    assert_eq!(chordalnet::network::print_network(&net), text);
    // Identical query answers through the CLI on the reloaded copy.
    let (_, count_out, _) = run(&["count", &net_path]);
    assert_eq!(count_out.trim(), "5");
    let (_, dim_out, _) = run(&["dim", &net_path]);
    assert_eq!(dim_out.trim(), "0");
    let (_, census_out, _) = run(&["census", &net_path]);
    assert!(census_out.contains("dim 0: 3"));
    assert!(census_out.contains("total: 3"));
    assert_eq!(chordalnet::queries::zero_count(&net).unwrap().value, 5);
}

#[test]
fn usage_errors_exit_2() {
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&[]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["tri"]);
    assert_eq!(code, 2);
    let (code, _, err) = run(&["tri", &fixture("coloring9.sys"), "--bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown flag"));
    let (code, _, _) = run(&["isolate", &fixture("coloring9.sys")]);
    assert_eq!(code, 2);
}

#[test]
fn domain_errors_exit_1() {
    // Malformed polynomial file.
    let bad = tmp("bad.sys");
    std::fs::write(&bad, "x0^^2\n").unwrap();
    let (code, _, err) = run(&["tri", &bad]);
    assert_eq!(code, 1);
    assert!(err.contains("parse error"), "{err}");
    // Non-prime modulus.
    let nonprime = tmp("nonprime.sys");
    std::fs::write(&nonprime, "p = 15\nx0\n").unwrap();
    let (code, _, err) = run(&["tri", &nonprime]);
    assert_eq!(code, 1);
    assert!(err.contains("not an odd prime"), "{err}");
    // Counting a positive-dimensional (monomial) network is refused.
    let net = tmp("mono.net");
    let (code, _, _) = run(&["tri", &fixture("monomial51.sys"), "--out", &net]);
    assert_eq!(code, 0);
    let (code, _, err) = run(&["count", &net]);
    assert_eq!(code, 1);
    assert!(err.contains("zero-dimensional"), "{err}");
    // Missing file.
    let (code, _, _) = run(&["count", "/definitely/not/here.net"]);
    assert_eq!(code, 1);
}

#[test]
fn export_dot_is_well_formed() {
    let net = tmp("dot.net");
    let (code, _, _) = run(&[
        "tri",
        &fixture("example36.sys"),
        "--mode",
        "zerodim",
        "--squarefree",
        "--out",
        &net,
    ]);
    assert_eq!(code, 0);
    let (code, dot, _) = run(&["export-dot", &net]);
    assert_eq!(code, 0);
    check_dot(&dot);
    // The final network of the worked example: 7 nodes, 7 arcs, 4 clusters.
    assert_eq!(dot.matches("label=\"").count() - dot.matches("subgraph").count(), 7);
    assert_eq!(dot.matches(" -> ").count(), 7);
    assert_eq!(dot.matches("subgraph cluster_").count(), 4);

    // Collapsed ranks for the adjacent-minors network.
    let mnet = tmp("dotm.net");
    run(&["tri", &fixture("minors2x4.sys"), "--mode", "binomial", "--out", &mnet]);
    let (code, dot, _) = run(&["export-dot", &mnet, "--collapse", "pairs"]);
    assert_eq!(code, 0);
    check_dot(&dot);
    assert!(dot.contains("label=\"01\""));
    assert!(dot.contains("label=\"23\""));
    let (code, dot, _) = run(&["export-dot", &mnet, "--collapse", "0-1,2-3,4-7"]);
    assert_eq!(code, 0);
    assert!(dot.contains("label=\"4-7\""));
}

/// A small structural well-formedness check for DOT output: balanced
/// braces, one digraph, every node referenced by edges is declared.
fn check_dot(dot: &str) {
    assert!(dot.starts_with("digraph "));
    let opens = dot.matches('{').count();
    let closes = dot.matches('}').count();
    assert_eq!(opens, closes, "unbalanced braces");
    assert_eq!(dot.matches('"').count() % 2, 0, "unbalanced quotes");
    let declared: std::collections::BTreeSet<&str> = dot
        .lines()
        .filter_map(|l| {
            let l = l.trim();
            if l.starts_with('n') && l.contains("[label=") {
                l.split_whitespace().next()
            } else {
                None
            }
        })
        .collect();
    for line in dot.lines() {
        let line = line.trim();
        if let Some((u, v)) = line.strip_suffix(';').and_then(|l| l.split_once(" -> ")) {
            assert!(declared.contains(u), "undeclared node {u}");
            assert!(declared.contains(v), "undeclared node {v}");
        }
    }
}

#[test]
fn single_node_network_exports_one_cluster() {
    let mono = tmp("single.sys");
    std::fs::write(&mono, "p = 7\nx0 - 3\n").unwrap();
    let net = tmp("single.net");
    run(&["tri", &mono, "--mode", "zerodim", "--out", &net]);
    let (code, dot, _) = run(&["export-dot", &net]);
    assert_eq!(code, 0);
    check_dot(&dot);
    assert_eq!(dot.matches("subgraph cluster_").count(), 1);
    assert_eq!(dot.matches(" -> ").count(), 0);
    assert!(dot.contains("label=\"x0 - 3\""));
}

#[test]
fn member_rejects_multi_polynomial_files() {
    let net = tmp("mm.net");
    run(&["tri", &fixture("minors2x4.sys"), "--mode", "binomial", "--out", &net]);
    let many = tmp("many.poly");
    std::fs::write(&many, "n = 8\nx0\nx1\n").unwrap();
    let (code, _, err) = run(&["member", &net, &many]);
    assert_eq!(code, 2);
    assert!(err.contains("exactly one polynomial"), "{err}");
}

#[test]
fn sample_with_check_and_seed_echo() {
    let net = tmp("sample.net");
    run(&[
        "tri",
        &fixture("coloring9.sys"),
        "--mode",
        "zerodim",
        "--squarefree",
        "--out",
        &net,
    ]);
    let (code, out, err) = run(&[
        "sample",
        &net,
        "-k",
        "5",
        "--seed",
        "99",
        "--check",
        &fixture("coloring9.sys"),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(err.contains("seed: 99"));
    assert_eq!(out.lines().count(), 5);
    for line in out.lines() {
        assert_eq!(line.split(',').count(), 9);
    }
    // Same seed, same points.
    let (_, out2, _) = run(&["sample", &net, "-k", "5", "--seed", "99", "--check", &fixture("coloring9.sys")]);
    assert_eq!(out, out2);
}

#[test]
fn order_file_is_honored() {
    let order = tmp("rev.order");
    std::fs::write(&order, "3 2 1 0\n").unwrap();
    let net = tmp("rev.net");
    let (code, _, err) = run(&[
        "tri",
        &fixture("example36.sys"),
        "--mode",
        "zerodim",
        "--squarefree",
        "--order",
        &format!("file:{order}"),
        "--out",
        &net,
    ]);
    assert_eq!(code, 0, "{err}");
    // The count is a property of the variety, not of the order.
    let (_, out, _) = run(&["count", &net]);
    assert_eq!(out.trim(), "5");
}

#[test]
fn seed_env_fallback() {
    let net = tmp("envseed.net");
    run(&["tri", &fixture("coloring9.sys"), "--mode", "zerodim", "--squarefree", "--out", &net]);
    let out = Command::new(bin())
        .args(["sample", &net, "-k", "2"])
        .env("CHORDALNET_SEED", "1234")
        .output()
        .unwrap();
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("seed: 1234"), "{err}");
    let again = Command::new(bin())
        .args(["sample", &net, "-k", "2"])
        .env("CHORDALNET_SEED", "1234")
        .output()
        .unwrap();
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn mindeg_order_works_end_to_end() {
    let net = tmp("mindeg.net");
    let (code, _, err) = run(&[
        "tri",
        &fixture("coloring9.sys"),
        "--order",
        "mindeg",
        "--mode",
        "zerodim",
        "--squarefree",
        "--out",
        &net,
    ]);
    assert_eq!(code, 0, "{err}");
    let (code, out, _) = run(&["count", &net]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "510", "count is invariant under the order");
}

#[test]
fn top_command_reports_pruned_network() {
    let net = tmp("top-in.net");
    let out_net = tmp("top-out.net");
    run(&["tri", &fixture("monomial51.sys"), "--out", &net]);
    let (code, _, err) = run(&["top", &net, "--out", &out_net]);
    assert_eq!(code, 0);
    assert!(err.contains("chains: 6 (of 9)"), "{err}");
    let reloaded = chordalnet::network::parse_network(&std::fs::read_to_string(&out_net).unwrap()).unwrap();
    assert_eq!(chordalnet::queries::chain_count(&reloaded), 6);
    assert_eq!(chordalnet::queries::dimension(&reloaded), 2);
}

#[test]
fn components_command_lists_minimal_primes() {
    let net = tmp("comp.net");
    run(&["tri", &fixture("tree10.sys"), "--out", &net]);
    let (code, out, _) = run(&["components", &net]);
    assert_eq!(code, 0);
    assert!(out.trim().ends_with("components: 17"), "{out}");
    let (code, out, _) = run(&["components", &net, "--max", "3"]);
    assert_eq!(code, 0);
    assert!(out.trim().ends_with("components: 3"));
}
