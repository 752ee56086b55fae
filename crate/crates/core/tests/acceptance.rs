//! Acceptance criteria, one line of output each. Runs as its own harness so
//! the verdict lines are always printed; exits non-zero if any criterion
//! fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use deltacore::cli::{run_pipeline, Baseline};
use deltacore::complexes::{core_reduction_table, flag_core, reduction_total, FlagGraph};
use deltacore::generate::{cube_heterogeneous, sphere, torus};
use deltacore::homology::{betti_numbers, flag_betti_numbers, persistent_homology, vr_persistence, Interval};
use deltacore::subsampling::{delta_core, graphs_isomorphic};
use deltacore::{bottleneck_distance, delta_from_percentile, neighborhoods, wasserstein1_distance, PointCloud};
use rand::Rng;

const SEED: u64 = 42;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn core_uniqueness() -> Verdict {
    let start = Instant::now();
    let mut r = rng(SEED);
    let mut failures = 0;
    for _ in 0..200 {
        let n = r.gen_range(2..=12);
        let dim = r.gen_range(2..=3);
        let cloud = random_cloud(&mut r, n, dim);
        let delta = percentile(&cloud, 30.0);
        let base = cloud.subset(&delta_core(&cloud, delta).unwrap().surviving).unwrap();
        let base_graph = neighborhoods(&base, delta).unwrap();
        for _ in 0..50 {
            let (p, _) = permuted(&cloud, &mut r);
            let core = p.subset(&delta_core(&p, delta).unwrap().surviving).unwrap();
            let graph = neighborhoods(&core, delta).unwrap();
            if core.len() != base.len() || !graphs_isomorphic(base_graph.neighborhoods(), graph.neighborhoods()) {
                failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        failures == 0 && elapsed < Duration::from_secs(60),
        format!("200 clouds x 50 permutations, {failures} mismatches, {}", secs(elapsed)),
    )
}

/// Shared clouds for the homology-preservation criteria: 50 clouds and
/// three scales each (the 10th, 25th and 40th distance percentiles).
fn preservation_cases() -> Vec<(PointCloud, f64)> {
    let mut r = rng(SEED + 1);
    let mut out = Vec::new();
    for _ in 0..50 {
        let n = r.gen_range(3..=60);
        let dim = r.gen_range(2..=3);
        let cloud = random_cloud(&mut r, n, dim);
        for p in [10.0, 25.0, 40.0] {
            out.push((cloud.clone(), percentile(&cloud, p)));
        }
    }
    out
}

fn flag_core_preserves_homology() -> Verdict {
    let start = Instant::now();
    let mut failures = 0;
    for (cloud, scale) in preservation_cases() {
        let graph = FlagGraph::threshold(&cloud, scale).unwrap();
        let (core, _) = flag_core(&graph);
        if flag_betti_numbers(&graph, 1).unwrap() != flag_betti_numbers(&core, 1).unwrap() {
            failures += 1;
        }
    }
    let elapsed = start.elapsed();
    verdict(
        failures == 0 && elapsed < Duration::from_secs(120),
        format!("150 graphs, {failures} Betti mismatches, {}", secs(elapsed)),
    )
}

fn delta_core_matches_scale() -> Verdict {
    let mut failures = 0;
    for (cloud, delta) in preservation_cases() {
        let core = cloud.subset(&delta_core(&cloud, delta).unwrap().surviving).unwrap();
        if betti_numbers(&cloud, delta, 1).unwrap() != betti_numbers(&core, delta, 1).unwrap() {
            failures += 1;
        }
    }
    verdict(failures == 0, format!("150 cases, {failures} Betti mismatches in degrees 0-1"))
}

fn worked_examples() -> Verdict {
    let cycle = FlagGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let (core, kept) = flag_core(&cycle);
    let cycle_kept = kept.len();
    let cycle_ok = kept == vec![0, 1, 2, 3] && core.adjacency() == cycle.adjacency();
    let chorded = FlagGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
    let (core, kept) = flag_core(&chorded);
    let point_ok = kept.len() == 1 && core.n() == 1;
    verdict(
        cycle_ok && point_ok,
        format!("4-cycle core has {cycle_kept} vertices, 4-cycle plus diagonal core has {}", kept.len()),
    )
}

fn table_one() -> Verdict {
    let start = Instant::now();
    let cloud = sphere(500, 0.0, SEED).unwrap();
    let scales: Vec<f64> = (0..15).map(|k| 0.6 * k as f64 / 14.0).collect();
    let rows = core_reduction_table(&cloud, &scales, 3).unwrap();
    let (before, after, total) = reduction_total(&rows);
    let first = rows[0].reduction_pct;
    let monotone = rows.windows(2).all(|w| w[0].simplices_before <= w[1].simplices_before);
    let elapsed = start.elapsed();
    let in_band = (50.0..=75.0).contains(&total);
    verdict(
        first == 0.0 && in_band && monotone && elapsed < Duration::from_secs(600),
        format!(
            "row 1 {first:.1}%, total {total:.1}% ({before} -> {after}, band 50-75%), monotone {monotone}, {}",
            secs(elapsed)
        ),
    )
}

/// Persistence of each bar, essential bars truncated at the threshold.
fn ranked(bars: &[Interval], threshold: f64) -> Vec<f64> {
    let mut p: Vec<f64> = bars.iter().map(|b| b.death.min(threshold) - b.birth).collect();
    p.sort_by(|a, b| b.total_cmp(a));
    p
}

fn separated(p: &[f64], top: usize) -> bool {
    p.len() >= top && p.get(top).is_none_or(|&next| p[top - 1] >= 3.0 * next)
}

fn torus_detection() -> Verdict {
    let start = Instant::now();
    let threshold = 2.0;
    let cloud = torus(400, 0.05, SEED).unwrap();
    let core = cloud.subset(&delta_core(&cloud, 0.4).unwrap().surviving).unwrap();
    let full = vr_persistence(&cloud, 2, threshold).unwrap();
    let sub = vr_persistence(&core, 2, threshold).unwrap();
    let (h1, h2) = (ranked(sub.degree(1), threshold), ranked(sub.degree(2), threshold));
    let b1 = bottleneck_distance(full.degree(1), sub.degree(1));
    let b2 = bottleneck_distance(full.degree(2), sub.degree(2));
    let elapsed = start.elapsed();
    let pass = separated(&h1, 2) && separated(&h2, 1) && b1 <= 0.15 && b2 <= 0.15 && elapsed < Duration::from_secs(300);
    let top = |p: &[f64], k: usize| p.iter().take(k).map(|x| format!("{x:.3}")).collect::<Vec<_>>().join("/");
    verdict(
        pass,
        format!(
            "core {} of 400, H1 top {}, H2 top {}, bottleneck H1 {b1:.3} H2 {b2:.3}, {}",
            core.len(),
            top(&h1, 3),
            top(&h2, 2),
            secs(elapsed)
        ),
    )
}

fn ph_oracle_equivalence() -> Verdict {
    let mut r = rng(SEED + 7);
    let mut failures = 0;
    for _ in 0..100 {
        let (f, max_degree) = random_filtration(&mut r, 40);
        let dg = persistent_homology(&f, max_degree).unwrap();
        let oracle = ph_oracle(&f, max_degree);
        if (0..=max_degree).any(|q| as_pairs(dg.degree(q)) != oracle[q]) {
            failures += 1;
        }
    }
    verdict(failures == 0, format!("100 filtrations, {failures} mismatches"))
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9
}

fn distance_oracle_equivalence() -> Verdict {
    let mut r = rng(SEED + 8);
    let mut oracle_failures = 0;
    let mut axiom_failures = 0;
    for _ in 0..200 {
        let essential = r.gen_bool(0.3);
        let d = random_diagram(&mut r, 5, essential);
        let e = random_diagram(&mut r, 5, essential);
        let f = random_diagram(&mut r, 5, essential);
        let (b, w) = matching_oracle(&d, &e);
        if !close(b, bottleneck_distance(&d, &e)) || !close(w, wasserstein1_distance(&d, &e)) {
            oracle_failures += 1;
        }
        for dist in [bottleneck_distance, wasserstein1_distance] {
            let ok = dist(&d, &d) == 0.0
                && dist(&d, &e) == dist(&e, &d)
                && dist(&d, &f) <= dist(&d, &e) + dist(&e, &f) + 1e-9;
            if !ok {
                axiom_failures += 1;
            }
        }
        if bottleneck_distance(&d, &e) > wasserstein1_distance(&d, &e) + 1e-12 {
            axiom_failures += 1;
        }
    }
    verdict(
        oracle_failures == 0 && axiom_failures == 0,
        format!("200 pairs, {oracle_failures} oracle mismatches, {axiom_failures} axiom violations"),
    )
}

fn core_beats_fps() -> Verdict {
    let start = Instant::now();
    let mut wins = 0;
    let mut cells = Vec::new();
    for seed in 1..=10u64 {
        let cloud = cube_heterogeneous(600, seed).unwrap();
        let delta = delta_from_percentile(&cloud, 15.0).unwrap();
        let report = run_pipeline(&cloud, delta, 2, 0.5, &[Baseline::Fps], seed).unwrap();
        let full = report.methods[0].diagram.degree(1);
        let core = wasserstein1_distance(full, report.methods[1].diagram.degree(1));
        let fps = wasserstein1_distance(full, report.methods[2].diagram.degree(1));
        if core <= fps {
            wins += 1;
        }
        cells.push(format!("{core:.2}/{fps:.2}"));
    }
    verdict(
        wins >= 7,
        format!("core wins {wins}/10 (W1 H1 core/fps: {}), {}", cells.join(" "), secs(start.elapsed())),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    let exe = env!("CARGO_BIN_EXE_deltacore");
    let run = |args: &[String]| -> Vec<u8> {
        let out = Command::new(exe).args(args).output().unwrap();
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    std::fs::write(p("a.csv"), "degree,birth,death\n0,0,inf\n1,0.5,1.25\n").unwrap();
    std::fs::write(p("b.csv"), "degree,birth,death\n0,0,inf\n1,0.25,1\n1,2,2.5\n").unwrap();
    // Each command with the file it writes (if any) and the files to compare.
    let cases: Vec<(Vec<String>, Vec<&str>)> = vec![
        (s(&["generate", "--shape", "sphere", "--n", "200", "--seed", "7", "--output", &p("out.txt")]), vec!["out.txt"]),
        (s(&["generate", "--shape", "torus", "--n", "150", "--noise", "0.05", "--output", &p("out.txt")]), vec!["out.txt"]),
        (
            s(&["generate", "--shape", "cube-heterogeneous", "--n", "200", "--seed", "3", "--output", &p("cube.txt")]),
            vec!["cube.txt"],
        ),
        (s(&["core", "--input", &p("cube.txt"), "--percentile", "15", "--output", &p("out.txt")]), vec!["out.txt"]),
        (s(&["ph", "--input", &p("cube.txt"), "--threshold", "0.3", "--output", &p("out.txt")]), vec!["out.txt"]),
        (s(&["compare", "--input", &p("a.csv"), "--input", &p("b.csv")]), vec![]),
        (s(&["bench-reduction", "--input", &p("cube.txt"), "--scales", "0,0.1,0.2"]), vec![]),
        (
            s(&["pipeline", "--input", &p("cube.txt"), "--percentile", "15", "--threshold", "0.4", "--output", &p("pipe")]),
            vec!["pipe/comparison.csv", "pipe/diagram_original.csv", "pipe/diagram_delta_core.csv", "pipe/diagram_fps.csv", "pipe/points_delta_core.txt", "pipe/points_fps.txt"],
        ),
    ];
    let mut differing = Vec::new();
    for (args, files) in &cases {
        let read = || files.iter().map(|f| std::fs::read(p(f)).unwrap()).collect::<Vec<_>>();
        let first = (run(args), read());
        let second = (run(args), read());
        if first != second {
            differing.push(args[0].clone());
        }
    }
    verdict(
        differing.is_empty(),
        format!("{} command runs repeated, differing: {:?}", cases.len(), differing),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("core minimality and uniqueness", core_uniqueness),
        ("flag core preserves homology", flag_core_preserves_homology),
        ("delta-core matches VR at scale delta", delta_core_matches_scale),
        ("worked examples", worked_examples),
        ("sphere reduction table", table_one),
        ("torus topology detection", torus_detection),
        ("persistence rank oracle", ph_oracle_equivalence),
        ("distance matching oracle", distance_oracle_equivalence),
        ("delta-core vs fps on heterogeneous cube", core_beats_fps),
        ("cli determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let v = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(false, format!("panicked: {msg}"))
        });
        if !v.pass {
            failed += 1;
        }
        println!("criterion {}: {} - {name}: {}", k + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
