//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;

use walklat::experiment::{
    render_csv, run, run_rows, Experiment, ExperimentSpec, GraphSpec, Row, RunOptions, SweepRange,
};
use walklat::latency::{
    cycle_latency_bounds, hitting_times, hitting_times_linear, latency_bounds, mean_latency_cycle,
    mean_latency_spectral, mean_latency_torus, torus_latency_bounds,
};
use walklat::spectral::{cycle_laplacian_spectrum, torus_laplacian_spectrum};
use walklat::wireless::{build_wireless_graph, place_nodes_seeded};
use walklat::{build_cycle, build_torus, Graph, TorusSpec, WirelessConfig};

/// Slack for bound checks that are tight (complete graphs hit the upper
/// bound exactly); only absorbs rounding.
const BOUND_REL_TOL: f64 = 1e-12;
const MC_SEED: u64 = 2;
const ENSEMBLE_SEED: u64 = 7;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn config_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/wireless_n30.conf")
}

fn wireless_config() -> WirelessConfig {
    WirelessConfig::from_file(&config_path()).expect("acceptance config")
}

/// First `count` placement seeds (from 0 upward) whose topology is connected.
fn connected_wireless_seeds(cfg: &WirelessConfig, count: usize) -> Vec<u64> {
    (0u64..)
        .filter(|&s| {
            let p = place_nodes_seeded(cfg, s).unwrap();
            build_wireless_graph(cfg, &p).unwrap().connected
        })
        .take(count)
        .collect()
}

fn cycle_cases() -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for n in 4..=64 {
        for r in 1..=(n - 1) / 2 {
            v.push((n, r));
        }
    }
    v
}

fn torus_cases() -> Vec<TorusSpec> {
    let mut v = Vec::new();
    let mut push = |dims: Vec<usize>| {
        let kmin = *dims.iter().min().unwrap();
        for r in 1..=(kmin - 1) / 2 {
            v.push(TorusSpec::new(dims.clone(), r).unwrap());
        }
    };
    for a in 3..=12 {
        for b in a..=12 {
            push(vec![a, b]);
        }
    }
    for a in 3..=7 {
        for b in a..=7 {
            for c in b..=7 {
                push(vec![a, b, c]);
            }
        }
    }
    push(vec![7, 9, 11]);
    // larger sizes up to the 4096-node limit, one radius each
    v.push(TorusSpec::new(vec![32, 32], 5).unwrap());
    v.push(TorusSpec::new(vec![64, 64], 3).unwrap());
    v.push(TorusSpec::new(vec![16, 16, 16], 1).unwrap());
    v
}

fn sorted_numeric_spectrum(g: &Graph) -> Vec<f64> {
    let mut e: Vec<f64> = g
        .laplacian_matrix()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    e.sort_by(f64::total_cmp);
    e
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn criterion_1() -> Outcome {
    let cycles: Vec<f64> = cycle_cases()
        .par_iter()
        .map(|&(n, r)| {
            let closed = cycle_laplacian_spectrum(n, r).unwrap().values;
            max_abs_diff(
                &closed,
                &sorted_numeric_spectrum(&build_cycle(n, r).unwrap()),
            )
        })
        .collect();
    let tori_specs = torus_cases();
    let tori: Vec<f64> = tori_specs
        .par_iter()
        .map(|s| {
            let closed = torus_laplacian_spectrum(s).unwrap().values;
            max_abs_diff(&closed, &sorted_numeric_spectrum(&build_torus(s).unwrap()))
        })
        .collect();
    let worst = cycles.iter().chain(&tori).copied().fold(0.0, f64::max);
    outcome(
        worst <= 1e-9,
        format!(
            "{} cycles, {} tori (up to 4096 nodes), max |d| = {worst:e}",
            cycles.len(),
            tori.len()
        ),
    )
}

/// 2/(n-1) trace(L^+) with the dense pseudoinverse of a connected Laplacian,
/// L^+ = (L + J/n)^-1 - J/n.
fn pinv_latency(g: &Graph) -> f64 {
    let n = g.n();
    let j = DMatrix::from_element(n, n, 1.0 / n as f64);
    let pinv = (g.laplacian_matrix() + &j).try_inverse().unwrap() - j;
    2.0 / (n as f64 - 1.0) * pinv.trace()
}

fn criterion_2() -> Outcome {
    let mut cases: Vec<(f64, Graph)> = Vec::new();
    for n in [5, 8, 13, 21, 34, 55, 64, 100, 150] {
        for r in (1..=3).filter(|r| 2 * r < n) {
            cases.push((
                mean_latency_cycle(n, r).unwrap(),
                build_cycle(n, r).unwrap(),
            ));
        }
    }
    for (dims, r) in [
        (vec![3, 3], 1),
        (vec![4, 4], 1),
        (vec![5, 7], 2),
        (vec![6, 9], 1),
        (vec![9, 11], 3),
        (vec![12, 12], 2),
        (vec![10, 25], 4),
        (vec![16, 18], 1),
        (vec![3, 4, 5], 1),
        (vec![5, 5, 5], 2),
        (vec![4, 6, 8], 1),
        (vec![7, 7, 7], 3),
        (vec![3, 3, 3, 3], 1),
        (vec![4, 5, 3, 3], 1),
        (vec![8, 8, 5], 2),
        (vec![16, 18], 3),
        (vec![20, 20], 5),
        (vec![5, 6, 7], 2),
        (vec![3, 20], 1),
        (vec![11, 13], 2),
        (vec![9, 9, 3], 1),
        (vec![6, 6, 6], 2),
        (vec![15, 15], 7),
        (vec![4, 4, 4, 4], 1),
        (vec![14, 15], 6),
    ] {
        let spec = TorusSpec::new(dims, r).unwrap();
        cases.push((
            mean_latency_torus(&spec).unwrap(),
            build_torus(&spec).unwrap(),
        ));
    }
    let diffs: Vec<f64> = cases
        .par_iter()
        .map(|(t, g)| (t - pinv_latency(g)).abs())
        .collect();
    let worst = diffs.iter().copied().fold(0.0, f64::max);
    outcome(
        diffs.len() >= 50 && worst <= 1e-9,
        format!("{} combinations, max |d| = {worst:e}", diffs.len()),
    )
}

fn hitting_graphs() -> Vec<(String, Graph)> {
    let mut v: Vec<(String, Graph)> = Vec::new();
    for n in [3, 5, 8] {
        v.push((
            format!("K{n}"),
            GraphSpec::Complete(n)
                .build(&WirelessConfig::default())
                .unwrap(),
        ));
    }
    for (n, r) in [(4, 1), (8, 2), (9, 4), (17, 3), (30, 1), (64, 5)] {
        v.push((format!("C{n}^{r}"), build_cycle(n, r).unwrap()));
    }
    for (dims, r) in [
        (vec![4, 4], 1),
        (vec![5, 7], 2),
        (vec![3, 3, 3], 1),
        (vec![4, 4, 4], 1),
        (vec![8, 8], 3),
    ] {
        let s = TorusSpec::new(dims, r).unwrap();
        v.push((format!("T{:?}^{r}", s.dims()), build_torus(&s).unwrap()));
    }
    let weighted = Graph::from_edges(
        6,
        [
            (0, 1, 0.5),
            (1, 2, 2.0),
            (2, 3, 1.0),
            (3, 4, 3.0),
            (4, 5, 0.25),
            (5, 0, 1.5),
            (0, 3, 0.75),
        ],
    )
    .unwrap();
    v.push(("weighted6".into(), weighted));
    let cfg = wireless_config();
    for seed in connected_wireless_seeds(&cfg, 20) {
        let p = place_nodes_seeded(&cfg, seed).unwrap();
        v.push((
            format!("wireless:{seed}"),
            build_wireless_graph(&cfg, &p).unwrap().graph,
        ));
    }
    v
}

fn criterion_3(graphs: &[(String, Graph)]) -> Outcome {
    let rel: Vec<(String, f64)> = graphs
        .par_iter()
        .map(|(name, g)| {
            let a = hitting_times(g).unwrap();
            let b = hitting_times_linear(g).unwrap();
            let scale = b.max_entry();
            let mut worst: f64 = 0.0;
            for s in 0..g.n() {
                for t in 0..g.n() {
                    worst = worst.max((a.get(s, t) - b.get(s, t)).abs());
                }
            }
            (name.clone(), worst / scale)
        })
        .collect();
    let (name, worst) =
        rel.iter().cloned().fold(
            (String::new(), 0.0),
            |acc, x| if x.1 > acc.1 { x } else { acc },
        );
    let wireless = graphs
        .iter()
        .filter(|(n, _)| n.starts_with("wireless"))
        .count();
    outcome(
        worst <= 1e-8 && wireless == 20,
        format!(
            "{} graphs ({wireless} wireless), max |d|/max H = {worst:e} ({name})",
            graphs.len()
        ),
    )
}

fn mc_experiment() -> ExperimentSpec {
    let cfg = wireless_config();
    let mut graphs = vec![
        GraphSpec::Complete(3),
        GraphSpec::Cycle { n: 4, r: 1 },
        GraphSpec::Cycle { n: 8, r: 2 },
        GraphSpec::Torus(TorusSpec::new(vec![4, 4], 1).unwrap()),
    ];
    graphs.extend(
        connected_wireless_seeds(&cfg, 5)
            .into_iter()
            .map(GraphSpec::Wireless),
    );
    ExperimentSpec {
        experiment: Experiment::WalkValidate {
            graphs,
            config: cfg,
        },
        options: RunOptions {
            seed: MC_SEED,
            trials: Some(100_000),
            ..Default::default()
        },
        out: None,
    }
}

fn criterion_4() -> (Outcome, String) {
    let spec = mc_experiment();
    let rows = run_rows(&spec.experiment, &spec.options).unwrap();
    let mut failures = Vec::new();
    let mut worst_rel_ci: f64 = 0.0;
    let mut worst_z: f64 = 0.0;
    for row in &rows {
        let mc = row.report.mc_estimate.expect("mc column");
        let diff = (mc.mean - row.report.analytic).abs();
        let rel_ci = mc.ci_halfwidth / mc.mean;
        worst_rel_ci = worst_rel_ci.max(rel_ci);
        worst_z = worst_z.max(diff / mc.ci_halfwidth);
        if diff > mc.ci_halfwidth || rel_ci > 0.02 || mc.trials < 100_000 {
            failures.push(format!(
                "{}:{} analytic {} mc {} +- {}",
                row.family, row.params, row.report.analytic, mc.mean, mc.ci_halfwidth
            ));
        }
    }
    let detail = format!(
        "{} graphs, worst |d|/ci = {worst_z:.3}, worst ci/mean = {worst_rel_ci:.4}{}",
        rows.len(),
        if failures.is_empty() {
            String::new()
        } else {
            format!("; outside: {}", failures.join("; "))
        }
    );
    (outcome(failures.is_empty(), detail), render_csv(&rows))
}

fn criterion_5(graphs: &[(String, Graph)]) -> Outcome {
    let mut violations = Vec::new();
    let mut checked = 0usize;
    for (n, r) in cycle_cases() {
        let t = mean_latency_cycle(n, r).unwrap();
        checked += 1;
        if !cycle_latency_bounds(n, r)
            .unwrap()
            .contains(t, BOUND_REL_TOL)
        {
            violations.push(format!("C{n}^{r}"));
        }
    }
    for s in torus_cases() {
        let t = mean_latency_torus(&s).unwrap();
        checked += 1;
        if !torus_latency_bounds(&s).unwrap().contains(t, BOUND_REL_TOL) {
            violations.push(format!("T{:?}^{}", s.dims(), s.r()));
        }
    }
    for (name, g) in graphs {
        let t = mean_latency_spectral(g).unwrap();
        checked += 1;
        if !latency_bounds(g).unwrap().contains(t, BOUND_REL_TOL) {
            violations.push(name.clone());
        }
    }
    // closed-form bound expressions against the closed-form spectral gap
    let mut worst: f64 = 0.0;
    for (n, r) in cycle_cases() {
        let spec = cycle_laplacian_spectrum(n, r).unwrap();
        let l1 = spec.algebraic_connectivity().unwrap();
        let b = cycle_latency_bounds(n, r).unwrap();
        worst = worst
            .max((b.upper - 2.0 / l1).abs())
            .max((b.lower - 2.0 / ((n as f64 - 1.0) * l1)).abs());
    }
    outcome(
        violations.is_empty() && worst <= 1e-9,
        format!(
            "{checked} cases, {} violations{}, closed-form bounds vs 2/l1 max |d| = {worst:e}",
            violations.len(),
            if violations.is_empty() {
                String::new()
            } else {
                format!(" ({})", violations.join(", "))
            }
        ),
    )
}

fn analytic(rows: &[Row]) -> Vec<f64> {
    rows.iter().map(|r| r.report.analytic).collect()
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn nondecreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0])
}

fn criterion_6() -> Outcome {
    let opts = RunOptions::default();
    let fig4 = run_rows(
        &Experiment::CycleSweep {
            n: SweepRange::single(300.0),
            r: SweepRange::parse("1:10").unwrap(),
        },
        &opts,
    )
    .unwrap();
    let fig4_ok = fig4.len() == 10 && strictly_decreasing(&analytic(&fig4));

    let dims = vec![16, 18, 20, 22];
    let fig8 = run_rows(
        &Experiment::DimensionSweep {
            dims: dims.clone(),
            r: SweepRange::parse("1:4").unwrap(),
        },
        &opts,
    )
    .unwrap();
    // rows are ordered by dimension, then r
    let t = |m: usize, r: usize| fig8[(m - 1) * 4 + (r - 1)].report.analytic;
    let by_dim =
        (1..=4).all(|r| strictly_decreasing(&(1..=4).map(|m| t(m, r)).collect::<Vec<_>>()));
    let by_r = (1..=4).all(|m| strictly_decreasing(&(1..=4).map(|r| t(m, r)).collect::<Vec<_>>()));
    outcome(
        fig4_ok && by_dim && by_r,
        format!(
            "n=300 r=1..10 decreasing: {fig4_ok}; T(m=1..4, r=1) = {:.4} {:.4} {:.4} {:.4}; decreasing in m: {by_dim}, in r: {by_r}",
            t(1, 1), t(2, 1), t(3, 1), t(4, 1)
        ),
    )
}

fn ensemble_experiments() -> Vec<Experiment> {
    let config = wireless_config();
    vec![
        Experiment::EpdEtaSweep {
            config: config.clone(),
            eta: SweepRange::parse("2:6:0.5").unwrap(),
            members: 20,
        },
        Experiment::EpdPminSweep {
            config: config.clone(),
            eta: SweepRange::parse("2:4:2").unwrap(),
            p_min: SweepRange::parse("0.1:0.3:0.05").unwrap(),
            members: 20,
        },
        Experiment::EpdThresholdSweep {
            config,
            threshold: SweepRange::parse("0.1:0.7:0.1").unwrap(),
            members: 20,
        },
    ]
}

fn ensemble_options() -> RunOptions {
    RunOptions {
        seed: ENSEMBLE_SEED,
        resample_until_connected: Some(1000),
        ..Default::default()
    }
}

fn fmt_series(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:.2}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn criterion_7() -> (Outcome, Vec<String>) {
    let opts = ensemble_options();
    let results: Vec<Vec<Row>> = ensemble_experiments()
        .iter()
        .map(|e| run_rows(e, &opts).unwrap())
        .collect();
    let eta = analytic(&results[0]);
    let pmin = analytic(&results[1]);
    let (p2, p4) = pmin.split_at(pmin.len() / 2);
    let tau = analytic(&results[2]);

    let eta_ok = nondecreasing(&eta);
    let pmin_ok = nondecreasing(p2) && nondecreasing(p4);
    let multipath_ok = p2.iter().zip(p4).all(|(a, b)| b >= a);
    let tau_ok = nondecreasing(&tau);
    let csvs = results.iter().map(|r| render_csv(r)).collect();
    (
        outcome(
            eta_ok && pmin_ok && multipath_ok && tau_ok,
            format!(
                "eta [{}] {eta_ok}; p_min eta=2 [{}] eta=4 [{}] {pmin_ok}; eta=4 >= eta=2 {multipath_ok}; tau [{}] {tau_ok}",
                fmt_series(&eta),
                fmt_series(p2),
                fmt_series(p4),
                fmt_series(&tau)
            ),
        ),
        csvs,
    )
}

fn criterion_8(mc_csv: &str, ensemble_csvs: &[String]) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut specs = vec![mc_experiment()];
    specs.extend(
        ensemble_experiments()
            .into_iter()
            .map(|experiment| ExperimentSpec {
                experiment,
                options: ensemble_options(),
                out: None,
            }),
    );
    let previous: Vec<&str> = std::iter::once(mc_csv)
        .chain(ensemble_csvs.iter().map(String::as_str))
        .collect();
    let mut mismatches = Vec::new();
    for (i, (mut spec, before)) in specs.into_iter().zip(previous).enumerate() {
        let path = dir.path().join(format!("run{i}.csv"));
        spec.out = Some(path.clone());
        run(&spec).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        if bytes != before.as_bytes() {
            mismatches.push(i);
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("4 CSVs rerun from files, mismatched: {mismatches:?}"),
    )
}

fn report(id: u32, name: &str, started: Instant, o: &Outcome, failed: &mut u32) {
    let tag = if o.pass { "PASS" } else { "FAIL" };
    println!(
        "{tag} criterion {id} ({name}) [{:.1}s]: {}",
        started.elapsed().as_secs_f64(),
        o.detail
    );
    if !o.pass {
        *failed += 1;
    }
}

fn main() {
    let mut failed = 0;

    let t = Instant::now();
    let c1 = criterion_1();
    report(1, "spectrum equivalence", t, &c1, &mut failed);

    let t = Instant::now();
    let c2 = criterion_2();
    report(2, "latency oracle equivalence", t, &c2, &mut failed);

    let t = Instant::now();
    let graphs = hitting_graphs();
    let c3 = criterion_3(&graphs);
    report(3, "hitting-time double oracle", t, &c3, &mut failed);

    let t = Instant::now();
    let (c4, mc_csv) = criterion_4();
    report(4, "Monte-Carlo agreement", t, &c4, &mut failed);

    let t = Instant::now();
    let c5 = criterion_5(&graphs);
    report(5, "bound sandwich", t, &c5, &mut failed);

    let t = Instant::now();
    let c6 = criterion_6();
    report(6, "cycle and dimension sweeps", t, &c6, &mut failed);

    let t = Instant::now();
    let (c7, ensemble_csvs) = criterion_7();
    report(7, "wireless ensemble orderings", t, &c7, &mut failed);

    let t = Instant::now();
    let c8 = criterion_8(&mc_csv, &ensemble_csvs);
    report(8, "determinism", t, &c8, &mut failed);

    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
