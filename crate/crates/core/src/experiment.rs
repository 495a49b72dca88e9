//! Sweep runner: turns an [`ExperimentSpec`] into CSV rows of
//! [`LatencyReport`]s.
//!
//! Every kind writes the same header ([`CSV_HEADER`]). For the cycle and torus
//! kinds `analytic` is the mean latency `T`; for the wireless and
//! walk-validation kinds it is the expected packet delay (hops), with the
//! bounds scaled by `vol/2` to the same units. Monte-Carlo columns are
//! always reported in the same units as `analytic`. Sweep points are evaluated in
//! parallel and written in sweep order.

use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::Error;
use crate::graphs::{build_cycle, build_torus, complete_graph, Graph, TorusSpec};
use crate::latency::{
    cycle_latency_bounds, expected_packet_delay, expected_packet_delay_linear, latency_bounds,
    mean_latency_cycle, mean_latency_spectral, mean_latency_torus, torus_latency_bounds, Bounds,
    LatencyReport, McSummary, CSV_HEADER,
};
use crate::walker::{estimate_mean_latency, mix_seed, PairMode, WalkConfig};
use crate::wireless::{build_wireless_graph, place_nodes_seeded, Placement, WirelessConfig};

/// Default node cap above which oracle and Monte-Carlo columns are skipped.
pub const DEFAULT_NODE_CAP: usize = 4096;

/// Environment variable overriding [`DEFAULT_NODE_CAP`] in the CLI.
pub const NODE_CAP_ENV: &str = "WALKLAT_NODE_CAP";

/// Walk budget for `walk-validate` when `--trials` is not given.
pub const DEFAULT_VALIDATE_TRIALS: u64 = 100_000;

#[derive(Debug)]
pub enum ExperimentError {
    /// Invalid experiment description; the CLI exits with status 2.
    Usage(String),
    /// Numerical or IO failure at a sweep point; the CLI exits with status 1.
    Runtime { point: String, source: Error },
}

impl fmt::Display for ExperimentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExperimentError::Usage(msg) => write!(f, "usage error: {msg}"),
            ExperimentError::Runtime { point, source } => write!(f, "at {point}: {source}"),
        }
    }
}

impl std::error::Error for ExperimentError {}

impl ExperimentError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Usage(_) => 2,
            ExperimentError::Runtime { .. } => 1,
        }
    }
}

type Result<T> = std::result::Result<T, ExperimentError>;

fn usage(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Usage(msg.into())
}

fn at(point: &str) -> impl Fn(Error) -> ExperimentError {
    let point = point.to_string();
    move |source| ExperimentError::Runtime {
        point: point.clone(),
        source,
    }
}

/// Inclusive arithmetic range `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepRange {
    pub fn single(v: f64) -> SweepRange {
        SweepRange {
            start: v,
            stop: v,
            step: 1.0,
        }
    }

    pub fn new(start: f64, stop: f64, step: f64) -> Result<SweepRange> {
        let r = SweepRange { start, stop, step };
        r.len()?;
        Ok(r)
    }

    /// Parses `v`, `start:stop` (step 1) or `start:stop:step`.
    pub fn parse(s: &str) -> Result<SweepRange> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| usage(format!("bad number `{t}` in range `{s}`")))
        };
        let r = match parts.as_slice() {
            [v] => SweepRange::single(num(v)?),
            [a, b] => SweepRange {
                start: num(a)?,
                stop: num(b)?,
                step: 1.0,
            },
            [a, b, c] => SweepRange {
                start: num(a)?,
                stop: num(b)?,
                step: num(c)?,
            },
            _ => {
                return Err(usage(format!(
                    "range `{s}` must be `v`, `a:b` or `a:b:step`"
                )))
            }
        };
        r.len()?;
        Ok(r)
    }

    fn len(&self) -> Result<usize> {
        let SweepRange { start, stop, step } = *self;
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(usage("range bounds must be finite"));
        }
        if step == 0.0 {
            return Err(usage(format!("zero-length range {start}:{stop}:0")));
        }
        let span = (stop - start) / step;
        if span < -1e-9 {
            return Err(usage(format!(
                "empty range {start}:{stop}:{step} (step sign disagrees with start/stop)"
            )));
        }
        Ok((span + 1e-9).floor() as usize + 1)
    }

    pub fn values(&self) -> Vec<f64> {
        let len = self.len().expect("validated at construction");
        // snap to 12 decimals so 0.1:0.3:0.05 yields 0.15, not 0.15000000000000002
        (0..len)
            .map(|i| ((self.start + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }

    pub fn integers(&self, name: &str) -> Result<Vec<usize>> {
        self.values()
            .into_iter()
            .map(|v| {
                if v.fract() != 0.0 || v < 0.0 {
                    Err(usage(format!(
                        "{name} must be a nonnegative integer, got {v}"
                    )))
                } else {
                    Ok(v as usize)
                }
            })
            .collect()
    }
}

/// A graph named on the command line for `walk-validate` and `spectrum`.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Complete(usize),
    Cycle {
        n: usize,
        r: usize,
    },
    Torus(TorusSpec),
    EdgeList(PathBuf),
    /// Wireless topology from the experiment's config with this placement seed.
    Wireless(u64),
}

impl GraphSpec {
    /// Parses `complete:N`, `cycle:N:R`, `torus:K1xK2[x..]:R`, `edgelist:PATH`
    /// or `wireless:SEED`.
    pub fn parse(s: &str) -> Result<GraphSpec> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| usage(format!("graph `{s}` must look like kind:params")))?;
        let int = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| usage(format!("bad integer `{t}` in graph `{s}`")))
        };
        let param = |e: Error| usage(format!("graph `{s}`: {e}"));
        match kind {
            "complete" => {
                let n = int(rest)?;
                complete_graph(n).map_err(param)?;
                Ok(GraphSpec::Complete(n))
            }
            "cycle" => {
                let (n, r) = rest
                    .split_once(':')
                    .ok_or_else(|| usage(format!("cycle graph `{s}` needs cycle:N:R")))?;
                let (n, r) = (int(n)?, int(r)?);
                crate::graphs::check_cycle_params(n, r).map_err(param)?;
                Ok(GraphSpec::Cycle { n, r })
            }
            "torus" => {
                let (dims, r) = rest
                    .split_once(':')
                    .ok_or_else(|| usage(format!("torus graph `{s}` needs torus:K1xK2:R")))?;
                let dims = dims.split('x').map(int).collect::<Result<Vec<_>>>()?;
                Ok(GraphSpec::Torus(
                    TorusSpec::new(dims, int(r)?).map_err(param)?,
                ))
            }
            "edgelist" => Ok(GraphSpec::EdgeList(PathBuf::from(rest))),
            "wireless" => Ok(GraphSpec::Wireless(
                rest.parse()
                    .map_err(|_| usage(format!("bad seed in graph `{s}`")))?,
            )),
            other => Err(usage(format!("unknown graph kind `{other}`"))),
        }
    }

    fn family(&self) -> &'static str {
        match self {
            GraphSpec::Complete(_) => "complete",
            GraphSpec::Cycle { .. } => "cycle",
            GraphSpec::Torus(_) => "torus",
            GraphSpec::EdgeList(_) => "edgelist",
            GraphSpec::Wireless(_) => "wireless",
        }
    }

    fn params(&self) -> String {
        match self {
            GraphSpec::Complete(n) => format!("n={n}"),
            GraphSpec::Cycle { n, r } => format!("n={n};r={r}"),
            GraphSpec::Torus(t) => format!("k={};r={}", dims_label(t.dims()), t.r()),
            GraphSpec::EdgeList(p) => format!("path={}", p.display()),
            GraphSpec::Wireless(seed) => format!("seed={seed}"),
        }
    }

    pub fn build(&self, config: &WirelessConfig) -> crate::Result<Graph> {
        match self {
            GraphSpec::Complete(n) => complete_graph(*n),
            GraphSpec::Cycle { n, r } => build_cycle(*n, *r),
            GraphSpec::Torus(t) => build_torus(t),
            GraphSpec::EdgeList(p) => {
                let f = std::fs::File::open(p)
                    .map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                Graph::read_edge_list(std::io::BufReader::new(f))
            }
            GraphSpec::Wireless(seed) => {
                let placement = place_nodes_seeded(config, *seed)?;
                Ok(build_wireless_graph(config, &placement)?.graph)
            }
        }
    }
}

fn dims_label(dims: &[usize]) -> String {
    dims.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("x")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    /// Mean latency of `C_n^r` over `n x r`.
    CycleSweep { n: SweepRange, r: SweepRange },
    /// Mean latency of 2-D tori over `k1 x k2 x r`.
    TorusSweep {
        k1: SweepRange,
        k2: SweepRange,
        r: SweepRange,
    },
    /// Mean latency of tori built from prefixes of `dims`, for every `r`.
    DimensionSweep { dims: Vec<usize>, r: SweepRange },
    /// Mean latency and closed-form bounds of `C_n^r`; fails if a point
    /// violates the sandwich.
    BoundsCheck { n: SweepRange, r: SweepRange },
    /// Ensemble EPD over the path-loss exponent.
    EpdEtaSweep {
        config: WirelessConfig,
        eta: SweepRange,
        members: usize,
    },
    /// Ensemble EPD over `eta x p_min`.
    EpdPminSweep {
        config: WirelessConfig,
        eta: SweepRange,
        p_min: SweepRange,
        members: usize,
    },
    /// Ensemble EPD over the connectivity threshold.
    EpdThresholdSweep {
        config: WirelessConfig,
        threshold: SweepRange,
        members: usize,
    },
    /// Analytic EPD against the Monte-Carlo walker on each graph.
    WalkValidate {
        graphs: Vec<GraphSpec>,
        config: WirelessConfig,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    /// Monte-Carlo walk budget per row (per member for ensembles).
    pub trials: Option<u64>,
    /// Fill the `oracle` column: dense pseudoinverse trace for `T` rows,
    /// first-step linear systems for EPD rows.
    pub oracle: bool,
    pub node_cap: usize,
    /// Redraw ensemble placements until connected at every sweep point.
    pub resample_until_connected: Option<u32>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            trials: None,
            oracle: false,
            node_cap: DEFAULT_NODE_CAP,
            resample_until_connected: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub options: RunOptions,
    /// CSV destination; `None` writes to stdout.
    pub out: Option<PathBuf>,
}

/// One computed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub family: String,
    pub params: String,
    pub report: LatencyReport,
}

impl Row {
    pub fn to_csv(&self) -> String {
        self.report.to_csv_row(&self.family, &self.params)
    }
}

/// Evaluates every sweep point.
pub fn run_rows(experiment: &Experiment, opts: &RunOptions) -> Result<Vec<Row>> {
    if opts.trials == Some(0) {
        return Err(usage("--trials must be >= 1"));
    }
    match experiment {
        Experiment::CycleSweep { n, r } | Experiment::BoundsCheck { n, r } => {
            let check = matches!(experiment, Experiment::BoundsCheck { .. });
            let mut points = Vec::new();
            for n in n.integers("n")? {
                for r in r.integers("r")? {
                    crate::graphs::check_cycle_params(n, r)
                        .map_err(|e| usage(format!("point n={n} r={r}: {e}")))?;
                    points.push((n, r));
                }
            }
            points
                .par_iter()
                .map(|&(n, r)| cycle_row(n, r, check, opts))
                .collect()
        }
        Experiment::TorusSweep { k1, k2, r } => {
            let mut specs = Vec::new();
            for a in k1.integers("k1")? {
                for b in k2.integers("k2")? {
                    for r in r.integers("r")? {
                        specs.push(
                            TorusSpec::new(vec![a, b], r)
                                .map_err(|e| usage(format!("point k={a}x{b} r={r}: {e}")))?,
                        );
                    }
                }
            }
            specs.par_iter().map(|s| torus_row(s, None, opts)).collect()
        }
        Experiment::DimensionSweep { dims, r } => {
            if dims.is_empty() {
                return Err(usage("dimension list is empty"));
            }
            let mut specs = Vec::new();
            for m in 1..=dims.len() {
                for r in r.integers("r")? {
                    specs.push(
                        TorusSpec::new(dims[..m].to_vec(), r)
                            .map_err(|e| usage(format!("point m={m} r={r}: {e}")))?,
                    );
                }
            }
            specs
                .par_iter()
                .map(|s| torus_row(s, Some(s.dims().len()), opts))
                .collect()
        }
        Experiment::EpdEtaSweep {
            config,
            eta,
            members,
        } => {
            let points = eta
                .values()
                .into_iter()
                .map(|eta| WirelessConfig {
                    eta,
                    ..config.clone()
                })
                .collect();
            ensemble_rows(config, points, *members, opts)
        }
        Experiment::EpdPminSweep {
            config,
            eta,
            p_min,
            members,
        } => {
            let mut points = Vec::new();
            for eta in eta.values() {
                for p_min in p_min.values() {
                    points.push(WirelessConfig {
                        eta,
                        p_min,
                        ..config.clone()
                    });
                }
            }
            ensemble_rows(config, points, *members, opts)
        }
        Experiment::EpdThresholdSweep {
            config,
            threshold,
            members,
        } => {
            let points = threshold
                .values()
                .into_iter()
                .map(|threshold| WirelessConfig {
                    threshold,
                    ..config.clone()
                })
                .collect();
            ensemble_rows(config, points, *members, opts)
        }
        Experiment::WalkValidate { graphs, config } => {
            if graphs.is_empty() {
                return Err(usage("walk-validate needs at least one --graph"));
            }
            graphs
                .par_iter()
                .enumerate()
                .map(|(i, spec)| validate_row(i, spec, config, opts))
                .collect()
        }
    }
}

/// Renders rows under [`CSV_HEADER`], one line each, newline-terminated.
pub fn render_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

/// Runs the experiment and writes the CSV to `spec.out` (or stdout).
pub fn run(spec: &ExperimentSpec) -> Result<String> {
    let csv = render_csv(&run_rows(&spec.experiment, &spec.options)?);
    match &spec.out {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(csv)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| ExperimentError::Runtime {
        point: format!("writing {}", path.display()),
        source: Error::Io(e.to_string()),
    })
}

/// Laplacian eigenvalues of a graph as CSV (`index,eigenvalue`, ascending).
/// Cycles and tori use the closed form unless `numeric` is set.
pub fn spectrum_csv(spec: &GraphSpec, config: &WirelessConfig, numeric: bool) -> Result<String> {
    let err = at(&spec.params());
    let spectrum = match (spec, numeric) {
        (GraphSpec::Cycle { n, r }, false) => {
            crate::spectral::cycle_laplacian_spectrum(*n, *r).map_err(&err)?
        }
        (GraphSpec::Torus(t), false) => {
            crate::spectral::torus_laplacian_spectrum(t).map_err(&err)?
        }
        _ => {
            crate::spectral::laplacian_spectrum(&spec.build(config).map_err(&err)?).map_err(&err)?
        }
    };
    let mut out = String::from("index,eigenvalue\n");
    for (i, v) in spectrum.values.iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }
    Ok(out)
}

/// Writes `<prefix>.edges` (binary topology), `<prefix>.coefficients`
/// (topology coefficients as a weighted edge list) and
/// `<prefix>.positions.csv`. Returns whether the topology is connected.
pub fn export_topology(config: &WirelessConfig, seed: u64, prefix: &Path) -> Result<bool> {
    config.validate().map_err(|e| usage(e.to_string()))?;
    let err = at(&format!("seed={seed}"));
    let (placement, topo) = crate::wireless::generate_topology(config, seed).map_err(&err)?;
    let coeff = Graph::from_dense(&topo.coefficients).map_err(&err)?;
    let with_ext = |ext: &str| {
        let mut p = prefix.as_os_str().to_owned();
        p.push(ext);
        PathBuf::from(p)
    };
    write_file(&with_ext(".edges"), &topo.graph.to_edge_list())?;
    write_file(&with_ext(".coefficients"), &coeff.to_edge_list())?;
    write_file(&with_ext(".positions.csv"), &placement.to_csv())?;
    Ok(topo.connected)
}

/// All ordered pairs when the budget covers each at least twice, otherwise
/// a uniform sample of pairs with two walks each.
fn walk_config(n: usize, trials: u64, seed: u64) -> WalkConfig {
    let pairs = (n as u64) * (n as u64).saturating_sub(1);
    let mut cfg = WalkConfig::new(trials, seed);
    if trials < 2 * pairs {
        cfg.pair_mode = PairMode::Sampled((trials / 2).max(2));
    }
    cfg
}

fn cycle_row(n: usize, r: usize, check: bool, opts: &RunOptions) -> Result<Row> {
    let params = format!("n={n};r={r}");
    let err = at(&params);
    let analytic = mean_latency_cycle(n, r).map_err(&err)?;
    let bounds = cycle_latency_bounds(n, r).map_err(&err)?;
    if check && !(bounds.lower <= analytic && analytic <= bounds.upper) {
        return Err(err(Error::Degenerate(format!(
            "bound sandwich violated: {} <= {analytic} <= {}",
            bounds.lower, bounds.upper
        ))));
    }
    let mut report = LatencyReport::new(analytic, bounds);
    fill_graph_columns(&mut report, n, opts, (n as u64) << 32 | r as u64, || {
        build_cycle(n, r)
    })
    .map_err(&err)?;
    Ok(Row {
        family: "cycle".into(),
        params,
        report,
    })
}

fn torus_row(spec: &TorusSpec, m: Option<usize>, opts: &RunOptions) -> Result<Row> {
    let mut params = format!("k={};r={}", dims_label(spec.dims()), spec.r());
    if let Some(m) = m {
        params.push_str(&format!(";m={m}"));
    }
    let err = at(&params);
    let analytic = mean_latency_torus(spec).map_err(&err)?;
    let bounds = torus_latency_bounds(spec).map_err(&err)?;
    let mut report = LatencyReport::new(analytic, bounds);
    let stream = spec
        .dims()
        .iter()
        .fold(spec.r() as u64, |h, &k| mix_seed(h, k as u64, 0));
    fill_graph_columns(&mut report, spec.node_count(), opts, stream, || {
        build_torus(spec)
    })
    .map_err(&err)?;
    Ok(Row {
        family: "torus".into(),
        params,
        report,
    })
}

/// Oracle (`T` via dense pseudoinverse) and Monte-Carlo columns for
/// cycle/torus rows, honoring the node cap.
fn fill_graph_columns(
    report: &mut LatencyReport,
    n: usize,
    opts: &RunOptions,
    stream: u64,
    build: impl Fn() -> crate::Result<Graph>,
) -> crate::Result<()> {
    let wants_graph = opts.oracle || opts.trials.is_some();
    if !wants_graph {
        return Ok(());
    }
    if n > opts.node_cap {
        report.oracle_skipped = opts.oracle;
        report.mc_skipped = opts.trials.is_some();
        return Ok(());
    }
    let g = build()?;
    if opts.oracle {
        report.oracle = Some(mean_latency_spectral(&g)?);
    }
    if let Some(trials) = opts.trials {
        let est =
            estimate_mean_latency(&g, &walk_config(n, trials, mix_seed(opts.seed, stream, 0)))?;
        // walks measure hops; T = hops / (vol / 2)
        let to_t = 2.0 / g.volume();
        report.mc_estimate = Some(McSummary {
            mean: est.mean * to_t,
            ci_halfwidth: est.ci_halfwidth * to_t,
            trials: est.trials_used,
        });
    }
    Ok(())
}

/// EPD, its bounds in hop units, and optional oracle/Monte-Carlo values for
/// one connected graph.
fn epd_report(
    g: &Graph,
    opts: &RunOptions,
    walk_seed: u64,
    trials: Option<u64>,
) -> crate::Result<LatencyReport> {
    let epd = expected_packet_delay(g)?;
    let bounds = latency_bounds(g)?.scaled(g.volume() / 2.0);
    let mut report = LatencyReport::new(epd, bounds);
    if opts.oracle {
        report.oracle = Some(expected_packet_delay_linear(g)?);
    }
    if let Some(trials) = trials {
        let est = estimate_mean_latency(g, &walk_config(g.n(), trials, walk_seed))?;
        report.mc_estimate = Some(McSummary {
            mean: est.mean,
            ci_halfwidth: est.ci_halfwidth,
            trials: est.trials_used,
        });
    }
    Ok(report)
}

fn validate_row(
    index: usize,
    spec: &GraphSpec,
    config: &WirelessConfig,
    opts: &RunOptions,
) -> Result<Row> {
    let params = spec.params();
    let err = at(&params);
    let g = spec.build(config).map_err(&err)?;
    let trials = opts.trials.unwrap_or(DEFAULT_VALIDATE_TRIALS);
    let report = if g.n() > opts.node_cap {
        let mut r = LatencyReport::new(
            f64::NAN,
            Bounds {
                lower: f64::NAN,
                upper: f64::NAN,
            },
        );
        r.oracle_skipped = opts.oracle;
        r.mc_skipped = true;
        // EPD needs a dense eigendecomposition; above the cap fall back to
        // the vol/2 · T identity only for closed-form families.
        r.analytic = match spec {
            GraphSpec::Cycle { n, r: rad } => {
                mean_latency_cycle(*n, *rad).map_err(&err)? * g.volume() / 2.0
            }
            GraphSpec::Torus(t) => mean_latency_torus(t).map_err(&err)? * g.volume() / 2.0,
            _ => {
                return Err(err(Error::Parameter(format!(
                    "{} nodes exceeds the node cap {}",
                    g.n(),
                    opts.node_cap
                ))))
            }
        };
        r
    } else {
        epd_report(&g, opts, mix_seed(opts.seed, index as u64, 1), Some(trials)).map_err(&err)?
    };
    Ok(Row {
        family: spec.family().into(),
        params,
        report,
    })
}

fn wireless_params(cfg: &WirelessConfig, members: usize, disconnected: usize) -> String {
    format!(
        "eta={};p_min={};tau={};alpha={};members={members};disconnected={disconnected}",
        cfg.eta, cfg.p_min, cfg.threshold, cfg.alpha
    )
}

/// Picks one placement per ensemble member. With resampling enabled a
/// member's placement is redrawn until its topology is connected at every
/// sweep point.
fn ensemble_placements(
    base: &WirelessConfig,
    points: &[WirelessConfig],
    members: usize,
    opts: &RunOptions,
) -> Result<Vec<Placement>> {
    (0..members)
        .into_par_iter()
        .map(|member| {
            let attempts = opts.resample_until_connected.unwrap_or(1).max(1);
            for attempt in 0..attempts {
                let seed = mix_seed(opts.seed, member as u64, attempt as u64);
                let placement =
                    place_nodes_seeded(base, seed).map_err(at(&format!("member={member}")))?;
                if opts.resample_until_connected.is_none() {
                    return Ok(placement);
                }
                let mut all_connected = true;
                for cfg in points {
                    let topo = build_wireless_graph(cfg, &placement)
                        .map_err(at(&wireless_params(cfg, members, 0)))?;
                    if !topo.connected {
                        all_connected = false;
                        break;
                    }
                }
                if all_connected {
                    return Ok(placement);
                }
            }
            Err(ExperimentError::Runtime {
                point: format!("member={member}"),
                source: Error::Degenerate(format!("no connected placement in {attempts} attempts")),
            })
        })
        .collect()
}

fn ensemble_rows(
    base: &WirelessConfig,
    points: Vec<WirelessConfig>,
    members: usize,
    opts: &RunOptions,
) -> Result<Vec<Row>> {
    if members == 0 {
        return Err(usage("ensemble needs at least one member"));
    }
    for cfg in &points {
        cfg.validate()
            .map_err(|e| usage(format!("point {}: {e}", wireless_params(cfg, members, 0))))?;
    }
    if base.n > opts.node_cap {
        return Err(usage(format!(
            "wireless n = {} exceeds the node cap {}",
            base.n, opts.node_cap
        )));
    }
    let placements = ensemble_placements(base, &points, members, opts)?;

    points
        .par_iter()
        .enumerate()
        .map(|(point_idx, cfg)| {
            let per_member: Vec<Result<Option<LatencyReport>>> = placements
                .par_iter()
                .enumerate()
                .map(|(member, placement)| {
                    let label = format!("{} member={member}", wireless_params(cfg, members, 0));
                    let topo = build_wireless_graph(cfg, placement).map_err(at(&label))?;
                    if !topo.connected {
                        return Ok(None);
                    }
                    let seed = mix_seed(opts.seed, member as u64, 1 << 32 | point_idx as u64);
                    epd_report(&topo.graph, opts, seed, opts.trials)
                        .map(Some)
                        .map_err(at(&label))
                })
                .collect();
            let mut reports = Vec::with_capacity(members);
            for r in per_member {
                if let Some(rep) = r? {
                    reports.push(rep);
                }
            }
            let disconnected = members - reports.len();
            let params = wireless_params(cfg, members, disconnected);
            if reports.is_empty() {
                return Err(ExperimentError::Runtime {
                    point: params,
                    source: Error::Disconnected { zero_modes: 0 },
                });
            }
            Ok(Row {
                family: "wireless".into(),
                params,
                report: average_reports(&reports),
            })
        })
        .collect()
}

fn average_reports(reports: &[LatencyReport]) -> LatencyReport {
    let k = reports.len() as f64;
    let mean = |f: &dyn Fn(&LatencyReport) -> f64| reports.iter().map(f).sum::<f64>() / k;
    let mut out = LatencyReport::new(
        mean(&|r| r.analytic),
        Bounds {
            lower: mean(&|r| r.lower_bound),
            upper: mean(&|r| r.upper_bound),
        },
    );
    if reports.iter().all(|r| r.oracle.is_some()) {
        out.oracle = Some(mean(&|r| r.oracle.unwrap_or(0.0)));
    }
    let mcs: Vec<McSummary> = reports.iter().filter_map(|r| r.mc_estimate).collect();
    if mcs.len() == reports.len() {
        let var: f64 = mcs.iter().map(|m| m.ci_halfwidth * m.ci_halfwidth).sum();
        out.mc_estimate = Some(McSummary {
            mean: mcs.iter().map(|m| m.mean).sum::<f64>() / k,
            ci_halfwidth: var.sqrt() / k,
            trials: mcs.iter().map(|m| m.trials).sum(),
        });
    }
    out
}
