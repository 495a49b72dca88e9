use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use walklat::experiment::{
    self, Experiment, ExperimentError, ExperimentSpec, GraphSpec, RunOptions, SweepRange,
    DEFAULT_NODE_CAP, NODE_CAP_ENV,
};
use walklat::WirelessConfig;

/// Random-walk latency on circulant tori and wireless topologies.
#[derive(Parser, Debug)]
#[command(name = "walklat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed for placements and walks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte-Carlo walks per row (per member for ensembles).
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Fill the oracle column with an independent dense solver.
    #[arg(long, global = true)]
    oracle: bool,
    /// Skip oracle and Monte-Carlo columns above this many nodes.
    #[arg(long, global = true, env = NODE_CAP_ENV, default_value_t = DEFAULT_NODE_CAP)]
    node_cap: usize,
    /// Redraw ensemble placements (up to N times) until connected at every point.
    #[arg(long, global = true, value_name = "N", num_args = 0..=1, default_missing_value = "1000")]
    resample_until_connected: Option<u32>,
    /// Wireless parameter file (key = value lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mean latency of r-nearest-neighbor cycles.
    CycleSweep {
        #[arg(long, default_value = "300")]
        n: String,
        #[arg(long, default_value = "1:10")]
        r: String,
        #[command(flatten)]
        common: Common,
    },
    /// Mean latency of two-dimensional tori.
    TorusSweep {
        #[arg(long, default_value = "100:1000:100")]
        k1: String,
        #[arg(long, default_value = "100:1000:100")]
        k2: String,
        #[arg(long, default_value = "1")]
        r: String,
        #[command(flatten)]
        common: Common,
    },
    /// Mean latency as dimensions are added from a side-length list.
    DimensionSweep {
        #[arg(long, value_delimiter = ',', default_value = "16,18,20,22")]
        dims: Vec<usize>,
        #[arg(long, default_value = "1:3")]
        r: String,
        #[command(flatten)]
        common: Common,
    },
    /// Mean latency against its spectral-gap bounds; fails on a violation.
    BoundsCheck {
        #[arg(long, default_value = "5:64")]
        n: String,
        #[arg(long, default_value = "1:2")]
        r: String,
        #[command(flatten)]
        common: Common,
    },
    /// Ensemble packet delay over the path-loss exponent.
    EpdEtaSweep {
        #[arg(long, default_value = "2:6:0.5")]
        eta: String,
        #[arg(long, default_value_t = 20)]
        members: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Ensemble packet delay over the minimum received power.
    EpdPminSweep {
        #[arg(long, default_value = "2:4:2")]
        eta: String,
        #[arg(long, default_value = "0.1:0.3:0.05")]
        p_min: String,
        #[arg(long, default_value_t = 20)]
        members: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Ensemble packet delay over the connectivity threshold.
    EpdThresholdSweep {
        #[arg(long, default_value = "0.1:0.7:0.1")]
        threshold: String,
        #[arg(long, default_value_t = 20)]
        members: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Analytic packet delay against the random-walk simulator.
    WalkValidate {
        /// complete:N, cycle:N:R, torus:K1xK2:R, edgelist:PATH or wireless:SEED
        #[arg(long = "graph", required = true)]
        graphs: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Laplacian eigenvalues of one graph.
    Spectrum {
        #[arg(long)]
        graph: String,
        /// Use the dense eigensolver even when a closed form exists.
        #[arg(long)]
        numeric: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Export one wireless topology as edge lists and a positions CSV.
    Topology {
        /// Output path prefix.
        #[arg(long)]
        prefix: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn range(s: &str) -> Result<SweepRange, ExperimentError> {
    SweepRange::parse(s)
}

fn load_config(common: &Common) -> Result<WirelessConfig, ExperimentError> {
    match &common.config {
        Some(path) => WirelessConfig::from_file(path)
            .map_err(|e| ExperimentError::Usage(format!("{}: {e}", path.display()))),
        None => Ok(WirelessConfig::default()),
    }
}

fn options(common: &Common) -> RunOptions {
    RunOptions {
        seed: common.seed,
        trials: common.trials,
        oracle: common.oracle,
        node_cap: common.node_cap,
        resample_until_connected: common.resample_until_connected,
    }
}

fn emit(common: &Common, text: &str) -> Result<(), ExperimentError> {
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| ExperimentError::Runtime {
            point: format!("writing {}", path.display()),
            source: walklat::Error::Io(e.to_string()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(command: Command) -> Result<(), ExperimentError> {
    let (experiment, common) = match command {
        Command::CycleSweep { n, r, common } => (
            Experiment::CycleSweep {
                n: range(&n)?,
                r: range(&r)?,
            },
            common,
        ),
        Command::TorusSweep { k1, k2, r, common } => (
            Experiment::TorusSweep {
                k1: range(&k1)?,
                k2: range(&k2)?,
                r: range(&r)?,
            },
            common,
        ),
        Command::DimensionSweep { dims, r, common } => (
            Experiment::DimensionSweep {
                dims,
                r: range(&r)?,
            },
            common,
        ),
        Command::BoundsCheck { n, r, common } => (
            Experiment::BoundsCheck {
                n: range(&n)?,
                r: range(&r)?,
            },
            common,
        ),
        Command::EpdEtaSweep {
            eta,
            members,
            common,
        } => (
            Experiment::EpdEtaSweep {
                config: load_config(&common)?,
                eta: range(&eta)?,
                members,
            },
            common,
        ),
        Command::EpdPminSweep {
            eta,
            p_min,
            members,
            common,
        } => (
            Experiment::EpdPminSweep {
                config: load_config(&common)?,
                eta: range(&eta)?,
                p_min: range(&p_min)?,
                members,
            },
            common,
        ),
        Command::EpdThresholdSweep {
            threshold,
            members,
            common,
        } => (
            Experiment::EpdThresholdSweep {
                config: load_config(&common)?,
                threshold: range(&threshold)?,
                members,
            },
            common,
        ),
        Command::WalkValidate { graphs, common } => {
            let graphs = graphs
                .iter()
                .map(|g| GraphSpec::parse(g))
                .collect::<Result<Vec<_>, _>>()?;
            (
                Experiment::WalkValidate {
                    graphs,
                    config: load_config(&common)?,
                },
                common,
            )
        }
        Command::Spectrum {
            graph,
            numeric,
            common,
        } => {
            let spec = GraphSpec::parse(&graph)?;
            let csv = experiment::spectrum_csv(&spec, &load_config(&common)?, numeric)?;
            return emit(&common, &csv);
        }
        Command::Topology { prefix, common } => {
            let connected =
                experiment::export_topology(&load_config(&common)?, common.seed, &prefix)?;
            if !connected {
                eprintln!("warning: topology for seed {} is disconnected", common.seed);
            }
            return Ok(());
        }
    };
    experiment::run(&ExperimentSpec {
        experiment,
        options: options(&common),
        out: common.out.clone(),
    })
    .map(|_| ())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("walklat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
