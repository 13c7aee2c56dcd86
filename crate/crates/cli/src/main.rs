use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bipbis_cli::{emit, parse_grid, run_experiment, sweep, with_workers, CliError, Command, ExperimentConfig, Params};
use clap::{Args, Parser, Subcommand};

/// Balanced independent sets in sparse random bipartite graphs.
#[derive(Parser)]
#[command(name = "bipbis", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample G(n, d) and write it in the graph text format.
    Sample(SampleArgs),
    /// Largest gamma-balanced independent set of a small graph file.
    Exact(ExactArgs),
    /// Run the 1-local algorithm on fresh graphs.
    Local(LocalArgs),
    /// Run the degree-1 polynomial with rounding on fresh graphs.
    Lowdeg(LowdegArgs),
    /// Stability and overlap probes along interpolation paths.
    Ogp(OgpArgs),
    /// Classify a point of the phase diagram.
    Phase(PhaseArgs),
    /// Existence and algorithmic density thresholds.
    Thresholds(ThresholdsArgs),
    /// First-moment exponent at finite d.
    Exponent(ExponentArgs),
    /// Run the experiment described by a JSON config.
    Run(Common),
    /// Run a tabular command over a grid of at most two parameters.
    Sweep(SweepArgs),
}

#[derive(Args, Default)]
struct Common {
    /// JSON config; flags override its parameters.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = "BIPBIS_WORKERS")]
    workers: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    stream: Option<u64>,
    /// Write the JSON experiment record here.
    #[arg(long)]
    record: Option<PathBuf>,
}

impl Common {
    fn params(&self) -> Params {
        Params {
            workers: self.workers,
            seed: self.seed,
            stream: self.stream,
            record: self.record.clone(),
            ..Params::default()
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<f64>,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    max_n: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct LocalArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// CSV output; stdout if absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write 0 in the wall_time_ms column so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct LowdegArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Rounding tolerance.
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct OgpArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long)]
    gamma_steps: Option<usize>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct PhaseArgs {
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    y: Option<f64>,
}

#[derive(Args)]
struct ThresholdsArgs {
    #[arg(long)]
    gamma: Option<f64>,
}

#[derive(Args)]
struct ExponentArgs {
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// `name=v1,v2` or `name=start:stop:step`; at most twice.
    #[arg(long, required = true)]
    grid: Vec<String>,
    #[command(subcommand)]
    target: SweepTarget,
}

#[derive(Subcommand)]
enum SweepTarget {
    Local(LocalArgs),
    Lowdeg(LowdegArgs),
    Ogp(OgpArgs),
}

fn local_params(a: LocalArgs) -> (Command, Common, Params) {
    let p = Params {
        n: a.n,
        d: a.d,
        p: a.p,
        gamma: a.gamma,
        trials: a.trials,
        csv: a.csv,
        no_timing: a.no_timing.then_some(true),
        ..a.common.params()
    };
    (Command::Local, a.common, p)
}

fn lowdeg_params(a: LowdegArgs) -> (Command, Common, Params) {
    let p = Params {
        n: a.n,
        d: a.d,
        epsilon: a.epsilon,
        eta: a.eta,
        trials: a.trials,
        csv: a.csv,
        ..a.common.params()
    };
    (Command::Lowdeg, a.common, p)
}

fn ogp_params(a: OgpArgs) -> (Command, Common, Params) {
    let p = Params {
        n: a.n,
        d: a.d,
        epsilon: a.epsilon,
        k: a.k,
        gamma_steps: a.gamma_steps,
        c: a.c,
        eta: a.eta,
        trials: a.trials,
        csv: a.csv,
        ..a.common.params()
    };
    (Command::Ogp, a.common, p)
}

fn resolve(command: Option<Command>, common: &Common, flags: Params) -> Result<ExperimentConfig, CliError> {
    let file = common.config.as_deref().map(ExperimentConfig::load).transpose()?;
    let command = match (command, &file) {
        (Some(c), Some(f)) if c != f.command => {
            return Err(CliError::config("command", format!("`{c}` given but config is for `{}`", f.command)));
        }
        (Some(c), _) => c,
        (None, Some(f)) => f.command,
        (None, None) => return Err(CliError::config("config", "required")),
    };
    let base = file.map(|f| f.parameters).unwrap_or_default();
    Ok(ExperimentConfig::new(command, base.overlay(flags)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let mut grid = Vec::new();
    let (command, common, flags) = match cli.command {
        Cmd::Sample(a) => {
            let p = Params {
                n: a.n,
                d: a.d,
                out: a.out,
                ..a.common.params()
            };
            (Some(Command::Sample), a.common, p)
        }
        Cmd::Exact(a) => {
            let p = Params {
                graph: a.graph,
                gamma: a.gamma,
                max_n: a.max_n,
                ..a.common.params()
            };
            (Some(Command::Exact), a.common, p)
        }
        Cmd::Local(a) => wrap(local_params(a)),
        Cmd::Lowdeg(a) => wrap(lowdeg_params(a)),
        Cmd::Ogp(a) => wrap(ogp_params(a)),
        Cmd::Phase(a) => (Some(Command::Phase), Common::default(), Params { x: a.x, y: a.y, ..Params::default() }),
        Cmd::Thresholds(a) => (Some(Command::Thresholds), Common::default(), Params { gamma: a.gamma, ..Params::default() }),
        Cmd::Exponent(a) => (
            Some(Command::Exponent),
            Common::default(),
            Params {
                c: a.c,
                d: a.d,
                gamma: a.gamma,
                ..Params::default()
            },
        ),
        Cmd::Run(common) => {
            let p = common.params();
            (None, common, p)
        }
        Cmd::Sweep(s) => {
            grid = s.grid.iter().map(|g| parse_grid(g)).collect::<Result<_, _>>()?;
            wrap(match s.target {
                SweepTarget::Local(a) => local_params(a),
                SweepTarget::Lowdeg(a) => lowdeg_params(a),
                SweepTarget::Ogp(a) => ogp_params(a),
            })
        }
    };
    let config = resolve(command, &common, flags)?;
    let record = with_workers(config.parameters.workers, || {
        if grid.is_empty() {
            run_experiment(&config)
        } else {
            sweep(&config, &grid)
        }
    })??;
    let mut stdout = std::io::stdout().lock();
    emit(&record, &mut stdout, &mut std::io::stderr().lock())?;
    stdout.flush()?;
    Ok(())
}

fn wrap((c, common, p): (Command, Common, Params)) -> (Option<Command>, Common, Params) {
    (Some(c), common, p)
}
