//! Dispatch from a validated config to the library, one row per trial.

use std::time::Instant;

use bipbis::ogp::DEFAULT_STEP_BUDGET;
use bipbis::{
    algorithmic_threshold, build_interpolation_path, check_forbidden_structure, classify_phase, d_min,
    detect_c_bad_edges, existence_threshold, first_moment_exponent, greedy_overlap_sequence, lowdeg_targets,
    norm_second_moment, one_local_pair, round_polynomial, run_local_trial, sample_bipartite_graph, BipartiteGraph,
    Degree1Polynomial, Eta, ExactSolver, ForbiddenStructureParams, GraphPolynomial, PhasePoint, RandomSeed,
    StabilityConfig,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Checked, Command, ExperimentConfig};
use crate::error::CliError;

/// Bumped whenever a CSV header or record field changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

pub const LOCAL_HEADER: [&str; 9] = ["trial", "n", "d", "p", "gamma", "count_l", "count_r", "trimmed_size", "wall_time_ms"];
pub const LOWDEG_HEADER: [&str; 9] = ["trial", "n", "d", "k_l", "k_r", "count_l", "count_r", "norm_sq", "failed"];
pub const OGP_HEADER: [&str; 7] = ["trial", "n", "d", "T", "bad_edge_count", "greedy_success", "conditions_passed"];

/// Samples used for the `E‖f‖²` estimate of the ogp command. They use the
/// streams directly after the trials.
pub const NORM_SAMPLES: usize = 100;

/// Sweep cell `k` starts at stream `base + k · CELL_STRIDE`.
pub const CELL_STRIDE: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedLedger {
    pub seed: u64,
    /// Stream of each row, in row order.
    pub streams: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub schema_version: u32,
    pub library_version: String,
    pub config: ExperimentConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub grid: Vec<(String, Vec<f64>)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// One `key=value` line for the non-tabular commands.
    pub summary: Option<String>,
    /// Graph text produced by `sample`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<String>,
    pub wall_clock_ms: u64,
    pub seeds: SeedLedger,
}

impl ExperimentRecord {
    fn new(config: &ExperimentConfig, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            grid: Vec::new(),
            header: Vec::new(),
            rows: Vec::new(),
            summary: None,
            payload: None,
            wall_clock_ms: 0,
            seeds: SeedLedger {
                seed,
                streams: Vec::new(),
            },
        }
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentRecord, CliError> {
    let checked = config.validate()?;
    let start = Instant::now();
    let mut record = ExperimentRecord::new(config, checked.seed);
    match checked.command {
        Command::Local => table(&mut record, &checked, &LOCAL_HEADER, local_row)?,
        Command::Lowdeg => table(&mut record, &checked, &LOWDEG_HEADER, lowdeg_row)?,
        Command::Ogp => {
            let ctx = OgpContext::new(&checked)?;
            table(&mut record, &checked, &OGP_HEADER, |c, t, s| ogp_row(c, &ctx, t, s))?;
            record.summary = Some(format!(
                "norm_estimate={} k_sufficient={}",
                ctx.stability.norm_estimate,
                ctx.params.k_sufficient()
            ));
        }
        Command::Sample => {
            let g = sample_bipartite_graph(checked.n, checked.d, base_seed(&checked))?;
            record.summary = Some(format!(
                "n={} d={} seed={} stream={} edges={}",
                checked.n,
                checked.d,
                checked.seed,
                checked.stream,
                g.edge_count()
            ));
            record.payload = Some(g.to_text());
            record.seeds.streams.push(checked.stream);
        }
        Command::Exact => record.summary = Some(exact_line(&checked)?),
        Command::Phase => {
            let phase = classify_phase(PhasePoint::new(checked.x, checked.y)?);
            record.summary = Some(format!("phase={phase}"));
        }
        Command::Thresholds => {
            let e = existence_threshold(checked.gamma)?;
            let a = algorithmic_threshold(checked.gamma)?;
            record.summary = Some(format!(
                "gamma={} existence={e} algorithmic={a} ratio={}",
                checked.gamma,
                e / a
            ));
        }
        Command::Exponent => {
            let r = first_moment_exponent(checked.c, checked.d, checked.gamma)?;
            let mut line = format!(
                "c={} d={} gamma={} leading_coefficient={} exponent={} sign={}",
                r.c, r.d, r.gamma, r.leading_coefficient, r.value, r.sign
            );
            if checked.c > existence_threshold(checked.gamma)? {
                line.push_str(&format!(" d_min={}", d_min(checked.c, checked.gamma)?));
            }
            record.summary = Some(line);
        }
    }
    record.wall_clock_ms = start.elapsed().as_millis() as u64;
    Ok(record)
}

/// One experiment per point of the Cartesian product of at most two grids.
/// Rows are concatenated in cell order under a single header.
pub fn sweep(config: &ExperimentConfig, grid: &[(String, Vec<f64>)]) -> Result<ExperimentRecord, CliError> {
    if grid.is_empty() {
        return Err(CliError::config("grid", "empty"));
    }
    if grid.len() > 2 {
        return Err(CliError::config("grid", format!("at most 2 parameters, got {}", grid.len())));
    }
    if let Some((name, _)) = grid.iter().find(|(_, v)| v.is_empty()) {
        return Err(CliError::config("grid", format!("no values for `{name}`")));
    }
    if !config.command.is_tabular() {
        return Err(CliError::config("command", format!("`{}` cannot be swept", config.command)));
    }
    let (seed, stream) = (config.parameters.seed.unwrap_or(0), config.parameters.stream.unwrap_or(0));
    let mut cells = vec![config.parameters.clone()];
    for (name, values) in grid {
        let mut next = Vec::new();
        for cell in &cells {
            for &v in values {
                let mut c = cell.clone();
                c.set(name, v)?;
                next.push(c);
            }
        }
        cells = next;
    }
    let configs: Vec<ExperimentConfig> = cells
        .into_iter()
        .enumerate()
        .map(|(k, mut params)| {
            params.stream = Some(stream.wrapping_add(k as u64 * CELL_STRIDE));
            let cfg = ExperimentConfig::new(config.command, params);
            cfg.validate().map(|_| cfg)
        })
        .collect::<Result<_, _>>()?;

    let start = Instant::now();
    let mut record = ExperimentRecord::new(config, seed);
    record.grid = grid.to_vec();
    for cfg in &configs {
        let cell = run_experiment(cfg)?;
        record.header = cell.header;
        record.rows.extend(cell.rows);
        record.seeds.streams.extend(cell.seeds.streams);
    }
    record.wall_clock_ms = start.elapsed().as_millis() as u64;
    Ok(record)
}

fn base_seed(c: &Checked) -> RandomSeed {
    RandomSeed::new(c.seed, c.stream)
}

fn table<F>(record: &mut ExperimentRecord, c: &Checked, header: &[&str], row: F) -> Result<(), CliError>
where
    F: Fn(&Checked, usize, RandomSeed) -> Result<Vec<String>, CliError> + Sync,
{
    let seed = base_seed(c);
    record.header = header.iter().map(|s| s.to_string()).collect();
    record.rows = (0..c.trials)
        .into_par_iter()
        .map(|t| row(c, t, seed.offset(t as u64)))
        .collect::<Result<_, _>>()?;
    record.seeds.streams = (0..c.trials as u64).map(|t| seed.offset(t).stream).collect();
    Ok(())
}

fn local_row(c: &Checked, t: usize, seed: RandomSeed) -> Result<Vec<String>, CliError> {
    let start = Instant::now();
    let trial = run_local_trial(c.n, c.d, &one_local_pair(c.p)?, c.gamma, seed)?;
    let ms = if c.no_timing { 0 } else { start.elapsed().as_millis() };
    Ok(vec![
        t.to_string(),
        c.n.to_string(),
        c.d.to_string(),
        c.p.to_string(),
        c.gamma.to_string(),
        trial.count_l.to_string(),
        trial.count_r.to_string(),
        trial.trimmed_size.to_string(),
        ms.to_string(),
    ])
}

fn lowdeg_row(c: &Checked, t: usize, seed: RandomSeed) -> Result<Vec<String>, CliError> {
    let (k_l, k_r) = lowdeg_targets(c.n, c.d, c.epsilon)?;
    let f = Degree1Polynomial::new(c.n, k_l, seed)?;
    let g = sample_bipartite_graph(c.n, c.d, seed)?;
    let out = f.evaluate(&g);
    let rounded = round_polynomial(&out, &g, Eta::Real(c.eta))?;
    let set = rounded.set();
    Ok(vec![
        t.to_string(),
        c.n.to_string(),
        c.d.to_string(),
        k_l.to_string(),
        k_r.to_string(),
        set.count_l().to_string(),
        set.count_r().to_string(),
        out.norm_sq().to_string(),
        (rounded.is_failure() as u8).to_string(),
    ])
}

struct OgpContext {
    f: Degree1Polynomial,
    stability: StabilityConfig,
    params: ForbiddenStructureParams,
}

impl OgpContext {
    /// One polynomial for all trials, keyed by the base seed; `E‖f‖²` is
    /// estimated on the streams after the trials.
    fn new(c: &Checked) -> Result<Self, CliError> {
        let seed = base_seed(c);
        let (k_l, _) = lowdeg_targets(c.n, c.d, c.epsilon)?;
        let f = Degree1Polynomial::new(c.n, k_l, seed)?;
        let norm = norm_second_moment(&f, c.n, c.d, NORM_SAMPLES, seed.offset(c.trials as u64))?;
        let stability = StabilityConfig {
            c: c.c,
            gamma_steps: c.gamma_steps,
            degree: f.degree(),
            norm_estimate: norm.mean,
        };
        stability.validate()?;
        let steps = (c.gamma_steps * c.n * c.n) as u64;
        if steps.saturating_mul(c.trials as u64) > DEFAULT_STEP_BUDGET {
            eprintln!("warning: {steps} path steps per trial over {} trials", c.trials);
        }
        Ok(Self {
            f,
            stability,
            params: ForbiddenStructureParams::new(c.epsilon, c.k, c.n, c.d)?,
        })
    }
}

fn ogp_row(c: &Checked, ctx: &OgpContext, t: usize, seed: RandomSeed) -> Result<Vec<String>, CliError> {
    let steps = c.gamma_steps * c.n * c.n;
    let base = sample_bipartite_graph(c.n, c.d, seed)?;
    let path = build_interpolation_path(base, steps, c.d, seed)?;
    let bad = detect_c_bad_edges(&ctx.f, &path, &ctx.stability)?;

    let round = |g: &BipartiteGraph| round_polynomial(&ctx.f.evaluate(g), g, Eta::Real(c.eta)).map(|r| r.set());
    let mut cursor = path.cursor();
    let mut sets = vec![round(cursor.graph())?];
    while cursor.advance().is_some() {
        sets.push(round(cursor.graph())?);
    }
    let greedy = greedy_overlap_sequence(&sets, &ctx.params);
    let verdict = check_forbidden_structure(&greedy.selected, &path, &ctx.params)?;
    Ok(vec![
        t.to_string(),
        c.n.to_string(),
        c.d.to_string(),
        steps.to_string(),
        bad.len().to_string(),
        (greedy.success as u8).to_string(),
        verdict.bitmask().to_string(),
    ])
}

fn exact_line(c: &Checked) -> Result<String, CliError> {
    let path = c.graph.as_ref().expect("validated");
    let file = std::fs::File::open(path).map_err(|source| CliError::File {
        path: path.clone(),
        source,
    })?;
    let g = BipartiteGraph::read_text(std::io::BufReader::new(file))?;
    let sol = ExactSolver::with_limit(c.max_n).max_gamma_balanced_is(&g, c.gamma)?;
    let join = |xs: &[u32]| xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    Ok(format!(
        "n={} gamma={} size={} in_l={} in_r={}",
        g.n(),
        c.gamma,
        sol.size,
        join(sol.witness.in_l()),
        join(sol.witness.in_r())
    ))
}
