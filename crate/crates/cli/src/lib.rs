//! Experiment orchestration for `bipbis`: configs, seeded parallel trials and
//! CSV/JSON output.
//!
//! Every trial `t` of an experiment with seed `s` and stream `k` draws from
//! stream `k + t`, so results do not depend on the worker count.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{Checked, Command, ExperimentConfig, Params};
pub use error::CliError;
pub use output::{emit, seed_line, write_atomic, write_csv};
pub use run::{run_experiment, sweep, ExperimentRecord, SeedLedger, SCHEMA_VERSION};

/// Runs `f` on a pool of `workers` threads, or rayon's default pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| CliError::config("workers", e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Parses `name=v1,v2,...` or `name=start:stop:step` (inclusive).
pub fn parse_grid(spec: &str) -> Result<(String, Vec<f64>), CliError> {
    let (name, values) = spec
        .split_once('=')
        .ok_or_else(|| CliError::config("grid", format!("expected name=values, got `{spec}`")))?;
    let num = |s: &str| -> Result<f64, CliError> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::config("grid", format!("bad number `{s}` in `{spec}`")))
    };
    let values = if let [a, b, step] = values.split(':').collect::<Vec<_>>()[..] {
        let (a, b, step) = (num(a)?, num(b)?, num(step)?);
        if step.is_nan() || step <= 0.0 || b < a {
            return Err(CliError::config("grid", format!("bad range `{values}`")));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize;
        (0..=count).map(|i| a + i as f64 * step).map(|v| (v * 1e12).round() / 1e12).collect()
    } else if values.trim().is_empty() {
        Vec::new()
    } else {
        values.split(',').map(num).collect::<Result<_, _>>()?
    };
    Ok((name.trim().to_string(), values))
}
