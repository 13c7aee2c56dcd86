//! Writing records: CSV and JSON files are written to a temporary file in the
//! target directory and renamed into place.

use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

use crate::error::CliError;
use crate::run::ExperimentRecord;

pub fn write_atomic(path: &Path, write: impl FnOnce(&mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    write(tmp.as_file_mut())?;
    tmp.as_file_mut().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

pub fn write_csv(out: &mut dyn Write, record: &ExperimentRecord) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&record.header)?;
    for row in &record.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Sends each part of `record` where its config asks. A CSV goes to `csv` or
/// `stdout`; its trailing `key=value` lines (summary, seeds) go to `stdout`
/// when the CSV went to a file and to `stderr` otherwise, so that `stdout`
/// stays pure CSV. A sampled graph goes to `out` or `stdout`, and the JSON
/// record to `record`.
pub fn emit(record: &ExperimentRecord, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let params = &record.config.parameters;
    if !record.header.is_empty() {
        let info: &mut dyn Write = match &params.csv {
            Some(path) => {
                write_atomic(path, |w| write_csv(w, record))?;
                &mut *stdout
            }
            None => {
                write_csv(&mut *stdout, record)?;
                &mut *stderr
            }
        };
        if let Some(line) = &record.summary {
            writeln!(info, "{line}")?;
        }
        writeln!(info, "{}", seed_line(record))?;
    } else if let Some(text) = &record.payload {
        match &params.out {
            Some(path) => {
                write_atomic(path, |w| Ok(w.write_all(text.as_bytes())?))?;
                if let Some(line) = &record.summary {
                    writeln!(stdout, "{line}")?;
                }
            }
            None => stdout.write_all(text.as_bytes())?,
        }
    } else if let Some(line) = &record.summary {
        writeln!(stdout, "{line}")?;
    }
    if let Some(path) = &params.record {
        write_atomic(path, |w| {
            serde_json::to_writer_pretty(&mut *w, record)?;
            Ok(writeln!(w)?)
        })?;
    }
    Ok(())
}

/// `rows=N seed=S streams=a..b,c..d`, one range per contiguous block.
pub fn seed_line(record: &ExperimentRecord) -> String {
    let mut runs: Vec<(u64, u64)> = Vec::new();
    for &s in &record.seeds.streams {
        match runs.last_mut() {
            Some((_, end)) if end.wrapping_add(1) == s => *end = s,
            _ => runs.push((s, s)),
        }
    }
    let streams: Vec<String> = runs
        .iter()
        .map(|&(a, b)| if a == b { a.to_string() } else { format!("{a}..{b}") })
        .collect();
    format!("rows={} seed={} streams={}", record.rows.len(), record.seeds.seed, streams.join(","))
}
