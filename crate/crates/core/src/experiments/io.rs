use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use super::runner::{SummaryRow, TrialRecord};
use crate::error::Result;

fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn write_trials<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sigma", "trial", "seed", "recovered", "margin", "wall_ms"])?;
    for r in records {
        w.write_record([
            num(r.sigma),
            r.trial.to_string(),
            r.seed.to_string(),
            r.recovered.to_string(),
            num(r.margin),
            num(r.wall_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(rows: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sigma", "rate", "trials", "mean_margin"])?;
    for r in rows {
        w.write_record([num(r.sigma), num(r.rate), r.trials.to_string(), num(r.mean_margin)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trials<R: Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| row.map_err(Into::into)).collect()
}

pub fn read_summary<R: Read>(input: R) -> Result<Vec<SummaryRow>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| row.map_err(Into::into)).collect()
}

/// Writes `trials.csv` and `summary.csv` under `dir`, returning both paths.
pub fn write_sweep_files(dir: &Path, records: &[TrialRecord], rows: &[SummaryRow]) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let trials = dir.join("trials.csv");
    let summary = dir.join("summary.csv");
    write_trials(records, fs::File::create(&trials)?)?;
    write_summary(rows, fs::File::create(&summary)?)?;
    Ok((trials, summary))
}
