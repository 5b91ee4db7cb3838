//! Flat-file result formats.
//!
//! Trial CSV columns: `trial_index,delta_db,ue_power,ed_power,degenerate_flag,estimator`.
//! `delta_db` is `inf` for float-limited advantages and `error` for failed
//! trials (whose power columns are left empty). Floats use Rust's shortest
//! round-trip formatting so identical runs give identical bytes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use super::campaign::{CampaignResult, CdfPoint};

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("CSV error writing {path}: {source}")]
    Csv { path: String, source: csv::Error },
    #[error("JSON error writing {path}: {source}")]
    Json { path: String, source: serde_json::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format {other:?}, expected csv or json")),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, OutputError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| OutputError::Io { path: path.display().to_string(), source })
}

pub fn write_trials_csv<W: Write>(res: &CampaignResult, out: W) -> Result<(), csv::Error> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["trial_index", "delta_db", "ue_power", "ed_power", "degenerate_flag", "estimator"])?;
    let estimator = res.config.estimator.to_string();
    for t in &res.trials {
        let row = match &t.metrics {
            Some(m) => [
                t.trial_index.to_string(),
                m.delta_db.to_string(),
                m.ue_power.to_string(),
                m.ed_power.to_string(),
                m.degenerate_flag.to_string(),
                estimator.clone(),
            ],
            None => [t.trial_index.to_string(), "error".into(), String::new(), String::new(), String::new(), estimator.clone()],
        };
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_cdf_csv<W: Write>(cdf: &[CdfPoint], out: W) -> Result<(), csv::Error> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["delta_db", "probability"])?;
    for p in cdf {
        wtr.write_record([p.delta_db.to_string(), p.probability.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_beam_pattern_csv<W: Write>(pattern: &[(f64, f64)], out: W) -> Result<(), csv::Error> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["angle_deg", "power_db"])?;
    for (angle, power) in pattern {
        wtr.write_record([angle.to_string(), power.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes the campaign to `path` in the given format.
pub fn emit_results(res: &CampaignResult, format: OutputFormat, path: &Path) -> Result<(), OutputError> {
    let file = create(path)?;
    let p = || path.display().to_string();
    match format {
        OutputFormat::Csv => write_trials_csv(res, file).map_err(|source| OutputError::Csv { path: p(), source }),
        OutputFormat::Json => {
            let mut file = file;
            serde_json::to_writer_pretty(&mut file, res).map_err(|source| OutputError::Json { path: p(), source })?;
            file.flush().map_err(|source| OutputError::Io { path: p(), source })
        }
    }
}

pub fn emit_cdf(cdf: &[CdfPoint], path: &Path) -> Result<(), OutputError> {
    let file = create(path)?;
    write_cdf_csv(cdf, file).map_err(|source| OutputError::Csv { path: path.display().to_string(), source })
}

pub fn emit_beam_pattern(pattern: &[(f64, f64)], path: &Path) -> Result<(), OutputError> {
    let file = create(path)?;
    write_beam_pattern_csv(pattern, file).map_err(|source| OutputError::Csv { path: path.display().to_string(), source })
}

pub fn read_campaign_json(path: &Path) -> Result<CampaignResult, OutputError> {
    let p = || path.display().to_string();
    let file = File::open(path).map_err(|source| OutputError::Io { path: p(), source })?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|source| OutputError::Json { path: p(), source })
}
