use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::{ExperimentConfig, Format};
use crate::ensemble::{ResultTable, TaskFailure};
use crate::error::{Error, Result};

const USAGE: &str = "nothing to write: select at least one measure under [measures] names, \
e.g. names = [\"gamma\", \"pn\"]";

/// Everything needed to rerun an experiment exactly.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub config: ExperimentConfig,
    pub base_seed: u64,
    pub grid: Vec<f64>,
    pub units: &'static str,
    pub version: &'static str,
    pub wall_time_s: f64,
    pub failures: Vec<FailureNote>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FailureNote {
    #[serde(rename = "J")]
    pub coupling: f64,
    pub realization: usize,
    pub message: String,
}

impl RunMetadata {
    pub fn new(config: &ExperimentConfig, wall_time_s: f64, failures: &[TaskFailure]) -> Self {
        Self {
            config: config.clone(),
            base_seed: config.ensemble.base_seed,
            grid: config.sweep.grid(),
            units: config.sweep.units.label(),
            version: env!("CARGO_PKG_VERSION"),
            wall_time_s,
            failures: failures
                .iter()
                .map(|f| FailureNote {
                    coupling: f.coupling,
                    realization: f.realization,
                    message: f.message.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct Sidecar<'a> {
    #[serde(flatten)]
    meta: &'a RunMetadata,
    timestamp_unix: u64,
}

struct HistogramRow {
    coupling: f64,
    n_qubits: usize,
    l_c: Option<usize>,
    n_up: usize,
    bin_left: f64,
    bin_right: f64,
    density: f64,
}

#[derive(Serialize)]
struct MapRow {
    state_index: usize,
    #[serde(rename = "J")]
    coupling: f64,
    value: f64,
}

fn write_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>, header: Option<&[&str]>) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(header.is_none())
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::Validation(format!("{other:?}")),
        })?;
    if let Some(h) = header {
        w.write_record(h)?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `results.csv`/`results.json`, `metadata.json` and any histogram or map tables.
///
/// Returns the paths written. Apart from the timestamp in `metadata.json`,
/// identical inputs give byte-identical files.
pub fn emit(results: &ResultTable, meta: &RunMetadata, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    if results.records.is_empty() && results.histograms.is_empty() && results.map.is_none() {
        return Err(Error::arg(USAGE));
    }
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let formats = &meta.config.output.formats;

    if formats.contains(&Format::Csv) {
        let path = dir.join("results.csv");
        if results.records.is_empty() {
            write_csv::<()>(
                &path,
                [],
                Some(&["measure", "J", "J_units", "value", "stderr", "n_samples", "L", "model", "l_c", "seed"]),
            )?;
        } else {
            write_csv(&path, &results.records, None)?;
        }
        written.push(path);
    }
    if formats.contains(&Format::Json) {
        let path = dir.join("results.json");
        write_json(&path, &results.records)?;
        written.push(path);
    }

    for kind in ["spacing", "clambda"] {
        let rows: Vec<HistogramRow> = results
            .histograms
            .iter()
            .filter(|h| h.kind == kind)
            .flat_map(|h| {
                h.histogram.bins.iter().map(move |b| HistogramRow {
                    coupling: h.coupling,
                    n_qubits: h.n_qubits,
                    l_c: h.l_c,
                    n_up: h.n_up,
                    bin_left: b.left,
                    bin_right: b.right,
                    density: b.density,
                })
            })
            .collect();
        if rows.is_empty() {
            continue;
        }
        let prefix = if kind == "spacing" { "s" } else { "c" };
        let left = format!("{prefix}_bin_left");
        let right = format!("{prefix}_bin_right");
        let header = ["J", "L", "l_c", "n_up", left.as_str(), right.as_str(), "density"];
        let path = dir.join(format!("{kind}_histogram.csv"));
        let mut w = csv::Writer::from_path(&path).map_err(|e| Error::Validation(e.to_string()))?;
        w.write_record(header)?;
        for r in rows {
            w.write_record(&[
                r.coupling.to_string(),
                r.n_qubits.to_string(),
                r.l_c.map(|v| v.to_string()).unwrap_or_default(),
                r.n_up.to_string(),
                r.bin_left.to_string(),
                r.bin_right.to_string(),
                r.density.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }

    if let Some(map) = &results.map {
        let rows = map.values.iter().enumerate().flat_map(|(state_index, row)| {
            map.couplings
                .iter()
                .zip(row)
                .map(move |(&coupling, &value)| MapRow { state_index, coupling, value })
        });
        let path = dir.join("map.csv");
        write_csv(&path, rows, None)?;
        written.push(path);
    }

    let timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let path = dir.join("metadata.json");
    write_json(&path, &Sidecar { meta, timestamp_unix })?;
    written.push(path);
    Ok(written)
}
