//! CSV and metadata emission.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::config::ScenarioConfig;
use super::runner::{metric_names, simulate, RunOutput, RunSummary};
use crate::error::{Error, Result};

pub const SLOTS_FILE: &str = "slots.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const METADATA_FILE: &str = "metadata.json";

pub const SLOTS_HEADER: &str = "scenario,algorithm,trial,slot,metric,value";
pub const SUMMARY_HEADER: &str = "scenario,algorithm,metric,mean,ci_half_width,trials";

/// Output files of one run, created (and truncated) up front so an unwritable
/// destination fails before any simulation work.
struct OutputFiles {
    slots: (PathBuf, File),
    summary: (PathBuf, File),
    metadata: (PathBuf, File),
}

impl OutputFiles {
    fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let open = |name: &str| -> Result<(PathBuf, File)> {
            let path = dir.join(name);
            let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
            Ok((path, file))
        };
        Ok(OutputFiles {
            slots: open(SLOTS_FILE)?,
            summary: open(SUMMARY_FILE)?,
            metadata: open(METADATA_FILE)?,
        })
    }
}

/// Simulates `config` and, when `out_dir` is given, writes `slots.csv`,
/// `summary.csv` and `metadata.json` into it.
pub fn run_scenario(config: &ScenarioConfig, out_dir: Option<&Path>) -> Result<RunSummary> {
    config.validate()?;
    let files = out_dir.map(OutputFiles::create).transpose()?;
    let output = simulate(config)?;
    if let Some(files) = files {
        write_with(files.slots, |w| write_slots(&output, w))?;
        write_with(files.summary, |w| write_summary(&output.summary, w))?;
        write_with(files.metadata, |w| write_metadata(&output.config, w))?;
    }
    Ok(output.summary)
}

fn write_with(
    (path, file): (PathBuf, File),
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let mut w = BufWriter::new(file);
    body(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(&path, e))
}

pub fn write_slots<W: Write>(output: &RunOutput, w: &mut W) -> std::io::Result<()> {
    writeln!(w, "{SLOTS_HEADER}")?;
    let scenario = output.config.id();
    let metrics = metric_names(output.config.scenario);
    for alg in &output.series {
        let name = alg.algorithm.name();
        for (trial, series) in alg.trials.iter().enumerate() {
            let slots = series.first().map_or(0, Vec::len);
            for slot in 0..slots {
                for (metric, values) in metrics.iter().zip(series) {
                    writeln!(
                        w,
                        "{scenario},{name},{trial},{slot},{metric},{}",
                        values[slot]
                    )?;
                }
            }
        }
    }
    Ok(())
}

pub fn write_summary<W: Write>(summary: &RunSummary, w: &mut W) -> std::io::Result<()> {
    writeln!(w, "{SUMMARY_HEADER}")?;
    for r in &summary.rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.scenario,
            r.algorithm.name(),
            r.metric,
            r.mean,
            r.ci_half_width,
            r.trials
        )?;
    }
    Ok(())
}

/// The resolved config, which `load_config` reads back unchanged.
pub fn write_metadata<W: Write>(config: &ScenarioConfig, w: &mut W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, config)?;
    writeln!(w)
}
