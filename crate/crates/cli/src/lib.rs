//! Configuration-driven reproduction runs for the `superatom` models.
//!
//! A run is: parse a TOML scenario, validate it completely, convert every
//! frequency to internal angular units, run the scenario, and write CSV
//! tables, `*.plotspec` hints, `summary.json` and `meta.json`.

pub mod config;
pub mod error;
pub mod output;
pub mod report;
pub mod scenarios;

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use config::{Overrides, ScenarioConfig};
use error::CliResult;
use output::RunOutput;

/// Validate and run a parsed configuration without writing anything.
pub fn run(cfg: &ScenarioConfig) -> CliResult<RunOutput> {
    let warnings = cfg.validate()?;
    let internal = cfg.to_internal();
    let mut out = scenarios::run(&internal, cfg.unit.factor())?;
    let mut all = warnings;
    all.append(&mut out.warnings);
    out.warnings = Vec::new();
    for w in all {
        out.warn(w);
    }
    Ok(out)
}

pub fn default_out_dir(cfg: &ScenarioConfig) -> PathBuf {
    Path::new("out").join(cfg.scenario.name())
}

pub struct Executed {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub output: RunOutput,
}

/// Load `path`, apply overrides, run and write outputs.
pub fn execute(path: &Path, overrides: &Overrides) -> CliResult<Executed> {
    let mut cfg = ScenarioConfig::load(path)?;
    cfg.apply(overrides);
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
    let clock = Instant::now();
    let output = run(&cfg)?;
    let dir = cfg.out.clone().unwrap_or_else(|| default_out_dir(&cfg));
    let files = output::write_outputs(&dir, &cfg, &output, started, clock.elapsed().as_secs_f64())?;
    Ok(Executed { dir, files, output })
}
