//! Run configuration files.
//!
//! A configuration is a TOML document with `schema_version = 1`. Every
//! section is optional; omitted keys take the defaults below, which
//! reproduce the standard four-species benchmark.
//!
//! ```toml
//! schema_version = 1
//! network = "four_species"     # built-in name or path to a network file
//! seed = 0
//! out = "out"
//!
//! [solver]
//! points = [256]
//! extent = [1.0]
//! t_end = 1.0
//! dt_init = 0.00390625
//! dt_min = 1e-9
//! dt_max = 0.00390625
//! snapshot_interval = 0.0078125
//! # diffusivities = [1.0, 10.0, 0.1, 5.0]
//!
//! [initial]
//! kind = "bumps"               # bumps | constant | random
//! amplitude = 1.0
//! values = []                  # per-species levels for kind = "constant"
//!
//! [check]
//! budget = 100000
//! u_max = 100.0
//!
//! [proof]
//! k_scale = 1.0
//!
//! [sweep]
//! amplitudes = [1.0, 2.0, 4.0]
//!
//! [output]
//! plots = true
//! snapshots = "ends"           # none | ends | all
//! snapshot_format = "csv"      # csv | binary
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default = "default_network")]
    pub network: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub initial: InitialSection,
    #[serde(default)]
    pub check: CheckSection,
    #[serde(default)]
    pub proof: ProofSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub output: OutputSection,
}

fn default_network() -> String {
    "four_species".into()
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            network: default_network(),
            seed: 0,
            out: default_out(),
            solver: SolverSection::default(),
            initial: InitialSection::default(),
            check: CheckSection::default(),
            proof: ProofSection::default(),
            sweep: SweepSection::default(),
            output: OutputSection::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            ));
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub points: Vec<usize>,
    pub extent: Vec<f64>,
    pub t_end: f64,
    pub dt_init: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub snapshot_interval: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diffusivities: Option<Vec<f64>>,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            points: vec![256],
            extent: vec![1.0],
            t_end: 1.0,
            dt_init: 1.0 / 256.0,
            dt_min: 1e-9,
            dt_max: 1.0 / 256.0,
            snapshot_interval: 1.0 / 128.0,
            diffusivities: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    Bumps,
    Constant,
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialSection {
    pub kind: InitialKind,
    pub amplitude: f64,
    pub values: Vec<f64>,
}

impl Default for InitialSection {
    fn default() -> Self {
        Self {
            kind: InitialKind::Bumps,
            amplitude: 1.0,
            values: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckSection {
    pub budget: usize,
    pub u_max: f64,
}

impl Default for CheckSection {
    fn default() -> Self {
        Self {
            budget: 100_000,
            u_max: 100.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProofSection {
    /// Multiplies the drift constant `K = m^{3/2} M`.
    pub k_scale: f64,
}

impl Default for ProofSection {
    fn default() -> Self {
        Self { k_scale: 1.0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    /// One run per amplitude, everything else from the base config.
    pub amplitudes: Vec<f64>,
    /// Explicit runs, appended after the amplitude runs.
    pub runs: Vec<SweepRun>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRun {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnapshotMode {
    None,
    Ends,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnapshotFormat {
    Csv,
    Binary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub plots: bool,
    pub snapshots: SnapshotMode,
    pub snapshot_format: SnapshotFormat,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            plots: true,
            snapshots: SnapshotMode::Ends,
            snapshot_format: SnapshotFormat::Csv,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_the_default() {
        assert_eq!(RunConfig::from_toml("schema_version = 1").unwrap(), RunConfig::default());
    }

    #[test]
    fn round_trip() {
        let mut cfg = RunConfig::default();
        cfg.solver.diffusivities = Some(vec![1.0, 0.1]);
        cfg.sweep.amplitudes = vec![1.0, 2.0, 4.0];
        cfg.sweep.runs.push(SweepRun {
            points: Some(64),
            ..SweepRun::default()
        });
        cfg.initial.kind = InitialKind::Constant;
        cfg.initial.values = vec![2.0, 1.0];
        cfg.output.snapshots = SnapshotMode::All;
        let text = cfg.to_toml();
        let back = RunConfig::from_toml(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_toml(), text);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(RunConfig::from_toml("").is_err());
        assert!(RunConfig::from_toml("schema_version = 2").is_err());
        assert!(RunConfig::from_toml("schema_version = 1\nbogus = 3").is_err());
        assert!(RunConfig::from_toml("schema_version = 1\n[solver]\npoints = \"many\"").is_err());
    }
}
