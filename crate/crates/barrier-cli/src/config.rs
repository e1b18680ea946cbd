//! Simulation config files: a versioned JSON schema mapped onto
//! `tdse::SimConfig`.
//!
//! Unknown fields are rejected so a typo fails loudly instead of silently
//! falling back to a default, and `schema_version` must match exactly.

use serde::Deserialize;

use barrier_times::tdse::{PacketSpec, Potential, RunMode, SimConfig, SimGrid};
use barrier_times::{Error, Result};

/// Schema revision this build reads.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    pub schema_version: u32,
    pub potential: PotentialFile,
    pub packet: PacketFile,
    pub grid: GridFile,
    pub dt: f64,
    pub t_max: f64,
    pub sample_every: usize,
    pub mode: ModeFile,
    #[serde(default)]
    pub snapshot_every: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialFile {
    pub height: f64,
    pub width: f64,
    pub mass: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketFile {
    pub center_momentum: f64,
    pub momentum_width: f64,
    pub center: f64,
    #[serde(default)]
    pub cutoff_delta: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub points: usize,
    pub x_min: f64,
    pub x_max: f64,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ModeFile {
    Single,
    ParityPlus,
    ParityMinus,
}

impl From<ModeFile> for RunMode {
    fn from(mode: ModeFile) -> Self {
        match mode {
            ModeFile::Single => RunMode::Single,
            ModeFile::ParityPlus => RunMode::ParityPlus,
            ModeFile::ParityMinus => RunMode::ParityMinus,
        }
    }
}

impl RunFile {
    /// Validate the envelope and build the simulation config (which then
    /// runs its own physical validation).
    pub fn into_sim_config(self) -> Result<SimConfig> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} not supported; this build reads version {}",
                self.schema_version, SCHEMA_VERSION
            )));
        }
        let potential =
            Potential::new(self.potential.height, self.potential.width, self.potential.mass)?;
        let config = SimConfig {
            potential,
            packet: PacketSpec {
                center_momentum: self.packet.center_momentum,
                momentum_width: self.packet.momentum_width,
                center: self.packet.center,
                cutoff_delta: self.packet.cutoff_delta,
            },
            grid: SimGrid {
                points: self.grid.points,
                x_min: self.grid.x_min,
                x_max: self.grid.x_max,
            },
            dt: self.dt,
            t_max: self.t_max,
            sample_every: self.sample_every,
            mode: self.mode.into(),
            snapshot_every: self.snapshot_every,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Parse a config file's text; JSON syntax or schema violations come back
/// as configuration errors (exit code 2) with serde's field naming intact.
pub fn parse_run_file(text: &str) -> Result<RunFile> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("config file: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn template() -> String {
        r#"{
            "schema_version": 1,
            "potential": {"height": 0.5, "width": 2.0, "mass": 1.0},
            "packet": {"center_momentum": 0.5, "momentum_width": 0.08, "center": -40.0},
            "grid": {"points": 1024, "x_min": -128.0, "x_max": 128.0},
            "dt": 0.1,
            "t_max": 40.0,
            "sample_every": 5,
            "mode": "single"
        }"#
        .to_string()
    }

    #[test]
    fn template_parses_and_validates() {
        let file = parse_run_file(&template()).unwrap();
        let config = file.into_sim_config().unwrap();
        assert_eq!(config.grid.points, 1024);
        assert!(matches!(config.mode, RunMode::Single));
        assert!(config.snapshot_every.is_none());
    }

    #[test]
    fn unknown_field_is_named_in_the_error() {
        let text = template().replace("\"dt\": 0.1", "\"dt\": 0.1, \"dtt\": 0.2");
        let err = parse_run_file(&text).unwrap_err();
        assert!(err.is_configuration());
        assert!(err.to_string().contains("dtt"), "{err}");
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let text = template().replace("\"schema_version\": 1", "\"schema_version\": 3");
        let err = parse_run_file(&text).unwrap().into_sim_config().unwrap_err();
        assert!(err.is_configuration());
        assert!(err.to_string().contains("version 1"), "{err}");
    }

    #[test]
    fn kebab_case_modes_parse() {
        for (name, mode) in [
            ("parity-plus", ModeFile::ParityPlus),
            ("parity-minus", ModeFile::ParityMinus),
        ] {
            let text = template().replace("\"single\"", &format!("\"{name}\""));
            assert_eq!(parse_run_file(&text).unwrap().mode, mode);
        }
    }
}
