//! Run configuration for the `propagate` command. The schema is strict:
//! unknown keys are rejected before anything executes.

use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagateConfig {
    pub grid: GridConfig,
    pub medium: MediumConfig,
    pub initial: InitialConfig,
    #[serde(default)]
    pub stepper: StepperSection,
    pub t_end: f64,
    pub output: OutputConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Nodes per axis of the periodic cube.
    pub n: usize,
    /// Box side length.
    pub length: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case", deny_unknown_fields)]
pub enum MediumConfig {
    /// eps = mu = 1 everywhere.
    Vacuum,
    /// eps = 1 + contrast * slab, mu = 1 / eps: uniform light velocity,
    /// varying impedance. The profile is a smooth periodic tanh slab.
    ImpedanceSlab { axis: usize, rise: f64, fall: f64, width: f64, contrast: f64 },
    /// eps = mu = 1 + contrast * slab: uniform impedance, varying velocity;
    /// the helicities stay decoupled.
    VelocitySlab { axis: usize, rise: f64, fall: f64, width: f64, contrast: f64 },
    /// eps = 1 + contrast * slab, mu = 1: both velocity and impedance vary.
    IndexSlab { axis: usize, rise: f64, fall: f64, width: f64, contrast: f64 },
    /// Raw per-node arrays, x fastest.
    Arrays { eps: Vec<f64>, mu: Vec<f64> },
    /// Raw arrays loaded from a JSON file: {"eps": [...], "mu": [...]}.
    ArraysFile { path: String },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialConfig {
    /// Lattice-locked monochromatic ring beam (exactly periodic).
    BesselRing { radius_sq: i64, mz: i64, m: i32, helicity: String },
    /// Positive-helicity projected Gaussian packet moving along +z.
    GaussianPacket { mz: i64, sigma: f64 },
    /// Load a previously written field file.
    FieldFile { path: String },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepperSection {
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_scheme")]
    pub scheme: String,
    #[serde(default = "default_diag_every")]
    pub diag_every: usize,
}

impl Default for StepperSection {
    fn default() -> Self {
        Self { dt: None, cfl: default_cfl(), scheme: default_scheme(), diag_every: default_diag_every() }
    }
}

fn default_cfl() -> f64 {
    0.5
}

fn default_scheme() -> String {
    "rk4_spectral".into()
}

fn default_diag_every() -> usize {
    10
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Diagnostics time-series CSV path.
    pub diagnostics: String,
    /// Write a field snapshot every this many steps (0 = none).
    #[serde(default)]
    pub snapshot_every: usize,
    #[serde(default)]
    pub snapshot_prefix: Option<String>,
    /// Optional final-field JSON path.
    #[serde(default)]
    pub final_field: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumArraysFile {
    pub eps: Vec<f64>,
    pub mu: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"{
            "grid": {"n": 8, "length": 6.0},
            "medium": {"profile": "vacuum"},
            "initial": {"type": "bessel_ring", "radius_sq": 25, "mz": 1, "m": 0, "helicity": "+"},
            "t_end": 0.1,
            "output": {"diagnostics": "d.csv"},
            "surprise": 1
        }"#;
        assert!(serde_json::from_str::<PropagateConfig>(text).is_err());
    }

    #[test]
    fn minimal_config_parses() {
        let text = r#"{
            "grid": {"n": 8, "length": 6.0},
            "medium": {"profile": "impedance_slab", "axis": 2, "rise": -1.0, "fall": 1.0, "width": 0.4, "contrast": 0.2},
            "initial": {"type": "gaussian_packet", "mz": 2, "sigma": 0.7},
            "t_end": 0.25,
            "output": {"diagnostics": "d.csv"}
        }"#;
        let cfg: PropagateConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.stepper.cfl, 0.5);
        assert_eq!(cfg.stepper.scheme, "rk4_spectral");
    }
}
