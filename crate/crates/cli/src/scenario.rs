//! Declarative scenario files.
//!
//! A scenario is a single JSON document. Complex numbers are `[re, im]`
//! pairs throughout:
//!
//! ```json
//! {
//!   "system_dim": 2,
//!   "projector": { "from_state": [[1.0, 0.0], [0.0, 0.0]] },
//!   "preselection": [[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]],
//!   "postselection": [[0.9238795325112867, 0.0], [-0.3826834323650898, 0.0]],
//!   "pointer": { "q_min": -20.0, "q_max": 20.0, "n": 1024, "sigma": 1.0, "center": 0.0 },
//!   "gamma": 2.0,
//!   "hbar": 1.0,
//!   "outputs": ["ps_density", "pps_density", "weak_report", "oracle_check", "momentum_shift"]
//! }
//! ```
//!
//! `projector` is either `{"from_state": [...]}` (rank-1 onto that state)
//! or `{"matrix": [[...], ...]}` (explicit d×d matrix, validated for
//! Hermiticity, idempotency, and a {0, 1} spectrum). `postselection` is
//! optional; without it only the preselected pipeline runs. State vectors
//! must be normalized to within `1e-8`; they are renormalized exactly when
//! the scenario is built. An empty or missing `outputs` list selects every
//! artifact applicable to the scenario.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use vnpointer_core::linalg::CMatrix;
use vnpointer_core::pointer::{
    gaussian_pointer, MeasurementConfig, PointerGrid, PointerWavefunction,
};
use vnpointer_core::system::{Projector, SystemState};

use crate::error::{CliError, Result};

/// Complex number as a `[re, im]` pair.
pub type ComplexPair = [f64; 2];

/// Norm tolerance for state vectors as they appear in a file.
pub const LOAD_NORM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub system_dim: usize,
    pub projector: ProjectorSpec,
    pub preselection: Vec<ComplexPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub postselection: Option<Vec<ComplexPair>>,
    pub pointer: PointerSpec,
    pub gamma: f64,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
    /// Artifact selectors; empty means "everything applicable".
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<ArtifactKind>,
}

fn default_hbar() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectorSpec {
    /// Rank-1 projector onto the given normalized state.
    FromState(Vec<ComplexPair>),
    /// Explicit d×d complex matrix.
    Matrix(Vec<Vec<ComplexPair>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointerSpec {
    pub q_min: f64,
    pub q_max: f64,
    pub n: usize,
    pub sigma: f64,
    pub center: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtifactKind {
    PsDensity,
    PpsDensity,
    WeakReport,
    OracleCheck,
    MomentumShift,
}

impl ArtifactKind {
    pub fn requires_postselection(self) -> bool {
        matches!(self, ArtifactKind::PpsDensity | ArtifactKind::WeakReport)
    }

    pub fn name(self) -> &'static str {
        match self {
            ArtifactKind::PsDensity => "ps_density",
            ArtifactKind::PpsDensity => "pps_density",
            ArtifactKind::WeakReport => "weak_report",
            ArtifactKind::OracleCheck => "oracle_check",
            ArtifactKind::MomentumShift => "momentum_shift",
        }
    }
}

/// Core objects assembled from a validated scenario.
#[derive(Debug)]
pub struct BuiltScenario {
    pub projector: Projector,
    pub preselection: SystemState,
    pub postselection: Option<SystemState>,
    pub grid: PointerGrid,
    pub pointer: PointerWavefunction,
    pub config: MeasurementConfig,
}

impl Scenario {
    /// Parse and validate a scenario file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let scenario: Scenario = serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        scenario.validate()?;
        Ok(scenario)
    }

    /// Canonical JSON serialization (what `--dump-config` writes).
    pub fn dump_string(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("scenario serialization cannot fail");
        text.push('\n');
        text
    }

    /// Structural validation with field-path error messages. Does not
    /// touch the stored values, so load → dump → load is lossless.
    pub fn validate(&self) -> Result<()> {
        let d = self.system_dim;
        if d < 2 {
            return Err(CliError::Validation(format!(
                "system_dim: must be at least 2, got {d}"
            )));
        }
        check_state_vector("preselection", &self.preselection, d)?;
        if let Some(post) = &self.postselection {
            check_state_vector("postselection", post, d)?;
        }
        match &self.projector {
            ProjectorSpec::FromState(v) => check_state_vector("projector.from_state", v, d)?,
            ProjectorSpec::Matrix(rows) => {
                if rows.len() != d {
                    return Err(CliError::Validation(format!(
                        "projector.matrix: expected {d} rows, got {}",
                        rows.len()
                    )));
                }
                for (i, row) in rows.iter().enumerate() {
                    if row.len() != d {
                        return Err(CliError::Validation(format!(
                            "projector.matrix[{i}]: expected {d} columns, got {}",
                            row.len()
                        )));
                    }
                    for (j, entry) in row.iter().enumerate() {
                        if !entry[0].is_finite() || !entry[1].is_finite() {
                            return Err(CliError::Validation(format!(
                                "projector.matrix[{i}][{j}]: non-finite entry"
                            )));
                        }
                    }
                }
            }
        }
        let p = &self.pointer;
        if !p.q_max.is_finite() || !p.q_min.is_finite() || p.q_max <= p.q_min {
            return Err(CliError::Validation(format!(
                "pointer: empty extent [{}, {})",
                p.q_min, p.q_max
            )));
        }
        if !p.n.is_power_of_two() || p.n < PointerGrid::MIN_SAMPLES {
            return Err(CliError::Validation(format!(
                "pointer.n: must be a power of two >= {}, got {}",
                PointerGrid::MIN_SAMPLES,
                p.n
            )));
        }
        if !p.sigma.is_finite() || p.sigma <= 0.0 {
            return Err(CliError::Validation(format!(
                "pointer.sigma: must be positive, got {}",
                p.sigma
            )));
        }
        if !p.center.is_finite() {
            return Err(CliError::Validation("pointer.center: non-finite".into()));
        }
        if !self.gamma.is_finite() {
            return Err(CliError::Validation(format!(
                "gamma: must be finite, got {}",
                self.gamma
            )));
        }
        if !self.hbar.is_finite() || self.hbar <= 0.0 {
            return Err(CliError::Validation(format!(
                "hbar: must be positive, got {}",
                self.hbar
            )));
        }
        if self.postselection.is_none() {
            if let Some(selector) =
                self.outputs.iter().find(|kind| kind.requires_postselection())
            {
                return Err(CliError::Validation(format!(
                    "outputs: '{}' requires a postselection, but the scenario has none; \
                     add a \"postselection\" state or drop the selector",
                    selector.name()
                )));
            }
        }
        Ok(())
    }

    /// The artifacts this run will produce: the explicit list, or every
    /// selector applicable to the scenario when the list is empty.
    pub fn effective_outputs(&self) -> Vec<ArtifactKind> {
        if !self.outputs.is_empty() {
            return self.outputs.clone();
        }
        let mut all = vec![ArtifactKind::PsDensity];
        if self.postselection.is_some() {
            all.push(ArtifactKind::PpsDensity);
            all.push(ArtifactKind::WeakReport);
        }
        all.push(ArtifactKind::OracleCheck);
        all.push(ArtifactKind::MomentumShift);
        all
    }

    /// Assemble the core objects (states renormalized exactly here).
    pub fn build(&self) -> Result<BuiltScenario> {
        self.validate()?;
        let preselection = SystemState::normalized(to_complex(&self.preselection))
            .map_err(|e| CliError::from_core("preselection", e))?;
        let postselection = self
            .postselection
            .as_ref()
            .map(|v| {
                SystemState::normalized(to_complex(v))
                    .map_err(|e| CliError::from_core("postselection", e))
            })
            .transpose()?;
        let projector = match &self.projector {
            ProjectorSpec::FromState(v) => {
                let state = SystemState::normalized(to_complex(v))
                    .map_err(|e| CliError::from_core("projector.from_state", e))?;
                Projector::from_state(&state)
            }
            ProjectorSpec::Matrix(rows) => {
                let matrix = CMatrix::from_rows(
                    rows.iter().map(|row| to_complex(row)).collect::<Vec<_>>(),
                )
                .map_err(|e| CliError::from_core("projector.matrix", e))?;
                Projector::new(matrix).map_err(|e| CliError::from_core("projector.matrix", e))?
            }
        };
        let grid = PointerGrid::from_bounds(self.pointer.q_min, self.pointer.q_max, self.pointer.n)
            .map_err(|e| CliError::from_core("pointer", e))?;
        let pointer = gaussian_pointer(grid, self.pointer.center, self.pointer.sigma)
            .map_err(|e| CliError::from_core("pointer", e))?;
        let config = MeasurementConfig::new(self.gamma, self.hbar)
            .map_err(|e| CliError::from_core("gamma/hbar", e))?;
        Ok(BuiltScenario { projector, preselection, postselection, grid, pointer, config })
    }
}

fn to_complex(pairs: &[ComplexPair]) -> Vec<Complex64> {
    pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

fn check_state_vector(field: &str, pairs: &[ComplexPair], dim: usize) -> Result<()> {
    if pairs.len() != dim {
        return Err(CliError::Validation(format!(
            "{field}: expected {dim} amplitudes, got {}",
            pairs.len()
        )));
    }
    let mut norm_sq = 0.0;
    for (i, pair) in pairs.iter().enumerate() {
        if !pair[0].is_finite() || !pair[1].is_finite() {
            return Err(CliError::Validation(format!("{field}[{i}]: non-finite amplitude")));
        }
        norm_sq += pair[0] * pair[0] + pair[1] * pair[1];
    }
    let norm = norm_sq.sqrt();
    if (norm - 1.0).abs() > LOAD_NORM_TOL {
        return Err(CliError::Validation(format!(
            "{field}: norm is {norm:.12}, expected 1 within {LOAD_NORM_TOL:.0e}"
        )));
    }
    Ok(())
}
