//! Scenario execution: the PS pipeline, the optional PPS pipeline, the
//! built-in oracle cross-checks, and the compare and sweep drivers.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use vnpointer_core::analysis::{global_phase_between, interference_report, momentum_shift};
use vnpointer_core::linalg::wrap_angle;
use vnpointer_core::measurement::{
    max_amplitude_deviation, postselect, pps_pointer_density, pps_pointer_state,
    ps_density_decomposition, ps_measure, DensityDecomposition,
};
use vnpointer_core::oracle::{inverse_identity_check, momentum_space_evolve, OracleConfig};
use vnpointer_core::pointer::{momentum_expectation, probability_density};

use crate::artifacts::{self, SweepRow};
use crate::error::{CliError, Result};
use crate::scenario::{ArtifactKind, BuiltScenario, Scenario};

/// Closed form and oracle must agree per amplitude within this bound.
pub const ORACLE_DEVIATION_TOL: f64 = 1e-9;
/// Forward-then-inverse expansion must recover states within this bound.
pub const INVERSE_IDENTITY_TOL: f64 = 1e-10;
/// PS cross-term residual bound (the no-interference contract).
pub const PS_CROSS_TOL: f64 = 1e-10;
/// PPS density components must reproduce |Ψ|² within this bound.
pub const DENSITY_CONSISTENCY_TOL: f64 = 1e-12;
/// Extracted global phases must match χ within this bound.
pub const PHASE_TOL: f64 = 1e-9;

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Everything `run` reports for the preselected pipeline.
#[derive(Debug, Clone, Serialize)]
pub struct PsSection {
    pub expectation: f64,
    pub branch_weight_unshifted: f64,
    pub branch_weight_shifted: f64,
    pub cross_l1: f64,
    pub cross_signed: f64,
    pub max_abs_cross: f64,
    pub momentum_before: f64,
    pub momentum_after: f64,
    pub momentum_shift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inverse_identity_deviation: Option<f64>,
}

/// Everything `run` reports for the postselected pipeline.
#[derive(Debug, Clone, Serialize)]
pub struct PpsSection {
    pub weak_value: [f64; 2],
    pub overlap: [f64; 2],
    pub phase_chi: f64,
    pub normalization: f64,
    pub postselection_probability: f64,
    pub shifted_overlap: [f64; 2],
    pub branch_weight_unshifted: f64,
    pub branch_weight_shifted: f64,
    pub cross_l1: f64,
    pub cross_signed: f64,
    pub max_abs_cross: f64,
    pub momentum_after: f64,
    pub momentum_shift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_pointer_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_phase_deviation: Option<f64>,
}

/// The single JSON report a run emits.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub scenario: Scenario,
    pub ps: PsSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pps: Option<PpsSection>,
}

/// Densities computed alongside the report (for CSV artifacts).
pub struct ComputedDensities {
    pub ps: DensityDecomposition,
    pub pps: Option<DensityDecomposition>,
}

/// Run every computation a scenario selects and self-check the results.
/// Writes nothing.
pub fn compute_run(scenario: &Scenario) -> Result<(RunReport, ComputedDensities)> {
    let built = scenario.build()?;
    let outputs = scenario.effective_outputs();
    let run_oracle = outputs.contains(&ArtifactKind::OracleCheck);
    let BuiltScenario { projector, preselection, postselection, grid: _, pointer, config } =
        &built;

    // Preselected pipeline.
    let joint = ps_measure(projector, preselection, pointer, config)
        .map_err(|e| CliError::from_core("ps pipeline", e))?;
    let ps_parts = ps_density_decomposition(projector, preselection, pointer, config)
        .map_err(|e| CliError::from_core("ps density", e))?;
    let ps_report = interference_report(&ps_parts)
        .map_err(|e| CliError::from_core("ps interference report", e))?;
    if ps_report.max_abs_cross > PS_CROSS_TOL {
        return Err(CliError::ToleranceBreach(format!(
            "PS cross-term residual {:.3e} exceeds {PS_CROSS_TOL:.0e}; idempotency forbids \
             PS interference",
            ps_report.max_abs_cross
        )));
    }

    let momentum_before = momentum_expectation(pointer, config.hbar);
    let momentum_after = momentum_shift(pointer, &joint, config.hbar)
        .map_err(|e| CliError::from_core("ps momentum", e))?
        + momentum_before;

    let mut oracle_deviation = None;
    let mut inverse_identity_deviation = None;
    let mut oracle_joint = None;
    if run_oracle {
        let ocfg = OracleConfig::default();
        let evolved = momentum_space_evolve(projector, preselection, pointer, config, &ocfg)
            .map_err(|e| CliError::from_core("oracle evolution", e))?;
        let deviation = max_amplitude_deviation(&joint, &evolved)
            .map_err(|e| CliError::from_core("oracle comparison", e))?;
        if deviation > ORACLE_DEVIATION_TOL {
            return Err(CliError::ToleranceBreach(format!(
                "closed form and oracle disagree by {deviation:.3e} per amplitude \
                 (tolerance {ORACLE_DEVIATION_TOL:.0e})"
            )));
        }
        let inverse = inverse_identity_check(projector, config, pointer.grid())
            .map_err(|e| CliError::from_core("inverse identity", e))?;
        if inverse > INVERSE_IDENTITY_TOL {
            return Err(CliError::ToleranceBreach(format!(
                "inverse/adjoint identity residual {inverse:.3e} exceeds \
                 {INVERSE_IDENTITY_TOL:.0e}"
            )));
        }
        oracle_deviation = Some(deviation);
        inverse_identity_deviation = Some(inverse);
        oracle_joint = Some(evolved);
    }

    let expectation = ps_parts.weak_value.re;
    let ps_section = PsSection {
        expectation,
        branch_weight_unshifted: 1.0 - expectation,
        branch_weight_shifted: expectation,
        cross_l1: ps_report.cross_l1,
        cross_signed: ps_report.cross_signed,
        max_abs_cross: ps_report.max_abs_cross,
        momentum_before,
        momentum_after,
        momentum_shift: momentum_after - momentum_before,
        oracle_deviation,
        inverse_identity_deviation,
    };

    // Postselected pipeline.
    let mut pps_section = None;
    let mut pps_parts_out = None;
    if let Some(post) = postselection {
        let result = pps_pointer_state(projector, preselection, post, pointer, config)
            .map_err(|e| CliError::from_core("pps pipeline", e))?;
        let parts = pps_pointer_density(projector, preselection, post, pointer, config)
            .map_err(|e| CliError::from_core("pps density", e))?;

        // Closed-form density vs |Ψ|² from the state route.
        let density = probability_density(&result.pointer);
        let consistency = parts
            .total
            .iter()
            .zip(&density)
            .map(|(t, d)| (t - d).abs())
            .fold(0.0f64, f64::max);
        if consistency > DENSITY_CONSISTENCY_TOL {
            return Err(CliError::ToleranceBreach(format!(
                "PPS density decomposition deviates from |pointer|^2 by {consistency:.3e} \
                 (tolerance {DENSITY_CONSISTENCY_TOL:.0e})"
            )));
        }

        let pps_report = interference_report(&parts)
            .map_err(|e| CliError::from_core("pps interference report", e))?;
        let pps_momentum = momentum_shift(pointer, &result.pointer, config.hbar)
            .map_err(|e| CliError::from_core("pps momentum", e))?;

        let mut oracle_pointer_residual = None;
        let mut oracle_phase_deviation = None;
        if let Some(evolved) = &oracle_joint {
            let (oracle_pointer, _) = postselect(evolved, post)
                .map_err(|e| CliError::from_core("oracle postselection", e))?;
            let (theta, residual) = global_phase_between(&result.pointer, &oracle_pointer)
                .map_err(|e| CliError::from_core("oracle phase comparison", e))?;
            if residual > ORACLE_DEVIATION_TOL {
                return Err(CliError::ToleranceBreach(format!(
                    "PPS pointer and oracle postselection disagree by {residual:.3e} \
                     per sample (tolerance {ORACLE_DEVIATION_TOL:.0e})"
                )));
            }
            // Both routes carry the same Pancharatnam factor, so the
            // leftover phase must be zero; and the phase-stripped pointer
            // must sit exactly chi away from the oracle's.
            let stripped = result.pointer.with_phase(-result.report.phase_chi);
            let (chi_angle, _) = global_phase_between(&stripped, &oracle_pointer)
                .map_err(|e| CliError::from_core("oracle phase extraction", e))?;
            let phase_dev = wrap_angle(theta)
                .abs()
                .max(wrap_angle(chi_angle - result.report.phase_chi).abs());
            if phase_dev > PHASE_TOL {
                return Err(CliError::ToleranceBreach(format!(
                    "Pancharatnam phase mismatch {phase_dev:.3e} rad against the oracle \
                     (tolerance {PHASE_TOL:.0e})"
                )));
            }
            oracle_pointer_residual = Some(residual);
            oracle_phase_deviation = Some(phase_dev);
        }

        let n_sq = result.report.normalization * result.report.normalization;
        let one = Complex64::new(1.0, 0.0);
        pps_section = Some(PpsSection {
            weak_value: pair(result.report.weak_value),
            overlap: pair(result.report.overlap),
            phase_chi: result.report.phase_chi,
            normalization: result.report.normalization,
            postselection_probability: result.postselection_probability,
            shifted_overlap: pair(parts.shifted_overlap),
            branch_weight_unshifted: (one - result.report.weak_value).norm_sqr() / n_sq,
            branch_weight_shifted: result.report.weak_value.norm_sqr() / n_sq,
            cross_l1: pps_report.cross_l1,
            cross_signed: pps_report.cross_signed,
            max_abs_cross: pps_report.max_abs_cross,
            momentum_after: momentum_before + pps_momentum,
            momentum_shift: pps_momentum,
            oracle_pointer_residual,
            oracle_phase_deviation,
        });
        pps_parts_out = Some(parts);
    }

    let report = RunReport { scenario: scenario.clone(), ps: ps_section, pps: pps_section };
    Ok((report, ComputedDensities { ps: ps_parts, pps: pps_parts_out }))
}

/// Run a scenario and write its artifacts. Returns the report and the list
/// of files written.
pub fn run_scenario(scenario: &Scenario, out_dir: &Path) -> Result<(RunReport, Vec<PathBuf>)> {
    let (report, densities) = compute_run(scenario)?;
    let outputs = scenario.effective_outputs();
    let mut written = Vec::new();
    if outputs.contains(&ArtifactKind::PsDensity) {
        written.push(artifacts::write_file(
            out_dir,
            "ps_density.csv",
            &artifacts::density_csv(&densities.ps),
        )?);
    }
    if let (true, Some(parts)) = (outputs.contains(&ArtifactKind::PpsDensity), &densities.pps) {
        written.push(artifacts::write_file(
            out_dir,
            "pps_density.csv",
            &artifacts::density_csv(parts),
        )?);
    }
    written.push(artifacts::write_file(out_dir, "report.json", &artifacts::json_string(&report))?);
    Ok((report, written))
}

/// Side-by-side deltas between the PS and PPS pipelines of one scenario.
#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub scenario: Scenario,
    pub ps_cross_l1: f64,
    pub pps_cross_l1: f64,
    pub ps_momentum_shift: f64,
    pub pps_momentum_shift: f64,
    pub ps_branch_weights: [f64; 2],
    pub pps_branch_weights: [f64; 2],
    pub pps_cross_signed: f64,
    pub weak_value: [f64; 2],
    pub postselection_probability: f64,
}

/// Run both pipelines on the same configuration and tabulate what
/// postselection changed.
pub fn compare_scenario(scenario: &Scenario, out_dir: &Path) -> Result<(CompareReport, Vec<PathBuf>)> {
    if scenario.postselection.is_none() {
        return Err(CliError::Validation(
            "compare requires a scenario with a postselection".into(),
        ));
    }
    let (report, densities) = compute_run(scenario)?;
    let pps = report.pps.as_ref().expect("postselection checked above");
    let pps_parts = densities.pps.as_ref().expect("postselection checked above");

    let compare = CompareReport {
        scenario: scenario.clone(),
        ps_cross_l1: report.ps.cross_l1,
        pps_cross_l1: pps.cross_l1,
        ps_momentum_shift: report.ps.momentum_shift,
        pps_momentum_shift: pps.momentum_shift,
        ps_branch_weights: [report.ps.branch_weight_unshifted, report.ps.branch_weight_shifted],
        pps_branch_weights: [pps.branch_weight_unshifted, pps.branch_weight_shifted],
        pps_cross_signed: pps.cross_signed,
        weak_value: pps.weak_value,
        postselection_probability: pps.postselection_probability,
    };
    let written = vec![
        artifacts::write_file(
            out_dir,
            "compare_density.csv",
            &artifacts::compare_csv(&densities.ps.grid, &densities.ps.total, &pps_parts.total),
        )?,
        artifacts::write_file(out_dir, "compare.json", &artifacts::json_string(&compare))?,
    ];
    Ok((compare, written))
}

/// Scalar scenario fields a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepParam {
    Gamma,
    Sigma,
    Center,
    Hbar,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Gamma => "gamma",
            SweepParam::Sigma => "sigma",
            SweepParam::Center => "center",
            SweepParam::Hbar => "hbar",
        }
    }

    fn apply(self, scenario: &mut Scenario, value: f64) {
        match self {
            SweepParam::Gamma => scenario.gamma = value,
            SweepParam::Sigma => scenario.pointer.sigma = value,
            SweepParam::Center => scenario.pointer.center = value,
            SweepParam::Hbar => scenario.hbar = value,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    pub value: f64,
    pub directory: String,
    pub ps_cross_l1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pps_cross_l1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pps_momentum_shift: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub postselection_probability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_value: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub parameter: String,
    pub entries: Vec<SweepEntry>,
}

/// Re-run a scenario once per parameter value; every entry gets its own
/// artifact directory, plus a combined summary CSV and JSON at the top.
pub fn sweep_scenario(
    scenario: &Scenario,
    param: SweepParam,
    values: &[f64],
    out_dir: &Path,
) -> Result<(SweepReport, Vec<PathBuf>)> {
    if values.is_empty() {
        return Err(CliError::Validation("sweep requires at least one value".into()));
    }
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut written = Vec::new();
    for (index, &value) in values.iter().enumerate() {
        let mut variant = scenario.clone();
        param.apply(&mut variant, value);
        let directory = format!("{}_{index:02}_{value}", param.name());
        let (report, files) = run_scenario(&variant, &out_dir.join(&directory))
            .map_err(|e| match e {
                CliError::Validation(msg) => {
                    CliError::Validation(format!("{}={value}: {msg}", param.name()))
                }
                CliError::Physics(msg) => {
                    CliError::Physics(format!("{}={value}: {msg}", param.name()))
                }
                other => other,
            })?;
        written.extend(files);
        rows.push(SweepRow {
            value,
            ps_cross_l1: report.ps.cross_l1,
            pps_cross_l1: report.pps.as_ref().map(|p| p.cross_l1),
            pps_momentum_shift: report.pps.as_ref().map(|p| p.momentum_shift),
            postselection_probability: report
                .pps
                .as_ref()
                .map(|p| p.postselection_probability),
            weak_value: report.pps.as_ref().map(|p| p.weak_value),
            normalization: report.pps.as_ref().map(|p| p.normalization),
        });
        entries.push(SweepEntry {
            value,
            directory,
            ps_cross_l1: report.ps.cross_l1,
            pps_cross_l1: report.pps.as_ref().map(|p| p.cross_l1),
            pps_momentum_shift: report.pps.as_ref().map(|p| p.momentum_shift),
            postselection_probability: report
                .pps
                .as_ref()
                .map(|p| p.postselection_probability),
            weak_value: report.pps.as_ref().map(|p| p.weak_value),
            normalization: report.pps.as_ref().map(|p| p.normalization),
        });
    }
    let summary = SweepReport { parameter: param.name().to_string(), entries };
    written.push(artifacts::write_file(
        out_dir,
        "sweep.csv",
        &artifacts::sweep_csv(param.name(), &rows),
    )?);
    written.push(artifacts::write_file(out_dir, "sweep.json", &artifacts::json_string(&summary))?);
    Ok((summary, written))
}
