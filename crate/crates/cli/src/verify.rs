//! The `verify` battery: randomized closed-form-vs-oracle checks, the
//! inverse/adjoint identity, full-basis expansion checks, and the
//! non-projector negative control.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vnpointer_core::analysis::global_phase_between;
use vnpointer_core::linalg::{wrap_angle, CMatrix};
use vnpointer_core::measurement::{
    apply_measurement_operator, max_amplitude_deviation, postselect, pps_pointer_state,
    ps_measure, EntangledState,
};
use vnpointer_core::oracle::{
    inverse_identity_check, momentum_space_evolve, operator_identity_check, OracleConfig,
};
use vnpointer_core::pointer::{gaussian_pointer, MeasurementConfig, PointerGrid};
use vnpointer_core::system::{Projector, SystemState};

use crate::error::{CliError, Result};
use crate::pipeline::{INVERSE_IDENTITY_TOL, ORACLE_DEVIATION_TOL, PHASE_TOL};

/// The negative control must disagree by at least this much.
pub const NEGATIVE_CONTROL_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub grid_n: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { trials: 200, seed: 20260810, grid_n: 1024 }
    }
}

/// One line of the battery output.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: &'static str,
    pub detail: String,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<CheckLine>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> SystemState {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if let Ok(state) = SystemState::normalized(v) {
            return state;
        }
    }
}

pub fn random_projector(rng: &mut ChaCha8Rng, dim: usize, rank: usize) -> Projector {
    loop {
        let span: Vec<Vec<Complex64>> = (0..rank)
            .map(|_| {
                (0..dim)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect()
            })
            .collect();
        if let Ok(p) = Projector::from_span(&span) {
            return p;
        }
    }
}

/// The grid the batteries run on: wide enough for |γ| ≤ 8 shifts of
/// unit-width packets.
pub fn battery_grid(n: usize) -> Result<PointerGrid> {
    PointerGrid::from_bounds(-32.0, 32.0, n).map_err(|e| CliError::from_core("verify grid", e))
}

#[derive(Debug, Clone, Copy)]
pub struct PsBatteryStats {
    pub trials: usize,
    pub max_deviation: f64,
    pub max_norm_drift: f64,
}

/// Randomized preselected scenarios through both routes: the closed-form
/// expansion and the momentum-space exponential.
pub fn ps_battery(trials: usize, seed: u64, grid: PointerGrid) -> Result<PsBatteryStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ocfg = OracleConfig::default();
    let mut max_deviation = 0.0f64;
    let mut max_norm_drift = 0.0f64;
    for trial in 0..trials {
        let dim = [2usize, 4, 8][trial % 3];
        let rank = rng.gen_range(1..dim);
        let a = random_projector(&mut rng, dim, rank);
        let psi = random_state(&mut rng, dim);
        let sigma = rng.gen_range(0.8..1.3);
        let gamma = rng.gen_range(-8.0..8.0);
        let phi = gaussian_pointer(grid, 0.0, sigma)
            .map_err(|e| CliError::from_core("battery pointer", e))?;
        let cfg = MeasurementConfig::with_gamma(gamma)
            .map_err(|e| CliError::from_core("battery config", e))?;

        let closed = ps_measure(&a, &psi, &phi, &cfg)
            .map_err(|e| CliError::from_core("battery closed form", e))?;
        let oracle = momentum_space_evolve(&a, &psi, &phi, &cfg, &ocfg)
            .map_err(|e| CliError::from_core("battery oracle", e))?;
        let deviation = max_amplitude_deviation(&closed, &oracle)
            .map_err(|e| CliError::from_core("battery comparison", e))?;
        max_deviation = max_deviation.max(deviation);
        max_norm_drift = max_norm_drift
            .max((oracle.total_norm_sq() - 1.0).abs())
            .max((closed.total_norm_sq() - 1.0).abs());
    }
    Ok(PsBatteryStats { trials, max_deviation, max_norm_drift })
}

#[derive(Debug, Clone, Copy)]
pub struct PpsBatteryStats {
    pub trials: usize,
    pub max_pointer_residual: f64,
    pub max_phase_error: f64,
}

/// Randomized admissible PPS scenarios: the closed-form pointer state
/// against oracle-evolve-then-postselect, including the Pancharatnam
/// phase extracted from the phase-stripped profile.
pub fn pps_battery(trials: usize, seed: u64, grid: PointerGrid) -> Result<PpsBatteryStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ocfg = OracleConfig::default();
    let mut max_pointer_residual = 0.0f64;
    let mut max_phase_error = 0.0f64;
    for trial in 0..trials {
        let dim = [2usize, 4, 8][trial % 3];
        let rank = rng.gen_range(1..dim);
        let a = random_projector(&mut rng, dim, rank);
        let pre = random_state(&mut rng, dim);
        // Admissible postselection, kept away from near-orthogonality so
        // the comparison is conditioned at the tolerance we assert.
        let post = loop {
            let candidate = random_state(&mut rng, dim);
            if candidate.inner(&pre).expect("dims match").norm() > 0.1 {
                break candidate;
            }
        };
        let sigma = rng.gen_range(0.8..1.3);
        let gamma = rng.gen_range(-8.0..8.0);
        let phi = gaussian_pointer(grid, 0.0, sigma)
            .map_err(|e| CliError::from_core("battery pointer", e))?;
        let cfg = MeasurementConfig::with_gamma(gamma)
            .map_err(|e| CliError::from_core("battery config", e))?;

        let closed = pps_pointer_state(&a, &pre, &post, &phi, &cfg)
            .map_err(|e| CliError::from_core("battery pps", e))?;
        let evolved = momentum_space_evolve(&a, &pre, &phi, &cfg, &ocfg)
            .map_err(|e| CliError::from_core("battery oracle", e))?;
        let (oracle_pointer, _) = postselect(&evolved, &post)
            .map_err(|e| CliError::from_core("battery postselection", e))?;

        let (theta, residual) = global_phase_between(&closed.pointer, &oracle_pointer)
            .map_err(|e| CliError::from_core("battery phase", e))?;
        let stripped = closed.pointer.with_phase(-closed.report.phase_chi);
        let (chi_angle, _) = global_phase_between(&stripped, &oracle_pointer)
            .map_err(|e| CliError::from_core("battery phase", e))?;
        let phase_error = wrap_angle(theta)
            .abs()
            .max(wrap_angle(chi_angle - closed.report.phase_chi).abs());

        max_pointer_residual = max_pointer_residual.max(residual);
        max_phase_error = max_phase_error.max(phase_error);
    }
    Ok(PpsBatteryStats { trials, max_pointer_residual, max_phase_error })
}

/// Inverse/adjoint identity over randomized projectors and strengths.
pub fn inverse_battery(trials: usize, seed: u64, grid: PointerGrid) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for trial in 0..trials {
        let dim = [2usize, 4, 8][trial % 3];
        let rank = rng.gen_range(1..dim);
        let a = random_projector(&mut rng, dim, rank);
        let gamma = rng.gen_range(-8.0..8.0);
        let cfg = MeasurementConfig::with_gamma(gamma)
            .map_err(|e| CliError::from_core("battery config", e))?;
        let deviation = inverse_identity_check(&a, &cfg, &grid)
            .map_err(|e| CliError::from_core("inverse identity", e))?;
        worst = worst.max(deviation);
    }
    Ok(worst)
}

/// Exhaustive product-basis expansion checks on small systems.
pub fn basis_expansion_checks() -> Result<f64> {
    let grid = PointerGrid::from_bounds(-8.0, 8.0, 128)
        .map_err(|e| CliError::from_core("basis-check grid", e))?;
    let ocfg = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for (dim, rank, gamma) in [(2usize, 1usize, 4.0f64), (2, 1, -2.5), (4, 2, 2.0)] {
        let a = random_projector(&mut rng, dim, rank);
        let cfg = MeasurementConfig::with_gamma(gamma)
            .map_err(|e| CliError::from_core("basis-check config", e))?;
        let deviation = operator_identity_check(&a, &cfg, &grid, &ocfg)
            .map_err(|e| CliError::from_core("basis check", e))?;
        worst = worst.max(deviation);
    }
    // Degenerate ranks: the zero and identity projectors.
    let cfg = MeasurementConfig::with_gamma(3.0)
        .map_err(|e| CliError::from_core("basis-check config", e))?;
    for a in [Projector::zero(2), Projector::identity(2)] {
        let deviation = operator_identity_check(&a, &cfg, &grid, &ocfg)
            .map_err(|e| CliError::from_core("basis check", e))?;
        worst = worst.max(deviation);
    }
    Ok(worst)
}

/// A Hermitian coupling with spectrum {0.5, 0.25} fed through both routes:
/// the oracle exponentiates it faithfully, the expansion assumes
/// idempotency, and they must disagree, proving the oracle is not a
/// restatement of the closed form.
pub fn negative_control_deviation(grid: PointerGrid) -> Result<f64> {
    let m = CMatrix::from_rows(vec![
        vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)],
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.25, 0.0)],
    ])
    .map_err(|e| CliError::from_core("negative control", e))?;
    let fake = Projector::new_unchecked(m);
    let fs = std::f64::consts::FRAC_1_SQRT_2;
    let psi = SystemState::new(vec![Complex64::new(fs, 0.0), Complex64::new(fs, 0.0)])
        .map_err(|e| CliError::from_core("negative control", e))?;
    let phi = gaussian_pointer(grid, 0.0, 1.0)
        .map_err(|e| CliError::from_core("negative control", e))?;
    let cfg = MeasurementConfig::with_gamma(2.0)
        .map_err(|e| CliError::from_core("negative control", e))?;
    let oracle = momentum_space_evolve(&fake, &psi, &phi, &cfg, &OracleConfig::default())
        .map_err(|e| CliError::from_core("negative control oracle", e))?;
    let closed =
        apply_measurement_operator(&fake, &EntangledState::product(&psi, &phi), cfg.gamma)
            .map_err(|e| CliError::from_core("negative control expansion", e))?;
    max_amplitude_deviation(&oracle, &closed)
        .map_err(|e| CliError::from_core("negative control comparison", e))
}

/// Run the whole battery and collect one pass/fail line per check.
pub fn run_verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    let grid = battery_grid(opts.grid_n)?;
    let mut checks = Vec::new();

    let ps = ps_battery(opts.trials, opts.seed, grid)?;
    checks.push(CheckLine {
        name: "operator identity (closed form vs oracle)",
        detail: format!(
            "{} randomized cases (d in {{2,4,8}}, rank 1..d-1, |gamma| <= 8): \
             max per-amplitude deviation {:.3e} (tolerance {ORACLE_DEVIATION_TOL:.0e})",
            ps.trials, ps.max_deviation
        ),
        pass: ps.max_deviation <= ORACLE_DEVIATION_TOL,
    });
    checks.push(CheckLine {
        name: "evolution unitarity",
        detail: format!(
            "max |norm^2 - 1| across both routes {:.3e} (tolerance {ORACLE_DEVIATION_TOL:.0e})",
            ps.max_norm_drift
        ),
        pass: ps.max_norm_drift <= ORACLE_DEVIATION_TOL,
    });

    let basis = basis_expansion_checks()?;
    checks.push(CheckLine {
        name: "full product-basis expansion check",
        detail: format!(
            "max deviation {basis:.3e} over d=2 and d=4 projectors \
             (tolerance {ORACLE_DEVIATION_TOL:.0e})"
        ),
        pass: basis <= ORACLE_DEVIATION_TOL,
    });

    let inverse = inverse_battery((opts.trials / 4).max(8), opts.seed ^ 0xA5A5, grid)?;
    checks.push(CheckLine {
        name: "inverse/adjoint identity",
        detail: format!(
            "max recovery deviation {inverse:.3e} (tolerance {INVERSE_IDENTITY_TOL:.0e})"
        ),
        pass: inverse <= INVERSE_IDENTITY_TOL,
    });

    let pps = pps_battery((opts.trials / 2).max(8), opts.seed ^ 0x5A5A, grid)?;
    checks.push(CheckLine {
        name: "postselected pointer vs oracle",
        detail: format!(
            "{} randomized cases: max per-sample residual {:.3e} \
             (tolerance {ORACLE_DEVIATION_TOL:.0e}), max phase error {:.3e} rad \
             (tolerance {PHASE_TOL:.0e})",
            pps.trials, pps.max_pointer_residual, pps.max_phase_error
        ),
        pass: pps.max_pointer_residual <= ORACLE_DEVIATION_TOL
            && pps.max_phase_error <= PHASE_TOL,
    });

    let control = negative_control_deviation(grid)?;
    checks.push(CheckLine {
        name: "negative control (non-projector coupling)",
        detail: format!(
            "deviation {control:.3e} (must exceed {NEGATIVE_CONTROL_FLOOR:.0e}; \
             agreement would mean the oracle is not independent)"
        ),
        pass: control > NEGATIVE_CONTROL_FLOOR,
    });

    Ok(VerifyReport { checks })
}
