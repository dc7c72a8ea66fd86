//! Brute-force evolution oracle.
//!
//! Everything in [`crate::measurement`] leans on the algebraic collapse of
//! `e^{-iγÂp̂/ħ}` to `1 - Â + ÂŜ`. This module deliberately does not: it
//! diagonalizes `p̂` on the grid (exact for a periodic power-of-two grid),
//! exponentiates the coupling matrix `-iγpÂ/ħ` at every momentum sample by
//! scaling-and-squaring with a plain Taylor series, and transforms back.
//! No property of `Â` beyond linearity enters, in particular not its
//! spectrum, which is why a non-idempotent coupling makes the oracle and
//! the closed form visibly disagree (the negative control).
//!
//! Eigendecomposition is avoided on purpose: diagonalizing a projector
//! would sneak its `{0, 1}` spectrum back into the computation and weaken
//! the check.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
// With std the inherent f64 methods win and this import goes unused.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fft::{fft_in_place, Direction};
use crate::linalg::CMatrix;
use crate::measurement::{
    apply_inverse_measurement_operator, apply_measurement_operator, max_amplitude_deviation,
    EntangledState,
};
use crate::pointer::{MeasurementConfig, PointerGrid, PointerWavefunction, BOUNDARY_DECAY_RATIO};
use crate::system::{Projector, SystemState};

/// `e^{M} e^{-M}` must reproduce the identity within this bound.
pub const EXP_RESIDUAL_TOL: f64 = 1e-9;

/// Truncation and scaling controls for the matrix exponential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Stop the Taylor series once the next term's 1-norm drops below this.
    pub series_tolerance: f64,
    /// Halve the argument until its 1-norm is at or below this.
    pub scaling_threshold: f64,
}

impl OracleConfig {
    pub fn new(series_tolerance: f64, scaling_threshold: f64) -> Result<Self> {
        if !(series_tolerance > 0.0 && series_tolerance <= 1e-10) {
            return Err(Error::InvalidConfig(format!(
                "series tolerance must lie in (0, 1e-10], got {series_tolerance}"
            )));
        }
        if !(0.25..=1.0).contains(&scaling_threshold) {
            return Err(Error::InvalidConfig(format!(
                "scaling threshold must lie in [0.25, 1], got {scaling_threshold}"
            )));
        }
        Ok(Self { series_tolerance, scaling_threshold })
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { series_tolerance: 1e-14, scaling_threshold: 0.5 }
    }
}

/// Taylor series with scaling and squaring, no self-check.
fn exp_taylor(m: &CMatrix, cfg: &OracleConfig) -> Result<CMatrix> {
    let norm = m.one_norm();
    let squarings = if norm > cfg.scaling_threshold {
        (norm / cfg.scaling_threshold).log2().ceil() as u32
    } else {
        0
    };
    let scale = Complex64::new(0.5f64.powi(squarings as i32), 0.0);
    let scaled = m.scaled(scale);

    let mut sum = CMatrix::identity(m.dim());
    let mut term = CMatrix::identity(m.dim());
    let mut k = 0u32;
    loop {
        k += 1;
        if k > 128 {
            return Err(Error::NumericalDegeneracy(format!(
                "matrix exponential series did not converge below {} in 128 terms",
                cfg.series_tolerance
            )));
        }
        term = term.mul(&scaled).scaled(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
        if term.one_norm() <= cfg.series_tolerance {
            break;
        }
    }
    let mut result = sum;
    for _ in 0..squarings {
        result = result.mul(&result);
    }
    Ok(result)
}

/// Matrix exponential `e^{M}` by scaling-and-squaring Taylor summation.
///
/// Self-checks the result: `e^{M} e^{-M}` must be the identity within
/// [`EXP_RESIDUAL_TOL`].
pub fn matrix_exponential(m: &CMatrix, cfg: &OracleConfig) -> Result<CMatrix> {
    if !m.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entries".into()));
    }
    let forward = exp_taylor(m, cfg)?;
    let backward = exp_taylor(&m.scaled(Complex64::new(-1.0, 0.0)), cfg)?;
    let residual = forward
        .mul(&backward)
        .sub(&CMatrix::identity(m.dim()))
        .max_entry_norm();
    if residual > EXP_RESIDUAL_TOL {
        return Err(Error::NumericalDegeneracy(format!(
            "exp(M) exp(-M) deviates from the identity by {residual:.3e}"
        )));
    }
    Ok(forward)
}

/// The per-momentum-sample evolution matrices `exp(-iγ p_m Â / ħ)` for
/// every spectral bin of the grid.
fn momentum_exponentials(
    a: &Projector,
    cfg: &MeasurementConfig,
    grid: &PointerGrid,
    ocfg: &OracleConfig,
) -> Result<Vec<CMatrix>> {
    let mut table = Vec::with_capacity(grid.len());
    for m in 0..grid.len() {
        let p = cfg.hbar * grid.wavenumber(m);
        let exponent = a.matrix().scaled(Complex64::new(0.0, -cfg.gamma * p / cfg.hbar));
        table.push(matrix_exponential(&exponent, ocfg)?);
    }
    Ok(table)
}

/// Evolve `|ψ>|φ>` under `e^{-iγÂp̂/ħ}` literally: transform the pointer
/// to momentum space, apply the exponentiated coupling at each momentum
/// sample, transform back.
pub fn momentum_space_evolve(
    a: &Projector,
    psi: &SystemState,
    phi: &PointerWavefunction,
    cfg: &MeasurementConfig,
    ocfg: &OracleConfig,
) -> Result<EntangledState> {
    if a.dim() != psi.dim() {
        return Err(Error::ShapeMismatch { expected: a.dim(), got: psi.dim() });
    }
    // Same precondition as the closed form: a shift by gamma must keep the
    // packet's support inside the grid.
    crate::pointer::check_shift_in_range(phi.grid(), phi.samples(), cfg.gamma)?;
    let d = psi.dim();
    let n = phi.grid().len();
    let table = momentum_exponentials(a, cfg, phi.grid(), ocfg)?;

    // Product state in the pointer's momentum representation.
    let mut spectrum = phi.samples().to_vec();
    fft_in_place(&mut spectrum, Direction::Forward);
    let mut rows: Vec<Vec<Complex64>> = psi
        .amplitudes()
        .iter()
        .map(|&aj| spectrum.iter().map(|&s| aj * s).collect())
        .collect();

    // Block-diagonal application of the coupling.
    let mut column = alloc::vec![Complex64::new(0.0, 0.0); d];
    for m in 0..n {
        for (j, row) in rows.iter().enumerate() {
            column[j] = row[m];
        }
        let evolved = table[m].matvec(&column);
        for (j, row) in rows.iter_mut().enumerate() {
            row[m] = evolved[j];
        }
    }

    let mut amplitudes = Vec::with_capacity(d * n);
    for row in &mut rows {
        fft_in_place(row, Direction::Inverse);
        amplitudes.extend_from_slice(row);
    }
    let state = EntangledState::try_new(*phi.grid(), d, amplitudes)?;

    // Same wrap-around guard as the closed form: the evolved envelope must
    // still decay at the grid edges.
    let marginal = state.pointer_marginal();
    let peak = marginal.iter().fold(0.0f64, |acc, &x| acc.max(x)).sqrt();
    let edge = marginal[0].max(marginal[n - 1]).sqrt();
    if edge > BOUNDARY_DECAY_RATIO * peak {
        return Err(Error::GridOverflow { edge_ratio: edge / peak });
    }
    Ok(state)
}

/// Max deviation between the oracle evolution and the closed-form
/// expansion over the full product basis `{|j> ⊗ |q_k>}` of the joint
/// space. Agreement on a basis plus linearity of both routes makes this a
/// complete operator identity check on the grid.
pub fn operator_identity_check(
    a: &Projector,
    cfg: &MeasurementConfig,
    grid: &PointerGrid,
    ocfg: &OracleConfig,
) -> Result<f64> {
    let d = a.dim();
    let n = grid.len();
    let table = momentum_exponentials(a, cfg, grid, ocfg)?;
    let one_minus_a = CMatrix::identity(d).sub(a.matrix());

    let mut worst = 0.0f64;
    let mut oracle_rows: Vec<Vec<Complex64>> = alloc::vec![alloc::vec![Complex64::new(0.0, 0.0); n]; d];
    for j in 0..d {
        for k in 0..n {
            // Oracle route: the delta pointer state has spectrum
            // e^{-2πi k m / n}; apply column j of each momentum block.
            for row in oracle_rows.iter_mut() {
                row.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            }
            for m in 0..n {
                let angle = -2.0 * core::f64::consts::PI * (k as f64) * (m as f64) / (n as f64);
                let phase = Complex64::new(angle.cos(), angle.sin());
                for (l, row) in oracle_rows.iter_mut().enumerate() {
                    row[m] = phase * table[m][(l, j)];
                }
            }
            for row in oracle_rows.iter_mut() {
                fft_in_place(row, Direction::Inverse);
            }

            // Closed form: (1-Â)|j> ⊗ δ_k + Â|j> ⊗ δ_{k+s} with the shift
            // acting spectrally for incommensurate γ.
            let mut delta = alloc::vec![Complex64::new(0.0, 0.0); n];
            delta[k] = Complex64::new(1.0, 0.0);
            let shifted = crate::pointer::shift_samples(grid, &delta, cfg.gamma);
            for l in 0..d {
                let u = one_minus_a[(l, j)];
                let s = a.matrix()[(l, j)];
                for m in 0..n {
                    let closed = u * delta[m] + s * shifted[m];
                    worst = worst.max((oracle_rows[l][m] - closed).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Apply `1 - Â + ÂŜ` and then `1 - Â + ÂŜ†` to deterministic pseudo-random
/// product states; return the max deviation from the inputs.
///
/// The expansion's inverse equals its adjoint, so the composition is the
/// identity. This is what normalizes every PS output.
pub fn inverse_identity_check(
    a: &Projector,
    cfg: &MeasurementConfig,
    grid: &PointerGrid,
) -> Result<f64> {
    const TRIALS: usize = 8;
    let mut rng = SplitMix64::new(0x7c0ffee5eed);
    let d = a.dim();
    let n = grid.len();
    let mut worst = 0.0f64;
    for _ in 0..TRIALS {
        // Raw random product state; the identity is algebraic on the
        // periodic grid, so no decay profile is required.
        let psi = rng.complex_unit_vector(d);
        let pointer_raw = rng.complex_unit_vector(n);
        let scale = (1.0 / grid.dq()).sqrt();
        let mut amplitudes = Vec::with_capacity(d * n);
        for &aj in &psi {
            amplitudes.extend(pointer_raw.iter().map(|&s| aj * s * scale));
        }
        let state = EntangledState::try_new(*grid, d, amplitudes)?;
        let forward = apply_measurement_operator(a, &state, cfg.gamma)?;
        let back = apply_inverse_measurement_operator(a, &forward, cfg.gamma)?;
        worst = worst.max(max_amplitude_deviation(&back, &state)?);
    }
    Ok(worst)
}

/// SplitMix64: tiny deterministic generator for the self-check probes.
pub(crate) struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub(crate) fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 - 1.0
    }

    /// Random complex vector normalized to unit L2 norm.
    pub(crate) fn complex_unit_vector(&mut self, len: usize) -> Vec<Complex64> {
        let mut v: Vec<Complex64> =
            (0..len).map(|_| Complex64::new(self.next_f64(), self.next_f64())).collect();
        let norm = crate::linalg::norm_sq(&v).sqrt();
        for z in &mut v {
            *z /= norm;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::ps_measure;
    use crate::pointer::gaussian_pointer;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let cfg = OracleConfig::default();
        let e = matrix_exponential(&CMatrix::zeros(3), &cfg).unwrap();
        assert!(e.sub(&CMatrix::identity(3)).max_entry_norm() < 1e-15);
    }

    #[test]
    fn exp_of_diagonal_projector_phase() {
        // exp(i pi |0><0|) = diag(-1, 1).
        let cfg = OracleConfig::default();
        let m = CMatrix::from_rows(alloc::vec![
            alloc::vec![c(0.0, core::f64::consts::PI), c(0.0, 0.0)],
            alloc::vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let e = matrix_exponential(&m, &cfg).unwrap();
        assert!((e[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((e[(1, 1)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(e[(0, 1)].norm() < 1e-14);
        assert!(e[(1, 0)].norm() < 1e-14);
    }

    #[test]
    fn exp_of_anti_hermitian_is_unitary() {
        let cfg = OracleConfig::default();
        let mut rng = SplitMix64::new(42);
        let d = 4;
        let mut h = CMatrix::zeros(d);
        for i in 0..d {
            h[(i, i)] = c(rng.next_f64(), 0.0);
            for j in (i + 1)..d {
                let z = c(rng.next_f64(), rng.next_f64());
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        // Scale up so the scaling-and-squaring path actually engages.
        let m = h.scaled(c(0.0, 7.5));
        let u = matrix_exponential(&m, &cfg).unwrap();
        let residual = u.mul(&u.adjoint()).sub(&CMatrix::identity(d)).max_entry_norm();
        assert!(residual < 1e-9, "unitarity residual {residual:.3e}");
    }

    #[test]
    fn exp_rejects_non_finite() {
        let cfg = OracleConfig::default();
        let mut m = CMatrix::zeros(2);
        m[(0, 0)] = c(f64::NAN, 0.0);
        assert!(matches!(
            matrix_exponential(&m, &cfg),
            Err(Error::InvalidMatrix(_))
        ));
    }

    #[test]
    fn oracle_config_invariants() {
        assert!(OracleConfig::new(1e-12, 0.5).is_ok());
        assert!(OracleConfig::new(1e-9, 0.5).is_err());
        assert!(OracleConfig::new(0.0, 0.5).is_err());
        assert!(OracleConfig::new(1e-12, 0.1).is_err());
        assert!(OracleConfig::new(1e-12, 1.5).is_err());
    }

    #[test]
    fn zero_gamma_evolution_is_identity() {
        let grid = PointerGrid::default_grid();
        let phi = gaussian_pointer(grid, 0.0, 1.0).unwrap();
        let psi = SystemState::basis(2, 0).unwrap();
        let a = Projector::from_state(&psi);
        let cfg = MeasurementConfig::with_gamma(0.0).unwrap();
        let out = momentum_space_evolve(&a, &psi, &phi, &cfg, &OracleConfig::default()).unwrap();
        let product = EntangledState::product(&psi, &phi);
        assert!(max_amplitude_deviation(&out, &product).unwrap() < 1e-12);
    }

    #[test]
    fn eigenstate_evolution_is_a_plain_shift() {
        let grid = PointerGrid::default_grid();
        let phi = gaussian_pointer(grid, 0.0, 1.0).unwrap();
        let psi = SystemState::basis(2, 0).unwrap();
        let a = Projector::from_state(&psi);
        let cfg = MeasurementConfig::with_gamma(3.0).unwrap();
        let out = momentum_space_evolve(&a, &psi, &phi, &cfg, &OracleConfig::default()).unwrap();
        let shifted = crate::pointer::translate(&phi, 3.0).unwrap();
        let product = EntangledState::product(&psi, &shifted);
        assert!(max_amplitude_deviation(&out, &product).unwrap() < 1e-9);
    }

    #[test]
    fn oracle_agrees_with_closed_form_on_rank2_projector() {
        let grid = PointerGrid::default_grid();
        let phi = gaussian_pointer(grid, 0.0, 1.0).unwrap();
        let mut rng = SplitMix64::new(7);
        let d = 4;
        let a = Projector::from_span(&[
            rng.complex_unit_vector(d),
            rng.complex_unit_vector(d),
        ])
        .unwrap();
        let psi = SystemState::new(rng.complex_unit_vector(d)).unwrap();
        let cfg = MeasurementConfig::with_gamma(2.0).unwrap();
        let oracle = momentum_space_evolve(&a, &psi, &phi, &cfg, &OracleConfig::default()).unwrap();
        let closed = ps_measure(&a, &psi, &phi, &cfg).unwrap();
        let dev = max_amplitude_deviation(&oracle, &closed).unwrap();
        assert!(dev <= 1e-9, "closed-form vs oracle deviation {dev:.3e}");
    }

    #[test]
    fn operator_identity_trivial_projectors() {
        let grid = PointerGrid::from_bounds(-8.0, 8.0, 128).unwrap();
        let ocfg = OracleConfig::default();
        let cfg = MeasurementConfig::with_gamma(2.0).unwrap();
        // Zero operator: both routes are the identity.
        let dev = operator_identity_check(&Projector::zero(2), &cfg, &grid, &ocfg).unwrap();
        assert!(dev < 1e-12, "zero projector deviation {dev:.3e}");
        // Full-rank projector: both routes are the shift itself.
        let dev = operator_identity_check(&Projector::identity(2), &cfg, &grid, &ocfg).unwrap();
        assert!(dev <= 1e-9, "identity projector deviation {dev:.3e}");
    }

    #[test]
    fn operator_identity_qubit_projector() {
        let grid = PointerGrid::from_bounds(-8.0, 8.0, 128).unwrap();
        let ocfg = OracleConfig::default();
        let cfg = MeasurementConfig::with_gamma(4.0).unwrap();
        let plus = SystemState::new(alloc::vec![
            c(core::f64::consts::FRAC_1_SQRT_2, 0.0),
            c(core::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        let a = Projector::from_state(&plus);
        let dev = operator_identity_check(&a, &cfg, &grid, &ocfg).unwrap();
        assert!(dev <= 1e-9, "qubit projector deviation {dev:.3e}");
    }

    #[test]
    fn inverse_identity_examples() {
        let grid = PointerGrid::from_bounds(-8.0, 8.0, 128).unwrap();
        let plus = SystemState::new(alloc::vec![
            c(core::f64::consts::FRAC_1_SQRT_2, 0.0),
            c(core::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        let a = Projector::from_state(&plus);
        // gamma = 0: both operators are the identity.
        let cfg = MeasurementConfig::with_gamma(0.0).unwrap();
        let dev = inverse_identity_check(&a, &cfg, &grid).unwrap();
        assert!(dev < 1e-14);
        // Random qubit scenario at gamma = 2.
        let cfg = MeasurementConfig::with_gamma(2.0).unwrap();
        let dev = inverse_identity_check(&a, &cfg, &grid).unwrap();
        assert!(dev <= 1e-10, "inverse identity deviation {dev:.3e}");
    }

    #[test]
    fn negative_control_breaks_the_identity() {
        // M = 0.5|0><0| + 0.25|1><1| is Hermitian but not idempotent; the
        // oracle (which exponentiates M faithfully) must disagree with the
        // idempotency-based expansion.
        let grid = PointerGrid::default_grid();
        let phi = gaussian_pointer(grid, 0.0, 1.0).unwrap();
        let m = CMatrix::from_rows(alloc::vec![
            alloc::vec![c(0.5, 0.0), c(0.0, 0.0)],
            alloc::vec![c(0.0, 0.0), c(0.25, 0.0)],
        ])
        .unwrap();
        let fake = Projector::new_unchecked(m);
        let psi = SystemState::new(alloc::vec![
            c(core::f64::consts::FRAC_1_SQRT_2, 0.0),
            c(core::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        let cfg = MeasurementConfig::with_gamma(2.0).unwrap();
        let oracle =
            momentum_space_evolve(&fake, &psi, &phi, &cfg, &OracleConfig::default()).unwrap();
        let closed =
            apply_measurement_operator(&fake, &EntangledState::product(&psi, &phi), cfg.gamma)
                .unwrap();
        let dev = max_amplitude_deviation(&oracle, &closed).unwrap();
        assert!(dev > 1e-3, "negative control deviation only {dev:.3e}");
    }
}
