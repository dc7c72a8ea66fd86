//! Closed-form measurement engine for PS and PPS ensembles.
//!
//! Idempotency collapses the measurement operator to the exact expansion
//!
//! ```text
//! e^{-iγÂp̂/ħ} = 1 - Â + Â Ŝ,      Ŝ = e^{-iγp̂/ħ}
//! ```
//!
//! so the post-measurement state of a preselected system is assembled
//! directly from two pointer profiles:
//!
//! ```text
//! |Φ> = [(1-Â)|ψ>] ⊗ |φ>  +  [Â|ψ>] ⊗ Ŝ|φ>
//! ```
//!
//! For a preselected ensemble the pointer density is a plain weighted sum
//! of `|φ(q)|²` and `|φ(q-γ)|²`: the would-be interference cross term
//! carries the factor `<ψ|Â(1-Â)|ψ>`, which idempotency kills identically.
//! Postselection onto `<ψ_f|` replaces the operator by its weak value and
//! produces
//!
//! ```text
//! |Ψ> = (e^{iχ}/N) [ (1-A_w) |φ> + A_w Ŝ|φ> ]
//! ```
//!
//! whose density does interfere: the cross term is proportional to
//! `Re[A_w (1-A_w*) φ*(q) φ(q-γ)]`, and nothing kills it.
//!
//! `[Â, Ŝ] = 0` holds by construction here (`Â` acts on the system factor
//! of the tensor product, `Ŝ` on the pointer factor), so no runtime check
//! is needed for it.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
// With std the inherent f64 methods win and this import goes unused.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg;
use crate::pointer::{
    self, MeasurementConfig, MomentumObservable, PointerGrid, PointerWavefunction,
};
use crate::system::{
    expectation, Projector, SystemState, WeakValueReport,
};

/// Norm tolerance for joint system-pointer states.
pub const ENTANGLED_NORM_TOL: f64 = 1e-10;

/// Joint state of the system and the pointer: a `d × n` amplitude array,
/// system index major.
#[derive(Debug, Clone, PartialEq)]
pub struct EntangledState {
    grid: PointerGrid,
    dim: usize,
    amplitudes: Vec<Complex64>,
}

impl EntangledState {
    /// Wrap amplitudes whose total norm `Σ|c_jk|² dq` is 1 within `1e-10`.
    pub fn try_new(grid: PointerGrid, dim: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != dim * grid.len() {
            return Err(Error::ShapeMismatch {
                expected: dim * grid.len(),
                got: amplitudes.len(),
            });
        }
        let norm_sq = linalg::norm_sq(&amplitudes) * grid.dq();
        if (norm_sq - 1.0).abs() > ENTANGLED_NORM_TOL {
            return Err(Error::InvalidState(format!(
                "joint norm^2 = {norm_sq:.15}, expected 1"
            )));
        }
        Ok(Self { grid, dim, amplitudes })
    }

    pub(crate) fn new_unchecked(
        grid: PointerGrid,
        dim: usize,
        amplitudes: Vec<Complex64>,
    ) -> Self {
        Self { grid, dim, amplitudes }
    }

    /// Product state `|ψ> ⊗ |φ>`.
    pub fn product(psi: &SystemState, phi: &PointerWavefunction) -> Self {
        let n = phi.grid().len();
        let mut amplitudes = Vec::with_capacity(psi.dim() * n);
        for &a in psi.amplitudes() {
            amplitudes.extend(phi.samples().iter().map(|&s| a * s));
        }
        Self { grid: *phi.grid(), dim: psi.dim(), amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> &PointerGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Pointer samples for system index `j`.
    pub fn row(&self, j: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.amplitudes[j * n..(j + 1) * n]
    }

    /// Total squared norm `Σ|c_jk|² dq`.
    pub fn total_norm_sq(&self) -> f64 {
        linalg::norm_sq(&self.amplitudes) * self.grid.dq()
    }

    /// Pointer marginal density: the system trace `Σ_j |c_jk|²`.
    pub fn pointer_marginal(&self) -> Vec<f64> {
        let n = self.grid.len();
        let mut out = alloc::vec![0.0; n];
        for j in 0..self.dim {
            for (k, z) in self.row(j).iter().enumerate() {
                out[k] += z.norm_sqr();
            }
        }
        out
    }
}

impl MomentumObservable for EntangledState {
    fn pointer_grid(&self) -> &PointerGrid {
        &self.grid
    }

    fn momentum_mean(&self, hbar: f64) -> f64 {
        use crate::fft::{fft_in_place, Direction};
        let mut weighted = 0.0;
        let mut total = 0.0;
        for j in 0..self.dim {
            let mut buf = self.row(j).to_vec();
            fft_in_place(&mut buf, Direction::Forward);
            for (m, z) in buf.iter().enumerate() {
                let w = z.norm_sqr();
                weighted += hbar * self.grid.wavenumber(m) * w;
                total += w;
            }
        }
        weighted / total
    }
}

/// Apply a system-space operator `M ⊗ 1` to a joint state.
fn apply_system_operator(m: &crate::linalg::CMatrix, state: &EntangledState) -> EntangledState {
    let d = state.dim();
    let n = state.grid().len();
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); d * n];
    for j in 0..d {
        for l in 0..d {
            let coeff = m[(j, l)];
            if coeff == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row = state.row(l);
            let dst = &mut out[j * n..(j + 1) * n];
            for (o, s) in dst.iter_mut().zip(row) {
                *o += coeff * s;
            }
        }
    }
    EntangledState::new_unchecked(*state.grid(), d, out)
}

/// Shift every pointer row of a joint state by `gamma` (`1 ⊗ Ŝ`).
fn apply_pointer_shift(state: &EntangledState, gamma: f64) -> EntangledState {
    let d = state.dim();
    let n = state.grid().len();
    let mut out = Vec::with_capacity(d * n);
    for j in 0..d {
        out.extend(pointer::shift_samples(state.grid(), state.row(j), gamma));
    }
    EntangledState::new_unchecked(*state.grid(), d, out)
}

/// Raw application of the measurement expansion `1 - Â + Â Ŝ` to a joint
/// state. No invariant is enforced on the output: for a genuine projector
/// the result stays normalized, for anything else it will not, which is
/// exactly what the negative controls probe.
pub fn apply_measurement_operator(
    a: &Projector,
    state: &EntangledState,
    gamma: f64,
) -> Result<EntangledState> {
    if a.dim() != state.dim() {
        return Err(Error::ShapeMismatch { expected: a.dim(), got: state.dim() });
    }
    let projected = apply_system_operator(a.matrix(), state);
    let shifted_projected = apply_pointer_shift(&projected, gamma);
    let amplitudes = state
        .amplitudes()
        .iter()
        .zip(projected.amplitudes())
        .zip(shifted_projected.amplitudes())
        .map(|((s, p), sp)| s - p + sp)
        .collect();
    Ok(EntangledState::new_unchecked(*state.grid(), state.dim(), amplitudes))
}

/// Raw application of the inverse (equivalently adjoint) expansion
/// `1 - Â + Â Ŝ†`.
pub fn apply_inverse_measurement_operator(
    a: &Projector,
    state: &EntangledState,
    gamma: f64,
) -> Result<EntangledState> {
    apply_measurement_operator(a, state, -gamma)
}

/// Largest per-amplitude deviation between two joint states.
pub fn max_amplitude_deviation(a: &EntangledState, b: &EntangledState) -> Result<f64> {
    if a.dim() != b.dim() || a.grid() != b.grid() {
        return Err(Error::ShapeMismatch {
            expected: a.amplitudes().len(),
            got: b.amplitudes().len(),
        });
    }
    Ok(a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

/// Exact post-measurement state of a preselected system:
/// `|Φ> = (1 - Â + ÂŜ)|ψ>|φ>`.
///
/// The output is normalized because the expansion is unitary for a genuine
/// projector; a norm drift beyond `1e-10` is reported as numerical
/// degeneracy rather than silently renormalized.
pub fn ps_measure(
    a: &Projector,
    psi: &SystemState,
    phi: &PointerWavefunction,
    cfg: &MeasurementConfig,
) -> Result<EntangledState> {
    if a.dim() != psi.dim() {
        return Err(Error::ShapeMismatch { expected: a.dim(), got: psi.dim() });
    }
    // Validates the shifted packet against the wrap-around guard.
    let phi_shifted = pointer::translate(phi, cfg.gamma)?;

    let projected = a.apply(psi.amplitudes());
    let n = phi.grid().len();
    let mut amplitudes = Vec::with_capacity(psi.dim() * n);
    for (j, &psi_j) in psi.amplitudes().iter().enumerate() {
        let unshifted_coeff = psi_j - projected[j];
        let shifted_coeff = projected[j];
        for k in 0..n {
            amplitudes
                .push(unshifted_coeff * phi.samples()[k] + shifted_coeff * phi_shifted.samples()[k]);
        }
    }
    let state = EntangledState::new_unchecked(*phi.grid(), psi.dim(), amplitudes);
    let norm_sq = state.total_norm_sq();
    if (norm_sq - 1.0).abs() > ENTANGLED_NORM_TOL {
        return Err(Error::NumericalDegeneracy(format!(
            "post-measurement norm^2 = {norm_sq:.15}; the inverse/adjoint identity \
             guarantees 1 for a valid projector"
        )));
    }
    Ok(state)
}

/// Pointer density of a PS measurement in its closed weighted-sum form:
/// `(1 - <ψ|Â|ψ>)|φ(q)|² + <ψ|Â|ψ>|φ(q-γ)|²`.
pub fn ps_pointer_density(
    a: &Projector,
    psi: &SystemState,
    phi: &PointerWavefunction,
    cfg: &MeasurementConfig,
) -> Result<Vec<f64>> {
    if a.dim() != psi.dim() {
        return Err(Error::ShapeMismatch { expected: a.dim(), got: psi.dim() });
    }
    let weight = expectation(a, psi)?;
    let phi_shifted = pointer::translate(phi, cfg.gamma)?;
    Ok(phi
        .samples()
        .iter()
        .zip(phi_shifted.samples())
        .map(|(u, s)| (1.0 - weight) * u.norm_sqr() + weight * s.norm_sqr())
        .collect())
}

/// A pointer density split into its unshifted term, shifted term, and
/// interference cross term, `total = term_unshifted + term_shifted + cross`
/// pointwise.
///
/// `weak_value` holds the coefficient that tags the two branches: the weak
/// value `A_w` for a PPS run, or the (real) expectation `<ψ|Â|ψ>` for a PS
/// run, which is exactly the weak value with trivial postselection.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityDecomposition {
    pub grid: PointerGrid,
    pub total: Vec<f64>,
    pub term_unshifted: Vec<f64>,
    pub term_shifted: Vec<f64>,
    pub cross: Vec<f64>,
    pub weak_value: Complex64,
    pub shifted_overlap: Complex64,
}

/// PS density split: the total is the pointer marginal of the measured
/// joint state, and the cross component is whatever remains after the
/// weighted sum is subtracted: identically zero (to rounding) for a
/// genuine projector, and visibly nonzero for a corrupted one.
pub fn ps_density_decomposition(
    a: &Projector,
    psi: &SystemState,
    phi: &PointerWavefunction,
    cfg: &MeasurementConfig,
) -> Result<DensityDecomposition> {
    if a.dim() != psi.dim() {
        return Err(Error::ShapeMismatch { expected: a.dim(), got: psi.dim() });
    }
    let phi_shifted = pointer::translate(phi, cfg.gamma)?;
    let weight = expectation(a, psi)?;
    // Raw expansion, so that non-idempotent couplings can be probed too.
    let state = apply_measurement_operator(a, &EntangledState::product(psi, phi), cfg.gamma)?;
    let total = state.pointer_marginal();
    let term_unshifted: Vec<f64> =
        phi.samples().iter().map(|z| (1.0 - weight) * z.norm_sqr()).collect();
    let term_shifted: Vec<f64> =
        phi_shifted.samples().iter().map(|z| weight * z.norm_sqr()).collect();
    let cross: Vec<f64> = total
        .iter()
        .zip(term_unshifted.iter().zip(&term_shifted))
        .map(|(t, (u, s))| t - u - s)
        .collect();
    Ok(DensityDecomposition {
        grid: *phi.grid(),
        total,
        term_unshifted,
        term_shifted,
        cross,
        weak_value: Complex64::new(weight, 0.0),
        shifted_overlap: pointer::overlap(phi, &phi_shifted)?,
    })
}

/// Pointwise residual between the measured PS marginal and the weighted
/// two-profile sum.
///
/// For every valid projector this vanishes below `1e-10`; it is the
/// algebraic fact `<ψ|Â(1-Â)|ψ> = 0` made into a runnable check.
pub fn ps_cross_term(
    a: &Projector,
    psi: &SystemState,
    phi: &PointerWavefunction,
    cfg: &MeasurementConfig,
) -> Result<Vec<f64>> {
    Ok(ps_density_decomposition(a, psi, phi, cfg)?.cross)
}

/// Outcome of a postselected measurement: the exact normalized pointer
/// state, the weak-value report behind it, and the probability that the
/// postselection succeeds in the first place.
#[derive(Debug, Clone, PartialEq)]
pub struct PpsResult {
    pub pointer: PointerWavefunction,
    pub report: WeakValueReport,
    pub postselection_probability: f64,
}

/// Exact normalized pointer state after postselection:
/// `|Ψ> = (e^{iχ}/N) [ (1-A_w)|φ> + A_w Ŝ|φ> ]`.
///
/// The weak value replaces the operator entirely, whatever the
/// interaction strength, and the Pancharatnam phase of the postselection
/// overlap rides along as a global factor.
pub fn pps_pointer_state(
    a: &Projector,
    pre: &SystemState,
    post: &SystemState,
    phi: &PointerWavefunction,
    cfg: &MeasurementConfig,
) -> Result<PpsResult> {
    if a.dim() != pre.dim() {
        return Err(Error::ShapeMismatch { expected: a.dim(), got: pre.dim() });
    }
    let phi_shifted = pointer::translate(phi, cfg.gamma)?;
    let shifted_overlap = pointer::overlap(phi, &phi_shifted)?;
    let report = WeakValueReport::compute(a, pre, post, shifted_overlap)?;

    if report.normalization <= 0.0 {
        return Err(Error::NumericalDegeneracy(format!(
            "PPS pointer norm N = {} vanished",
            report.normalization
        )));
    }
    let chi_phase = Complex64::new(report.phase_chi.cos(), report.phase_chi.sin());
    let scale = chi_phase / report.normalization;
    let one = Complex64::new(1.0, 0.0);
    let samples: Vec<Complex64> = phi
        .samples()
        .iter()
        .zip(phi_shifted.samples())
        .map(|(u, s)| scale * ((one - report.weak_value) * u + report.weak_value * s))
        .collect();
    let pointer = PointerWavefunction::try_new(*phi.grid(), samples)?;

    let postselection_probability =
        report.normalization * report.normalization * report.overlap.norm_sqr();
    if !(-1e-12..=1.0 + 1e-12).contains(&postselection_probability) {
        return Err(Error::NumericalDegeneracy(format!(
            "postselection probability {postselection_probability} outside [0, 1]"
        )));
    }
    Ok(PpsResult { pointer, report, postselection_probability })
}

/// PPS pointer density in its closed decomposition:
///
/// ```text
/// |Ψ(q)|² = (1/N²) { |1-A_w|²|φ(q)|² + |A_w|²|φ(q-γ)|²
///                    + 2 Re[A_w (1-A_w*) φ*(q) φ(q-γ)] }
/// ```
///
/// The three returned components sum to the total exactly; the total also
/// matches `|Ψ|²` from [`pps_pointer_state`] to rounding.
pub fn pps_pointer_density(
    a: &Projector,
    pre: &SystemState,
    post: &SystemState,
    phi: &PointerWavefunction,
    cfg: &MeasurementConfig,
) -> Result<DensityDecomposition> {
    if a.dim() != pre.dim() {
        return Err(Error::ShapeMismatch { expected: a.dim(), got: pre.dim() });
    }
    let phi_shifted = pointer::translate(phi, cfg.gamma)?;
    let shifted_overlap = pointer::overlap(phi, &phi_shifted)?;
    let report = WeakValueReport::compute(a, pre, post, shifted_overlap)?;

    let n_sq = report.normalization * report.normalization;
    if n_sq <= 0.0 {
        return Err(Error::NumericalDegeneracy(format!(
            "PPS pointer norm N^2 = {n_sq} vanished"
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let a_w = report.weak_value;
    let w_unshifted = (one - a_w).norm_sqr() / n_sq;
    let w_shifted = a_w.norm_sqr() / n_sq;
    let cross_coeff = a_w * (one - a_w.conj()) / n_sq;

    let len = phi.grid().len();
    let mut term_unshifted = Vec::with_capacity(len);
    let mut term_shifted = Vec::with_capacity(len);
    let mut cross = Vec::with_capacity(len);
    let mut total = Vec::with_capacity(len);
    for (u, s) in phi.samples().iter().zip(phi_shifted.samples()) {
        let tu = w_unshifted * u.norm_sqr();
        let ts = w_shifted * s.norm_sqr();
        let tc = 2.0 * (cross_coeff * u.conj() * s).re;
        term_unshifted.push(tu);
        term_shifted.push(ts);
        cross.push(tc);
        total.push(tu + ts + tc);
    }
    Ok(DensityDecomposition {
        grid: *phi.grid(),
        total,
        term_unshifted,
        term_shifted,
        cross,
        weak_value: a_w,
        shifted_overlap,
    })
}

/// Project a joint state onto `<ψ_f|`: returns the normalized surviving
/// pointer and the probability `‖<ψ_f|Φ>‖²` of that outcome.
pub fn postselect(
    state: &EntangledState,
    post: &SystemState,
) -> Result<(PointerWavefunction, f64)> {
    if state.dim() != post.dim() {
        return Err(Error::ShapeMismatch { expected: state.dim(), got: post.dim() });
    }
    let n = state.grid().len();
    let mut unnormalized = alloc::vec![Complex64::new(0.0, 0.0); n];
    for (j, coeff) in post.amplitudes().iter().enumerate() {
        let conj = coeff.conj();
        for (u, z) in unnormalized.iter_mut().zip(state.row(j)) {
            *u += conj * z;
        }
    }
    let probability = linalg::norm_sq(&unnormalized) * state.grid().dq();
    if probability < 1e-20 {
        return Err(Error::PostselectionImpossible { norm_sq: probability });
    }
    let inv = 1.0 / probability.sqrt();
    for z in &mut unnormalized {
        *z *= inv;
    }
    let pointer = PointerWavefunction::try_new(*state.grid(), unnormalized)?;
    Ok((pointer, probability))
}
