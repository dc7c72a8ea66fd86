//! Pointer wavefunctions on a uniform position grid.
//!
//! The pointer is a continuous degree of freedom discretized on
//! `q_k = q_min + k·dq` with a power-of-two number of samples, so that the
//! discrete Fourier transform is an exact unitary map to the momentum
//! representation. The translation operator `Ŝ = e^{-iγp̂/ħ}` acts either
//! as an exact index roll (when `γ` is a whole number of grid steps) or as
//! a spectral phase `e^{-ikγ}` in momentum space; the two routes agree on
//! commensurate shifts and are cross-checked in the tests.
//!
//! Physical wavefunctions must decay at the grid edges: the grid is
//! periodic, and without decay a translation would wrap amplitude around
//! instead of shifting it. Constructors enforce that guard.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
// With std the inherent f64 methods win and this import goes unused.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fft::{fft_in_place, Direction};
use crate::linalg;

/// Norm tolerance for normalized pointer states.
pub const POINTER_NORM_TOL: f64 = 1e-10;

/// Edge samples must stay below this fraction of the peak magnitude.
pub const BOUNDARY_DECAY_RATIO: f64 = 1e-8;

/// `γ/dq` must be within this distance of an integer to use the exact
/// index-roll translation.
pub const COMMENSURATE_TOL: f64 = 1e-9;

/// Uniform position grid `q_k = q_min + k·dq`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerGrid {
    q_min: f64,
    dq: f64,
    n: usize,
}

impl PointerGrid {
    /// Minimum number of samples.
    pub const MIN_SAMPLES: usize = 64;

    pub fn new(q_min: f64, dq: f64, n: usize) -> Result<Self> {
        if !n.is_power_of_two() || n < Self::MIN_SAMPLES {
            return Err(Error::InvalidGrid(format!(
                "sample count must be a power of two >= {}, got {n}",
                Self::MIN_SAMPLES
            )));
        }
        if !dq.is_finite() || !q_min.is_finite() || dq <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "grid spacing must be positive and finite (q_min = {q_min}, dq = {dq})"
            )));
        }
        Ok(Self { q_min, dq, n })
    }

    /// Grid covering `[q_min, q_max)` with `n` samples.
    pub fn from_bounds(q_min: f64, q_max: f64, n: usize) -> Result<Self> {
        if !q_max.is_finite() || q_max <= q_min {
            return Err(Error::InvalidGrid(format!(
                "empty extent [{q_min}, {q_max})"
            )));
        }
        Self::new(q_min, (q_max - q_min) / n as f64, n)
    }

    /// The default working grid: `q ∈ [-20, 20)`, 1024 samples. Supports
    /// unit-width wavepackets shifted by up to ten widths with boundary
    /// decay to spare.
    pub fn default_grid() -> Self {
        Self::from_bounds(-20.0, 20.0, 1024).expect("default grid parameters are valid")
    }

    pub fn q_min(&self) -> f64 {
        self.q_min
    }

    pub fn dq(&self) -> f64 {
        self.dq
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position of sample `k`.
    pub fn q(&self, k: usize) -> f64 {
        self.q_min + k as f64 * self.dq
    }

    /// One-past-the-end position `q_min + n·dq`.
    pub fn q_max(&self) -> f64 {
        self.q_min + self.n as f64 * self.dq
    }

    /// Wavenumber of spectral bin `m` (negative branch for the upper half,
    /// including the Nyquist bin).
    pub fn wavenumber(&self, m: usize) -> f64 {
        let signed = if m < self.n / 2 { m as f64 } else { m as f64 - self.n as f64 };
        2.0 * core::f64::consts::PI * signed / (self.n as f64 * self.dq)
    }

    /// All sample positions.
    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.q(k)).collect()
    }
}

/// Normalized pointer wavefunction sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerWavefunction {
    grid: PointerGrid,
    samples: Vec<Complex64>,
}

impl PointerWavefunction {
    /// Wrap samples that are already normalized (`Σ|φ_k|² dq = 1` within
    /// `1e-10`) and decay at the grid edges.
    pub fn try_new(grid: PointerGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), got: samples.len() });
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState(String::from("non-finite pointer sample")));
        }
        let norm_sq = linalg::norm_sq(&samples) * grid.dq();
        if (norm_sq - 1.0).abs() > POINTER_NORM_TOL {
            return Err(Error::InvalidState(format!(
                "pointer norm^2 = {norm_sq:.15}, expected 1"
            )));
        }
        let peak = linalg::max_abs(&samples);
        let edge = samples[0].norm().max(samples[grid.len() - 1].norm());
        if edge > BOUNDARY_DECAY_RATIO * peak {
            return Err(Error::GridOverflow { edge_ratio: edge / peak });
        }
        Ok(Self { grid, samples })
    }

    /// Normalize arbitrary samples, then wrap them.
    pub fn normalized(grid: PointerGrid, mut samples: Vec<Complex64>) -> Result<Self> {
        let norm = (linalg::norm_sq(&samples) * grid.dq()).sqrt();
        if !norm.is_finite() || norm < 1e-150 {
            return Err(Error::InvalidState(String::from(
                "cannot normalize a (near-)zero wavefunction",
            )));
        }
        for z in &mut samples {
            *z /= norm;
        }
        Self::try_new(grid, samples)
    }

    pub fn grid(&self) -> &PointerGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Discrete squared norm `Σ|φ_k|² dq`.
    pub fn norm_sq(&self) -> f64 {
        linalg::norm_sq(&self.samples) * self.grid.dq()
    }

    /// Multiply by a global phase `e^{iθ}`.
    pub fn with_phase(&self, theta: f64) -> Self {
        let phase = Complex64::new(theta.cos(), theta.sin());
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(|z| z * phase).collect(),
        }
    }
}

/// Interaction strength and scale of the measurement coupling
/// `e^{-iγÂp̂/ħ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementConfig {
    pub gamma: f64,
    pub hbar: f64,
}

impl MeasurementConfig {
    pub fn new(gamma: f64, hbar: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::InvalidConfig(format!("gamma must be finite, got {gamma}")));
        }
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(Error::InvalidConfig(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { gamma, hbar })
    }

    /// Default scale `ħ = 1`.
    pub fn with_gamma(gamma: f64) -> Result<Self> {
        Self::new(gamma, 1.0)
    }
}

/// Whether a shift is a whole number of grid steps.
pub fn is_commensurate(gamma: f64, dq: f64) -> bool {
    let ratio = gamma / dq;
    (ratio - ratio.round()).abs() <= COMMENSURATE_TOL
}

/// Normalized Gaussian wavepacket `φ(q) ∝ exp(-(q-center)²/4σ²)`.
///
/// `σ` is the position spread of the packet: `<q̂> = center`,
/// `<q̂²> - <q̂>² = σ²`. The grid must hold at least six spreads on either
/// side of the center, and the edge-decay guard must pass.
pub fn gaussian_pointer(grid: PointerGrid, center: f64, sigma: f64) -> Result<PointerWavefunction> {
    if !sigma.is_finite() || !center.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "gaussian requires finite center and positive sigma (center = {center}, sigma = {sigma})"
        )));
    }
    if sigma < 2.0 * grid.dq() {
        return Err(Error::GridTooSmall(format!(
            "sigma = {sigma} is under-resolved by grid spacing dq = {}",
            grid.dq()
        )));
    }
    if center - 6.0 * sigma < grid.q_min() || center + 6.0 * sigma > grid.q_max() {
        return Err(Error::GridTooSmall(format!(
            "grid [{}, {}) cannot hold center {center} +/- 6 sigma = {}",
            grid.q_min(),
            grid.q_max(),
            6.0 * sigma
        )));
    }
    let samples: Vec<Complex64> = (0..grid.len())
        .map(|k| {
            let x = grid.q(k) - center;
            Complex64::new((-x * x / (4.0 * sigma * sigma)).exp(), 0.0)
        })
        .collect();
    // Normalize discretely so the grid norm is exactly 1 up to rounding.
    PointerWavefunction::normalized(grid, samples).map_err(|e| match e {
        // The 6-sigma margin passed but the tails are still too hot for the
        // wrap-around guard: the grid is too small for this packet.
        Error::GridOverflow { edge_ratio } => Error::GridTooSmall(format!(
            "gaussian tails do not decay at the grid edges (edge ratio {edge_ratio:.3e}); \
             enlarge the grid or shrink sigma"
        )),
        other => other,
    })
}

/// The significant support of `samples` (indices where the magnitude
/// exceeds the edge-decay ratio times the peak), shifted by `gamma`, must
/// stay inside the grid. Catches wrap-arounds the edge check cannot see,
/// such as shifts near a whole grid period.
pub(crate) fn check_shift_in_range(
    grid: &PointerGrid,
    samples: &[Complex64],
    gamma: f64,
) -> Result<()> {
    let peak = linalg::max_abs(samples);
    let threshold = BOUNDARY_DECAY_RATIO * peak;
    let mut k_min = None;
    let mut k_max = 0usize;
    for (k, z) in samples.iter().enumerate() {
        if z.norm() > threshold {
            k_min.get_or_insert(k);
            k_max = k;
        }
    }
    let Some(k_min) = k_min else { return Ok(()) };
    let steps = gamma / grid.dq();
    let lo = k_min as f64 + steps;
    let hi = k_max as f64 + steps;
    if lo.floor() < 0.0 || hi.ceil() > (grid.len() - 1) as f64 {
        return Err(Error::GridOverflow {
            edge_ratio: 1.0, // the support itself leaves the grid
        });
    }
    Ok(())
}

/// Raw shift of a sample buffer by `γ`: exact roll when commensurate,
/// spectral phase otherwise. No invariants are checked.
pub(crate) fn shift_samples(grid: &PointerGrid, samples: &[Complex64], gamma: f64) -> Vec<Complex64> {
    if is_commensurate(gamma, grid.dq()) {
        let n = grid.len() as i64;
        let s = (gamma / grid.dq()).round() as i64;
        let s = s.rem_euclid(n);
        if s == 0 {
            return samples.to_vec();
        }
        let mut out = Vec::with_capacity(samples.len());
        for k in 0..n {
            out.push(samples[(k - s).rem_euclid(n) as usize]);
        }
        out
    } else {
        let mut buf = samples.to_vec();
        fft_in_place(&mut buf, Direction::Forward);
        for (m, z) in buf.iter_mut().enumerate() {
            let angle = -grid.wavenumber(m) * gamma;
            *z *= Complex64::new(angle.cos(), angle.sin());
        }
        fft_in_place(&mut buf, Direction::Inverse);
        buf
    }
}

/// Translate a pointer state by `γ`: `(Ŝφ)(q) = φ(q - γ)`.
///
/// Unitary, so the norm is preserved; fails with [`Error::GridOverflow`]
/// if the shifted packet would leave the grid or no longer decays at its
/// edges.
pub fn translate(phi: &PointerWavefunction, gamma: f64) -> Result<PointerWavefunction> {
    check_shift_in_range(phi.grid(), phi.samples(), gamma)?;
    let shifted = shift_samples(phi.grid(), phi.samples(), gamma);
    PointerWavefunction::try_new(*phi.grid(), shifted)
}

/// Translation forced through the exact index roll. The shift must be
/// commensurate with the grid.
pub fn translate_roll(phi: &PointerWavefunction, gamma: f64) -> Result<PointerWavefunction> {
    if !is_commensurate(gamma, phi.grid().dq()) {
        return Err(Error::InvalidConfig(format!(
            "gamma = {gamma} is not a whole number of grid steps (dq = {})",
            phi.grid().dq()
        )));
    }
    translate(phi, gamma)
}

/// Translation forced through the spectral route, for cross-checking the
/// roll on commensurate shifts.
pub fn translate_spectral(phi: &PointerWavefunction, gamma: f64) -> Result<PointerWavefunction> {
    check_shift_in_range(phi.grid(), phi.samples(), gamma)?;
    let mut buf = phi.samples().to_vec();
    fft_in_place(&mut buf, Direction::Forward);
    for (m, z) in buf.iter_mut().enumerate() {
        let angle = -phi.grid().wavenumber(m) * gamma;
        *z *= Complex64::new(angle.cos(), angle.sin());
    }
    fft_in_place(&mut buf, Direction::Inverse);
    PointerWavefunction::try_new(*phi.grid(), buf)
}

/// Overlap `<a|b> = Σ conj(a_k) b_k dq` of two states on the same grid.
pub fn overlap(a: &PointerWavefunction, b: &PointerWavefunction) -> Result<Complex64> {
    if a.grid() != b.grid() {
        return Err(Error::ShapeMismatch { expected: a.grid().len(), got: b.grid().len() });
    }
    Ok(linalg::inner(a.samples(), b.samples()) * a.grid().dq())
}

/// Anything that carries a momentum distribution on a pointer grid.
pub trait MomentumObservable {
    fn pointer_grid(&self) -> &PointerGrid;
    /// Mean of the momentum-space density, `p = ħk`.
    fn momentum_mean(&self, hbar: f64) -> f64;
}

impl MomentumObservable for PointerWavefunction {
    fn pointer_grid(&self) -> &PointerGrid {
        &self.grid
    }

    fn momentum_mean(&self, hbar: f64) -> f64 {
        let mut buf = self.samples.to_vec();
        fft_in_place(&mut buf, Direction::Forward);
        let mut weighted = 0.0;
        let mut total = 0.0;
        for (m, z) in buf.iter().enumerate() {
            let w = z.norm_sqr();
            weighted += hbar * self.grid.wavenumber(m) * w;
            total += w;
        }
        weighted / total
    }
}

/// Momentum expectation `<p̂>`, computed spectrally as the mean of the
/// momentum-space density.
pub fn momentum_expectation(phi: &PointerWavefunction, hbar: f64) -> f64 {
    phi.momentum_mean(hbar)
}

/// Position expectation `<q̂> = Σ q_k |φ_k|² dq`.
pub fn position_expectation(phi: &PointerWavefunction) -> f64 {
    phi.samples()
        .iter()
        .enumerate()
        .map(|(k, z)| phi.grid().q(k) * z.norm_sqr())
        .sum::<f64>()
        * phi.grid().dq()
}

/// Pointwise probability density `|φ_k|²`. Integrates to 1 against `dq`
/// for normalized input.
pub fn probability_density(phi: &PointerWavefunction) -> Vec<f64> {
    phi.samples().iter().map(|z| z.norm_sqr()).collect()
}
