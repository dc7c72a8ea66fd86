//! Diagnostics that turn the qualitative PS/PPS differences into numbers:
//! how much interference mass a density carries, how far the pointer's
//! mean momentum moved, and what global phase separates two states.

use num_complex::Complex64;
// With std the inherent f64 methods win and this import goes unused.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::measurement::DensityDecomposition;
use crate::pointer::{MomentumObservable, PointerWavefunction};

/// Integrated measures of the interference cross component of a density
/// decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceReport {
    /// `∫ |cross| dq`, insensitive to sign cancellation between fringes.
    pub cross_l1: f64,
    /// `∫ cross dq` (signed).
    pub cross_signed: f64,
    /// Largest pointwise `|cross|`.
    pub max_abs_cross: f64,
    /// The branch-tagging coefficient of the decomposition (`A_w`, or the
    /// expectation value for a PS run).
    pub weak_value: Complex64,
    /// `<φ|Ŝ|φ>` of the underlying pointer.
    pub shifted_overlap: Complex64,
}

/// Integrate the cross component of a density decomposition.
///
/// For PS decompositions the L1 mass sits at rounding level; for PPS
/// decompositions with overlapping profiles and `A_w` outside `{0, 1}` it
/// is strictly positive.
pub fn interference_report(parts: &DensityDecomposition) -> Result<InterferenceReport> {
    let n = parts.grid.len();
    for component in [&parts.total, &parts.term_unshifted, &parts.term_shifted, &parts.cross] {
        if component.len() != n {
            return Err(Error::ShapeMismatch { expected: n, got: component.len() });
        }
    }
    let dq = parts.grid.dq();
    let mut cross_l1 = 0.0;
    let mut cross_signed = 0.0;
    let mut max_abs_cross = 0.0f64;
    for &x in &parts.cross {
        cross_l1 += x.abs() * dq;
        cross_signed += x * dq;
        max_abs_cross = max_abs_cross.max(x.abs());
    }
    Ok(InterferenceReport {
        cross_l1,
        cross_signed,
        max_abs_cross,
        weak_value: parts.weak_value,
        shifted_overlap: parts.shifted_overlap,
    })
}

/// Mean-momentum change `<p̂>_after - <p̂>_before`.
///
/// `after` may be a plain pointer state (PPS route) or a joint
/// system-pointer state (PS route, traced over the system). The coupling
/// commutes with `p̂`, so PS measurements leave this at zero; postselection
/// does not, and a complex weak value shows up here as a genuine kick.
pub fn momentum_shift<T: MomentumObservable>(
    before: &PointerWavefunction,
    after: &T,
    hbar: f64,
) -> Result<f64> {
    if before.grid() != after.pointer_grid() {
        return Err(Error::ShapeMismatch {
            expected: before.grid().len(),
            got: after.pointer_grid().len(),
        });
    }
    Ok(after.momentum_mean(hbar) - before.momentum_mean(hbar))
}

/// Global phase `θ = arg <a|b>` between two normalized states, and the
/// residual `max_k |b_k - e^{iθ} a_k|` left after removing it.
///
/// A residual at rounding level means `b` and `a` are the same ray; the
/// phase is then meaningful (this is how the Pancharatnam factor of a PPS
/// pointer state is extracted and tested).
pub fn global_phase_between(
    a: &PointerWavefunction,
    b: &PointerWavefunction,
) -> Result<(f64, f64)> {
    if a.grid() != b.grid() {
        return Err(Error::ShapeMismatch { expected: a.grid().len(), got: b.grid().len() });
    }
    let overlap = crate::pointer::overlap(a, b)?;
    if overlap.norm() < 1e-12 {
        return Err(Error::DegenerateOverlap { overlap_abs: overlap.norm() });
    }
    let theta = crate::linalg::wrap_angle(overlap.arg());
    let phase = Complex64::new(theta.cos(), theta.sin());
    let residual = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| (y - phase * x).norm())
        .fold(0.0, f64::max);
    Ok((theta, residual))
}
