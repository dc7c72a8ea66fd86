//! Finite-dimensional system states, projection operators, weak values,
//! and the Pancharatnam phase of a postselection overlap.
//!
//! The measured observable is always a projector `Â` (Hermitian, `Â² = Â`,
//! eigenvalues 0 and 1). Projectors of any rank are admitted; the closed
//! forms downstream use nothing beyond idempotency.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
// With std the inherent f64 methods win and this import goes unused.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Overlaps at or below this magnitude count as orthogonal postselection:
/// the weak value would amplify rounding noise instead of physics.
pub const OVERLAP_EPSILON: f64 = 1e-10;

/// Norm tolerance for already-normalized state vectors.
pub const STATE_NORM_TOL: f64 = 1e-12;

/// Validation tolerances for projector candidates.
///
/// The defaults pass double-precision constructions up to `d = 64` while
/// rejecting genuinely non-idempotent matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorTolerances {
    /// Max-entry bound on `‖M − M†‖`.
    pub hermiticity: f64,
    /// Max-entry bound on `‖M² − M‖`.
    pub idempotency: f64,
    /// Bound on the distance of each eigenvalue from `{0, 1}`.
    pub eigenvalue: f64,
}

impl Default for ProjectorTolerances {
    fn default() -> Self {
        Self { hermiticity: 1e-12, idempotency: 1e-10, eigenvalue: 1e-8 }
    }
}

/// Residuals of a projector validation, plus the verdict at the tolerances
/// it was run with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorValidation {
    pub hermiticity_residual: f64,
    pub idempotency_residual: f64,
    pub eigenvalue_residual: f64,
    pub passes: bool,
}

/// Check whether a square complex matrix is a projector.
///
/// Reports the Hermiticity residual `‖M − M†‖`, the idempotency residual
/// `‖M² − M‖` (both max-entry norms), and the largest distance of any
/// eigenvalue from `{0, 1}`.
pub fn validate_projector(m: &CMatrix, tol: ProjectorTolerances) -> Result<ProjectorValidation> {
    if !m.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entries".into()));
    }
    let hermiticity_residual = m.sub(&m.adjoint()).max_entry_norm();
    let idempotency_residual = m.mul(m).sub(m).max_entry_norm();
    let eigenvalue_residual = m
        .hermitian_eigenvalues()?
        .iter()
        .map(|&e| e.abs().min((e - 1.0).abs()))
        .fold(0.0, f64::max);
    let passes = hermiticity_residual <= tol.hermiticity
        && idempotency_residual <= tol.idempotency
        && eigenvalue_residual <= tol.eigenvalue;
    Ok(ProjectorValidation {
        hermiticity_residual,
        idempotency_residual,
        eigenvalue_residual,
        passes,
    })
}

/// Normalized state vector of a `d`-dimensional system, `d >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    amplitudes: Vec<Complex64>,
}

impl SystemState {
    /// Wrap an already-normalized amplitude vector (norm within `1e-12`).
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidState(format!(
                "system dimension must be at least 2, got {}",
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState(String::from("non-finite amplitude")));
        }
        let norm = linalg::norm_sq(&amplitudes).sqrt();
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::InvalidState(format!(
                "state is not normalized: |psi| = {norm:.15}"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Normalize an arbitrary non-zero vector and wrap it.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = linalg::norm_sq(&amplitudes).sqrt();
        if !norm.is_finite() || norm < 1e-150 {
            return Err(Error::InvalidState(String::from(
                "cannot normalize a (near-)zero vector",
            )));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::new(amplitudes)
    }

    /// Basis state `|k>` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidState(format!(
                "basis index {k} out of range for dimension {dim}"
            )));
        }
        let mut v = alloc::vec![Complex64::new(0.0, 0.0); dim];
        v[k] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::ShapeMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(linalg::inner(&self.amplitudes, &other.amplitudes))
    }

    /// Same ray with a global phase applied.
    pub fn with_phase(&self, alpha: f64) -> Self {
        let phase = Complex64::new(alpha.cos(), alpha.sin());
        Self { amplitudes: self.amplitudes.iter().map(|z| z * phase).collect() }
    }
}

/// Hermitian idempotent operator on the system.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: CMatrix,
}

impl Projector {
    /// Validate a candidate matrix at the default tolerances.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, ProjectorTolerances::default())
    }

    /// Validate a candidate matrix at caller-chosen tolerances.
    pub fn with_tolerances(matrix: CMatrix, tol: ProjectorTolerances) -> Result<Self> {
        let report = validate_projector(&matrix, tol)?;
        if !report.passes {
            return Err(Error::InvalidProjector {
                hermiticity_residual: report.hermiticity_residual,
                idempotency_residual: report.idempotency_residual,
                eigenvalue_residual: report.eigenvalue_residual,
            });
        }
        Ok(Self { matrix })
    }

    /// Wrap a matrix without validating it.
    ///
    /// Exists for negative controls: deliberately non-idempotent couplings
    /// fed through the measurement pipeline to demonstrate that the
    /// no-interference contract genuinely depends on idempotency.
    pub fn new_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    /// Rank-1 projector `|v><v|` onto a normalized state.
    pub fn from_state(v: &SystemState) -> Self {
        // SystemState is normalized by construction, so the outer product
        // passes validation up to rounding.
        Self { matrix: CMatrix::outer(v.amplitudes()) }
    }

    /// Projector onto the span of the given vectors (orthonormalized
    /// internally). Fails if the vectors are linearly dependent.
    pub fn from_span(vectors: &[Vec<Complex64>]) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidState(String::from("empty span")));
        }
        let dim = vectors[0].len();
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::ShapeMismatch { expected: dim, got: vectors.iter().map(Vec::len).find(|&l| l != dim).unwrap_or(dim) });
        }
        if vectors.len() > dim {
            return Err(Error::InvalidState(format!(
                "span of {} vectors exceeds dimension {dim}",
                vectors.len()
            )));
        }
        // Modified Gram-Schmidt, two passes for orthogonality at the
        // rounding level.
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
        for v in vectors {
            let mut w = v.clone();
            for _ in 0..2 {
                for e in &basis {
                    let coeff = linalg::inner(e, &w);
                    for (wk, ek) in w.iter_mut().zip(e.iter()) {
                        *wk -= coeff * ek;
                    }
                }
            }
            let norm = linalg::norm_sq(&w).sqrt();
            if norm < 1e-10 {
                return Err(Error::InvalidState(String::from(
                    "span vectors are linearly dependent",
                )));
            }
            for wk in &mut w {
                *wk /= norm;
            }
            basis.push(w);
        }
        let mut matrix = CMatrix::zeros(dim);
        for e in &basis {
            matrix = matrix.add(&CMatrix::outer(e));
        }
        Ok(Self { matrix })
    }

    /// Identity (the full-rank projector).
    pub fn identity(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim) }
    }

    /// Zero operator (the rank-0 projector).
    pub fn zero(dim: usize) -> Self {
        Self { matrix: CMatrix::zeros(dim) }
    }

    /// The complementary projector `1 - Â`.
    pub fn complement(&self) -> Self {
        Self { matrix: CMatrix::identity(self.dim()).sub(&self.matrix) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Apply to a raw amplitude vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.matrix.matvec(v)
    }
}

/// Expectation value `<psi|Â|psi>`.
///
/// For a valid projector this lies in `[0, 1]` up to rounding.
pub fn expectation(a: &Projector, psi: &SystemState) -> Result<f64> {
    if a.dim() != psi.dim() {
        return Err(Error::ShapeMismatch { expected: a.dim(), got: psi.dim() });
    }
    Ok(linalg::inner(psi.amplitudes(), &a.apply(psi.amplitudes())).re)
}

/// Weak value `A_w = <psi_f|Â|psi_i> / <psi_f|psi_i>`.
///
/// Complex in general, and not confined to the projector's spectrum:
/// postselection can push it far outside `[0, 1]`.
pub fn weak_value(a: &Projector, pre: &SystemState, post: &SystemState) -> Result<Complex64> {
    if a.dim() != pre.dim() {
        return Err(Error::ShapeMismatch { expected: a.dim(), got: pre.dim() });
    }
    let overlap = post.inner(pre)?;
    if overlap.norm() <= OVERLAP_EPSILON {
        return Err(Error::OrthogonalPostselection { overlap_abs: overlap.norm() });
    }
    let numerator = linalg::inner(post.amplitudes(), &a.apply(pre.amplitudes()));
    Ok(numerator / overlap)
}

/// Pancharatnam phase of the postselection overlap:
/// `e^{iχ} = <psi_f|psi_i> / |<psi_f|psi_i>|`, with `χ` on the principal
/// branch `(-π, π]`. Also returns the overlap itself.
pub fn pancharatnam_phase(pre: &SystemState, post: &SystemState) -> Result<(f64, Complex64)> {
    let overlap = post.inner(pre)?;
    if overlap.norm() <= OVERLAP_EPSILON {
        return Err(Error::OrthogonalPostselection { overlap_abs: overlap.norm() });
    }
    Ok((linalg::wrap_angle(overlap.arg()), overlap))
}

/// Pointer-state normalization constant
/// `N = sqrt(|1-A_w|² + |A_w|² + 2 Re[A_w (1-A_w*) <φ|Ŝ|φ>])`.
///
/// `shifted_overlap` is `<φ|Ŝ|φ>`, the overlap of the pointer with its
/// translated copy, so its magnitude cannot exceed 1.
pub fn normalization_constant(a_w: Complex64, shifted_overlap: Complex64) -> Result<f64> {
    if shifted_overlap.norm() > 1.0 + 1e-10 {
        return Err(Error::InvalidState(format!(
            "|<phi|S|phi>| = {:.6} exceeds 1; not a unit-vector overlap",
            shifted_overlap.norm()
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let cross = a_w * (one - a_w.conj()) * shifted_overlap;
    let n_sq = (one - a_w).norm_sqr() + a_w.norm_sqr() + 2.0 * cross.re;
    if n_sq < -1e-10 {
        return Err(Error::NumericalDegeneracy(format!(
            "squared normalization constant is negative: {n_sq:.3e}"
        )));
    }
    Ok(n_sq.max(0.0).sqrt())
}

/// Weak value, overlap, Pancharatnam phase, and normalization constant of
/// one PPS configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValueReport {
    /// `A_w`.
    pub weak_value: Complex64,
    /// `<psi_f|psi_i>`.
    pub overlap: Complex64,
    /// Pancharatnam phase `χ` in `(-π, π]`.
    pub phase_chi: f64,
    /// Pointer normalization constant `N`.
    pub normalization: f64,
}

impl WeakValueReport {
    /// Assemble the full report for one `(Â, psi_i, psi_f)` configuration
    /// and the pointer's shifted overlap `<φ|Ŝ|φ>`.
    pub fn compute(
        a: &Projector,
        pre: &SystemState,
        post: &SystemState,
        shifted_overlap: Complex64,
    ) -> Result<Self> {
        let weak_value = weak_value(a, pre, post)?;
        let (phase_chi, overlap) = pancharatnam_phase(pre, post)?;
        let normalization = normalization_constant(weak_value, shifted_overlap)?;
        Ok(Self { weak_value, overlap, phase_chi, normalization })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus_state() -> SystemState {
        SystemState::new(alloc::vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap()
    }

    fn proj0() -> Projector {
        Projector::from_state(&SystemState::basis(2, 0).unwrap())
    }

    #[test]
    fn projector_from_basis_state() {
        let p = proj0();
        assert_eq!(p.matrix()[(0, 0)], c(1.0, 0.0));
        assert_eq!(p.matrix()[(0, 1)], c(0.0, 0.0));
        assert_eq!(p.matrix()[(1, 0)], c(0.0, 0.0));
        assert_eq!(p.matrix()[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn projector_from_plus_state() {
        let p = Projector::from_state(&plus_state());
        for i in 0..2 {
            for j in 0..2 {
                assert!((p.matrix()[(i, j)] - c(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn projector_from_circular_state() {
        // v = (1, i)/sqrt2 -> [[.5, -.5i], [.5i, .5]] by direct outer product.
        let v = SystemState::new(alloc::vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)])
            .unwrap();
        let p = Projector::from_state(&v);
        assert!((p.matrix()[(0, 0)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((p.matrix()[(0, 1)] - c(0.0, -0.5)).norm() < 1e-15);
        assert!((p.matrix()[(1, 0)] - c(0.0, 0.5)).norm() < 1e-15);
        assert!((p.matrix()[(1, 1)] - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn non_normalized_state_rejected() {
        let err = SystemState::new(alloc::vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidState(_)));
    }

    #[test]
    fn validate_identity_passes() {
        let report =
            validate_projector(&CMatrix::identity(3), ProjectorTolerances::default()).unwrap();
        assert!(report.passes);
        assert_eq!(report.idempotency_residual, 0.0);
    }

    #[test]
    fn validate_plus_projector_passes() {
        let m = CMatrix::from_rows(alloc::vec![
            alloc::vec![c(0.5, 0.0), c(0.5, 0.0)],
            alloc::vec![c(0.5, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let report = validate_projector(&m, ProjectorTolerances::default()).unwrap();
        assert!(report.passes);
    }

    #[test]
    fn validate_scaled_projector_fails_with_exact_residual() {
        // M = 0.9 |0><0|: M^2 - M = (0.81 - 0.9)|0><0|, residual 0.09.
        let m = CMatrix::from_rows(alloc::vec![
            alloc::vec![c(0.9, 0.0), c(0.0, 0.0)],
            alloc::vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let report = validate_projector(&m, ProjectorTolerances::default()).unwrap();
        assert!(!report.passes);
        assert!((report.idempotency_residual - 0.09).abs() < 1e-15);
    }

    #[test]
    fn expectation_on_eigenstates_and_superposition() {
        let a = proj0();
        let e0 = expectation(&a, &SystemState::basis(2, 0).unwrap()).unwrap();
        let e1 = expectation(&a, &SystemState::basis(2, 1).unwrap()).unwrap();
        let eplus = expectation(&a, &plus_state()).unwrap();
        assert!((e0 - 1.0).abs() < 1e-15);
        assert!(e1.abs() < 1e-15);
        assert!((eplus - 0.5).abs() < 1e-15);
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let a = proj0();
        let psi = SystemState::basis(3, 0).unwrap();
        assert!(matches!(
            expectation(&a, &psi),
            Err(Error::ShapeMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn weak_value_of_eigenstate_pps_is_eigenvalue() {
        let a = proj0();
        let e0 = SystemState::basis(2, 0).unwrap();
        let w = weak_value(&a, &e0, &e0).unwrap();
        assert!((w - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn anomalous_weak_value_matches_exact_arithmetic() {
        // psi_i = (1,1)/sqrt2, psi_f = (cos(-pi/8), sin(-pi/8)):
        // A_w = 1/(1 - tan(pi/8)) = 1 + 1/sqrt2, outside the spectrum.
        let a = proj0();
        let pre = plus_state();
        let angle = -PI / 8.0;
        let post =
            SystemState::new(alloc::vec![c(angle.cos(), 0.0), c(angle.sin(), 0.0)]).unwrap();
        let w = weak_value(&a, &pre, &post).unwrap();
        assert!((w - c(1.0 + FRAC_1_SQRT_2, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn complex_weak_value_matches_hand_evaluation() {
        // psi_f = (1, i)/sqrt2 gives A_w = 1/(1-i) = 0.5 + 0.5i.
        let a = proj0();
        let pre = plus_state();
        let post = SystemState::new(alloc::vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)])
            .unwrap();
        let w = weak_value(&a, &pre, &post).unwrap();
        assert!((w - c(0.5, 0.5)).norm() < 1e-14);
    }

    #[test]
    fn orthogonal_postselection_is_an_error() {
        let a = proj0();
        let pre = SystemState::basis(2, 0).unwrap();
        let post = SystemState::basis(2, 1).unwrap();
        assert!(matches!(
            weak_value(&a, &pre, &post),
            Err(Error::OrthogonalPostselection { .. })
        ));
        assert!(matches!(
            pancharatnam_phase(&pre, &post),
            Err(Error::OrthogonalPostselection { .. })
        ));
    }

    #[test]
    fn pancharatnam_phase_examples() {
        let pre = plus_state();
        // Identical states: real positive overlap, zero phase.
        let (chi, overlap) = pancharatnam_phase(&pre, &pre).unwrap();
        assert!(chi.abs() < 1e-15);
        assert!((overlap - c(1.0, 0.0)).norm() < 1e-15);

        // psi_f = (1, i)/sqrt2: overlap (1-i)/2, phase -pi/4.
        let post = SystemState::new(alloc::vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)])
            .unwrap();
        let (chi, overlap) = pancharatnam_phase(&pre, &post).unwrap();
        assert!((overlap - c(0.5, -0.5)).norm() < 1e-15);
        assert!((chi + PI / 4.0).abs() < 1e-15);

        // Global phase on the postselection conjugates into chi.
        let post = pre.with_phase(0.3);
        let (chi, _) = pancharatnam_phase(&pre, &post).unwrap();
        assert!((chi + 0.3).abs() < 1e-14);
    }

    #[test]
    fn normalization_constant_examples() {
        let s = c(0.3, 0.1);
        assert!((normalization_constant(c(1.0, 0.0), s).unwrap() - 1.0).abs() < 1e-15);
        assert!((normalization_constant(c(0.0, 0.0), s).unwrap() - 1.0).abs() < 1e-15);
        // A_w = 1 + 1/sqrt2 with vanishing overlap:
        // N = sqrt(1/2 + (1 + 1/sqrt2)^2) = sqrt(2 + sqrt2).
        let n = normalization_constant(c(1.0 + FRAC_1_SQRT_2, 0.0), c(0.0, 0.0)).unwrap();
        assert!((n - (2.0 + core::f64::consts::SQRT_2).sqrt()).abs() < 1e-15);
        assert!((n - 1.84776).abs() < 1e-5);
    }

    #[test]
    fn normalization_constant_guards() {
        let err = normalization_constant(c(0.5, 0.0), c(1.5, 0.0)).unwrap_err();
        assert!(matches!(err, Error::InvalidState(_)));
        // A_w = 0.5 with overlap slightly past -1 would drive N^2 just
        // below zero; the tiny negative is clamped.
        let n = normalization_constant(c(0.5, 0.0), c(-1.0 - 0.9e-10, 0.0)).unwrap();
        assert_eq!(n, 0.0);
    }

    #[test]
    fn weak_value_report_consistency() {
        let a = proj0();
        let pre = plus_state();
        let post = SystemState::new(alloc::vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)])
            .unwrap();
        let s = c(0.6065306597126334, 0.0);
        let report = WeakValueReport::compute(&a, &pre, &post, s).unwrap();
        assert!((report.weak_value - c(0.5, 0.5)).norm() < 1e-14);
        // e^{i chi} reproduces the overlap direction.
        let phase = c(report.phase_chi.cos(), report.phase_chi.sin());
        let direction = report.overlap / report.overlap.norm();
        assert!((phase - direction).norm() < 1e-14);
        // N recomputed from its inputs.
        let n = normalization_constant(report.weak_value, s).unwrap();
        assert!((report.normalization - n).abs() < 1e-15);
    }

    #[test]
    fn from_span_builds_rank_2_projector() {
        let d = 4;
        let v1: Vec<Complex64> =
            alloc::vec![c(1.0, 0.0), c(0.0, 1.0), c(0.5, 0.0), c(0.0, 0.0)];
        let v2: Vec<Complex64> =
            alloc::vec![c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0), c(0.2, -0.3)];
        let p = Projector::from_span(&[v1, v2]).unwrap();
        assert_eq!(p.dim(), d);
        let report = validate_projector(p.matrix(), ProjectorTolerances::default()).unwrap();
        assert!(report.passes, "residuals: {report:?}");
        assert!((p.matrix().trace().re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn from_span_rejects_dependent_vectors() {
        let v1: Vec<Complex64> = alloc::vec![c(1.0, 0.0), c(0.0, 0.0)];
        let v2: Vec<Complex64> = alloc::vec![c(2.0, 0.0), c(0.0, 0.0)];
        assert!(Projector::from_span(&[v1, v2]).is_err());
    }

    #[test]
    fn complement_is_a_projector_and_sums_to_identity() {
        let p = Projector::from_state(&plus_state());
        let q = p.complement();
        let report = validate_projector(q.matrix(), ProjectorTolerances::default()).unwrap();
        assert!(report.passes);
        let sum = p.matrix().add(q.matrix());
        assert!(sum.sub(&CMatrix::identity(2)).max_entry_norm() < 1e-15);
    }
}
