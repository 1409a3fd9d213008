//! Iwasawa decompositions `g = k a u` in the special linear groups and
//! numerical checks of the convexity theorem for the `A`-projection, its
//! linear analogue, constructive attainment, and horosphere witnesses.

mod attain;
pub mod dense;
mod linear;
mod sampling;
mod witness;

use alloc::vec::Vec;

use thiserror::Error;

pub use attain::{attain, AttainResult};
pub use dense::{Mat, Scalar};
pub use linear::{linear_project, pinch_to_target, PinchResult};
pub use sampling::{
    check_sampling_input, chunk_rng, haar_orthogonal, pinching_pass, project_chunk, summarize, verify_linear,
    verify_nonlinear, PinchSummary, Projection, VerificationReport, CHUNK_SIZE,
};
pub use witness::{horosphere_witness, HorosphereWitness, WitnessCase};

use crate::hull::HullError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IwasawaError {
    #[error("matrix is singular to working precision")]
    SingularInput,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("diagonal entries must sum to zero (sum = {0})")]
    NotTraceless(f64),
    #[error("diagonal entries must be strictly decreasing")]
    NotRegular,
    #[error("only ranks {supported} are supported, got n = {got}")]
    UnsupportedRank { supported: &'static str, got: usize },
    #[error("target is not strictly inside the hull")]
    TargetOutsideHull,
    #[error("best error {error:e} exceeds tolerance {tolerance:e}")]
    ToleranceNotMet { error: f64, tolerance: f64, best: Vec<f64> },
    #[error("no witness exists: finite type with d = n")]
    NotApplicable,
    #[error(transparent)]
    Hull(#[from] HullError),
}

/// `g = k · diag(exp(log_a)) · u` with `k` unitary and `u` unit upper
/// triangular.
#[derive(Debug, Clone, PartialEq)]
pub struct IwasawaTriple<T> {
    pub k: Mat<T>,
    pub log_a: Vec<f64>,
    pub u: Mat<T>,
    pub residual: f64,
}

impl<T: Scalar> IwasawaTriple<T> {
    pub fn reconstruct(&self) -> Mat<T> {
        let a: Vec<T> = self.log_a.iter().map(|&v| T::from_real(libm::exp(v))).collect();
        self.k.mul(&self.u.scale_rows(&a))
    }
}

/// Modified Gram–Schmidt with one reorthogonalization pass; the diagonal of
/// the triangular factor is real and positive.
pub fn qr_iwasawa<T: Scalar>(g: &Mat<T>) -> Result<IwasawaTriple<T>, IwasawaError> {
    let n = g.n();
    let scale = (0..n).map(|j| dense::norm(&g.column(j))).fold(0.0, f64::max);
    let mut q = Mat::<T>::zeros(n);
    let mut r = Mat::<T>::zeros(n);
    for j in 0..n {
        let mut v = g.column(j);
        for _pass in 0..2 {
            for i in 0..j {
                let qi = q.column(i);
                let c = dense::inner(&qi, &v);
                r[(i, j)] = r[(i, j)] + c;
                for (x, y) in v.iter_mut().zip(&qi) {
                    *x = *x - c * *y;
                }
            }
        }
        let nv = dense::norm(&v);
        if !(nv > 1e-14 * scale.max(f64::MIN_POSITIVE)) {
            return Err(IwasawaError::SingularInput);
        }
        r[(j, j)] = T::from_real(nv);
        let inv = T::from_real(1.0 / nv);
        let col: Vec<T> = v.iter().map(|&x| x * inv).collect();
        q.set_column(j, &col);
    }
    let diag: Vec<f64> = (0..n).map(|i| r[(i, i)].re()).collect();
    let inv_diag: Vec<T> = diag.iter().map(|&d| T::from_real(1.0 / d)).collect();
    let mut u = r.scale_rows(&inv_diag);
    for i in 0..n {
        u[(i, i)] = T::one();
    }
    let log_a: Vec<f64> = diag.iter().map(|&d| libm::log(d)).collect();
    let mut triple = IwasawaTriple { k: q, log_a, u, residual: 0.0 };
    triple.residual = triple.reconstruct().max_abs_diff(g);
    Ok(triple)
}

/// Closed-form factors of `diag(e^r, e^-r) · R(γ)` in `SL_2`.
pub fn sl2_iwasawa(r: f64, gamma: f64) -> IwasawaTriple<f64> {
    let (s, c) = (libm::sin(gamma), libm::cos(gamma));
    let (ep, em) = (libm::exp(r), libm::exp(-r));
    let rho = libm::sqrt(ep * ep * c * c + em * em * s * s);
    let k = Mat::from_rows(&[alloc::vec![ep * c / rho, -em * s / rho], alloc::vec![em * s / rho, ep * c / rho]]);
    let u = Mat::from_rows(&[alloc::vec![1.0, c * s * (em * em - ep * ep) / (rho * rho)], alloc::vec![0.0, 1.0]]);
    let log_rho = libm::log(rho);
    let mut triple = IwasawaTriple { k, log_a: alloc::vec![log_rho, -log_rho], u, residual: 0.0 };
    let g = Mat::diagonal_matrix(&[ep, em]).mul(&Mat::plane_rotation(2, 0, 1, gamma));
    triple.residual = triple.reconstruct().max_abs_diff(&g);
    triple
}

pub(crate) fn check_traceless(h: &[f64]) -> Result<(), IwasawaError> {
    let sum: f64 = h.iter().sum();
    let scale = h.iter().map(|v| libm::fabs(*v)).fold(1.0, f64::max);
    if libm::fabs(sum) > 1e-9 * scale {
        return Err(IwasawaError::NotTraceless(sum));
    }
    Ok(())
}

/// `log_a` of the Iwasawa decomposition of `exp(diag h) · k`.
pub fn kostant_project<T: Scalar>(h: &[f64], k: &Mat<T>) -> Result<Vec<f64>, IwasawaError> {
    if h.len() != k.n() {
        return Err(IwasawaError::DimensionMismatch { expected: k.n(), got: h.len() });
    }
    check_traceless(h)?;
    let a: Vec<T> = h.iter().map(|&v| T::from_real(libm::exp(v))).collect();
    Ok(qr_iwasawa(&k.scale_rows(&a))?.log_a)
}

/// Diagonal coordinates to simple coroot coordinates of type `A_{n-1}`:
/// the `j`-th coordinate is the partial sum of the first `j + 1` entries.
pub fn diagonal_to_coroot(x: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    x.iter().take(x.len().saturating_sub(1)).map(|v| {
        acc += v;
        acc
    }).collect()
}

pub fn coroot_to_diagonal(c: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(c.len() + 1);
    let mut prev = 0.0;
    for &v in c {
        out.push(v - prev);
        prev = v;
    }
    out.push(-prev);
    out
}

/// Smallest slack of the permutohedron inequalities for `conv(S_n · h)`,
/// `h` decreasing: sorted partial sums of `x` against those of `h`, lowered
/// by any trace mismatch. Non-negative means inside, positive means in the
/// relative interior.
pub fn permutohedron_slack(h: &[f64], x: &[f64]) -> f64 {
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let (mut sx, mut sh) = (0.0, 0.0);
    let mut slack = f64::INFINITY;
    for k in 0..h.len() {
        sx += sorted[k];
        sh += h[k];
        if k + 1 < h.len() {
            slack = slack.min(sh - sx);
        }
    }
    slack - libm::fabs(sh - sx)
}

pub fn check_regular(h: &[f64]) -> Result<(), IwasawaError> {
    check_traceless(h)?;
    if h.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(IwasawaError::NotRegular);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn qr_of_identity_and_diagonal() {
        let t = qr_iwasawa(&Mat::<f64>::identity(3)).unwrap();
        assert_eq!(t.log_a, vec![0.0, 0.0, 0.0]);
        let d = Mat::diagonal_matrix(&[2.0, 0.5, 1.0]);
        let t = qr_iwasawa(&d).unwrap();
        assert!(t.k.max_abs_diff(&Mat::identity(3)) < 1e-15);
        assert!((t.log_a[0] - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn sl2_closed_form_at_quarter_turn() {
        let e = core::f64::consts::E;
        let t = sl2_iwasawa(1.0, core::f64::consts::FRAC_PI_4);
        let rho = ((e * e + 1.0 / (e * e)) / 2.0).sqrt();
        assert!((t.log_a[0] - rho.ln()).abs() < 1e-14);
        assert!((rho - 1.93964).abs() < 1e-5);
        assert!(t.residual < 1e-14);
    }

    #[test]
    fn coordinate_round_trip() {
        let x = [1.0, 0.0, -1.0];
        assert_eq!(diagonal_to_coroot(&x), vec![1.0, 1.0]);
        assert_eq!(coroot_to_diagonal(&[1.0, 1.0]), vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn slack_signs() {
        let h = [1.0, 0.0, -1.0];
        assert!(permutohedron_slack(&h, &[0.0, 0.0, 0.0]) > 0.0);
        assert_eq!(permutohedron_slack(&h, &[0.0, 1.0, -1.0]), 0.0);
        assert!(permutohedron_slack(&h, &[1.5, -0.5, -1.0]) < 0.0);
    }

    #[test]
    fn singular_rejected() {
        let m = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert_eq!(qr_iwasawa(&m), Err(IwasawaError::SingularInput));
    }
}
