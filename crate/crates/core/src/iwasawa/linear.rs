//! The linear analogue: diagonals of `k diag(h) kᵀ` and their attainment by
//! successive plane rotations.

use alloc::vec::Vec;

use super::dense::Mat;
use super::{check_traceless, permutohedron_slack, IwasawaError};

/// Diagonal of `k · diag(h) · kᵀ`.
pub fn linear_project(h: &[f64], k: &Mat<f64>) -> Result<Vec<f64>, IwasawaError> {
    if h.len() != k.n() {
        return Err(IwasawaError::DimensionMismatch { expected: k.n(), got: h.len() });
    }
    check_traceless(h)?;
    let n = k.n();
    Ok((0..n).map(|i| (0..n).map(|j| k[(i, j)] * k[(i, j)] * h[j]).sum()).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PinchResult {
    pub k: Mat<f64>,
    pub achieved: Vec<f64>,
    pub error: f64,
}

const PINCH_TOLERANCE: f64 = 1e-8;

/// Builds `k ∈ SO(n)` with `diag(k diag(h) kᵀ) = target` for a target in the
/// permutohedron of `h`. Each step fixes the largest remaining target value by
/// rotating two still-free diagonal entries that bracket it.
pub fn pinch_to_target(h: &[f64], target: &[f64]) -> Result<PinchResult, IwasawaError> {
    let n = h.len();
    if target.len() != n {
        return Err(IwasawaError::DimensionMismatch { expected: n, got: target.len() });
    }
    check_traceless(h)?;
    let mut h_sorted = h.to_vec();
    h_sorted.sort_by(|a, b| b.total_cmp(a));
    if permutohedron_slack(&h_sorted, target) < -1e-9 {
        return Err(IwasawaError::TargetOutsideHull);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| target[b].total_cmp(&target[a]));

    // Invariant: g diag(h) gᵀ has diagonal `diag`, and the principal block on
    // the free indices is diagonal.
    let mut g = Mat::<f64>::identity(n);
    let mut diag = h.to_vec();
    let mut free: Vec<usize> = (0..n).collect();
    let mut placed = alloc::vec![0usize; n];
    for &r in order.iter().take(n - 1) {
        let x = target[r];
        free.sort_by(|&a, &b| diag[b].total_cmp(&diag[a]));
        // Adjacent pair (a above, b below) bracketing x; clamp against
        // rounding at the ends.
        let pos = free.iter().position(|&f| diag[f] < x).unwrap_or(free.len() - 1).max(1);
        let (a, b) = (free[pos - 1], free[pos]);
        let (p, q) = (diag[a], diag[b]);
        let c2 = if p > q { ((x - q) / (p - q)).clamp(0.0, 1.0) } else { 1.0 };
        let gamma = libm::acos(libm::sqrt(c2));
        let rot = Mat::plane_rotation(n, a, b, gamma);
        g = rot.mul(&g);
        diag[a] = c2 * p + (1.0 - c2) * q;
        diag[b] = p + q - diag[a];
        placed[r] = a;
        free.retain(|&f| f != a);
    }
    placed[order[n - 1]] = free[0];

    // Row permutation sending position placed[r] to r, sign-corrected to SO(n).
    let mut perm = Mat::<f64>::zeros(n);
    for r in 0..n {
        perm[(r, placed[r])] = 1.0;
    }
    if perm.det() < 0.0 {
        for j in 0..n {
            perm[(0, j)] = -perm[(0, j)];
        }
    }
    let k = perm.mul(&g);
    let achieved = linear_project(h, &k)?;
    let error = achieved.iter().zip(target).map(|(a, b)| libm::fabs(a - b)).fold(0.0, f64::max);
    if error > PINCH_TOLERANCE {
        return Err(IwasawaError::ToleranceNotMet { error, tolerance: PINCH_TOLERANCE, best: achieved });
    }
    Ok(PinchResult { k, achieved, error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_closed_form() {
        let r = 0.7;
        let gamma: f64 = 0.3;
        let k = Mat::plane_rotation(2, 0, 1, gamma);
        let x = linear_project(&[r, -r], &k).unwrap();
        assert!((x[0] - r * (2.0 * gamma).cos()).abs() < 1e-15);
    }

    #[test]
    fn pinch_to_center() {
        let h = [1.0, 0.0, -1.0];
        let res = pinch_to_target(&h, &[0.0, 0.0, 0.0]).unwrap();
        assert!(res.error < 1e-8);
        assert!((res.k.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pinch_rejects_outside() {
        assert_eq!(pinch_to_target(&[1.0, -1.0], &[2.0, -2.0]).unwrap_err(), IwasawaError::TargetOutsideHull);
    }
}
