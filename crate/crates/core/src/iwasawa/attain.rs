//! Constructing `k` with a prescribed `A`-projection of `exp(h) k`.
//!
//! Rank 2 inverts the `SL_2` closed form. Rank 3 slices the hexagon at the
//! first coordinate of the target, finds the essential vertex of that slice
//! with the exact hull machinery, reaches it with one plane rotation, and
//! then moves inside the slice with a rotation in the complementary block.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::dense::Mat;
use super::{check_regular, kostant_project, permutohedron_slack, IwasawaError};
use crate::datum::make_kac_datum;
use crate::gcm::validate_gcm;
use crate::hull::{HullContext, SliceVertexKind};
use crate::tits::CartanPoint;
use crate::Rational;

pub const ATTAIN_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct AttainResult {
    pub k: Mat<f64>,
    pub achieved: Vec<f64>,
    pub error: f64,
    /// Set when the construction missed the tolerance and a derivative-free
    /// search over rotation angles produced `k` instead.
    pub fallback_used: bool,
}

pub fn attain(h: &[f64], target: &[f64]) -> Result<AttainResult, IwasawaError> {
    check_regular(h)?;
    let n = h.len();
    if target.len() != n {
        return Err(IwasawaError::DimensionMismatch { expected: n, got: target.len() });
    }
    if target == h {
        return finish(h, target, Mat::identity(n), false);
    }
    if !(permutohedron_slack(h, target) > 0.0) {
        return Err(IwasawaError::TargetOutsideHull);
    }
    let k = match n {
        2 => attain_rank2(h, target),
        3 => attain_rank3(h, target)?,
        _ => return Err(IwasawaError::UnsupportedRank { supported: "2..=3", got: n }),
    };
    let first = finish(h, target, k, false);
    match first {
        Err(IwasawaError::ToleranceNotMet { .. }) => {
            let k = nelder_mead_rotation(h, target);
            finish(h, target, k, true)
        }
        other => other,
    }
}

fn finish(h: &[f64], target: &[f64], k: Mat<f64>, fallback_used: bool) -> Result<AttainResult, IwasawaError> {
    let achieved = kostant_project(h, &k)?;
    let error = max_err(&achieved, target);
    if error > ATTAIN_TOLERANCE {
        return Err(IwasawaError::ToleranceNotMet { error, tolerance: ATTAIN_TOLERANCE, best: achieved });
    }
    Ok(AttainResult { k, achieved, error, fallback_used })
}

fn max_err(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| libm::fabs(x - y)).fold(0.0, f64::max)
}

/// Angle `γ` with `Π(diag(e^p, e^q) R(γ))` having first entry `x`, for `x`
/// between `p` and `q`.
fn sweep_angle(p: f64, q: f64, x: f64) -> f64 {
    if p == q {
        return 0.0;
    }
    let c2 = ((libm::exp(2.0 * x) - libm::exp(2.0 * q)) / (libm::exp(2.0 * p) - libm::exp(2.0 * q))).clamp(0.0, 1.0);
    libm::acos(libm::sqrt(c2))
}

fn attain_rank2(h: &[f64], target: &[f64]) -> Mat<f64> {
    Mat::plane_rotation(2, 0, 1, sweep_angle(h[0], h[1], target[0]))
}

fn to_rational(x: f64) -> Rational {
    BigRational::from_float(x).expect("finite input")
}

fn rational_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Diagonal vector of a point given in simple coroot coordinates of `A_2`.
fn coroot_point_to_diag(p: &CartanPoint) -> Vec<f64> {
    let c: Vec<f64> = p.coords().iter().map(rational_f64).collect();
    super::coroot_to_diagonal(&c)
}

/// Signed permutation `P ∈ SO(3)` with `exp(h) P = P exp(v)`, where
/// `v_j = h_{σ(j)}` and `v` is given as a permutation of `h`.
fn permutation_for(h: &[f64], v: &[f64]) -> Mat<f64> {
    let n = h.len();
    let mut p = Mat::<f64>::zeros(n);
    let mut used = vec![false; n];
    for j in 0..n {
        let s = (0..n)
            .filter(|&s| !used[s])
            .min_by(|&a, &b| libm::fabs(h[a] - v[j]).total_cmp(&libm::fabs(h[b] - v[j])))
            .expect("v is a permutation of h");
        used[s] = true;
        p[(s, j)] = 1.0;
    }
    if p.det() < 0.0 {
        for i in 0..n {
            p[(i, 0)] = -p[(i, 0)];
        }
    }
    p
}

fn attain_rank3(h: &[f64], target: &[f64]) -> Result<Mat<f64>, IwasawaError> {
    let gcm = validate_gcm(&[vec![2, -1], vec![-1, 2]]).expect("A2 is a Cartan matrix");
    let datum = make_kac_datum(&gcm);
    let hc: Vec<Rational> = super::diagonal_to_coroot(h).into_iter().map(to_rational).collect();
    let ctx = HullContext::new(&datum, CartanPoint::new(hc))?;
    let t = to_rational(target[0]);
    let report = ctx.essential_vertices(0, &t)?;
    let vertex = report.vertices.first().ok_or(IwasawaError::TargetOutsideHull)?;
    let h_prime = coroot_point_to_diag(&vertex.point);

    // Reach the essential vertex: a permutation to an orbit point, then for
    // an edge crossing a rotation in the plane of the two swapped entries.
    let k1 = match &vertex.kind {
        SliceVertexKind::OrbitPoint { w } => permutation_for(h, &coroot_point_to_diag(&ctx.orbit_point(w))),
        SliceVertexKind::EdgeCrossing { w, k, .. } => {
            let v = coroot_point_to_diag(&ctx.orbit_point(w));
            let next = ctx.group().right_multiply(w, *k).map_err(crate::hull::HullError::from)?;
            let v_next = coroot_point_to_diag(&ctx.orbit_point(&next));
            let moved: Vec<usize> = (0..3).filter(|&j| libm::fabs(v[j] - v_next[j]) > 1e-15).collect();
            // The edge crosses the slice, so the first entry is one of the two.
            let q = moved.into_iter().find(|&j| j != 0).unwrap_or(1);
            let gamma = sweep_angle(v[0], v[q], h_prime[0]);
            permutation_for(h, &v).mul(&Mat::plane_rotation(3, 0, q, gamma))
        }
    };
    // Move inside the slice: the segment between h' and its swap of entries
    // 2 and 3 contains the target.
    let gamma2 = sweep_angle(h_prime[1], h_prime[2], target[1]);
    Ok(k1.mul(&Mat::plane_rotation(3, 1, 2, gamma2)))
}

/// Derivative-free minimization of the projection error over products of
/// three plane rotations.
fn nelder_mead_rotation(h: &[f64], target: &[f64]) -> Mat<f64> {
    let n = h.len();
    let planes: Vec<(usize, usize)> = (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).collect();
    let build = |angles: &[f64]| {
        planes
            .iter()
            .zip(angles)
            .fold(Mat::identity(n), |acc, (&(p, q), &a)| acc.mul(&Mat::plane_rotation(n, p, q, a)))
    };
    let cost = |angles: &[f64]| match kostant_project(h, &build(angles)) {
        Ok(x) => x.iter().zip(target).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(),
        Err(_) => f64::INFINITY,
    };
    let dim = planes.len();
    let mut best = (f64::INFINITY, vec![0.0; dim]);
    // A few deterministic restarts.
    for start in 0..8 {
        let x0: Vec<f64> = (0..dim).map(|j| 0.4 * (start as f64) + 0.7 * j as f64).collect();
        let (val, x) = nelder_mead(&cost, x0, 0.5, 4000);
        if val < best.0 {
            best = (val, x);
        }
        if best.0 < 1e-16 {
            break;
        }
    }
    build(&best.1)
}

fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, x0: Vec<f64>, step: f64, iters: usize) -> (f64, Vec<f64>) {
    let dim = x0.len();
    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(dim + 1);
    simplex.push((f(&x0), x0.clone()));
    for j in 0..dim {
        let mut x = x0.clone();
        x[j] += step;
        simplex.push((f(&x), x));
    }
    for _ in 0..iters {
        simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
        if simplex[dim].0 - simplex[0].0 < 1e-20 {
            break;
        }
        let centroid: Vec<f64> =
            (0..dim).map(|j| simplex[..dim].iter().map(|s| s.1[j]).sum::<f64>() / dim as f64).collect();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[dim].1).map(|(c, w)| c + t * (c - w)).collect()
        };
        let xr = along(1.0);
        let fr = f(&xr);
        if fr < simplex[0].0 {
            let xe = along(2.0);
            let fe = f(&xe);
            simplex[dim] = if fe < fr { (fe, xe) } else { (fr, xr) };
        } else if fr < simplex[dim - 1].0 {
            simplex[dim] = (fr, xr);
        } else {
            let xc = along(-0.5);
            let fc = f(&xc);
            if fc < simplex[dim].0 {
                simplex[dim] = (fc, xc);
            } else {
                let best = simplex[0].1.clone();
                for s in simplex.iter_mut().skip(1) {
                    s.1 = s.1.iter().zip(&best).map(|(x, b)| b + 0.5 * (x - b)).collect();
                    s.0 = f(&s.1);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
    simplex.swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank2_center() {
        let res = attain(&[1.0, -1.0], &[0.0, 0.0]).unwrap();
        let c2 = libm::cos(libm::atan2(res.k[(1, 0)], res.k[(0, 0)])).powi(2);
        let e = core::f64::consts::E;
        assert!((c2 - (1.0 - e.powi(-2)) / (e * e - e.powi(-2))).abs() < 1e-12);
        assert!(!res.fallback_used);
    }

    #[test]
    fn rank3_identity_and_interior() {
        let h = [1.0, 0.0, -1.0];
        assert_eq!(attain(&h, &h).unwrap().k, Mat::identity(3));
        for target in [[0.0, 0.0, 0.0], [0.5, 0.2, -0.7], [-0.3, 0.6, -0.3], [0.9, -0.5, -0.4]] {
            let res = attain(&h, &target).unwrap();
            assert!(res.error < 1e-9, "{target:?} {}", res.error);
            assert!(!res.fallback_used);
        }
    }

    #[test]
    fn outside_rejected() {
        assert_eq!(attain(&[1.0, 0.0, -1.0], &[1.5, -0.5, -1.0]).unwrap_err(), IwasawaError::TargetOutsideHull);
    }
}
