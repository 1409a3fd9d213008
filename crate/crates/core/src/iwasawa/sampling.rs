//! Seeded Haar sampling on `SO(n)` and sampled verification reports.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::dense::Mat;
use super::{check_regular, kostant_project, linear_project, permutohedron_slack, qr_iwasawa};
use super::{pinch_to_target, IwasawaError};

/// Samples are drawn in chunks; chunk `c` uses stream `c` of the seed, so any
/// partition of chunks across workers reproduces the sequential result.
pub const CHUNK_SIZE: usize = 1024;

/// Stream reserved for drawing pinching targets.
const PINCH_STREAM: u64 = u64::MAX;
const PINCH_TARGETS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// `A`-component of the Iwasawa decomposition of `exp(h) k`.
    Nonlinear,
    /// Diagonal of `k diag(h) kᵀ`.
    Linear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PinchSummary {
    pub targets: usize,
    pub max_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub samples: usize,
    /// Most negative permutohedron slack over all samples.
    pub worst_slack: f64,
    /// Interior grid targets with no sample within the coverage radius.
    pub coverage_gaps: Vec<Vec<f64>>,
    /// For `n = 2`: largest gap between attained first coordinates on
    /// `[h_2, h_1]`, endpoints included.
    pub max_gap: Option<f64>,
    pub seed: u64,
    pub pinching: Option<PinchSummary>,
}

pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Haar-distributed element of `SO(n)`: orthonormalized Gaussian matrix,
/// first column negated when the determinant is negative.
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat<f64> {
    loop {
        let rows: Vec<Vec<f64>> =
            (0..n).map(|_| (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()).collect();
        let Ok(qr) = qr_iwasawa(&Mat::from_rows(&rows)) else { continue };
        let mut k = qr.k;
        if k.det() < 0.0 {
            for i in 0..n {
                k[(i, 0)] = -k[(i, 0)];
            }
        }
        return k;
    }
}

/// Projections of `count` samples from chunk `chunk`.
pub fn project_chunk(
    h: &[f64],
    seed: u64,
    chunk: u64,
    count: usize,
    projection: Projection,
) -> Result<Vec<Vec<f64>>, IwasawaError> {
    let n = h.len();
    let mut rng = chunk_rng(seed, chunk);
    (0..count)
        .map(|_| {
            let k = haar_orthogonal(n, &mut rng);
            match projection {
                Projection::Nonlinear => kostant_project(h, &k),
                Projection::Linear => linear_project(h, &k),
            }
        })
        .collect()
}

fn project_all(h: &[f64], samples: usize, seed: u64, projection: Projection) -> Result<Vec<Vec<f64>>, IwasawaError> {
    let mut out = Vec::with_capacity(samples);
    let chunks = samples.div_ceil(CHUNK_SIZE);
    for c in 0..chunks {
        let count = CHUNK_SIZE.min(samples - c * CHUNK_SIZE);
        out.extend(project_chunk(h, seed, c as u64, count, projection)?);
    }
    Ok(out)
}

/// Slack and coverage statistics for a set of projected samples.
pub fn summarize(h: &[f64], projections: &[Vec<f64>], seed: u64) -> VerificationReport {
    let worst_slack = projections
        .iter()
        .map(|x| permutohedron_slack(h, x))
        .fold(f64::INFINITY, f64::min);
    let n = h.len();
    let diameter = h[0] - h[n - 1];
    let (coverage_gaps, max_gap) = match n {
        2 => {
            let mut xs: Vec<f64> = projections.iter().map(|x| x[0]).collect();
            xs.push(h[1]);
            xs.push(h[0]);
            xs.sort_by(f64::total_cmp);
            let gap = xs.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
            let radius = diameter / 100.0;
            let gaps = grid_2(h)
                .into_iter()
                .filter(|t| !projections.iter().any(|x| libm::fabs(x[0] - t[0]) <= radius))
                .collect();
            (gaps, Some(gap))
        }
        3 => {
            let radius = diameter / 10.0;
            let gaps = grid_3(h)
                .into_iter()
                .filter(|t| {
                    !projections.iter().any(|x| {
                        let d2: f64 = x.iter().zip(t).map(|(a, b)| (a - b) * (a - b)).sum();
                        d2 <= radius * radius
                    })
                })
                .collect();
            (gaps, None)
        }
        _ => (Vec::new(), None),
    };
    VerificationReport { samples: projections.len(), worst_slack, coverage_gaps, max_gap, seed, pinching: None }
}

fn grid_2(h: &[f64]) -> Vec<Vec<f64>> {
    (1..100)
        .map(|k| {
            let t = h[1] + (h[0] - h[1]) * k as f64 / 100.0;
            vec![t, -t]
        })
        .collect()
}

/// Points of a square grid in the trace-zero plane lying well inside the
/// hexagon.
fn grid_3(h: &[f64]) -> Vec<Vec<f64>> {
    let diameter = h[0] - h[2];
    let step = diameter / 8.0;
    let mut out = Vec::new();
    for a in -8i32..=8 {
        for b in -8i32..=8 {
            let x0 = a as f64 * step;
            let x1 = b as f64 * step;
            let x = vec![x0, x1, -x0 - x1];
            if permutohedron_slack(h, &x) > diameter / 20.0 {
                out.push(x);
            }
        }
    }
    out
}

/// Rank `2..=4` and a regular traceless `h`.
pub fn check_sampling_input(h: &[f64]) -> Result<(), IwasawaError> {
    if !(2..=4).contains(&h.len()) {
        return Err(IwasawaError::UnsupportedRank { supported: "2..=4", got: h.len() });
    }
    check_regular(h)
}

pub fn verify_nonlinear(h: &[f64], samples: usize, seed: u64) -> Result<VerificationReport, IwasawaError> {
    check_sampling_input(h)?;
    let proj = project_all(h, samples, seed, Projection::Nonlinear)?;
    Ok(summarize(h, &proj, seed))
}

/// As [`verify_nonlinear`] with the linear projection, plus a pass that
/// constructs rotations reaching majorized targets by pinching.
pub fn verify_linear(h: &[f64], samples: usize, seed: u64) -> Result<VerificationReport, IwasawaError> {
    check_sampling_input(h)?;
    let proj = project_all(h, samples, seed, Projection::Linear)?;
    let mut report = summarize(h, &proj, seed);
    report.pinching = Some(pinching_pass(h, seed)?);
    Ok(report)
}

/// Pinches 100 Haar-random majorized targets drawn from a dedicated stream.
pub fn pinching_pass(h: &[f64], seed: u64) -> Result<PinchSummary, IwasawaError> {
    let n = h.len();
    let mut rng = chunk_rng(seed, PINCH_STREAM);
    let mut max_error: f64 = 0.0;
    for _ in 0..PINCH_TARGETS {
        let target = linear_project(h, &haar_orthogonal(n, &mut rng))?;
        let result = pinch_to_target(h, &target)?;
        max_error = max_error.max(result.error);
    }
    Ok(PinchSummary { targets: PINCH_TARGETS, max_error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_samples_are_special_orthogonal() {
        let mut rng = chunk_rng(7, 0);
        for n in 2..=4 {
            let k = haar_orthogonal(n, &mut rng);
            assert!((k.det() - 1.0).abs() < 1e-12);
            assert!(k.adjoint().mul(&k).max_abs_diff(&Mat::identity(n)) < 1e-12);
        }
    }

    #[test]
    fn chunks_are_reproducible() {
        let h = [1.0, 0.0, -1.0];
        let a = project_chunk(&h, 3, 2, 5, Projection::Nonlinear).unwrap();
        let b = project_chunk(&h, 3, 2, 5, Projection::Nonlinear).unwrap();
        assert_eq!(a, b);
        let c = project_chunk(&h, 3, 1, 5, Projection::Nonlinear).unwrap();
        assert_ne!(a, c);
    }
}
