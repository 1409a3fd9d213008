mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use common::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use weylhull_core::iwasawa::{
    attain, diagonal_to_coroot, haar_orthogonal, horosphere_witness, kostant_project, linear_project, permutohedron_slack,
    pinch_to_target, qr_iwasawa, sl2_iwasawa, verify_linear, verify_nonlinear, IwasawaError, Mat, WitnessCase,
};
use weylhull_core::hull::{Constraint, Membership};
use weylhull_core::datum::make_kac_datum;
use weylhull_core::tits::CartanPoint;
use weylhull_core::Rational;

fn rot(gamma: f64) -> Mat<f64> {
    Mat::plane_rotation(2, 0, 1, gamma)
}

/// Random `k · a · u` with `a` in `[e^-1, e]` and `u` unit upper triangular
/// with entries in `[-1, 1]`.
fn well_conditioned(n: usize, rng: &mut ChaCha8Rng) -> Mat<f64> {
    let k = haar_orthogonal(n, rng);
    let mut u = Mat::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            u[(i, j)] = rng.random_range(-1.0..1.0);
        }
    }
    let a: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0f64..1.0).exp()).collect();
    k.mul(&u.scale_rows(&a))
}

fn check_triple(g: &Mat<f64>, tol: f64) {
    let t = qr_iwasawa(g).unwrap();
    let n = g.n();
    assert!(t.residual <= tol, "residual {}", t.residual);
    assert!(t.reconstruct().max_abs_diff(g) <= tol);
    let ktk = t.k.adjoint().mul(&t.k);
    assert!(ktk.max_abs_diff(&Mat::identity(n)) <= tol);
    for i in 0..n {
        assert_eq!(t.u[(i, i)], 1.0);
        for j in 0..i {
            assert_eq!(t.u[(i, j)], 0.0);
        }
    }
    assert!(t.log_a.iter().all(|v| v.is_finite()));
}

#[test]
fn factor_invariants_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..100_000 {
        let n = 2 + trial % 3;
        check_triple(&well_conditioned(n, &mut rng), 1e-9);
    }
}

#[test]
fn complex_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..500 {
        let n = rng.random_range(2..=4);
        let rows: Vec<Vec<Complex64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
                    .collect()
            })
            .collect();
        let g = Mat::from_rows(&rows);
        let t = qr_iwasawa(&g).unwrap();
        assert!(t.residual <= 1e-9);
        let kk = t.k.adjoint().mul(&t.k);
        assert!(kk.max_abs_diff(&Mat::identity(n)) <= 1e-9);
        for i in 0..n {
            assert_eq!(t.u[(i, i)], Complex64::new(1.0, 0.0));
        }
    }
}

#[test]
fn qr_examples() {
    let t = qr_iwasawa(&Mat::<f64>::identity(3)).unwrap();
    assert_eq!(t.log_a, vec![0.0; 3]);
    assert!(t.k.max_abs_diff(&Mat::identity(3)) == 0.0);
    let t = qr_iwasawa(&Mat::diagonal_matrix(&[2.0, 0.5, 1.0])).unwrap();
    let want = [2.0f64.ln(), 0.5f64.ln(), 0.0];
    for (a, b) in t.log_a.iter().zip(want) {
        assert!((a - b).abs() < 1e-15);
    }
    assert!(t.u.max_abs_diff(&Mat::identity(3)) == 0.0);
    let singular = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
    assert_eq!(qr_iwasawa(&singular).unwrap_err(), IwasawaError::SingularInput);
}

/// Signed cyclic permutation matrix in `SO(3)` sending `e_j` to `e_{σ(j)}`.
fn cyclic() -> Mat<f64> {
    Mat::from_rows(&[vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]])
}

#[test]
fn permutations_permute_the_diagonal() {
    let h = [1.0, 0.0, -1.0];
    let p = cyclic();
    // a P = P (P⁻¹ a P), and P⁻¹ a P is diagonal with entries h_{σ(j)}.
    let x = kostant_project(&h, &p).unwrap();
    let want: Vec<f64> = (0..3).map(|j| (0..3).map(|i| p[(i, j)] * h[i]).sum()).collect();
    for (a, b) in x.iter().zip(&want) {
        assert!((a - b).abs() < 1e-14);
    }
    let y = linear_project(&h, &p).unwrap();
    let mut sorted = y.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    assert_eq!(sorted, h.to_vec());
    assert_eq!(kostant_project(&h, &Mat::<f64>::identity(3)).unwrap(), h.to_vec());
    assert_eq!(linear_project(&h, &Mat::<f64>::identity(3)).unwrap(), h.to_vec());
    assert!(matches!(kostant_project(&[1.0, 1.0], &Mat::<f64>::identity(2)), Err(IwasawaError::NotTraceless(_))));
}

/// Classical Gram–Schmidt on the columns of a 2×2 matrix; returns the log of
/// the first diagonal entry of the triangular factor.
fn gs_log_rho(g: [[f64; 2]; 2]) -> f64 {
    let c0 = [g[0][0], g[1][0]];
    (c0[0] * c0[0] + c0[1] * c0[1]).sqrt().ln()
}

#[test]
fn sl2_closed_form() {
    let t = sl2_iwasawa(1.0, 0.0);
    assert!((t.log_a[0] - 1.0).abs() < 1e-15 && (t.log_a[1] + 1.0).abs() < 1e-15);
    let t = sl2_iwasawa(1.0, FRAC_PI_2);
    assert!((t.log_a[0] + 1.0).abs() < 1e-15);
    let t = sl2_iwasawa(1.0, FRAC_PI_4);
    let rho = ((1f64.exp().powi(2) + (-1f64).exp().powi(2)) / 2.0).sqrt();
    assert!((t.log_a[0].exp() - rho).abs() < 1e-14);
    assert!((rho - 1.93964).abs() < 1e-5);
    let (e, c, s) = (1f64.exp(), FRAC_PI_4.cos(), FRAC_PI_4.sin());
    assert!((gs_log_rho([[e * c, -e * s], [s / e, c / e]]) - t.log_a[0]).abs() < 1e-14);
}

#[test]
fn sl2_matches_qr() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let r = rng.random_range(-2.0..2.0);
        let gamma = rng.random_range(-PI..PI);
        let closed = sl2_iwasawa(r, gamma);
        let qr = kostant_project(&[r, -r], &rot(gamma)).unwrap();
        assert!((closed.log_a[0] - qr[0]).abs() <= 1e-12);
        assert!((closed.log_a[1] - qr[1]).abs() <= 1e-12);
        assert!(closed.residual <= 1e-12);
    }
}

#[test]
fn projection_is_left_k_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let n = rng.random_range(2..=4);
        let g = well_conditioned(n, &mut rng);
        let k = haar_orthogonal(n, &mut rng);
        let a = qr_iwasawa(&g).unwrap().log_a;
        let b = qr_iwasawa(&k.mul(&g)).unwrap().log_a;
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-10);
        }
    }
}

#[test]
fn rank2_images_coincide_as_sets_but_not_pointwise() {
    let h = [1.0, -1.0];
    let nl = verify_nonlinear(&h, 4000, 1).unwrap();
    let li = verify_linear(&h, 4000, 1).unwrap();
    for r in [&nl, &li] {
        assert!(r.worst_slack >= -1e-9);
        assert!(r.max_gap.unwrap() < 0.01);
        assert!(r.coverage_gaps.is_empty());
    }
    let gamma = PI / 3.0;
    let log_rho = sl2_iwasawa(1.0, gamma).log_a[0];
    let linear = linear_project(&h, &rot(gamma)).unwrap()[0];
    assert!((linear - (2.0 * gamma).cos()).abs() < 1e-14);
    assert!((log_rho - linear).abs() > 0.1);
}

#[test]
fn rank3_samples_lie_in_the_exact_hexagon() {
    // h = (1, 0, -1) has coroot coordinates (1, 1), the point with all
    // simple root values 1 in the A2 Kac datum.
    let ctx = hull(&a2());
    assert_eq!(ctx.h(), &CartanPoint::from_integers(&[1, 1]));
    let h = [1.0, 0.0, -1.0];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let shrink = 1.0 - 1e-8;
    for _ in 0..2000 {
        let k = haar_orthogonal(3, &mut rng);
        for x in [kostant_project(&h, &k).unwrap(), linear_project(&h, &k).unwrap()] {
            let c = diagonal_to_coroot(&x);
            let p = CartanPoint::new(c.iter().map(|v| Rational::from_float(v * shrink).unwrap()).collect());
            assert!(ctx.hull_membership(&p, 100).unwrap().is_in(), "{x:?}");
            assert!(permutohedron_slack(&h, &x) >= -1e-9);
        }
    }
    // The identity sample lands on the vertex h itself.
    let x = kostant_project(&h, &Mat::<f64>::identity(3)).unwrap();
    let c: Vec<Rational> = diagonal_to_coroot(&x).iter().map(|v| Rational::from_float(*v).unwrap()).collect();
    assert_eq!(CartanPoint::new(c), *ctx.h());
}

#[test]
fn slack_signs() {
    let h = [1.0, 0.0, -1.0];
    assert!(permutohedron_slack(&h, &[0.0, 0.0, 0.0]) > 0.0);
    assert_eq!(permutohedron_slack(&h, &[0.0, 1.0, -1.0]), 0.0);
    assert!(permutohedron_slack(&h, &[1.5, -0.5, -1.0]) < 0.0);
}

#[test]
fn attain_rank2_inverts_closed_form() {
    let r = 1.0f64;
    let res = attain(&[r, -r], &[0.0, 0.0]).unwrap();
    assert!(res.error <= 1e-6);
    assert!(!res.fallback_used);
    let cos2 = res.k[(0, 0)].powi(2);
    let want = (1.0 - (-2.0f64).exp()) / (2.0f64.exp() - (-2.0f64).exp());
    assert!((cos2 - want).abs() < 1e-9);
    let gamma = res.k[(1, 0)].atan2(res.k[(0, 0)]);
    assert!(sl2_iwasawa(r, gamma).log_a[0].abs() < 1e-9);
    let id = attain(&[r, -r], &[r, -r]).unwrap();
    assert!(id.k.max_abs_diff(&Mat::identity(2)) == 0.0);
}

#[test]
fn attain_rank3_random_targets() {
    let h = [1.0, 0.0, -1.0];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 40 {
        let x0 = rng.random_range(-1.0..1.0);
        let x1 = rng.random_range(-1.0..1.0);
        let t = [x0, x1, -x0 - x1];
        if permutohedron_slack(&h, &t) <= 1e-3 {
            continue;
        }
        done += 1;
        let res = attain(&h, &t).unwrap();
        let back = kostant_project(&h, &res.k).unwrap();
        let err = back.iter().zip(&t).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-6, "{t:?} {err}");
        assert!((res.k.det() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn attain_barycenter_of_adjacent_vertices() {
    let h = [1.0, 0.0, -1.0];
    // h and s_1 h = (0, 1, -1) are adjacent; their midpoint is on an edge.
    let mid = [0.5, 0.5, -1.0];
    let res = attain(&h, &mid);
    assert_eq!(res.unwrap_err(), IwasawaError::TargetOutsideHull);
    // Slightly inside, a single rotation in the first Levi block suffices.
    let near = [0.5, 0.5 - 1e-3, -1.0 + 1e-3];
    let res = attain(&h, &near).unwrap();
    let r = verify_nonlinear(&h, 100, 1).unwrap();
    assert!(r.worst_slack >= -1e-9);
    assert!(res.error <= 1e-6);
}

#[test]
fn attain_rejects_outside() {
    assert_eq!(attain(&[1.0, 0.0, -1.0], &[2.0, 0.0, -2.0]).unwrap_err(), IwasawaError::TargetOutsideHull);
    assert_eq!(attain(&[0.0, 1.0, -1.0], &[0.0, 0.0, 0.0]).unwrap_err(), IwasawaError::NotRegular);
}

#[test]
fn pinching_hits_majorized_targets() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in [2usize, 3, 4] {
        let mut h: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let mean = h.iter().sum::<f64>() / n as f64;
        h.iter_mut().for_each(|v| *v -= mean);
        h.sort_by(|a, b| b.total_cmp(a));
        for _ in 0..50 {
            // Doubly stochastic image of h is majorized by h.
            let k = haar_orthogonal(n, &mut rng);
            let target = linear_project(&h, &k).unwrap();
            let res = pinch_to_target(&h, &target).unwrap();
            let back = linear_project(&h, &res.k).unwrap();
            let err = back.iter().zip(&target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err <= 1e-8, "{h:?} {target:?}");
            assert!((res.k.det() - 1.0).abs() < 1e-9);
        }
    }
    let res = pinch_to_target(&[1.0, 0.0, -1.0], &[0.0, 0.0, 0.0]).unwrap();
    assert!(res.error <= 1e-8);
}

#[test]
fn sampling_is_reproducible() {
    let h = [1.0, 0.0, -1.0];
    assert_eq!(verify_nonlinear(&h, 2000, 42).unwrap(), verify_nonlinear(&h, 2000, 42).unwrap());
    assert_ne!(verify_nonlinear(&h, 2000, 42).unwrap(), verify_nonlinear(&h, 2000, 43).unwrap());
    assert_eq!(verify_nonlinear(&[0.0, 1.0, -1.0], 10, 1).unwrap_err(), IwasawaError::NotRegular);
}

#[test]
fn witness_square_indefinite() {
    let datum = make_kac_datum(&hyperbolic());
    let w = horosphere_witness(&datum).unwrap();
    assert_eq!(w.case, WitnessCase::SquareIndefinite);
    // λ = (-1, -1) solves Aᵀλ = (1, 1).
    assert_eq!(w.h, CartanPoint::from_integers(&[-1, -1]));
    let at_lambda: Vec<i64> = (0..2).map(|j| -(0..2).map(|i| hyperbolic().entry(i, j)).sum::<i64>()).collect();
    assert_eq!(at_lambda, vec![1, 1]);
    assert!(w.violated.iter().any(|c| matches!(c, Constraint::Omega { i: 0, .. })));
    assert!(matches!(w.membership, Membership::Out(_)));
}

#[test]
fn witness_extra_rank() {
    // A1 with a rank-2 lattice: c_1 = (2, 0), h_1 = (1, 0).
    let datum = weylhull_core::datum::validate_datum(a1(), 2, vec![vec![2, 0]], vec![vec![1, 0]]).unwrap();
    let w = horosphere_witness(&datum).unwrap();
    assert_eq!(w.case, WitnessCase::ExtraRank);
    assert!(matches!(w.membership, Membership::Out(Constraint::Phi { .. })));
    for g in [affine_a1(), affine_a2()] {
        let w = horosphere_witness(&make_kac_datum(&g)).unwrap();
        assert_eq!(w.case, WitnessCase::ExtraRank);
        assert!(!w.violated.is_empty());
        assert!(matches!(w.membership, Membership::Out(_)));
    }
    assert_eq!(horosphere_witness(&make_kac_datum(&a2())).unwrap_err(), IwasawaError::NotApplicable);
}
