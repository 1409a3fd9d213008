//! Regular dominant `h` whose orbit hull misses the origin, showing that the
//! double coset `K U_+ K` is not the whole group.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::IwasawaError;
use crate::datum::RootDatum;
use crate::hull::{Constraint, HullContext, Membership};
use crate::linalg::{self, rat, QMatrix};
use crate::tits::{CartanPoint, DEFAULT_REDUCTION_BUDGET};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessCase {
    /// `d > n`: a kernel direction of all simple roots is added to a
    /// chamber point.
    ExtraRank,
    /// `d = n` with a non-finite component: `h = Σ λ_i α_i^∨` where
    /// `Aᵀ λ > 0` forces a negative coefficient.
    SquareIndefinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HorosphereWitness {
    pub case: WitnessCase,
    pub h: CartanPoint,
    /// Every defining constraint of the hull that fails at the origin.
    pub violated: Vec<Constraint>,
    /// Membership verdict for the origin, naming the constraint that fired.
    pub membership: Membership,
}

pub fn horosphere_witness(datum: &RootDatum) -> Result<HorosphereWitness, IwasawaError> {
    let (n, d) = (datum.n(), datum.d());
    let (case, h) = if d > n {
        (WitnessCase::ExtraRank, extra_rank_point(datum))
    } else if datum.gcm().is_finite_type() {
        return Err(IwasawaError::NotApplicable);
    } else {
        let at = linalg::transpose(&datum.gcm().to_rational());
        let ones = alloc::vec![Rational::one(); n];
        let lambda = linalg::solve(&at, &ones).expect("free and cofree with d = n forces det A != 0");
        (WitnessCase::SquareIndefinite, CartanPoint::new(lambda))
    };
    let ctx = HullContext::new(datum, h.clone())?;
    let violated = (0..d)
        .filter_map(|k| {
            let v = &h.0[k];
            if k < n && v.is_negative() {
                Some(Constraint::Omega { i: k, word: Vec::new(), value: Rational::zero(), bound: v.clone() })
            } else if k >= n && !v.is_zero() {
                Some(Constraint::Phi { k, value: Rational::zero(), level: v.clone() })
            } else {
                None
            }
        })
        .collect();
    let membership = ctx.hull_membership(&CartanPoint::zero(d), DEFAULT_REDUCTION_BUDGET)?;
    Ok(HorosphereWitness { case, h, violated, membership })
}

/// `h_1 + v` with `<α_i, h_1> = 1` for all `i` and `v` in the common kernel
/// of the simple roots, chosen so that some `ω_j` is negative when the
/// kernel allows it and some extension coordinate is nonzero otherwise.
fn extra_rank_point(datum: &RootDatum) -> CartanPoint {
    let (n, d) = (datum.n(), datum.d());
    let roots: QMatrix = linalg::to_rational_matrix(datum.roots());
    let (_, pivots) = linalg::rref(&roots);
    let mut h1 = alloc::vec![Rational::zero(); d];
    // Particular solution with free variables zero: the reduced rows of
    // [R | 1] give the pivot values.
    let aug: QMatrix = roots.iter().map(|r| {
        let mut r = r.clone();
        r.push(Rational::one());
        r
    }).collect();
    let (red_aug, _) = linalg::rref(&aug);
    for (row, &p) in pivots.iter().enumerate() {
        h1[p] = red_aug[row][d].clone();
    }
    let kernel = linalg::nullspace(&roots, d);
    if let Some((v, j)) = kernel.iter().find_map(|v| (0..n).find(|&j| !v[j].is_zero()).map(|j| (v, j))) {
        let sigma = (rat(-1) - &h1[j]) / &v[j];
        let h: Vec<Rational> = h1.iter().zip(v).map(|(a, b)| a + &sigma * b).collect();
        return CartanPoint::new(h);
    }
    let v = &kernel[0];
    let k = (n..d).find(|&k| !v[k].is_zero()).expect("kernel vector is nonzero");
    // Shift so that coordinate k of h is exactly 1.
    let sigma = (Rational::one() - &h1[k]) / &v[k];
    CartanPoint::new(h1.iter().zip(v).map(|(a, b)| a + &sigma * b).collect())
}
