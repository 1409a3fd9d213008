//! Writing a slice point as a convex combination of a `W^(i)`-orbit of a
//! point in the essential part.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::{HullContext, HullError};
use crate::coxeter::{WeylElement, DEFAULT_ENUMERATION_CAP};
use crate::tits::CartanPoint;
use crate::Rational;

/// `x = Σ coefficient · g(y)` with every `g` in `W^(i)` and `y` in the
/// essential part of the slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCertificate {
    pub y: CartanPoint,
    pub terms: Vec<(WeylElement, Rational)>,
}

impl CoverCertificate {
    /// Evaluates the combination.
    pub fn reconstruct(&self) -> CartanPoint {
        let mut acc = CartanPoint::zero(self.y.dim());
        for (g, c) in &self.terms {
            for (a, v) in acc.0.iter_mut().zip(g.act_b().apply(self.y.coords())) {
                *a += c * v;
            }
        }
        acc
    }
}

impl HullContext {
    /// Finds `y` in the essential part of `P^(i)(t)` with
    /// `x ∈ conv(W^(i)·y)`. The search for face boundaries scans group
    /// elements up to length `depth`, and each boundary point found is
    /// confirmed by exact membership.
    pub fn essential_cover(
        &self,
        i: usize,
        t: &Rational,
        x: &CartanPoint,
        depth: usize,
        budget: usize,
    ) -> Result<CoverCertificate, HullError> {
        if i >= self.n() {
            return Err(HullError::BadIndex(i));
        }
        if x.dim() != self.d() || &x.0[i] != t || !self.hull_membership(x, budget)?.is_in() {
            return Err(HullError::NotInSlice);
        }
        let probes = self.group.enumerate_by_length(depth, DEFAULT_ENUMERATION_CAP)?;
        let rows = self.cover_rec(i, x, &probes, depth, budget, self.n() + 1)?;
        Ok(rows)
    }

    fn cover_rec(
        &self,
        i: usize,
        x: &CartanPoint,
        probes: &[WeylElement],
        depth: usize,
        budget: usize,
        fuel: usize,
    ) -> Result<CoverCertificate, HullError> {
        let (word, x0) = self.reduce_to_subchamber(i, x, budget)?;
        let v = self.group.element(&word)?;
        let face = self.minimal_face(&x0, budget)?;
        let u = &face.coset.rep;
        let j_set = &face.coset.j_set;
        // s_k stabilizes the face u W_J h iff s_k u W_J = u W_J.
        let mut stabilizing = Vec::new();
        for k in (0..self.n()).filter(|&k| k != i) {
            let moved = self.group.left_multiply(k, u)?;
            let rep = self.group.min_coset_rep(&moved, j_set)?.rep;
            if self.group.same_element(&rep, u) {
                stabilizing.push(k);
            }
        }
        let datum = self.datum();
        let pick = stabilizing
            .iter()
            .copied()
            .find(|&k| !datum.root_value(k, x0.coords()).is_zero())
            .or_else(|| stabilizing.first().copied());
        let Some(k) = pick else {
            // Trivial stabilizer: the face lies in the essential part.
            return Ok(CoverCertificate { y: x0, terms: alloc::vec![(v, Rational::one())] });
        };
        if fuel == 0 {
            return Err(HullError::Truncated(depth));
        }

        // Walk x0 + σ α_k^∨ to the boundary of the hull.
        let a = datum.root_value(k, x0.coords());
        let mut sigma: Option<Rational> = None;
        for g in probes {
            let gx = g.act_b().apply(x0.coords());
            let slope_col = g.act_b().column(k);
            for j in 0..self.n() {
                let slope = slope_col[j];
                if slope <= 0 {
                    continue;
                }
                let bound = (self.target(j) - &gx[j]) / Rational::from_integer(slope.into());
                if sigma.as_ref().is_none_or(|s| &bound < s) {
                    sigma = Some(bound);
                }
            }
        }
        let sigma = sigma.ok_or(HullError::Truncated(depth))?;
        let mut x_plus = x0.clone();
        x_plus.0[k] += &sigma;
        if !sigma.is_positive() || !self.hull_membership(&x_plus, budget)?.is_in() {
            return Err(HullError::Truncated(depth));
        }
        let mu = (&a + &sigma) / (&a + &sigma + &sigma);
        let inner = self.cover_rec(i, &x_plus, probes, depth, budget, fuel - 1)?;
        let s_k = self.group.generator(k);
        let mut terms: Vec<(WeylElement, Rational)> = Vec::new();
        for (g, c) in &inner.terms {
            let vg = self.group.multiply(&v, g)?;
            push_term(&self.group, &mut terms, vg, &mu * c);
            let vkg = self.group.multiply(&v, &self.group.multiply(&s_k, g)?)?;
            push_term(&self.group, &mut terms, vkg, (Rational::one() - &mu) * c);
        }
        debug_assert!({
            let cert = CoverCertificate { y: inner.y.clone(), terms: terms.clone() };
            &cert.reconstruct() == x
        });
        Ok(CoverCertificate { y: inner.y, terms })
    }
}

fn push_term(
    group: &crate::coxeter::WeylGroup,
    terms: &mut Vec<(WeylElement, Rational)>,
    g: WeylElement,
    c: Rational,
) {
    if c.is_zero() {
        return;
    }
    if let Some(slot) = terms.iter_mut().find(|(h, _)| group.same_element(h, &g)) {
        slot.1 += c;
    } else {
        terms.push((g, c));
    }
}
