//! Cartan points, the fundamental chamber and reduction into it.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::coxeter::{WeylElement, WeylGroup};
use crate::Rational;

pub const DEFAULT_REDUCTION_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TitsError {
    #[error("point has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point is not in the closed fundamental chamber")]
    NotDominant,
    #[error("point is not in the open fundamental chamber")]
    NotRegularDominant,
    #[error("cannot parse coordinate {0:?}")]
    Parse(String),
}

/// Exact coordinates in the Cartan basis of a root datum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanPoint(pub Vec<Rational>);

impl CartanPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        CartanPoint(coords)
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        CartanPoint(coords.iter().map(|&v| crate::linalg::rat(v)).collect())
    }

    pub fn zero(d: usize) -> Self {
        CartanPoint(alloc::vec![Rational::zero(); d])
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `self + s (other - self)`.
    pub fn lerp(&self, other: &CartanPoint, s: &Rational) -> CartanPoint {
        CartanPoint(self.0.iter().zip(&other.0).map(|(a, b)| a + s * (b - a)).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl fmt::Display for CartanPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for CartanPoint {
    type Err = TitsError;

    /// Parses comma-separated rationals such as `"1/2,-1,0"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|part| {
                let part = part.trim();
                Rational::from_str(part).map_err(|_| TitsError::Parse(String::from(part)))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(CartanPoint)
    }
}

/// Outcome of reducing a point into the closed fundamental chamber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChamberReduction {
    /// `x = w(dominant)` where `w = s_{word[0]} s_{word[1]} ...`, and `cell`
    /// is the set of simple roots vanishing on `dominant`.
    InCone { word: Vec<usize>, dominant: CartanPoint, cell: Vec<usize> },
    /// The step budget ran out; the point may lie outside the Tits cone.
    Inconclusive { budget: usize, last: CartanPoint },
}

/// Which simple reflection to apply when several roots are negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pivot {
    Smallest,
    Largest,
}

fn check_dim(group: &WeylGroup, x: &CartanPoint) -> Result<(), TitsError> {
    let d = group.datum().d();
    if x.dim() != d {
        return Err(TitsError::DimensionMismatch { expected: d, got: x.dim() });
    }
    Ok(())
}

/// `s_i(x) = x - <α_i, x> α_i^∨`.
pub fn reflect(group: &WeylGroup, i: usize, x: &CartanPoint) -> CartanPoint {
    let v = group.datum().root_value(i, x.coords());
    let mut out = x.clone();
    out.0[i] -= v;
    out
}

pub fn reduce_to_chamber(
    group: &WeylGroup,
    x: &CartanPoint,
    budget: usize,
) -> Result<ChamberReduction, TitsError> {
    reduce_with_pivot(group, x, budget, Pivot::Smallest)
}

pub fn reduce_with_pivot(
    group: &WeylGroup,
    x: &CartanPoint,
    budget: usize,
    pivot: Pivot,
) -> Result<ChamberReduction, TitsError> {
    check_dim(group, x)?;
    let datum = group.datum();
    let n = datum.n();
    let mut cur = x.clone();
    let mut word = Vec::new();
    loop {
        let negative = |i: &usize| datum.root_value(*i, cur.coords()).is_negative();
        let next = match pivot {
            Pivot::Smallest => (0..n).find(negative),
            Pivot::Largest => (0..n).rev().find(negative),
        };
        let Some(i) = next else { break };
        if word.len() >= budget {
            return Ok(ChamberReduction::Inconclusive { budget, last: cur });
        }
        cur = reflect(group, i, &cur);
        word.push(i);
    }
    let cell = tight_set(group, &cur);
    Ok(ChamberReduction::InCone { word, dominant: cur, cell })
}

fn tight_set(group: &WeylGroup, x: &CartanPoint) -> Vec<usize> {
    let datum = group.datum();
    (0..datum.n()).filter(|&i| datum.root_value(i, x.coords()).is_zero()).collect()
}

pub fn is_dominant(group: &WeylGroup, x: &CartanPoint) -> bool {
    let datum = group.datum();
    (0..datum.n()).all(|i| !datum.root_value(i, x.coords()).is_negative())
}

pub fn is_regular_dominant(group: &WeylGroup, x: &CartanPoint) -> bool {
    let datum = group.datum();
    (0..datum.n()).all(|i| datum.root_value(i, x.coords()).is_positive())
}

/// Stabilizer type `J = {i : <α_i, x> = 0}` of a dominant point.
pub fn cell_type(group: &WeylGroup, dominant: &CartanPoint) -> Result<Vec<usize>, TitsError> {
    check_dim(group, dominant)?;
    if !is_dominant(group, dominant) {
        return Err(TitsError::NotDominant);
    }
    Ok(tight_set(group, dominant))
}

/// Coefficients `c` with `h - w(h) = Σ c_i α_i^∨`; for regular dominant `h`
/// these are positive exactly on the support of `w`.
pub fn weyl_difference(
    group: &WeylGroup,
    h: &CartanPoint,
    w: &WeylElement,
) -> Result<Vec<Rational>, TitsError> {
    check_dim(group, h)?;
    if !is_regular_dominant(group, h) {
        return Err(TitsError::NotRegularDominant);
    }
    let image = w.act_b().apply(h.coords());
    let n = group.datum().n();
    let diff: Vec<Rational> = h.coords().iter().zip(&image).map(|(a, b)| a - b).collect();
    debug_assert!(diff[n..].iter().all(Zero::is_zero));
    let coeffs = diff[..n].to_vec();
    debug_assert!({
        let supp = w.support();
        coeffs.iter().enumerate().all(|(i, c)| c.is_positive() == supp.contains(&i) && !c.is_negative())
    });
    Ok(coeffs)
}
