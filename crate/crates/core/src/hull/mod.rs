//! Convex hulls `conv(W·h)` of regular dominant orbits: membership, faces,
//! slices by level sets of a fundamental coweight functional, and their
//! essential parts.

mod cover;
pub mod render;
mod slice;

use alloc::vec::Vec;

use num_traits::Signed;
use thiserror::Error;

use crate::coxeter::{CoxeterError, StandardCoset, WeylElement, WeylGroup};
use crate::datum::{DualBasis, RootDatum};
use crate::tits::{self, CartanPoint, TitsError};
use crate::Rational;

pub use cover::CoverCertificate;
pub use slice::{EssentialReport, FaceSymmetry, SliceInterval, SliceReport, SliceVertex, SliceVertexKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HullError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Tits(#[from] TitsError),
    #[error("point lies in the interior of the hull, not on a proper face")]
    InteriorPoint,
    #[error("level {0} is not in the interior of the slice interval")]
    NotInterior(Rational),
    #[error("point is not in the slice")]
    NotInSlice,
    #[error("vertex set is not closed under the detected reflections")]
    NotAFace,
    #[error("search truncated at depth {0}")]
    Truncated(usize),
    #[error("index {0} out of range")]
    BadIndex(usize),
    #[error("rendering needs rank {expected}, got {got}")]
    UnsupportedRank { expected: usize, got: usize },
    #[error("point is not in the hull")]
    NotInHull,
}

/// A violated defining constraint of the hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    /// The extension coordinate `k` (in `n..d`) differs from that of `h`.
    Phi { k: usize, value: Rational, level: Rational },
    /// `<ω_i, w⁻¹(x)> > <ω_i, h>` with `w = s_{word[0]} s_{word[1]} ...`.
    Omega { i: usize, word: Vec<usize>, value: Rational, bound: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// `x = w(dominant)` and `tight` lists the `i` with `<ω_i, dominant> = h_i`.
    In { tight: Vec<usize>, word: Vec<usize>, dominant: CartanPoint },
    Out(Constraint),
    /// Chamber reduction ran out of steps before reaching a verdict.
    Inconclusive { budget: usize, last: CartanPoint },
}

impl Membership {
    pub fn is_in(&self) -> bool {
        matches!(self, Membership::In { .. })
    }
}

/// The face `conv(w W_J · h)`, of dimension `|J|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceHandle {
    pub coset: StandardCoset,
}

impl FaceHandle {
    pub fn dim(&self) -> usize {
        self.coset.j_set.len()
    }
}

/// Vertices of a face, with a flag when the depth cap cut the list short.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceVertices {
    pub vertices: Vec<CartanPoint>,
    pub truncated: bool,
}

#[derive(Debug, Clone)]
pub struct HullContext {
    group: WeylGroup,
    h: CartanPoint,
    dual: DualBasis,
}

impl HullContext {
    pub fn new(datum: &RootDatum, h: CartanPoint) -> Result<Self, HullError> {
        let group = WeylGroup::new(datum);
        if h.dim() != datum.d() {
            return Err(TitsError::DimensionMismatch { expected: datum.d(), got: h.dim() }.into());
        }
        if !tits::is_regular_dominant(&group, &h) {
            return Err(TitsError::NotRegularDominant.into());
        }
        Ok(HullContext { group, h, dual: datum.dual_basis() })
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    pub fn datum(&self) -> &RootDatum {
        self.group.datum()
    }

    pub fn h(&self) -> &CartanPoint {
        &self.h
    }

    pub fn dual(&self) -> &DualBasis {
        &self.dual
    }

    pub fn n(&self) -> usize {
        self.group.rank()
    }

    pub fn d(&self) -> usize {
        self.h.dim()
    }

    /// `h_i = <ω_i, h>`.
    pub fn target(&self, i: usize) -> &Rational {
        &self.h.0[i]
    }

    /// `<φ_k, h>` for `k` in `n..d`.
    pub fn level(&self, k: usize) -> &Rational {
        &self.h.0[k]
    }

    pub fn orbit_point(&self, w: &WeylElement) -> CartanPoint {
        CartanPoint(w.act_b().apply(self.h.coords()))
    }

    fn check_point(&self, x: &CartanPoint) -> Result<(), HullError> {
        if x.dim() != self.d() {
            return Err(TitsError::DimensionMismatch { expected: self.d(), got: x.dim() }.into());
        }
        Ok(())
    }

    /// Decides `x ∈ conv(W·h)` from the extension equalities and the
    /// coweight inequalities at the dominant representative of `x`.
    pub fn hull_membership(&self, x: &CartanPoint, budget: usize) -> Result<Membership, HullError> {
        self.check_point(x)?;
        let n = self.n();
        for k in n..self.d() {
            if x.0[k] != self.h.0[k] {
                return Ok(Membership::Out(Constraint::Phi {
                    k,
                    value: x.0[k].clone(),
                    level: self.h.0[k].clone(),
                }));
            }
        }
        let datum = self.datum();
        let mut cur = x.clone();
        let mut word: Vec<usize> = Vec::new();
        let omega_out = |i: usize, cur: &CartanPoint, word: &[usize]| {
            Membership::Out(Constraint::Omega {
                i,
                word: word.to_vec(),
                value: cur.0[i].clone(),
                bound: self.h.0[i].clone(),
            })
        };
        if let Some(i) = (0..n).find(|&i| cur.0[i] > self.h.0[i]) {
            return Ok(omega_out(i, &cur, &word));
        }
        while let Some(i) = (0..n).find(|&i| datum.root_value(i, cur.coords()).is_negative()) {
            if word.len() >= budget {
                return Ok(Membership::Inconclusive { budget, last: cur });
            }
            cur = tits::reflect(&self.group, i, &cur);
            word.push(i);
            // A simple reflection only moves coordinate i, upwards.
            if cur.0[i] > self.h.0[i] {
                return Ok(omega_out(i, &cur, &word));
            }
        }
        let tight = (0..n).filter(|&i| cur.0[i] == self.h.0[i]).collect();
        Ok(Membership::In { tight, word, dominant: cur })
    }

    /// Smallest face containing a point of the hull; the whole hull is
    /// returned as the coset `W_I`.
    pub(crate) fn minimal_face(&self, x: &CartanPoint, budget: usize) -> Result<FaceHandle, HullError> {
        match self.hull_membership(x, budget)? {
            Membership::In { tight, word, .. } => {
                let j_set: Vec<usize> = (0..self.n()).filter(|i| !tight.contains(i)).collect();
                let w = self.group.element(&word)?;
                let coset = self.group.min_coset_rep(&w, &j_set)?;
                Ok(FaceHandle { coset })
            }
            Membership::Out(_) => Err(HullError::NotInHull),
            Membership::Inconclusive { .. } => Err(HullError::Truncated(budget)),
        }
    }

    /// The unique standard coset face having `x` in its relative interior.
    pub fn locate_face(&self, x: &CartanPoint, budget: usize) -> Result<FaceHandle, HullError> {
        let face = self.minimal_face(x, budget)?;
        if face.coset.j_set.len() == self.n() {
            return Err(HullError::InteriorPoint);
        }
        Ok(face)
    }

    pub fn face_vertices(&self, face: &FaceHandle, max_len: usize) -> Result<FaceVertices, HullError> {
        let elems = self.group.enumerate_subgroup(&face.coset.j_set, max_len + 1, crate::coxeter::DEFAULT_ENUMERATION_CAP)?;
        let truncated = elems.last().is_some_and(|e| e.length() > max_len);
        let vertices = elems
            .iter()
            .filter(|e| e.length() <= max_len)
            .map(|e| {
                let p = self.orbit_point(e);
                CartanPoint(face.coset.rep.act_b().apply(p.coords()))
            })
            .collect();
        Ok(FaceVertices { vertices, truncated })
    }

    /// `w s_i(h)` for every `i`.
    pub fn vertex_neighbors(&self, w: &WeylElement) -> Result<Vec<CartanPoint>, HullError> {
        (0..self.n())
            .map(|i| Ok(self.orbit_point(&self.group.right_multiply(w, i)?)))
            .collect()
    }

    /// `<ω_i, x>` for a point in Cartan coordinates.
    pub fn omega(&self, i: usize, x: &CartanPoint) -> Rational {
        x.0[i].clone()
    }
}
