//! Level sets `P^(i)(t) = conv(W·h) ∩ {<ω_i, ·> = t}`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use num_traits::Signed;

use super::{HullContext, HullError};
use crate::coxeter::{WeylElement, DEFAULT_ENUMERATION_CAP};
use crate::linalg::IntMatrix;
use crate::tits::{self, CartanPoint};
use crate::Rational;

/// `[lower, upper]`, with `lower = None` meaning unbounded below. `opposite`
/// is the index `j` with `lower = -h_j` when bounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceInterval {
    pub lower: Option<Rational>,
    pub upper: Rational,
    pub opposite: Option<usize>,
}

impl SliceInterval {
    pub fn contains(&self, t: &Rational) -> bool {
        t <= &self.upper && self.lower.as_ref().is_none_or(|l| t >= l)
    }

    pub fn contains_interior(&self, t: &Rational) -> bool {
        t < &self.upper && self.lower.as_ref().is_none_or(|l| t > l)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SliceVertexKind {
    OrbitPoint { w: WeylElement },
    /// Interior point `w(h) + s (w s_k(h) - w(h))` of an edge.
    EdgeCrossing { w: WeylElement, k: usize, s: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceVertex {
    pub kind: SliceVertexKind,
    pub point: CartanPoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceReport {
    pub i: usize,
    pub t: Rational,
    pub interval: SliceInterval,
    pub vertices: Vec<SliceVertex>,
    pub truncated: bool,
    pub essential: Vec<SliceVertex>,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssentialReport {
    pub vertices: Vec<SliceVertex>,
    pub m: usize,
}

/// A slice face written as `g (W_J · representatives)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSymmetry {
    pub translate: WeylElement,
    pub j_set: Vec<usize>,
    pub representatives: Vec<CartanPoint>,
}

impl HullContext {
    fn check_index(&self, i: usize) -> Result<(), HullError> {
        if i >= self.n() {
            return Err(HullError::BadIndex(i));
        }
        Ok(())
    }

    pub fn slice_interval(&self, i: usize) -> Result<SliceInterval, HullError> {
        self.check_index(i)?;
        let upper = self.target(i).clone();
        let core = self.group.finite_index_core();
        if core.contains(&i) {
            return Ok(SliceInterval { lower: None, upper, opposite: None });
        }
        let finite_part: Vec<usize> = (0..self.n()).filter(|k| !core.contains(k)).collect();
        let w_plus = self.group.longest_word(&finite_part)?;
        let mut word = w_plus.word().to_vec();
        word.push(i);
        word.extend_from_slice(w_plus.word());
        let conj = self.group.element(&word)?;
        let j = (0..self.n())
            .find(|&j| self.group.same_element(&conj, &self.group.generator(j)))
            .expect("conjugation by the longest element permutes generators");
        Ok(SliceInterval { lower: Some(-self.target(j).clone()), upper, opposite: Some(j) })
    }

    /// Slice vertices met by the edges incident to the ball of radius
    /// `max_len` around the identity. `truncated` is set when that ball is
    /// not the whole group.
    pub fn slice_vertices(
        &self,
        i: usize,
        t: &Rational,
        max_len: usize,
    ) -> Result<(Vec<SliceVertex>, bool), HullError> {
        self.check_index(i)?;
        let elems = self.group.enumerate_by_length(max_len, DEFAULT_ENUMERATION_CAP)?;
        let mut truncated = false;
        let mut seen: BTreeSet<CartanPoint> = BTreeSet::new();
        let mut out = Vec::new();
        for w in &elems {
            let p = self.orbit_point(w);
            let a = p.0[i].clone();
            if &a == t && seen.insert(p.clone()) {
                out.push(SliceVertex { kind: SliceVertexKind::OrbitPoint { w: w.clone() }, point: p.clone() });
            }
            for k in 0..self.n() {
                if w.has_right_descent(k) {
                    continue;
                }
                if w.length() == max_len {
                    truncated = true;
                }
                let next = self.group.right_multiply(w, k)?;
                let q = self.orbit_point(&next);
                let b = q.0[i].clone();
                let da = &a - t;
                let db = &b - t;
                if (da.is_positive() && db.is_negative()) || (da.is_negative() && db.is_positive()) {
                    let s = &da / (&a - &b);
                    let point = p.lerp(&q, &s);
                    if seen.insert(point.clone()) {
                        out.push(SliceVertex {
                            kind: SliceVertexKind::EdgeCrossing { w: w.clone(), k, s },
                            point,
                        });
                    }
                }
            }
        }
        Ok((out, truncated))
    }

    /// Open subchamber `C^(i)`: `<α_k, x> > 0` for all `k != i`.
    pub fn in_open_subchamber(&self, i: usize, x: &CartanPoint) -> bool {
        let datum = self.datum();
        (0..self.n()).filter(|&k| k != i).all(|k| datum.root_value(k, x.coords()).is_positive())
    }

    pub fn in_closed_subchamber(&self, i: usize, x: &CartanPoint) -> bool {
        let datum = self.datum();
        (0..self.n()).filter(|&k| k != i).all(|k| !datum.root_value(k, x.coords()).is_negative())
    }

    /// Vertices of the slice lying in the open subchamber `C^(i)`, found by
    /// walking ascending edge paths that stay in its closure.
    pub fn essential_vertices(&self, i: usize, t: &Rational) -> Result<EssentialReport, HullError> {
        self.essential_vertices_capped(i, t, DEFAULT_ENUMERATION_CAP)
    }

    pub fn essential_vertices_capped(
        &self,
        i: usize,
        t: &Rational,
        cap: usize,
    ) -> Result<EssentialReport, HullError> {
        let interval = self.slice_interval(i)?;
        if !interval.contains_interior(t) {
            return Err(HullError::NotInterior(t.clone()));
        }
        let mut visited: BTreeSet<IntMatrix> = BTreeSet::new();
        let mut queue: VecDeque<WeylElement> = VecDeque::new();
        let id = self.group.identity();
        visited.insert(id.act_b().clone());
        queue.push_back(id);
        let mut seen: BTreeSet<CartanPoint> = BTreeSet::new();
        let mut out = Vec::new();
        while let Some(w) = queue.pop_front() {
            let p = self.orbit_point(&w);
            let a = p.0[i].clone();
            for k in 0..self.n() {
                if w.has_right_descent(k) {
                    continue;
                }
                let next = self.group.right_multiply(&w, k)?;
                let q = self.orbit_point(&next);
                let b = q.0[i].clone();
                let (kind, point) = if &b < t {
                    let s = (&a - t) / (&a - &b);
                    (SliceVertexKind::EdgeCrossing { w: w.clone(), k, s: s.clone() }, p.lerp(&q, &s))
                } else if &b == t {
                    (SliceVertexKind::OrbitPoint { w: next.clone() }, q.clone())
                } else {
                    if self.in_closed_subchamber(i, &q) && visited.insert(next.act_b().clone()) {
                        if visited.len() > cap {
                            return Err(crate::coxeter::CoxeterError::BudgetExceeded(cap).into());
                        }
                        queue.push_back(next);
                    }
                    continue;
                };
                if self.in_open_subchamber(i, &point) && seen.insert(point.clone()) {
                    out.push(SliceVertex { kind, point });
                }
            }
        }
        let m = out.len();
        Ok(EssentialReport { vertices: out, m })
    }

    /// Interval, truncated vertex list and essential part of one slice.
    pub fn slice_report(&self, i: usize, t: &Rational, max_len: usize) -> Result<SliceReport, HullError> {
        let interval = self.slice_interval(i)?;
        let (vertices, truncated) = self.slice_vertices(i, t, max_len)?;
        let essential = if interval.contains_interior(t) {
            self.essential_vertices(i, t)?.vertices
        } else if interval.contains(t) {
            // At an endpoint the slice is a face of the hull; its vertices in
            // the open subchamber are orbit points.
            vertices.iter().filter(|v| self.in_open_subchamber(i, &v.point)).cloned().collect()
        } else {
            Vec::new()
        };
        let m = essential.len();
        Ok(SliceReport { i, t: t.clone(), interval, vertices, truncated, essential, m })
    }

    /// Reduces `x` into the closed subchamber `C^(i)` using the reflections
    /// `s_k`, `k != i`. Returns `(word, x0)` with `x = w(x0)`.
    pub(crate) fn reduce_to_subchamber(
        &self,
        i: usize,
        x: &CartanPoint,
        budget: usize,
    ) -> Result<(Vec<usize>, CartanPoint), HullError> {
        let datum = self.datum();
        let mut cur = x.clone();
        let mut word = Vec::new();
        while let Some(k) =
            (0..self.n()).find(|&k| k != i && datum.root_value(k, cur.coords()).is_negative())
        {
            if word.len() >= budget {
                return Err(HullError::Truncated(budget));
            }
            cur = tits::reflect(&self.group, k, &cur);
            word.push(k);
        }
        Ok((word, cur))
    }

    /// Writes a slice face vertex set as a union of `g W_J`-orbits of
    /// vertices in the open subchamber.
    pub fn slice_face_symmetry(
        &self,
        i: usize,
        vertices: &[CartanPoint],
        budget: usize,
    ) -> Result<FaceSymmetry, HullError> {
        self.check_index(i)?;
        let first = vertices.first().ok_or(HullError::NotAFace)?;
        let (word, _) = self.reduce_to_subchamber(i, first, budget)?;
        let g = self.group.element(&word)?;
        let g_inv = self.group.inverse(&g)?;
        let set: BTreeSet<CartanPoint> =
            vertices.iter().map(|v| CartanPoint(g_inv.act_b().apply(v.coords()))).collect();
        let j_set: Vec<usize> = (0..self.n())
            .filter(|&k| k != i)
            .filter(|&k| set.iter().all(|p| set.contains(&tits::reflect(&self.group, k, p))))
            .collect();
        let representatives: Vec<CartanPoint> =
            set.iter().filter(|p| self.in_open_subchamber(i, p)).cloned().collect();
        let mut reached: BTreeSet<CartanPoint> = representatives.iter().cloned().collect();
        let mut stack: Vec<CartanPoint> = representatives.clone();
        while let Some(p) = stack.pop() {
            for &k in &j_set {
                let q = tits::reflect(&self.group, k, &p);
                if reached.insert(q.clone()) {
                    stack.push(q);
                }
            }
        }
        if representatives.is_empty() || reached != set {
            return Err(HullError::NotAFace);
        }
        Ok(FaceSymmetry { translate: g, j_set, representatives })
    }
}
