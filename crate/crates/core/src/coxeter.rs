//! The Weyl group as a Coxeter system: exact actions on the root lattice and
//! the Cartan space, descents, breadth-first enumeration, cosets and longest
//! words.
//!
//! Convention: `act_b * x = w(x)`, and the word `[i1, .., il]` stands for
//! `w = s_{i1} ... s_{il}`, so the last letter acts first.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::datum::RootDatum;
use crate::gcm::Gcm;
use crate::linalg::IntMatrix;
use crate::Rational;

pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("enumeration exceeded the cap of {0} elements")]
    BudgetExceeded(usize),
    #[error("integer overflow in group action matrices")]
    Overflow,
    #[error("standard subgroup on {0:?} is infinite")]
    InfiniteSubgroup(Vec<usize>),
    #[error("point has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("generator index {0} out of range")]
    BadGenerator(usize),
}

/// Orders `m_ij` of `s_i s_j`; `None` is infinite order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterMatrix {
    pub m: Vec<Vec<Option<u32>>>,
}

pub fn coxeter_matrix(gcm: &Gcm) -> CoxeterMatrix {
    let n = gcm.n();
    let m = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        return Some(1);
                    }
                    match gcm.entry(i, j) * gcm.entry(j, i) {
                        0 => Some(2),
                        1 => Some(3),
                        2 => Some(4),
                        3 => Some(6),
                        _ => None,
                    }
                })
                .collect()
        })
        .collect();
    CoxeterMatrix { m }
}

/// A group element with one reduced word and its two matrix actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    word: Vec<usize>,
    act_q: IntMatrix,
    act_b: IntMatrix,
}

impl WeylElement {
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn act_q(&self) -> &IntMatrix {
        &self.act_q
    }

    pub fn act_b(&self) -> &IntMatrix {
        &self.act_b
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Generators occurring in the reduced word.
    pub fn support(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.word.iter().copied().collect();
        set.into_iter().collect()
    }

    /// Right descent at `i`: `w(α_i)` is a negative root.
    pub fn has_right_descent(&self, i: usize) -> bool {
        let col = self.act_q.column(i);
        col.iter().all(|&v| v <= 0)
    }

    pub fn act(&self, x: &[Rational]) -> Result<Vec<Rational>, CoxeterError> {
        let d = self.act_b.dim();
        if x.len() != d {
            return Err(CoxeterError::DimensionMismatch { expected: d, got: x.len() });
        }
        Ok(self.act_b.apply(x))
    }
}

/// Minimal-length representative of `w W_J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardCoset {
    pub rep: WeylElement,
    pub j_set: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentData {
    pub length: usize,
    pub right: Vec<usize>,
    pub left: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct WeylGroup {
    datum: RootDatum,
    gens_q: Vec<IntMatrix>,
    gens_b: Vec<IntMatrix>,
}

impl WeylGroup {
    pub fn new(datum: &RootDatum) -> Self {
        let n = datum.n();
        let gens_q = (0..n).map(|i| IntMatrix::from_rows(&datum.root_reflection_matrix(i))).collect();
        let gens_b = (0..n).map(|i| IntMatrix::from_rows(&datum.reflection_matrix(i))).collect();
        WeylGroup { datum: datum.clone(), gens_q, gens_b }
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn gcm(&self) -> &Gcm {
        self.datum.gcm()
    }

    pub fn rank(&self) -> usize {
        self.gens_q.len()
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement {
            word: Vec::new(),
            act_q: IntMatrix::identity(self.datum.n()),
            act_b: IntMatrix::identity(self.datum.d()),
        }
    }

    pub fn generator(&self, i: usize) -> WeylElement {
        WeylElement { word: vec![i], act_q: self.gens_q[i].clone(), act_b: self.gens_b[i].clone() }
    }

    /// `w s_i` with the word extended by `i`; only reduced if `i` is an ascent.
    fn times_generator(&self, w: &WeylElement, i: usize) -> Result<WeylElement, CoxeterError> {
        let mut word = w.word.clone();
        word.push(i);
        Ok(WeylElement {
            word,
            act_q: w.act_q.checked_mul(&self.gens_q[i]).ok_or(CoxeterError::Overflow)?,
            act_b: w.act_b.checked_mul(&self.gens_b[i]).ok_or(CoxeterError::Overflow)?,
        })
    }

    /// The element `s_{i1} ... s_{il}` carrying a reduced word.
    pub fn element(&self, word: &[usize]) -> Result<WeylElement, CoxeterError> {
        let n = self.rank();
        let mut act_q = IntMatrix::identity(n);
        let mut act_b = IntMatrix::identity(self.datum.d());
        for &i in word {
            if i >= n {
                return Err(CoxeterError::BadGenerator(i));
            }
            act_q = act_q.checked_mul(&self.gens_q[i]).ok_or(CoxeterError::Overflow)?;
            act_b = act_b.checked_mul(&self.gens_b[i]).ok_or(CoxeterError::Overflow)?;
        }
        let mut w = WeylElement { word: word.to_vec(), act_q, act_b };
        self.normalize_word(&mut w)?;
        Ok(w)
    }

    /// Replaces the word by one built from right descents, which is reduced.
    fn normalize_word(&self, w: &mut WeylElement) -> Result<(), CoxeterError> {
        let mut cur = WeylElement { word: Vec::new(), act_q: w.act_q.clone(), act_b: w.act_b.clone() };
        let mut rev = Vec::new();
        while let Some(i) = (0..self.rank()).find(|&i| cur.has_right_descent(i)) {
            rev.push(i);
            cur = self.times_generator(&cur, i)?;
        }
        rev.reverse();
        w.word = rev;
        Ok(())
    }

    pub fn multiply(&self, u: &WeylElement, v: &WeylElement) -> Result<WeylElement, CoxeterError> {
        let mut word = u.word.clone();
        word.extend_from_slice(&v.word);
        self.element(&word)
    }

    pub fn inverse(&self, w: &WeylElement) -> Result<WeylElement, CoxeterError> {
        let word: Vec<usize> = w.word.iter().rev().copied().collect();
        self.element(&word)
    }

    pub fn right_multiply(&self, w: &WeylElement, i: usize) -> Result<WeylElement, CoxeterError> {
        if w.has_right_descent(i) {
            let mut word = w.word.clone();
            word.push(i);
            self.element(&word)
        } else {
            self.times_generator(w, i)
        }
    }

    pub fn left_multiply(&self, i: usize, w: &WeylElement) -> Result<WeylElement, CoxeterError> {
        let mut word = vec![i];
        word.extend_from_slice(&w.word);
        self.element(&word)
    }

    pub fn descents_and_length(&self, w: &WeylElement) -> Result<DescentData, CoxeterError> {
        let right: Vec<usize> = (0..self.rank()).filter(|&i| w.has_right_descent(i)).collect();
        let inv = self.inverse(w)?;
        let left: Vec<usize> = (0..self.rank()).filter(|&i| inv.has_right_descent(i)).collect();
        Ok(DescentData { length: w.length(), right, left })
    }

    /// All elements of length at most `max_len`, ordered by length and then
    /// lexicographically by their lex-minimal reduced word.
    pub fn enumerate_by_length(&self, max_len: usize, cap: usize) -> Result<Vec<WeylElement>, CoxeterError> {
        let all: Vec<usize> = (0..self.rank()).collect();
        self.enumerate_subgroup(&all, max_len, cap)
    }

    /// Breadth-first enumeration of the standard subgroup `W_J`.
    pub fn enumerate_subgroup(
        &self,
        j_set: &[usize],
        max_len: usize,
        cap: usize,
    ) -> Result<Vec<WeylElement>, CoxeterError> {
        let mut gens: Vec<usize> = j_set.to_vec();
        gens.sort_unstable();
        gens.dedup();
        let mut out = vec![self.identity()];
        let mut layer_start = 0;
        for _ in 0..max_len {
            let mut seen: BTreeSet<IntMatrix> = BTreeSet::new();
            let layer_end = out.len();
            for idx in layer_start..layer_end {
                for &i in &gens {
                    if out[idx].has_right_descent(i) {
                        continue;
                    }
                    let next = self.times_generator(&out[idx], i)?;
                    if seen.insert(next.act_b.clone()) {
                        if out.len() >= cap {
                            return Err(CoxeterError::BudgetExceeded(cap));
                        }
                        out.push(next);
                    }
                }
            }
            if out.len() == layer_end {
                break;
            }
            layer_start = layer_end;
        }
        Ok(out)
    }

    /// Strips right descents in `J` until none remain.
    pub fn min_coset_rep(&self, w: &WeylElement, j_set: &[usize]) -> Result<StandardCoset, CoxeterError> {
        let mut cur = w.clone();
        while let Some(&i) = j_set.iter().filter(|&&i| cur.has_right_descent(i)).min() {
            cur = self.right_multiply(&cur, i)?;
        }
        let mut j = j_set.to_vec();
        j.sort_unstable();
        j.dedup();
        Ok(StandardCoset { rep: cur, j_set: j })
    }

    pub fn is_finite_standard_subgroup(&self, j_set: &[usize]) -> bool {
        j_set.is_empty() || self.gcm().restrict(j_set).is_finite_type()
    }

    /// The longest element of a finite `W_J`, by greedy ascent.
    pub fn longest_word(&self, j_set: &[usize]) -> Result<WeylElement, CoxeterError> {
        if !self.is_finite_standard_subgroup(j_set) {
            return Err(CoxeterError::InfiniteSubgroup(j_set.to_vec()));
        }
        let mut gens = j_set.to_vec();
        gens.sort_unstable();
        let mut w = self.identity();
        while let Some(&i) = gens.iter().find(|&&i| !w.has_right_descent(i)) {
            w = self.times_generator(&w, i)?;
        }
        self.normalize_word(&mut w)?;
        Ok(w)
    }

    /// Union of the components with infinite Weyl group; `W_J` has finite
    /// index exactly when `J` contains it.
    pub fn finite_index_core(&self) -> Vec<usize> {
        finite_index_core(self.gcm())
    }

    pub fn same_element(&self, u: &WeylElement, v: &WeylElement) -> bool {
        u.act_b == v.act_b
    }
}

pub fn finite_index_core(gcm: &Gcm) -> Vec<usize> {
    let mut out: Vec<usize> = gcm
        .classify()
        .into_iter()
        .filter(|c| c.kind != crate::gcm::GcmKind::Finite)
        .flat_map(|c| c.indices)
        .collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::make_kac_datum;
    use crate::gcm::validate_gcm;
    use crate::linalg::rat;

    fn group(rows: &[&[i64]]) -> WeylGroup {
        let g = validate_gcm(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
        WeylGroup::new(&make_kac_datum(&g))
    }

    #[test]
    fn coxeter_table() {
        let g = validate_gcm(&[vec![2, -1, 0], vec![-1, 2, -4], vec![0, -1, 2]]).unwrap();
        let m = coxeter_matrix(&g).m;
        assert_eq!(m[0][1], Some(3));
        assert_eq!(m[0][2], Some(2));
        assert_eq!(m[1][2], None);
        assert_eq!(m[1][1], Some(1));
    }

    #[test]
    fn a2_action_and_descents() {
        let w = group(&[&[2, -1], &[-1, 2]]);
        let s1 = w.generator(0);
        assert_eq!(s1.act(&[rat(1), rat(1)]).unwrap(), vec![rat(0), rat(1)]);
        let s1s2 = w.element(&[0, 1]).unwrap();
        let dd = w.descents_and_length(&s1s2).unwrap();
        assert_eq!(dd, DescentData { length: 2, right: vec![1], left: vec![0] });
        assert_eq!(w.descents_and_length(&w.identity()).unwrap().length, 0);
    }

    #[test]
    fn a2_has_six_elements() {
        let w = group(&[&[2, -1], &[-1, 2]]);
        let all = w.enumerate_by_length(3, DEFAULT_ENUMERATION_CAP).unwrap();
        let words: Vec<&[usize]> = all.iter().map(|e| e.word()).collect();
        assert_eq!(words, vec![&[][..], &[0], &[1], &[0, 1], &[1, 0], &[0, 1, 0]]);
    }

    #[test]
    fn non_reduced_words_collapse() {
        let w = group(&[&[2, -1], &[-1, 2]]);
        let e = w.element(&[0, 1, 0, 1, 0]).unwrap();
        assert_eq!(e.length(), 1);
        assert_eq!(e.word(), &[1]);
    }

    #[test]
    fn min_coset_rep_examples() {
        let w = group(&[&[2, -1], &[-1, 2]]);
        let s2s1 = w.element(&[1, 0]).unwrap();
        assert_eq!(w.min_coset_rep(&s2s1, &[0]).unwrap().rep.word(), &[1]);
        assert!(w.min_coset_rep(&w.generator(0), &[0]).unwrap().rep.is_identity());
    }

    #[test]
    fn longest_words() {
        assert_eq!(group(&[&[2, -1], &[-1, 2]]).longest_word(&[0, 1]).unwrap().length(), 3);
        assert_eq!(group(&[&[2, -1], &[-2, 2]]).longest_word(&[0, 1]).unwrap().length(), 4);
        assert!(matches!(
            group(&[&[2, -2], &[-2, 2]]).longest_word(&[0, 1]),
            Err(CoxeterError::InfiniteSubgroup(_))
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let w = group(&[&[2, -2], &[-2, 2]]);
        assert_eq!(w.enumerate_by_length(10, 5), Err(CoxeterError::BudgetExceeded(5)));
    }
}
