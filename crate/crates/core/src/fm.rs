//! Fourier–Motzkin elimination for small systems `A x <= b` over the
//! rationals, with back substitution to a concrete feasible point.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub coeffs: Vec<Rational>,
    pub bound: Rational,
}

impl Inequality {
    pub fn new(coeffs: Vec<Rational>, bound: Rational) -> Self {
        Inequality { coeffs, bound }
    }

    fn normalized(mut self) -> Self {
        let scale = self.coeffs.iter().find(|c| !c.is_zero()).map(Signed::abs);
        if let Some(s) = scale {
            for c in self.coeffs.iter_mut() {
                *c /= &s;
            }
            self.bound /= &s;
        }
        self
    }
}

/// Returns a point satisfying every inequality, or `None` if the system is
/// infeasible. Among feasible values each coordinate is pinned to its lower
/// bound when one exists, which keeps witnesses small.
pub fn feasible_point(system: &[Inequality], vars: usize) -> Option<Vec<Rational>> {
    // stages[k] only involves variables 0..=k (stage `vars` has none left).
    let mut stages: Vec<Vec<Inequality>> = Vec::with_capacity(vars + 1);
    let mut current: Vec<Inequality> = system.iter().cloned().map(Inequality::normalized).collect();
    dedup(&mut current);
    for k in (0..vars).rev() {
        stages.push(current.clone());
        let (mut keep, mut lower, mut upper) = (Vec::new(), Vec::new(), Vec::new());
        for ineq in current {
            if ineq.coeffs[k].is_positive() {
                upper.push(ineq);
            } else if ineq.coeffs[k].is_negative() {
                lower.push(ineq);
            } else {
                keep.push(ineq);
            }
        }
        for lo in &lower {
            for up in &upper {
                let a = -lo.coeffs[k].clone();
                let b = up.coeffs[k].clone();
                let coeffs = lo
                    .coeffs
                    .iter()
                    .zip(&up.coeffs)
                    .map(|(l, u)| l * &b + u * &a)
                    .collect();
                let bound = &lo.bound * &b + &up.bound * &a;
                keep.push(Inequality::new(coeffs, bound).normalized());
            }
        }
        dedup(&mut keep);
        current = keep;
    }
    // With every variable eliminated, each remaining row reads 0 <= bound.
    if current.iter().any(|i| i.bound.is_negative()) {
        return None;
    }
    stages.reverse();
    let mut x: Vec<Rational> = Vec::with_capacity(vars);
    for (k, stage) in stages.iter().enumerate() {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for ineq in stage {
            let c = &ineq.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let mut rest = ineq.bound.clone();
            for (j, xj) in x.iter().enumerate() {
                rest -= &ineq.coeffs[j] * xj;
            }
            let v = rest / c;
            if c.is_positive() {
                hi = Some(match hi {
                    Some(h) if h < v => h,
                    _ => v,
                });
            } else {
                lo = Some(match lo {
                    Some(l) if l > v => l,
                    _ => v,
                });
            }
        }
        let value = match (lo, hi) {
            (Some(l), _) => l,
            (None, Some(h)) => h.min(Rational::zero()),
            (None, None) => Rational::zero(),
        };
        x.push(value);
    }
    Some(x)
}

fn dedup(rows: &mut Vec<Inequality>) {
    rows.retain(|r| !(r.coeffs.iter().all(Zero::is_zero) && !r.bound.is_negative()));
    let mut out: Vec<Inequality> = Vec::with_capacity(rows.len());
    for r in rows.drain(..) {
        if let Some(prev) = out.iter_mut().find(|p| p.coeffs == r.coeffs) {
            if r.bound < prev.bound {
                prev.bound = r.bound;
            }
        } else {
            out.push(r);
        }
    }
    *rows = out;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use alloc::vec;

    #[test]
    fn finds_point_in_triangle() {
        // x >= 1, y >= 1, x + y <= 3
        let sys = vec![
            Inequality::new(vec![rat(-1), rat(0)], rat(-1)),
            Inequality::new(vec![rat(0), rat(-1)], rat(-1)),
            Inequality::new(vec![rat(1), rat(1)], rat(3)),
        ];
        let p = feasible_point(&sys, 2).unwrap();
        assert_eq!(p, vec![rat(1), rat(1)]);
    }

    #[test]
    fn detects_infeasible() {
        let sys = vec![
            Inequality::new(vec![rat(1)], rat(0)),
            Inequality::new(vec![rat(-1)], rat(-1)),
        ];
        assert!(feasible_point(&sys, 1).is_none());
    }
}
