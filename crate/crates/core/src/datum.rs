//! Kac–Moody root data `(A, Λ, c, h)` with the free and cofree assumption,
//! the Cartan basis `B = {α_1^∨..α_n^∨, h_{n+1}..h_d}` and its dual basis.

use alloc::vec::Vec;

use num_traits::Zero;
use thiserror::Error;

use crate::gcm::{Gcm, GcmError};
use crate::linalg::{self, rat, QMatrix};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatumError {
    #[error(transparent)]
    Gcm(#[from] GcmError),
    #[error("expected {expected} vectors of length {d}")]
    DimensionMismatch { expected: usize, d: usize },
    #[error("pairing <c_{j}, h_{i}> does not match the Cartan entry", i = .0 + 1, j = .1 + 1)]
    PairingMismatch(usize, usize),
    #[error("the vectors c_i are linearly dependent")]
    NotFree,
    #[error("the vectors h_i are linearly dependent")]
    NotCofree,
    #[error("lattice rank {d} is below 2n - rank(A) = {required}")]
    RankTooSmall { d: usize, required: usize },
}

/// A validated free and cofree root datum. `c[i]` are coordinates in a fixed
/// basis of `Λ`, `h[i]` and `extension[k]` in the dual basis of `Λ∨`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    gcm: Gcm,
    d: usize,
    c: Vec<Vec<i64>>,
    h: Vec<Vec<i64>>,
    extension: Vec<Vec<i64>>,
    /// `roots[i][k] = <c_i, b_k>`: the simple root `α_i` in Cartan coordinates.
    roots: Vec<Vec<i64>>,
    /// Columns are the basis vectors `b_k` in `Λ∨` coordinates.
    basis: QMatrix,
    basis_inv: QMatrix,
}

/// Dual basis functionals `ω_1..ω_n, φ_{n+1}..φ_d`, stored as rows in
/// `Λ` coordinates. In Cartan coordinates they are the coordinate
/// projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualBasis {
    pub omega: Vec<Vec<Rational>>,
    pub phi: Vec<Vec<Rational>>,
}

/// The datum with `d = 2n - rank(A)`, `h_i` the first standard vectors, and
/// `c_j` the `j`-th column of `A` padded by indicator coordinates of the
/// non-pivot columns of `A`.
pub fn make_kac_datum(gcm: &Gcm) -> RootDatum {
    let n = gcm.n();
    let a = gcm.to_rational();
    let (_, pivots) = linalg::rref(&a);
    let non_pivot: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let d = n + non_pivot.len();
    let c: Vec<Vec<i64>> = (0..n)
        .map(|j| {
            let mut v: Vec<i64> = (0..n).map(|i| gcm.entry(i, j)).collect();
            v.extend(non_pivot.iter().map(|&p| i64::from(p == j)));
            v
        })
        .collect();
    let h: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..d).map(|k| i64::from(k == i)).collect())
        .collect();
    validate_datum(gcm.clone(), d, c, h).expect("Kac datum is free and cofree")
}

pub fn validate_datum(
    gcm: Gcm,
    d: usize,
    c: Vec<Vec<i64>>,
    h: Vec<Vec<i64>>,
) -> Result<RootDatum, DatumError> {
    let n = gcm.n();
    if c.len() != n || h.len() != n || c.iter().chain(&h).any(|v| v.len() != d) {
        return Err(DatumError::DimensionMismatch { expected: n, d });
    }
    for i in 0..n {
        for j in 0..n {
            let pairing: i64 = c[j].iter().zip(&h[i]).map(|(x, y)| x * y).sum();
            if pairing != gcm.entry(i, j) {
                return Err(DatumError::PairingMismatch(i, j));
            }
        }
    }
    let hq = linalg::to_rational_matrix(&h);
    if linalg::rank(&hq) < n {
        return Err(DatumError::NotCofree);
    }
    if linalg::rank(&linalg::to_rational_matrix(&c)) < n {
        return Err(DatumError::NotFree);
    }
    let required = 2 * n - gcm.rank();
    if d < required {
        return Err(DatumError::RankTooSmall { d, required });
    }

    // Complete {h_i} greedily with standard basis vectors.
    let mut extension: Vec<Vec<i64>> = Vec::new();
    let mut span = hq;
    for k in 0..d {
        if span.len() == d {
            break;
        }
        let e: Vec<i64> = (0..d).map(|j| i64::from(j == k)).collect();
        span.push(e.iter().map(|&v| rat(v)).collect());
        if linalg::rank(&span) == span.len() {
            extension.push(e);
        } else {
            span.pop();
        }
    }

    let columns: Vec<&Vec<i64>> = h.iter().chain(&extension).collect();
    let roots: Vec<Vec<i64>> = c
        .iter()
        .map(|ci| columns.iter().map(|b| ci.iter().zip(b.iter()).map(|(x, y)| x * y).sum()).collect())
        .collect();
    let basis: QMatrix = (0..d).map(|r| columns.iter().map(|b| rat(b[r])).collect()).collect();
    let basis_inv = linalg::inverse(&basis).expect("basis vectors are independent");
    Ok(RootDatum { gcm, d, c, h, extension, roots, basis, basis_inv })
}

impl RootDatum {
    pub fn gcm(&self) -> &Gcm {
        &self.gcm
    }

    pub fn n(&self) -> usize {
        self.gcm.n()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn c(&self) -> &[Vec<i64>] {
        &self.c
    }

    pub fn h(&self) -> &[Vec<i64>] {
        &self.h
    }

    pub fn extension(&self) -> &[Vec<i64>] {
        &self.extension
    }

    /// Simple roots as integer rows in Cartan coordinates.
    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    /// `<α_i, x>` for a point in Cartan coordinates.
    pub fn root_value(&self, i: usize, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (a, v) in self.roots[i].iter().zip(x) {
            if *a != 0 {
                acc += v * rat(*a);
            }
        }
        acc
    }

    /// Matrix of the basis `B` (columns) in `Λ∨` coordinates.
    pub fn basis_matrix(&self) -> &QMatrix {
        &self.basis
    }

    pub fn to_lattice_coords(&self, x: &[Rational]) -> Vec<Rational> {
        linalg::mat_vec(&self.basis, x)
    }

    pub fn from_lattice_coords(&self, y: &[Rational]) -> Vec<Rational> {
        linalg::mat_vec(&self.basis_inv, y)
    }

    pub fn dual_basis(&self) -> DualBasis {
        let n = self.n();
        let mut rows = self.basis_inv.clone();
        let phi = rows.split_off(n);
        DualBasis { omega: rows, phi }
    }

    /// Integer matrix of `s_i` acting on Cartan coordinates.
    pub fn reflection_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let d = self.d;
        (0..d)
            .map(|r| {
                (0..d)
                    .map(|k| i64::from(r == k) - if r == i { self.roots[i][k] } else { 0 })
                    .collect()
            })
            .collect()
    }

    /// Integer matrix of `s_i` acting on the root lattice in the simple root
    /// basis: `s_i(α_j) = α_j - a_ij α_i`.
    pub fn root_reflection_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let n = self.n();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|j| i64::from(r == j) - if r == i { self.gcm.entry(i, j) } else { 0 })
                    .collect()
            })
            .collect()
    }
}

impl DualBasis {
    /// All functionals stacked, `ω` first.
    pub fn rows(&self) -> Vec<Vec<Rational>> {
        let mut r = self.omega.clone();
        r.extend(self.phi.iter().cloned());
        r
    }

    /// Evaluates the `k`-th functional (`ω` then `φ`) on a `Λ∨` vector.
    pub fn eval(&self, k: usize, y: &[Rational]) -> Rational {
        let n = self.omega.len();
        let row = if k < n { &self.omega[k] } else { &self.phi[k - n] };
        linalg::dot(row, y)
    }
}
