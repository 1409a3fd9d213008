//! Generalized Cartan matrices: validation, indecomposable components,
//! finite/affine/indefinite classification and symmetrizers.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::fm::{feasible_point, Inequality};
use crate::linalg::{self, rat, QMatrix};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GcmError {
    #[error("matrix is empty or not square")]
    NotSquare,
    #[error("diagonal entry a[{i},{i}] is not 2", i = .0 + 1)]
    DiagonalNotTwo(usize),
    #[error("off-diagonal entry a[{},{}] is positive", .0 + 1, .1 + 1)]
    PositiveOffDiagonal(usize, usize),
    #[error("a[{},{}] is zero but its transpose entry is not", .0 + 1, .1 + 1)]
    AsymmetricZero(usize, usize),
    #[error("matrix is not symmetrizable: cycle {0:?} has inconsistent ratios")]
    NotSymmetrizable(Vec<usize>),
}

/// A validated generalized Cartan matrix. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gcm {
    entries: Vec<Vec<i64>>,
    components: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GcmKind {
    Finite,
    Affine,
    Indefinite,
}

/// Classification of one indecomposable component together with the
/// positive vector certifying it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentType {
    pub indices: Vec<usize>,
    pub kind: GcmKind,
    pub witness: Vec<Rational>,
}

/// `A = D B` with `D` positive diagonal and `B` symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symmetrizer {
    pub d: Vec<Rational>,
    pub b: QMatrix,
}

pub fn validate_gcm(matrix: &[Vec<i64>]) -> Result<Gcm, GcmError> {
    let n = matrix.len();
    if n == 0 || matrix.iter().any(|r| r.len() != n) {
        return Err(GcmError::NotSquare);
    }
    for i in 0..n {
        for j in 0..n {
            let a = matrix[i][j];
            if i == j {
                if a != 2 {
                    return Err(GcmError::DiagonalNotTwo(i));
                }
            } else if a > 0 {
                return Err(GcmError::PositiveOffDiagonal(i, j));
            } else if (a == 0) != (matrix[j][i] == 0) {
                let (zi, zj) = if a == 0 { (i, j) } else { (j, i) };
                return Err(GcmError::AsymmetricZero(zi, zj));
            }
        }
    }
    let components = components_of(matrix);
    Ok(Gcm { entries: matrix.to_vec(), components })
}

fn components_of(matrix: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = matrix.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if matrix[i][j] != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut slot: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match slot[r] {
            Some(k) => out[k].push(i),
            None => {
                slot[r] = Some(out.len());
                out.push(vec![i]);
            }
        }
    }
    out
}

impl Gcm {
    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    /// Indecomposable components, each sorted, ordered by smallest index.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn to_rational(&self) -> QMatrix {
        linalg::to_rational_matrix(&self.entries)
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.to_rational())
    }

    /// The principal submatrix on `indices` (in the given order).
    pub fn restrict(&self, indices: &[usize]) -> Gcm {
        let sub: Vec<Vec<i64>> =
            indices.iter().map(|&i| indices.iter().map(|&j| self.entries[i][j]).collect()).collect();
        let components = components_of(&sub);
        Gcm { entries: sub, components }
    }

    pub fn classify(&self) -> Vec<ComponentType> {
        self.components
            .iter()
            .map(|comp| {
                let (kind, witness) = classify_indecomposable(&self.restrict(comp).to_rational());
                ComponentType { indices: comp.clone(), kind, witness }
            })
            .collect()
    }

    pub fn is_finite_type(&self) -> bool {
        self.classify().iter().all(|c| c.kind == GcmKind::Finite)
    }

    pub fn symmetrizer(&self) -> Result<Symmetrizer, GcmError> {
        let n = self.n();
        let a = &self.entries;
        let mut d: Vec<Rational> = vec![Rational::zero(); n];
        let mut parent: Vec<Option<usize>> = vec![None; n];
        for comp in &self.components {
            let root = comp[0];
            d[root] = Rational::one();
            let mut seen = vec![false; n];
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(i) = queue.pop_front() {
                for j in 0..n {
                    if j != i && a[i][j] != 0 && !seen[j] {
                        seen[j] = true;
                        parent[j] = Some(i);
                        d[j] = &d[i] * Rational::new(a[j][i].into(), a[i][j].into());
                        queue.push_back(j);
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if a[i][j] != 0 && &d[j] * rat(a[i][j]) != &d[i] * rat(a[j][i]) {
                    return Err(GcmError::NotSymmetrizable(tree_cycle(&parent, i, j)));
                }
            }
        }
        for comp in &self.components {
            let mut lcm = num_bigint::BigInt::one();
            for &i in comp {
                lcm = lcm.lcm(d[i].denom());
            }
            let mut g = num_bigint::BigInt::zero();
            for &i in comp {
                g = g.gcd(&(&d[i] * &lcm).to_integer());
            }
            for &i in comp {
                d[i] = Rational::from_integer((&d[i] * &lcm).to_integer() / &g);
            }
        }
        let b = (0..n)
            .map(|i| (0..n).map(|j| rat(a[i][j]) / &d[i]).collect())
            .collect();
        Ok(Symmetrizer { d, b })
    }
}

/// The closed walk formed by the tree paths from `i` and `j` to their common
/// ancestor together with the edge `i - j`.
fn tree_cycle(parent: &[Option<usize>], i: usize, j: usize) -> Vec<usize> {
    let path = |mut x: usize| {
        let mut p = vec![x];
        while let Some(y) = parent[x] {
            p.push(y);
            x = y;
        }
        p
    };
    let pi = path(i);
    let pj = path(j);
    let lca = *pi.iter().find(|x| pj.contains(x)).expect("same component");
    let mut cycle: Vec<usize> = pi.iter().copied().take_while(|&x| x != lca).collect();
    cycle.push(lca);
    let back: Vec<usize> = pj.iter().copied().take_while(|&x| x != lca).collect();
    cycle.extend(back.into_iter().rev());
    cycle
}

fn principal_minors_positive(a: &[Vec<Rational>], skip_full: bool) -> bool {
    let n = a.len();
    let full = (1u64 << n) - 1;
    (1..=full).filter(|&mask| !(skip_full && mask == full)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sub: QMatrix = idx.iter().map(|&i| idx.iter().map(|&j| a[i][j].clone()).collect()).collect();
        linalg::det(&sub).is_positive()
    })
}

fn classify_indecomposable(a: &[Vec<Rational>]) -> (GcmKind, Vec<Rational>) {
    let n = a.len();
    let det = linalg::det(a);
    let proper_positive = principal_minors_positive(a, true);
    if proper_positive && det.is_positive() {
        let ones = vec![Rational::one(); n];
        let lambda = linalg::solve(a, &ones).expect("nonsingular");
        return (GcmKind::Finite, linalg::primitive_integer(&lambda));
    }
    if proper_positive && det.is_zero() {
        let mut v = linalg::nullspace(a, n).remove(0);
        if v.iter().any(Signed::is_negative) {
            v.iter_mut().for_each(|x| *x = -x.clone());
        }
        return (GcmKind::Affine, linalg::primitive_integer(&v));
    }
    // lambda >= 1 and A lambda <= -1
    let mut system = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut c = vec![Rational::zero(); n];
        c[i] = rat(-1);
        system.push(Inequality::new(c, rat(-1)));
    }
    for row in a {
        system.push(Inequality::new(row.clone(), rat(-1)));
    }
    let lambda = feasible_point(&system, n).expect("indefinite components admit a witness");
    (GcmKind::Indefinite, linalg::primitive_integer(&lambda))
}

/// Checks a witness against the defining inequalities of its tag.
pub fn witness_holds(a: &[Vec<Rational>], kind: GcmKind, lambda: &[Rational]) -> bool {
    if !linalg::is_positive(lambda) {
        return false;
    }
    let image = linalg::mat_vec(a, lambda);
    match kind {
        GcmKind::Finite => linalg::is_positive(&image),
        GcmKind::Affine => linalg::is_zero_vec(&image),
        GcmKind::Indefinite => linalg::is_negative(&image),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(rows: &[&[i64]]) -> Gcm {
        validate_gcm(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn validation_errors() {
        assert_eq!(validate_gcm(&[vec![2, -1], vec![0, 2]]), Err(GcmError::AsymmetricZero(1, 0)));
        assert_eq!(validate_gcm(&[vec![3]]), Err(GcmError::DiagonalNotTwo(0)));
        assert_eq!(validate_gcm(&[vec![2, 1], vec![1, 2]]), Err(GcmError::PositiveOffDiagonal(0, 1)));
        assert_eq!(validate_gcm(&[vec![2, -1]]), Err(GcmError::NotSquare));
    }

    #[test]
    fn component_order() {
        assert_eq!(g(&[&[2, 0], &[0, 2]]).components(), &[vec![0], vec![1]]);
        assert_eq!(g(&[&[2, -1], &[-1, 2]]).components(), &[vec![0, 1]]);
        let m = g(&[&[2, 0, 0], &[0, 2, -2], &[0, -2, 2]]);
        assert_eq!(m.components(), &[vec![0], vec![1, 2]]);
        let m = g(&[&[2, 0, -1], &[0, 2, 0], &[-1, 0, 2]]);
        assert_eq!(m.components(), &[vec![0, 2], vec![1]]);
    }

    #[test]
    fn classify_small_cases() {
        let t = g(&[&[2]]).classify();
        assert_eq!((t[0].kind, t[0].witness.clone()), (GcmKind::Finite, vec![rat(1)]));
        let t = g(&[&[2, -2], &[-2, 2]]).classify();
        assert_eq!((t[0].kind, t[0].witness.clone()), (GcmKind::Affine, vec![rat(1), rat(1)]));
        let t = g(&[&[2, -3], &[-3, 2]]).classify();
        assert_eq!((t[0].kind, t[0].witness.clone()), (GcmKind::Indefinite, vec![rat(1), rat(1)]));
    }

    #[test]
    fn symmetrizer_b2() {
        let s = g(&[&[2, -1], &[-2, 2]]).symmetrizer().unwrap();
        assert_eq!(s.d, vec![rat(1), rat(2)]);
        assert_eq!(s.b, linalg::to_rational_matrix(&[vec![2, -1], vec![-1, 1]]));
    }

    #[test]
    fn non_symmetrizable_cycle() {
        let m = g(&[&[2, -1, -1], &[-2, 2, -1], &[-1, -1, 2]]);
        match m.symmetrizer() {
            Err(GcmError::NotSymmetrizable(c)) => {
                assert_eq!(c.len(), 3);
                let mut s = c.clone();
                s.sort();
                assert_eq!(s, vec![0, 1, 2]);
            }
            other => panic!("{other:?}"),
        }
    }
}
