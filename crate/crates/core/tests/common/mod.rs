//! Helpers shared by the integration tests: a small GCM catalog and oracles
//! written independently of the library code paths they check.

#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use weylhull_core::coxeter::WeylGroup;
use weylhull_core::datum::{make_kac_datum, RootDatum};
use weylhull_core::gcm::{validate_gcm, Gcm, GcmKind};
use weylhull_core::hull::HullContext;
use weylhull_core::tits::CartanPoint;
use weylhull_core::Rational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn frac(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

pub fn gcm(rows: &[&[i64]]) -> Gcm {
    validate_gcm(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

pub fn a1() -> Gcm {
    gcm(&[&[2]])
}
pub fn a2() -> Gcm {
    gcm(&[&[2, -1], &[-1, 2]])
}
pub fn b2() -> Gcm {
    gcm(&[&[2, -1], &[-2, 2]])
}
pub fn g2() -> Gcm {
    gcm(&[&[2, -1], &[-3, 2]])
}
pub fn a3() -> Gcm {
    gcm(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])
}
pub fn affine_a1() -> Gcm {
    gcm(&[&[2, -2], &[-2, 2]])
}
pub fn affine_a2() -> Gcm {
    gcm(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]])
}
pub fn hyperbolic() -> Gcm {
    gcm(&[&[2, -3], &[-3, 2]])
}
/// Rank 3 indefinite; one rank-2 parabolic is affine.
pub fn hyperbolic3() -> Gcm {
    gcm(&[&[2, -1, 0], &[-1, 2, -2], &[0, -2, 2]])
}

pub fn catalog() -> Vec<(&'static str, Gcm)> {
    vec![
        ("A1", a1()),
        ("A2", a2()),
        ("B2", b2()),
        ("G2", g2()),
        ("A3", a3()),
        ("A1^(1)", affine_a1()),
        ("A2^(1)", affine_a2()),
        ("H(3,3)", hyperbolic()),
        ("H3", hyperbolic3()),
        ("A1+A1^(1)", gcm(&[&[2, 0, 0], &[0, 2, -2], &[0, -2, 2]])),
    ]
}

pub fn kac(g: &Gcm) -> RootDatum {
    make_kac_datum(g)
}

pub fn group(g: &Gcm) -> WeylGroup {
    WeylGroup::new(&make_kac_datum(g))
}

/// A regular dominant point: `<α_i, h> = 1` for all `i`.
pub fn rho_point(datum: &RootDatum) -> CartanPoint {
    point_with_root_values(datum, &vec![Rational::one(); datum.n()])
}

/// Some point `x` with `<α_i, x> = values[i]`, free coordinates set to zero.
pub fn point_with_root_values(datum: &RootDatum, values: &[Rational]) -> CartanPoint {
    let d = datum.d();
    let mut m: Vec<Vec<Rational>> = datum
        .roots()
        .iter()
        .zip(values)
        .map(|(r, v)| {
            let mut row: Vec<Rational> = r.iter().map(|&x| q(x)).collect();
            row.push(v.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..d {
        let Some(p) = (row..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][c].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..=d {
                    let sub = &f * &m[row][k];
                    m[r][k] -= sub;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let mut x = vec![Rational::zero(); d];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][d].clone();
    }
    CartanPoint::new(x)
}

pub fn hull(g: &Gcm) -> HullContext {
    let datum = make_kac_datum(g);
    let h = rho_point(&datum);
    HullContext::new(&datum, h).unwrap()
}

// ---------------------------------------------------------------------------
// Fourier–Motzkin feasibility oracle for the three vector criteria.

type Row = (Vec<Rational>, Rational);

/// Feasibility of `{x : a·x <= b for (a, b) in rows}` by eliminating the
/// variables one at a time from the front.
pub fn fm_feasible(mut rows: Vec<Row>, vars: usize) -> bool {
    for v in 0..vars {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for r in rows.drain(..) {
            if r.0[v].is_positive() {
                pos.push(r);
            } else if r.0[v].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for m in &neg {
                let cp = p.0[v].clone();
                let cm = -m.0[v].clone();
                let coeffs: Vec<Rational> = p.0.iter().zip(&m.0).map(|(a, b)| a * &cm + b * &cp).collect();
                let bound = &p.1 * &cm + &m.1 * &cp;
                let row = (coeffs, bound);
                if !rest.contains(&row) {
                    rest.push(row);
                }
            }
        }
        rows = rest;
    }
    rows.iter().all(|r| !r.1.is_negative())
}

/// Which of the existence systems `λ>0, Aλ>0` / `λ>0, Aλ=0` / `λ>0, Aλ<0`
/// is feasible, as a list (exactly one entry for indecomposable input).
pub fn fm_tags(a: &[Vec<i64>]) -> Vec<GcmKind> {
    let n = a.len();
    let unit = |i: usize, s: i64| -> Vec<Rational> { (0..n).map(|j| if i == j { q(s) } else { q(0) }).collect() };
    let row = |i: usize, s: i64| -> Vec<Rational> { a[i].iter().map(|&v| q(s * v)).collect() };
    let positive: Vec<Row> = (0..n).map(|i| (unit(i, -1), q(-1))).collect();
    let mut fin = positive.clone();
    fin.extend((0..n).map(|i| (row(i, -1), q(-1))));
    let mut aff = positive.clone();
    aff.extend((0..n).map(|i| (row(i, 1), q(0))));
    aff.extend((0..n).map(|i| (row(i, -1), q(0))));
    let mut ind = positive;
    ind.extend((0..n).map(|i| (row(i, 1), q(-1))));
    let mut out = Vec::new();
    if fm_feasible(fin, n) {
        out.push(GcmKind::Finite);
    }
    if fm_feasible(aff, n) {
        out.push(GcmKind::Affine);
    }
    if fm_feasible(ind, n) {
        out.push(GcmKind::Indefinite);
    }
    out
}

/// All valid GCMs of size `n` whose off-diagonal entries are at least `-3`.
pub fn all_small_gcms(n: usize) -> Vec<Vec<Vec<i64>>> {
    let mut pairs: Vec<(i64, i64)> = vec![(0, 0)];
    for a in 1..=3 {
        for b in 1..=3 {
            pairs.push((-a, -b));
        }
    }
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let total = pairs.len().pow(slots.len() as u32);
    for mut code in 0..total {
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            m[i][i] = 2;
        }
        for &(i, j) in &slots {
            let (x, y) = pairs[code % pairs.len()];
            code /= pairs.len();
            m[i][j] = x;
            m[j][i] = y;
        }
        out.push(m);
    }
    out
}

// ---------------------------------------------------------------------------
// Exact planar convex hull, for brute-force face lattices.

pub type QPoint = (Rational, Rational);

fn cross(o: &QPoint, a: &QPoint, b: &QPoint) -> Rational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Vertices of the convex hull in counter-clockwise order, collinear points
/// dropped.
pub fn hull_2d(points: &[QPoint]) -> Vec<QPoint> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<QPoint> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<QPoint> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Whether `x` lies in the closed convex polygon given counter-clockwise.
pub fn in_polygon(poly: &[QPoint], x: &QPoint) -> bool {
    let m = poly.len();
    (0..m).all(|k| !cross(&poly[k], &poly[(k + 1) % m], x).is_negative())
}

/// Whether `x` lies strictly inside the polygon.
pub fn strictly_in_polygon(poly: &[QPoint], x: &QPoint) -> bool {
    let m = poly.len();
    (0..m).all(|k| cross(&poly[k], &poly[(k + 1) % m], x).is_positive())
}

pub fn to_q2(p: &CartanPoint) -> QPoint {
    (p.coords()[0].clone(), p.coords()[1].clone())
}

// ---------------------------------------------------------------------------
// Face lattices of finite rank-2 hulls.

use std::collections::BTreeSet;
use weylhull_core::coxeter::DEFAULT_ENUMERATION_CAP;
use weylhull_core::hull::FaceHandle;

/// Every standard coset face of a finite-type hull with its vertex set,
/// computed through the library.
pub fn coset_faces(ctx: &HullContext) -> Vec<(FaceHandle, BTreeSet<CartanPoint>)> {
    let grp = ctx.group();
    let n = ctx.n();
    let elems = grp.enumerate_by_length(64, DEFAULT_ENUMERATION_CAP).unwrap();
    let mut out: Vec<(FaceHandle, BTreeSet<CartanPoint>)> = Vec::new();
    for mask in 0u32..(1 << n) {
        let j: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let mut reps = BTreeSet::new();
        for w in &elems {
            let c = grp.min_coset_rep(w, &j).unwrap();
            if reps.insert(c.rep.act_b().clone()) {
                let face = FaceHandle { coset: c };
                let fv = ctx.face_vertices(&face, 64).unwrap();
                assert!(!fv.truncated);
                out.push((face, fv.vertices.into_iter().collect()));
            }
        }
    }
    out
}

/// Faces of the planar orbit polygon: vertices, edges and the polygon.
pub fn brute_faces_2d(orbit: &[QPoint]) -> Vec<BTreeSet<QPoint>> {
    let poly = hull_2d(orbit);
    let m = poly.len();
    let mut faces: Vec<BTreeSet<QPoint>> = poly.iter().map(|p| BTreeSet::from([p.clone()])).collect();
    for k in 0..m {
        faces.push(BTreeSet::from([poly[k].clone(), poly[(k + 1) % m].clone()]));
    }
    faces.push(poly.into_iter().collect());
    faces
}

/// `(number of coset faces, whether they match the brute-force faces
/// exactly with dimension |J|)` for a finite rank-2 type.
pub fn face_lattice_check(g: &Gcm) -> (usize, bool) {
    let ctx = hull(g);
    let faces = coset_faces(&ctx);
    let grp = ctx.group();
    let orbit: Vec<QPoint> = grp
        .enumerate_by_length(64, DEFAULT_ENUMERATION_CAP)
        .unwrap()
        .iter()
        .map(|w| to_q2(&ctx.orbit_point(w)))
        .collect();
    let mut brute: Vec<BTreeSet<QPoint>> = brute_faces_2d(&orbit);
    brute.sort();
    let mut ours: Vec<BTreeSet<QPoint>> =
        faces.iter().map(|(_, vs)| vs.iter().map(to_q2).collect()).collect();
    ours.sort();
    let dims_ok = faces.iter().all(|(f, vs)| {
        let expected = match vs.len() {
            1 => 0,
            2 => 1,
            _ => 2,
        };
        f.dim() == expected
    });
    (faces.len(), dims_ok && ours == brute)
}

/// `<ω, s_i w(h)> <= <ω, w(h)> - c` whenever `s_i w` is longer than `w`,
/// with `ω` the sum of the fundamental weights.
pub fn monotonicity_violations(g: &Gcm, max_len: usize) -> usize {
    let grp = group(g);
    let datum = grp.datum().clone();
    let h = rho_point(&datum);
    let n = g.n();
    let c = (0..n).map(|i| datum.root_value(i, h.coords())).min().unwrap();
    let omega = |x: &[Rational]| -> Rational { x[..n].iter().sum() };
    let mut bad = 0;
    for w in grp.enumerate_by_length(max_len, weylhull_core::coxeter::DEFAULT_ENUMERATION_CAP).unwrap() {
        let wh = w.act_b().apply(h.coords());
        for i in 0..n {
            let sw = grp.left_multiply(i, &w).unwrap();
            if sw.length() > w.length() {
                let swh = sw.act_b().apply(h.coords());
                if omega(&swh) > omega(&wh) - &c {
                    bad += 1;
                }
            }
        }
    }
    bad
}

