//! Deterministic SVG figures of rank-2 hulls and rank-3 slices.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::{HullContext, HullError};
use crate::coxeter::DEFAULT_ENUMERATION_CAP;
use crate::tits::CartanPoint;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RenderMode {
    /// Orbit polygon of a rank-2 datum from group elements up to `max_len`.
    Hull2D { max_len: usize },
    /// Slice `<ω_i, ·> = t` of a rank-3 hull.
    Slice2D { i: usize, t: Rational, max_len: usize },
}

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;

type P2 = (f64, f64);

/// Planar picture of two coordinate axes meeting at the given angle.
struct Embedding {
    cos: f64,
    sin: f64,
}

impl Embedding {
    fn for_pair(product: i64) -> Self {
        let cos = if product < 4 { -libm::sqrt(product as f64) / 2.0 } else { -0.9 };
        Embedding { cos, sin: libm::sqrt(1.0 - cos * cos) }
    }

    fn map(&self, (u, v): P2) -> P2 {
        (u + v * self.cos, v * self.sin)
    }
}

struct Line {
    /// `a u + b v + c = 0` in data coordinates.
    a: f64,
    b: f64,
    c: f64,
}

pub fn render(ctx: &HullContext, mode: &RenderMode) -> Result<String, HullError> {
    match mode {
        RenderMode::Hull2D { max_len } => render_hull(ctx, *max_len),
        RenderMode::Slice2D { i, t, max_len } => render_slice(ctx, *i, t, *max_len),
    }
}

fn render_hull(ctx: &HullContext, max_len: usize) -> Result<String, HullError> {
    if ctx.n() != 2 {
        return Err(HullError::UnsupportedRank { expected: 2, got: ctx.n() });
    }
    let group = ctx.group();
    let elems = group.enumerate_by_length(max_len + 1, DEFAULT_ENUMERATION_CAP)?;
    let truncated = elems.iter().any(|e| e.length() > max_len);
    let pts: Vec<P2> = elems
        .iter()
        .filter(|e| e.length() <= max_len)
        .map(|e| pick(&ctx.orbit_point(e), 0, 1))
        .collect();
    let gcm = ctx.datum().gcm();
    let emb = Embedding::for_pair(gcm.entry(0, 1) * gcm.entry(1, 0));
    let roots = ctx.datum().roots();
    let walls: Vec<Line> = (0..2)
        .map(|k| Line { a: roots[k][0] as f64, b: roots[k][1] as f64, c: 0.0 })
        .collect();
    let banner = truncated.then(|| alloc::format!("truncated at length {max_len}"));
    Ok(draw(&emb, &pts, &[], &walls, banner.as_deref()))
}

fn render_slice(ctx: &HullContext, i: usize, t: &Rational, max_len: usize) -> Result<String, HullError> {
    if ctx.n() != 3 {
        return Err(HullError::UnsupportedRank { expected: 3, got: ctx.n() });
    }
    let report = ctx.slice_report(i, t, max_len)?;
    let others: Vec<usize> = (0..3).filter(|&k| k != i).collect();
    let (u, v) = (others[0], others[1]);
    let pts: Vec<P2> = report.vertices.iter().map(|s| pick(&s.point, u, v)).collect();
    let ess: Vec<P2> = report.essential.iter().map(|s| pick(&s.point, u, v)).collect();
    let gcm = ctx.datum().gcm();
    let emb = Embedding::for_pair(gcm.entry(u, v) * gcm.entry(v, u));
    let roots = ctx.datum().roots();
    let tf = to_f64(t);
    // Walls of the subchamber restricted to the slice plane; the extension
    // coordinates are constant on the hull.
    let walls: Vec<Line> = others
        .iter()
        .map(|&k| {
            let ext: f64 = (3..ctx.d()).map(|e| roots[k][e] as f64 * to_f64(&ctx.h().0[e])).sum();
            Line { a: roots[k][u] as f64, b: roots[k][v] as f64, c: roots[k][i] as f64 * tf + ext }
        })
        .collect();
    let banner = report.truncated.then(|| alloc::format!("truncated at length {max_len}"));
    Ok(draw(&emb, &pts, &ess, &walls, banner.as_deref()))
}

fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(0.0)
}

fn pick(p: &CartanPoint, u: usize, v: usize) -> P2 {
    (to_f64(&p.0[u]), to_f64(&p.0[v]))
}

/// Andrew's monotone chain; returns the hull counter-clockwise.
fn convex_hull(points: &[P2]) -> Vec<P2> {
    let mut pts: Vec<P2> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    pts.dedup_by(|a, b| libm::fabs(a.0 - b.0) < 1e-12 && libm::fabs(a.1 - b.1) < 1e-12);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: P2, a: P2, b: P2| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<P2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: alloc::boxed::Box<dyn Iterator<Item = &P2>> =
            if pass == 0 { alloc::boxed::Box::new(pts.iter()) } else { alloc::boxed::Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 1e-12 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn draw(emb: &Embedding, data: &[P2], essential: &[P2], walls: &[Line], banner: Option<&str>) -> String {
    let mut lo = (-1.0f64, -1.0f64);
    let mut hi = (1.0f64, 1.0f64);
    for p in data.iter().chain(essential) {
        lo = (lo.0.min(p.0), lo.1.min(p.1));
        hi = (hi.0.max(p.0), hi.1.max(p.1));
    }
    let pad = 0.15 * (hi.0 - lo.0).max(hi.1 - lo.1);
    let (lo, hi) = ((lo.0 - pad, lo.1 - pad), (hi.0 + pad, hi.1 + pad));
    let corners = [lo, (hi.0, lo.1), hi, (lo.0, hi.1)].map(|c| emb.map(c));
    let min_x = corners.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let max_x = corners.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = corners.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let max_y = corners.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let scale = (SIZE - 2.0 * MARGIN) / (max_x - min_x).max(max_y - min_y);
    let screen = |p: P2| {
        let q = emb.map(p);
        (MARGIN + (q.0 - min_x) * scale, SIZE - MARGIN - (q.1 - min_y) * scale)
    };

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE:.0}" height="{SIZE:.0}" viewBox="0 0 {SIZE:.0} {SIZE:.0}">"#
    );
    let _ = writeln!(svg, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    for wall in walls {
        if let Some((a, b)) = clip(wall, lo, hi) {
            let (a, b) = (screen(a), screen(b));
            let _ = writeln!(
                svg,
                r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#888888" stroke-dasharray="4 3"/>"##,
                a.0, a.1, b.0, b.1
            );
        }
    }
    polygon(&mut svg, &convex_hull(data), &screen, "#dde7f5", "#1f4e8c");
    if essential.len() > 1 {
        polygon(&mut svg, &convex_hull(essential), &screen, "none", "#c0392b");
    }
    for &p in data {
        let s = screen(p);
        let _ = writeln!(svg, r##"<circle cx="{:.3}" cy="{:.3}" r="3" fill="#1f4e8c"/>"##, s.0, s.1);
    }
    for &p in essential {
        let s = screen(p);
        let _ = writeln!(svg, r##"<circle cx="{:.3}" cy="{:.3}" r="4.5" fill="#c0392b"/>"##, s.0, s.1);
    }
    if let Some(text) = banner {
        let _ = writeln!(
            svg,
            r##"<text x="{MARGIN:.0}" y="24" font-family="sans-serif" font-size="14" fill="#a04000">{text}</text>"##
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn polygon(svg: &mut String, hull: &[P2], screen: &dyn Fn(P2) -> P2, fill: &str, stroke: &str) {
    if hull.len() < 2 {
        return;
    }
    let mut pts = String::new();
    for (k, &p) in hull.iter().enumerate() {
        let s = screen(p);
        if k > 0 {
            pts.push(' ');
        }
        let _ = write!(pts, "{:.3},{:.3}", s.0, s.1);
    }
    let _ = writeln!(svg, r#"<polygon points="{pts}" fill="{fill}" stroke="{stroke}" stroke-width="2"/>"#);
}

/// Segment of `a u + b v + c = 0` inside the box `[lo, hi]`.
fn clip(line: &Line, lo: P2, hi: P2) -> Option<(P2, P2)> {
    let mut hits: Vec<P2> = Vec::new();
    if line.b.abs() > 1e-12 {
        for u in [lo.0, hi.0] {
            let v = -(line.a * u + line.c) / line.b;
            if v >= lo.1 - 1e-12 && v <= hi.1 + 1e-12 {
                hits.push((u, v));
            }
        }
    }
    if line.a.abs() > 1e-12 {
        for v in [lo.1, hi.1] {
            let u = -(line.b * v + line.c) / line.a;
            if u >= lo.0 - 1e-12 && u <= hi.0 + 1e-12 {
                hits.push((u, v));
            }
        }
    }
    hits.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    let first = *hits.first()?;
    let last = *hits.last()?;
    (first != last).then_some((first, last))
}
