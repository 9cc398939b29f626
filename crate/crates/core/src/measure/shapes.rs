//! Primitive planar shapes, regions built from them, and exact ray clipping.
//!
//! Polar quadrature needs, for a pole `o` and a direction `theta`, the set of
//! radii `rho >= 0` with `o + rho e^{i theta}` inside a region, together with
//! the directions at which that set changes topology (tangencies, corners,
//! boundary crossings). Both are computed exactly here.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Sorted, disjoint closed intervals of `[0, inf)`.
pub(crate) type Intervals = Vec<(f64, f64)>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AreaShape {
    Disk { center: Complex64, radius: f64 },
    Annulus { center: Complex64, inner: f64, outer: f64 },
    Rect { min: Complex64, max: Complex64 },
}

impl AreaShape {
    /// Pole for the polar parameterization of the shape.
    pub fn center(&self) -> Complex64 {
        match *self {
            AreaShape::Disk { center, .. } | AreaShape::Annulus { center, .. } => center,
            AreaShape::Rect { min, max } => (min + max) * 0.5,
        }
    }

    pub fn area(&self) -> f64 {
        match *self {
            AreaShape::Disk { radius, .. } => PI * radius * radius,
            AreaShape::Annulus { inner, outer, .. } => PI * (outer * outer - inner * inner),
            AreaShape::Rect { min, max } => (max.re - min.re) * (max.im - min.im),
        }
    }

    /// Radius of the smallest disk about `center()` containing the shape.
    pub fn circumradius(&self) -> f64 {
        match *self {
            AreaShape::Disk { radius, .. } => radius,
            AreaShape::Annulus { outer, .. } => outer,
            AreaShape::Rect { min, max } => (max - min).norm() * 0.5,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let ok = match *self {
            AreaShape::Disk { center, radius } => finite(center) && radius > 0.0 && radius.is_finite(),
            AreaShape::Annulus { center, inner, outer } => {
                finite(center) && inner > 0.0 && outer > inner && outer.is_finite()
            }
            AreaShape::Rect { min, max } => {
                finite(min) && finite(max) && max.re > min.re && max.im > min.im
            }
        };
        if ok {
            Ok(())
        } else {
            Err(format!("degenerate shape {self:?}"))
        }
    }
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// A subset of the plane assembled from primitive pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Disk { center: Complex64, radius: f64 },
    Annulus { center: Complex64, inner: f64, outer: f64 },
    Rect { min: Complex64, max: Complex64 },
    /// Closed half-plane `{z : Re(conj(normal) (z - point)) >= 0}`.
    HalfPlane { point: Complex64, normal: Complex64 },
    Complement { of: Box<Region> },
    Union { of: Vec<Region> },
    Intersection { of: Vec<Region> },
}

impl From<AreaShape> for Region {
    fn from(s: AreaShape) -> Self {
        match s {
            AreaShape::Disk { center, radius } => Region::Disk { center, radius },
            AreaShape::Annulus { center, inner, outer } => Region::Annulus { center, inner, outer },
            AreaShape::Rect { min, max } => Region::Rect { min, max },
        }
    }
}

/// A boundary piece of a primitive region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Curve {
    Circle { center: Complex64, radius: f64 },
    Segment { a: Complex64, b: Complex64 },
    Line { point: Complex64, dir: Complex64 },
}

impl Region {
    pub fn upper_half_plane() -> Region {
        Region::HalfPlane {
            point: Complex64::new(0.0, 0.0),
            normal: Complex64::new(0.0, 1.0),
        }
    }

    pub fn complement(self) -> Region {
        Region::Complement { of: Box::new(self) }
    }

    /// Closed membership for primitives; a complement takes the exact negation
    /// so that a region and its complement partition the plane.
    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            Region::Disk { center, radius } => (z - center).norm() <= *radius,
            Region::Annulus { center, inner, outer } => {
                let d = (z - center).norm();
                d >= *inner && d <= *outer
            }
            Region::Rect { min, max } => {
                z.re >= min.re && z.re <= max.re && z.im >= min.im && z.im <= max.im
            }
            Region::HalfPlane { point, normal } => (normal.conj() * (z - point)).re >= 0.0,
            Region::Complement { of } => !of.contains(z),
            Region::Union { of } => of.iter().any(|r| r.contains(z)),
            Region::Intersection { of } => of.iter().all(|r| r.contains(z)),
        }
    }

    pub(crate) fn curves(&self, out: &mut Vec<Curve>) {
        match self {
            Region::Disk { center, radius } => out.push(Curve::Circle {
                center: *center,
                radius: *radius,
            }),
            Region::Annulus { center, inner, outer } => {
                out.push(Curve::Circle {
                    center: *center,
                    radius: *inner,
                });
                out.push(Curve::Circle {
                    center: *center,
                    radius: *outer,
                });
            }
            Region::Rect { min, max } => {
                let c = [
                    *min,
                    Complex64::new(max.re, min.im),
                    *max,
                    Complex64::new(min.re, max.im),
                ];
                for t in 0..4 {
                    out.push(Curve::Segment {
                        a: c[t],
                        b: c[(t + 1) % 4],
                    });
                }
            }
            Region::HalfPlane { point, normal } => out.push(Curve::Line {
                point: *point,
                dir: *normal * Complex64::new(0.0, 1.0),
            }),
            Region::Complement { of } => of.curves(out),
            Region::Union { of } | Region::Intersection { of } => {
                for r in of {
                    r.curves(out);
                }
            }
        }
    }

    /// Radii `rho >= 0` with `origin + rho e^{i theta}` in the region.
    pub(crate) fn ray_intervals(&self, origin: Complex64, theta: f64) -> Intervals {
        let u = Complex64::from_polar(1.0, theta);
        self.ray(origin, u)
    }

    fn ray(&self, o: Complex64, u: Complex64) -> Intervals {
        match self {
            Region::Disk { center, radius } => ray_disk(o, u, *center, *radius),
            Region::Annulus { center, inner, outer } => intersect(
                &ray_disk(o, u, *center, *outer),
                &complement(&ray_disk(o, u, *center, *inner)),
            ),
            Region::Rect { min, max } => ray_rect(o, u, *min, *max),
            Region::HalfPlane { point, normal } => {
                let a = (normal.conj() * (o - point)).re;
                let b = (normal.conj() * u).re;
                if b == 0.0 {
                    if a >= 0.0 {
                        vec![(0.0, f64::INFINITY)]
                    } else {
                        vec![]
                    }
                } else if b > 0.0 {
                    vec![((-a / b).max(0.0), f64::INFINITY)]
                } else if -a / b > 0.0 {
                    vec![(0.0, -a / b)]
                } else {
                    vec![]
                }
            }
            Region::Complement { of } => complement(&of.ray(o, u)),
            Region::Union { of } => of
                .iter()
                .fold(Vec::new(), |acc, r| union(&acc, &r.ray(o, u))),
            Region::Intersection { of } => {
                let mut it = of.iter();
                match it.next() {
                    None => vec![(0.0, f64::INFINITY)],
                    Some(first) => it.fold(first.ray(o, u), |acc, r| intersect(&acc, &r.ray(o, u))),
                }
            }
        }
    }

    /// Directions (in `[0, 2pi)`) from `origin` at which the ray intervals
    /// can change topology.
    pub(crate) fn breakpoints(&self, origin: Complex64) -> Vec<f64> {
        let mut curves = Vec::new();
        self.curves(&mut curves);
        let mut angles = Vec::new();
        for c in &curves {
            c.critical_angles(origin, &mut angles);
        }
        for (n, a) in curves.iter().enumerate() {
            for b in &curves[n + 1..] {
                for p in a.intersect(b) {
                    if (p - origin).norm() > 1e-14 {
                        angles.push(normalize_angle((p - origin).arg()));
                    }
                }
            }
        }
        normalize_breakpoints(angles)
    }

    /// Points where `curve` crosses the boundary of the region.
    pub(crate) fn crossings_with(&self, curve: &Curve) -> Vec<Complex64> {
        let mut curves = Vec::new();
        self.curves(&mut curves);
        curves.iter().flat_map(|c| c.intersect(curve)).collect()
    }

    /// Lower bound on the distance from `z` to the region (0 inside).
    pub fn distance_lower_bound(&self, z: Complex64) -> f64 {
        match self {
            Region::Disk { center, radius } => ((z - center).norm() - radius).max(0.0),
            Region::Annulus { center, inner, outer } => {
                let d = (z - center).norm();
                if d < *inner {
                    inner - d
                } else {
                    (d - outer).max(0.0)
                }
            }
            Region::Rect { min, max } => {
                let dx = (min.re - z.re).max(z.re - max.re).max(0.0);
                let dy = (min.im - z.im).max(z.im - max.im).max(0.0);
                dx.hypot(dy)
            }
            Region::HalfPlane { point, normal } => {
                (-(normal.conj() * (z - point)).re / normal.norm()).max(0.0)
            }
            Region::Complement { .. } => 0.0,
            Region::Union { of } => of
                .iter()
                .map(|r| r.distance_lower_bound(z))
                .fold(f64::INFINITY, f64::min),
            Region::Intersection { of } => of
                .iter()
                .map(|r| r.distance_lower_bound(z))
                .fold(0.0, f64::max),
        }
    }
}

pub(crate) fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

pub(crate) fn normalize_breakpoints(mut angles: Vec<f64>) -> Vec<f64> {
    for a in angles.iter_mut() {
        *a = normalize_angle(*a);
    }
    angles.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(angles.len());
    for a in angles {
        if out.last().is_none_or(|&l| a - l > 1e-12) {
            out.push(a);
        }
    }
    if out.len() > 1 && out[0] + TAU - out[out.len() - 1] <= 1e-12 {
        out.pop();
    }
    out
}

impl Curve {
    fn critical_angles(&self, o: Complex64, out: &mut Vec<f64>) {
        match *self {
            Curve::Circle { center, radius } => {
                let d = (center - o).norm();
                let base = (center - o).arg();
                if d > radius * (1.0 + 1e-14) {
                    let half = (radius / d).asin();
                    out.push(base + half);
                    out.push(base - half);
                } else if (d - radius).abs() <= radius * 1e-14 && d > 0.0 {
                    out.push(base + PI / 2.0);
                    out.push(base - PI / 2.0);
                }
            }
            Curve::Segment { a, b } => {
                for p in [a, b] {
                    if (p - o).norm() > 1e-14 {
                        out.push((p - o).arg());
                    }
                }
                // The ray runs along the segment's line.
                out.push((b - a).arg());
                out.push((a - b).arg());
            }
            Curve::Line { dir, .. } => {
                out.push(dir.arg());
                out.push((-dir).arg());
            }
        }
    }

    pub(crate) fn intersect(&self, other: &Curve) -> Vec<Complex64> {
        use Curve::*;
        match (*self, *other) {
            (Circle { center: c1, radius: r1 }, Circle { center: c2, radius: r2 }) => {
                circle_circle(c1, r1, c2, r2)
            }
            (Circle { center, radius }, Segment { a, b }) | (Segment { a, b }, Circle { center, radius }) => {
                circle_line(center, radius, a, b - a)
                    .into_iter()
                    .filter(|&(_, t)| (0.0..=1.0).contains(&t))
                    .map(|(p, _)| p)
                    .collect()
            }
            (Circle { center, radius }, Line { point, dir }) | (Line { point, dir }, Circle { center, radius }) => {
                circle_line(center, radius, point, dir).into_iter().map(|(p, _)| p).collect()
            }
            (Segment { a, b }, Segment { a: c, b: d }) => line_line(a, b - a, c, d - c)
                .filter(|&(_, s, t)| (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t))
                .map(|(p, _, _)| p)
                .into_iter()
                .collect(),
            (Segment { a, b }, Line { point, dir }) | (Line { point, dir }, Segment { a, b }) => {
                line_line(a, b - a, point, dir)
                    .filter(|&(_, s, _)| (0.0..=1.0).contains(&s))
                    .map(|(p, _, _)| p)
                    .into_iter()
                    .collect()
            }
            (Line { point: p, dir: u }, Line { point: q, dir: v }) => {
                line_line(p, u, q, v).map(|(z, _, _)| z).into_iter().collect()
            }
        }
    }
}

pub(crate) fn circle_circle(c1: Complex64, r1: f64, c2: Complex64, r2: f64) -> Vec<Complex64> {
    let d = (c2 - c1).norm();
    if d == 0.0 || d > r1 + r2 || d < (r1 - r2).abs() {
        return vec![];
    }
    let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let u = (c2 - c1) / d;
    let m = c1 + u * a;
    let perp = u * Complex64::new(0.0, 1.0);
    if h == 0.0 {
        vec![m]
    } else {
        vec![m + perp * h, m - perp * h]
    }
}

/// Intersections of a circle with `p + t dir`, returned with their parameter `t`.
pub(crate) fn circle_line(c: Complex64, r: f64, p: Complex64, dir: Complex64) -> Vec<(Complex64, f64)> {
    let a = dir.norm_sqr();
    if a == 0.0 {
        return vec![];
    }
    let w = p - c;
    let b = 2.0 * (dir.conj() * w).re;
    let cc = w.norm_sqr() - r * r;
    let disc = b * b - 4.0 * a * cc;
    if disc < 0.0 {
        return vec![];
    }
    let s = disc.sqrt();
    let t1 = (-b - s) / (2.0 * a);
    let t2 = (-b + s) / (2.0 * a);
    if s == 0.0 {
        vec![(p + dir * t1, t1)]
    } else {
        vec![(p + dir * t1, t1), (p + dir * t2, t2)]
    }
}

/// Intersection of `p + s u` and `q + t v` with both parameters.
pub(crate) fn line_line(p: Complex64, u: Complex64, q: Complex64, v: Complex64) -> Option<(Complex64, f64, f64)> {
    let cross = |a: Complex64, b: Complex64| a.re * b.im - a.im * b.re;
    let den = cross(u, v);
    if den.abs() < 1e-300 {
        return None;
    }
    let w = q - p;
    let s = cross(w, v) / den;
    let t = cross(w, u) / den;
    Some((p + u * s, s, t))
}

fn ray_disk(o: Complex64, u: Complex64, c: Complex64, r: f64) -> Intervals {
    let w = o - c;
    let b = (u.conj() * w).re;
    let cc = w.norm_sqr() - r * r;
    let disc = b * b - cc;
    if disc <= 0.0 {
        return vec![];
    }
    let s = disc.sqrt();
    let (r1, r2) = (-b - s, -b + s);
    if r2 <= 0.0 {
        vec![]
    } else {
        vec![(r1.max(0.0), r2)]
    }
}

fn ray_rect(o: Complex64, u: Complex64, min: Complex64, max: Complex64) -> Intervals {
    let mut lo: f64 = 0.0;
    let mut hi = f64::INFINITY;
    for (p, d, a, b) in [(o.re, u.re, min.re, max.re), (o.im, u.im, min.im, max.im)] {
        if d.abs() < 1e-300 {
            if p < a || p > b {
                return vec![];
            }
        } else {
            let (t1, t2) = ((a - p) / d, (b - p) / d);
            lo = lo.max(t1.min(t2));
            hi = hi.min(t1.max(t2));
        }
    }
    if hi > lo {
        vec![(lo, hi)]
    } else {
        vec![]
    }
}

pub(crate) fn complement(a: &Intervals) -> Intervals {
    let mut out = Vec::new();
    let mut start = 0.0;
    for &(lo, hi) in a {
        if lo > start {
            out.push((start, lo));
        }
        start = hi;
    }
    if start < f64::INFINITY {
        out.push((start, f64::INFINITY));
    }
    out
}

pub(crate) fn intersect(a: &Intervals, b: &Intervals) -> Intervals {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        let lo = a[i].0.max(b[j].0);
        let hi = a[i].1.min(b[j].1);
        if hi > lo {
            out.push((lo, hi));
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

pub(crate) fn union(a: &Intervals, b: &Intervals) -> Intervals {
    let mut all: Vec<(f64, f64)> = a.iter().chain(b.iter()).copied().collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Intervals = Vec::new();
    for (lo, hi) in all {
        match out.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ray_through_annulus_has_two_pieces() {
        let r = Region::Annulus {
            center: c(0.0, 0.0),
            inner: 0.5,
            outer: 1.0,
        };
        let iv = r.ray_intervals(c(-2.0, 0.0), 0.0);
        assert_eq!(iv.len(), 2);
        assert!((iv[0].0 - 1.0).abs() < 1e-14 && (iv[0].1 - 1.5).abs() < 1e-14);
        assert!((iv[1].0 - 2.5).abs() < 1e-14 && (iv[1].1 - 3.0).abs() < 1e-14);
    }

    #[test]
    fn ray_from_inside_rect() {
        let r = Region::Rect {
            min: c(-1.0, -1.0),
            max: c(1.0, 1.0),
        };
        let iv = r.ray_intervals(c(0.0, 0.0), PI / 4.0);
        assert_eq!(iv.len(), 1);
        assert!((iv[0].1 - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn complement_partitions_rays() {
        let r = Region::upper_half_plane();
        let iv = r.ray_intervals(c(0.0, -1.0), PI / 2.0);
        assert_eq!(iv, vec![(1.0, f64::INFINITY)]);
        let iv = r.clone().complement().ray_intervals(c(0.0, -1.0), PI / 2.0);
        assert_eq!(iv, vec![(0.0, 1.0)]);
    }

    #[test]
    fn tangent_breakpoints() {
        let r = Region::Disk {
            center: c(2.0, 0.0),
            radius: 1.0,
        };
        let b = r.breakpoints(c(0.0, 0.0));
        assert_eq!(b.len(), 2);
        assert!((b[0] - PI / 6.0).abs() < 1e-14);
        assert!((b[1] - (TAU - PI / 6.0)).abs() < 1e-14);
    }

    #[test]
    fn circle_intersections() {
        let p = circle_circle(c(0.0, 0.0), 1.0, c(1.0, 0.0), 1.0);
        assert_eq!(p.len(), 2);
        for z in p {
            assert!((z.norm() - 1.0).abs() < 1e-14);
            assert!(((z - c(1.0, 0.0)).norm() - 1.0).abs() < 1e-14);
        }
    }
}
