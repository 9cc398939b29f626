//! Harmonic measure of disks and annuli, sweeps of measures onto their
//! boundaries, and a mutual singularity test for boundary measures.
//!
//! Boundary densities are stored against arclength at `n` equispaced angles
//! `2 pi j / n` on each boundary circle.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{ArcShape, ComponentKind, PlanarMeasure};

/// Default threshold of [`mutually_singular`], relative to the smaller mass.
pub const DEFAULT_SINGULARITY_TOL: f64 = 1e-3;

/// Relative distance under which a point counts as lying on a circle.
const ON_CIRCLE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Circle { center, radius }
    }

    pub fn point(&self, theta: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, theta)
    }

    fn same_as(&self, other: &Circle) -> bool {
        let scale = self.radius.max(other.radius);
        (self.center - other.center).norm() <= ON_CIRCLE * scale && (self.radius - other.radius).abs() <= ON_CIRCLE * scale
    }

    fn on(&self, z: Complex64) -> bool {
        ((z - self.center).norm() - self.radius).abs() <= ON_CIRCLE * self.radius
    }
}

/// A domain bounded by finitely many disjoint circles: the inside of `outer`
/// minus the closed disks of `inner`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircularDomain {
    pub outer: Circle,
    pub inner: Vec<Circle>,
}

impl CircularDomain {
    pub fn new(outer: Circle, inner: Vec<Circle>) -> Result<Self> {
        let ok = |c: &Circle| c.radius > 0.0 && c.radius.is_finite() && c.center.re.is_finite() && c.center.im.is_finite();
        if !ok(&outer) || !inner.iter().all(ok) {
            return Err(Error::invalid("circular domain needs finite positive radii"));
        }
        for (n, c) in inner.iter().enumerate() {
            if (c.center - outer.center).norm() + c.radius >= outer.radius {
                return Err(Error::invalid(format!("inner circle {n} is not inside the outer circle")));
            }
            for d in &inner[n + 1..] {
                if (c.center - d.center).norm() <= c.radius + d.radius {
                    return Err(Error::invalid("inner circles must be disjoint"));
                }
            }
        }
        Ok(CircularDomain { outer, inner })
    }

    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        Self::new(Circle::new(center, radius), Vec::new())
    }

    /// `inner < |z - center| < outer`.
    pub fn annulus(center: Complex64, inner: f64, outer: f64) -> Result<Self> {
        Self::new(Circle::new(center, outer), vec![Circle::new(center, inner)])
    }

    /// Number of boundary components.
    pub fn connectivity(&self) -> usize {
        1 + self.inner.len()
    }

    /// Boundary circles, outer first.
    pub fn boundary(&self) -> Vec<Circle> {
        std::iter::once(self.outer).chain(self.inner.iter().copied()).collect()
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.outer.center).norm() < self.outer.radius && self.inner.iter().all(|c| (z - c.center).norm() > c.radius)
    }

    pub fn closure_contains(&self, z: Complex64) -> bool {
        self.contains(z) || self.boundary().iter().any(|c| c.on(z))
    }

    fn kind(&self) -> Result<Kind> {
        match self.inner.as_slice() {
            [] => Ok(Kind::Disk),
            [c] if c.same_center(&self.outer) => Ok(Kind::Annulus),
            [_] => Err(Error::Unsupported(
                "harmonic measure of a non-concentric annulus".into(),
            )),
            _ => Err(Error::Unsupported(format!(
                "harmonic measure of a domain of connectivity {}",
                self.connectivity()
            ))),
        }
    }
}

impl Circle {
    fn same_center(&self, other: &Circle) -> bool {
        (self.center - other.center).norm() <= ON_CIRCLE * self.radius.max(other.radius)
    }
}

enum Kind {
    Disk,
    Annulus,
}

/// Density against arclength on one circle, sampled at `2 pi j / n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleDensity {
    pub circle: Circle,
    pub density: Vec<f64>,
}

impl CircleDensity {
    fn zero(circle: Circle, n: usize) -> Self {
        CircleDensity {
            circle,
            density: vec![0.0; n],
        }
    }

    pub fn samples(&self) -> usize {
        self.density.len()
    }

    /// Arclength of one sample cell.
    pub fn cell(&self) -> f64 {
        TAU * self.circle.radius / self.density.len() as f64
    }

    pub fn mass(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.cell()
    }

    /// Density at angle `theta`, interpolated linearly between samples.
    pub fn at(&self, theta: f64) -> f64 {
        let n = self.density.len();
        let t = theta.rem_euclid(TAU) / TAU * n as f64;
        let j = (t.floor() as usize).min(n - 1);
        let f = t - j as f64;
        self.density[j] * (1.0 - f) + self.density[(j + 1) % n] * f
    }

    /// Mass of the arc from `from` to `to` (counterclockwise), integrating the
    /// piecewise linear interpolant exactly.
    pub fn arc_mass(&self, from: f64, to: f64) -> f64 {
        if to - from >= TAU {
            return self.mass();
        }
        let h = TAU / self.density.len() as f64;
        let a = from.rem_euclid(TAU);
        let b = a + (to - from).rem_euclid(TAU);
        let mut total = 0.0;
        for j in (a / h).floor() as i64..(b / h).ceil() as i64 {
            let lo = a.max(j as f64 * h);
            let hi = b.min((j + 1) as f64 * h);
            if hi > lo {
                total += 0.5 * (self.at(lo) + self.at(hi)) * (hi - lo);
            }
        }
        total * self.circle.radius
    }
}

/// A positive measure on the boundary circles of a domain, plus atoms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryMeasure {
    pub circles: Vec<CircleDensity>,
    pub atoms: Vec<(Complex64, f64)>,
}

impl BoundaryMeasure {
    pub fn zero(domain: &CircularDomain, n: usize) -> Self {
        BoundaryMeasure {
            circles: domain.boundary().into_iter().map(|c| CircleDensity::zero(c, n)).collect(),
            atoms: Vec::new(),
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.circles.iter().map(CircleDensity::mass).sum::<f64>() + self.atoms.iter().map(|a| a.1).sum::<f64>()
    }

    /// Mass carried by boundary circle `idx`, including atoms on it.
    pub fn circle_mass(&self, idx: usize) -> f64 {
        let c = &self.circles[idx];
        c.mass() + self.atoms.iter().filter(|(p, _)| c.circle.on(*p)).map(|a| a.1).sum::<f64>()
    }

    pub fn scaled(&self, s: f64) -> Self {
        BoundaryMeasure {
            circles: self
                .circles
                .iter()
                .map(|c| CircleDensity {
                    circle: c.circle,
                    density: c.density.iter().map(|d| d * s).collect(),
                })
                .collect(),
            atoms: self.atoms.iter().map(|&(p, m)| (p, m * s)).collect(),
        }
    }

    fn add_scaled(&mut self, other: &BoundaryMeasure, s: f64) {
        for (a, b) in self.circles.iter_mut().zip(&other.circles) {
            for (x, y) in a.density.iter_mut().zip(&b.density) {
                *x += s * y;
            }
        }
        for &(p, m) in &other.atoms {
            self.add_atom(p, m * s);
        }
    }

    /// Adds a point mass at the boundary point `p`.
    pub fn add_atom(&mut self, p: Complex64, m: f64) {
        match self.atoms.iter_mut().find(|(q, _)| *q == p) {
            Some(a) => a.1 += m,
            None => self.atoms.push((p, m)),
        }
    }
}

/// Samples per circle that resolve the Poisson kernel at `z` to rounding.
fn samples_for(domain: &CircularDomain, z: Complex64) -> usize {
    let gap = domain
        .boundary()
        .iter()
        .map(|c| ((z - c.center).norm() - c.radius).abs() / c.radius)
        .fold(f64::INFINITY, f64::min);
    let want = (40.0 / gap.max(1e-6)).ceil() as usize;
    want.clamp(1024, 1 << 20).next_power_of_two()
}

/// Harmonic measure `omega_z` of the domain, with a sample count chosen from
/// the distance of `z` to the boundary.
pub fn harmonic_measure(domain: &CircularDomain, z: Complex64) -> Result<BoundaryMeasure> {
    harmonic_measure_with(domain, z, samples_for(domain, z))
}

/// Harmonic measure `omega_z` with `n` samples per boundary circle.
///
/// Disk: the Poisson kernel. Concentric annulus `r < |w - c| < R`, with
/// `L = log(R/r)` and `z = c + rho e^{i phi}`: against `dtheta / 2 pi`, the
/// outer density is `log(rho/r)/L + 2 sum_m cos(m(theta - phi))
/// sinh(m log(rho/r)) / sinh(m L)` and the inner one the same with
/// `log(R/rho)`.
pub fn harmonic_measure_with(domain: &CircularDomain, z: Complex64, n: usize) -> Result<BoundaryMeasure> {
    let kind = domain.kind()?;
    if n < 16 {
        return Err(Error::invalid(format!("harmonic measure needs at least 16 samples, got {n}")));
    }
    if !domain.contains(z) {
        return Err(Error::invalid(format!("{z} is not inside the domain")));
    }
    let mut out = BoundaryMeasure::zero(domain, n);
    let outer = domain.outer;
    match kind {
        Kind::Disk => {
            let num = outer.radius * outer.radius - (z - outer.center).norm_sqr();
            let scale = 1.0 / (TAU * outer.radius);
            for (j, d) in out.circles[0].density.iter_mut().enumerate() {
                let w = outer.point(TAU * j as f64 / n as f64);
                *d = num / (w - z).norm_sqr() * scale;
            }
        }
        Kind::Annulus => {
            let (r, big_r) = (domain.inner[0].radius, outer.radius);
            let rel = z - outer.center;
            let (rho, phi) = (rel.norm(), rel.arg());
            let l = (big_r / r).ln();
            let to_outer = (rho / r).ln();
            let to_inner = (big_r / rho).ln();
            for (idx, dist) in [(0, to_outer), (1, to_inner)] {
                let mut coeffs = Vec::new();
                for m in 1..n / 2 {
                    let c = 2.0 * ratio_sinh(m as f64 * dist, m as f64 * l);
                    if c < 1e-18 {
                        break;
                    }
                    coeffs.push(c);
                }
                let radius = out.circles[idx].circle.radius;
                let scale = 1.0 / (TAU * radius);
                for (j, d) in out.circles[idx].density.iter_mut().enumerate() {
                    let t = TAU * j as f64 / n as f64 - phi;
                    let series: f64 = coeffs.iter().enumerate().map(|(m, c)| c * ((m + 1) as f64 * t).cos()).sum();
                    *d = (dist / l + series) * scale;
                }
            }
        }
    }
    Ok(out)
}

/// `sinh(x) / sinh(y)` for `0 <= x <= y` without overflow.
fn ratio_sinh(x: f64, y: f64) -> f64 {
    (x - y).exp() * (1.0 - (-2.0 * x).exp()) / (1.0 - (-2.0 * y).exp())
}

/// Mass of the inner circle under `omega_z` for the annulus
/// `inner < |w - center| < outer`.
pub fn annulus_inner_mass(inner: f64, outer: f64, rho: f64) -> f64 {
    (outer / rho).ln() / (outer / inner).ln()
}

/// The sweep of a positive measure supported on the closure of `domain`:
/// the boundary measure `mu~` with `int u dmu = int u dmu~` for every `u`
/// harmonic in the domain and continuous on its closure.
///
/// Parts of `mu` on the boundary are kept; every interior quadrature node of
/// weight `w` at `p` contributes `w omega_p`.
pub fn sweep(mu: &PlanarMeasure, domain: &CircularDomain, n: usize) -> Result<BoundaryMeasure> {
    domain.kind()?;
    if !mu.is_positive() {
        return Err(Error::invalid("sweep needs a positive measure"));
    }
    let boundary = domain.boundary();
    let mut out = BoundaryMeasure::zero(domain, n);
    let mut interior: Vec<(Complex64, f64)> = Vec::new();
    for (idx, comp) in mu.components().iter().enumerate() {
        let leak = |p: Complex64| {
            Error::invalid(format!("component `{}` has support at {p}, outside the closed domain", comp.label))
        };
        match &comp.kind {
            ComponentKind::Atom { point, mass } => {
                if boundary.iter().any(|c| c.on(*point)) {
                    out.add_atom(*point, mass.re);
                } else if domain.contains(*point) {
                    interior.push((*point, mass.re));
                } else {
                    return Err(leak(*point));
                }
            }
            ComponentKind::Arc {
                shape: ArcShape::Circle { center, radius, arcs },
                density,
            } if boundary.iter().any(|c| c.same_as(&Circle::new(*center, *radius))) => {
                let slot = out
                    .circles
                    .iter_mut()
                    .find(|c| c.circle.same_as(&Circle::new(*center, *radius)))
                    .expect("matched a boundary circle");
                let circle = slot.circle;
                for (j, d) in slot.density.iter_mut().enumerate() {
                    let theta = TAU * j as f64 / n as f64;
                    if on_arcs(theta, arcs) {
                        *d += density.eval(circle.point(theta)).re;
                    }
                }
            }
            _ => {
                for node in mu.component_nodes(idx) {
                    if domain.contains(node.point) {
                        interior.push((node.point, node.weight.re));
                    } else if boundary.iter().any(|c| c.on(node.point)) {
                        out.add_atom(node.point, node.weight.re);
                    } else {
                        return Err(leak(node.point));
                    }
                }
            }
        }
    }
    // Fixed chunks summed in order keep the result independent of scheduling.
    let partials: Vec<Result<BoundaryMeasure>> = interior
        .par_chunks(256)
        .map(|chunk| {
            let mut acc = BoundaryMeasure::zero(domain, n);
            for &(p, w) in chunk {
                acc.add_scaled(&harmonic_measure_with(domain, p, n)?, w);
            }
            Ok(acc)
        })
        .collect();
    for part in partials {
        out.add_scaled(&part?, 1.0);
    }
    Ok(out)
}

fn on_arcs(theta: f64, arcs: &[(f64, f64)]) -> bool {
    arcs.iter().any(|&(s, e)| e - s >= TAU || (theta - s).rem_euclid(TAU) <= e - s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularityReport {
    pub singular: bool,
    /// Mass common to both measures: `int min(d1, d2)` over shared circles
    /// plus `min(m1, m2)` over shared atoms.
    pub overlap: f64,
    pub mass_a: f64,
    pub mass_b: f64,
    pub tol: f64,
}

/// Whether two boundary measures are concentrated on disjoint sets, up to
/// quadrature: the common part must not exceed `tol` times the smaller mass.
pub fn mutually_singular(a: &BoundaryMeasure, b: &BoundaryMeasure, tol: f64) -> SingularityReport {
    let mut overlap = 0.0;
    for ca in &a.circles {
        for cb in b.circles.iter().filter(|c| c.circle.same_as(&ca.circle)) {
            // Sample both on the finer grid.
            let n = ca.samples().max(cb.samples());
            let cell = TAU * ca.circle.radius / n as f64;
            overlap += (0..n)
                .map(|j| {
                    let t = TAU * j as f64 / n as f64;
                    ca.at(t).min(cb.at(t)).max(0.0)
                })
                .sum::<f64>()
                * cell;
        }
    }
    for &(p, m) in &a.atoms {
        for &(q, w) in &b.atoms {
            if (p - q).norm() <= ON_CIRCLE * p.norm().max(1.0) {
                overlap += m.min(w).max(0.0);
            }
        }
    }
    let (mass_a, mass_b) = (a.total_mass(), b.total_mass());
    SingularityReport {
        singular: overlap <= tol * mass_a.min(mass_b),
        overlap,
        mass_a,
        mass_b,
        tol,
    }
}

/// Harmonic measure of the arc of the unit circle from `from` to `to`
/// (counterclockwise) seen from `z` in the unit disk: the angle the arc
/// subtends at `z` over `pi`, minus its central angle over `2 pi`.
pub fn disk_arc_harmonic_measure(z: Complex64, from: f64, to: f64) -> f64 {
    let a = Complex64::from_polar(1.0, from);
    let b = Complex64::from_polar(1.0, to);
    let seen = ((b - z) / (a - z)).arg().rem_euclid(TAU);
    seen / PI - (to - from) / TAU
}
