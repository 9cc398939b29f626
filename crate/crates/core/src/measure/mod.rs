//! Finite measures with compact planar support and their quadrature.
//!
//! A [`PlanarMeasure`] is a list of labelled components: atoms, densities
//! against arclength on circles, arcs and segments, and densities against
//! area on disks, annuli and rectangles (optionally clipped by a [`Region`]).
//! Every component is turned into weighted quadrature nodes once, at
//! construction, using rules adapted to its shape:
//!
//! * full circles: the midpoint rule in angle, `64 m` nodes;
//! * arcs and segments: composite Gauss-Legendre, order 16;
//! * areas: polar coordinates about the shape's center, midpoint or
//!   breakpoint-aware Gauss-Legendre in angle (`32 m` per turn) times
//!   `m` Gauss-Legendre panels of order 8 in radius.
//!
//! Here `m` is the measure's resolution.

pub mod density;
pub(crate) mod quadrature;
pub mod shapes;

use std::collections::HashSet;
use std::f64::consts::TAU;

use num_complex::Complex64;

pub use density::{Density, DensityExpr, DensityFn};
pub use shapes::{AreaShape, Region};

use crate::error::{Error, Result};
use quadrature::{composite_gauss, polar_area_nodes, PolarRule};
use shapes::Curve;

#[derive(Debug, Clone, PartialEq)]
pub enum ArcShape {
    /// Circle restricted to a union of angle intervals `(start, end)`,
    /// `start < end`, total span at most `2 pi`.
    Circle {
        center: Complex64,
        radius: f64,
        arcs: Vec<(f64, f64)>,
    },
    /// Segment from `a` to `b` restricted to parameter intervals in `[0, 1]`.
    Segment {
        a: Complex64,
        b: Complex64,
        params: Vec<(f64, f64)>,
    },
}

impl ArcShape {
    pub fn circle(center: Complex64, radius: f64) -> Self {
        ArcShape::Circle {
            center,
            radius,
            arcs: vec![(0.0, TAU)],
        }
    }

    pub fn arc(center: Complex64, radius: f64, from: f64, to: f64) -> Self {
        ArcShape::Circle {
            center,
            radius,
            arcs: vec![(from, to)],
        }
    }

    pub fn segment(a: Complex64, b: Complex64) -> Self {
        ArcShape::Segment {
            a,
            b,
            params: vec![(0.0, 1.0)],
        }
    }

    pub fn is_full_circle(&self) -> bool {
        matches!(self, ArcShape::Circle { arcs, .. } if arcs.len() == 1 && arcs[0].1 - arcs[0].0 >= TAU)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        match self {
            ArcShape::Circle { radius, arcs, .. } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(format!("bad circle radius {radius}"));
                }
                let span: f64 = arcs.iter().map(|(s, e)| e - s).sum();
                #[allow(clippy::neg_cmp_op_on_partial_ord)]
                if arcs.iter().any(|(s, e)| !(e > s)) || span > TAU * (1.0 + 1e-12) {
                    return Err("bad arc angle intervals".into());
                }
            }
            ArcShape::Segment { a, b, params } => {
                if a == b {
                    return Err("degenerate segment".into());
                }
                if params.iter().any(|&(s, e)| !(0.0..=1.0).contains(&s) || !(e > s && e <= 1.0)) {
                    return Err("bad segment parameter intervals".into());
                }
            }
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        match self {
            ArcShape::Circle { radius, arcs, .. } => arcs.iter().map(|(s, e)| (e - s) * radius).sum(),
            ArcShape::Segment { a, b, params } => {
                (b - a).norm() * params.iter().map(|(s, e)| e - s).sum::<f64>()
            }
        }
    }

    /// Unweighted arclength nodes.
    fn nodes(&self, m: usize) -> Vec<(Complex64, f64)> {
        let mut out = Vec::new();
        match self {
            ArcShape::Circle { center, radius, arcs } => {
                if self.is_full_circle() {
                    let n = 64 * m;
                    let w = TAU * radius / n as f64;
                    let start = arcs[0].0;
                    for j in 0..n {
                        let t = start + TAU * j as f64 / n as f64;
                        out.push((center + Complex64::from_polar(*radius, t), w));
                    }
                } else {
                    let mut pts = Vec::new();
                    for &(s, e) in arcs {
                        let panels = (((e - s) / TAU) * 4.0 * m as f64).ceil().max(1.0) as usize;
                        pts.clear();
                        composite_gauss(s, e, panels, 16, &mut pts);
                        for &(t, w) in &pts {
                            out.push((center + Complex64::from_polar(*radius, t), w * radius));
                        }
                    }
                }
            }
            ArcShape::Segment { a, b, params } => {
                let len = (b - a).norm();
                let mut pts = Vec::new();
                for &(s, e) in params {
                    let panels = ((e - s) * m as f64).ceil().max(1.0) as usize;
                    pts.clear();
                    composite_gauss(s, e, panels, 16, &mut pts);
                    for &(t, w) in &pts {
                        out.push((a + (b - a) * t, w * len));
                    }
                }
            }
        }
        out
    }

    fn spacing(&self, m: usize) -> f64 {
        match self {
            ArcShape::Circle { radius, .. } if self.is_full_circle() => TAU * radius / (64 * m) as f64,
            ArcShape::Circle { radius, .. } => TAU * radius / (4 * m) as f64 / 8.0,
            ArcShape::Segment { a, b, .. } => (b - a).norm() / m as f64 / 8.0,
        }
    }

    pub fn distance_lower_bound(&self, z: Complex64) -> f64 {
        match self {
            ArcShape::Circle { center, radius, .. } => ((z - center).norm() - radius).abs(),
            ArcShape::Segment { a, b, .. } => {
                let d = b - a;
                let t = (((z - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
                (z - (a + d * t)).norm()
            }
        }
    }

    fn restrict(&self, region: &Region) -> Option<ArcShape> {
        match self {
            ArcShape::Circle { center, radius, arcs } => {
                let crossings: Vec<f64> = region
                    .crossings_with(&Curve::Circle {
                        center: *center,
                        radius: *radius,
                    })
                    .into_iter()
                    .map(|p| (p - center).arg())
                    .collect();
                let mut kept = Vec::new();
                for &(s, e) in arcs {
                    let mut cuts = vec![s, e];
                    for &a in &crossings {
                        let mut t = a + TAU * ((s - a) / TAU).ceil();
                        while t < e {
                            if t > s {
                                cuts.push(t);
                            }
                            t += TAU;
                        }
                    }
                    cuts.sort_by(f64::total_cmp);
                    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
                    for w in cuts.windows(2) {
                        let mid = 0.5 * (w[0] + w[1]);
                        if region.contains(center + Complex64::from_polar(*radius, mid)) {
                            push_merged(&mut kept, (w[0], w[1]));
                        }
                    }
                }
                (!kept.is_empty()).then_some(ArcShape::Circle {
                    center: *center,
                    radius: *radius,
                    arcs: kept,
                })
            }
            ArcShape::Segment { a, b, params } => {
                let d = b - a;
                let crossings: Vec<f64> = region
                    .crossings_with(&Curve::Segment { a: *a, b: *b })
                    .into_iter()
                    .map(|p| ((p - a) * d.conj()).re / d.norm_sqr())
                    .collect();
                let mut kept = Vec::new();
                for &(s, e) in params {
                    let mut cuts = vec![s, e];
                    cuts.extend(crossings.iter().copied().filter(|&t| t > s && t < e));
                    cuts.sort_by(f64::total_cmp);
                    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
                    for w in cuts.windows(2) {
                        if region.contains(a + d * (0.5 * (w[0] + w[1]))) {
                            push_merged(&mut kept, (w[0], w[1]));
                        }
                    }
                }
                (!kept.is_empty()).then_some(ArcShape::Segment {
                    a: *a,
                    b: *b,
                    params: kept,
                })
            }
        }
    }
}

fn push_merged(v: &mut Vec<(f64, f64)>, iv: (f64, f64)) {
    if let Some(last) = v.last_mut() {
        if (last.1 - iv.0).abs() < 1e-14 {
            last.1 = iv.1;
            return;
        }
    }
    v.push(iv);
}

/// An area shape, possibly clipped by a region.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaSupport {
    pub shape: AreaShape,
    pub clip: Option<Region>,
}

impl AreaSupport {
    pub fn new(shape: AreaShape) -> Self {
        AreaSupport { shape, clip: None }
    }

    /// The support as a single region.
    pub fn region(&self) -> Region {
        match &self.clip {
            None => self.shape.into(),
            Some(c) => Region::Intersection {
                of: vec![self.shape.into(), c.clone()],
            },
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.region().contains(z)
    }

    pub fn distance_lower_bound(&self, z: Complex64) -> f64 {
        Region::from(self.shape).distance_lower_bound(z)
    }

    pub(crate) fn rule(m: usize) -> PolarRule {
        PolarRule {
            per_turn: 32 * m,
            radial_panels: m,
            radial_order: 8,
        }
    }

    fn nodes(&self, m: usize) -> Vec<(Complex64, f64)> {
        polar_area_nodes(self.shape.center(), &self.region(), Self::rule(m))
    }

    fn spacing(&self, m: usize) -> f64 {
        let r = self.shape.circumradius();
        (r / m as f64).max(TAU * r / (32 * m) as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComponentKind {
    Atom { point: Complex64, mass: Complex64 },
    Arc { shape: ArcShape, density: Density },
    Area { support: AreaSupport, density: Density },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureComponent {
    pub label: String,
    pub kind: ComponentKind,
}

impl MeasureComponent {
    pub fn atom(label: &str, point: Complex64, mass: f64) -> Self {
        MeasureComponent {
            label: label.into(),
            kind: ComponentKind::Atom {
                point,
                mass: Complex64::new(mass, 0.0),
            },
        }
    }

    pub fn arc(label: &str, shape: ArcShape, density: Density) -> Self {
        MeasureComponent {
            label: label.into(),
            kind: ComponentKind::Arc { shape, density },
        }
    }

    pub fn area(label: &str, shape: AreaShape, density: Density) -> Self {
        MeasureComponent {
            label: label.into(),
            kind: ComponentKind::Area {
                support: AreaSupport::new(shape),
                density,
            },
        }
    }

    /// Uniform arclength measure of total mass `mass` on a full circle.
    pub fn uniform_circle(label: &str, center: Complex64, radius: f64, mass: f64) -> Self {
        Self::arc(
            label,
            ArcShape::circle(center, radius),
            Density::constant(mass / (TAU * radius)),
        )
    }

    pub fn disk(label: &str, center: Complex64, radius: f64, density: f64) -> Self {
        Self::area(label, AreaShape::Disk { center, radius }, Density::constant(density))
    }

    pub fn segment(label: &str, a: Complex64, b: Complex64, density: f64) -> Self {
        Self::arc(label, ArcShape::segment(a, b), Density::constant(density))
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            ComponentKind::Atom { .. } => "atom",
            ComponentKind::Arc { shape: ArcShape::Circle { .. }, .. } => {
                if matches!(&self.kind, ComponentKind::Arc { shape, .. } if shape.is_full_circle()) {
                    "circle"
                } else {
                    "arc"
                }
            }
            ComponentKind::Arc { .. } => "segment",
            ComponentKind::Area { support, .. } => match support.shape {
                AreaShape::Disk { .. } => "disk",
                AreaShape::Annulus { .. } => "annulus",
                AreaShape::Rect { .. } => "rect",
            },
        }
    }

    /// Lower bound on the distance from `z` to the support.
    pub fn distance_lower_bound(&self, z: Complex64) -> f64 {
        match &self.kind {
            ComponentKind::Atom { point, .. } => (z - point).norm(),
            ComponentKind::Arc { shape, .. } => shape.distance_lower_bound(z),
            ComponentKind::Area { support, .. } => support.distance_lower_bound(z),
        }
    }

    /// Largest gap between neighbouring quadrature nodes at resolution `m`.
    pub fn node_spacing(&self, m: usize) -> f64 {
        match &self.kind {
            ComponentKind::Atom { .. } => 0.0,
            ComponentKind::Arc { shape, .. } => shape.spacing(m),
            ComponentKind::Area { support, .. } => support.spacing(m),
        }
    }

    /// Axis-aligned box `(min, max)` containing the support.
    pub fn bounding_box(&self) -> (Complex64, Complex64) {
        let sq = |c: Complex64, r: f64| (c - Complex64::new(r, r), c + Complex64::new(r, r));
        match &self.kind {
            ComponentKind::Atom { point, .. } => (*point, *point),
            ComponentKind::Arc { shape: ArcShape::Circle { center, radius, .. }, .. } => sq(*center, *radius),
            ComponentKind::Arc { shape: ArcShape::Segment { a, b, .. }, .. } => (
                Complex64::new(a.re.min(b.re), a.im.min(b.im)),
                Complex64::new(a.re.max(b.re), a.im.max(b.im)),
            ),
            ComponentKind::Area { support, .. } => match support.shape {
                AreaShape::Rect { min, max } => (min, max),
                s => sq(s.center(), s.circumradius()),
            },
        }
    }

    pub(crate) fn nodes_at(&self, m: usize) -> Vec<QuadratureNode> {
        match &self.kind {
            ComponentKind::Atom { point, mass } => vec![QuadratureNode {
                point: *point,
                weight: *mass,
            }],
            ComponentKind::Arc { shape, density } => shape
                .nodes(m)
                .into_iter()
                .map(|(p, w)| QuadratureNode {
                    point: p,
                    weight: density.eval(p) * w,
                })
                .collect(),
            ComponentKind::Area { support, density } => support
                .nodes(m)
                .into_iter()
                .map(|(p, w)| QuadratureNode {
                    point: p,
                    weight: density.eval(p) * w,
                })
                .collect(),
        }
    }

    fn restrict(&self, region: &Region) -> Option<MeasureComponent> {
        let kind = match &self.kind {
            ComponentKind::Atom { point, .. } => region.contains(*point).then(|| self.kind.clone())?,
            ComponentKind::Arc { shape, density } => ComponentKind::Arc {
                shape: shape.restrict(region)?,
                density: density.clone(),
            },
            ComponentKind::Area { support, density } => ComponentKind::Area {
                support: AreaSupport {
                    shape: support.shape,
                    clip: Some(match &support.clip {
                        None => region.clone(),
                        Some(c) => Region::Intersection {
                            of: vec![c.clone(), region.clone()],
                        },
                    }),
                },
                density: density.clone(),
            },
        };
        Some(MeasureComponent {
            label: self.label.clone(),
            kind,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureNode {
    pub point: Complex64,
    /// Density times the geometric quadrature weight.
    pub weight: Complex64,
}

/// A finite measure with compact support, discretized at resolution `m`.
#[derive(Debug, Clone)]
pub struct PlanarMeasure {
    components: Vec<MeasureComponent>,
    resolution: usize,
    positive: bool,
    nodes: Vec<Vec<QuadratureNode>>,
}

impl PartialEq for PlanarMeasure {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
            && self.resolution == other.resolution
            && self.positive == other.positive
    }
}

impl PlanarMeasure {
    pub fn new(components: Vec<MeasureComponent>, resolution: usize) -> Result<Self> {
        Self::build(components, resolution, false)
    }

    /// Like [`PlanarMeasure::new`], additionally requiring nonnegative masses and densities.
    pub fn positive(components: Vec<MeasureComponent>, resolution: usize) -> Result<Self> {
        Self::build(components, resolution, true)
    }

    fn build(components: Vec<MeasureComponent>, resolution: usize, positive: bool) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::invalid("resolution must be at least 1"));
        }
        let mut labels = HashSet::new();
        for c in &components {
            if !labels.insert(c.label.as_str()) {
                return Err(Error::invalid(format!("duplicate label `{}`", c.label)));
            }
            match &c.kind {
                ComponentKind::Atom { point, mass } => {
                    if !(point.re.is_finite() && point.im.is_finite() && mass.re.is_finite() && mass.im.is_finite()) {
                        return Err(Error::invalid(format!("`{}`: non-finite atom", c.label)));
                    }
                }
                ComponentKind::Arc { shape, .. } => shape.validate().map_err(|e| Error::invalid(format!("`{}`: {e}", c.label)))?,
                ComponentKind::Area { support, .. } => support
                    .shape
                    .validate()
                    .map_err(|e| Error::invalid(format!("`{}`: {e}", c.label)))?,
            }
        }
        let nodes: Vec<Vec<QuadratureNode>> = components.iter().map(|c| c.nodes_at(resolution)).collect();
        for (c, ns) in components.iter().zip(&nodes) {
            for n in ns {
                if !(n.weight.re.is_finite() && n.weight.im.is_finite()) {
                    return Err(Error::NumericDomain {
                        operation: "measure",
                        detail: format!("`{}`: non-finite density at {}", c.label, n.point),
                    });
                }
                if positive && (n.weight.re < 0.0 || n.weight.im != 0.0) {
                    return Err(Error::invalid(format!(
                        "`{}`: negative or complex mass at {} in a positive measure",
                        c.label, n.point
                    )));
                }
            }
        }
        Ok(PlanarMeasure {
            components,
            resolution,
            positive,
            nodes,
        })
    }

    pub fn components(&self) -> &[MeasureComponent] {
        &self.components
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn labels(&self) -> Vec<&str> {
        self.components.iter().map(|c| c.label.as_str()).collect()
    }

    /// Same components at another resolution.
    pub fn with_resolution(&self, m: usize) -> Result<Self> {
        Self::build(self.components.clone(), m, self.positive)
    }

    pub fn component_nodes(&self, idx: usize) -> &[QuadratureNode] {
        &self.nodes[idx]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &QuadratureNode> {
        self.nodes.iter().flatten()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.iter().map(Vec::len).sum()
    }

    pub fn node_spacing(&self, idx: usize) -> f64 {
        self.components[idx].node_spacing(self.resolution)
    }

    /// Total variation `|mu|(C)`; for positive measures this is `mu(C)`.
    pub fn total_mass(&self) -> f64 {
        self.nodes().map(|n| n.weight.norm()).sum()
    }

    pub fn integrate(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for idx in 0..self.components.len() {
            total += self.integrate_component(idx, &f)?;
        }
        Ok(total)
    }

    pub fn integrate_component(&self, idx: usize, f: impl Fn(Complex64) -> Complex64) -> Result<Complex64> {
        let mut s = Complex64::new(0.0, 0.0);
        for n in &self.nodes[idx] {
            let v = f(n.point);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NumericDomain {
                    operation: "integrate",
                    detail: format!("integrand is {v} at node {}", n.point),
                });
            }
            s += v * n.weight;
        }
        Ok(s)
    }

    pub fn restrict_labels(&self, labels: &[&str]) -> Result<Self> {
        for l in labels {
            if !self.components.iter().any(|c| c.label == *l) {
                return Err(Error::invalid(format!("unknown label `{l}`")));
            }
        }
        let keep: Vec<MeasureComponent> = self
            .components
            .iter()
            .filter(|c| labels.contains(&c.label.as_str()))
            .cloned()
            .collect();
        Self::build(keep, self.resolution, self.positive)
    }

    /// Restriction to a region; components are clipped exactly.
    pub fn restrict_region(&self, region: &Region) -> Result<Self> {
        let keep = self.components.iter().filter_map(|c| c.restrict(region)).collect();
        Self::build(keep, self.resolution, self.positive)
    }

    /// Box `(min, max)` containing the support, or `None` for the zero measure.
    pub fn bounding_box(&self) -> Option<(Complex64, Complex64)> {
        self.components.iter().map(|c| c.bounding_box()).reduce(|a, b| {
            (
                Complex64::new(a.0.re.min(b.0.re), a.0.im.min(b.0.im)),
                Complex64::new(a.1.re.max(b.1.re), a.1.im.max(b.1.im)),
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_circle() -> PlanarMeasure {
        PlanarMeasure::positive(vec![MeasureComponent::uniform_circle("circle", c(0.0, 0.0), 1.0, 1.0)], 8).unwrap()
    }

    fn unit_disk() -> PlanarMeasure {
        PlanarMeasure::positive(vec![MeasureComponent::disk("disk", c(0.0, 0.0), 1.0, 1.0)], 8).unwrap()
    }

    #[test]
    fn total_mass_examples() {
        let atom = PlanarMeasure::new(vec![MeasureComponent::atom("a", c(0.0, 0.0), 1.0)], 4).unwrap();
        assert_eq!(atom.total_mass(), 1.0);
        assert!((unit_circle().total_mass() - 1.0).abs() < 1e-10);
        assert!((unit_disk().total_mass() - PI).abs() < 1e-6);
    }

    #[test]
    fn integrate_examples() {
        let atom = PlanarMeasure::new(vec![MeasureComponent::atom("a", c(2.0, 0.0), 1.0)], 4).unwrap();
        assert_eq!(atom.integrate(|z| z).unwrap(), c(2.0, 0.0));
        assert!(unit_circle().integrate(|z| z).unwrap().norm() < 1e-10);
        let v = unit_disk().integrate(|z| c(z.norm_sqr(), 0.0)).unwrap();
        assert!((v.re - PI / 2.0).abs() < 1e-6 && v.im.abs() < 1e-12);
    }

    #[test]
    fn integrate_rejects_non_finite() {
        let atom = PlanarMeasure::new(vec![MeasureComponent::atom("a", c(0.0, 0.0), 1.0)], 4).unwrap();
        let r = atom.integrate(|z| c(1.0, 0.0) / z);
        assert!(matches!(r, Err(Error::NumericDomain { .. })));
    }

    #[test]
    fn restrict_examples() {
        let two = PlanarMeasure::new(
            vec![
                MeasureComponent::disk("disk1", c(-2.0, 0.0), 0.5, 1.0),
                MeasureComponent::disk("disk2", c(2.0, 0.0), 0.5, 1.0),
            ],
            4,
        )
        .unwrap();
        let r = two.restrict_labels(&["disk1"]).unwrap();
        assert_eq!(r.components().len(), 1);
        assert!(two.restrict_labels(&["nope"]).is_err());

        let upper = unit_circle().restrict_region(&Region::upper_half_plane()).unwrap();
        assert!((upper.total_mass() - 0.5).abs() < 1e-8);

        let half = unit_disk()
            .restrict_region(&Region::Disk {
                center: c(0.0, 0.0),
                radius: 0.5,
            })
            .unwrap();
        assert!((half.total_mass() - PI / 4.0).abs() < 1e-6);
    }

    #[test]
    fn restriction_and_complement_partition_mass() {
        let mu = PlanarMeasure::new(
            vec![
                MeasureComponent::disk("d", c(0.0, 0.0), 1.0, 1.0),
                MeasureComponent::uniform_circle("s", c(0.5, 0.0), 0.75, 2.0),
                MeasureComponent::segment("seg", c(-1.0, -1.0), c(1.0, 1.0), 1.0),
                MeasureComponent::atom("a", c(0.3, 0.0), 0.7),
            ],
            8,
        )
        .unwrap();
        let region = Region::Disk {
            center: c(0.6, 0.2),
            radius: 0.7,
        };
        let inside = mu.restrict_region(&region).unwrap();
        let outside = mu.restrict_region(&region.clone().complement()).unwrap();
        let total = inside.total_mass() + outside.total_mass();
        assert!((total - mu.total_mass()).abs() < 1e-8, "{total} vs {}", mu.total_mass());
    }

    #[test]
    fn positivity_is_enforced() {
        let r = PlanarMeasure::positive(vec![MeasureComponent::atom("a", c(0.0, 0.0), -1.0)], 4);
        assert!(r.is_err());
        let r = PlanarMeasure::new(vec![MeasureComponent::atom("a", c(0.0, 0.0), -1.0)], 4);
        assert!(r.is_ok());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let r = PlanarMeasure::new(
            vec![
                MeasureComponent::atom("a", c(0.0, 0.0), 1.0),
                MeasureComponent::atom("a", c(1.0, 0.0), 1.0),
            ],
            4,
        );
        assert!(r.is_err());
    }

    #[test]
    fn arc_nodes_cover_arc_length() {
        let arc = PlanarMeasure::new(
            vec![MeasureComponent::arc(
                "arc",
                ArcShape::arc(c(0.0, 0.0), 2.0, -1.0, 2.5),
                Density::constant(1.0),
            )],
            4,
        )
        .unwrap();
        assert!((arc.total_mass() - 7.0).abs() < 1e-12);
    }
}
