use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use super::scheme::{run_scheme_with, LightCache};
use super::{is_light_square, PhiField};
use crate::error::{Error, Result};
use crate::geometry::{dyadic_side, DyadicSquare};
use crate::measure::{AreaShape, PlanarMeasure, Region};

/// How far the classifier refines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassifyBudget {
    /// First seed generation tried.
    pub k_start: u32,
    /// Number of seed generations, `k_start, k_start + 1, ...`.
    pub k_count: u32,
    /// Last generation colored in any run.
    pub max_generation: u32,
    /// Working window; when absent one is sized from the ring widths.
    pub window: Option<(Complex64, Complex64)>,
}

impl Default for ClassifyBudget {
    fn default() -> Self {
        ClassifyBudget {
            k_start: 2,
            k_count: 2,
            max_generation: 6,
            window: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Light,
    Heavy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Confidence {
    ProvedAtResolution,
    ResolutionLimited,
}

/// Outcome of one run of the scheme during classification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReachRecord {
    pub k: u32,
    /// Farthest distance from the seed point to a colored square; infinite
    /// after an unbounded green path.
    #[serde(serialize_with = "finite_or_null")]
    pub reach: f64,
    /// Reach of the same run with every square heavy.
    pub envelope: f64,
    pub terminated: bool,
    pub green: usize,
    /// First generation with a green square.
    pub first_green: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointClass {
    pub point: Complex64,
    pub verdict: Verdict,
    /// Radius `delta` of the circles about the point that colored squares
    /// still meet at the finest seed generation; for heavy points, the ring
    /// envelope they stay inside.
    pub witness_radius: f64,
    pub decided_at_generation: u32,
    pub confidence: Confidence,
    pub records: Vec<ReachRecord>,
}

fn finite_or_null<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

/// Bound on how far the red and yellow rings of generations `k+1..=last`
/// can reach from the seed square when nothing is green.
fn envelope_bound(k: u32, last: u32) -> f64 {
    let mut b = SQRT_2 * dyadic_side(k);
    for n in k + 1..=last {
        b += SQRT_2 * (f64::from(n * n) + 3.0) * dyadic_side(n);
    }
    b
}

fn window_around(a: Complex64, half: f64) -> (Complex64, Complex64) {
    let d = Complex64::new(half, half);
    (a - d, a + d)
}

/// Light or heavy status of `a` with respect to `phi`.
///
/// `a` is light when circles about it of every radius up to some `delta`
/// meet the colored squares of `(phi, a, k)` for all large `k`. Without
/// green squares the colored rings shrink towards `a` as `k` grows, so at a
/// fixed seed generation the test is whether the colored region reaches
/// beyond the envelope of an all-heavy run.
pub fn classify_point(phi: &PhiField, a: Complex64, budget: &ClassifyBudget) -> Result<PointClass> {
    let cache = LightCache::default();
    classify_cached(phi, a, budget, &cache)
}

fn classify_cached(phi: &PhiField, a: Complex64, budget: &ClassifyBudget, cache: &LightCache) -> Result<PointClass> {
    if budget.k_count == 0 || budget.max_generation < budget.k_start + budget.k_count {
        return Err(Error::invalid(format!(
            "budget needs k_count >= 1 and max_generation above the last seed generation: {budget:?}"
        )));
    }
    if !(a.re.is_finite() && a.im.is_finite()) {
        return Err(Error::invalid(format!("non-finite point {a}")));
    }
    let light = |s: &DyadicSquare| cache.get_or(s, || is_light_square(phi, s));
    let never = |_: &DyadicSquare| Ok(false);
    let mut records = Vec::new();
    for k in budget.k_start..budget.k_start + budget.k_count {
        let gens = budget.max_generation - k;
        let bound = envelope_bound(k, budget.max_generation);
        let mut window = budget.window.unwrap_or_else(|| window_around(a, (2.0 * bound).max(8.0)));
        let envelope = run_scheme_with(&never, a, k, gens, window_around(a, bound + 1.0))?.reach();
        let mut attempts = 0;
        let scheme = loop {
            match run_scheme_with(&light, a, k, gens, window) {
                Err(Error::WindowTooSmall { .. }) if budget.window.is_none() && attempts < 3 => {
                    attempts += 1;
                    let half = 2.0 * (window.1.re - window.0.re) * 0.5;
                    window = window_around(a, half);
                }
                other => break other?,
            }
        };
        let first_green = scheme
            .generations
            .iter()
            .find(|g| !g.green.is_empty())
            .map(|g| g.generation);
        records.push(ReachRecord {
            k,
            reach: scheme.reach(),
            envelope,
            terminated: scheme.terminated_with_unbounded_green,
            green: scheme.green_count(),
            first_green,
        });
    }
    let finest = records.last().expect("at least one seed generation");
    let is_light = |r: &ReachRecord| r.reach > r.envelope * (1.0 + 1e-12);
    let verdict = if is_light(finest) { Verdict::Light } else { Verdict::Heavy };
    let unanimous = records.iter().all(|r| is_light(r) == is_light(finest));
    let confidence = if unanimous && verdict == Verdict::Light {
        Confidence::ProvedAtResolution
    } else {
        Confidence::ResolutionLimited
    };
    let (witness_radius, decided_at_generation) = match verdict {
        Verdict::Light => {
            let w = budget.window.unwrap_or_else(|| window_around(a, 1.0));
            let to_edge = (a.re - w.0.re).min(w.1.re - a.re).min(a.im - w.0.im).min(w.1.im - a.im);
            let r = if finest.reach.is_finite() { finest.reach } else { to_edge.max(finest.envelope) };
            (r, finest.first_green.unwrap_or(budget.max_generation))
        }
        Verdict::Heavy => (finest.envelope, budget.max_generation),
    };
    Ok(PointClass {
        point: a,
        verdict,
        witness_radius,
        decided_at_generation,
        confidence,
        records,
    })
}

/// Sampled classification of a region against `|mu^|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingReport {
    pub points: Vec<PointClass>,
    pub fraction_light: f64,
    /// `|mu|(V)`.
    pub mass: f64,
    pub tolerance: f64,
    /// Every sampled point is light yet `|mu|(V)` exceeds the tolerance.
    pub inconsistent: bool,
}

/// Mass below which `|mu|(V)` counts as zero.
pub const VANISHING_TOLERANCE: f64 = 1e-6;

/// Classifies `samples` points of `region` with respect to `|mu^|` and
/// compares against `|mu|(region)`: if all points are light the mass should
/// vanish.
pub fn vanishing_consistency(
    mu: &PlanarMeasure,
    region: &AreaShape,
    samples: usize,
    budget: &ClassifyBudget,
) -> Result<VanishingReport> {
    region.validate().map_err(Error::InvalidInput)?;
    if samples == 0 {
        return Err(Error::invalid("vanishing_consistency needs at least one sample"));
    }
    let phi = PhiField::cauchy_modulus(mu.clone());
    let cache = LightCache::default();
    let mut points = Vec::with_capacity(samples);
    for z in sample_points(region, samples) {
        points.push(classify_cached(&phi, z, budget, &cache)?);
    }
    let light = points.iter().filter(|p| p.verdict == Verdict::Light).count();
    let fraction_light = light as f64 / points.len() as f64;
    let mass = mu.restrict_region(&Region::from(*region))?.total_mass();
    Ok(VanishingReport {
        inconsistent: light == points.len() && mass > VANISHING_TOLERANCE,
        points,
        fraction_light,
        mass,
        tolerance: VANISHING_TOLERANCE,
    })
}

/// Deterministic, roughly even points inside a shape.
pub(crate) fn sample_points(shape: &AreaShape, n: usize) -> Vec<Complex64> {
    let golden = PI * (3.0 - 5f64.sqrt());
    match *shape {
        AreaShape::Disk { center, radius } => (0..n)
            .map(|j| {
                let r = radius * ((j as f64 + 0.5) / n as f64).sqrt();
                center + Complex64::from_polar(r, j as f64 * golden)
            })
            .collect(),
        AreaShape::Annulus { center, inner, outer } => (0..n)
            .map(|j| {
                let t = (j as f64 + 0.5) / n as f64;
                let r = (inner * inner + t * (outer * outer - inner * inner)).sqrt();
                center + Complex64::from_polar(r, j as f64 * golden)
            })
            .collect(),
        AreaShape::Rect { min, max } => {
            let cols = (n as f64).sqrt().ceil() as usize;
            let rows = n.div_ceil(cols);
            (0..n)
                .map(|j| {
                    let (c, r) = (j % cols, j / cols);
                    Complex64::new(
                        min.re + (max.re - min.re) * (c as f64 + 0.5) / cols as f64,
                        min.im + (max.im - min.im) * (r as f64 + 0.5) / rows as f64,
                    )
                })
                .collect()
        }
    }
}
