use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::vitushkin::TensorBump;
use crate::error::{Error, Result};
use crate::measure::quadrature::{gauss_legendre, polar_area_nodes, PolarRule};
use crate::measure::{PlanarMeasure, Region};

/// Gauss-Legendre order per panel for the localization integral.
const ORDER: usize = 16;

/// Grid points per side used to sample norms over the cutoff's support.
const NORM_GRID: usize = 9;

/// Measured constants of one localization `f_l = T_phi f`.
#[derive(Debug, Clone, Serialize)]
pub struct LocalizationReport {
    /// `sup |f_l|` sampled on a grid over the support of `phi` and its boundary.
    pub sup_norm: f64,
    /// `sup |f(z) - f(w)|` over grid points `z, w` of the support.
    pub oscillation: f64,
    /// Side of the support of `phi`.
    pub diameter: f64,
    pub gradient_bound: f64,
    /// `sup_norm / (oscillation * diameter * gradient_bound)`: the constant in
    /// `|f_l| <= C0 w(f, d) d |grad phi|`, measured for this call.
    pub c0: f64,
    /// Change of `f_l` at test points between two quadrature orders.
    pub resolution_gap: f64,
}

/// `T_phi f(z) = (1/pi) int (f(w) - f(z)) / (w - z) dphi/dw-bar dA(w)`.
///
/// The integrand only lives where `phi` ramps, which is split into the eight
/// panels around the plateau. A panel close to `z` is integrated in polar
/// coordinates about `z`; the others with tensor Gauss-Legendre.
pub struct Localized<F> {
    f: F,
    bump: TensorBump,
    cache: PanelCache,
    report: LocalizationReport,
}

/// Localizes `f` with the cutoff `bump`.
///
/// `f` must be continuous and smooth enough to be resolved by the panel
/// quadrature on the support of `d phi`; otherwise a diagnostic error is
/// returned.
pub fn localize<F>(f: F, bump: &TensorBump) -> Result<Localized<F>>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let (lo, hi) = bump.support();
    let tests = [
        (lo + hi) * 0.5,
        lo,
        Complex64::new(hi.re, lo.im) + Complex64::new(0.1, 0.0) * (hi - lo).re,
        bump.min + Complex64::new(0.3 * bump.ramp, 0.1 * bump.ramp),
    ];
    let cache = tensor_nodes(&f, bump, ORDER);
    let mut gap = 0.0f64;
    let mut scale = 0.0f64;
    for z in tests {
        let a = operator(&f, bump, z, ORDER, Some(&cache));
        let b = operator(&f, bump, z, ORDER / 2, None);
        gap = gap.max((a - b).norm());
        scale = scale.max(f(z).norm());
    }
    let grid = sample_grid(bump);
    let fvals: Vec<Complex64> = grid.iter().map(|&z| f(z)).collect();
    let oscillation = oscillation(&fvals);
    scale = scale.max(fvals.iter().map(|v| v.norm()).fold(0.0, f64::max));
    if gap > 1e-6 * scale.max(1.0) || !gap.is_finite() {
        return Err(Error::Diagnostic {
            operation: "localize",
            detail: format!(
                "dbar f is not resolved on the cutoff support [{lo}, {hi}]: quadrature orders {} and {ORDER} differ by {gap:.3e}",
                ORDER / 2
            ),
        });
    }
    let sup_norm = grid
        .iter()
        .map(|&z| operator(&f, bump, z, ORDER, Some(&cache)).norm())
        .fold(0.0, f64::max);
    let report = make_report(bump, sup_norm, oscillation, gap);
    Ok(Localized {
        f,
        bump: *bump,
        cache,
        report,
    })
}

impl<F: Fn(Complex64) -> Complex64 + Sync> Localized<F> {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        operator(&self.f, &self.bump, z, ORDER, Some(&self.cache))
    }

    pub fn report(&self) -> &LocalizationReport {
        &self.report
    }

    pub fn bump(&self) -> &TensorBump {
        &self.bump
    }
}

/// `T_phi mu^ = (phi mu)^` for a measure `mu`.
pub struct LocalizedMeasure<'a> {
    mu: &'a PlanarMeasure,
    bump: TensorBump,
}

/// Localizes the Cauchy transform of `mu` with the cutoff `bump`.
///
/// Since `dbar mu^ = -pi mu`, the operator reduces to the Cauchy transform of
/// `phi mu`, which is evaluated on the nodes of `mu`. Summed over a partition
/// of unity these reproduce `mu^` to rounding.
pub fn localize_measure<'a>(mu: &'a PlanarMeasure, bump: &TensorBump) -> LocalizedMeasure<'a> {
    LocalizedMeasure { mu, bump: *bump }
}

impl LocalizedMeasure<'_> {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let b = self.bump;
        super::cauchy_transform_weighted(self.mu, z, &move |w| b.value(w))
    }

    pub fn bump(&self) -> &TensorBump {
        &self.bump
    }

    /// Norms measured on the grid over the cutoff's support.
    pub fn report(&self) -> Result<LocalizationReport> {
        let grid = sample_grid(&self.bump);
        let mut fvals = Vec::with_capacity(grid.len());
        let mut sup_norm = 0.0f64;
        for &z in &grid {
            fvals.push(super::cauchy_transform(self.mu, z)?);
            sup_norm = sup_norm.max(self.eval(z)?.norm());
        }
        Ok(make_report(&self.bump, sup_norm, oscillation(&fvals), 0.0))
    }
}

fn make_report(bump: &TensorBump, sup_norm: f64, oscillation: f64, gap: f64) -> LocalizationReport {
    let (lo, hi) = bump.support();
    let diameter = (hi.re - lo.re).max(hi.im - lo.im);
    let gradient_bound = bump.sampled_gradient_bound(101);
    let denom = oscillation * diameter * gradient_bound;
    LocalizationReport {
        sup_norm,
        oscillation,
        diameter,
        gradient_bound,
        c0: if denom > 0.0 { sup_norm / denom } else { 0.0 },
        resolution_gap: gap,
    }
}

fn sample_grid(bump: &TensorBump) -> Vec<Complex64> {
    let (lo, hi) = bump.support();
    let n = NORM_GRID;
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            out.push(Complex64::new(
                lo.re + (hi.re - lo.re) * a as f64 / (n - 1) as f64,
                lo.im + (hi.im - lo.im) * b as f64 / (n - 1) as f64,
            ));
        }
    }
    out
}

fn oscillation(vals: &[Complex64]) -> f64 {
    let mut best = 0.0f64;
    for (n, a) in vals.iter().enumerate() {
        for b in &vals[n + 1..] {
            best = best.max((a - b).norm());
        }
    }
    best
}

/// Tensor nodes `(w, dphi/dw-bar dA, f(w))` of each ramp panel, row-major
/// over the 3 x 3 panel grid with the plateau left empty.
type PanelCache = Vec<Vec<(Complex64, Complex64, Complex64)>>;

fn panels(bump: &TensorBump) -> Vec<Option<(f64, f64, f64, f64)>> {
    let (xs, ys) = bump.breaks();
    let mut out = Vec::with_capacity(9);
    for a in 0..3 {
        for b in 0..3 {
            let (x0, x1, y0, y1) = (xs[a], xs[a + 1], ys[b], ys[b + 1]);
            let plateau = a == 1 && b == 1;
            out.push((!plateau && x1 > x0 && y1 > y0).then_some((x0, x1, y0, y1)));
        }
    }
    out
}

fn tensor_nodes<F: Fn(Complex64) -> Complex64>(f: &F, bump: &TensorBump, order: usize) -> PanelCache {
    let rule = gauss_legendre(order);
    panels(bump)
        .into_iter()
        .map(|p| {
            let Some((x0, x1, y0, y1)) = p else {
                return Vec::new();
            };
            let (hx, hy) = (0.5 * (x1 - x0), 0.5 * (y1 - y0));
            let mut v = Vec::with_capacity(rule.len() * rule.len());
            for &(u, wu) in rule {
                for &(t, wt) in rule {
                    let w = Complex64::new(x0 + hx * (u + 1.0), y0 + hy * (t + 1.0));
                    v.push((w, bump.dbar(w) * (wu * wt * hx * hy), f(w)));
                }
            }
            v
        })
        .collect()
}

fn operator<F: Fn(Complex64) -> Complex64>(
    f: &F,
    bump: &TensorBump,
    z: Complex64,
    order: usize,
    cache: Option<&PanelCache>,
) -> Complex64 {
    let fz = f(z);
    let mut total = Complex64::new(0.0, 0.0);
    let mut owned = None;
    for (n, p) in panels(bump).into_iter().enumerate() {
        let Some((x0, x1, y0, y1)) = p else {
            continue;
        };
        let dx = (x0 - z.re).max(z.re - x1).max(0.0);
        let dy = (y0 - z.im).max(z.im - y1).max(0.0);
        let size = (x1 - x0).max(y1 - y0);
        if dx.hypot(dy) < size {
            let region = Region::Rect {
                min: Complex64::new(x0, y0),
                max: Complex64::new(x1, y1),
            };
            let polar = PolarRule {
                per_turn: 4 * order,
                radial_panels: 1,
                radial_order: order,
            };
            for (w, dw) in polar_area_nodes(z, &region, polar) {
                total += (f(w) - fz) / (w - z) * bump.dbar(w) * dw;
            }
        } else {
            let nodes = match cache {
                Some(c) => &c[n],
                None => &owned.get_or_insert_with(|| tensor_nodes(f, bump, order))[n],
            };
            for &(w, dphi, fw) in nodes {
                total += (fw - fz) / (w - z) * dphi;
            }
        }
    }
    total / PI
}

/// Finite-difference `d/dz-bar` of `f` at `z` with its own truncation estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DbarResidual {
    pub residual: f64,
    /// Estimated truncation plus rounding error of the difference quotient.
    pub truncation: f64,
}

/// Central-difference `|d f / d z-bar|` at step `h`, with a truncation
/// estimate from the same quotient at step `h / 2`.
///
/// For analytic `f` the quotient is pure truncation error, which shrinks by
/// four when `h` halves; a genuine `dbar` does not.
pub fn dbar_residual(f: impl Fn(Complex64) -> Complex64, z: Complex64, h: f64) -> DbarResidual {
    let q = |h: f64| {
        let fx = (f(z + h) - f(z - h)) / (2.0 * h);
        let fy = (f(z + Complex64::new(0.0, h)) - f(z - Complex64::new(0.0, h))) / (2.0 * h);
        let mag = [f(z + h), f(z - h)].iter().map(|v| v.norm()).fold(f(z).norm(), f64::max);
        ((fx + Complex64::i() * fy) * 0.5, mag)
    };
    let (d1, mag) = q(h);
    let (d2, _) = q(0.5 * h);
    DbarResidual {
        residual: d1.norm(),
        truncation: (d1 - d2).norm() * 4.0 / 3.0 + 4.0 * f64::EPSILON * mag / h,
    }
}
