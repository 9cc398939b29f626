use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{dyadic_side, DyadicSquare};

/// Cubic smoothstep `3u^2 - 2u^3` clamped to `[0, 1]`, and its derivative.
fn smoothstep(u: f64) -> (f64, f64) {
    if u <= 0.0 {
        (0.0, 0.0)
    } else if u >= 1.0 {
        (1.0, 0.0)
    } else {
        (u * u * (3.0 - 2.0 * u), 6.0 * u * (1.0 - u))
    }
}

/// A `C^1` tensor-product cutoff: `1` on a plateau rectangle, `0` off a
/// larger one, with smoothstep ramps of width `ramp` centered on the edges
/// of `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TensorBump {
    pub min: Complex64,
    pub max: Complex64,
    pub ramp: f64,
}

impl TensorBump {
    pub fn new(min: Complex64, max: Complex64, ramp: f64) -> Result<Self> {
        let ok = ramp > 0.0 && max.re - min.re >= ramp && max.im - min.im >= ramp;
        if !ok {
            return Err(Error::invalid(format!(
                "cutoff ramps of width {ramp} do not fit in [{min}, {max}]"
            )));
        }
        Ok(TensorBump { min, max, ramp })
    }

    fn profile(&self, x: f64, a: f64, b: f64) -> (f64, f64) {
        let w = self.ramp;
        let (up, dup) = smoothstep((x - (a - 0.5 * w)) / w);
        let (down, ddown) = smoothstep(((b + 0.5 * w) - x) / w);
        (up * down, (dup * down - up * ddown) / w)
    }

    pub fn value(&self, z: Complex64) -> f64 {
        self.profile(z.re, self.min.re, self.max.re).0 * self.profile(z.im, self.min.im, self.max.im).0
    }

    /// `(d/dx, d/dy)`.
    pub fn gradient(&self, z: Complex64) -> (f64, f64) {
        let (px, dpx) = self.profile(z.re, self.min.re, self.max.re);
        let (py, dpy) = self.profile(z.im, self.min.im, self.max.im);
        (dpx * py, px * dpy)
    }

    /// `d/dz-bar = (d/dx + i d/dy) / 2`.
    pub fn dbar(&self, z: Complex64) -> Complex64 {
        let (gx, gy) = self.gradient(z);
        Complex64::new(0.5 * gx, 0.5 * gy)
    }

    /// Closed rectangle outside which the cutoff vanishes.
    pub fn support(&self) -> (Complex64, Complex64) {
        let h = Complex64::new(0.5 * self.ramp, 0.5 * self.ramp);
        (self.min - h, self.max + h)
    }

    pub fn support_contains(&self, z: Complex64) -> bool {
        let (lo, hi) = self.support();
        z.re >= lo.re && z.re <= hi.re && z.im >= lo.im && z.im <= hi.im
    }

    pub fn distance_to_support(&self, z: Complex64) -> f64 {
        let (lo, hi) = self.support();
        let dx = (lo.re - z.re).max(z.re - hi.re).max(0.0);
        let dy = (lo.im - z.im).max(z.im - hi.im).max(0.0);
        dx.hypot(dy)
    }

    /// Lines across which the cutoff changes formula, per axis.
    pub(crate) fn breaks(&self) -> ([f64; 4], [f64; 4]) {
        let h = 0.5 * self.ramp;
        (
            [self.min.re - h, self.min.re + h, self.max.re - h, self.max.re + h],
            [self.min.im - h, self.min.im + h, self.max.im - h, self.max.im + h],
        )
    }

    /// `sup |grad phi|`, sampled on a `n x n` grid over the support.
    pub fn sampled_gradient_bound(&self, n: usize) -> f64 {
        let (lo, hi) = self.support();
        let mut best = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let z = Complex64::new(
                    lo.re + (hi.re - lo.re) * a as f64 / (n - 1) as f64,
                    lo.im + (hi.im - lo.im) * b as f64 / (n - 1) as f64,
                );
                let (gx, gy) = self.gradient(z);
                best = best.max(gx.hypot(gy));
            }
        }
        best
    }
}

/// Regular covering of a window by the squares of generation `k`, each
/// enlarged by `5/4` about its center, with a subordinate partition of unity.
///
/// Member `(i, j)` is the cutoff with ramp centers on the edges of the
/// dyadic square `(k, i, j)` and ramp width `2^-k / 4`; along each axis the
/// profiles telescope, so the members sum to one everywhere.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VitushkinCover {
    pub k: u32,
    pub window: (Complex64, Complex64),
    /// Inclusive lattice index ranges `(i0, i1, j0, j1)`.
    pub range: (i64, i64, i64, i64),
}

const MAX_COVER_SQUARES: i64 = 4_000_000;

/// Cover of `[min, max]` by every enlarged square meeting it.
pub fn build_cover(k: u32, min: Complex64, max: Complex64) -> Result<VitushkinCover> {
    let finite = [min.re, min.im, max.re, max.im].iter().all(|v| v.is_finite());
    if !finite || !(max.re > min.re && max.im > min.im) {
        return Err(Error::invalid(format!("bad cover window [{min}, {max}]")));
    }
    let s = dyadic_side(k);
    let lo = |a: f64| (a / s - 1.125).floor() as i64 + 1;
    let hi = |b: f64| (b / s + 0.125).ceil() as i64 - 1;
    let range = (lo(min.re), hi(max.re), lo(min.im), hi(max.im));
    let count = (range.1 - range.0 + 1) * (range.3 - range.2 + 1);
    if count > MAX_COVER_SQUARES {
        return Err(Error::WindowTooSmall {
            operation: "build_cover",
            detail: format!("{count} squares at generation {k}; use a smaller window or generation"),
        });
    }
    Ok(VitushkinCover {
        k,
        window: (min, max),
        range,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringSumReport {
    pub samples: usize,
    /// Largest observed ratio of the covering sum to `min(1, 2^-k / dist)`.
    pub constant: f64,
    pub worst_point: Complex64,
}

impl VitushkinCover {
    pub fn side(&self) -> f64 {
        dyadic_side(self.k)
    }

    /// Side of an enlarged square.
    pub fn enlarged_side(&self) -> f64 {
        1.25 * self.side()
    }

    pub fn len(&self) -> usize {
        let (i0, i1, j0, j1) = self.range;
        ((i1 - i0 + 1) * (j1 - j0 + 1)) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn squares(&self) -> Vec<DyadicSquare> {
        let (i0, i1, j0, j1) = self.range;
        let mut out = Vec::with_capacity(self.len());
        for i in i0..=i1 {
            for j in j0..=j1 {
                out.push(DyadicSquare::new(self.k, i, j));
            }
        }
        out
    }

    pub fn contains_member(&self, s: &DyadicSquare) -> bool {
        let (i0, i1, j0, j1) = self.range;
        s.k == self.k && (i0..=i1).contains(&s.i) && (j0..=j1).contains(&s.j)
    }

    /// Partition function of the member built on `s`.
    pub fn member(&self, s: &DyadicSquare) -> TensorBump {
        let h = self.side();
        let c = s.corner();
        TensorBump {
            min: c,
            max: c + Complex64::new(h, h),
            ramp: 0.25 * h,
        }
    }

    /// Members whose enlarged square contains `z`.
    pub fn members_at(&self, z: Complex64) -> Vec<DyadicSquare> {
        let s = self.side();
        let (i0, i1, j0, j1) = self.range;
        let span = |x: f64, lo: i64, hi: i64| {
            let a = ((x / s - 1.125).ceil() as i64).max(lo);
            let b = ((x / s + 0.125).floor() as i64).min(hi);
            a..=b
        };
        let mut out = Vec::new();
        for i in span(z.re, i0, i1) {
            for j in span(z.im, j0, j1) {
                out.push(DyadicSquare::new(self.k, i, j));
            }
        }
        out
    }

    pub fn partition_sum(&self, z: Complex64) -> f64 {
        self.members_at(z).iter().map(|s| self.member(s).value(z)).sum()
    }

    /// Union of the enlarged squares.
    pub fn union_rect(&self) -> (Complex64, Complex64) {
        let s = self.side();
        let (i0, i1, j0, j1) = self.range;
        (
            Complex64::new(i0 as f64 * s - s / 8.0, j0 as f64 * s - s / 8.0),
            Complex64::new((i1 + 1) as f64 * s + s / 8.0, (j1 + 1) as f64 * s + s / 8.0),
        )
    }

    pub fn distance_to_union(&self, z: Complex64) -> f64 {
        let (lo, hi) = self.union_rect();
        let dx = (lo.re - z.re).max(z.re - hi.re).max(0.0);
        let dy = (lo.im - z.im).max(z.im - hi.im).max(0.0);
        dx.hypot(dy)
    }

    /// `sum_l min(1, 2^-3k / |z - z_l|^3)` over all members.
    pub fn covering_sum(&self, z: Complex64) -> f64 {
        let s3 = self.side().powi(3);
        self.squares()
            .iter()
            .map(|q| {
                let d = (z - q.center()).norm();
                if d == 0.0 {
                    1.0
                } else {
                    (s3 / (d * d * d)).min(1.0)
                }
            })
            .sum()
    }

    /// Largest ratio `covering_sum(z) / min(1, 2^-k / dist(z, union))` over
    /// the given points.
    pub fn covering_sum_constant(&self, points: &[Complex64]) -> CoveringSumReport {
        let s = self.side();
        let mut report = CoveringSumReport {
            samples: points.len(),
            constant: 0.0,
            worst_point: Complex64::new(0.0, 0.0),
        };
        for &z in points {
            let d = self.distance_to_union(z);
            let rhs = if d == 0.0 { 1.0 } else { (s / d).min(1.0) };
            let ratio = self.covering_sum(z) / rhs;
            if ratio > report.constant {
                report.constant = ratio;
                report.worst_point = z;
            }
        }
        report
    }
}
