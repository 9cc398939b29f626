use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default number of circle samples.
pub const DEFAULT_SAMPLES: usize = 128;

/// Spectral tail, relative to the largest coefficient, above which the
/// samples are rejected as not coming from a function analytic outside.
const DECAY_TOLERANCE: f64 = 1e-9;

/// Leading coefficients of `f(z) = sum_n a_n (z - z0)^-n` near infinity.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientsAtInfinity {
    pub center: Complex64,
    pub radius: f64,
    /// `a_0 = f(oo)`.
    pub value_at_infinity: Complex64,
    /// `a_1 = f'(oo)`, which does not depend on the center.
    pub a1: Complex64,
    /// `a_2`, the second coefficient about `center`.
    pub a2: Complex64,
    /// All recovered `a_n` for `n < samples / 2`.
    pub coefficients: Vec<Complex64>,
    /// Largest discarded mode (positive frequencies and the upper half of the
    /// negative ones), relative to the largest kept one.
    pub residual: f64,
}

/// Samples `f` at `samples` equispaced points on `|z - z0| = r` and recovers
/// its expansion at infinity.
pub fn coefficients_at_infinity(
    f: impl Fn(Complex64) -> Complex64,
    z0: Complex64,
    r: f64,
    samples: usize,
) -> Result<CoefficientsAtInfinity> {
    if samples < 64 {
        return Err(Error::invalid(format!("need at least 64 circle samples, got {samples}")));
    }
    let values: Vec<Complex64> = (0..samples)
        .map(|j| f(z0 + Complex64::from_polar(r, TAU * j as f64 / samples as f64)))
        .collect();
    coefficients_from_samples(&values, z0, r)
}

/// Same as [`coefficients_at_infinity`] from precomputed samples
/// `f(z0 + r e^{2 pi i j / n})`, `j = 0..n`.
pub fn coefficients_from_samples(values: &[Complex64], z0: Complex64, r: f64) -> Result<CoefficientsAtInfinity> {
    let n = values.len();
    if n < 64 {
        return Err(Error::invalid(format!("need at least 64 circle samples, got {n}")));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("bad circle radius {r}")));
    }
    if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::NumericDomain {
            operation: "coefficients_at_infinity",
            detail: "non-finite sample".into(),
        });
    }
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    // buf[k] / n multiplies e^{+ik theta}; the mode e^{-ik theta} sits at n - k.
    let mode = |k: usize| buf[(n - k) % n] * scale;
    let half = n / 2;
    let kept: Vec<Complex64> = (0..half).map(mode).collect();
    let peak = kept.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let positive = (1..half).map(|k| (buf[k] * scale).norm()).fold(0.0, f64::max);
    let tail = kept[half / 2..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let residual = if peak > 0.0 { positive.max(tail) / peak } else { 0.0 };
    if residual > DECAY_TOLERANCE {
        return Err(Error::Diagnostic {
            operation: "coefficients_at_infinity",
            detail: format!(
                "spectrum does not decay (relative residual {residual:.3e}); the function is not analytic outside |z - {z0}| = {r} or the circle is too close to a singularity"
            ),
        });
    }
    let coefficients: Vec<Complex64> = kept.iter().enumerate().map(|(k, c)| c * r.powi(k as i32)).collect();
    Ok(CoefficientsAtInfinity {
        center: z0,
        radius: r,
        value_at_infinity: coefficients[0],
        a1: coefficients[1],
        a2: coefficients[2],
        coefficients,
        residual,
    })
}

/// `sup |f|` over `|z - a| >= r`, for `f` analytic there and at infinity.
///
/// By the maximum principle the supremum is attained on the circle. The
/// circle is sampled at `samples` points and the best sample is polished by
/// golden-section search on its two neighbouring gaps.
pub fn exterior_sup_norm(f: impl Fn(Complex64) -> Complex64, a: Complex64, r: f64, samples: usize) -> f64 {
    let g = |t: f64| f(a + Complex64::from_polar(r, t)).norm();
    let h = TAU / samples as f64;
    let (mut best_t, mut best) = (0.0, g(0.0));
    for j in 1..samples {
        let t = h * j as f64;
        let v = g(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    let (mut lo, mut hi) = (best_t - h, best_t + h);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..60 {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = g(x2);
        }
    }
    best.max(f1).max(f2)
}
