//! The dyadic coloring scheme `(phi, a, k)` and light/heavy points.
//!
//! A square `S` is light when `int_S phi dA <= Area(S)^2`. Starting from the
//! square of generation `k` containing `a`, each generation colors squares
//! of half the side:
//!
//! 1. light squares outside the current barrier with a side on it are green;
//! 2. so is every light square joined to a green one by a path of light
//!    squares outside the barrier;
//! 3. a green path reaching the edge of the working window ends the scheme;
//! 4. otherwise the squares outside the hull of barrier and green squares
//!    with a side on its boundary are red;
//! 5. the remaining squares outside it within `n^2 2^-n` of a red square are
//!    yellow (`n` is the new generation);
//! 6. the new barrier is the boundary of the hull of everything colored.

mod classify;
mod scheme;

pub use classify::{classify_point, vanishing_consistency, ClassifyBudget, Confidence, PointClass, ReachRecord, VanishingReport, Verdict};
pub use scheme::{run_scheme, ColoredScheme, GenerationState};

use std::sync::Arc;

use num_complex::Complex64;

use crate::cauchy::cauchy_transform;
use crate::error::Result;
use crate::geometry::DyadicSquare;
use crate::measure::quadrature::gauss_legendre;
use crate::measure::PlanarMeasure;

/// A nonnegative density on the plane, known only through square integrals.
#[derive(Clone)]
pub enum PhiField {
    Constant(f64),
    /// `inside` on the closed rectangle `[min, max]`, `outside` elsewhere.
    Piecewise {
        min: Complex64,
        max: Complex64,
        inside: f64,
        outside: f64,
    },
    Function(Arc<dyn Fn(Complex64) -> f64 + Send + Sync>),
    /// `|mu^|`.
    CauchyModulus(Arc<PlanarMeasure>),
}

impl std::fmt::Debug for PhiField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhiField::Constant(c) => write!(f, "Constant({c})"),
            PhiField::Piecewise { min, max, inside, outside } => {
                write!(f, "Piecewise({inside} on [{min}, {max}], {outside} elsewhere)")
            }
            PhiField::Function(_) => write!(f, "Function(..)"),
            PhiField::CauchyModulus(_) => write!(f, "CauchyModulus(..)"),
        }
    }
}

impl PhiField {
    pub fn function(f: impl Fn(Complex64) -> f64 + Send + Sync + 'static) -> Self {
        PhiField::Function(Arc::new(f))
    }

    pub fn cauchy_modulus(mu: PlanarMeasure) -> Self {
        PhiField::CauchyModulus(Arc::new(mu))
    }

    pub fn value(&self, z: Complex64) -> Result<f64> {
        Ok(match self {
            PhiField::Constant(c) => *c,
            PhiField::Piecewise { min, max, inside, outside } => {
                let within = z.re >= min.re && z.re <= max.re && z.im >= min.im && z.im <= max.im;
                if within {
                    *inside
                } else {
                    *outside
                }
            }
            PhiField::Function(f) => f(z),
            PhiField::CauchyModulus(mu) => cauchy_transform(mu, z)?.norm(),
        })
    }

    /// `int_S phi dA`: exact for the constant fields, 4 x 4 Gauss-Legendre
    /// otherwise.
    pub fn square_integral(&self, s: &DyadicSquare) -> Result<f64> {
        let c = s.corner();
        let h = s.side();
        match self {
            PhiField::Constant(v) => Ok(v * h * h),
            PhiField::Piecewise { min, max, inside, outside } => {
                let ox = (max.re.min(c.re + h) - min.re.max(c.re)).max(0.0);
                let oy = (max.im.min(c.im + h) - min.im.max(c.im)).max(0.0);
                let overlap = ox * oy;
                Ok(inside * overlap + outside * (h * h - overlap))
            }
            _ => {
                let rule = gauss_legendre(4);
                let mut total = 0.0;
                for &(u, wu) in rule {
                    for &(v, wv) in rule {
                        let z = c + Complex64::new(0.5 * h * (u + 1.0), 0.5 * h * (v + 1.0));
                        total += wu * wv * self.value(z)?;
                    }
                }
                Ok(total * 0.25 * h * h)
            }
        }
    }
}

/// `int_S phi dA <= Area(S)^2`.
pub fn is_light_square(phi: &PhiField, s: &DyadicSquare) -> Result<bool> {
    let a = s.area();
    Ok(phi.square_integral(s)? <= a * a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn light_square_examples() {
        assert!(is_light_square(&PhiField::Constant(0.0), &DyadicSquare::new(5, 3, -2)).unwrap());
        assert!(!is_light_square(&PhiField::Constant(1.0), &DyadicSquare::new(1, 0, 0)).unwrap());
        assert!(is_light_square(&PhiField::Constant(1.0), &DyadicSquare::new(0, 0, 0)).unwrap());
    }

    #[test]
    fn gauss_rule_matches_exact_integral() {
        let f = PhiField::function(|z| z.re * z.re + 2.0 * z.im);
        let s = DyadicSquare::new(1, 1, 2);
        // x in [0.5, 1], y in [1, 1.5].
        let exact = (1.0 - 0.125) / 3.0 * 0.5 + 2.0 * 0.5 * (2.25 - 1.0) / 2.0;
        assert!((f.square_integral(&s).unwrap() - exact).abs() < 1e-14);
    }

    #[test]
    fn piecewise_overlap() {
        let f = PhiField::Piecewise {
            min: Complex64::new(-1.0, -1.0),
            max: Complex64::new(0.25, 0.25),
            inside: 4.0,
            outside: 0.0,
        };
        let s = DyadicSquare::new(1, 0, 0);
        assert!((f.square_integral(&s).unwrap() - 4.0 * 0.0625).abs() < 1e-15);
    }
}
