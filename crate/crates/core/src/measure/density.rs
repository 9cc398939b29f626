use std::fmt;
use std::sync::Arc;

use exmex::prelude::*;
use num_complex::Complex64;

/// A real expression in the point coordinates `x`, `y` and `r = |z|`.
///
/// `pi` is accepted alongside the parser's own `PI`.
pub struct DensityExpr {
    source: String,
    expr: FlatEx<f64>,
    slots: Vec<Slot>,
}

#[derive(Clone, Copy)]
enum Slot {
    X,
    Y,
    R,
    Pi,
}

impl DensityExpr {
    pub fn parse(source: &str) -> Result<Self, String> {
        let expr = exmex::parse::<f64>(source).map_err(|e| format!("bad expression `{source}`: {e}"))?;
        let slots = expr
            .var_names()
            .iter()
            .map(|v| match v.as_str() {
                "x" => Ok(Slot::X),
                "y" => Ok(Slot::Y),
                "r" => Ok(Slot::R),
                "pi" => Ok(Slot::Pi),
                other => Err(format!("unknown variable `{other}` in `{source}` (use x, y, r, pi)")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DensityExpr {
            source: source.to_string(),
            expr,
            slots,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// The value when the expression has no point variables.
    pub fn constant_value(&self) -> Option<f64> {
        if self.slots.iter().any(|s| !matches!(s, Slot::Pi)) {
            None
        } else {
            Some(self.eval(Complex64::new(0.0, 0.0)))
        }
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        let mut vals = [0.0; 4];
        for (v, s) in vals.iter_mut().zip(&self.slots) {
            *v = match s {
                Slot::X => z.re,
                Slot::Y => z.im,
                Slot::R => z.norm(),
                Slot::Pi => std::f64::consts::PI,
            };
        }
        self.expr.eval(&vals[..self.slots.len()]).unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for DensityExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityExpr({:?})", self.source)
    }
}

pub type DensityFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Density of a measure component against arclength or area.
#[derive(Clone)]
pub enum Density {
    Constant(Complex64),
    Expr(Arc<DensityExpr>),
    Function(DensityFn),
}

impl Density {
    pub fn constant(v: f64) -> Self {
        Density::Constant(Complex64::new(v, 0.0))
    }

    pub fn expr(source: &str) -> Result<Self, String> {
        let e = DensityExpr::parse(source)?;
        Ok(Density::Expr(Arc::new(e)))
    }

    pub fn function(f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        Density::Function(Arc::new(f))
    }

    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Density::Constant(c) => *c,
            Density::Expr(e) => Complex64::new(e.eval(z), 0.0),
            Density::Function(f) => f(z),
        }
    }

    /// Pointwise product with a real or complex weight.
    pub fn times(&self, g: DensityFn) -> Density {
        let base = self.clone();
        Density::Function(Arc::new(move |z| base.eval(z) * g(z)))
    }
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Constant(c) => write!(f, "Constant({c})"),
            Density::Expr(e) => write!(f, "Expr({:?})", e.source()),
            Density::Function(_) => write!(f, "Function(..)"),
        }
    }
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Density::Constant(a), Density::Constant(b)) => a == b,
            (Density::Expr(a), Density::Expr(b)) => a.source() == b.source(),
            (Density::Function(a), Density::Function(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expression_variables() {
        let d = DensityExpr::parse("x + 2*y + r").unwrap();
        let v = d.eval(Complex64::new(3.0, 4.0));
        assert!((v - 16.0).abs() < 1e-12);
        let p = DensityExpr::parse("1/(2*pi)").unwrap();
        assert!((p.constant_value().unwrap() - 1.0 / std::f64::consts::TAU).abs() < 1e-15);
        assert!(DensityExpr::parse("q + 1").is_err());
    }
}
