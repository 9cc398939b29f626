//! Cauchy transforms, coefficients at infinity, Vitushkin coverings and the
//! localization operator.
//!
//! The Cauchy transform of a measure is `mu^(z) = int dmu(w) / (w - z)`.
//! Far from the support it is summed directly over the measure's nodes.
//! Area densities near `z` are re-integrated in polar coordinates centered at
//! `z`, where the `1/r` singularity cancels against the Jacobian; line
//! densities near `z` are re-noded at a resolution proportional to
//! `1 / dist(z, support)`.

mod coefficients;
mod localize;
mod vitushkin;

pub use coefficients::{coefficients_at_infinity, DEFAULT_SAMPLES, coefficients_from_samples, exterior_sup_norm, CoefficientsAtInfinity};
pub use localize::{dbar_residual, localize, localize_measure, DbarResidual, LocalizationReport, Localized, LocalizedMeasure};
pub use vitushkin::{build_cover, CoveringSumReport, TensorBump, VitushkinCover};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{ComponentKind, MeasureComponent, PlanarMeasure, QuadratureNode};
use crate::measure::quadrature::{polar_area_nodes, PolarRule};

/// Distance, in node spacings, below which the near-field rules take over.
pub const NEAR_FIELD_SPACINGS: f64 = 3.0;

/// Largest refinement factor for line densities near the evaluation point.
const MAX_LINE_REFINEMENT: usize = 512;

/// `mu^(z)`.
pub fn cauchy_transform(mu: &PlanarMeasure, z: Complex64) -> Result<Complex64> {
    transform_weighted(mu, z, None)
}

/// `mu^` at many points, in parallel; results come back in input order.
pub fn cauchy_transform_many(mu: &PlanarMeasure, zs: &[Complex64]) -> Vec<Result<Complex64>> {
    zs.par_iter().map(|&z| cauchy_transform(mu, z)).collect()
}

/// `(phi mu)^(z)` for a real weight `phi`.
///
/// Every node of `mu` is reweighted by `phi`, so summing this over a
/// partition of unity reproduces `mu^(z)` to rounding.
pub fn cauchy_transform_weighted(mu: &PlanarMeasure, z: Complex64, phi: &(dyn Fn(Complex64) -> f64 + Sync)) -> Result<Complex64> {
    transform_weighted(mu, z, Some(phi))
}

fn transform_weighted(mu: &PlanarMeasure, z: Complex64, phi: Option<&(dyn Fn(Complex64) -> f64 + Sync)>) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::invalid(format!("cauchy transform at non-finite point {z}")));
    }
    let weight = |p: Complex64| phi.map_or(1.0, |f| f(p));
    let far = |nodes: &[QuadratureNode]| -> Complex64 {
        nodes
            .iter()
            .map(|n| n.weight * weight(n.point) / (n.point - z))
            .sum()
    };
    let m = mu.resolution();
    let mut total = Complex64::new(0.0, 0.0);
    for (idx, comp) in mu.components().iter().enumerate() {
        let value = match &comp.kind {
            ComponentKind::Atom { point, mass } => {
                if *point == z {
                    return Err(Error::Singularity {
                        operation: "cauchy_transform",
                        point: z,
                    });
                }
                mass * weight(*point) / (point - z)
            }
            ComponentKind::Arc { shape, .. } => {
                let d = shape.distance_lower_bound(z);
                let h = comp.node_spacing(m);
                if d >= NEAR_FIELD_SPACINGS * h {
                    far(mu.component_nodes(idx))
                } else if d == 0.0 {
                    return Err(Error::NumericDomain {
                        operation: "cauchy_transform",
                        detail: format!("{z} lies on the line measure `{}`", comp.label),
                    });
                } else {
                    let factor = ((NEAR_FIELD_SPACINGS * h / d).ceil() as usize).min(MAX_LINE_REFINEMENT);
                    far(&comp.nodes_at(m * factor))
                }
            }
            ComponentKind::Area { support, density } => {
                let d = support.distance_lower_bound(z);
                if d >= NEAR_FIELD_SPACINGS * comp.node_spacing(m) {
                    far(mu.component_nodes(idx))
                } else {
                    near_area(comp, z, m, &weight, density)
                }
            }
        };
        total += value;
    }
    if !(total.re.is_finite() && total.im.is_finite()) {
        return Err(Error::NumericDomain {
            operation: "cauchy_transform",
            detail: format!("non-finite value at {z}"),
        });
    }
    Ok(total)
}

fn near_area(
    comp: &MeasureComponent,
    z: Complex64,
    m: usize,
    weight: &dyn Fn(Complex64) -> f64,
    density: &crate::measure::Density,
) -> Complex64 {
    let ComponentKind::Area { support, .. } = &comp.kind else {
        unreachable!()
    };
    let rule = PolarRule {
        per_turn: 32 * m,
        radial_panels: m,
        radial_order: 8,
    };
    polar_area_nodes(z, &support.region(), rule)
        .into_iter()
        .map(|(p, w)| density.eval(p) * (w * weight(p)) / (p - z))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn atom_transform() {
        let mu = PlanarMeasure::new(vec![MeasureComponent::atom("a", c(0.0, 0.0), 1.0)], 4).unwrap();
        assert_eq!(cauchy_transform(&mu, c(2.0, 0.0)).unwrap(), c(-0.5, 0.0));
        assert!(matches!(
            cauchy_transform(&mu, c(0.0, 0.0)),
            Err(Error::Singularity { .. })
        ));
    }

    #[test]
    fn circle_transform() {
        let mu = PlanarMeasure::positive(vec![MeasureComponent::uniform_circle("s", c(0.0, 0.0), 1.0, 1.0)], 8).unwrap();
        assert!(cauchy_transform(&mu, c(0.0, 0.0)).unwrap().norm() < 1e-8);
        assert!((cauchy_transform(&mu, c(2.0, 0.0)).unwrap() - c(-0.5, 0.0)).norm() < 1e-8);
        // Close to the circle the line rule is refined.
        let z = c(0.0, 0.98);
        assert!(cauchy_transform(&mu, z).unwrap().norm() < 1e-8);
        let z = c(1.01, 0.0);
        assert!((cauchy_transform(&mu, z).unwrap() + 1.0 / z).norm() < 1e-8);
    }

    #[test]
    fn disk_transform_inside_and_out() {
        let mu = PlanarMeasure::positive(vec![MeasureComponent::disk("d", c(0.0, 0.0), 1.0, 1.0)], 8).unwrap();
        assert!((cauchy_transform(&mu, c(2.0, 0.0)).unwrap() - c(-PI / 2.0, 0.0)).norm() < 1e-4);
        for z in [c(0.3, 0.2), c(0.0, 0.0), c(-0.7, 0.69), c(0.999, 0.0)] {
            let got = cauchy_transform(&mu, z).unwrap();
            assert!((got + PI * z.conj()).norm() < 1e-6, "{z}: {got}");
        }
        for z in [c(1.001, 0.0), c(0.0, -1.05)] {
            let got = cauchy_transform(&mu, z).unwrap();
            assert!((got + PI / z).norm() < 1e-6, "{z}: {got}");
        }
    }

    #[test]
    fn dbar_of_area_transform_is_minus_pi_density() {
        // g = 1 + x on the unit disk.
        let comp = MeasureComponent::area(
            "d",
            crate::measure::AreaShape::Disk {
                center: c(0.0, 0.0),
                radius: 1.0,
            },
            crate::measure::Density::expr("1 + x").unwrap(),
        );
        let mu = PlanarMeasure::new(vec![comp], 8).unwrap();
        let f = |z| cauchy_transform(&mu, z).unwrap();
        for z in [c(0.2, 0.1), c(-0.4, 0.3)] {
            let h = 1e-3;
            let fx = (f(z + h) - f(z - h)) / (2.0 * h);
            let fy = (f(z + c(0.0, h)) - f(z - c(0.0, h))) / (2.0 * h);
            let dbar = (fx + c(0.0, 1.0) * fy) * 0.5;
            let want = -PI * (1.0 + z.re);
            assert!((dbar - want).norm() / want.abs() < 0.05, "{z}: {dbar}");
        }
    }

    #[test]
    fn many_matches_single() {
        let mu = PlanarMeasure::positive(vec![MeasureComponent::disk("d", c(0.0, 0.0), 1.0, 1.0)], 4).unwrap();
        let zs: Vec<Complex64> = (0..16).map(|j| c(-1.5 + 0.2 * j as f64, 0.1)).collect();
        let many = cauchy_transform_many(&mu, &zs);
        for (z, v) in zs.iter().zip(many) {
            assert_eq!(v.unwrap(), cauchy_transform(&mu, *z).unwrap());
        }
    }
}
