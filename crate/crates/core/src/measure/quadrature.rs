use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use super::shapes::Region;

const MAX_ORDER: usize = 64;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(order: usize) -> &'static [(f64, f64)] {
    static RULES: [OnceLock<Vec<(f64, f64)>>; MAX_ORDER + 1] = [const { OnceLock::new() }; MAX_ORDER + 1];
    assert!((2..=MAX_ORDER).contains(&order), "unsupported Gauss-Legendre order {order}");
    RULES[order].get_or_init(|| {
        let rule = GaussLegendre::new(order).expect("valid order");
        let mut v: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    })
}

/// Composite Gauss-Legendre on `[a, b]` split into `panels` equal pieces.
pub(crate) fn composite_gauss(a: f64, b: f64, panels: usize, order: usize, out: &mut Vec<(f64, f64)>) {
    let rule = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + h * p as f64;
        for &(x, w) in rule {
            out.push((lo + 0.5 * h * (x + 1.0), 0.5 * h * w));
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PolarRule {
    /// Angular nodes for a full turn.
    pub per_turn: usize,
    pub radial_panels: usize,
    pub radial_order: usize,
}

/// Angular nodes about `origin` for a region with the given breakpoints.
///
/// Without breakpoints the midpoint rule on the circle is used. Otherwise
/// each panel between breakpoints gets Gauss-Legendre in a cosine-stretched
/// variable, which absorbs the square-root behaviour of ray lengths at
/// tangencies.
pub(crate) fn angular_nodes(breakpoints: &[f64], per_turn: usize, min_order: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    if breakpoints.is_empty() {
        let n = per_turn.max(8);
        let w = TAU / n as f64;
        for j in 0..n {
            out.push(((j as f64 + 0.5) * w, w));
        }
        return out;
    }
    let nb = breakpoints.len();
    for t in 0..nb {
        let a = breakpoints[t];
        let b = if t + 1 < nb { breakpoints[t + 1] } else { breakpoints[0] + TAU };
        let width = b - a;
        if width <= 0.0 {
            continue;
        }
        let count = ((width / TAU * per_turn as f64).ceil() as usize).max(min_order);
        let pieces = count.div_ceil(32);
        let order = count.div_ceil(pieces).clamp(4, MAX_ORDER);
        let rule = gauss_legendre(order);
        for p in 0..pieces {
            let (t0, t1) = (p as f64 / pieces as f64, (p + 1) as f64 / pieces as f64);
            for &(x, w) in rule {
                let s = t0 + 0.5 * (t1 - t0) * (x + 1.0);
                let ws = 0.5 * (t1 - t0) * w;
                let theta = a + width * 0.5 * (1.0 - (PI * s).cos());
                let jac = width * 0.5 * PI * (PI * s).sin();
                out.push((theta, ws * jac));
            }
        }
    }
    out
}

/// Area-element nodes `(point, dA weight)` for a bounded region in polar
/// coordinates about `origin`.
pub(crate) fn polar_area_nodes(origin: Complex64, region: &Region, rule: PolarRule) -> Vec<(Complex64, f64)> {
    let breaks = region.breakpoints(origin);
    let angles = angular_nodes(&breaks, rule.per_turn, 16);
    let mut out = Vec::new();
    let mut radial = Vec::new();
    for (theta, wt) in angles {
        let u = Complex64::from_polar(1.0, theta);
        for (lo, hi) in region.ray_intervals(origin, theta) {
            debug_assert!(hi.is_finite(), "polar quadrature over an unbounded region");
            if !hi.is_finite() || hi <= lo {
                continue;
            }
            radial.clear();
            composite_gauss(lo, hi, rule.radial_panels, rule.radial_order, &mut radial);
            for &(rho, wr) in &radial {
                out.push((origin + u * rho, wt * wr * rho));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let mut nodes = Vec::new();
        composite_gauss(0.0, 2.0, 3, 8, &mut nodes);
        let s: f64 = nodes.iter().map(|(x, w)| w * x.powi(7)).sum();
        assert!((s - 2f64.powi(8) / 8.0).abs() < 1e-12);
    }

    #[test]
    fn polar_area_of_offset_rect() {
        let r = Region::Rect {
            min: Complex64::new(0.5, -0.25),
            max: Complex64::new(1.5, 0.75),
        };
        let rule = PolarRule {
            per_turn: 64,
            radial_panels: 2,
            radial_order: 8,
        };
        let nodes = polar_area_nodes(Complex64::new(0.0, 0.0), &r, rule);
        let area: f64 = nodes.iter().map(|n| n.1).sum();
        assert!((area - 1.0).abs() < 1e-12, "area {area}");
    }

    #[test]
    fn polar_area_of_lens() {
        // Two unit disks with centers 1 apart: lens area 2pi/3 - sqrt(3)/2.
        let r = Region::Intersection {
            of: vec![
                Region::Disk {
                    center: Complex64::new(0.0, 0.0),
                    radius: 1.0,
                },
                Region::Disk {
                    center: Complex64::new(1.0, 0.0),
                    radius: 1.0,
                },
            ],
        };
        let rule = PolarRule {
            per_turn: 128,
            radial_panels: 2,
            radial_order: 8,
        };
        let nodes = polar_area_nodes(Complex64::new(0.0, 0.0), &r, rule);
        let area: f64 = nodes.iter().map(|n| n.1).sum();
        let exact = 2.0 * PI / 3.0 - 3f64.sqrt() / 2.0;
        assert!((area - exact).abs() < 1e-10, "area {area} vs {exact}");
    }
}
