use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::scan::{density_test, scan_abpe, AbpeScan, DensityVerdict, ScanComponent, ScanConfig};
use super::{EvaluationModel, FunctionBasis};
use crate::error::{Error, Result};
use crate::harmonic::{harmonic_measure_with, mutually_singular, CircularDomain, DEFAULT_SINGULARITY_TOL};
use crate::measure::{ArcShape, ComponentKind, PlanarMeasure};

/// Cells by which a scan component is dilated when testing whether its
/// closure meets or contains a support.
const CLOSURE_MARGIN: usize = 3;

/// Harmonic measure samples per circle for the boundary checks.
const BOUNDARY_SAMPLES: usize = 1024;

/// A piece of the compact set `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KPiece {
    Disk { center: Complex64, radius: f64 },
    Annulus { center: Complex64, inner: f64, outer: f64 },
    Rect { min: Complex64, max: Complex64 },
    Segment { a: Complex64, b: Complex64 },
    Circle { center: Complex64, radius: f64 },
}

impl KPiece {
    /// Whether `z` lies in the interior of the piece.
    pub fn interior_contains(&self, z: Complex64) -> bool {
        match *self {
            KPiece::Disk { center, radius } => (z - center).norm() < radius,
            KPiece::Annulus { center, inner, outer } => {
                let r = (z - center).norm();
                r > inner && r < outer
            }
            KPiece::Rect { min, max } => z.re > min.re && z.re < max.re && z.im > min.im && z.im < max.im,
            KPiece::Segment { .. } | KPiece::Circle { .. } => false,
        }
    }

    /// Number of boundary components of the interior, if it is nonempty.
    pub fn interior_connectivity(&self) -> Option<usize> {
        match self {
            KPiece::Disk { .. } | KPiece::Rect { .. } => Some(1),
            KPiece::Annulus { .. } => Some(2),
            KPiece::Segment { .. } | KPiece::Circle { .. } => None,
        }
    }

    /// The interior as a circular domain, when it is one.
    pub fn domain(&self) -> Option<CircularDomain> {
        match *self {
            KPiece::Disk { center, radius } => CircularDomain::disk(center, radius).ok(),
            KPiece::Annulus { center, inner, outer } => CircularDomain::annulus(center, inner, outer).ok(),
            _ => None,
        }
    }

    pub fn bounding_box(&self) -> (Complex64, Complex64) {
        let sq = |c: Complex64, r: f64| (c - Complex64::new(r, r), c + Complex64::new(r, r));
        match *self {
            KPiece::Disk { center, radius } | KPiece::Circle { center, radius } => sq(center, radius),
            KPiece::Annulus { center, outer, .. } => sq(center, outer),
            KPiece::Rect { min, max } => (min, max),
            KPiece::Segment { a, b } => (
                Complex64::new(a.re.min(b.re), a.im.min(b.im)),
                Complex64::new(a.re.max(b.re), a.im.max(b.im)),
            ),
        }
    }
}

/// Whether the part of `mu` on the boundary of `U_n` is absolutely
/// continuous with respect to harmonic measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCheck {
    pub label: String,
    pub absolutely_continuous: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionPart {
    /// `n >= 1`.
    pub index: usize,
    pub labels: Vec<String>,
    pub region: ScanComponent,
    /// Piece of `K` whose interior holds most of the region's cells.
    pub k_piece: Option<usize>,
    pub k_connectivity: Option<usize>,
    pub connectivity_ok: bool,
    /// Every support node of `Delta_n` lies in the closure of `U_n`, at scan
    /// resolution.
    pub closure_contains_delta: bool,
    pub boundary_checks: Vec<BoundaryCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub delta0: Vec<String>,
    pub delta0_verdicts: Vec<(String, DensityVerdict)>,
    pub parts: Vec<DecompositionPart>,
    /// `(n, m, overlap)` of the harmonic measures of `U_n` and `U_m`, with
    /// whether they are mutually singular.
    pub harmonic_singularity: Vec<(usize, usize, f64, bool)>,
    pub diagnostics: Vec<String>,
    /// The partition is an operational reconstruction at component
    /// granularity.
    pub heuristic: bool,
}

/// Splits the labelled components of `mu` into `Delta_0` and parts
/// `Delta_n` carried by components `U_n` of analytic bounded point
/// evaluations:
///
/// 1. scan for abpes;
/// 2. a component whose support closure meets the closure of `U_n` joins
///    `Delta_n` (the one it meets most, if several); `U_n` is kept only if
///    it stays bounded for its own members alone;
/// 3. the rest form `Delta_0`, and each must pass the density test alone;
/// 4. the connectivity of `U_n` is compared with that of the piece of `K`
///    containing it;
/// 5. parts of `mu` on boundary circles of that piece are checked against
///    its harmonic measure.
pub fn decompose(mu: &PlanarMeasure, k: &[KPiece], basis: &FunctionBasis, config: &ScanConfig) -> Result<Decomposition> {
    let scan = scan_abpe(mu, basis, config)?;
    let mut diagnostics = Vec::new();
    let comps = mu.components();
    let all: Vec<usize> = (0..scan.components.len()).collect();
    let candidates = assign(mu, &scan, &all, &mut Vec::new());
    // The abpes of a sum of mutually separated parts are those of the parts:
    // a region is kept only if most of its cells stay bounded for the
    // restriction of mu to the components meeting it.
    let mut confirmed = Vec::new();
    for region in &scan.components {
        let members: Vec<&str> = (0..comps.len())
            .filter(|&i| candidates[i] == Some(region.id))
            .map(|i| comps[i].label.as_str())
            .collect();
        if members.is_empty() {
            continue;
        }
        let model = EvaluationModel::new(basis, &mu.restrict_labels(&members)?)?;
        let kept = region.cells.iter().filter(|&&(i, j)| !model.profile(scan.center(i, j)).divergent).count();
        if 2 * kept > region.cells.len() {
            confirmed.push(region.id);
        } else {
            diagnostics.push(format!(
                "abpe component {} near {:.4} dropped: only {kept} of {} cells stay bounded for {:?} alone",
                region.id,
                region.centroid,
                region.cells.len(),
                members
            ));
        }
    }
    let assigned = assign(mu, &scan, &confirmed, &mut diagnostics);

    let mut delta0 = Vec::new();
    let mut delta0_verdicts = Vec::new();
    for (idx, comp) in comps.iter().enumerate() {
        if assigned[idx].is_some() {
            continue;
        }
        delta0.push(comp.label.clone());
        let alone = mu.restrict_labels(&[comp.label.as_str()])?;
        let verdict = density_test(&alone, basis, config)?;
        if let DensityVerdict::NotDense { witness } = &verdict {
            return Err(Error::DecompositionFailure(format!(
                "`{}` belongs to no abpe component of the scene, yet alone it has {} abpe component(s), the first near {:.4}",
                comp.label,
                witness.len(),
                witness[0].centroid
            )));
        }
        delta0_verdicts.push((comp.label.clone(), verdict));
    }

    let mut parts = Vec::new();
    // Only components that carry some of the measure form parts.
    for region in scan.components.iter().filter(|r| confirmed.contains(&r.id)) {
        let members: Vec<usize> = (0..comps.len()).filter(|&i| assigned[i] == Some(region.id)).collect();
        if members.is_empty() {
            diagnostics.push(format!("abpe component {} near {:.4} carries no scene component", region.id, region.centroid));
            continue;
        }
        let k_piece = containing_piece(k, &scan, region);
        let k_connectivity = k_piece.and_then(|p| k[p].interior_connectivity());
        let connectivity_ok = k_connectivity.is_some_and(|kc| region.connectivity <= kc);
        if k_piece.is_none() {
            diagnostics.push(format!("abpe component {} lies in no interior piece of K", region.id));
        }
        let closure_contains_delta = members.iter().all(|&i| {
            support_points(mu, i)
                .iter()
                .all(|&z| scan.component_near_among(z, CLOSURE_MARGIN, &confirmed) == Some(region.id))
        });
        let boundary_checks = match k_piece.and_then(|p| k[p].domain()) {
            Some(domain) => boundary_checks(mu, &members, &domain, &scan, region)?,
            None => Vec::new(),
        };
        parts.push(DecompositionPart {
            index: parts.len() + 1,
            labels: members.iter().map(|&i| comps[i].label.clone()).collect(),
            region: region.clone(),
            k_piece,
            k_connectivity,
            connectivity_ok,
            closure_contains_delta,
            boundary_checks,
        });
    }

    let mut harmonic_singularity = Vec::new();
    let omegas: Vec<Option<_>> = parts
        .iter()
        .map(|p| {
            let domain = p.k_piece.and_then(|i| k[i].domain())?;
            let z = interior_cell(&scan, &p.region, &domain)?;
            harmonic_measure_with(&domain, z, BOUNDARY_SAMPLES).ok()
        })
        .collect();
    for a in 0..parts.len() {
        for b in a + 1..parts.len() {
            if let (Some(wa), Some(wb)) = (&omegas[a], &omegas[b]) {
                let r = mutually_singular(wa, wb, DEFAULT_SINGULARITY_TOL);
                harmonic_singularity.push((a + 1, b + 1, r.overlap, r.singular));
            }
        }
    }

    Ok(Decomposition {
        delta0,
        delta0_verdicts,
        parts,
        harmonic_singularity,
        diagnostics,
        heuristic: true,
    })
}

/// Region each scene component joins: among `allowed`, the one whose
/// dilated closure holds most of its support points.
fn assign(mu: &PlanarMeasure, scan: &AbpeScan, allowed: &[usize], diagnostics: &mut Vec<String>) -> Vec<Option<usize>> {
    mu.components()
        .iter()
        .enumerate()
        .map(|(idx, comp)| {
            let mut hits = vec![0usize; scan.components.len()];
            for z in support_points(mu, idx) {
                if let Some(l) = scan.component_near_among(z, CLOSURE_MARGIN, allowed) {
                    hits[l] += 1;
                }
            }
            let meets = hits.iter().filter(|&&h| h > 0).count();
            if meets > 1 {
                diagnostics.push(format!("`{}` meets {meets} abpe components; assigned to the one it meets most", comp.label));
            }
            hits.iter()
                .enumerate()
                .filter(|(_, &h)| h > 0)
                .max_by_key(|(l, &h)| (h, std::cmp::Reverse(*l)))
                .map(|(l, _)| l)
        })
        .collect()
}

/// Atom points and quadrature nodes of component `idx`.
fn support_points(mu: &PlanarMeasure, idx: usize) -> Vec<Complex64> {
    match &mu.components()[idx].kind {
        ComponentKind::Atom { point, .. } => vec![*point],
        _ => mu.component_nodes(idx).iter().map(|n| n.point).collect(),
    }
}

fn containing_piece(k: &[KPiece], scan: &AbpeScan, region: &ScanComponent) -> Option<usize> {
    let mut counts = vec![0usize; k.len()];
    for &(i, j) in &region.cells {
        let z = scan.center(i, j);
        for (p, piece) in k.iter().enumerate() {
            if piece.interior_contains(z) {
                counts[p] += 1;
            }
        }
    }
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| 2 * c > region.cells.len())
        .max_by_key(|(p, &c)| (c, std::cmp::Reverse(*p)))
        .map(|(p, _)| p)
}

/// The cell center of the region deepest inside the domain.
fn interior_cell(scan: &AbpeScan, region: &ScanComponent, domain: &CircularDomain) -> Option<Complex64> {
    let depth = |z: Complex64| {
        domain
            .boundary()
            .iter()
            .map(|c| ((z - c.center).norm() - c.radius).abs())
            .fold(f64::INFINITY, f64::min)
    };
    region
        .cells
        .iter()
        .map(|&(i, j)| scan.center(i, j))
        .filter(|&z| domain.contains(z))
        .max_by(|a, b| depth(*a).total_cmp(&depth(*b)))
}

fn boundary_checks(
    mu: &PlanarMeasure,
    members: &[usize],
    domain: &CircularDomain,
    scan: &AbpeScan,
    region: &ScanComponent,
) -> Result<Vec<BoundaryCheck>> {
    let circles = domain.boundary();
    let on_boundary = |z: Complex64| circles.iter().position(|c| ((z - c.center).norm() - c.radius).abs() <= 1e-9 * c.radius);
    let Some(z) = interior_cell(scan, region, domain) else {
        return Ok(Vec::new());
    };
    let omega = harmonic_measure_with(domain, z, BOUNDARY_SAMPLES)?;
    let mut out = Vec::new();
    for &i in members {
        let comp = &mu.components()[i];
        match &comp.kind {
            ComponentKind::Atom { point, .. } if on_boundary(*point).is_some() => out.push(BoundaryCheck {
                label: comp.label.clone(),
                absolutely_continuous: false,
                detail: format!("atom at {point}; harmonic measure has no atoms"),
            }),
            ComponentKind::Arc {
                shape: ArcShape::Circle { center, radius, .. },
                ..
            } => {
                let Some(c) = on_boundary(center + radius) else { continue };
                if (circles[c].center - center).norm() > 1e-9 * radius {
                    continue;
                }
                // Harmonic measure must not vanish where the arc carries mass.
                let dens = &omega.circles[c];
                let min = mu
                    .component_nodes(i)
                    .iter()
                    .filter(|n| n.weight.norm() > 0.0)
                    .map(|n| dens.at((n.point - center).arg().rem_euclid(TAU)))
                    .fold(f64::INFINITY, f64::min);
                out.push(BoundaryCheck {
                    label: comp.label.clone(),
                    absolutely_continuous: min > 0.0,
                    detail: format!("harmonic density at least {min:.3e} on the support"),
                });
            }
            _ => {}
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureComponent;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_disk() {
        let mu = PlanarMeasure::positive(vec![MeasureComponent::disk("d", c(0.0, 0.0), 1.0, 1.0)], 8).unwrap();
        let k = [KPiece::Disk {
            center: c(0.0, 0.0),
            radius: 1.0,
        }];
        let basis = FunctionBasis::monomials(c(0.0, 0.0), 30);
        let d = decompose(&mu, &k, &basis, &ScanConfig::new(c(-1.25, -1.25), c(1.25, 1.25), 1.0 / 16.0)).unwrap();
        assert!(d.delta0.is_empty());
        assert_eq!(d.parts.len(), 1);
        assert_eq!(d.parts[0].labels, vec!["d".to_string()]);
        assert!(d.parts[0].connectivity_ok);
        assert!(d.parts[0].closure_contains_delta);
    }
}
