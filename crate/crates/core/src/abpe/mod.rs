//! Analytic bounded point evaluations.
//!
//! For a finite-dimensional space of functions `span{b_0, ..., b_t}` and a
//! positive measure `mu`, the best constant in `|f(l)| <= c ||f||_{L^2(mu)}`
//! is `b(l) = sqrt(v* G^+ v)`, with `G` the Gram matrix and `v` the basis
//! evaluated at `l`. Watching `b` as the degree grows separates points where
//! evaluation stays bounded (abpes) from points where it blows up.

mod decompose;
mod scan;

pub use decompose::{decompose, Decomposition, DecompositionPart, KPiece};
pub use scan::{density_test, scan_abpe, AbpeScan, DensityVerdict, ScanComponent, ScanConfig};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::PlanarMeasure;

/// Relative threshold below which an eigenvalue of the Gram matrix is
/// treated as zero.
pub const GRAM_THRESHOLD: f64 = 1e-12;

/// Ratio of the last two blocks of increments of `b_N^2` at or above which a
/// profile counts as divergent.
pub const DIVERGENCE_RATIO: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisTerm {
    /// `(z - center)^power`.
    Monomial { center: Complex64, power: u32 },
    /// `(z - pole)^-power`, `power >= 1`.
    Pole { pole: Complex64, power: u32 },
}

impl BasisTerm {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match *self {
            BasisTerm::Monomial { center, power } => (z - center).powu(power),
            BasisTerm::Pole { pole, power } => (z - pole).powu(power).inv(),
        }
    }

    /// Degree used to nest bases: the power.
    pub fn degree(&self) -> u32 {
        match *self {
            BasisTerm::Monomial { power, .. } | BasisTerm::Pole { power, .. } => power,
        }
    }
}

/// Basis functions ordered by nondecreasing degree, so that the first terms
/// up to any degree span the smaller space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionBasis {
    terms: Vec<BasisTerm>,
}

impl FunctionBasis {
    /// `1, (z - c), ..., (z - c)^degree`.
    pub fn monomials(center: Complex64, degree: u32) -> Self {
        Self::laurent(center, degree, &[])
    }

    /// Monomials about `center` together with `(z - p)^-j`, `1 <= j <= degree`,
    /// for every pole `p`.
    pub fn laurent(center: Complex64, degree: u32, poles: &[Complex64]) -> Self {
        let mut terms = Vec::new();
        for d in 0..=degree {
            terms.push(BasisTerm::Monomial { center, power: d });
            if d > 0 {
                terms.extend(poles.iter().map(|&pole| BasisTerm::Pole { pole, power: d }));
            }
        }
        FunctionBasis { terms }
    }

    pub fn from_terms(mut terms: Vec<BasisTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("empty basis"));
        }
        if terms.iter().any(|t| matches!(t, BasisTerm::Pole { power: 0, .. })) {
            return Err(Error::invalid("pole terms need a positive power"));
        }
        terms.sort_by_key(BasisTerm::degree);
        Ok(FunctionBasis { terms })
    }

    pub fn terms(&self) -> &[BasisTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.last().map_or(0, BasisTerm::degree)
    }

    pub fn eval(&self, z: Complex64) -> Vec<Complex64> {
        self.terms.iter().map(|t| t.eval(z)).collect()
    }

    /// Number of leading terms of degree at most `d`.
    pub fn prefix_len(&self, d: u32) -> usize {
        self.terms.partition_point(|t| t.degree() <= d)
    }

    fn check_poles(&self, mu: &PlanarMeasure) -> Result<()> {
        for t in &self.terms {
            if let BasisTerm::Pole { pole, .. } = t {
                if mu.nodes().any(|n| n.point == *pole) {
                    return Err(Error::invalid(format!("basis pole {pole} lies on a quadrature node")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramMatrix {
    /// `G_ij = int b_i conj(b_j) dmu`, row-major.
    #[serde(skip)]
    pub matrix: DMatrix<Complex64>,
    /// `lambda_max / lambda_min` of `G`; infinite when singular.
    pub condition: f64,
    pub ill_conditioned: bool,
}

pub fn gram_matrix(basis: &FunctionBasis, mu: &PlanarMeasure) -> Result<GramMatrix> {
    basis.check_poles(mu)?;
    let t = basis.len();
    let nodes: Vec<_> = mu.nodes().copied().collect();
    // Fixed chunks reduced in order keep the sum deterministic.
    let partials: Vec<DMatrix<Complex64>> = nodes
        .par_chunks(512)
        .map(|chunk| {
            let mut g = DMatrix::zeros(t, t);
            for n in chunk {
                let v = basis.eval(n.point);
                for i in 0..t {
                    let wi = v[i] * n.weight;
                    for j in 0..t {
                        g[(i, j)] += wi * v[j].conj();
                    }
                }
            }
            g
        })
        .collect();
    let mut matrix = DMatrix::zeros(t, t);
    for p in partials {
        matrix += p;
    }
    if matrix.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::NumericDomain {
            operation: "gram_matrix",
            detail: "non-finite entries".into(),
        });
    }
    let eig = matrix.clone().symmetric_eigen();
    let hi = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b));
    let lo = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    Ok(GramMatrix {
        matrix,
        condition,
        ill_conditioned: condition * GRAM_THRESHOLD > 1.0,
    })
}

/// Evaluation bounds `b_N(l)` for `N = 0, ..., max_degree`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationProfile {
    pub point: Complex64,
    pub degrees: Vec<u32>,
    /// `b_N`, nondecreasing; infinite once a function of zero norm is
    /// nonzero at the point.
    pub bounds: Vec<f64>,
    /// Highest degree up to which every basis direction is numerically
    /// independent; growth is judged on `bounds[..=resolved_degree]` only.
    pub resolved_degree: u32,
    pub divergent: bool,
    /// Ratio of the sums of the increments of `b_N^2` over the last two
    /// blocks of degrees.
    pub block_ratio: f64,
    /// Geometric extrapolation of `b_N` when convergent.
    pub limit: Option<f64>,
}

impl EvaluationProfile {
    pub fn last(&self) -> f64 {
        *self.bounds.last().expect("profile is nonempty")
    }
}

/// The Gram matrix of a basis in factored form, `conj(G) = D R* R D` with `D` the
/// column norms and `R` the triangular factor of the column-scaled weighted
/// Vandermonde matrix. Computed once, then evaluated at many points.
#[derive(Debug, Clone)]
pub struct EvaluationModel {
    basis: FunctionBasis,
    scale: Vec<f64>,
    r: DMatrix<Complex64>,
}

/// Relative size under which the residual of a dependent direction is
/// rounding noise.
const RESIDUAL_NOISE: f64 = 1e-8;

/// Pivot size, relative to a unit column, below which a direction counts as
/// having zero norm; the square root of [`GRAM_THRESHOLD`].
fn pivot_threshold() -> f64 {
    GRAM_THRESHOLD.sqrt()
}

impl EvaluationModel {
    pub fn new(basis: &FunctionBasis, mu: &PlanarMeasure) -> Result<Self> {
        if !mu.is_positive() {
            return Err(Error::invalid("evaluation bounds need a positive measure"));
        }
        basis.check_poles(mu)?;
        let t = basis.len();
        let nodes: Vec<_> = mu.nodes().filter(|n| n.weight.re > 0.0).copied().collect();
        let rows = nodes.len().max(t);
        let mut a = DMatrix::<Complex64>::zeros(rows, t);
        for (k, n) in nodes.iter().enumerate() {
            let sw = n.weight.re.sqrt();
            for (i, term) in basis.terms.iter().enumerate() {
                a[(k, i)] = term.eval(n.point) * sw;
            }
        }
        let mut scale = vec![1.0; t];
        for (i, s) in scale.iter_mut().enumerate() {
            let norm = a.column(i).norm();
            if !norm.is_finite() {
                return Err(Error::NumericDomain {
                    operation: "evaluation_bound",
                    detail: format!("basis term {i} is not square integrable on the nodes"),
                });
            }
            if norm > 0.0 {
                *s = norm;
                a.column_mut(i).unscale_mut(norm);
            }
        }
        let r = a.qr().r();
        Ok(EvaluationModel {
            basis: basis.clone(),
            scale,
            r,
        })
    }

    pub fn basis(&self) -> &FunctionBasis {
        &self.basis
    }

    /// Solves `R* y = D^-1 conj(v)` by forward substitution; `None` where
    /// the point sees a direction of zero norm. (`A* A` is `conj(G)`.)
    fn forward(&self, v: &[Complex64]) -> Vec<Option<Complex64>> {
        let t = v.len();
        let tau = pivot_threshold();
        let mut y: Vec<Complex64> = Vec::with_capacity(t);
        let mut out = Vec::with_capacity(t);
        let mut broken = false;
        let mut acc = 0.0f64;
        let mut dropped = vec![false; t];
        for j in 0..t {
            let vj = v[j].conj() / self.scale[j];
            let mut rj = vj;
            let mut magnitude = vj.norm();
            // What the dropped directions could have contributed.
            let mut dropped_share = 0.0;
            for (i, yi) in y.iter().enumerate() {
                let term = self.r[(i, j)].conj() * yi;
                magnitude += term.norm();
                rj -= term;
                if dropped[i] {
                    dropped_share += self.r[(i, j)].norm();
                }
            }
            let allowance = RESIDUAL_NOISE * magnitude + dropped_share * (1.0 + acc.sqrt());
            let d = self.r[(j, j)];
            let keep = if broken {
                None
            } else if d.norm() >= tau {
                Some(rj / d.conj())
            } else if rj.norm() <= allowance || rj.norm() <= d.norm() / tau * (1.0 + acc.sqrt()) {
                // Below the threshold and not amplified: dropped, as by a
                // pseudoinverse.
                Some(Complex64::new(0.0, 0.0))
            } else {
                // A function of (numerically) zero norm that is far from
                // zero at the point.
                broken = true;
                None
            };
            dropped[j] = d.norm() < tau;
            let yj = keep.unwrap_or_default();
            acc += yj.norm_sqr();
            y.push(yj);
            out.push(keep);
        }
        out
    }

    /// Largest degree whose prefix has all pivots above the threshold.
    fn resolved_degree(&self) -> u32 {
        let tau = pivot_threshold();
        let first_small = (0..self.basis.len()).find(|&j| self.r[(j, j)].norm() < tau).unwrap_or(self.basis.len());
        (0..=self.basis.max_degree())
            .take_while(|&d| self.basis.prefix_len(d) <= first_small)
            .last()
            .unwrap_or(0)
    }

    pub fn profile(&self, point: Complex64) -> EvaluationProfile {
        let v = self.basis.eval(point);
        let y = self.forward(&v);
        let top = self.basis.max_degree();
        let mut degrees = Vec::new();
        let mut bounds = Vec::new();
        let mut acc = 0.0f64;
        let mut idx = 0;
        for d in 0..=top {
            let end = self.basis.prefix_len(d);
            while idx < end {
                acc = match y[idx] {
                    Some(c) if acc.is_finite() => acc + c.norm_sqr(),
                    _ => f64::INFINITY,
                };
                idx += 1;
            }
            degrees.push(d);
            bounds.push(acc.sqrt());
        }
        let resolved_degree = self.resolved_degree();
        let (divergent, block_ratio, limit) = if bounds.iter().all(|b| b.is_finite()) {
            let (div, ratio, limit) = assess(&bounds[..=resolved_degree as usize]);
            // Past the resolved degree the bounds are only lower bounds.
            (div, ratio, limit.map(|l| l.max(*bounds.last().expect("nonempty"))))
        } else {
            (true, f64::INFINITY, None)
        };
        EvaluationProfile {
            point,
            degrees,
            bounds,
            resolved_degree,
            divergent,
            block_ratio,
            limit,
        }
    }

    /// Coefficients of the reproducing kernel `k_l` in the basis.
    pub fn kernel(&self, point: Complex64) -> Result<KernelFunction> {
        let profile = self.profile(point);
        if profile.divergent {
            return Err(Error::NoKernel { point });
        }
        let v = self.basis.eval(point);
        let y: Vec<Complex64> = self.forward(&v).into_iter().map(|c| c.unwrap_or_default()).collect();
        let t = y.len();
        let tau = pivot_threshold();
        // Back substitution R x = y over the kept pivots.
        let mut x = vec![Complex64::new(0.0, 0.0); t];
        for j in (0..t).rev() {
            let d = self.r[(j, j)];
            if d.norm() < tau {
                continue;
            }
            let mut s = y[j];
            for (i, xi) in x.iter().enumerate().take(t).skip(j + 1) {
                s -= self.r[(j, i)] * xi;
            }
            x[j] = s / d;
        }
        let coefficients = x.iter().zip(&self.scale).map(|(xi, s)| xi / s).collect();
        Ok(KernelFunction {
            point,
            coefficients,
            norm: profile.last(),
        })
    }
}

/// Divergence test and extrapolation on the increments of `b_N^2`.
fn assess(bounds: &[f64]) -> (bool, f64, Option<f64>) {
    let last = *bounds.last().expect("nonempty");
    if !last.is_finite() {
        return (true, f64::INFINITY, None);
    }
    let sq: Vec<f64> = bounds.iter().map(|b| b * b).collect();
    let n = sq.len() - 1;
    let block = (n / 3).max(1);
    if n < 2 * block {
        return (false, 0.0, Some(last));
    }
    let s_last = sq[n] - sq[n - block];
    let s_prev = sq[n - block] - sq[n - 2 * block];
    let ratio = if s_prev <= 1e-14 * sq[n] {
        if s_last <= 1e-14 * sq[n] {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        s_last / s_prev
    };
    if ratio >= DIVERGENCE_RATIO {
        return (true, ratio, None);
    }
    // Increments shrink roughly by ratio^(1/block) per degree.
    let q = ratio.powf(1.0 / block as f64);
    let step = sq[n] - sq[n - 1];
    let tail = if q < 1.0 { step * q / (1.0 - q) } else { 0.0 };
    (false, ratio, Some((sq[n] + tail).sqrt()))
}

/// `sup { |f(l)| : ||f||_{L^q(mu)} <= 1 }` over the basis span, per degree.
pub fn evaluation_bound(point: Complex64, basis: &FunctionBasis, mu: &PlanarMeasure, q: f64) -> Result<EvaluationProfile> {
    if q != 2.0 {
        return Err(Error::Unsupported(format!("evaluation bounds for exponent q = {q}; only q = 2 is implemented")));
    }
    Ok(EvaluationModel::new(basis, mu)?.profile(point))
}

/// `k_l = sum_i c_i b_i` with `<f, k_l> = int f conj(k_l) dmu = f(l)` on the
/// basis span.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelFunction {
    pub point: Complex64,
    pub coefficients: Vec<Complex64>,
    /// `||k_l||`, equal to the evaluation bound.
    pub norm: f64,
}

impl KernelFunction {
    pub fn eval(&self, basis: &FunctionBasis, z: Complex64) -> Complex64 {
        basis.eval(z).iter().zip(&self.coefficients).map(|(b, c)| b * c).sum()
    }
}

pub fn kernel_function(point: Complex64, basis: &FunctionBasis, mu: &PlanarMeasure) -> Result<KernelFunction> {
    EvaluationModel::new(basis, mu)?.kernel(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureComponent;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disk() -> PlanarMeasure {
        PlanarMeasure::positive(vec![MeasureComponent::disk("d", c(0.0, 0.0), 1.0, 1.0)], 8).unwrap()
    }

    fn circle() -> PlanarMeasure {
        PlanarMeasure::positive(vec![MeasureComponent::uniform_circle("s", c(0.0, 0.0), 1.0, 1.0)], 8).unwrap()
    }

    #[test]
    fn gram_examples() {
        let b = FunctionBasis::monomials(c(0.0, 0.0), 5);
        let g = gram_matrix(&b, &disk()).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { PI / (i as f64 + 1.0) } else { 0.0 };
                assert!((g.matrix[(i, j)] - want).norm() < 1e-9, "{i} {j}");
            }
        }
        let g = gram_matrix(&b, &circle()).unwrap();
        assert!((g.matrix.clone() - DMatrix::identity(6, 6)).norm() < 1e-12);
        let atom = PlanarMeasure::positive(vec![MeasureComponent::atom("a", c(0.0, 0.0), 1.0)], 1).unwrap();
        let g = gram_matrix(&FunctionBasis::monomials(c(0.0, 0.0), 1), &atom).unwrap();
        assert_eq!(g.matrix, DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]));
        assert!(g.condition.is_infinite() && g.ill_conditioned);
    }

    #[test]
    fn bergman_and_szego_bounds() {
        let b = FunctionBasis::monomials(c(0.0, 0.0), 30);
        let p = evaluation_bound(c(0.0, 0.0), &b, &disk(), 2.0).unwrap();
        assert!((p.last() - 1.0 / PI.sqrt()).abs() < 1e-9);
        assert!(!p.divergent);
        let p = evaluation_bound(c(0.5, 0.0), &b, &disk(), 2.0).unwrap();
        let want = (16.0 / (9.0 * PI)).sqrt();
        assert!((p.limit.unwrap() - want).abs() / want < 1e-6, "{:?}", p.limit);
        assert!(p.bounds.windows(2).all(|w| w[1] >= w[0]));
        let p = evaluation_bound(c(0.0, 0.0), &b, &circle(), 2.0).unwrap();
        assert!((p.last() - 1.0).abs() < 1e-12);
        let p = evaluation_bound(c(1.5, 0.0), &b, &circle(), 2.0).unwrap();
        assert!(p.divergent);
        assert!(matches!(evaluation_bound(c(0.0, 0.0), &b, &circle(), 3.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn atom_has_no_bounded_evaluation_off_its_point() {
        let atom = PlanarMeasure::positive(vec![MeasureComponent::atom("a", c(0.0, 0.0), 1.0)], 1).unwrap();
        let b = FunctionBasis::monomials(c(0.0, 0.0), 6);
        let p = evaluation_bound(c(0.2, 0.1), &b, &atom, 2.0).unwrap();
        assert!(p.divergent && p.last().is_infinite());
    }

    #[test]
    fn kernels_reproduce() {
        let b = FunctionBasis::monomials(c(0.0, 0.0), 12);
        let k = kernel_function(c(0.0, 0.0), &b, &disk()).unwrap();
        assert!((k.coefficients[0] - 1.0 / PI).norm() < 1e-10);
        assert!(k.coefficients[1..].iter().all(|v| v.norm() < 1e-10));
        let k = kernel_function(c(0.0, 0.0), &b, &circle()).unwrap();
        assert!((k.coefficients[0] - 1.0).norm() < 1e-12);

        let mu = disk();
        let l = c(0.3, -0.2);
        let k = kernel_function(l, &b, &mu).unwrap();
        for term in b.terms() {
            let inner = mu.integrate(|z| term.eval(z) * k.eval(&b, z).conj()).unwrap();
            let want = term.eval(l);
            assert!((inner - want).norm() <= 1e-6 * want.norm().max(1e-3), "{term:?}");
        }
        assert!(matches!(kernel_function(c(1.5, 0.0), &b, &circle()), Err(Error::NoKernel { .. })));
    }

    #[test]
    fn laurent_basis_nests_by_degree() {
        let b = FunctionBasis::laurent(c(0.0, 0.0), 2, &[c(0.0, 0.0)]);
        assert_eq!(b.len(), 5);
        assert_eq!(b.prefix_len(0), 1);
        assert_eq!(b.prefix_len(1), 3);
        assert_eq!(b.terms()[2].eval(c(2.0, 0.0)), c(0.5, 0.0));
    }
}
