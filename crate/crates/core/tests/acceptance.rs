//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line
//! with the measured numbers and then asserts.

use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::time::Instant;

use abpe::abpe::{decompose, evaluation_bound, scan_abpe, FunctionBasis, ScanConfig};
use abpe::cauchy::{build_cover, cauchy_transform, coefficients_at_infinity, dbar_residual, localize, localize_measure, TensorBump};
use abpe::cli::scene::parse_scene;
use abpe::cli::svg::coloring_svg;
use abpe::coloring::{run_scheme, vanishing_consistency, ClassifyBudget, PhiField};
use abpe::geometry::{locate_square, DyadicSquare};
use abpe::harmonic::{harmonic_measure, harmonic_measure_with, mutually_singular, sweep, BoundaryMeasure, CircularDomain, DEFAULT_SINGULARITY_TOL};
use abpe::measure::{AreaShape, MeasureComponent, PlanarMeasure};
use abpe::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Written to the stderr handle directly, which the test harness does not
/// capture, so the line shows up in every run.
fn report(n: u32, ok: bool, detail: String) {
    let line = format!("criterion {n}: {} {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

// 1. Cauchy transforms against closed forms.

const LINE_TOL: f64 = 1e-6;
const AREA_TOL: f64 = 1e-4;

#[test]
fn criterion_1_cauchy_oracles() {
    let start = Instant::now();
    let p = c(0.3, -0.2);
    let atom = PlanarMeasure::positive(vec![MeasureComponent::atom("a", p, 1.0)], 8).unwrap();
    let circle = PlanarMeasure::positive(vec![MeasureComponent::uniform_circle("s", c(0.0, 0.0), 1.0, 1.0)], 8).unwrap();
    let disk = PlanarMeasure::positive(vec![MeasureComponent::disk("d", c(0.0, 0.0), 1.0, 1.0)], 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut points = Vec::new();
    while points.len() < 200 {
        let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        // At least 0.1 from every support.
        if (z - p).norm() >= 0.1 && (z.norm() - 1.0).abs() >= 0.1 {
            points.push(z);
        }
    }
    let (mut e_atom, mut e_circle, mut e_disk) = (0.0f64, 0.0f64, 0.0f64);
    for &z in &points {
        let atom_exact = 1.0 / (p - z);
        // Uniform probability on |w| = 1: 0 inside, -1/z outside.
        let circle_exact = if z.norm() < 1.0 { c(0.0, 0.0) } else { -1.0 / z };
        // Area on the unit disk: -pi conj(z) inside, -pi/z outside.
        let disk_exact = if z.norm() < 1.0 { -PI * z.conj() } else { -PI / z };
        e_atom = e_atom.max((cauchy_transform(&atom, z).unwrap() - atom_exact).norm());
        e_circle = e_circle.max((cauchy_transform(&circle, z).unwrap() - circle_exact).norm());
        e_disk = e_disk.max((cauchy_transform(&disk, z).unwrap() - disk_exact).norm());
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = e_atom <= LINE_TOL && e_circle <= LINE_TOL && e_disk <= AREA_TOL && secs <= 10.0;
    report(
        1,
        ok,
        format!("200 points: atom {e_atom:.2e}, circle {e_circle:.2e} (tol {LINE_TOL:e}), disk {e_disk:.2e} (tol {AREA_TOL:e}), {secs:.2}s (limit 10s)"),
    );
    assert!(ok);
}

// 2. |f'(inf)| <= delta ||f|| and |beta(f, a)| <= delta^2 ||f|| for rational f
// analytic off B(a, delta).

const LEMMA_SLACK: f64 = 1e-8;

struct Rational {
    constant: Complex64,
    /// `(coefficient, pole, order)`, order 1 or 2.
    terms: Vec<(Complex64, Complex64, u32)>,
}

impl Rational {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.terms.iter().fold(self.constant, |acc, &(k, p, m)| acc + k / (z - p).powu(m))
    }

    /// Exact `a1 = f'(inf)` and `a2 = beta(f, a)` from
    /// `1/(z-p) = sum_n (p-a)^(n-1) (z-a)^-n` and
    /// `1/(z-p)^2 = sum_n (n-1) (p-a)^(n-2) (z-a)^-n`.
    fn exact(&self, a: Complex64) -> (Complex64, Complex64) {
        let mut a1 = c(0.0, 0.0);
        let mut a2 = c(0.0, 0.0);
        for &(k, p, m) in &self.terms {
            if m == 1 {
                a1 += k;
                a2 += k * (p - a);
            } else {
                a2 += k;
            }
        }
        (a1, a2)
    }
}

#[test]
fn criterion_2_elementary_inequalities() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = 0;
    let mut worst_ratio1 = 0.0f64;
    let mut worst_ratio2 = 0.0f64;
    let mut worst_estimator = 0.0f64;
    for _ in 0..1000 {
        let a = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let delta = rng.gen_range(0.1..2.0);
        let count = rng.gen_range(1..=4);
        let terms = (0..count)
            .map(|_| {
                let p = a + Complex64::from_polar(delta * rng.gen_range(0.0..0.9), rng.gen_range(0.0..TAU));
                let k = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                (k, p, rng.gen_range(1..=2))
            })
            .collect();
        let f = Rational {
            constant: c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            terms,
        };
        // The sup over |z - a| >= delta sits on the circle; dense sampling
        // from below only makes the check stricter.
        let n = 4096;
        let sup = (0..n)
            .map(|j| f.eval(a + Complex64::from_polar(delta, TAU * j as f64 / n as f64)).norm())
            .fold(0.0, f64::max);
        let (a1, a2) = f.exact(a);
        // The library estimator on a circle well outside the poles.
        let est = coefficients_at_infinity(|z| f.eval(z), a, 2.0 * delta, 512).unwrap();
        let scale = sup.max(1.0);
        worst_estimator = worst_estimator.max((est.a1 - a1).norm() / scale).max((est.a2 - a2).norm() / scale);
        for (value, bound) in [(a1.norm(), delta * sup), (est.a1.norm(), delta * sup)] {
            worst_ratio1 = worst_ratio1.max(value / bound);
            if value > bound + LEMMA_SLACK {
                violations += 1;
            }
        }
        for (value, bound) in [(a2.norm(), delta * delta * sup), (est.a2.norm(), delta * delta * sup)] {
            worst_ratio2 = worst_ratio2.max(value / bound);
            if value > bound + LEMMA_SLACK {
                violations += 1;
            }
        }
    }
    let ok = violations == 0 && worst_estimator <= 1e-9;
    report(
        2,
        ok,
        format!(
            "1000 rationals: {violations} violations (slack {LEMMA_SLACK:e}); max |f'(inf)|/(delta||f||) {worst_ratio1:.4}, max |beta|/(delta^2||f||) {worst_ratio2:.4}; estimator error {worst_estimator:.2e}"
        ),
    );
    assert!(ok);
}

// 3. Localization.

/// `sum over Z^2 of min(1, 1/|u - m|^3)` with the tail beyond `R` bounded by
/// `int_{|w| > R - 1} |w|^-3 dA = 2 pi / (R - 1)`.
fn lattice_sum_bound(u: Complex64) -> f64 {
    const R: i64 = 60;
    let mut s = 0.0;
    for i in -R..=R {
        for j in -R..=R {
            let d = (u - c(i as f64, j as f64)).norm();
            if d <= R as f64 {
                s += if d <= 1.0 { 1.0 } else { d.powi(-3) };
            }
        }
    }
    s + TAU / (R as f64 - 1.0)
}

#[test]
fn criterion_3_localization() {
    let bump = TensorBump::new(c(-0.5, -0.5), c(0.5, 0.5), 0.25).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    // (a) phi avoids the singularities of f.
    let g = localize(|z: Complex64| 1.0 / (z - c(2.0, 0.3)) + 3.0 / (z + c(1.7, -1.1)).powu(2), &bump).unwrap();
    let zero_err = (0..50)
        .map(|_| g.eval(c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))).norm())
        .fold(0.0, f64::max);

    // (b) the pieces of a partition of unity add up to mu^, compared against
    // the closed form of the disk transform.
    let center = c(0.1, -0.05);
    let mu = PlanarMeasure::positive(vec![MeasureComponent::disk("d", center, 0.6, 1.0)], 8).unwrap();
    let cover = build_cover(2, c(-1.0, -1.0), c(1.0, 1.0)).unwrap();
    let pieces: Vec<_> = cover.squares().iter().map(|s| localize_measure(&mu, &cover.member(s))).collect();
    let mut sum_err = 0.0f64;
    for _ in 0..100 {
        let z = loop {
            let z = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            if ((z - center).norm() - 0.6).abs() > 0.05 {
                break z;
            }
        };
        let w = z - center;
        let exact = if w.norm() < 0.6 { -PI * w.conj() } else { -PI * 0.36 / w };
        let sum: Complex64 = pieces.iter().map(|p| p.eval(z).unwrap()).sum();
        sum_err = sum_err.max((sum - exact).norm());
    }

    // (c) T_phi f is analytic off the support of phi.
    let f = localize(|z: Complex64| z.conj() * z.conj() + z.norm_sqr(), &bump).unwrap();
    let mut worst_dbar = 0.0f64;
    let mut dbar_ok = true;
    for z in [c(1.2, 0.1), c(-1.0, 0.9), c(0.2, -1.3), c(2.0, 2.0), c(-0.9, -0.8)] {
        let r = dbar_residual(|w| f.eval(w), z, 1e-3);
        worst_dbar = worst_dbar.max(r.residual);
        dbar_ok &= r.residual <= 10.0 * r.truncation;
    }
    // Sanity: inside the plateau T_phi f is not analytic, dbar f = 2 conj(z) + z there.
    let inside = dbar_residual(|w| f.eval(w), c(0.1, 0.1), 1e-3);
    let inside_separates = inside.residual > 100.0 * inside.truncation;

    // (d) sum_l min(1, 2^-3k / |z - z_l|^3) is bounded by the full lattice sum.
    let cover = build_cover(3, c(-1.0, -1.0), c(1.0, 1.0)).unwrap();
    let s = cover.side();
    let points: Vec<Complex64> = (0..1000).map(|_| c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))).collect();
    let mut cover_ok = true;
    for &z in &points {
        // Centers sit at (m + 1/2) s.
        let u = z / s - c(0.5, 0.5);
        cover_ok &= cover.covering_sum(z) <= lattice_sum_bound(c(u.re.rem_euclid(1.0), u.im.rem_euclid(1.0))) + 1e-12;
    }
    let measured = cover.covering_sum_constant(&points);
    // Within one side the ratio is the sum itself; beyond, comparison with
    // the area integral gives at most 2.48 * 2 pi / 0.646 < 25.
    let decay_ok = measured.constant <= 25.0;

    let ok = zero_err <= 1e-6 && sum_err <= 1e-4 && dbar_ok && inside_separates && cover_ok && decay_ok;
    report(
        3,
        ok,
        format!(
            "T_phi f off supp: {zero_err:.2e} (tol 1e-6); partition sum vs mu^ at 100 points: {sum_err:.2e} (tol 1e-4); \
             dbar off F: {worst_dbar:.2e} within 10x truncation: {dbar_ok}; covering sum bounded at 1000 points: {cover_ok}, measured C = {:.4} (bound 25)",
            measured.constant
        ),
    );
    assert!(ok);
}

// 4. Coloring: termination, hand-simulated rings, determinism.

/// Rings of an all-heavy run computed square by square: the hull is
/// refined, red squares are its outside edge neighbours, yellow squares the
/// other outside squares within `n^2 2^-n` of a red one (distance between
/// closed squares), and the new hull is everything not reachable from far
/// away.
type Cells = BTreeSet<(i64, i64)>;

fn hand_rings(a: Complex64, k: u32, gens: u32) -> Vec<(Cells, Cells)> {
    let scale = (k as f64).exp2();
    let mut hull: BTreeSet<(i64, i64)> = [((a.re * scale).floor() as i64, (a.im * scale).floor() as i64)].into();
    let mut out = Vec::new();
    for n in k + 1..=k + gens {
        hull = hull.iter().flat_map(|&(i, j)| [(2 * i, 2 * j), (2 * i + 1, 2 * j), (2 * i, 2 * j + 1), (2 * i + 1, 2 * j + 1)]).collect();
        let mut red = BTreeSet::new();
        for &(i, j) in &hull {
            for d in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let q = (i + d.0, j + d.1);
                if !hull.contains(&q) {
                    red.insert(q);
                }
            }
        }
        let side = (-(n as f64)).exp2();
        let limit = f64::from(n * n) * side;
        let span = i64::from(n * n) + 2;
        let gap = |p: i64, q: i64| ((p - q).abs() - 1).max(0) as f64 * side;
        let mut yellow = BTreeSet::new();
        for &(ri, rj) in &red {
            for i in ri - span..=ri + span {
                for j in rj - span..=rj + span {
                    let q = (i, j);
                    if hull.contains(&q) || red.contains(&q) {
                        continue;
                    }
                    if gap(i, ri).hypot(gap(j, rj)) <= limit {
                        yellow.insert(q);
                    }
                }
            }
        }
        let colored: BTreeSet<(i64, i64)> = hull.iter().chain(&red).chain(&yellow).copied().collect();
        let (i0, i1) = (colored.iter().map(|p| p.0).min().unwrap() - 1, colored.iter().map(|p| p.0).max().unwrap() + 1);
        let (j0, j1) = (colored.iter().map(|p| p.1).min().unwrap() - 1, colored.iter().map(|p| p.1).max().unwrap() + 1);
        let mut outside = BTreeSet::from([(i0, j0)]);
        let mut queue = VecDeque::from([(i0, j0)]);
        while let Some((i, j)) = queue.pop_front() {
            for d in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let q = (i + d.0, j + d.1);
                if q.0 >= i0 && q.0 <= i1 && q.1 >= j0 && q.1 <= j1 && !colored.contains(&q) && outside.insert(q) {
                    queue.push_back(q);
                }
            }
        }
        hull = (i0..=i1).flat_map(|i| (j0..=j1).map(move |j| (i, j))).filter(|q| !outside.contains(q)).collect();
        out.push((red, yellow));
    }
    out
}

#[test]
fn criterion_4_coloring() {
    let a = c(0.1, 0.2);
    let window = (c(-8.0, -8.0), c(8.0, 8.0));

    let zero = run_scheme(&PhiField::Constant(0.0), a, 2, 3, window).unwrap();
    let zero_ok = zero.terminated_with_unbounded_green && zero.generations.len() == 1 && zero.generations[0].red.is_empty();

    let heavy = run_scheme(&PhiField::Constant(1e6), a, 2, 3, window).unwrap();
    let expected = hand_rings(a, 2, 3);
    let seed_ok = heavy.seed == DyadicSquare::new(2, 0, 0) && heavy.seed == locate_square(a, 2);
    let mut rings_ok = heavy.generations.len() == expected.len() && !heavy.terminated_with_unbounded_green;
    let mut counts = Vec::new();
    for (g, (red, yellow)) in heavy.generations.iter().zip(&expected) {
        let got_red: BTreeSet<(i64, i64)> = g.red.cells().copied().collect();
        let got_yellow: BTreeSet<(i64, i64)> = g.yellow.cells().copied().collect();
        rings_ok &= g.green.is_empty() && &got_red == red && &got_yellow == yellow;
        counts.push(format!("{}:{}r/{}y", g.generation, red.len(), yellow.len()));
    }

    let svg_a = coloring_svg(&run_scheme(&PhiField::Constant(1e6), a, 2, 3, window).unwrap());
    let svg_b = coloring_svg(&heavy);
    let repeat_ok = svg_a == svg_b && run_scheme(&PhiField::Constant(0.0), a, 2, 3, window).unwrap() == zero;

    let ok = zero_ok && seed_ok && rings_ok && repeat_ok;
    report(
        4,
        ok,
        format!(
            "phi=0 green-terminated: {zero_ok}; phi=1e6 rings equal hand simulation: {rings_ok} ({}); repeated runs byte-identical: {repeat_ok}",
            counts.join(", ")
        ),
    );
    assert!(ok);
}

// 5. Light points carry no mass.

#[test]
fn criterion_5_vanishing_consistency() {
    let start = Instant::now();
    let zero = c(0.0, 0.0);
    let budget = ClassifyBudget {
        max_generation: 6,
        ..ClassifyBudget::default()
    };
    let fixtures: Vec<(&str, PlanarMeasure, AreaShape)> = vec![
        (
            "circle / inner disk",
            PlanarMeasure::positive(vec![MeasureComponent::uniform_circle("s", zero, 1.0, 1.0)], 8).unwrap(),
            AreaShape::Disk { center: zero, radius: 0.5 },
        ),
        (
            "area disk / inner disk",
            PlanarMeasure::positive(vec![MeasureComponent::disk("d", zero, 1.0, 1.0)], 8).unwrap(),
            AreaShape::Disk { center: c(0.1, 0.0), radius: 0.3 },
        ),
        (
            "two circles / hole",
            PlanarMeasure::positive(
                vec![
                    MeasureComponent::uniform_circle("outer", zero, 1.0, 1.0),
                    MeasureComponent::uniform_circle("inner", zero, 0.5, 0.5),
                ],
                8,
            )
            .unwrap(),
            AreaShape::Rect { min: c(-0.2, -0.2), max: c(0.2, 0.2) },
        ),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, mu, region) in fixtures {
        let r = vanishing_consistency(&mu, &region, 6, &budget).unwrap();
        ok &= !r.inconsistent;
        lines.push(format!("{name}: light {:.2}, mass {:.2e}, inconsistent {}", r.fraction_light, r.mass.abs(), r.inconsistent));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs <= 60.0;
    report(5, ok, format!("{}; {secs:.1}s (limit 60s, budget 6)", lines.join("; ")));
    assert!(ok);
}

// 6. Bergman and Szego kernels.

#[test]
fn criterion_6_kernel_reproduction() {
    let zero = c(0.0, 0.0);
    let basis = FunctionBasis::monomials(zero, 30);
    let area = PlanarMeasure::positive(vec![MeasureComponent::disk("d", zero, 1.0, 1.0)], 8).unwrap();
    let circle = PlanarMeasure::positive(vec![MeasureComponent::uniform_circle("s", zero, 1.0, 1.0)], 8).unwrap();
    let b0 = evaluation_bound(zero, &basis, &area, 2.0).unwrap().last();
    let b5 = evaluation_bound(c(0.5, 0.0), &basis, &area, 2.0).unwrap().last();
    let s0 = evaluation_bound(zero, &basis, &circle, 2.0).unwrap().last();
    let far = evaluation_bound(c(1.5, 0.0), &basis, &area, 2.0).unwrap();
    let (o0, o5) = (1.0 / PI.sqrt(), (16.0 / (9.0 * PI)).sqrt());
    let (e0, e5, es) = ((b0 - o0).abs() / o0, (b5 - o5).abs() / o5, (s0 - 1.0).abs());
    let ok = e0 <= 0.02 && e5 <= 0.02 && es <= 0.01 && far.divergent;
    report(
        6,
        ok,
        format!(
            "Bergman at 0: {b0:.6} vs {o0:.6} ({:.3}%), at 0.5: {b5:.6} vs {o5:.6} ({:.3}%) (tol 2%); Szego at 0: {s0:.8} (tol 1%); divergent at 1.5: {}",
            100.0 * e0,
            100.0 * e5,
            far.divergent
        ),
    );
    assert!(ok);
}

// 7. Scan geometry.

#[test]
fn criterion_7_scan_geometry() {
    let zero = c(0.0, 0.0);
    let basis = FunctionBasis::monomials(zero, 30);
    let disk = PlanarMeasure::positive(vec![MeasureComponent::disk("d", zero, 1.0, 1.0)], 8).unwrap();
    let scan = scan_abpe(&disk, &basis, &ScanConfig::new(c(-1.25, -1.25), c(1.25, 1.25), 1.0 / 64.0)).unwrap();
    let (mut both, mut either) = (0usize, 0usize);
    for j in 0..scan.ny {
        for i in 0..scan.nx {
            let detected = scan.label(i, j).is_some();
            let truth = scan.center(i, j).norm() < 1.0;
            both += usize::from(detected && truth);
            either += usize::from(detected || truth);
        }
    }
    let jaccard = both as f64 / either as f64;

    let two = PlanarMeasure::positive(
        vec![
            MeasureComponent::disk("d1", c(-2.0, 0.0), 1.0, 1.0),
            MeasureComponent::disk("d2", c(2.0, 0.0), 1.0, 1.0),
        ],
        8,
    )
    .unwrap();
    let two_scan = scan_abpe(&two, &basis, &ScanConfig::new(c(-3.5, -1.5), c(3.5, 1.5), 1.0 / 16.0)).unwrap();
    let seg = PlanarMeasure::positive(vec![MeasureComponent::segment("s", c(-0.5, 0.0), c(0.5, 0.0), 1.0)], 8).unwrap();
    let seg_scan = scan_abpe(&seg, &basis, &ScanConfig::new(c(-1.0, -0.5), c(1.0, 0.5), 1.0 / 32.0)).unwrap();

    let ok = jaccard >= 0.9 && scan.components.len() == 1 && two_scan.components.len() == 2 && seg_scan.components.is_empty();
    report(
        7,
        ok,
        format!(
            "disk Jaccard {jaccard:.4} at 1/64 (min 0.9), {} component; two disks: {} components; segment: {} components",
            scan.components.len(),
            two_scan.components.len(),
            seg_scan.components.len()
        ),
    );
    assert!(ok);
}

// 8. Harmonic measure.

#[test]
fn criterion_8_harmonic() {
    let zero = c(0.0, 0.0);
    let disk = CircularDomain::disk(zero, 1.0).unwrap();
    let annulus = CircularDomain::annulus(zero, 0.5, 1.0).unwrap();

    let mut mass_err = 0.0f64;
    for z in [zero, c(0.5, 0.0), c(-0.3, 0.8), c(0.0, -0.95)] {
        mass_err = mass_err.max((harmonic_measure(&disk, z).unwrap().total_mass() - 1.0).abs());
    }
    let mut log_err = 0.0f64;
    for z in [c(0.6, 0.0), c(0.0, 0.75), c(-0.62, 0.62), c(0.52, 0.0), c(0.97, 0.0)] {
        let w = harmonic_measure(&annulus, z).unwrap();
        mass_err = mass_err.max((w.total_mass() - 1.0).abs());
        // log(R/|z|) / log(R/r) on the inner circle.
        let law = (1.0 / z.norm()).ln() / 2f64.ln();
        log_err = log_err.max((w.circle_mass(1) - law).abs());
    }

    let a = c(0.5, 0.0);
    let n = 1 << 12;
    let point = PlanarMeasure::positive(vec![MeasureComponent::atom("p", a, 1.0)], 8).unwrap();
    let swept = sweep(&point, &disk, n).unwrap();
    let poisson_err = (0..n)
        .map(|j| {
            let w = Complex64::from_polar(1.0, TAU * j as f64 / n as f64);
            let exact = (1.0 - a.norm_sqr()) / (w - a).norm_sqr() / TAU;
            (swept.circles[0].density[j] - exact).abs()
        })
        .fold(0.0, f64::max);

    // Singularity fixtures: two interior points of a disk (equivalent
    // measures), the two circles of an annulus, two distinct boundary atoms.
    let w1 = harmonic_measure_with(&disk, c(0.2, 0.1), 1024).unwrap();
    let w2 = harmonic_measure_with(&disk, c(-0.4, 0.3), 1024).unwrap();
    let equivalent = !mutually_singular(&w1, &w2, DEFAULT_SINGULARITY_TOL).singular;
    let inner = PlanarMeasure::positive(vec![MeasureComponent::uniform_circle("i", zero, 0.5, 1.0)], 8).unwrap();
    let outer = PlanarMeasure::positive(vec![MeasureComponent::uniform_circle("o", zero, 1.0, 1.0)], 8).unwrap();
    let circles = mutually_singular(&sweep(&inner, &annulus, 256).unwrap(), &sweep(&outer, &annulus, 256).unwrap(), DEFAULT_SINGULARITY_TOL).singular;
    let mut atom_a = BoundaryMeasure::zero(&disk, 256);
    atom_a.add_atom(c(1.0, 0.0), 1.0);
    let mut atom_b = BoundaryMeasure::zero(&disk, 256);
    atom_b.add_atom(c(0.0, 1.0), 1.0);
    let atoms = mutually_singular(&atom_a, &atom_b, DEFAULT_SINGULARITY_TOL).singular;

    let ok = mass_err <= 1e-8 && log_err <= 1e-6 && poisson_err <= 1e-4 && equivalent && circles && atoms;
    report(
        8,
        ok,
        format!(
            "mass error {mass_err:.2e} (tol 1e-8); inner-circle log law {log_err:.2e} (tol 1e-6); sweep vs Poisson sup {poisson_err:.2e} at n=2^12 (tol 1e-4); \
             verdicts: interior points not singular {equivalent}, annulus circles singular {circles}, distinct atoms singular {atoms}"
        ),
    );
    assert!(ok);
}

// 9. Decomposition.

#[test]
fn criterion_9_decomposition() {
    let start = Instant::now();
    let run = |name: &str| {
        let scene = parse_scene(&fixture(name)).unwrap();
        let (lo, hi) = scene.window().unwrap();
        decompose(&scene.measure().unwrap(), &scene.k, &scene.basis().unwrap(), &ScanConfig::new(lo, hi, 1.0 / 16.0)).unwrap()
    };
    let two = run("two_disks_segment.scene");
    let labels: Vec<Vec<String>> = two.parts.iter().map(|p| p.labels.clone()).collect();
    let two_ok = two.delta0 == ["seg"]
        && labels == [vec!["d1".to_string()], vec!["d2".to_string()]]
        && two.parts.iter().all(|p| p.closure_contains_delta && p.region.connectivity == 1);

    let ann = run("annulus.scene");
    let ann_ok = ann.delta0.is_empty()
        && ann.parts.len() == 1
        && ann.parts[0].region.connectivity == 2
        && ann.parts[0].k_connectivity == Some(2)
        && ann.parts[0].connectivity_ok
        && ann.parts[0].closure_contains_delta;
    let secs = start.elapsed().as_secs_f64();
    let ok = two_ok && ann_ok && secs <= 300.0;
    report(
        9,
        ok,
        format!(
            "two disks + segment: Delta_0 {:?}, parts {labels:?}, closures contain Delta_n: {}; annulus: connectivity {} <= {:?}; {secs:.1}s (limit 300s)",
            two.delta0,
            two.parts.iter().all(|p| p.closure_contains_delta),
            ann.parts.first().map_or(0, |p| p.region.connectivity),
            ann.parts.first().and_then(|p| p.k_connectivity)
        ),
    );
    assert!(ok);
}
