use std::f64::consts::TAU;

use abpe::cauchy::cauchy_transform;
use abpe::coloring::{run_scheme, PhiField};
use abpe::geometry::locate_square;
use abpe::harmonic::{harmonic_measure_with, CircularDomain};
use abpe::measure::{MeasureComponent, PlanarMeasure};
use abpe::Complex64;
use proptest::prelude::*;

fn point(r: f64, t: f64) -> Complex64 {
    Complex64::from_polar(r, t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn located_square_contains_point(re in -50.0f64..50.0, im in -50.0f64..50.0, k in 0u32..12) {
        let z = Complex64::new(re, im);
        let s = locate_square(z, k);
        let lo = s.corner();
        prop_assert!(lo.re <= z.re && z.re < lo.re + s.side());
        prop_assert!(lo.im <= z.im && z.im < lo.im + s.side());
    }

    // The Poisson integral reproduces Re(z^3) + Im(z).
    #[test]
    fn harmonic_measure_reproduces_harmonic_polynomials(r in 0.0f64..0.9, t in 0.0f64..TAU) {
        let disk = CircularDomain::disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let z = point(r, t);
        let w = harmonic_measure_with(&disk, z, 1024).unwrap();
        let circle = &w.circles[0];
        let n = circle.density.len();
        let integral: f64 = circle
            .density
            .iter()
            .enumerate()
            .map(|(j, d)| {
                let b = point(1.0, TAU * j as f64 / n as f64);
                d * (b.powu(3).re + b.im) * circle.cell()
            })
            .sum();
        prop_assert!((integral - (z.powu(3).re + z.im)).abs() < 1e-9);
    }

    #[test]
    fn atom_transform_is_a_simple_pole(pr in -1.0f64..1.0, pi in -1.0f64..1.0, r in 0.1f64..3.0, t in 0.0f64..TAU, m in 0.1f64..5.0) {
        let p = Complex64::new(pr, pi);
        let mu = PlanarMeasure::positive(vec![MeasureComponent::atom("p", p, m)], 8).unwrap();
        let z = p + point(r, t);
        prop_assert!((cauchy_transform(&mu, z).unwrap() - m / (p - z)).norm() < 1e-12 * (1.0 + m / r));
    }

    #[test]
    fn coloring_is_deterministic(re in -1.0f64..1.0, im in -1.0f64..1.0, level in 0.0f64..0.5) {
        let a = Complex64::new(re, im);
        let window = (Complex64::new(-6.0, -6.0), Complex64::new(6.0, 6.0));
        let field = PhiField::Constant(level);
        let first = run_scheme(&field, a, 2, 2, window);
        let second = run_scheme(&field, a, 2, 2, window);
        match (first, second) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (Err(x), Err(y)) => prop_assert_eq!(x.to_string(), y.to_string()),
            _ => prop_assert!(false, "runs disagree"),
        }
    }
}
