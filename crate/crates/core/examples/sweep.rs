//! Sweeping a measure onto the boundary: a point mass becomes the Poisson
//! kernel, and boundary parts stay where they are.

use abpe::harmonic::{mutually_singular, sweep, CircularDomain, DEFAULT_SINGULARITY_TOL};
use abpe::measure::{MeasureComponent, PlanarMeasure};
use abpe::Complex64;

fn main() -> abpe::Result<()> {
    let zero = Complex64::new(0.0, 0.0);
    let disk = CircularDomain::disk(zero, 1.0)?;
    let a = Complex64::new(0.5, 0.0);
    let mu = PlanarMeasure::positive(vec![MeasureComponent::atom("p", a, 1.0)], 8)?;
    let swept = sweep(&mu, &disk, 1 << 12)?;
    let d = &swept.circles[0];
    let mut worst = 0.0f64;
    for j in 0..d.samples() {
        let theta = std::f64::consts::TAU * j as f64 / d.samples() as f64;
        let w = Complex64::from_polar(1.0, theta);
        let poisson = (1.0 - a.norm_sqr()) / (w - a).norm_sqr() / std::f64::consts::TAU;
        worst = worst.max((d.density[j] - poisson).abs());
    }
    println!("sweep of delta_0.5: mass {:.12}, sup distance to the Poisson kernel {:.3e}", swept.total_mass(), worst);

    let annulus = CircularDomain::annulus(zero, 0.5, 1.0)?;
    let inner = PlanarMeasure::positive(vec![MeasureComponent::uniform_circle("i", zero, 0.5, 1.0)], 8)?;
    let outer = PlanarMeasure::positive(vec![MeasureComponent::uniform_circle("o", zero, 1.0, 1.0)], 8)?;
    let r = mutually_singular(&sweep(&inner, &annulus, 256)?, &sweep(&outer, &annulus, 256)?, DEFAULT_SINGULARITY_TOL);
    println!("circles of an annulus: overlap {:.3e}, mutually singular {}", r.overlap, r.singular);
    Ok(())
}
