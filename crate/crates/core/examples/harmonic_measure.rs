//! Harmonic measure of a disk and of an annulus, and the mass law
//! `omega_z(inner circle) = log(R/|z|) / log(R/r)`.

use abpe::harmonic::{annulus_inner_mass, disk_arc_harmonic_measure, harmonic_measure, CircularDomain};
use abpe::Complex64;

fn main() -> abpe::Result<()> {
    let zero = Complex64::new(0.0, 0.0);
    let disk = CircularDomain::disk(zero, 1.0)?;
    let z = Complex64::new(0.5, 0.0);
    let w = harmonic_measure(&disk, z)?;
    let upper = w.circles[0].arc_mass(0.0, std::f64::consts::PI);
    println!("disk: total {:.12}, upper half {:.10}, exact {:.10}", w.total_mass(), upper, disk_arc_harmonic_measure(z, 0.0, std::f64::consts::PI));

    let annulus = CircularDomain::annulus(zero, 0.5, 1.0)?;
    let z = Complex64::new(0.0, 0.7);
    let w = harmonic_measure(&annulus, z)?;
    println!(
        "annulus: total {:.12}, inner {:.10}, log law {:.10}",
        w.total_mass(),
        w.circle_mass(1),
        annulus_inner_mass(0.5, 1.0, 0.7)
    );
    Ok(())
}
