//! The expansion `f(z) = f(inf) + a1/(z - z0) + a2/(z - z0)^2 + ...` of a
//! Cauchy transform, and the elementary bounds `|f'(inf)| <= delta ||f||`,
//! `|beta(f, a)| <= delta^2 ||f||` for `f` analytic off a disk of radius delta.

use abpe::cauchy::{cauchy_transform, coefficients_at_infinity, exterior_sup_norm, DEFAULT_SAMPLES};
use abpe::measure::{MeasureComponent, PlanarMeasure};
use abpe::Complex64;

fn main() -> abpe::Result<()> {
    let a = Complex64::new(0.3, -0.2);
    let mu = PlanarMeasure::positive(vec![MeasureComponent::disk("d", a, 0.5, 1.0)], 8)?;
    let f = |z| cauchy_transform(&mu, z).unwrap_or_default();
    let c = coefficients_at_infinity(f, a, 1.0, DEFAULT_SAMPLES)?;
    // For a positive measure a1 = -mass; a2 = -int (w - a) dmu vanishes by symmetry.
    println!("f(inf) {:.3e}", c.value_at_infinity.norm());
    println!("a1 {:.10}  (-mass = {:.10})", c.a1, -mu.total_mass());
    println!("a2 {:.3e}", c.a2.norm());

    let delta = 0.5;
    let sup = exterior_sup_norm(f, a, delta, 256);
    println!("|f'(inf)| = {:.6} <= delta ||f|| = {:.6}", c.a1.norm(), delta * sup);
    Ok(())
}
