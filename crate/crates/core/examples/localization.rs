//! The localization operator `T_phi f`: analytic off the support of `phi`,
//! zero when `phi` misses the singularities of `f`, and summing back to `f`
//! over a partition of unity.

use abpe::cauchy::{build_cover, cauchy_transform, dbar_residual, localize, localize_measure, TensorBump};
use abpe::measure::{MeasureComponent, PlanarMeasure};
use abpe::Complex64;

fn main() -> abpe::Result<()> {
    let c = |re, im| Complex64::new(re, im);
    let bump = TensorBump::new(c(-0.5, -0.5), c(0.5, 0.5), 0.25)?;

    // f = 1/(z - 2) is analytic on the cutoff's support, so T_phi f = 0.
    let entire_here = localize(|z: Complex64| 1.0 / (z - c(2.0, 0.0)), &bump)?;
    println!("T_phi f with the pole outside: {:.3e}", entire_here.eval(c(0.1, 0.3)).norm());

    // f = conj(z) is nowhere analytic; T_phi f is analytic off supp(phi).
    let f = localize(|z: Complex64| z.conj(), &bump)?;
    let outside = c(1.5, 0.7);
    let r = dbar_residual(|z| f.eval(z), outside, 1e-3);
    println!("dbar T_phi f at {outside}: {:.3e} (truncation {:.3e})", r.residual, r.truncation);
    println!("measured C0 = {:.4}", f.report().c0);

    // Over a partition of unity the localized Cauchy transforms add up.
    let mu = PlanarMeasure::positive(vec![MeasureComponent::disk("d", c(0.1, 0.0), 0.6, 1.0)], 8)?;
    let cover = build_cover(1, c(-1.0, -1.0), c(1.0, 1.0))?;
    let z = c(0.2, 0.15);
    let mut sum = Complex64::new(0.0, 0.0);
    for s in cover.squares() {
        sum += localize_measure(&mu, &cover.member(&s)).eval(z)?;
    }
    println!("sum over {} pieces {:.10}, mu^ {:.10}", cover.len(), sum, cauchy_transform(&mu, z)?);
    Ok(())
}
