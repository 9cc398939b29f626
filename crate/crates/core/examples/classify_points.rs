//! Light and heavy points of `|mu^|` for arclength on the unit circle: the
//! transform vanishes inside, so interior points are light.

use abpe::coloring::{classify_point, ClassifyBudget, PhiField};
use abpe::measure::{MeasureComponent, PlanarMeasure};
use abpe::Complex64;

fn main() -> abpe::Result<()> {
    let mu = PlanarMeasure::positive(vec![MeasureComponent::uniform_circle("s", Complex64::new(0.0, 0.0), 1.0, 1.0)], 8)?;
    let phi = PhiField::cauchy_modulus(mu);
    let budget = ClassifyBudget::default();
    for a in [Complex64::new(0.0, 0.0), Complex64::new(0.25, 0.1), Complex64::new(3.0, 0.0)] {
        let p = classify_point(&phi, a, &budget)?;
        println!(
            "{a}: {:?} ({:?}), witness radius {:.4}, decided at generation {}",
            p.verdict, p.confidence, p.witness_radius, p.decided_at_generation
        );
    }
    Ok(())
}
