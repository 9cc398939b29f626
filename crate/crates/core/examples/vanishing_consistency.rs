//! If every sampled point of a region is light for `|mu^|`, the measure
//! should carry no mass there.

use abpe::coloring::{vanishing_consistency, ClassifyBudget};
use abpe::measure::{AreaShape, MeasureComponent, PlanarMeasure};
use abpe::Complex64;

fn main() -> abpe::Result<()> {
    let zero = Complex64::new(0.0, 0.0);
    let mu = PlanarMeasure::positive(vec![MeasureComponent::uniform_circle("s", zero, 1.0, 1.0)], 8)?;
    let region = AreaShape::Disk { center: zero, radius: 0.5 };
    let report = vanishing_consistency(&mu, &region, 6, &ClassifyBudget::default())?;
    println!(
        "light fraction {:.2}, |mu|(V) = {:.3e}, inconsistent: {}",
        report.fraction_light, report.mass.abs(), report.inconsistent
    );
    Ok(())
}
