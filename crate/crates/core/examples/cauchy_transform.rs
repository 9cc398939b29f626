//! Cauchy transforms of an atom, a uniform circle and an area disk against
//! their closed forms.

use abpe::cauchy::cauchy_transform;
use abpe::measure::{MeasureComponent, PlanarMeasure};
use abpe::Complex64;

fn main() -> abpe::Result<()> {
    let zero = Complex64::new(0.0, 0.0);
    let atom = PlanarMeasure::positive(vec![MeasureComponent::atom("a", Complex64::new(0.5, 0.0), 1.0)], 8)?;
    let circle = PlanarMeasure::positive(vec![MeasureComponent::uniform_circle("c", zero, 1.0, 1.0)], 8)?;
    let disk = PlanarMeasure::positive(vec![MeasureComponent::disk("d", zero, 1.0, 1.0)], 8)?;

    for z in [Complex64::new(0.2, 0.3), Complex64::new(1.5, -0.5)] {
        // mu^(z) = int dmu(w) / (w - z)
        let a_exact = 1.0 / (Complex64::new(0.5, 0.0) - z);
        let c_exact = if z.norm() < 1.0 { zero } else { -1.0 / z };
        let d_exact = if z.norm() < 1.0 { -z.conj() * std::f64::consts::PI } else { -std::f64::consts::PI / z };
        println!("z = {z}");
        println!("  atom    {:.12}  exact {:.12}", cauchy_transform(&atom, z)?, a_exact);
        println!("  circle  {:.12}  exact {:.12}", cauchy_transform(&circle, z)?, c_exact);
        println!("  disk    {:.12}  exact {:.12}", cauchy_transform(&disk, z)?, d_exact);
    }
    Ok(())
}
