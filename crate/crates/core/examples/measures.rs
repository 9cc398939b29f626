//! Building planar measures: masses, integrals and restrictions.

use abpe::measure::{AreaShape, MeasureComponent, PlanarMeasure, Region};
use abpe::Complex64;

fn main() -> abpe::Result<()> {
    let zero = Complex64::new(0.0, 0.0);
    let mu = PlanarMeasure::positive(
        vec![
            MeasureComponent::disk("disk", zero, 1.0, 1.0),
            MeasureComponent::uniform_circle("ring", Complex64::new(3.0, 0.0), 0.5, 1.0),
            MeasureComponent::atom("point", Complex64::new(-2.0, 1.0), 0.25),
        ],
        8,
    )?;
    println!("labels {:?}, {} quadrature nodes", mu.labels(), mu.node_count());
    println!("total mass {:.10} (pi + 1.25 = {:.10})", mu.total_mass(), std::f64::consts::PI + 1.25);

    let second = mu.restrict_labels(&["disk"])?.integrate(|z| Complex64::new(z.norm_sqr(), 0.0))?;
    println!("int |z|^2 over the disk {:.10} (pi/2)", second.re);

    let inner = Region::from(AreaShape::Disk { center: zero, radius: 0.5 });
    println!("mass inside |z| < 1/2: {:.10} (pi/4)", mu.restrict_region(&inner)?.total_mass());
    let upper = mu.restrict_region(&Region::upper_half_plane())?;
    println!("mass in the upper half plane: {:.10}", upper.total_mass());
    Ok(())
}
