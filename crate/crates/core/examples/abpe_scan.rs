//! Scans a grid for analytic bounded point evaluations: the unit disk
//! carries one component, a segment none.

use abpe::abpe::{density_test, scan_abpe, DensityVerdict, FunctionBasis, ScanConfig};
use abpe::measure::{MeasureComponent, PlanarMeasure};
use abpe::Complex64;

fn main() -> abpe::Result<()> {
    let c = |re, im| Complex64::new(re, im);
    let basis = FunctionBasis::monomials(c(0.0, 0.0), 30);

    let disk = PlanarMeasure::positive(vec![MeasureComponent::disk("d", c(0.0, 0.0), 1.0, 1.0)], 8)?;
    let config = ScanConfig::new(c(-1.25, -1.25), c(1.25, 1.25), 1.0 / 32.0);
    let scan = scan_abpe(&disk, &basis, &config)?;
    for comp in &scan.components {
        println!(
            "disk: component {} of area {:.4} (pi = {:.4}), connectivity {}",
            comp.id,
            comp.area,
            std::f64::consts::PI,
            comp.connectivity
        );
    }

    let segment = PlanarMeasure::positive(vec![MeasureComponent::segment("s", c(-0.5, 0.0), c(0.5, 0.0), 1.0)], 8)?;
    let config = ScanConfig::new(c(-1.0, -0.5), c(1.0, 0.5), 1.0 / 32.0);
    match density_test(&segment, &basis, &config)? {
        DensityVerdict::Dense { resolution } => println!("segment: polynomials dense (no abpe down to {resolution})"),
        DensityVerdict::NotDense { witness } => println!("segment: {} abpe components", witness.len()),
    }
    Ok(())
}
