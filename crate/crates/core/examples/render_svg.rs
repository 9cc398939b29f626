//! Renders a coloring and an abpe scan as SVG files in the temp directory.

use abpe::abpe::{scan_abpe, FunctionBasis, ScanConfig};
use abpe::cli::svg::{coloring_svg, scan_svg};
use abpe::coloring::{run_scheme, PhiField};
use abpe::measure::{MeasureComponent, PlanarMeasure};
use abpe::Complex64;

fn main() -> abpe::Result<()> {
    let c = |re, im| Complex64::new(re, im);
    let dir = std::env::temp_dir();

    let phi = PhiField::Piecewise { min: c(-0.5, -0.5), max: c(0.5, 0.5), inside: 1e6, outside: 0.0 };
    let scheme = run_scheme(&phi, c(0.1, 0.1), 2, 3, (c(-3.0, -3.0), c(3.0, 3.0)))?;
    let path = dir.join("coloring.svg");
    std::fs::write(&path, coloring_svg(&scheme))?;
    println!("wrote {}", path.display());

    let mu = PlanarMeasure::positive(vec![MeasureComponent::disk("d", c(0.0, 0.0), 1.0, 1.0)], 8)?;
    let scan = scan_abpe(&mu, &FunctionBasis::monomials(c(0.0, 0.0), 20), &ScanConfig::new(c(-1.5, -1.5), c(1.5, 1.5), 1.0 / 16.0))?;
    let path = dir.join("scan.svg");
    std::fs::write(&path, scan_svg(&scan))?;
    println!("wrote {}", path.display());
    Ok(())
}
