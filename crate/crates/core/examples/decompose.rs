//! Splits a measure on two disks and a segment into the part where
//! polynomials are dense and the parts carried by abpe components.

use abpe::abpe::{decompose, FunctionBasis, KPiece, ScanConfig};
use abpe::cli::scene::parse_scene;
use abpe::Complex64;

const SCENE: &str = "
window: -3.5-1.5i 3.5+1.5i
measure: disk label d1 center -2 radius 1 density 1
measure: disk label d2 center 2 radius 1 density 1
measure: segment label seg from -0.5 to 0.5 density 1
";

fn main() -> abpe::Result<()> {
    let c = |re, im| Complex64::new(re, im);
    let scene = parse_scene(SCENE)?;
    let mu = scene.measure()?;
    let k = [
        KPiece::Disk { center: c(-2.0, 0.0), radius: 1.0 },
        KPiece::Disk { center: c(2.0, 0.0), radius: 1.0 },
        KPiece::Segment { a: c(-0.5, 0.0), b: c(0.5, 0.0) },
    ];
    let (lo, hi) = scene.window()?;
    let d = decompose(&mu, &k, &FunctionBasis::monomials(c(0.0, 0.0), 30), &ScanConfig::new(lo, hi, 1.0 / 16.0))?;
    println!("Delta_0 = {:?}", d.delta0);
    for p in &d.parts {
        println!(
            "Delta_{} = {:?}: U of connectivity {} in a piece of connectivity {:?}, closure holds Delta: {}",
            p.index, p.labels, p.region.connectivity, p.k_connectivity, p.closure_contains_delta
        );
    }
    for (a, b, overlap, singular) in &d.harmonic_singularity {
        println!("omega_{a} vs omega_{b}: overlap {overlap:.2e}, mutually singular {singular}");
    }
    Ok(())
}
