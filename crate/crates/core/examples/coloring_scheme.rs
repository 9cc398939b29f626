//! Runs the coloring scheme for a vanishing density (green floods out at
//! once) and for a large constant (red and yellow rings close in).

use abpe::coloring::{run_scheme, PhiField};
use abpe::Complex64;

fn main() -> abpe::Result<()> {
    let a = Complex64::new(0.1, 0.1);
    let window = (Complex64::new(-4.0, -4.0), Complex64::new(4.0, 4.0));
    for (name, phi) in [("phi = 0", PhiField::Constant(0.0)), ("phi = 1e6", PhiField::Constant(1e6))] {
        let scheme = run_scheme(&phi, a, 2, 3, window)?;
        println!("{name}: seed {:?}, unbounded green path: {}", scheme.seed, scheme.terminated_with_unbounded_green);
        for g in &scheme.generations {
            println!(
                "  generation {}: {} yellow, {} green, {} red",
                g.generation,
                g.yellow.len(),
                g.green.len(),
                g.red.len()
            );
        }
    }
    Ok(())
}
