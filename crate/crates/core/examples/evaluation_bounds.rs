//! Bounded point evaluations for polynomials: the Bergman kernel of the disk
//! (`1/sqrt(pi (1 - |l|^2)^2)`), the Szego kernel of the circle, and
//! divergence outside the support.

use abpe::abpe::{evaluation_bound, kernel_function, FunctionBasis};
use abpe::measure::{MeasureComponent, PlanarMeasure};
use abpe::Complex64;

fn main() -> abpe::Result<()> {
    let zero = Complex64::new(0.0, 0.0);
    let basis = FunctionBasis::monomials(zero, 30);
    let area = PlanarMeasure::positive(vec![MeasureComponent::disk("d", zero, 1.0, 1.0)], 8)?;
    let circle = PlanarMeasure::positive(vec![MeasureComponent::uniform_circle("c", zero, 1.0, 1.0)], 8)?;

    for l in [0.0, 0.5] {
        let p = evaluation_bound(Complex64::new(l, 0.0), &basis, &area, 2.0)?;
        let bergman = 1.0 / (std::f64::consts::PI.sqrt() * (1.0 - l * l));
        println!("area, l = {l}: b_30 = {:.6}, Bergman {:.6}", p.last(), bergman);
    }
    let p = evaluation_bound(Complex64::new(1.5, 0.0), &basis, &area, 2.0)?;
    println!("area, l = 1.5: b_30 = {:.3e}, divergent {}", p.last(), p.divergent);
    let p = evaluation_bound(zero, &basis, &circle, 2.0)?;
    println!("circle, l = 0: b_30 = {:.8}", p.last());

    let l = Complex64::new(0.3, 0.2);
    let k = kernel_function(l, &basis, &area)?;
    let f = |z: Complex64| z * z + 1.0;
    let reproduced = area.integrate(|z| f(z) * k.eval(&basis, z).conj())?;
    println!("<f, k_l> = {:.10}, f(l) = {:.10}", reproduced, f(l));
    Ok(())
}
