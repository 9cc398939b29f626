//! Dyadic squares, polynomially convex hulls and their boundary curves.

use abpe::geometry::{locate_square, polynomial_hull, polynomial_hull_boundary, SquareSet};
use abpe::Complex64;

fn main() -> abpe::Result<()> {
    let s = locate_square(Complex64::new(0.3, -0.2), 3);
    println!("square {:?}: corner {}, side {}", s, s.corner(), s.side());

    // A ring of squares: its hull fills the hole.
    let ring: Vec<(i64, i64)> = (0..4)
        .flat_map(|j| (0..4).map(move |i| (i, j)))
        .filter(|&(i, j)| i == 0 || j == 0 || i == 3 || j == 3)
        .collect();
    let set = SquareSet::from_cells(2, ring);
    let hull = polynomial_hull(&set)?;
    println!("ring of {} squares, hull of {}", set.len(), hull.len());
    let boundary = polynomial_hull_boundary(&set)?;
    println!("hull boundary: {} loop(s), {} edges", boundary.loops().len(), boundary.edge_count());
    for line in boundary.polylines() {
        println!("  {:?}", line.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>());
    }
    Ok(())
}
