//! A Vitushkin covering by 5/4-enlarged dyadic squares: the partition of
//! unity sums to one, and the covering sum decays like `2^-k / dist`.

use abpe::cauchy::build_cover;
use abpe::Complex64;

fn main() -> abpe::Result<()> {
    let cover = build_cover(3, Complex64::new(-1.0, -1.0), Complex64::new(1.0, 1.0))?;
    println!("{} squares of side {} (enlarged {})", cover.len(), cover.side(), cover.enlarged_side());
    for z in [Complex64::new(0.1, 0.2), Complex64::new(-0.55, 0.93), Complex64::new(0.0, 0.0)] {
        println!("z = {z}: {} members, partition sum {:.15}", cover.members_at(z).len(), cover.partition_sum(z));
    }
    let far: Vec<Complex64> = (0..200)
        .map(|j| Complex64::from_polar(1.5 + 0.02 * j as f64, 0.7 * j as f64))
        .collect();
    let report = cover.covering_sum_constant(&far);
    println!("covering sum constant {:.4} over {} points, worst at {:.4}", report.constant, report.samples, report.worst_point);
    Ok(())
}
