use std::collections::{HashMap, HashSet};

use num_complex::Complex64;
use rayon::prelude::*;

use super::{is_light_square, PhiField};
use crate::error::{Error, Result};
use crate::geometry::{dyadic_side, fill_holes, locate_square, BarrierCurve, CellGrid, DyadicSquare, SquareSet, NEIGHBORS_4};

/// Colors and barriers produced by one generation.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationState {
    pub generation: u32,
    pub yellow: SquareSet,
    pub green: SquareSet,
    pub red: SquareSet,
    /// Boundary of the hull of the previous barrier and the green squares;
    /// absent when the generation ended with an unbounded green path.
    pub gamma: Option<BarrierCurve>,
    /// Boundary of the hull of everything colored so far.
    pub barrier: Option<BarrierCurve>,
    /// Squares enclosed by `barrier`.
    pub hull: SquareSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColoredScheme {
    pub a: Complex64,
    pub k: u32,
    pub window: (Complex64, Complex64),
    pub seed: DyadicSquare,
    /// `Gamma_k`, the boundary of the seed square.
    pub seed_barrier: BarrierCurve,
    pub generations: Vec<GenerationState>,
    pub terminated_with_unbounded_green: bool,
}

impl ColoredScheme {
    pub fn last_generation(&self) -> u32 {
        self.generations.last().map_or(self.k, |g| g.generation)
    }

    /// Largest distance from `a` to a point of a colored closed square; infinite
    /// once an unbounded green path exists.
    pub fn reach(&self) -> f64 {
        if self.terminated_with_unbounded_green {
            return f64::INFINITY;
        }
        let mut best = self.seed.farthest_distance(self.a);
        for g in &self.generations {
            for set in [&g.yellow, &g.green, &g.red] {
                for &(i, j) in set.cells() {
                    best = best.max(DyadicSquare::new(set.generation(), i, j).farthest_distance(self.a));
                }
            }
        }
        best
    }

    pub fn green_count(&self) -> usize {
        self.generations.iter().map(|g| g.green.len()).sum()
    }
}

/// Lattice box `(i0, j0, i1, j1)` of the generation-`n` squares inside the window.
fn window_box(window: (Complex64, Complex64), n: u32) -> (i64, i64, i64, i64) {
    let scale = (n as f64).exp2();
    (
        (window.0.re * scale).floor() as i64,
        (window.0.im * scale).floor() as i64,
        (window.1.re * scale).ceil() as i64 - 1,
        (window.1.im * scale).ceil() as i64 - 1,
    )
}

fn isqrt(v: i64) -> i64 {
    let mut r = (v as f64).sqrt() as i64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// Runs the coloring scheme for at most `max_generations` generations after `k`.
pub fn run_scheme(
    phi: &PhiField,
    a: Complex64,
    k: u32,
    max_generations: u32,
    window: (Complex64, Complex64),
) -> Result<ColoredScheme> {
    run_scheme_with(&|s: &DyadicSquare| is_light_square(phi, s), a, k, max_generations, window)
}

/// [`run_scheme`] with an arbitrary lightness predicate.
pub(crate) fn run_scheme_with(
    light: &(dyn Fn(&DyadicSquare) -> Result<bool> + Sync),
    a: Complex64,
    k: u32,
    max_generations: u32,
    window: (Complex64, Complex64),
) -> Result<ColoredScheme> {
    if max_generations == 0 {
        return Err(Error::invalid("max_generations must be at least 1"));
    }
    let (wmin, wmax) = window;
    let finite = [wmin.re, wmin.im, wmax.re, wmax.im, a.re, a.im].iter().all(|v| v.is_finite());
    if !finite || !(wmax.re > wmin.re && wmax.im > wmin.im) {
        return Err(Error::invalid(format!("bad window [{wmin}, {wmax}]")));
    }
    let seed = locate_square(a, k);
    {
        let (i0, j0, i1, j1) = window_box(window, k);
        if seed.i <= i0 || seed.i >= i1 || seed.j <= j0 || seed.j >= j1 {
            return Err(Error::WindowTooSmall {
                operation: "run_scheme",
                detail: format!("seed square of {a} at generation {k} touches the window edge"),
            });
        }
    }
    let mut hull = SquareSet::from_cells(k, [(seed.i, seed.j)]);
    let seed_barrier = BarrierCurve::of_filled(&hull);
    let mut generations = Vec::new();
    let mut terminated = false;

    for n in k + 1..=k + max_generations {
        let inner = hull.refine();
        let wb = window_box(window, n);
        let in_window = |(i, j): (i64, i64)| i >= wb.0 && i <= wb.2 && j >= wb.1 && j <= wb.3;
        let at_edge = |(i, j): (i64, i64)| i == wb.0 || i == wb.2 || j == wb.1 || j == wb.3;

        // (i) light squares outside the barrier with a side on it.
        let mut seen: HashSet<(i64, i64)> = HashSet::new();
        let mut frontier: Vec<(i64, i64)> = Vec::new();
        for &(i, j) in inner.cells() {
            for (di, dj) in NEIGHBORS_4 {
                let c = (i + di, j + dj);
                if !inner.contains(c.0, c.1) && in_window(c) && seen.insert(c) {
                    frontier.push(c);
                }
            }
        }
        // (ii) closure under paths of light squares, level by level.
        let mut green: HashSet<(i64, i64)> = HashSet::new();
        let mut unbounded = false;
        while !frontier.is_empty() {
            frontier.sort_unstable();
            let verdicts: Vec<Result<bool>> = frontier
                .par_iter()
                .map(|&(i, j)| light(&DyadicSquare::new(n, i, j)))
                .collect();
            let mut next = Vec::new();
            for (&c, v) in frontier.iter().zip(verdicts) {
                if !v? {
                    continue;
                }
                green.insert(c);
                if at_edge(c) {
                    unbounded = true;
                }
                for (di, dj) in NEIGHBORS_4 {
                    let d = (c.0 + di, c.1 + dj);
                    if !inner.contains(d.0, d.1) && in_window(d) && seen.insert(d) {
                        next.push(d);
                    }
                }
            }
            if unbounded {
                break;
            }
            frontier = next;
        }
        if unbounded {
            // (iii) an unbounded green path: the scheme stops here.
            generations.push(GenerationState {
                generation: n,
                yellow: SquareSet::new(n),
                green: SquareSet::from_cells(n, green),
                red: SquareSet::new(n),
                gamma: None,
                barrier: None,
                hull: inner,
            });
            terminated = true;
            break;
        }

        let mut union: HashSet<(i64, i64)> = inner.cell_set().clone();
        union.extend(green.iter().copied());
        let filled = fill_holes(n, &union);
        let gamma = BarrierCurve::of_filled(&filled);

        // (iv)-(v) red and yellow rings on a dense grid.
        let reach = (n as i64) * (n as i64);
        let pad = reach + 3;
        let (bi0, bj0, bi1, bj1) = filled.bounding_box().expect("hull is nonempty");
        let mut grid = CellGrid::new(bi0 - pad, bj0 - pad, bi1 + pad, bj1 + pad);
        const FILLED: u8 = 1;
        const RED: u8 = 2;
        const YELLOW: u8 = 3;
        for &(i, j) in filled.cells() {
            grid.set(i, j, FILLED);
        }
        let mut red = Vec::new();
        for &(i, j) in filled.cells() {
            for (di, dj) in NEIGHBORS_4 {
                let c = (i + di, j + dj);
                if grid.get(c.0, c.1) == 0 {
                    grid.set(c.0, c.1, RED);
                    red.push(c);
                }
            }
        }
        red.sort_unstable();
        let r4 = reach * reach;
        let span = reach + 1;
        for &(i, j) in &red {
            for di in -span..=span {
                let dx = (di.abs() - 1).max(0);
                let rem = r4 - dx * dx;
                if rem < 0 {
                    continue;
                }
                let w = isqrt(rem) + 1;
                let row = i + di;
                for jj in j - w..=j + w {
                    if let Some(idx) = grid.index(row, jj) {
                        if grid.data[idx] == 0 {
                            grid.data[idx] = YELLOW;
                        }
                    }
                }
            }
        }
        let mut yellow = Vec::new();
        for (idx, &v) in grid.data.iter().enumerate() {
            if v == YELLOW {
                yellow.push(grid.cell(idx));
            }
        }
        for &c in red.iter().chain(&yellow) {
            if !in_window(c) || at_edge(c) {
                return Err(Error::WindowTooSmall {
                    operation: "run_scheme",
                    detail: format!(
                        "colored squares of generation {n} reach the window [{wmin}, {wmax}]; enlarge it beyond {:.4} around {a}",
                        colored_radius(a, n, &red, &yellow)
                    ),
                });
            }
        }

        // (vi) the new barrier.
        grid.flood_exterior(4);
        let new_hull: Vec<(i64, i64)> = grid
            .data
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 4)
            .map(|(idx, _)| grid.cell(idx))
            .collect();
        hull = SquareSet::from_cells(n, new_hull);
        let barrier = BarrierCurve::of_filled(&hull);
        generations.push(GenerationState {
            generation: n,
            yellow: SquareSet::from_cells(n, yellow),
            green: SquareSet::from_cells(n, green),
            red: SquareSet::from_cells(n, red),
            gamma: Some(gamma),
            barrier: Some(barrier.clone()),
            hull: hull.clone(),
        });
    }

    Ok(ColoredScheme {
        a,
        k,
        window,
        seed,
        seed_barrier,
        generations,
        terminated_with_unbounded_green: terminated,
    })
}

fn colored_radius(a: Complex64, n: u32, red: &[(i64, i64)], yellow: &[(i64, i64)]) -> f64 {
    let s = dyadic_side(n);
    red.iter()
        .chain(yellow)
        .map(|&(i, j)| DyadicSquare::new(n, i, j).farthest_distance(a))
        .fold(s, f64::max)
}

/// Cache of square verdicts shared across runs with the same predicate.
#[derive(Default)]
pub(crate) struct LightCache {
    map: std::sync::Mutex<HashMap<DyadicSquare, bool>>,
}

impl LightCache {
    pub fn get_or(&self, s: &DyadicSquare, f: impl FnOnce() -> Result<bool>) -> Result<bool> {
        if let Some(&v) = self.map.lock().expect("cache lock").get(s) {
            return Ok(v);
        }
        let v = f()?;
        self.map.lock().expect("cache lock").insert(*s, v);
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn window(h: f64) -> (Complex64, Complex64) {
        (c(-h, -h), c(h, h))
    }

    #[test]
    fn zero_density_terminates_at_once() {
        let s = run_scheme(&PhiField::Constant(0.0), c(0.0, 0.0), 1, 4, window(4.0)).unwrap();
        assert!(s.terminated_with_unbounded_green);
        assert_eq!(s.last_generation(), 2);
        assert_eq!(s.generations.len(), 1);
        assert!(s.reach().is_infinite());
    }

    #[test]
    fn heavy_density_builds_rings() {
        let phi = PhiField::Piecewise {
            min: c(-4.0, -4.0),
            max: c(4.0, 4.0),
            inside: 1e6,
            outside: 0.0,
        };
        let s = run_scheme(&phi, c(0.0, 0.0), 1, 1, window(8.0)).unwrap();
        let g = &s.generations[0];
        assert!(g.green.is_empty());
        assert_eq!(g.red.len(), 8);
        // gamma_2 is the seed boundary expressed at generation 2.
        let gamma = g.gamma.as_ref().unwrap();
        assert_eq!(gamma.edge_count(), 8);
        assert!(!s.terminated_with_unbounded_green);
    }

    #[test]
    fn window_too_small_is_reported() {
        let phi = PhiField::Constant(1e6);
        let r = run_scheme(&phi, c(0.0, 0.0), 1, 3, window(1.0));
        assert!(matches!(r, Err(Error::WindowTooSmall { .. })));
    }

    #[test]
    fn runs_are_deterministic() {
        let phi = PhiField::function(|z: Complex64| if z.norm() < 0.6 { 0.0 } else { 50.0 });
        let a = run_scheme(&phi, c(0.1, 0.05), 2, 3, window(8.0)).unwrap();
        let b = run_scheme(&phi, c(0.1, 0.05), 2, 3, window(8.0)).unwrap();
        assert_eq!(a, b);
        assert!(a.green_count() > 0);
    }
}
