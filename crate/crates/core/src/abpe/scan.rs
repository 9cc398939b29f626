use std::collections::VecDeque;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{EvaluationModel, FunctionBasis};
use crate::error::{Error, Result};
use crate::measure::PlanarMeasure;

/// Grid of a scan: cell centers `min + (i + 1/2, j + 1/2) h` inside the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanConfig {
    pub window: (Complex64, Complex64),
    /// Cell side `h`.
    pub resolution: f64,
}

impl ScanConfig {
    pub fn new(min: Complex64, max: Complex64, resolution: f64) -> Self {
        ScanConfig {
            window: (min, max),
            resolution,
        }
    }

    fn dims(&self) -> Result<(usize, usize)> {
        let (min, max) = self.window;
        let h = self.resolution;
        let ok = [min.re, min.im, max.re, max.im, h].iter().all(|v| v.is_finite());
        // Negated comparisons also reject NaN.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !ok || !(h > 0.0) || !(max.re > min.re && max.im > min.im) {
            return Err(Error::invalid(format!("bad scan window [{min}, {max}] at resolution {h}")));
        }
        let nx = ((max.re - min.re) / h).round() as usize;
        let ny = ((max.im - min.im) / h).round() as usize;
        if nx == 0 || ny == 0 || nx * ny > 16_000_000 {
            return Err(Error::WindowTooSmall {
                operation: "scan_abpe",
                detail: format!("{nx} x {ny} cells; use between 1 and 16M cells"),
            });
        }
        Ok((nx, ny))
    }
}

/// A 4-connected set of grid cells with convergent evaluation profiles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanComponent {
    pub id: usize,
    /// `(i, j)` cell indices in row-major discovery order.
    pub cells: Vec<(usize, usize)>,
    pub area: f64,
    pub bbox: (Complex64, Complex64),
    pub centroid: Complex64,
    /// Bounded components of the complement, 8-connected.
    pub holes: usize,
    /// Number of boundary components, `holes + 1`.
    pub connectivity: usize,
    /// Largest extrapolated evaluation bound over the cells.
    pub max_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbpeScan {
    pub config: ScanConfig,
    pub nx: usize,
    pub ny: usize,
    /// `b_N` at the top degree per cell, row-major in `j` then `i`; infinite
    /// values serialize as null.
    pub bounds: Vec<f64>,
    pub convergent: Vec<bool>,
    /// Component id of each cell, if any.
    pub labels: Vec<Option<usize>>,
    pub components: Vec<ScanComponent>,
}

impl AbpeScan {
    pub fn center(&self, i: usize, j: usize) -> Complex64 {
        cell_center(&self.config, i, j)
    }

    /// Cell containing `z`, if inside the window.
    pub fn cell_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let (min, _) = self.config.window;
        let h = self.config.resolution;
        let fi = ((z.re - min.re) / h).floor();
        let fj = ((z.im - min.im) / h).floor();
        (fi >= 0.0 && fj >= 0.0 && (fi as usize) < self.nx && (fj as usize) < self.ny).then_some((fi as usize, fj as usize))
    }

    pub fn label(&self, i: usize, j: usize) -> Option<usize> {
        self.labels[j * self.nx + i]
    }

    /// Component whose closure, dilated by `margin` cells, contains `z`.
    pub fn component_near(&self, z: Complex64, margin: usize) -> Option<usize> {
        let all: Vec<usize> = (0..self.components.len()).collect();
        self.component_near_among(z, margin, &all)
    }

    /// [`AbpeScan::component_near`] restricted to the components `allowed`.
    pub fn component_near_among(&self, z: Complex64, margin: usize, allowed: &[usize]) -> Option<usize> {
        let (ci, cj) = self.cell_of(z)?;
        let m = margin as i64;
        let mut best: Option<(i64, usize)> = None;
        for dj in -m..=m {
            for di in -m..=m {
                let (i, j) = (ci as i64 + di, cj as i64 + dj);
                if i < 0 || j < 0 || i >= self.nx as i64 || j >= self.ny as i64 {
                    continue;
                }
                if let Some(l) = self.label(i as usize, j as usize).filter(|l| allowed.contains(l)) {
                    let d = di * di + dj * dj;
                    if best.is_none_or(|(bd, bl)| (d, l) < (bd, bl)) {
                        best = Some((d, l));
                    }
                }
            }
        }
        best.map(|(_, l)| l)
    }
}

fn cell_center(config: &ScanConfig, i: usize, j: usize) -> Complex64 {
    let h = config.resolution;
    config.window.0 + Complex64::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h)
}

/// Evaluation profiles on a grid, grouped into 4-connected components of
/// convergent cells.
pub fn scan_abpe(mu: &PlanarMeasure, basis: &FunctionBasis, config: &ScanConfig) -> Result<AbpeScan> {
    let (nx, ny) = config.dims()?;
    let model = EvaluationModel::new(basis, mu)?;
    let profiles: Vec<(f64, bool, f64)> = (0..nx * ny)
        .into_par_iter()
        .map(|n| {
            let p = model.profile(cell_center(config, n % nx, n / nx));
            (p.last(), !p.divergent, p.limit.unwrap_or(f64::INFINITY))
        })
        .collect();
    let bounds: Vec<f64> = profiles.iter().map(|p| p.0).collect();
    let convergent: Vec<bool> = profiles.iter().map(|p| p.1).collect();
    let mut labels: Vec<Option<usize>> = vec![None; nx * ny];
    let mut components = Vec::new();
    for start in 0..nx * ny {
        if !convergent[start] || labels[start].is_some() {
            continue;
        }
        let id = components.len();
        let mut cells = Vec::new();
        let mut queue = VecDeque::from([start]);
        labels[start] = Some(id);
        while let Some(n) = queue.pop_front() {
            let (i, j) = (n % nx, n / nx);
            cells.push((i, j));
            let mut push = |m: usize| {
                if convergent[m] && labels[m].is_none() {
                    labels[m] = Some(id);
                    queue.push_back(m);
                }
            };
            if i > 0 {
                push(n - 1);
            }
            if i + 1 < nx {
                push(n + 1);
            }
            if j > 0 {
                push(n - nx);
            }
            if j + 1 < ny {
                push(n + nx);
            }
        }
        cells.sort_by_key(|&(i, j)| (j, i));
        components.push(describe(config, id, cells, &profiles, nx));
    }
    Ok(AbpeScan {
        config: *config,
        nx,
        ny,
        bounds,
        convergent,
        labels,
        components,
    })
}

fn describe(config: &ScanConfig, id: usize, cells: Vec<(usize, usize)>, profiles: &[(f64, bool, f64)], nx: usize) -> ScanComponent {
    let h = config.resolution;
    let (mut i0, mut j0, mut i1, mut j1) = (usize::MAX, usize::MAX, 0, 0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut max_bound = 0.0f64;
    for &(i, j) in &cells {
        i0 = i0.min(i);
        j0 = j0.min(j);
        i1 = i1.max(i);
        j1 = j1.max(j);
        sum += cell_center(config, i, j);
        max_bound = max_bound.max(profiles[j * nx + i].2);
    }
    let holes = count_holes(&cells, (i0, j0, i1, j1));
    let min = config.window.0;
    ScanComponent {
        id,
        area: cells.len() as f64 * h * h,
        bbox: (
            min + Complex64::new(i0 as f64 * h, j0 as f64 * h),
            min + Complex64::new((i1 + 1) as f64 * h, (j1 + 1) as f64 * h),
        ),
        centroid: sum / cells.len() as f64,
        holes,
        connectivity: holes + 1,
        max_bound,
        cells,
    }
}

/// Bounded 8-connected components of the complement of `cells`.
fn count_holes(cells: &[(usize, usize)], (i0, j0, i1, j1): (usize, usize, usize, usize)) -> usize {
    let w = i1 - i0 + 3;
    let h = j1 - j0 + 3;
    let mut grid = vec![0u8; w * h];
    for &(i, j) in cells {
        grid[(j - j0 + 1) * w + (i - i0 + 1)] = 1;
    }
    let mut regions = 0;
    for start in 0..w * h {
        if grid[start] != 0 {
            continue;
        }
        regions += 1;
        grid[start] = 2;
        let mut stack = vec![start];
        while let Some(n) = stack.pop() {
            let (x, y) = ((n % w) as i64, (n / w) as i64);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let m = ny as usize * w + nx as usize;
                    if grid[m] == 0 {
                        grid[m] = 2;
                        stack.push(m);
                    }
                }
            }
        }
    }
    // The padded frame is one region; everything else is enclosed.
    regions - 1
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DensityVerdict {
    /// No abpe found on the scan grid; abpes below its resolution are not
    /// excluded.
    Dense { resolution: f64 },
    NotDense { witness: Vec<ScanComponent> },
}

/// Whether the basis span is dense in `L^2(mu)`, judged by the absence of
/// analytic bounded point evaluations on the scan grid.
pub fn density_test(mu: &PlanarMeasure, basis: &FunctionBasis, config: &ScanConfig) -> Result<DensityVerdict> {
    let scan = scan_abpe(mu, basis, config)?;
    Ok(if scan.components.is_empty() {
        DensityVerdict::Dense {
            resolution: config.resolution,
        }
    } else {
        DensityVerdict::NotDense {
            witness: scan.components,
        }
    })
}
