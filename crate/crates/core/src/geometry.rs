//! Dyadic squares, square paths and polynomially convex hulls of square unions.
//!
//! Squares are stored with exact integer coordinates: a square of generation
//! `k` with lattice index `(i, j)` is `[i 2^-k, (i+1) 2^-k) x [j 2^-k, (j+1) 2^-k)`.
//! Floating point only appears when a square is rendered or integrated over.

use std::collections::{HashMap, HashSet, VecDeque};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// `2^-k` as an exact binary float.
pub fn dyadic_side(k: u32) -> f64 {
    (-(k as f64)).exp2()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DyadicSquare {
    pub k: u32,
    pub i: i64,
    pub j: i64,
}

impl DyadicSquare {
    pub fn new(k: u32, i: i64, j: i64) -> Self {
        DyadicSquare { k, i, j }
    }

    pub fn side(&self) -> f64 {
        dyadic_side(self.k)
    }

    pub fn area(&self) -> f64 {
        let s = self.side();
        s * s
    }

    /// Lower-left corner.
    pub fn corner(&self) -> Complex64 {
        let s = self.side();
        Complex64::new(self.i as f64 * s, self.j as f64 * s)
    }

    pub fn center(&self) -> Complex64 {
        let s = self.side();
        Complex64::new((self.i as f64 + 0.5) * s, (self.j as f64 + 0.5) * s)
    }

    pub fn closure_contains(&self, z: Complex64) -> bool {
        let c = self.corner();
        let s = self.side();
        z.re >= c.re && z.re <= c.re + s && z.im >= c.im && z.im <= c.im + s
    }

    pub fn children(&self) -> [DyadicSquare; 4] {
        let (k, i, j) = (self.k + 1, 2 * self.i, 2 * self.j);
        [
            DyadicSquare::new(k, i, j),
            DyadicSquare::new(k, i + 1, j),
            DyadicSquare::new(k, i, j + 1),
            DyadicSquare::new(k, i + 1, j + 1),
        ]
    }

    /// Squares of the same generation sharing a side with this one.
    pub fn edge_neighbors(&self) -> [DyadicSquare; 4] {
        let (k, i, j) = (self.k, self.i, self.j);
        [
            DyadicSquare::new(k, i + 1, j),
            DyadicSquare::new(k, i - 1, j),
            DyadicSquare::new(k, i, j + 1),
            DyadicSquare::new(k, i, j - 1),
        ]
    }

    /// Euclidean distance between the closed squares, in units of the side.
    ///
    /// Returned squared so that comparisons stay in exact integers.
    pub fn lattice_distance_sq(&self, other: &DyadicSquare) -> i64 {
        debug_assert_eq!(self.k, other.k);
        let dx = ((self.i - other.i).abs() - 1).max(0);
        let dy = ((self.j - other.j).abs() - 1).max(0);
        dx * dx + dy * dy
    }

    /// Largest distance from `z` to a point of the closed square.
    pub fn farthest_distance(&self, z: Complex64) -> f64 {
        let c = self.corner();
        let s = self.side();
        let dx = (z.re - c.re).abs().max((z.re - c.re - s).abs());
        let dy = (z.im - c.im).abs().max((z.im - c.im - s).abs());
        dx.hypot(dy)
    }
}

/// The square of generation `k` whose closure contains `z`.
///
/// Points on grid lines go to the square they are the lower/left corner or
/// edge of, i.e. squares are treated as half-open `[i, i+1) x [j, j+1)`.
pub fn locate_square(z: Complex64, k: u32) -> DyadicSquare {
    let scale = (k as f64).exp2();
    DyadicSquare::new(k, (z.re * scale).floor() as i64, (z.im * scale).floor() as i64)
}

/// A set of squares of one generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareSet {
    k: u32,
    cells: HashSet<(i64, i64)>,
}

impl SquareSet {
    pub fn new(k: u32) -> Self {
        SquareSet {
            k,
            cells: HashSet::new(),
        }
    }

    pub fn from_cells(k: u32, cells: impl IntoIterator<Item = (i64, i64)>) -> Self {
        SquareSet {
            k,
            cells: cells.into_iter().collect(),
        }
    }

    pub fn from_squares(squares: &[DyadicSquare]) -> Result<Self> {
        let first = squares
            .first()
            .ok_or_else(|| Error::invalid("empty square sequence"))?;
        if squares.iter().any(|s| s.k != first.k) {
            return Err(Error::invalid("squares of mixed generations"));
        }
        Ok(SquareSet::from_cells(first.k, squares.iter().map(|s| (s.i, s.j))))
    }

    pub fn generation(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn insert(&mut self, i: i64, j: i64) -> bool {
        self.cells.insert((i, j))
    }

    pub fn contains(&self, i: i64, j: i64) -> bool {
        self.cells.contains(&(i, j))
    }

    pub fn contains_square(&self, s: &DyadicSquare) -> bool {
        s.k == self.k && self.cells.contains(&(s.i, s.j))
    }

    pub(crate) fn cell_set(&self) -> &HashSet<(i64, i64)> {
        &self.cells
    }

    pub fn cells(&self) -> impl Iterator<Item = &(i64, i64)> {
        self.cells.iter()
    }

    /// Cells in lexicographic order; use this whenever output order matters.
    pub fn sorted_cells(&self) -> Vec<(i64, i64)> {
        let mut v: Vec<_> = self.cells.iter().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn squares(&self) -> Vec<DyadicSquare> {
        self.sorted_cells()
            .into_iter()
            .map(|(i, j)| DyadicSquare::new(self.k, i, j))
            .collect()
    }

    /// Same region expressed in the next generation.
    pub fn refine(&self) -> SquareSet {
        let mut out = SquareSet::new(self.k + 1);
        for &(i, j) in &self.cells {
            for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                out.cells.insert((2 * i + di, 2 * j + dj));
            }
        }
        out
    }

    pub fn bounding_box(&self) -> Option<(i64, i64, i64, i64)> {
        let mut it = self.cells.iter();
        let &(i, j) = it.next()?;
        let mut b = (i, j, i, j);
        for &(i, j) in it {
            b.0 = b.0.min(i);
            b.1 = b.1.min(j);
            b.2 = b.2.max(i);
            b.3 = b.3.max(j);
        }
        Some(b)
    }

    pub fn is_subset(&self, other: &SquareSet) -> bool {
        self.k == other.k && self.cells.iter().all(|c| other.cells.contains(c))
    }

    pub fn is_disjoint(&self, other: &SquareSet) -> bool {
        self.k != other.k || self.cells.iter().all(|c| !other.cells.contains(c))
    }

    /// Whether the union of the closed squares is connected (corner contact counts).
    pub fn closure_connected(&self) -> bool {
        connected(&self.cells, &NEIGHBORS_8)
    }

    /// Whether the interior of the union of the closed squares is connected.
    pub fn interior_connected(&self) -> bool {
        connected(&self.cells, &NEIGHBORS_4)
    }
}

pub(crate) const NEIGHBORS_4: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const NEIGHBORS_8: [(i64, i64); 8] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
];

fn connected(cells: &HashSet<(i64, i64)>, nbrs: &[(i64, i64)]) -> bool {
    let Some(&start) = cells.iter().next() else {
        return true;
    };
    let mut seen = HashSet::with_capacity(cells.len());
    let mut queue = VecDeque::from([start]);
    seen.insert(start);
    while let Some((i, j)) = queue.pop_front() {
        for &(di, dj) in nbrs {
            let n = (i + di, j + dj);
            if cells.contains(&n) && seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    seen.len() == cells.len()
}

/// Whether `seq` is a path of squares: the interior of the union of the
/// closures is connected. Order and repetition are irrelevant.
pub fn is_path_of_squares(seq: &[DyadicSquare]) -> Result<bool> {
    let set = SquareSet::from_squares(seq)?;
    Ok(set.interior_connected())
}

/// Dense cell grid over a lattice box, used for flood fills.
#[derive(Debug, Clone)]
pub(crate) struct CellGrid {
    pub i0: i64,
    pub j0: i64,
    pub w: usize,
    pub h: usize,
    pub data: Vec<u8>,
}

impl CellGrid {
    pub fn new(i0: i64, j0: i64, i1: i64, j1: i64) -> Self {
        let w = (i1 - i0 + 1).max(0) as usize;
        let h = (j1 - j0 + 1).max(0) as usize;
        CellGrid {
            i0,
            j0,
            w,
            h,
            data: vec![0; w * h],
        }
    }

    #[inline]
    pub fn index(&self, i: i64, j: i64) -> Option<usize> {
        let (x, y) = (i - self.i0, j - self.j0);
        if x < 0 || y < 0 || x as usize >= self.w || y as usize >= self.h {
            None
        } else {
            Some(y as usize * self.w + x as usize)
        }
    }

    #[inline]
    pub fn get(&self, i: i64, j: i64) -> u8 {
        self.index(i, j).map_or(0, |n| self.data[n])
    }

    #[inline]
    pub fn set(&mut self, i: i64, j: i64, v: u8) {
        if let Some(n) = self.index(i, j) {
            self.data[n] = v;
        }
    }

    #[inline]
    pub fn cell(&self, n: usize) -> (i64, i64) {
        (self.i0 + (n % self.w) as i64, self.j0 + (n / self.w) as i64)
    }

    /// Marks with `mark` every cell whose value is `0` and that is 4-connected
    /// to the border of the grid through zero cells.
    pub fn flood_exterior(&mut self, mark: u8) {
        let mut queue = VecDeque::new();
        for x in 0..self.w {
            for y in [0, self.h - 1] {
                let n = y * self.w + x;
                if self.data[n] == 0 {
                    self.data[n] = mark;
                    queue.push_back(n);
                }
            }
        }
        for y in 0..self.h {
            for x in [0, self.w - 1] {
                let n = y * self.w + x;
                if self.data[n] == 0 {
                    self.data[n] = mark;
                    queue.push_back(n);
                }
            }
        }
        while let Some(n) = queue.pop_front() {
            let (x, y) = (n % self.w, n / self.w);
            let mut visit = |m: usize| {
                if self.data[m] == 0 {
                    self.data[m] = mark;
                    queue.push_back(m);
                }
            };
            if x > 0 {
                visit(n - 1);
            }
            if x + 1 < self.w {
                visit(n + 1);
            }
            if y > 0 {
                visit(n - self.w);
            }
            if y + 1 < self.h {
                visit(n + self.w);
            }
        }
    }
}

/// Fills the bounded components of the complement of `cells`.
///
/// Works on the lattice box padded by two squares; complement cells that
/// cannot reach the pad are bounded components.
pub(crate) fn fill_holes(k: u32, cells: &HashSet<(i64, i64)>) -> SquareSet {
    let mut it = cells.iter();
    let Some(&(i, j)) = it.next() else {
        return SquareSet::new(k);
    };
    let mut b = (i, j, i, j);
    for &(i, j) in it {
        b = (b.0.min(i), b.1.min(j), b.2.max(i), b.3.max(j));
    }
    let mut grid = CellGrid::new(b.0 - 2, b.1 - 2, b.2 + 2, b.3 + 2);
    for &(i, j) in cells {
        grid.set(i, j, 1);
    }
    grid.flood_exterior(2);
    let filled = grid
        .data
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 2)
        .map(|(n, _)| grid.cell(n));
    SquareSet::from_cells(k, filled)
}

/// Union of the squares and all bounded components of its complement.
pub fn polynomial_hull(s: &SquareSet) -> Result<SquareSet> {
    if s.is_empty() {
        return Err(Error::invalid("empty square set"));
    }
    if !s.closure_connected() {
        return Err(Error::invalid("union of square closures is disconnected"));
    }
    Ok(fill_holes(s.k, &s.cells))
}

/// A unit lattice edge. `Horizontal(i, j)` joins `(i, j)` to `(i+1, j)`;
/// `Vertical(i, j)` joins `(i, j)` to `(i, j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LatticeEdge {
    Horizontal(i64, i64),
    Vertical(i64, i64),
}

/// Closed axis-parallel polygonal curve on the generation-`k` grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarrierCurve {
    k: u32,
    /// Vertex loops in lattice units, interior on the left. Each loop is
    /// closed implicitly (last vertex joins the first).
    loops: Vec<Vec<(i64, i64)>>,
    edges: HashSet<LatticeEdge>,
}

impl BarrierCurve {
    /// Boundary of a set of squares with no holes.
    pub(crate) fn of_filled(set: &SquareSet) -> BarrierCurve {
        let k = set.k;
        let has = |i: i64, j: i64| set.cells.contains(&(i, j));
        let mut directed: HashMap<(i64, i64), Vec<(i64, i64)>> = HashMap::new();
        let mut edges = HashSet::new();
        for &(i, j) in &set.cells {
            if !has(i, j - 1) {
                directed.entry((i, j)).or_default().push((i + 1, j));
                edges.insert(LatticeEdge::Horizontal(i, j));
            }
            if !has(i + 1, j) {
                directed.entry((i + 1, j)).or_default().push((i + 1, j + 1));
                edges.insert(LatticeEdge::Vertical(i + 1, j));
            }
            if !has(i, j + 1) {
                directed.entry((i + 1, j + 1)).or_default().push((i, j + 1));
                edges.insert(LatticeEdge::Horizontal(i, j + 1));
            }
            if !has(i - 1, j) {
                directed.entry((i, j + 1)).or_default().push((i, j));
                edges.insert(LatticeEdge::Vertical(i, j));
            }
        }
        for outs in directed.values_mut() {
            outs.sort_unstable();
        }
        let mut starts: Vec<_> = directed.keys().copied().collect();
        starts.sort_unstable();
        let mut loops = Vec::new();
        for start in starts {
            while directed.get(&start).is_some_and(|v| !v.is_empty()) {
                let mut lp = vec![start];
                let mut prev = start;
                let mut cur = directed.get_mut(&start).unwrap().remove(0);
                while cur != start {
                    lp.push(cur);
                    let outs = directed.get_mut(&cur).expect("boundary edges form closed loops");
                    let pick = if outs.len() == 1 {
                        0
                    } else {
                        // Pinch vertex: prefer the left turn.
                        let din = (cur.0 - prev.0, cur.1 - prev.1);
                        let left = (-din.1, din.0);
                        outs.iter()
                            .position(|o| (o.0 - cur.0, o.1 - cur.1) == left)
                            .unwrap_or(0)
                    };
                    let next = outs.remove(pick);
                    prev = cur;
                    cur = next;
                }
                loops.push(lp);
            }
        }
        BarrierCurve { k, loops, edges }
    }

    pub fn generation(&self) -> u32 {
        self.k
    }

    pub fn loops(&self) -> &[Vec<(i64, i64)>] {
        &self.loops
    }

    /// Number of unit lattice edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, e: &LatticeEdge) -> bool {
        self.edges.contains(e)
    }

    /// Whether one of the four sides of `s` (same generation) lies on the curve.
    pub fn has_side_of(&self, s: &DyadicSquare) -> bool {
        s.k == self.k
            && [
                LatticeEdge::Horizontal(s.i, s.j),
                LatticeEdge::Horizontal(s.i, s.j + 1),
                LatticeEdge::Vertical(s.i, s.j),
                LatticeEdge::Vertical(s.i + 1, s.j),
            ]
            .iter()
            .any(|e| self.edges.contains(e))
    }

    /// Loops with collinear vertices removed.
    pub fn corners(&self) -> Vec<Vec<(i64, i64)>> {
        self.loops
            .iter()
            .map(|lp| {
                let n = lp.len();
                (0..n)
                    .filter(|&t| {
                        let (a, b, c) = (lp[(t + n - 1) % n], lp[t], lp[(t + 1) % n]);
                        (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0) != 0
                    })
                    .map(|t| lp[t])
                    .collect()
            })
            .collect()
    }

    /// Loops as complex polylines (closed: first vertex repeated at the end).
    pub fn polylines(&self) -> Vec<Vec<Complex64>> {
        let s = dyadic_side(self.k);
        self.corners()
            .into_iter()
            .map(|lp| {
                let mut pts: Vec<Complex64> = lp
                    .iter()
                    .map(|&(i, j)| Complex64::new(i as f64 * s, j as f64 * s))
                    .collect();
                if let Some(&f) = pts.first() {
                    pts.push(f);
                }
                pts
            })
            .collect()
    }
}

/// Boundary of the polynomially convex hull of the union of the closed squares.
pub fn polynomial_hull_boundary(s: &SquareSet) -> Result<BarrierCurve> {
    let hull = polynomial_hull(s)?;
    Ok(BarrierCurve::of_filled(&hull))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn locate_examples() {
        let s = locate_square(c(0.3, 0.4), 1);
        assert_eq!((s.i, s.j), (0, 0));
        assert_eq!(s.side(), 0.5);
        assert_eq!(locate_square(c(0.0, 0.0), 0).corner(), c(0.0, 0.0));
        assert_eq!(locate_square(c(-0.25, -0.25), 2).corner(), c(-0.25, -0.25));
    }

    #[test]
    fn path_examples() {
        let a = DyadicSquare::new(3, 0, 0);
        assert!(is_path_of_squares(&[a, DyadicSquare::new(3, 1, 0)]).unwrap());
        assert!(!is_path_of_squares(&[a, DyadicSquare::new(3, 1, 1)]).unwrap());
        assert!(is_path_of_squares(&[a]).unwrap());
        assert!(is_path_of_squares(&[a, DyadicSquare::new(4, 1, 0)]).is_err());
        assert!(is_path_of_squares(&[]).is_err());
    }

    #[test]
    fn hull_single_square() {
        let s = SquareSet::from_cells(2, [(0, 0)]);
        let b = polynomial_hull_boundary(&s).unwrap();
        assert_eq!(b.edge_count(), 4);
        assert_eq!(b.loops().len(), 1);
    }

    #[test]
    fn hull_ring_fills_center() {
        let ring: Vec<_> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|&c| c != (1, 1))
            .collect();
        let s = SquareSet::from_cells(3, ring);
        let hull = polynomial_hull(&s).unwrap();
        assert!(hull.contains(1, 1));
        assert_eq!(hull.len(), 9);
        let b = polynomial_hull_boundary(&s).unwrap();
        assert_eq!(b.edge_count(), 12);
        assert_eq!(b.loops().len(), 1);
    }

    #[test]
    fn hull_block_corners() {
        let s = SquareSet::from_cells(1, [(0, 0), (1, 0), (0, 1), (1, 1)]);
        let b = polynomial_hull_boundary(&s).unwrap();
        let corners = b.corners();
        assert_eq!(corners.len(), 1);
        let mut cs = corners[0].clone();
        cs.sort_unstable();
        assert_eq!(cs, vec![(0, 0), (0, 2), (2, 0), (2, 2)]);
        // side 2 * 2^-1
        let poly = &b.polylines()[0];
        let width = poly.iter().map(|z| z.re).fold(f64::MIN, f64::max)
            - poly.iter().map(|z| z.re).fold(f64::MAX, f64::min);
        assert_eq!(width, 1.0);
    }

    #[test]
    fn hull_rejects_disconnected() {
        let s = SquareSet::from_cells(1, [(0, 0), (3, 0)]);
        assert!(matches!(polynomial_hull_boundary(&s), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn corner_touching_hull_is_connected() {
        let s = SquareSet::from_cells(1, [(0, 0), (1, 1)]);
        let b = polynomial_hull_boundary(&s).unwrap();
        assert_eq!(b.edge_count(), 8);
    }

    #[test]
    fn lattice_distance() {
        let a = DyadicSquare::new(2, 0, 0);
        assert_eq!(a.lattice_distance_sq(&DyadicSquare::new(2, 1, 0)), 0);
        assert_eq!(a.lattice_distance_sq(&DyadicSquare::new(2, 3, 0)), 4);
        assert_eq!(a.lattice_distance_sq(&DyadicSquare::new(2, 3, 3)), 8);
    }

    #[test]
    fn side_query_matches_adjacency() {
        let s = SquareSet::from_cells(2, [(0, 0), (1, 0)]);
        let b = polynomial_hull_boundary(&s).unwrap();
        assert!(b.has_side_of(&DyadicSquare::new(2, 2, 0)));
        assert!(b.has_side_of(&DyadicSquare::new(2, 0, 1)));
        assert!(!b.has_side_of(&DyadicSquare::new(2, 2, 1)));
    }
}
