//! Grid subdivision of a realized polytope into convex cells.
//!
//! Cells are the full-dimensional pieces `box ∩ P` of a regular grid over a
//! bounding box. Grid planes are shared between neighboring boxes, so the
//! cells form a face-to-face complex: two cells meet exactly in a common
//! face, and every point of a cell's closure that is a vertex of the complex
//! is a vertex of every cell containing it.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::PolytopeError;
use crate::polytope::combinatorial::subsets;
use crate::polytope::geometry::{affine_rank, centroid, solve, Halfspace, Point, Realization};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Cell<S> {
    /// Grid box index, one entry per axis.
    pub grid: Vec<usize>,
    /// Point ids of the cell's vertices, ascending.
    pub vertices: Vec<usize>,
    /// Polytope facets the closed cell touches, ascending.
    pub facets: Vec<usize>,
    /// True when the whole box lies in the polytope.
    pub whole_box: bool,
    pub centroid: Point<S>,
}

#[derive(Clone, Debug)]
pub struct CellComplex<S> {
    dim: usize,
    resolution: usize,
    lo: Point<S>,
    hi: Point<S>,
    num_facets: usize,
    cells: Vec<Cell<S>>,
    points: Vec<Point<S>>,
    /// Facets whose hyperplane contains each point.
    point_facets: Vec<Vec<usize>>,
    point_cells: Vec<Vec<usize>>,
    walls: Vec<Vec<usize>>,
    by_grid: HashMap<Vec<usize>, usize>,
}

/// Default grid resolution for a dimension.
pub fn default_resolution(n: usize) -> usize {
    if n <= 3 {
        16
    } else {
        8
    }
}

struct RawCell<S> {
    grid: Vec<usize>,
    vertices: Vec<Point<S>>,
    whole_box: bool,
}

impl<S: Scalar> CellComplex<S> {
    /// Grid over the polytope's bounding box.
    pub fn build(r: &Realization<S>, resolution: usize) -> Result<Self, PolytopeError> {
        let (lo, hi) = r.bounding_box();
        Self::build_in_box(r, lo, hi, resolution)
    }

    /// Grid over an explicit box, which must contain the polytope.
    pub fn build_in_box(
        r: &Realization<S>,
        lo: Point<S>,
        hi: Point<S>,
        resolution: usize,
    ) -> Result<Self, PolytopeError> {
        let n = r.dim();
        if resolution == 0 {
            return Err(PolytopeError::Degenerate("grid resolution must be positive".into()));
        }
        if (0..n).any(|a| !(hi[a] > lo[a])) {
            return Err(PolytopeError::Degenerate("empty bounding box".into()));
        }
        let total = resolution.pow(n as u32);
        let plane = |a: usize, i: usize| -> S {
            lo[a].clone() + (hi[a].clone() - lo[a].clone()) * S::from_ratio(i as i64, resolution as i64)
        };
        let raw: Vec<Option<RawCell<S>>> = (0..total)
            .into_par_iter()
            .map(|flat| {
                let mut grid = Vec::with_capacity(n);
                let mut rest = flat;
                for _ in 0..n {
                    grid.push(rest % resolution);
                    rest /= resolution;
                }
                grid.reverse();
                let box_lo: Vec<S> = (0..n).map(|a| plane(a, grid[a])).collect();
                let box_hi: Vec<S> = (0..n).map(|a| plane(a, grid[a] + 1)).collect();
                clip_box(r, &box_lo, &box_hi).map(|(vertices, whole_box)| RawCell { grid, vertices, whole_box })
            })
            .collect();

        let scale: Vec<f64> = (0..n).map(|a| (1u64 << 24) as f64 / (hi[a].real() - lo[a].real())).collect();
        let mut points: Vec<Point<S>> = Vec::new();
        let mut index: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        let mut cells = Vec::new();
        let mut by_grid = HashMap::new();
        for rc in raw.into_iter().flatten() {
            let mut ids = Vec::with_capacity(rc.vertices.len());
            for x in &rc.vertices {
                ids.push(intern(x, &scale, &mut points, &mut index));
            }
            ids.sort_unstable();
            ids.dedup();
            let c = centroid(&rc.vertices);
            by_grid.insert(rc.grid.clone(), cells.len());
            cells.push(Cell { grid: rc.grid, vertices: ids, facets: Vec::new(), whole_box: rc.whole_box, centroid: c });
        }
        let point_facets: Vec<Vec<usize>> = points
            .par_iter()
            .map(|x| (0..r.halfspaces.len()).filter(|&f| r.halfspaces[f].is_tight(x)).collect())
            .collect();
        let mut point_cells = vec![Vec::new(); points.len()];
        for (ci, cell) in cells.iter_mut().enumerate() {
            let mut fs: Vec<usize> = cell.vertices.iter().flat_map(|&p| point_facets[p].iter().copied()).collect();
            fs.sort_unstable();
            fs.dedup();
            cell.facets = fs;
            for &p in &cell.vertices {
                point_cells[p].push(ci);
            }
        }
        let mut complex = Self {
            dim: n,
            resolution,
            lo,
            hi,
            num_facets: r.halfspaces.len(),
            cells,
            points,
            point_facets,
            point_cells,
            walls: Vec::new(),
            by_grid,
        };
        complex.walls = complex.compute_walls();
        Ok(complex)
    }

    fn compute_walls(&self) -> Vec<Vec<usize>> {
        let n = self.dim;
        let mut walls = vec![Vec::new(); self.cells.len()];
        for (a_id, a) in self.cells.iter().enumerate() {
            for axis in 0..n {
                let mut g = a.grid.clone();
                g[axis] += 1;
                let Some(&b_id) = self.by_grid.get(&g) else { continue };
                let b = &self.cells[b_id];
                let shared = if a.whole_box && b.whole_box {
                    true
                } else {
                    // the common face is the set of vertices both cells have
                    let common: Vec<Point<S>> = a
                        .vertices
                        .iter()
                        .filter(|p| b.vertices.binary_search(p).is_ok())
                        .map(|&p| self.points[p].clone())
                        .collect();
                    common.len() >= n && affine_rank(&common) == n - 1
                };
                if shared {
                    walls[a_id].push(b_id);
                    walls[b_id].push(a_id);
                }
            }
        }
        for w in &mut walls {
            w.sort_unstable();
        }
        walls
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn bounds(&self) -> (&[S], &[S]) {
        (&self.lo, &self.hi)
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_facets(&self) -> usize {
        self.num_facets
    }

    pub fn cells(&self) -> &[Cell<S>] {
        &self.cells
    }

    pub fn cell(&self, id: usize) -> &Cell<S> {
        &self.cells[id]
    }

    pub fn cell_at(&self, grid: &[usize]) -> Option<usize> {
        self.by_grid.get(grid).copied()
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, id: usize) -> &Point<S> {
        &self.points[id]
    }

    pub fn point_facets(&self, id: usize) -> &[usize] {
        &self.point_facets[id]
    }

    /// Cells whose closure contains the point.
    pub fn point_cells(&self, id: usize) -> &[usize] {
        &self.point_cells[id]
    }

    /// Cells sharing an `(n-1)`-dimensional wall with `id`.
    pub fn wall_neighbors(&self, id: usize) -> &[usize] {
        &self.walls[id]
    }

    /// Cells whose closure meets the closure of `id` (excluding `id`).
    pub fn closed_neighbors(&self, id: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.cells[id]
            .vertices
            .iter()
            .flat_map(|&p| self.point_cells[p].iter().copied())
            .filter(|&c| c != id)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Vertices of the face `cell ∩ K`, where `K` is the intersection of the
    /// given facets.
    pub fn face_vertices(&self, cell: usize, facets: &[usize]) -> Vec<usize> {
        self.cells[cell]
            .vertices
            .iter()
            .copied()
            .filter(|&p| facets.iter().all(|f| self.point_facets[p].binary_search(f).is_ok()))
            .collect()
    }

    /// Cells containing every listed point, i.e. containing the face they span.
    pub fn cells_containing(&self, points: &[usize]) -> Vec<usize> {
        let Some((&first, rest)) = points.split_first() else { return Vec::new() };
        self.point_cells[first]
            .iter()
            .copied()
            .filter(|&c| rest.iter().all(|p| self.cells[c].vertices.binary_search(p).is_ok()))
            .collect()
    }
}

/// Snaps a point to an existing one within tolerance, or adds it.
fn intern<S: Scalar>(
    x: &Point<S>,
    scale: &[f64],
    points: &mut Vec<Point<S>>,
    index: &mut HashMap<Vec<i64>, Vec<usize>>,
) -> usize {
    let key: Vec<i64> = x.iter().zip(scale).map(|(c, s)| (c.real() * s).round() as i64).collect();
    let n = key.len();
    for offset in 0..3usize.pow(n as u32) {
        let mut probe = key.clone();
        let mut o = offset;
        for k in probe.iter_mut() {
            *k += (o % 3) as i64 - 1;
            o /= 3;
        }
        if let Some(ids) = index.get(&probe) {
            for &id in ids {
                if points[id].iter().zip(x).all(|(a, b)| a.approx_eq(b)) {
                    return id;
                }
            }
        }
    }
    points.push(x.clone());
    index.entry(key).or_default().push(points.len() - 1);
    points.len() - 1
}

/// Vertices of `box ∩ P` when it is full-dimensional, plus whether the box
/// lies entirely inside `P`.
fn clip_box<S: Scalar>(r: &Realization<S>, lo: &[S], hi: &[S]) -> Option<(Vec<Point<S>>, bool)> {
    let n = lo.len();
    let corners: Vec<Point<S>> = (0..1usize << n)
        .map(|b| (0..n).map(|a| if b >> a & 1 == 0 { lo[a].clone() } else { hi[a].clone() }).collect())
        .collect();
    let mut cutting: Vec<&Halfspace<S>> = Vec::new();
    for h in &r.halfspaces {
        let slacks: Vec<S> = corners.iter().map(|c| h.slack(c)).collect();
        if slacks.iter().all(|s| s.approx_le(&S::zero())) {
            // box lies on or beyond the hyperplane
            return None;
        }
        if slacks.iter().any(|s| *s < -S::tolerance()) {
            cutting.push(h);
        }
    }
    if cutting.is_empty() {
        return Some((corners, true));
    }
    let mut planes: Vec<Halfspace<S>> = Vec::with_capacity(2 * n + cutting.len());
    for a in 0..n {
        let mut e = vec![S::zero(); n];
        e[a] = S::one();
        planes.push(Halfspace::new(e.clone(), hi[a].clone()));
        planes.push(Halfspace::new(e.into_iter().map(|x| -x).collect(), -lo[a].clone()));
    }
    planes.extend(cutting.into_iter().cloned());
    let ids: Vec<usize> = (0..planes.len()).collect();
    let mut vertices: Vec<Point<S>> = Vec::new();
    for subset in subsets(&ids, n) {
        let a: Vec<Vec<S>> = subset.iter().map(|&i| planes[i].normal.clone()).collect();
        let b: Vec<S> = subset.iter().map(|&i| planes[i].offset.clone()).collect();
        let Some(x) = solve(&a, &b) else { continue };
        if !planes.iter().all(|h| h.contains(&x)) || !r.contains(&x) {
            continue;
        }
        if !vertices.iter().any(|v| v.iter().zip(&x).all(|(p, q)| p.approx_eq(q))) {
            vertices.push(x);
        }
    }
    if vertices.len() <= n || affine_rank(&vertices) < n {
        return None;
    }
    Some((vertices, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::builders;
    use num_rational::BigRational;

    #[test]
    fn cube_grid_is_all_boxes() {
        let b = builders::cube::<f64>(2);
        let c = CellComplex::build(&b.realization, 4).unwrap();
        assert_eq!(c.num_cells(), 16);
        assert_eq!(c.num_points(), 25);
        assert!(c.cells().iter().all(|cell| cell.whole_box));
        // corner cell touches two edges, interior cell none
        assert_eq!(c.cell(c.cell_at(&[0, 0]).unwrap()).facets, vec![0, 1]);
        assert!(c.cell(c.cell_at(&[1, 2]).unwrap()).facets.is_empty());
        assert_eq!(c.wall_neighbors(c.cell_at(&[1, 1]).unwrap()).len(), 4);
        assert_eq!(c.closed_neighbors(c.cell_at(&[1, 1]).unwrap()).len(), 8);
    }

    #[test]
    fn simplex_grid_clips_diagonal() {
        let b = builders::simplex::<f64>(2);
        let c = CellComplex::build(&b.realization, 4).unwrap();
        // six boxes below the diagonal, four halved by it
        let triangles = c.cells().iter().filter(|cell| !cell.whole_box).count();
        assert_eq!(triangles, 4);
        assert_eq!(c.num_cells(), 10);
        for cell in c.cells().iter().filter(|cell| !cell.whole_box) {
            assert_eq!(cell.vertices.len(), 3);
            assert!(cell.facets.contains(&2));
        }
    }

    #[test]
    fn exact_and_float_complexes_agree() {
        let bf = builders::truncate_vertices(&builders::cube::<f64>(3), &[0], None).unwrap();
        let bq = builders::truncate_vertices(&builders::cube::<BigRational>(3), &[0], None).unwrap();
        let cf = CellComplex::build(&bf.realization, 4).unwrap();
        let cq = CellComplex::build(&bq.realization, 4).unwrap();
        assert_eq!(cf.num_cells(), cq.num_cells());
        assert_eq!(cf.num_points(), cq.num_points());
        for (a, b) in cf.cells().iter().zip(cq.cells()) {
            assert_eq!(a.grid, b.grid);
            assert_eq!(a.facets, b.facets);
        }
    }

    #[test]
    fn walls_are_symmetric_and_vertices_shared() {
        let b = builders::polygon::<f64>(6);
        let c = CellComplex::build(&b.realization, 8).unwrap();
        for id in 0..c.num_cells() {
            for &nb in c.wall_neighbors(id) {
                assert!(c.wall_neighbors(nb).contains(&id));
            }
            for &p in &c.cell(id).vertices {
                assert!(c.point_cells(p).contains(&id));
            }
        }
        // every edge of the hexagon is touched
        for f in 0..6 {
            assert!(c.cells().iter().any(|cell| cell.facets.contains(&f)));
        }
    }
}
