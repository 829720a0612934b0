//! Voronoi boards: one convex cell per site, clipped to the polytope.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::HexError;
use crate::polytope::builders::BuiltPolytope;
use crate::polytope::combinatorial::subsets;
use crate::polytope::geometry::{
    centroid, dot, gram_determinant, norm2, rank, solve, sub, Halfspace, Point, Realization,
};
use crate::polytope::{Coloring, CombinatorialPolytope};
use crate::scalar::Scalar;

/// Walls whose relative measure falls below this are not adjacencies.
pub const WALL_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct HexCell<S> {
    pub site: Point<S>,
    pub vertices: Vec<Point<S>>,
    /// Tight constraints per vertex: facet `f` is `f`, the bisector with
    /// site `j` is `m + j`.
    tight: Vec<Vec<usize>>,
    /// Facets the closed cell touches, ascending.
    pub facets: Vec<usize>,
    /// Cells sharing an `(n-1)`-dimensional wall, ascending.
    pub neighbors: Vec<usize>,
}

impl<S> HexCell<S> {
    pub fn tight(&self, vertex: usize) -> &[usize] {
        &self.tight[vertex]
    }
}

/// Each player's target: connect `anchor` to any facet of `others`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Target {
    pub player: usize,
    pub anchor: usize,
    pub others: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Board<S> {
    polytope: CombinatorialPolytope,
    realization: Realization<S>,
    coloring: Coloring,
    vertex: usize,
    targets: Vec<Target>,
    cells: Vec<HexCell<S>>,
}

impl<S: Scalar> Board<S> {
    /// Board for `n` players on an `n`-colored polytope, anchored at
    /// `vertex`. Sites must be distinct interior points.
    pub fn new(
        built: &BuiltPolytope<S>,
        coloring: Coloring,
        vertex: usize,
        sites: Vec<Point<S>>,
    ) -> Result<Self, HexError> {
        let p = &built.polytope;
        let r = &built.realization;
        let n = p.dim();
        coloring.validate(p)?;
        if coloring.num_colors() != n {
            return Err(HexError::InvalidBoard(format!("needs an {n}-coloring, got {} colors", coloring.num_colors())));
        }
        if vertex >= p.num_vertices() {
            return Err(HexError::InvalidBoard(format!("vertex {vertex} does not exist")));
        }
        let at = p.vertex_facets(vertex);
        let mut targets = Vec::with_capacity(n);
        for player in 0..n {
            let anchors: Vec<usize> = at.iter().copied().filter(|&f| coloring.color(f) == player).collect();
            let [anchor] = anchors[..] else {
                return Err(HexError::InvalidBoard(format!("vertex {vertex} is not on one facet of color {player}")));
            };
            let others: Vec<usize> = coloring.class(player).into_iter().filter(|&f| f != anchor).collect();
            if others.is_empty() {
                return Err(HexError::InvalidBoard(format!("color {player} has a single facet")));
            }
            targets.push(Target { player, anchor, others });
        }
        if sites.is_empty() {
            return Err(HexError::InvalidBoard("no sites".into()));
        }
        for (i, s) in sites.iter().enumerate() {
            if s.len() != n || !r.contains_strictly(s) {
                return Err(HexError::InvalidBoard(format!("site {i} is not interior")));
            }
            if let Some(j) = sites[..i].iter().position(|t| t.iter().zip(s).all(|(a, b)| a.approx_eq(b))) {
                return Err(HexError::InvalidBoard(format!("sites {j} and {i} coincide")));
            }
        }

        let m = p.num_facets();
        let mut cells: Vec<HexCell<S>> =
            (0..sites.len()).into_par_iter().map(|i| voronoi_cell(r, &sites, i)).collect::<Result<_, _>>()?;

        let (lo, hi) = r.bounding_box();
        let diam = norm2(&sub(&hi, &lo)).real().sqrt();
        let threshold = (WALL_TOLERANCE * diam.powi(n as i32 - 1)).powi(2);
        for i in 0..cells.len() {
            for j in i + 1..cells.len() {
                let wall: Vec<Point<S>> = cells[i]
                    .tight
                    .iter()
                    .zip(&cells[i].vertices)
                    .filter(|(t, _)| t.binary_search(&(m + j)).is_ok())
                    .map(|(_, x)| x.clone())
                    .collect();
                if wall_measure2(&wall, n) > threshold {
                    cells[i].neighbors.push(j);
                    cells[j].neighbors.push(i);
                }
            }
        }
        Ok(Self { polytope: p.clone(), realization: r.clone(), coloring, vertex, targets, cells })
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn players(&self) -> usize {
        self.dim()
    }

    pub fn polytope(&self) -> &CombinatorialPolytope {
        &self.polytope
    }

    pub fn realization(&self) -> &Realization<S> {
        &self.realization
    }

    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }

    pub fn vertex(&self) -> usize {
        self.vertex
    }

    pub fn targets(&self) -> &[Target] {
        &self.targets
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[HexCell<S>] {
        &self.cells
    }

    pub fn cell(&self, id: usize) -> &HexCell<S> {
        &self.cells[id]
    }

    /// Index of the site nearest to `x`, smallest index on ties.
    pub fn nearest_site(&self, x: &[S]) -> usize {
        let d = |i: usize| norm2(&sub(x, &self.cells[i].site));
        (1..self.cells.len()).fold(0, |best, i| if d(i) < d(best) { i } else { best })
    }

    /// Outline of a cell for drawing: the polygon in the plane, or the
    /// wireframe of a solid cell under an oblique projection.
    pub fn outline(&self, id: usize) -> Outline {
        let cell = &self.cells[id];
        let pts: Vec<Vec<f64>> = cell.vertices.iter().map(|x| x.iter().map(Scalar::real).collect()).collect();
        match self.dim() {
            2 => {
                let c = centroid(&pts);
                let mut order: Vec<usize> = (0..pts.len()).collect();
                let angle = |i: usize| (pts[i][1] - c[1]).atan2(pts[i][0] - c[0]);
                order.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
                Outline::Polygon { points: order.into_iter().map(|i| [pts[i][0], pts[i][1]]).collect() }
            }
            _ => {
                let project = |x: &[f64]| {
                    let z = x.get(2).copied().unwrap_or(0.0);
                    [x[0] + 0.35 * z, x[1] + 0.35 * z]
                };
                let mut edges = Vec::new();
                for a in 0..pts.len() {
                    for b in a + 1..pts.len() {
                        let common: Vec<usize> =
                            cell.tight[a].iter().copied().filter(|t| cell.tight[b].binary_search(t).is_ok()).collect();
                        let normals: Vec<Vec<S>> = common.iter().map(|&t| self.constraint(id, t).normal).collect();
                        if rank(&normals) + 1 == self.dim() {
                            edges.push([project(&pts[a]), project(&pts[b])]);
                        }
                    }
                }
                Outline::Wireframe { edges }
            }
        }
    }

    fn constraint(&self, cell: usize, t: usize) -> Halfspace<S> {
        let m = self.polytope.num_facets();
        if t < m {
            self.realization.halfspaces[t].clone()
        } else {
            bisector(&self.cells[cell].site, &self.cells[t - m].site)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outline {
    Polygon { points: Vec<[f64; 2]> },
    Wireframe { edges: Vec<[[f64; 2]; 2]> },
}

/// Points at least as close to `a` as to `b`.
fn bisector<S: Scalar>(a: &[S], b: &[S]) -> Halfspace<S> {
    let normal = sub(b, a);
    let offset = (norm2(b) - norm2(a)) / S::from_ratio(2, 1);
    Halfspace::new(normal, offset)
}

fn voronoi_cell<S: Scalar>(r: &Realization<S>, sites: &[Point<S>], i: usize) -> Result<HexCell<S>, HexError> {
    let n = r.dim();
    let m = r.halfspaces.len();
    let mut constraints: Vec<(usize, Halfspace<S>)> = r.halfspaces.iter().cloned().enumerate().collect();
    for (j, s) in sites.iter().enumerate() {
        if j != i {
            constraints.push((m + j, bisector(&sites[i], s)));
        }
    }
    let ids: Vec<usize> = (0..constraints.len()).collect();
    let mut vertices: Vec<Point<S>> = Vec::new();
    let mut tight: Vec<Vec<usize>> = Vec::new();
    for subset in subsets(&ids, n) {
        let rows: Vec<Vec<S>> = subset.iter().map(|&k| constraints[k].1.normal.clone()).collect();
        let rhs: Vec<S> = subset.iter().map(|&k| constraints[k].1.offset.clone()).collect();
        let Some(x) = solve(&rows, &rhs) else { continue };
        if !constraints.iter().all(|(_, h)| h.slack(&x) >= -S::tolerance()) {
            continue;
        }
        if vertices.iter().any(|v| v.iter().zip(&x).all(|(a, b)| a.approx_eq(b))) {
            continue;
        }
        let mut t: Vec<usize> = constraints.iter().filter(|(_, h)| h.is_tight(&x)).map(|(k, _)| *k).collect();
        t.sort_unstable();
        vertices.push(x);
        tight.push(t);
    }
    if vertices.len() <= n {
        return Err(HexError::InvalidBoard(format!("cell {i} is degenerate")));
    }
    let mut facets: Vec<usize> = tight.iter().flatten().copied().filter(|&k| k < m).collect();
    facets.sort_unstable();
    facets.dedup();
    Ok(HexCell { site: sites[i].clone(), vertices, tight, facets, neighbors: Vec::new() })
}

/// Squared `(n-1)`-volume of a greedily chosen spanning parallelotope of
/// the wall points; zero when they do not span a hyperplane.
fn wall_measure2<S: Scalar>(wall: &[Point<S>], n: usize) -> f64 {
    if wall.len() < n {
        return 0.0;
    }
    let base = &wall[0];
    let mut chosen: Vec<Point<S>> = Vec::new();
    for _ in 0..n - 1 {
        let best = wall[1..]
            .iter()
            .map(|x| {
                let mut trial = chosen.clone();
                trial.push(sub(x, base));
                (gram_determinant(&trial).real(), sub(x, base))
            })
            .max_by(|a, b| a.0.total_cmp(&b.0));
        match best {
            Some((g, v)) if g > 0.0 => chosen.push(v),
            _ => return 0.0,
        }
    }
    gram_determinant(&chosen).real()
}

/// `k` distinct interior points drawn uniformly from the polytope.
pub fn random_sites<S: Scalar>(r: &Realization<S>, k: usize, seed: u64) -> Vec<Point<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = r.bounding_box();
    let n = lo.len();
    let diam = norm2(&sub(&hi, &lo)).real().sqrt();
    let margin = 1e-6 * diam;
    let mut out: Vec<Point<S>> = Vec::with_capacity(k);
    while out.len() < k {
        let x: Point<S> = (0..n)
            .map(|a| {
                let t: f64 = rng.gen();
                S::from_real(lo[a].real() + t * (hi[a].real() - lo[a].real()))
            })
            .collect();
        let inside = r.halfspaces.iter().all(|h| {
            let scale = dot(&h.normal, &h.normal).real().sqrt();
            h.slack(&x).real() > margin * scale
        });
        if inside && !out.iter().any(|y| norm2(&sub(y, &x)).real() < margin * margin) {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::builders;

    #[test]
    fn single_site_fills_the_polytope() {
        let b = builders::polygon::<f64>(6);
        let board = Board::new(&b, b.coloring.clone().unwrap(), 0, vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(board.cell(0).vertices.len(), 6);
        assert_eq!(board.cell(0).facets, (0..6).collect::<Vec<_>>());
        assert!(board.cell(0).neighbors.is_empty());
    }

    #[test]
    fn four_symmetric_sites_on_the_square() {
        let b = builders::cube::<f64>(2);
        let sites = vec![vec![0.25, 0.25], vec![0.75, 0.25], vec![0.25, 0.75], vec![0.75, 0.75]];
        let board = Board::new(&b, b.coloring.clone().unwrap(), 0, sites).unwrap();
        for c in board.cells() {
            assert_eq!(c.facets.len(), 2);
            assert_eq!(c.neighbors.len(), 2);
        }
        // diagonal cells meet at a point only
        assert!(!board.cell(0).neighbors.contains(&3));
    }

    #[test]
    fn hexagon_targets() {
        let b = builders::polygon::<f64>(6);
        let sites = random_sites(&b.realization, 20, 1);
        let board = Board::new(&b, b.coloring.clone().unwrap(), 0, sites).unwrap();
        let t = board.targets();
        assert_eq!(t[0], Target { player: 0, anchor: 0, others: vec![2, 4] });
        assert_eq!(t[1], Target { player: 1, anchor: 5, others: vec![1, 3] });
    }

    #[test]
    fn rejects_bad_sites() {
        let b = builders::cube::<f64>(2);
        let h = b.coloring.clone().unwrap();
        assert!(Board::new(&b, h.clone(), 0, vec![vec![0.5, 0.5], vec![0.5, 0.5]]).is_err());
        assert!(Board::new(&b, h.clone(), 0, vec![vec![1.5, 0.5]]).is_err());
        assert!(Board::new(&b, h, 0, vec![]).is_err());
    }
}
