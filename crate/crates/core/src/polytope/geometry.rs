//! Coordinates and halfspaces for a realized polytope, generic over the
//! coordinate field.

use serde::{Deserialize, Serialize};

use super::combinatorial::CombinatorialPolytope;
use crate::error::PolytopeError;
use crate::scalar::Scalar;

pub type Point<S> = Vec<S>;

/// `normal · x <= offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace<S> {
    pub normal: Vec<S>,
    pub offset: S,
}

impl<S: Scalar> Halfspace<S> {
    pub fn new(normal: Vec<S>, offset: S) -> Self {
        Self { normal, offset }
    }

    /// `offset - normal · x`; nonnegative inside.
    pub fn slack(&self, x: &[S]) -> S {
        self.offset.clone() - dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[S]) -> bool {
        !(self.slack(x) < -S::tolerance())
    }

    pub fn is_tight(&self, x: &[S]) -> bool {
        self.slack(x).approx_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Realization<S> {
    pub coords: Vec<Point<S>>,
    pub halfspaces: Vec<Halfspace<S>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationReport {
    /// `(vertex, facet)` pairs where the vertex violates the facet inequality.
    pub outside: Vec<(usize, usize)>,
    /// `(vertex, facet)` pairs where tightness disagrees with incidence.
    pub incidence_mismatch: Vec<(usize, usize)>,
}

impl RealizationReport {
    pub fn is_valid(&self) -> bool {
        self.outside.is_empty() && self.incidence_mismatch.is_empty()
    }
}

impl<S: Scalar> Realization<S> {
    pub fn dim(&self) -> usize {
        self.coords.first().map_or(0, |c| c.len())
    }

    pub fn validate(&self, p: &CombinatorialPolytope) -> RealizationReport {
        let mut report = RealizationReport::default();
        for (v, x) in self.coords.iter().enumerate() {
            for (f, h) in self.halfspaces.iter().enumerate() {
                if !h.contains(x) {
                    report.outside.push((v, f));
                }
                let incident = p.vertex_facets(v).binary_search(&f).is_ok();
                if incident != h.is_tight(x) {
                    report.incidence_mismatch.push((v, f));
                }
            }
        }
        report
    }

    pub fn contains(&self, x: &[S]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    /// Strictly inside every facet inequality (beyond tolerance).
    pub fn contains_strictly(&self, x: &[S]) -> bool {
        self.halfspaces.iter().all(|h| h.slack(x) > S::tolerance())
    }

    pub fn centroid(&self) -> Point<S> {
        centroid(&self.coords)
    }

    /// Axis-aligned bounding box `(lower, upper)`.
    pub fn bounding_box(&self) -> (Point<S>, Point<S>) {
        let n = self.dim();
        let mut lo = self.coords[0].clone();
        let mut hi = self.coords[0].clone();
        for x in &self.coords {
            for i in 0..n {
                if x[i] < lo[i] {
                    lo[i] = x[i].clone();
                }
                if x[i] > hi[i] {
                    hi[i] = x[i].clone();
                }
            }
        }
        (lo, hi)
    }

    /// Builds facet halfspaces from vertex coordinates: each facet's
    /// hyperplane passes through its vertices, oriented away from the
    /// centroid.
    pub fn from_coords(p: &CombinatorialPolytope, coords: Vec<Point<S>>) -> Result<Self, PolytopeError> {
        let n = p.dim();
        if coords.len() != p.num_vertices() || coords.iter().any(|c| c.len() != n) {
            return Err(PolytopeError::Malformed("coordinate count or dimension mismatch".into()));
        }
        let center = centroid(&coords);
        let mut halfspaces = Vec::with_capacity(p.num_facets());
        for f in 0..p.num_facets() {
            let pts: Vec<Point<S>> = p.facet_vertices(f).into_iter().map(|v| coords[v].clone()).collect();
            halfspaces
                .push(hyperplane_through(&pts, &center).ok_or_else(|| {
                    PolytopeError::Degenerate(format!("facet {f} vertices do not span a hyperplane"))
                })?);
        }
        Ok(Self { coords, halfspaces })
    }

    pub fn to_f64(&self) -> Realization<f64> {
        Realization {
            coords: self.coords.iter().map(|c| c.iter().map(Scalar::real).collect()).collect(),
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace::new(h.normal.iter().map(Scalar::real).collect(), h.offset.real()))
                .collect(),
        }
    }

    pub fn convert<T: Scalar>(&self) -> Realization<T> {
        let c = |x: &S| T::from_real(x.real());
        Realization {
            coords: self.coords.iter().map(|p| p.iter().map(c).collect()).collect(),
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace::new(h.normal.iter().map(c).collect(), c(&h.offset)))
                .collect(),
        }
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Point<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Point<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn scale<S: Scalar>(a: &[S], t: &S) -> Point<S> {
    a.iter().map(|x| x.clone() * t.clone()).collect()
}

pub fn norm2<S: Scalar>(a: &[S]) -> S {
    dot(a, a)
}

pub fn centroid<S: Scalar>(pts: &[Point<S>]) -> Point<S> {
    let n = pts.first().map_or(0, |p| p.len());
    let mut acc = vec![S::zero(); n];
    for p in pts {
        for i in 0..n {
            acc[i] = acc[i].clone() + p[i].clone();
        }
    }
    let count = S::from_ratio(pts.len() as i64, 1);
    acc.into_iter().map(|x| x / count.clone()).collect()
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting. Returns `None` when the matrix is singular (within tolerance).
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = b.len();
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, r)| {
            let mut row = row.clone();
            row.push(r.clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal))?;
        if m[piv][col].abs() <= S::tolerance() * S::from_ratio(1, 1000) || m[piv][col].is_zero() {
            return None;
        }
        m.swap(col, piv);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone() / m[col][col].clone();
                for c in col..=n {
                    let delta = factor.clone() * m[col][c].clone();
                    m[r][c] = m[r][c].clone() - delta;
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n].clone() / m[i][i].clone()).collect())
}

/// Rank of a set of row vectors.
pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let piv = (r..m.len())
            .max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap_or(std::cmp::Ordering::Equal));
        let Some(piv) = piv else { break };
        if m[piv][c].abs() <= S::tolerance() {
            continue;
        }
        m.swap(r, piv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone() / m[r][c].clone();
                for j in c..cols {
                    let delta = factor.clone() * m[r][j].clone();
                    m[i][j] = m[i][j].clone() - delta;
                }
            }
        }
        r += 1;
    }
    r
}

/// Affine rank of a point set (0 for a single point).
pub fn affine_rank<S: Scalar>(pts: &[Point<S>]) -> usize {
    if pts.len() < 2 {
        return 0;
    }
    let diffs: Vec<Point<S>> = pts[1..].iter().map(|p| sub(p, &pts[0])).collect();
    rank(&diffs)
}

/// Gram determinant of the given vectors (squared volume of the spanned
/// parallelotope).
pub fn gram_determinant<S: Scalar>(vectors: &[Point<S>]) -> S {
    let k = vectors.len();
    let mut g: Vec<Vec<S>> = (0..k).map(|i| (0..k).map(|j| dot(&vectors[i], &vectors[j])).collect()).collect();
    let mut det = S::one();
    for c in 0..k {
        let piv = (c..k).find(|&r| !g[r][c].is_zero());
        let Some(piv) = piv else { return S::zero() };
        if piv != c {
            g.swap(c, piv);
            det = -det;
        }
        det = det * g[c][c].clone();
        for r in c + 1..k {
            let factor = g[r][c].clone() / g[c][c].clone();
            for j in c..k {
                let delta = factor.clone() * g[c][j].clone();
                g[r][j] = g[r][j].clone() - delta;
            }
        }
    }
    det
}

/// Hyperplane through `pts` (which must span a hyperplane), oriented so that
/// `interior` lies strictly on the negative side.
pub fn hyperplane_through<S: Scalar>(pts: &[Point<S>], interior: &[S]) -> Option<Halfspace<S>> {
    let n = interior.len();
    let base = pts.first()?;
    let diffs: Vec<Point<S>> = pts[1..].iter().map(|p| sub(p, base)).collect();
    let normal = null_vector(&diffs, n)?;
    let mut h = Halfspace::new(normal.clone(), dot(&normal, base));
    let s = h.slack(interior);
    if s.approx_zero() {
        return None;
    }
    if s < S::zero() {
        h = Halfspace::new(normal.iter().map(|x| -x.clone()).collect(), -h.offset);
    }
    Some(h)
}

/// A nonzero vector orthogonal to every row, when the rows span exactly an
/// `(n-1)`-dimensional space.
fn null_vector<S: Scalar>(rows: &[Point<S>], n: usize) -> Option<Point<S>> {
    // reduced row echelon form, then read off the single free column
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m.len() {
            break;
        }
        let piv = (r..m.len())
            .max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap_or(std::cmp::Ordering::Equal))?;
        if m[piv][c].abs() <= S::tolerance() {
            continue;
        }
        m.swap(r, piv);
        let p = m[r][c].clone();
        for j in 0..n {
            m[r][j] = m[r][j].clone() / p.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..n {
                    let delta = factor.clone() * m[r][j].clone();
                    m[i][j] = m[i][j].clone() - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() + 1 != n {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut v = vec![S::zero(); n];
    v[free] = S::one();
    for (row, &c) in pivots.iter().enumerate() {
        v[c] = -m[row][free].clone();
    }
    Some(v)
}
