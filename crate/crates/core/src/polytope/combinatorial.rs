use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::bitset::BitSet;
use crate::error::PolytopeError;

/// A convex polytope described by its vertex–facet incidence.
///
/// Simplicity is not enforced at construction so that general polytopes
/// (pyramids, cross-polytopes) can be represented; operations that need a
/// simple polytope check it and fail with [`PolytopeError::NotSimple`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialPolytope {
    dim: usize,
    facet_names: Vec<String>,
    vertex_facets: Vec<Vec<usize>>,
    facet_vertices: Vec<BitSet>,
}

/// A face, identified by its vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face {
    /// Every facet containing the face, ascending.
    pub facets: Vec<usize>,
    pub vertices: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicityReport {
    /// `(vertex, number of incident facets)` for every violating vertex.
    pub violations: Vec<(usize, usize)>,
}

impl SimplicityReport {
    pub fn is_simple(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Symmetric facet adjacency: `F_i ~ F_j` iff they share a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetAdjacency {
    neighbors: Vec<Vec<usize>>,
}

impl FacetAdjacency {
    pub fn neighbors(&self, facet: usize) -> &[usize] {
        &self.neighbors[facet]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors[a].binary_search(&b).is_ok()
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }
}

impl CombinatorialPolytope {
    pub fn new(dim: usize, facet_names: Vec<String>, vertex_facets: Vec<Vec<usize>>) -> Result<Self, PolytopeError> {
        if dim == 0 {
            return Err(PolytopeError::Malformed("dimension must be at least 1".into()));
        }
        let m = facet_names.len();
        let nv = vertex_facets.len();
        if nv == 0 {
            return Err(PolytopeError::Malformed("no vertices".into()));
        }
        let mut normalized = Vec::with_capacity(nv);
        for (v, fs) in vertex_facets.into_iter().enumerate() {
            let mut sorted = fs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != fs.len() {
                return Err(PolytopeError::Malformed(format!("vertex {v} lists a facet more than once")));
            }
            if let Some(&bad) = sorted.iter().find(|&&f| f >= m) {
                return Err(PolytopeError::Malformed(format!(
                    "vertex {v} references facet {bad} but there are {m} facets"
                )));
            }
            normalized.push(sorted);
        }
        let mut facet_vertices = vec![BitSet::new(nv); m];
        for (v, fs) in normalized.iter().enumerate() {
            for &f in fs {
                facet_vertices[f].insert(v);
            }
        }
        for (f, vs) in facet_vertices.iter().enumerate() {
            if vs.is_empty() {
                return Err(PolytopeError::Malformed(format!("facet {f} contains no vertex")));
            }
        }
        let mut seen = BTreeMap::new();
        for (f, vs) in facet_vertices.iter().enumerate() {
            if let Some(g) = seen.insert(vs.clone(), f) {
                return Err(PolytopeError::Malformed(format!("facets {g} and {f} have the same vertex set")));
            }
        }
        Ok(Self { dim, facet_names, vertex_facets: normalized, facet_vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_facets(&self) -> usize {
        self.facet_names.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_facets.len()
    }

    pub fn facet_names(&self) -> &[String] {
        &self.facet_names
    }

    /// Facets containing vertex `v`, ascending.
    pub fn vertex_facets(&self, v: usize) -> &[usize] {
        &self.vertex_facets[v]
    }

    pub fn all_vertex_facets(&self) -> &[Vec<usize>] {
        &self.vertex_facets
    }

    pub fn facet_vertex_set(&self, f: usize) -> &BitSet {
        &self.facet_vertices[f]
    }

    pub fn facet_vertices(&self, f: usize) -> Vec<usize> {
        self.facet_vertices[f].to_vec()
    }

    /// Vertices lying on every facet of `facets` (all vertices when empty).
    pub fn common_vertices(&self, facets: &[usize]) -> BitSet {
        let mut acc = BitSet::full(self.num_vertices());
        for &f in facets {
            acc.intersect_with(&self.facet_vertices[f]);
        }
        acc
    }

    /// True iff the facets in `facets` have a common vertex.
    pub fn facets_meet(&self, facets: &[usize]) -> bool {
        !self.common_vertices(facets).is_empty()
    }

    pub fn validate_simple(&self) -> SimplicityReport {
        let violations = self
            .vertex_facets
            .iter()
            .enumerate()
            .filter(|(_, fs)| fs.len() != self.dim)
            .map(|(v, fs)| (v, fs.len()))
            .collect();
        SimplicityReport { violations }
    }

    pub fn is_simple(&self) -> bool {
        self.validate_simple().is_simple()
    }

    pub(crate) fn require_simple(&self) -> Result<(), PolytopeError> {
        let report = self.validate_simple();
        if report.is_simple() {
            Ok(())
        } else {
            Err(PolytopeError::NotSimple(report.violations.iter().map(|x| x.0).collect()))
        }
    }

    pub fn facet_adjacency(&self) -> Result<FacetAdjacency, PolytopeError> {
        self.require_simple()?;
        let m = self.num_facets();
        let mut neighbors = vec![BTreeSet::new(); m];
        for fs in &self.vertex_facets {
            for &a in fs {
                for &b in fs {
                    if a != b {
                        neighbors[a].insert(b);
                    }
                }
            }
        }
        Ok(FacetAdjacency { neighbors: neighbors.into_iter().map(|s| s.into_iter().collect()).collect() })
    }

    /// Neighbours of `v` along edges (vertices sharing `n - 1` facets).
    pub fn vertex_neighbors(&self, v: usize) -> Result<Vec<usize>, PolytopeError> {
        self.require_simple()?;
        if v >= self.num_vertices() {
            return Err(PolytopeError::NoSuchVertex(v));
        }
        let mine = &self.vertex_facets[v];
        Ok((0..self.num_vertices())
            .filter(|&w| w != v)
            .filter(|&w| {
                let shared = self.vertex_facets[w].iter().filter(|f| mine.binary_search(f).is_ok()).count();
                shared + 1 == self.dim
            })
            .collect())
    }

    /// All `k`-faces of a simple polytope, each once, ordered by vertex set.
    ///
    /// `k = n` yields the polytope itself (empty facet set).
    pub fn enumerate_faces(&self, k: usize) -> Result<Vec<Face>, PolytopeError> {
        if k > self.dim {
            return Err(PolytopeError::DimensionOutOfRange { k, n: self.dim });
        }
        self.require_simple()?;
        let codim = self.dim - k;
        let mut by_vertices: BTreeMap<Vec<usize>, Face> = BTreeMap::new();
        for fs in &self.vertex_facets {
            for subset in subsets(fs, codim) {
                let verts = self.common_vertices(&subset).to_vec();
                by_vertices.entry(verts.clone()).or_insert_with(|| Face {
                    facets: self.facets_containing(&verts),
                    vertices: verts,
                    dim: k,
                });
            }
        }
        Ok(by_vertices.into_values().collect())
    }

    /// Every facet that contains all of `vertices`.
    pub fn facets_containing(&self, vertices: &[usize]) -> Vec<usize> {
        (0..self.num_facets()).filter(|&f| vertices.iter().all(|&v| self.facet_vertices[f].contains(v))).collect()
    }

    /// The face spanned by the given facets, if their intersection is nonempty.
    pub fn face_of_facets(&self, facets: &[usize]) -> Option<Face> {
        let verts = self.common_vertices(facets).to_vec();
        if verts.is_empty() {
            return None;
        }
        let all = self.facets_containing(&verts);
        let dim = self.face_dim_of(&verts, &all);
        Some(Face { facets: all, vertices: verts, dim })
    }

    fn face_dim_of(&self, vertices: &[usize], facets: &[usize]) -> usize {
        if self.is_simple() {
            self.dim - facets.len()
        } else {
            // height in the face lattice
            self.face_lattice().into_iter().find(|f| f.vertices == vertices).map(|f| f.dim).unwrap_or(0)
        }
    }

    /// Checks that `face` is a genuine face of this polytope.
    pub fn check_face(&self, face: &Face) -> Result<(), PolytopeError> {
        let verts = self.common_vertices(&face.facets).to_vec();
        let ok = !verts.is_empty()
            && verts == face.vertices
            && self.facets_containing(&verts) == face.facets
            && (!self.is_simple() || face.dim + face.facets.len() == self.dim);
        if ok {
            Ok(())
        } else {
            Err(PolytopeError::NotAFace(face.facets.clone()))
        }
    }

    /// All proper nonempty faces of an arbitrary polytope with dimensions
    /// computed as heights in the face lattice, sorted by (dim, vertices).
    pub fn face_lattice(&self) -> Vec<Face> {
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut frontier: Vec<BitSet> = self.facet_vertices.clone();
        for fv in &frontier {
            sets.insert(fv.to_vec());
        }
        while let Some(a) = frontier.pop() {
            for fv in &self.facet_vertices {
                let c = a.intersection(fv);
                if !c.is_empty() && sets.insert(c.to_vec()) {
                    frontier.push(c);
                }
            }
        }
        for v in 0..self.num_vertices() {
            sets.insert(vec![v]);
        }
        let mut by_size: Vec<Vec<usize>> = sets.into_iter().collect();
        by_size.sort_by_key(|s| s.len());
        let mut dims: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for s in &by_size {
            let d = by_size
                .iter()
                .filter(|t| t.len() < s.len() && t.iter().all(|x| s.binary_search(x).is_ok()))
                .map(|t| dims[t] + 1)
                .max()
                .unwrap_or(0);
            dims.insert(s.clone(), d);
        }
        let mut faces: Vec<Face> = dims
            .into_iter()
            .map(|(verts, dim)| Face { facets: self.facets_containing(&verts), vertices: verts, dim })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
        faces
    }
}

/// All `k`-element subsets of a sorted slice, in lexicographic order.
pub(crate) fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
