//! Witness searchers for the covering theorems.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use super::complex::CellComplex;
use super::instance::CoverInstance;
use super::witness::{verify_witness, Witness, WitnessContext};
use crate::error::CoverError;
use crate::polytope::builders::{total_truncation, BuiltPolytope};
use crate::polytope::combinatorial::binomial;
use crate::polytope::{Coloring, Face};
use crate::scalar::Scalar;

/// Successive halvings of the truncation depth tried by [`Verifier::general`].
const GENERAL_LEVELS: u32 = 6;

/// Total truncation of the polytope gridded over the same box.
struct Truncated<S> {
    built: BuiltPolytope<S>,
    complex: CellComplex<S>,
    coloring: Coloring,
    /// Cell of the original complex with the same grid index.
    parent: Vec<usize>,
}

/// A realized polytope, its grid complex and a coloring, with checkers for
/// covers of that complex.
pub struct Verifier<S> {
    built: BuiltPolytope<S>,
    coloring: Option<Coloring>,
    complex: CellComplex<S>,
    truncated: Mutex<HashMap<u32, Arc<Truncated<S>>>>,
}

impl<S: Scalar> Verifier<S> {
    /// Uses the builder's coloring, if any.
    pub fn new(built: BuiltPolytope<S>, resolution: usize) -> Result<Self, CoverError> {
        let complex = CellComplex::build(&built.realization, resolution)?;
        let coloring = built.coloring.clone();
        Ok(Self { built, coloring, complex, truncated: Mutex::new(HashMap::new()) })
    }

    pub fn with_coloring(mut self, h: Coloring) -> Result<Self, CoverError> {
        h.validate(&self.built.polytope)?;
        self.coloring = Some(h);
        Ok(self)
    }

    pub fn built(&self) -> &BuiltPolytope<S> {
        &self.built
    }

    pub fn complex(&self) -> &CellComplex<S> {
        &self.complex
    }

    pub fn coloring(&self) -> Option<&Coloring> {
        self.coloring.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.built.dim()
    }

    pub fn context<'a>(&'a self, sets: &'a CoverInstance) -> WitnessContext<'a, S> {
        WitnessContext {
            polytope: &self.built.polytope,
            realization: &self.built.realization,
            complex: &self.complex,
            sets,
            coloring: self.coloring.as_ref(),
        }
    }

    /// Independent re-check of a witness against this instance.
    pub fn verify(&self, sets: &CoverInstance, w: &Witness) -> Result<(), String> {
        verify_witness(&self.context(sets), w)
    }

    fn require_cover(&self, sets: &CoverInstance, limit: usize) -> Result<(), CoverError> {
        if !sets.is_cover() {
            return Err(CoverError::InvalidCover("sets do not cover the polytope".into()));
        }
        self.require_multiplicity(sets, limit)
    }

    fn require_multiplicity(&self, sets: &CoverInstance, limit: usize) -> Result<(), CoverError> {
        if let Some(p) = sets.violation(&self.complex, limit) {
            let labels: Vec<&str> =
                sets.labels_at_point(&self.complex, p).into_iter().map(|l| sets.labels()[l].as_str()).collect();
            return Err(CoverError::Hypothesis(format!(
                "multiplicity exceeds {limit}: point {:?} lies in {labels:?}",
                self.complex.point(p).iter().map(|x| x.real()).collect::<Vec<_>>()
            )));
        }
        Ok(())
    }

    fn n_coloring(&self) -> Result<&Coloring, CoverError> {
        let n = self.dim();
        self.built.polytope.require_simple()?;
        match &self.coloring {
            Some(h) if h.num_colors() == n => Ok(h),
            _ => Err(CoverError::Hypothesis(format!("needs a proper {n}-coloring"))),
        }
    }

    fn special_coloring(&self) -> Result<&Coloring, CoverError> {
        let n = self.dim();
        self.built.polytope.require_simple()?;
        let h = match &self.coloring {
            Some(h) if h.num_colors() == n + 1 => h,
            _ => return Err(CoverError::Hypothesis(format!("needs a proper {}-coloring", n + 1))),
        };
        for f in h.class(n) {
            if self.built.polytope.facet_vertex_set(f).len() != n {
                return Err(CoverError::Hypothesis(format!("facet {f} of color {n} is not a simplex")));
            }
        }
        Ok(h)
    }

    /// Some component of some set touches two facets of one color.
    pub fn lebesgue(&self, sets: &CoverInstance) -> Result<Option<Witness>, CoverError> {
        let h = self.n_coloring()?;
        self.require_cover(sets, self.dim())?;
        Ok(same_color_pairs(&self.complex, h, sets, None).next())
    }

    /// Some component touches facets of all `n + 1` colors.
    pub fn kkm(&self, sets: &CoverInstance) -> Result<Option<Witness>, CoverError> {
        let h = self.special_coloring()?;
        self.require_cover(sets, self.dim())?;
        let n = self.dim();
        for label in 0..sets.num_labels() {
            for component in sets.closed_components(&self.complex, label) {
                let mut first = vec![None; n + 1];
                for f in touched_facets(&self.complex, &component) {
                    first[h.color(f)].get_or_insert(f);
                }
                if first.iter().all(Option::is_some) {
                    let facets = first.into_iter().flatten().collect();
                    return Ok(Some(Witness::AllColors { label: sets.labels()[label].clone(), component, facets }));
                }
            }
        }
        Ok(None)
    }

    /// Some component touches at least `n + 1` facets.
    pub fn karasev(&self, sets: &CoverInstance) -> Result<Option<Witness>, CoverError> {
        self.built.polytope.require_simple()?;
        self.require_cover(sets, self.dim())?;
        for label in 0..sets.num_labels() {
            for component in sets.closed_components(&self.complex, label) {
                let facets = touched_facets(&self.complex, &component);
                if facets.len() > self.dim() {
                    return Ok(Some(Witness::ManyFacets { label: sets.labels()[label].clone(), component, facets }));
                }
            }
        }
        Ok(None)
    }

    /// Whether the complement component `z` meets the face.
    fn complement_touches(&self, family: &CoverInstance, z: &[usize], face: &Face) -> bool {
        z.iter().any(|&c| {
            let cell = self.complex.cell(c);
            if !face.facets.iter().all(|f| cell.facets.binary_search(f).is_ok()) {
                return false;
            }
            let g = self.complex.face_vertices(c, &face.facets);
            !g.is_empty() && self.complex.cells_containing(&g).iter().all(|&d| family.labels_of(d).is_empty())
        })
    }

    /// A component of the complement of a family of multiplicity at most
    /// `k` touching at least `2^{n-k}` `k`-faces of one color class; with a
    /// prescribed vertex, one of those faces must contain it.
    pub fn quantitative_lebesgue(
        &self,
        family: &CoverInstance,
        k: usize,
        vertex: Option<usize>,
    ) -> Result<Option<Witness>, CoverError> {
        let h = self.n_coloring()?;
        let p = &self.built.polytope;
        let n = self.dim();
        if k > n {
            return Err(CoverError::Hypothesis(format!("k = {k} exceeds the dimension")));
        }
        if let Some(v) = vertex {
            if v >= p.num_vertices() {
                return Err(crate::error::PolytopeError::NoSuchVertex(v).into());
            }
        }
        for label in 0..family.num_labels() {
            let facets = touched_facets(&self.complex, family.set(label));
            for (a, &f) in facets.iter().enumerate() {
                if let Some(&g) = facets[a + 1..].iter().find(|&&g| h.color(g) == h.color(f)) {
                    return Err(CoverError::Hypothesis(format!(
                        "{} touches facets {f} and {g} of color {}",
                        family.labels()[label],
                        h.color(f)
                    )));
                }
            }
        }
        self.require_multiplicity(family, k)?;

        let faces = if k == n { vec![whole_face(p)] } else { p.enumerate_faces(k)? };
        let mut classes: BTreeMap<Vec<usize>, Vec<&Face>> = BTreeMap::new();
        for face in &faces {
            let mut colors: Vec<usize> = face.facets.iter().map(|&f| h.color(f)).collect();
            colors.sort_unstable();
            classes.entry(colors).or_default().push(face);
        }
        let need = 1usize << (n - k);
        for z in family.complement_components(&self.complex) {
            let touched: Vec<&Face> = faces.iter().filter(|f| self.complement_touches(family, &z, f)).collect();
            for (colors, members) in &classes {
                let hit: Vec<Face> = members.iter().filter(|f| touched.contains(f)).map(|&f| f.clone()).collect();
                let has_vertex = vertex.is_none_or(|v| hit.iter().any(|f| f.vertices.binary_search(&v).is_ok()));
                if hit.len() >= need && has_vertex {
                    return Ok(Some(Witness::EssentialComponent { component: z, colors: colors.clone(), faces: hit }));
                }
            }
        }
        Ok(None)
    }

    /// A component of the complement of a family of multiplicity at most
    /// `k` touching every `k`-face of some simplex facet and at least
    /// `C(n, k)` further `k`-faces.
    pub fn quantitative_kkm(&self, family: &CoverInstance, k: usize) -> Result<Option<Witness>, CoverError> {
        let h = self.special_coloring()?;
        let p = &self.built.polytope;
        let n = self.dim();
        if k >= n {
            return Err(CoverError::Hypothesis(format!("k = {k} must be below the dimension")));
        }
        for label in 0..family.num_labels() {
            let mut colors: Vec<usize> =
                touched_facets(&self.complex, family.set(label)).iter().map(|&f| h.color(f)).collect();
            colors.sort_unstable();
            colors.dedup();
            if colors.len() == n + 1 {
                return Err(CoverError::Hypothesis(format!(
                    "{} touches facets of all {} colors",
                    family.labels()[label],
                    n + 1
                )));
            }
        }
        self.require_multiplicity(family, k)?;

        let faces = p.enumerate_faces(k)?;
        let simplices = h.class(n);
        let need = binomial(n, k);
        for w in family.complement_components(&self.complex) {
            let touched: Vec<&Face> = faces.iter().filter(|f| self.complement_touches(family, &w, f)).collect();
            for &t in &simplices {
                let skeleton: Vec<&Face> = faces.iter().filter(|f| f.facets.contains(&t)).collect();
                if !skeleton.iter().all(|f| touched.contains(f)) {
                    continue;
                }
                let outside: Vec<Face> =
                    touched.iter().filter(|f| !f.facets.contains(&t)).map(|&f| f.clone()).collect();
                if outside.len() >= need {
                    return Ok(Some(Witness::SimplexSkeleton {
                        component: w,
                        simplex_facet: t,
                        skeleton: skeleton.into_iter().cloned().collect(),
                        outside,
                    }));
                }
            }
        }
        Ok(None)
    }

    fn truncated(&self, level: u32) -> Result<Arc<Truncated<S>>, CoverError> {
        if let Some(t) = self.truncated.lock().expect("truncation cache").get(&level) {
            return Ok(t.clone());
        }
        let den = (self.complex.resolution() as i64).max(2) << level;
        let built = total_truncation(&self.built, Some(S::from_ratio(1, den)))?;
        let (lo, hi) = self.complex.bounds();
        let complex =
            CellComplex::build_in_box(&built.realization, lo.to_vec(), hi.to_vec(), self.complex.resolution())?;
        let parent = complex
            .cells()
            .iter()
            .map(|c| self.complex.cell_at(&c.grid).expect("truncated cells lie in original cells"))
            .collect();
        let coloring = built.coloring.clone().expect("total truncation is colored by dimension");
        let t = Arc::new(Truncated { built, complex, coloring, parent });
        self.truncated.lock().expect("truncation cache").insert(level, t.clone());
        Ok(t)
    }

    /// Some component touches two distinct faces of equal dimension (of
    /// dimension `k` when given). Runs the colorful Lebesgue search on the
    /// total truncation, colored by face dimension, and maps the two facets
    /// back to faces; the truncation is made shallower until the mapped
    /// faces are touched by the original component.
    pub fn general(&self, sets: &CoverInstance, k: Option<usize>) -> Result<Option<Witness>, CoverError> {
        let n = self.dim();
        if let Some(k) = k {
            if k >= n {
                return Err(CoverError::Hypothesis(format!("k = {k} must be below the dimension")));
            }
        }
        self.require_cover(sets, n)?;
        for level in 0..GENERAL_LEVELS {
            let t = self.truncated(level)?;
            let origin = t.built.face_origin.as_ref().expect("total truncation records face origins");
            let restricted: Vec<Vec<usize>> = (0..sets.num_labels())
                .map(|l| (0..t.complex.num_cells()).filter(|&q| sets.contains(l, t.parent[q])).collect())
                .collect();
            // labels with no cell left in the truncation are dropped
            let keep: Vec<usize> = (0..restricted.len()).filter(|&l| !restricted[l].is_empty()).collect();
            let q_sets = CoverInstance::cover(
                &t.complex,
                keep.iter().map(|&l| sets.labels()[l].clone()).collect(),
                keep.iter().map(|&l| restricted[l].clone()).collect(),
            )?;
            for w in same_color_pairs(&t.complex, &t.coloring, &q_sets, k) {
                let Witness::SameColorPair { label, component, facets, color } = w else { unreachable!() };
                let li = sets.label_index(&label)?;
                let start = t.parent[component[0]];
                let Some(p_component) =
                    sets.closed_components(&self.complex, li).into_iter().find(|c| c.binary_search(&start).is_ok())
                else {
                    continue;
                };
                let faces = [origin[facets[0]].clone(), origin[facets[1]].clone()];
                if faces.iter().all(|f| touches_face(&self.complex, &p_component, &f.facets)) {
                    return Ok(Some(Witness::TwoKFaces { label, component: p_component, k: color, faces }));
                }
            }
        }
        Ok(None)
    }
}

fn whole_face(p: &crate::polytope::CombinatorialPolytope) -> Face {
    Face { facets: Vec::new(), vertices: (0..p.num_vertices()).collect(), dim: p.dim() }
}

/// Facets touched by the closed union of the cells, ascending.
pub fn touched_facets<S: Scalar>(complex: &CellComplex<S>, cells: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = cells.iter().flat_map(|&c| complex.cell(c).facets.iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Whether the closed union of the cells meets the face cut out by `facets`.
pub fn touches_face<S: Scalar>(complex: &CellComplex<S>, cells: &[usize], facets: &[usize]) -> bool {
    cells.iter().any(|&c| {
        complex.cell(c).vertices.iter().any(|&p| {
            let pf = complex.point_facets(p);
            facets.iter().all(|f| pf.binary_search(f).is_ok())
        })
    })
}

/// Every same-color witness in order: label, component, color, facet pair.
fn same_color_pairs<'a, S: Scalar>(
    complex: &'a CellComplex<S>,
    h: &'a Coloring,
    sets: &'a CoverInstance,
    color: Option<usize>,
) -> impl Iterator<Item = Witness> + 'a {
    (0..sets.num_labels()).flat_map(move |label| {
        sets.closed_components(complex, label).into_iter().flat_map(move |component| {
            let facets = touched_facets(complex, &component);
            let mut out = Vec::new();
            for (a, &f) in facets.iter().enumerate() {
                for &g in &facets[a + 1..] {
                    let c = h.color(f);
                    if h.color(g) == c && color.is_none_or(|k| k == c) {
                        out.push(Witness::SameColorPair {
                            label: sets.labels()[label].clone(),
                            component: component.clone(),
                            facets: [f, g],
                            color: c,
                        });
                    }
                }
            }
            out.sort_by_key(|w| match w {
                Witness::SameColorPair { color, facets, .. } => (*color, *facets),
                _ => unreachable!(),
            });
            out
        })
    })
}
