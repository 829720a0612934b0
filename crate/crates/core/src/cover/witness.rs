//! Witnesses returned by the checkers, and a re-check routine that works
//! from the raw halfspaces and cell vertex lists rather than the cached
//! contact data of the complex.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::complex::CellComplex;
use super::instance::CoverInstance;
use crate::polytope::geometry::{affine_rank, Point, Realization};
use crate::polytope::{Coloring, CombinatorialPolytope, Face};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A component touching two distinct facets of one color.
    SameColorPair { label: String, component: Vec<usize>, facets: [usize; 2], color: usize },
    /// A component touching a facet of every color; `facets[c]` has color `c`.
    AllColors { label: String, component: Vec<usize>, facets: Vec<usize> },
    /// A component touching at least `n + 1` facets.
    ManyFacets { label: String, component: Vec<usize>, facets: Vec<usize> },
    /// A complement component touching many faces of one color class.
    EssentialComponent { component: Vec<usize>, colors: Vec<usize>, faces: Vec<Face> },
    /// A complement component touching the `k`-skeleton of a simplex facet
    /// and further `k`-faces off it.
    SimplexSkeleton { component: Vec<usize>, simplex_facet: usize, skeleton: Vec<Face>, outside: Vec<Face> },
    /// A component touching two distinct `k`-faces.
    TwoKFaces { label: String, component: Vec<usize>, k: usize, faces: [Face; 2] },
}

impl Witness {
    pub fn variant(&self) -> &'static str {
        match self {
            Witness::SameColorPair { .. } => "same_color_pair",
            Witness::AllColors { .. } => "all_colors",
            Witness::ManyFacets { .. } => "many_facets",
            Witness::EssentialComponent { .. } => "essential_component",
            Witness::SimplexSkeleton { .. } => "simplex_skeleton",
            Witness::TwoKFaces { .. } => "two_k_faces",
        }
    }

    pub fn component(&self) -> &[usize] {
        match self {
            Witness::SameColorPair { component, .. }
            | Witness::AllColors { component, .. }
            | Witness::ManyFacets { component, .. }
            | Witness::EssentialComponent { component, .. }
            | Witness::SimplexSkeleton { component, .. }
            | Witness::TwoKFaces { component, .. } => component,
        }
    }
}

/// Everything the re-check needs.
pub struct WitnessContext<'a, S> {
    pub polytope: &'a CombinatorialPolytope,
    pub realization: &'a Realization<S>,
    pub complex: &'a CellComplex<S>,
    pub sets: &'a CoverInstance,
    pub coloring: Option<&'a Coloring>,
}

impl<S: Scalar> WitnessContext<'_, S> {
    fn on_facet(&self, x: &Point<S>, f: usize) -> bool {
        let h = &self.realization.halfspaces[f];
        let scale = h.normal.iter().fold(S::one(), |acc, a| acc.max_of(a.clone().abs()));
        (h.offset.clone() - crate::polytope::geometry::dot(&h.normal, x)).abs() <= S::tolerance() * scale
    }

    fn cell_points(&self, cell: usize) -> impl Iterator<Item = &Point<S>> + '_ {
        self.complex.cell(cell).vertices.iter().map(|&p| self.complex.point(p))
    }

    fn touches_facet(&self, cells: &[usize], f: usize) -> bool {
        cells.iter().any(|&c| self.cell_points(c).any(|x| self.on_facet(x, f)))
    }

    fn touches_face(&self, cells: &[usize], facets: &[usize]) -> bool {
        cells.iter().any(|&c| self.cell_points(c).any(|x| facets.iter().all(|&f| self.on_facet(x, f))))
    }

    /// Touching a face from the complement: some face `c ∩ K` is not
    /// contained in any cell of the family.
    fn complement_touches_face(&self, incidence: &Incidence, cells: &[usize], facets: &[usize]) -> bool {
        cells.iter().any(|&c| {
            let g: Vec<usize> = self
                .complex
                .cell(c)
                .vertices
                .iter()
                .copied()
                .filter(|&p| facets.iter().all(|&f| self.on_facet(self.complex.point(p), f)))
                .collect();
            !g.is_empty()
                && incidence.cells_of(g[0]).iter().all(|&d| {
                    self.sets.labels_of(d).is_empty() || !g.iter().all(|p| self.complex.cell(d).vertices.contains(p))
                })
        })
    }

    fn label_cells(&self, name: &str) -> Result<&[usize], String> {
        let i = self.sets.label_index(name).map_err(|e| e.to_string())?;
        Ok(self.sets.set(i))
    }

    fn color(&self, f: usize) -> Result<usize, String> {
        self.coloring.map(|h| h.color(f)).ok_or_else(|| "witness needs a coloring".to_string())
    }
}

/// Point to cells map rebuilt from the raw vertex lists.
struct Incidence(HashMap<usize, Vec<usize>>);

impl Incidence {
    fn new<S: Scalar>(complex: &CellComplex<S>) -> Self {
        let mut map: HashMap<usize, Vec<usize>> = HashMap::new();
        for c in 0..complex.num_cells() {
            for &p in &complex.cell(c).vertices {
                map.entry(p).or_default().push(c);
            }
        }
        Self(map)
    }

    fn cells_of(&self, p: usize) -> &[usize] {
        self.0.get(&p).map_or(&[], |v| v.as_slice())
    }
}

fn share_wall<S: Scalar>(complex: &CellComplex<S>, a: usize, b: usize) -> bool {
    let va = &complex.cell(a).vertices;
    let common: Vec<Point<S>> =
        complex.cell(b).vertices.iter().filter(|p| va.contains(p)).map(|&p| complex.point(p).clone()).collect();
    let n = complex.dim();
    common.len() >= n && affine_rank(&common) + 1 == n
}

/// Flood fill over cells of `cells` sharing a point, filtered by `adjacent`.
fn connected<S: Scalar>(
    complex: &CellComplex<S>,
    incidence: &Incidence,
    cells: &[usize],
    adjacent: impl Fn(usize, usize) -> bool,
) -> bool {
    let Some(&first) = cells.first() else { return false };
    let members: BTreeSet<usize> = cells.iter().copied().collect();
    let mut seen = BTreeSet::from([first]);
    let mut queue = VecDeque::from([first]);
    while let Some(c) = queue.pop_front() {
        for &p in &complex.cell(c).vertices {
            for &d in incidence.cells_of(p) {
                if members.contains(&d) && !seen.contains(&d) && adjacent(c, d) {
                    seen.insert(d);
                    queue.push_back(d);
                }
            }
        }
    }
    seen.len() == members.len()
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn distinct(faces: &[Face]) -> bool {
    faces.iter().map(|f| &f.vertices).collect::<BTreeSet<_>>().len() == faces.len()
}

/// Recomputes connectivity and contacts of a witness. Returns a reason on
/// failure.
pub fn verify_witness<S: Scalar>(ctx: &WitnessContext<'_, S>, w: &Witness) -> Result<(), String> {
    let complex = ctx.complex;
    let n = complex.dim();
    let component = w.component();
    let incidence = Incidence::new(complex);
    check(!component.is_empty(), || "empty component".into())?;
    check(component.iter().all(|&c| c < complex.num_cells()), || "unknown cell".into())?;

    let in_label = |name: &str| -> Result<(), String> {
        let cells = ctx.label_cells(name)?;
        check(component.iter().all(|c| cells.binary_search(c).is_ok()), || format!("component leaves label {name}"))?;
        check(connected(complex, &incidence, component, |_, _| true), || "component is not connected".into())
    };
    let in_complement = || -> Result<(), String> {
        check(component.iter().all(|&c| ctx.sets.labels_of(c).is_empty()), || "component meets the family".into())?;
        check(connected(complex, &incidence, component, |a, b| share_wall(complex, a, b)), || {
            "component is not connected".into()
        })
    };
    let touches = |f: usize| -> Result<(), String> {
        check(ctx.touches_facet(component, f), || format!("facet {f} not touched"))
    };

    match w {
        Witness::SameColorPair { label, facets, color, .. } => {
            in_label(label)?;
            check(facets[0] != facets[1], || "facets coincide".into())?;
            for &f in facets {
                check(ctx.color(f)? == *color, || format!("facet {f} has the wrong color"))?;
                touches(f)?;
            }
        }
        Witness::AllColors { label, facets, .. } => {
            in_label(label)?;
            check(facets.len() == n + 1, || "expected one facet per color".into())?;
            for (c, &f) in facets.iter().enumerate() {
                check(ctx.color(f)? == c, || format!("facet {f} does not have color {c}"))?;
                touches(f)?;
            }
        }
        Witness::ManyFacets { label, facets, .. } => {
            in_label(label)?;
            let set: BTreeSet<usize> = facets.iter().copied().collect();
            check(set.len() == facets.len() && set.len() > n, || "fewer than n + 1 distinct facets".into())?;
            for &f in facets {
                touches(f)?;
            }
        }
        Witness::EssentialComponent { colors, faces, .. } => {
            in_complement()?;
            let k = n - colors.len();
            check(faces.len() >= 1 << (n - k), || format!("only {} faces", faces.len()))?;
            check(distinct(faces), || "faces repeat".into())?;
            for face in faces {
                check(face.dim == k, || "face of the wrong dimension".into())?;
                let mut cs: Vec<usize> = face.facets.iter().map(|&f| ctx.color(f)).collect::<Result<_, _>>()?;
                cs.sort_unstable();
                check(&cs == colors, || format!("face {:?} is in another color class", face.facets))?;
                check(ctx.complement_touches_face(&incidence, component, &face.facets), || {
                    format!("face {:?} not touched", face.facets)
                })?;
            }
        }
        Witness::SimplexSkeleton { simplex_facet, skeleton, outside, .. } => {
            in_complement()?;
            let k = skeleton.first().map_or(0, |f| f.dim);
            let expected = crate::polytope::combinatorial::binomial(n, k + 1);
            check(skeleton.len() == expected, || {
                format!("skeleton has {} faces, expected {expected}", skeleton.len())
            })?;
            check(ctx.polytope.facet_vertices(*simplex_facet).len() == n, || "facet is not a simplex".into())?;
            check(outside.len() >= crate::polytope::combinatorial::binomial(n, k), || "too few outside faces".into())?;
            check(distinct(skeleton) && distinct(outside), || "faces repeat".into())?;
            for face in skeleton {
                check(face.dim == k && face.facets.contains(simplex_facet), || "skeleton face off the simplex".into())?;
            }
            for face in outside {
                check(face.dim == k && !face.facets.contains(simplex_facet), || "outside face on the simplex".into())?;
            }
            for face in skeleton.iter().chain(outside) {
                check(ctx.complement_touches_face(&incidence, component, &face.facets), || {
                    format!("face {:?} not touched", face.facets)
                })?;
            }
        }
        Witness::TwoKFaces { label, k, faces, .. } => {
            in_label(label)?;
            check(faces[0].vertices != faces[1].vertices, || "faces coincide".into())?;
            for face in faces {
                check(face.dim == *k, || "face of the wrong dimension".into())?;
                check(ctx.polytope.face_of_facets(&face.facets).as_ref() == Some(face), || "not a face".into())?;
                check(ctx.touches_face(component, &face.facets), || format!("face {:?} not touched", face.vertices))?;
            }
        }
    }
    Ok(())
}
