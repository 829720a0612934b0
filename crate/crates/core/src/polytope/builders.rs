//! Constructors for the polytope catalog: cubes, simplices, polygons,
//! products, cross-polytopes, pyramids, vertex truncations and total
//! truncations.

use std::f64::consts::PI;

use super::coloring::Coloring;
use super::combinatorial::{CombinatorialPolytope, Face};
use super::geometry::{add, dot, scale, solve, sub, Halfspace, Point, Realization};
use crate::error::PolytopeError;
use crate::scalar::Scalar;

/// Depth ratio between successive face dimensions in a total truncation.
const FLAG_DEPTH_RATIO: (i64, i64) = (1, 4);

/// Output of every builder.
#[derive(Clone, Debug)]
pub struct BuiltPolytope<S> {
    pub polytope: CombinatorialPolytope,
    pub realization: Realization<S>,
    /// A natural proper coloring, when the construction provides one.
    pub coloring: Option<Coloring>,
    /// For total truncations: the face of the input polytope behind each facet.
    pub face_origin: Option<Vec<Face>>,
}

impl<S: Scalar> BuiltPolytope<S> {
    fn new(polytope: CombinatorialPolytope, realization: Realization<S>, coloring: Option<Coloring>) -> Self {
        Self { polytope, realization, coloring, face_origin: None }
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }
}

fn names(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|i| format!("{prefix}{i}")).collect()
}

/// Unit cube `[0,1]^n`. Facet `i` is `x_i = 0`, facet `n + i` is `x_i = 1`;
/// vertex `b` has coordinate bits `b`. Colored by axis.
pub fn cube<S: Scalar>(n: usize) -> BuiltPolytope<S> {
    assert!(n >= 1);
    let mut facet_names = Vec::with_capacity(2 * n);
    for side in ["0", "1"] {
        for i in 0..n {
            facet_names.push(format!("x{}={side}", i + 1));
        }
    }
    let mut vertex_facets = Vec::with_capacity(1 << n);
    let mut coords = Vec::with_capacity(1 << n);
    for b in 0..(1usize << n) {
        let mut fs: Vec<usize> = (0..n).map(|i| if b >> i & 1 == 0 { i } else { n + i }).collect();
        fs.sort_unstable();
        vertex_facets.push(fs);
        coords.push((0..n).map(|i| if b >> i & 1 == 0 { S::zero() } else { S::one() }).collect());
    }
    let mut halfspaces = Vec::with_capacity(2 * n);
    for upper in [false, true] {
        for i in 0..n {
            let mut normal = vec![S::zero(); n];
            normal[i] = if upper { S::one() } else { -S::one() };
            halfspaces.push(Halfspace::new(normal, if upper { S::one() } else { S::zero() }));
        }
    }
    let polytope = CombinatorialPolytope::new(n, facet_names, vertex_facets).expect("cube is well formed");
    let coloring = Coloring::new((0..2 * n).map(|f| f % n).collect(), n).ok();
    BuiltPolytope::new(polytope, Realization { coords, halfspaces }, coloring)
}

/// Standard simplex `conv(0, e_1, ..., e_n)`. Facet `i < n` is `x_i = 0`,
/// facet `n` is `sum x = 1`. Vertex 0 is the origin, vertex `i + 1` is
/// `e_i`. Colored with `n + 1` colors, facet `f` getting color `f`.
pub fn simplex<S: Scalar>(n: usize) -> BuiltPolytope<S> {
    assert!(n >= 1);
    let mut facet_names: Vec<String> = (0..n).map(|i| format!("x{}=0", i + 1)).collect();
    facet_names.push("sum=1".into());
    let mut vertex_facets = vec![(0..n).collect::<Vec<_>>()];
    let mut coords = vec![vec![S::zero(); n]];
    for i in 0..n {
        vertex_facets.push((0..=n).filter(|&f| f != i).collect());
        let mut e = vec![S::zero(); n];
        e[i] = S::one();
        coords.push(e);
    }
    let mut halfspaces: Vec<Halfspace<S>> = (0..n)
        .map(|i| {
            let mut normal = vec![S::zero(); n];
            normal[i] = -S::one();
            Halfspace::new(normal, S::zero())
        })
        .collect();
    halfspaces.push(Halfspace::new(vec![S::one(); n], S::one()));
    let polytope = CombinatorialPolytope::new(n, facet_names, vertex_facets).expect("simplex is well formed");
    let coloring = Coloring::new((0..=n).collect(), n + 1).ok();
    BuiltPolytope::new(polytope, Realization { coords, halfspaces }, coloring)
}

/// Regular `m`-gon; edge `j` joins vertices `j` and `j + 1`. Even polygons
/// come with the alternating 2-coloring.
pub fn polygon<S: Scalar>(m: usize) -> BuiltPolytope<S> {
    assert!(m >= 3);
    let coords: Vec<Point<S>> = (0..m)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / m as f64 - PI / 2.0 + PI / m as f64;
            vec![S::from_real(theta.cos()), S::from_real(theta.sin())]
        })
        .collect();
    let vertex_facets: Vec<Vec<usize>> = (0..m)
        .map(|j| {
            let mut fs = vec![(j + m - 1) % m, j];
            fs.sort_unstable();
            fs
        })
        .collect();
    let polytope = CombinatorialPolytope::new(2, names("e", m), vertex_facets).expect("polygon is well formed");
    let realization = Realization::from_coords(&polytope, coords).expect("polygon is nondegenerate");
    let coloring = if m.is_multiple_of(2) { Coloring::new((0..m).map(|j| j % 2).collect(), 2).ok() } else { None };
    BuiltPolytope::new(polytope, realization, coloring)
}

/// Cartesian product. Facets of `a` come first, then facets of `b`;
/// vertex `(u, w)` has index `u * |V(b)| + w`. Colorings combine with
/// disjoint palettes.
pub fn product<S: Scalar>(a: &BuiltPolytope<S>, b: &BuiltPolytope<S>) -> BuiltPolytope<S> {
    let (pa, pb) = (&a.polytope, &b.polytope);
    let (na, nb) = (pa.dim(), pb.dim());
    let ma = pa.num_facets();
    let mut facet_names: Vec<String> = pa.facet_names().iter().map(|s| format!("{s}xQ")).collect();
    facet_names.extend(pb.facet_names().iter().map(|s| format!("Px{s}")));
    let mut vertex_facets = Vec::new();
    let mut coords = Vec::new();
    for u in 0..pa.num_vertices() {
        for w in 0..pb.num_vertices() {
            let mut fs = pa.vertex_facets(u).to_vec();
            fs.extend(pb.vertex_facets(w).iter().map(|f| f + ma));
            vertex_facets.push(fs);
            let mut x = a.realization.coords[u].clone();
            x.extend(b.realization.coords[w].iter().cloned());
            coords.push(x);
        }
    }
    let mut halfspaces = Vec::new();
    for h in &a.realization.halfspaces {
        let mut normal = h.normal.clone();
        normal.extend(std::iter::repeat_n(S::zero(), nb));
        halfspaces.push(Halfspace::new(normal, h.offset.clone()));
    }
    for h in &b.realization.halfspaces {
        let mut normal = vec![S::zero(); na];
        normal.extend(h.normal.iter().cloned());
        halfspaces.push(Halfspace::new(normal, h.offset.clone()));
    }
    let polytope = CombinatorialPolytope::new(na + nb, facet_names, vertex_facets).expect("product is well formed");
    let coloring = match (&a.coloring, &b.coloring) {
        (Some(ca), Some(cb)) => {
            let ka = ca.num_colors();
            let colors = ca.colors().iter().copied().chain(cb.colors().iter().map(|c| c + ka)).collect();
            Coloring::new(colors, ka + cb.num_colors()).ok()
        }
        _ => None,
    };
    BuiltPolytope::new(polytope, Realization { coords, halfspaces }, coloring)
}

/// `m`-gon prism (polygon × interval).
pub fn prism<S: Scalar>(m: usize) -> BuiltPolytope<S> {
    let base = polygon::<S>(m);
    let mut out = product(&base, &cube::<S>(1));
    if out.coloring.is_none() {
        // odd prisms: color the polygon with 3 colors, caps get a fourth
        let (_, c) = super::coloring::chromatic_number(&base.polytope).expect("polygon is simple");
        let mut colors = c.colors().to_vec();
        colors.extend([c.num_colors(), c.num_colors()]);
        out.coloring = Coloring::new(colors, c.num_colors() + 1).ok();
    }
    out
}

/// Cross-polytope `conv(±e_i)`. Vertex `2i` is `+e_i`, `2i + 1` is `-e_i`;
/// facet `s` (bit `i` set meaning a minus sign) is `s · x <= 1`.
pub fn cross_polytope<S: Scalar>(n: usize) -> BuiltPolytope<S> {
    assert!(n >= 2);
    let m = 1usize << n;
    let sign = |s: usize, i: usize| if s >> i & 1 == 0 { S::one() } else { -S::one() };
    let mut vertex_facets = Vec::new();
    let mut coords = Vec::new();
    for i in 0..n {
        for neg in [false, true] {
            vertex_facets.push((0..m).filter(|&s| (s >> i & 1 == 1) == neg).collect());
            let mut x = vec![S::zero(); n];
            x[i] = if neg { -S::one() } else { S::one() };
            coords.push(x);
        }
    }
    let halfspaces = (0..m).map(|s| Halfspace::new((0..n).map(|i| sign(s, i)).collect(), S::one())).collect();
    let polytope = CombinatorialPolytope::new(n, names("s", m), vertex_facets).expect("cross-polytope is well formed");
    BuiltPolytope::new(polytope, Realization { coords, halfspaces }, None)
}

/// Pyramid over a regular `m`-gon with apex above the center. Facet 0 is
/// the base, facet `j + 1` the side over edge `j`; the apex is the last
/// vertex.
pub fn pyramid<S: Scalar>(m: usize) -> BuiltPolytope<S> {
    let base = polygon::<S>(m);
    let mut vertex_facets = Vec::new();
    let mut coords = Vec::new();
    for j in 0..m {
        let mut fs = vec![0];
        fs.extend(base.polytope.vertex_facets(j).iter().map(|f| f + 1));
        vertex_facets.push(fs);
        let mut x = base.realization.coords[j].clone();
        x.push(S::zero());
        coords.push(x);
    }
    vertex_facets.push((1..=m).collect());
    coords.push(vec![S::zero(), S::zero(), S::one()]);
    let mut facet_names = vec!["base".to_string()];
    facet_names.extend((0..m).map(|j| format!("side{j}")));
    let polytope = CombinatorialPolytope::new(3, facet_names, vertex_facets).expect("pyramid is well formed");
    let realization = Realization::from_coords(&polytope, coords).expect("pyramid is nondegenerate");
    BuiltPolytope::new(polytope, realization, None)
}

/// Cut plane for vertex `v`: normal `a` with `a · (u - v) = -1` for every
/// neighbour `u`, and the largest admissible depth.
fn vertex_cut<S: Scalar>(p: &BuiltPolytope<S>, v: usize) -> Result<(Vec<usize>, Vec<S>, S), PolytopeError> {
    let neighbors = p.polytope.vertex_neighbors(v)?;
    let x = &p.realization.coords[v];
    let rows: Vec<Vec<S>> = neighbors.iter().map(|&u| sub(&p.realization.coords[u], x)).collect();
    if rows.len() != p.dim() {
        return Err(PolytopeError::Degenerate(format!("vertex {v} has {} edges", rows.len())));
    }
    let a = solve(&rows, &vec![-S::one(); rows.len()])
        .ok_or_else(|| PolytopeError::Degenerate(format!("edges at vertex {v} are dependent")))?;
    let top = dot(&a, x);
    let bound = p
        .realization
        .coords
        .iter()
        .enumerate()
        .filter(|&(w, _)| w != v)
        .map(|(_, y)| top.clone() - dot(&a, y))
        .fold(None, |acc: Option<S>, g| Some(acc.map_or(g.clone(), |a| a.min_of(g))))
        .expect("polytope has more than one vertex");
    Ok((neighbors, a, bound))
}

/// Largest depth allowed when cutting `vertices` (exclusive).
pub fn truncation_bound<S: Scalar>(p: &BuiltPolytope<S>, vertices: &[usize]) -> Result<S, PolytopeError> {
    let mut bound: Option<S> = None;
    for &v in vertices {
        let (_, _, b) = vertex_cut(p, v)?;
        bound = Some(bound.map_or(b.clone(), |x| x.min_of(b)));
    }
    bound.ok_or_else(|| PolytopeError::Malformed("no vertices to truncate".into()))
}

/// Cuts off each listed vertex by a hyperplane meeting its edges at
/// fraction `eps` of their length (relative to the vertex cone). The
/// vertices must be pairwise non-adjacent. `eps` defaults to 1/8 of the
/// smallest vertex–hyperplane gap.
///
/// New facets are appended in the order of `vertices`. If the input
/// carries an `n`-coloring, the result carries the `(n+1)`-coloring that
/// gives every new simplex facet color `n`.
pub fn truncate_vertices<S: Scalar>(
    p: &BuiltPolytope<S>,
    vertices: &[usize],
    eps: Option<S>,
) -> Result<BuiltPolytope<S>, PolytopeError> {
    let poly = &p.polytope;
    let n = poly.dim();
    poly.require_simple()?;
    let mut cut_set: Vec<usize> = vertices.to_vec();
    cut_set.sort_unstable();
    cut_set.dedup();
    if cut_set.len() != vertices.len() || cut_set.is_empty() {
        return Err(PolytopeError::Malformed("truncated vertices must be distinct and nonempty".into()));
    }
    for &v in vertices {
        if v >= poly.num_vertices() {
            return Err(PolytopeError::NoSuchVertex(v));
        }
    }
    let mut cuts = Vec::new();
    for &v in vertices {
        let (neighbors, a, bound) = vertex_cut(p, v)?;
        if let Some(&w) = neighbors.iter().find(|w| cut_set.binary_search(w).is_ok()) {
            return Err(PolytopeError::NotSeparated(v.min(w), v.max(w)));
        }
        cuts.push((v, neighbors, a, bound));
    }
    let min_bound =
        cuts.iter().map(|c| c.3.clone()).fold(None, |acc: Option<S>, b| Some(acc.map_or(b.clone(), |x| x.min_of(b))));
    let min_bound = min_bound.expect("nonempty");
    let depth = eps.unwrap_or_else(|| min_bound.clone() / S::from_ratio(8, 1));
    if !(depth > S::zero()) || !(depth < min_bound) {
        return Err(PolytopeError::InfeasibleDepth { eps: depth.real(), bound: min_bound.real() });
    }

    let m = poly.num_facets();
    let mut facet_names = poly.facet_names().to_vec();
    let mut halfspaces = p.realization.halfspaces.clone();
    let mut vertex_facets = Vec::new();
    let mut coords = Vec::new();
    for v in 0..poly.num_vertices() {
        if cut_set.binary_search(&v).is_err() {
            vertex_facets.push(poly.vertex_facets(v).to_vec());
            coords.push(p.realization.coords[v].clone());
        }
    }
    for (idx, (v, neighbors, a, _)) in cuts.iter().enumerate() {
        let new_facet = m + idx;
        facet_names.push(format!("cut{v}"));
        let x = &p.realization.coords[*v];
        halfspaces.push(Halfspace::new(a.clone(), dot(a, x) - depth.clone()));
        for &u in neighbors {
            let mut fs: Vec<usize> = poly
                .vertex_facets(*v)
                .iter()
                .copied()
                .filter(|f| poly.vertex_facets(u).binary_search(f).is_ok())
                .collect();
            fs.push(new_facet);
            vertex_facets.push(fs);
            coords.push(add(x, &scale(&sub(&p.realization.coords[u], x), &depth)));
        }
    }
    let polytope = CombinatorialPolytope::new(n, facet_names, vertex_facets)?;
    let realization = Realization { coords, halfspaces };
    let report = realization.validate(&polytope);
    if !report.is_valid() {
        return Err(PolytopeError::CutCollision(format!("{report:?}")));
    }
    let coloring = p.coloring.as_ref().filter(|c| c.num_colors() == n).map(|c| {
        let mut colors = c.colors().to_vec();
        colors.extend(std::iter::repeat_n(n, cuts.len()));
        Coloring::new(colors, n + 1).expect("colors in range")
    });
    Ok(BuiltPolytope::new(polytope, realization, coloring))
}

/// Total truncation: one facet per proper face `K` of the input, one vertex
/// per complete flag `K_0 ⊂ ... ⊂ K_{n-1}`. The returned coloring is
/// `h(F_K) = dim K` and `face_origin[f]` is the face behind facet `f`.
///
/// The cut for a `d`-face sits at relative depth `eps · 4^{-d}` of the gap
/// between the face and the nearest vertex off it; `eps` defaults to 1/8
/// and must lie in `(0, 1)`. Works for non-simple input.
pub fn total_truncation<S: Scalar>(p: &BuiltPolytope<S>, eps: Option<S>) -> Result<BuiltPolytope<S>, PolytopeError> {
    let poly = &p.polytope;
    let n = poly.dim();
    let eps = eps.unwrap_or_else(|| S::from_ratio(1, 8));
    if !(eps > S::zero()) || !(eps < S::one()) {
        return Err(PolytopeError::InfeasibleDepth { eps: eps.real(), bound: 1.0 });
    }
    let faces: Vec<Face> = poly.face_lattice().into_iter().filter(|f| f.dim < n).collect();
    let ratio = S::from_ratio(FLAG_DEPTH_RATIO.0, FLAG_DEPTH_RATIO.1);

    let mut halfspaces = Vec::with_capacity(faces.len());
    for face in &faces {
        if face.dim + 1 == n {
            let f = face.facets[0];
            halfspaces.push(p.realization.halfspaces[f].clone());
            continue;
        }
        let mut a = vec![S::zero(); n];
        let mut c = S::zero();
        for &f in &face.facets {
            let h = &p.realization.halfspaces[f];
            a = add(&a, &h.normal);
            c = c + h.offset.clone();
        }
        let gap = (0..poly.num_vertices())
            .filter(|v| face.vertices.binary_search(v).is_err())
            .map(|v| c.clone() - dot(&a, &p.realization.coords[v]))
            .fold(None, |acc: Option<S>, g| Some(acc.map_or(g.clone(), |x| x.min_of(g))))
            .ok_or_else(|| PolytopeError::Degenerate("face contains every vertex".into()))?;
        if !(gap > S::zero()) {
            return Err(PolytopeError::Degenerate(format!("face {:?} has no separating cut", face.vertices)));
        }
        let mut depth = gap * eps.clone();
        for _ in 0..face.dim {
            depth = depth * ratio.clone();
        }
        halfspaces.push(Halfspace::new(a, c - depth));
    }

    // complete flags by extension from vertices upward
    let mut flags: Vec<Vec<usize>> = (0..faces.len()).filter(|&i| faces[i].dim == 0).map(|i| vec![i]).collect();
    for d in 1..n {
        let mut next = Vec::new();
        for flag in &flags {
            let last = &faces[*flag.last().expect("nonempty flag")];
            for (j, g) in faces.iter().enumerate() {
                if g.dim == d && last.vertices.iter().all(|v| g.vertices.binary_search(v).is_ok()) {
                    let mut f = flag.clone();
                    f.push(j);
                    next.push(f);
                }
            }
        }
        flags = next;
    }

    let mut coords = Vec::with_capacity(flags.len());
    let mut vertex_facets = Vec::with_capacity(flags.len());
    for flag in &flags {
        let rows: Vec<Vec<S>> = flag.iter().map(|&i| halfspaces[i].normal.clone()).collect();
        let rhs: Vec<S> = flag.iter().map(|&i| halfspaces[i].offset.clone()).collect();
        let x = solve(&rows, &rhs)
            .ok_or_else(|| PolytopeError::CutCollision(format!("flag {flag:?} does not determine a point")))?;
        coords.push(x);
        let mut fs = flag.clone();
        fs.sort_unstable();
        vertex_facets.push(fs);
    }
    let facet_names = faces
        .iter()
        .map(|f| format!("K{}[{}]", f.dim, f.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    let polytope = CombinatorialPolytope::new(n, facet_names, vertex_facets)?;
    let realization = Realization { coords, halfspaces };
    let report = realization.validate(&polytope);
    if !report.is_valid() {
        return Err(PolytopeError::CutCollision(format!(
            "{} vertices outside, {} incidence mismatches",
            report.outside.len(),
            report.incidence_mismatch.len()
        )));
    }
    let coloring = Coloring::new(faces.iter().map(|f| f.dim).collect(), n)?;
    Ok(BuiltPolytope { polytope, realization, coloring: Some(coloring), face_origin: Some(faces) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::coloring::{find_coloring, joswig_colorable};
    use num_rational::BigRational;

    #[test]
    fn cube_counts_and_realization() {
        let c = cube::<f64>(3);
        assert_eq!(c.polytope.num_facets(), 6);
        assert_eq!(c.polytope.num_vertices(), 8);
        assert!(c.polytope.all_vertex_facets().iter().all(|fs| fs.len() == 3));
        assert!(c.realization.validate(&c.polytope).is_valid());
        c.coloring.as_ref().unwrap().validate(&c.polytope).unwrap();
    }

    #[test]
    fn exact_builders_validate() {
        let c = cube::<BigRational>(3);
        assert!(c.realization.validate(&c.polytope).is_valid());
        let s = simplex::<BigRational>(3);
        assert!(s.realization.validate(&s.polytope).is_valid());
        let t = truncate_vertices(&c, &[0], None).unwrap();
        assert!(t.realization.validate(&t.polytope).is_valid());
        let h = polygon::<BigRational>(6);
        assert!(h.realization.validate(&h.polytope).is_valid());
    }

    #[test]
    fn interval_squared_is_square() {
        let sq = product(&cube::<f64>(1), &cube::<f64>(1));
        let c2 = cube::<f64>(2);
        assert_eq!(sq.polytope.num_facets(), 4);
        assert_eq!(sq.polytope.num_vertices(), 4);
        // same incidence up to relabeling: (x1=0,x1=1,x2=0,x2=1) vs (x1=0,x2=0,x1=1,x2=1)
        let relabel = [0, 2, 1, 3];
        let mut a: Vec<Vec<usize>> = sq
            .polytope
            .all_vertex_facets()
            .iter()
            .map(|fs| {
                let mut g: Vec<usize> = fs.iter().map(|&f| relabel[f]).collect();
                g.sort_unstable();
                g
            })
            .collect();
        let mut b = c2.polytope.all_vertex_facets().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert!(sq.realization.validate(&sq.polytope).is_valid());
    }

    #[test]
    fn truncate_vertex_adds_simplex_facet() {
        let t = truncate_vertices(&cube::<f64>(3), &[0], None).unwrap();
        assert_eq!(t.polytope.num_facets(), 7);
        assert_eq!(t.polytope.num_vertices(), 10);
        assert_eq!(t.polytope.facet_vertices(6).len(), 3);
        let h = t.coloring.unwrap();
        assert_eq!(h.num_colors(), 4);
        h.validate(&t.polytope).unwrap();
        assert!(t.polytope.enumerate_faces(0).unwrap().len() == 10);
    }

    #[test]
    fn truncation_errors() {
        let c = cube::<f64>(3);
        assert!(matches!(truncate_vertices(&c, &[0, 1], None), Err(PolytopeError::NotSeparated(0, 1))));
        assert!(matches!(truncate_vertices(&c, &[0], Some(1.5)), Err(PolytopeError::InfeasibleDepth { .. })));
        assert!(matches!(truncate_vertices(&c, &[0], Some(0.0)), Err(PolytopeError::InfeasibleDepth { .. })));
        assert!(matches!(truncate_vertices(&c, &[9], None), Err(PolytopeError::NoSuchVertex(9))));
        let pyr = pyramid::<f64>(4);
        assert!(matches!(truncate_vertices(&pyr, &[0], None), Err(PolytopeError::NotSimple(_))));
    }

    #[test]
    fn three_separated_truncations_of_the_cube() {
        // (0,0,0), (1,1,0), (1,0,1) are pairwise non-adjacent
        let t = truncate_vertices(&cube::<f64>(3), &[0, 3, 5], None).unwrap();
        assert_eq!(t.polytope.num_facets(), 9);
        assert_eq!(t.polytope.num_vertices(), 8 - 3 + 9);
        t.coloring.unwrap().validate(&t.polytope).unwrap();
    }

    /// Brute-force chain count in the face poset of the simplex.
    fn flag_count_oracle(n: usize) -> usize {
        // faces of the n-simplex are nonempty proper vertex subsets; a flag
        // adds one vertex at a time: (n+1) · n · ... · 2 chains
        let mut subsets: Vec<u32> = (1u32..(1 << (n + 1)) - 1).collect();
        subsets.sort_by_key(|s| s.count_ones());
        let mut count = 0;
        fn extend(chain_last: u32, level: usize, n: usize, subsets: &[u32], count: &mut usize) {
            if level == n {
                *count += 1;
                return;
            }
            for &s in subsets.iter().filter(|s| s.count_ones() as usize == level + 1) {
                if s & chain_last == chain_last {
                    extend(s, level + 1, n, subsets, count);
                }
            }
        }
        for &s in subsets.iter().filter(|s| s.count_ones() == 1) {
            extend(s, 1, n, &subsets, &mut count);
        }
        count
    }

    #[test]
    fn total_truncation_of_tetrahedron() {
        let t = total_truncation(&simplex::<f64>(3), None).unwrap();
        assert_eq!(t.polytope.num_facets(), 4 + 6 + 4);
        assert_eq!(flag_count_oracle(3), 24);
        assert_eq!(t.polytope.num_vertices(), flag_count_oracle(3));
        assert!(t.polytope.is_simple());
        let h = t.coloring.clone().unwrap();
        h.validate(&t.polytope).unwrap();
        assert!(joswig_colorable(&t.polytope).unwrap().colorable);
        assert!(find_coloring(&t.polytope, 3).unwrap().is_some());
    }

    #[test]
    fn total_truncation_adjacency_is_containment() {
        let t = total_truncation(&simplex::<f64>(3), None).unwrap();
        let faces = t.face_origin.as_ref().unwrap();
        let adj = t.polytope.facet_adjacency().unwrap();
        let contains = |a: &Face, b: &Face| a.vertices.iter().all(|v| b.vertices.binary_search(v).is_ok());
        for i in 0..faces.len() {
            for j in 0..faces.len() {
                if i != j {
                    let nested = contains(&faces[i], &faces[j]) || contains(&faces[j], &faces[i]);
                    assert_eq!(adj.adjacent(i, j), nested, "{i} {j}");
                }
            }
        }
    }

    #[test]
    fn total_truncations_of_general_polytopes() {
        for (name, p) in [
            ("octahedron", cross_polytope::<f64>(3)),
            ("square pyramid", pyramid::<f64>(4)),
            ("cube", cube::<f64>(3)),
            ("hexagon", polygon::<f64>(6)),
            ("pentagon", polygon::<f64>(5)),
        ] {
            let t = total_truncation(&p, None).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(t.polytope.is_simple(), "{name}");
            t.coloring.as_ref().unwrap().validate(&t.polytope).unwrap();
        }
        let oct = total_truncation(&cross_polytope::<f64>(3), None).unwrap();
        assert_eq!(oct.polytope.num_facets(), 6 + 12 + 8);
        assert_eq!(oct.polytope.num_vertices(), 8 * 3 * 2);
        assert!(total_truncation(&cube::<f64>(3), Some(1.0)).is_err());
    }

    #[test]
    fn exact_total_truncation() {
        let t = total_truncation(&cube::<BigRational>(3), None).unwrap();
        assert_eq!(t.polytope.num_vertices(), 48);
    }
}
