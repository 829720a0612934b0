use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::combinatorial::{CombinatorialPolytope, Face};
use crate::error::PolytopeError;

/// Facet coloring `h: [m] -> [k]`, colors 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<usize>,
    k: usize,
}

impl Coloring {
    pub fn new(colors: Vec<usize>, k: usize) -> Result<Self, PolytopeError> {
        if let Some(&c) = colors.iter().find(|&&c| c >= k) {
            return Err(PolytopeError::ColoringMismatch(format!("color {c} outside [0, {k})")));
        }
        Ok(Self { colors, k })
    }

    pub fn color(&self, facet: usize) -> usize {
        self.colors[facet]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn num_colors(&self) -> usize {
        self.k
    }

    /// Number of distinct colors actually used.
    pub fn used_colors(&self) -> usize {
        self.colors.iter().collect::<BTreeSet<_>>().len()
    }

    /// Facets of color `c`, ascending.
    pub fn class(&self, c: usize) -> Vec<usize> {
        (0..self.colors.len()).filter(|&f| self.colors[f] == c).collect()
    }

    /// Checks that facets sharing a vertex get distinct colors.
    pub fn validate(&self, p: &CombinatorialPolytope) -> Result<(), PolytopeError> {
        if self.colors.len() != p.num_facets() {
            return Err(PolytopeError::ColoringMismatch(format!(
                "{} colors for {} facets",
                self.colors.len(),
                p.num_facets()
            )));
        }
        for fs in p.all_vertex_facets() {
            for (i, &a) in fs.iter().enumerate() {
                for &b in &fs[i + 1..] {
                    if self.colors[a] == self.colors[b] {
                        return Err(PolytopeError::ImproperColoring(a, b, self.colors[a]));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Exact backtracking search for a proper `k`-coloring.
///
/// Facets are colored in index order, colors tried smallest first, and a
/// facet never opens more than one new color, so the result is
/// deterministic.
pub fn find_coloring(p: &CombinatorialPolytope, k: usize) -> Result<Option<Coloring>, PolytopeError> {
    let adj = p.facet_adjacency()?;
    let m = p.num_facets();
    if k == 0 {
        return Ok(None);
    }
    let earlier: Vec<Vec<usize>> =
        (0..m).map(|f| adj.neighbors(f).iter().copied().filter(|&g| g < f).collect()).collect();
    let mut colors = vec![usize::MAX; m];
    // next color to try for each facet, and max color used before it
    let mut next = vec![0usize; m];
    let mut ceiling = vec![0usize; m + 1];
    let mut i = 0usize;
    loop {
        if i == m {
            return Ok(Some(Coloring::new(colors, k)?));
        }
        let limit = (ceiling[i] + 1).min(k);
        let mut placed = false;
        while next[i] < limit {
            let c = next[i];
            next[i] += 1;
            if earlier[i].iter().all(|&g| colors[g] != c) {
                colors[i] = c;
                ceiling[i + 1] = ceiling[i].max(c + 1);
                placed = true;
                break;
            }
        }
        if placed {
            i += 1;
            if i < m {
                next[i] = 0;
            }
        } else {
            colors[i] = usize::MAX;
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
        }
    }
}

/// Smallest `k` admitting a proper coloring, with a witness. The search
/// starts at `n`, a lower bound for any simple `n`-polytope.
pub fn chromatic_number(p: &CombinatorialPolytope) -> Result<(usize, Coloring), PolytopeError> {
    for k in p.dim().max(1)..=p.num_facets() {
        if let Some(c) = find_coloring(p, k)? {
            return Ok((k, c));
        }
    }
    unreachable!("m colors always suffice")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoswigReport {
    pub colorable: bool,
    /// 2-faces with an odd number of edges.
    pub odd_two_faces: Vec<Face>,
}

/// Parity test on 2-faces: a simple `n`-polytope is `n`-colorable iff
/// every 2-face has an even number of edges.
pub fn joswig_colorable(p: &CombinatorialPolytope) -> Result<JoswigReport, PolytopeError> {
    let n = p.dim();
    if n < 2 {
        return Err(PolytopeError::DimensionOutOfRange { k: 2, n });
    }
    let two_faces = p.enumerate_faces(2)?;
    let edges = p.enumerate_faces(1)?;
    let odd_two_faces: Vec<Face> = two_faces
        .into_iter()
        .filter(|face| {
            let count = edges.iter().filter(|e| face.facets.iter().all(|f| e.facets.binary_search(f).is_ok())).count();
            count % 2 == 1
        })
        .collect();
    Ok(JoswigReport { colorable: odd_two_faces.is_empty(), odd_two_faces })
}

/// The colors of all facets containing `face` (its I-color class), ascending.
pub fn i_color_class(p: &CombinatorialPolytope, h: &Coloring, face: &Face) -> Result<Vec<usize>, PolytopeError> {
    p.check_face(face)?;
    let set: BTreeSet<usize> = face.facets.iter().map(|&f| h.color(f)).collect();
    Ok(set.into_iter().collect())
}
