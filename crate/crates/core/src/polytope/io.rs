//! JSON polytope files:
//! `{ "dim", "facets", "vertex_facets", "coords"?, "halfspaces"? }`.

use serde::{Deserialize, Serialize};

use super::builders::BuiltPolytope;
use super::combinatorial::CombinatorialPolytope;
use super::geometry::{Halfspace, Realization};
use crate::error::PolytopeError;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceFile {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeFile {
    pub dim: usize,
    pub facets: Vec<String>,
    pub vertex_facets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Vec<HalfspaceFile>>,
}

impl PolytopeFile {
    pub fn from_combinatorial(p: &CombinatorialPolytope) -> Self {
        Self {
            dim: p.dim(),
            facets: p.facet_names().to_vec(),
            vertex_facets: p.all_vertex_facets().to_vec(),
            coords: None,
            halfspaces: None,
        }
    }

    pub fn from_built<S: Scalar>(b: &BuiltPolytope<S>) -> Self {
        let r = b.realization.to_f64();
        Self {
            coords: Some(r.coords),
            halfspaces: Some(
                r.halfspaces.into_iter().map(|h| HalfspaceFile { normal: h.normal, offset: h.offset }).collect(),
            ),
            ..Self::from_combinatorial(&b.polytope)
        }
    }

    pub fn to_combinatorial(&self) -> Result<CombinatorialPolytope, PolytopeError> {
        CombinatorialPolytope::new(self.dim, self.facets.clone(), self.vertex_facets.clone())
    }

    /// Realization from the file; halfspaces are derived from coordinates
    /// when absent.
    pub fn to_realization<S: Scalar>(&self, p: &CombinatorialPolytope) -> Result<Realization<S>, PolytopeError> {
        let coords = self.coords.as_ref().ok_or(PolytopeError::NoRealization)?;
        let coords: Vec<Vec<S>> = coords.iter().map(|c| c.iter().map(|&x| S::from_real(x)).collect()).collect();
        match &self.halfspaces {
            Some(hs) => {
                if hs.len() != p.num_facets() {
                    return Err(PolytopeError::Malformed("one halfspace per facet required".into()));
                }
                Ok(Realization {
                    coords,
                    halfspaces: hs
                        .iter()
                        .map(|h| {
                            Halfspace::new(h.normal.iter().map(|&x| S::from_real(x)).collect(), S::from_real(h.offset))
                        })
                        .collect(),
                })
            }
            None => Realization::from_coords(p, coords),
        }
    }

    pub fn to_built<S: Scalar>(&self) -> Result<BuiltPolytope<S>, PolytopeError> {
        let polytope = self.to_combinatorial()?;
        let realization = self.to_realization(&polytope)?;
        Ok(BuiltPolytope { polytope, realization, coloring: None, face_origin: None })
    }

    /// Canonical serialization: field order fixed, compact separators,
    /// trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, PolytopeError> {
        serde_json::from_str(text).map_err(|e| PolytopeError::Malformed(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::builders;

    #[test]
    fn file_reproduces_builder_output() {
        let b = builders::truncate_vertices(&builders::cube::<f64>(3), &[0], None).unwrap();
        let text = PolytopeFile::from_built(&b).to_canonical_json();
        let back = PolytopeFile::from_json(&text).unwrap();
        assert_eq!(back.to_combinatorial().unwrap(), b.polytope);
        assert_eq!(back.to_canonical_json(), text);
        let r = back.to_realization::<f64>(&b.polytope).unwrap();
        assert!(r.validate(&b.polytope).is_valid());
    }

    #[test]
    fn halfspaces_derived_from_coords() {
        let b = builders::pyramid::<f64>(4);
        let mut file = PolytopeFile::from_built(&b);
        file.halfspaces = None;
        let r = file.to_realization::<f64>(&b.polytope).unwrap();
        assert!(r.validate(&b.polytope).is_valid());
    }

    #[test]
    fn malformed_files_error() {
        assert!(PolytopeFile::from_json("{\"dim\": 2}").is_err());
        let file = PolytopeFile::from_combinatorial(&builders::cube::<f64>(2).polytope);
        assert!(matches!(
            file.to_realization::<f64>(&file.to_combinatorial().unwrap()),
            Err(PolytopeError::NoRealization)
        ));
    }
}
