//! Textual builder descriptors.
//!
//! ```text
//! desc   := atom ('/' op)*
//! atom   := cube:N | simplex:N | polygon:M | hexagon | pentagon | prism:M
//!         | cross:N | octahedron | pyramid:M | product(desc,desc)
//! op     := trunc:V[,V...] | total
//! ```
//!
//! `trunc` takes vertex indices of the polytope it is applied to.

use super::builders::{self, BuiltPolytope};
use crate::error::PolytopeError;
use crate::scalar::Scalar;

pub fn build<S: Scalar>(desc: &str) -> Result<BuiltPolytope<S>, PolytopeError> {
    let desc = desc.trim();
    let bad = || PolytopeError::BadDescriptor(desc.to_string());
    let (atom, ops) = split_ops(desc).ok_or_else(bad)?;
    let mut built = build_atom::<S>(atom)?;
    for op in ops {
        built = if op == "total" {
            builders::total_truncation(&built, None)?
        } else if let Some(list) = op.strip_prefix("trunc:") {
            let vertices =
                list.split(',').map(|s| s.trim().parse::<usize>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad())?;
            builders::truncate_vertices(&built, &vertices, None)?
        } else {
            return Err(bad());
        };
    }
    Ok(built)
}

/// Splits trailing `/op` segments, ignoring slashes inside parentheses.
fn split_ops(desc: &str) -> Option<(&str, Vec<&str>)> {
    let mut depth = 0i32;
    let mut cuts = Vec::new();
    for (i, ch) in desc.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => cuts.push(i),
            _ => {}
        }
        if depth < 0 {
            return None;
        }
    }
    if depth != 0 {
        return None;
    }
    let mut parts = Vec::new();
    let mut start = 0;
    for c in cuts {
        parts.push(&desc[start..c]);
        start = c + 1;
    }
    parts.push(&desc[start..]);
    let atom = parts.remove(0);
    Some((atom, parts))
}

fn build_atom<S: Scalar>(atom: &str) -> Result<BuiltPolytope<S>, PolytopeError> {
    let bad = || PolytopeError::BadDescriptor(atom.to_string());
    if let Some(inner) = atom.strip_prefix("product(").and_then(|s| s.strip_suffix(')')) {
        let mut depth = 0i32;
        let split = inner.char_indices().find(|&(_, ch)| {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            ch == ',' && depth == 0
        });
        let (i, _) = split.ok_or_else(bad)?;
        let a = build::<S>(&inner[..i])?;
        let b = build::<S>(&inner[i + 1..])?;
        return Ok(builders::product(&a, &b));
    }
    match atom {
        "hexagon" => return Ok(builders::polygon(6)),
        "pentagon" => return Ok(builders::polygon(5)),
        "octahedron" => return Ok(builders::cross_polytope(3)),
        _ => {}
    }
    let (name, arg) = atom.split_once(':').ok_or_else(bad)?;
    let k: usize = arg.trim().parse().map_err(|_| bad())?;
    let out = match (name.trim(), k) {
        ("cube", 1..) => builders::cube(k),
        ("simplex", 1..) => builders::simplex(k),
        ("polygon", 3..) => builders::polygon(k),
        ("prism", 3..) => builders::prism(k),
        ("cross", 2..) => builders::cross_polytope(k),
        ("pyramid", 3..) => builders::pyramid(k),
        _ => return Err(bad()),
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_catalog_descriptors() {
        assert_eq!(build::<f64>("cube:3").unwrap().polytope.num_facets(), 6);
        assert_eq!(build::<f64>("hexagon").unwrap().polytope.num_facets(), 6);
        assert_eq!(build::<f64>("prism:5").unwrap().polytope.num_facets(), 7);
        assert_eq!(build::<f64>("cube:3/trunc:0").unwrap().polytope.num_facets(), 7);
        assert_eq!(build::<f64>("cube:3/trunc:0,3,5").unwrap().polytope.num_facets(), 9);
        assert_eq!(build::<f64>("simplex:3/total").unwrap().polytope.num_facets(), 14);
        let p = build::<f64>("product(cube:1,product(cube:1,cube:1))").unwrap();
        assert_eq!((p.dim(), p.polytope.num_facets()), (3, 6));
        assert_eq!(build::<f64>("pyramid:4").unwrap().polytope.num_vertices(), 5);
    }

    #[test]
    fn rejects_garbage() {
        for d in ["cube", "cube:0", "cube:x", "sphere:2", "cube:3/flip", "product(cube:1)", "product(cube:1,cube:1"] {
            assert!(build::<f64>(d).is_err(), "{d}");
        }
    }
}
