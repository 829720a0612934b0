use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::polytope::{Coloring, CombinatorialPolytope};

/// Integer `n x m` matrix, stored by columns (one column per facet).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacteristicMatrix {
    pub n: usize,
    pub m: usize,
    pub columns: Vec<Vec<i64>>,
}

impl CharacteristicMatrix {
    pub fn new(n: usize, columns: Vec<Vec<i64>>) -> Result<Self, AlgebraError> {
        let m = columns.len();
        if let Some(c) = columns.iter().find(|c| c.len() != n) {
            return Err(AlgebraError::Shape { rows: c.len(), cols: m, n, m });
        }
        Ok(Self { n, m, columns })
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.columns[col][row]
    }

    pub fn column(&self, col: usize) -> &[i64] {
        &self.columns[col]
    }

    /// Row `i` as a linear form in the facet variables.
    pub fn row(&self, i: usize) -> Vec<i64> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    pub fn check_shape(&self, p: &CombinatorialPolytope) -> Result<(), AlgebraError> {
        if self.n != p.dim() || self.m != p.num_facets() || self.columns.iter().any(|c| c.len() != self.n) {
            return Err(AlgebraError::Shape { rows: self.n, cols: self.m, n: p.dim(), m: p.num_facets() });
        }
        Ok(())
    }

    /// Determinant of the columns at the given facets.
    pub fn minor(&self, facets: &[usize]) -> BigInt {
        let rows: Vec<Vec<BigInt>> =
            (0..self.n).map(|i| facets.iter().map(|&f| BigInt::from(self.columns[f][i])).collect()).collect();
        determinant(rows)
    }
}

/// `e_eps = eps_1 e_1 + ... + eps_n e_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignVector(Vec<i64>);

impl SignVector {
    pub fn new(entries: Vec<i64>) -> Result<Self, AlgebraError> {
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(AlgebraError::Parse { pos: 0, msg: "sign vector entries must be +1 or -1".into() });
        }
        Ok(Self(entries))
    }

    /// The preferred sign vector `(-1, ..., -1)`.
    pub fn preferred(n: usize) -> Self {
        Self(vec![-1; n])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

fn check_coloring(p: &CombinatorialPolytope, h: &Coloring, colors: usize) -> Result<(), AlgebraError> {
    h.validate(p)?;
    if h.num_colors() != colors {
        return Err(AlgebraError::WrongColorCount { expected: colors, found: h.num_colors() });
    }
    Ok(())
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// Column `j` is `e_{h(j)}`.
pub fn canonical_characteristic(p: &CombinatorialPolytope, h: &Coloring) -> Result<CharacteristicMatrix, AlgebraError> {
    let n = p.dim();
    check_coloring(p, h, n)?;
    CharacteristicMatrix::new(n, h.colors().iter().map(|&c| unit(n, c)).collect())
}

/// Column `j` is `e_{h(j)}` for colors below `n` and `e_eps` for the
/// distinguished color `n`, whose facets must all be simplices.
pub fn special_characteristic(
    p: &CombinatorialPolytope,
    h: &Coloring,
    eps: Option<&SignVector>,
) -> Result<CharacteristicMatrix, AlgebraError> {
    let n = p.dim();
    check_coloring(p, h, n + 1)?;
    let eps = eps.cloned().unwrap_or_else(|| SignVector::preferred(n));
    if eps.0.len() != n {
        return Err(AlgebraError::Shape { rows: eps.0.len(), cols: 1, n, m: 1 });
    }
    for f in h.class(n) {
        if p.facet_vertex_set(f).len() != n {
            return Err(AlgebraError::NotSimplexFacet { facet: f, color: n });
        }
    }
    let columns = h.colors().iter().map(|&c| if c < n { unit(n, c) } else { eps.0.clone() }).collect();
    CharacteristicMatrix::new(n, columns)
}

/// Facets of the distinguished color `n`, in facet order. These are the
/// variables `t1, t2, ...`.
pub fn special_facets(p: &CombinatorialPolytope, h: &Coloring) -> Vec<usize> {
    h.class(p.dim())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicReport {
    pub valid: bool,
    /// Vertices whose facet columns do not form a lattice basis.
    pub bad_vertices: Vec<usize>,
}

pub fn validate_characteristic(
    p: &CombinatorialPolytope,
    lambda: &CharacteristicMatrix,
) -> Result<CharacteristicReport, AlgebraError> {
    lambda.check_shape(p)?;
    let bad_vertices: Vec<usize> = (0..p.num_vertices())
        .filter(|&v| {
            let fs = p.vertex_facets(v);
            fs.len() != lambda.n || !lambda.minor(fs).abs().is_one()
        })
        .collect();
    Ok(CharacteristicReport { valid: bad_vertices.is_empty(), bad_vertices })
}
