//! The graded ring `Z[v_1..v_m] / (I + J)`: Stanley-Reisner ideal `I`,
//! linear forms `J` given by the rows of the characteristic matrix.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use super::characteristic::{
    canonical_characteristic, special_characteristic, special_facets, CharacteristicMatrix, SignVector,
};
use super::element::{Monomial, RingElement};
use super::hnf::Lattice;
use super::literal::{self, VariableNames};
use crate::error::AlgebraError;
use crate::polytope::{Coloring, CombinatorialPolytope};
use crate::scalar::Coefficient;

/// One graded piece: square-free face monomials of a fixed degree and the
/// lattice of relations among them.
#[derive(Clone, Debug)]
pub struct GradedBasis<C> {
    pub degree: usize,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    pub relations: Lattice<C>,
    /// Longest square-rewriting chain met while building the relations.
    pub rewrite_depth: usize,
}

impl<C: Coefficient> GradedBasis<C> {
    /// Free rank of the quotient.
    pub fn quotient_rank(&self) -> usize {
        self.monomials.len() - self.relations.rank()
    }

    fn to_vector(&self, x: &RingElement<C>) -> Vec<C> {
        let mut v = vec![C::zero(); self.monomials.len()];
        for (m, c) in x.terms() {
            v[self.index[m]] = c.clone();
        }
        v
    }

    fn element(&self, v: &[C]) -> RingElement<C> {
        let mut out = RingElement::zero();
        for (m, c) in self.monomials.iter().zip(v) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

type Memo<C> = HashMap<Monomial, (RingElement<C>, usize)>;

pub struct CohomologyRing<C> {
    polytope: CombinatorialPolytope,
    lambda: CharacteristicMatrix,
    names: VariableNames,
    depth_cap: usize,
    bases: Vec<OnceLock<Result<Arc<GradedBasis<C>>, AlgebraError>>>,
}

impl<C: Coefficient> CohomologyRing<C> {
    pub fn new(polytope: CombinatorialPolytope, lambda: CharacteristicMatrix) -> Result<Self, AlgebraError> {
        polytope.require_simple()?;
        lambda.check_shape(&polytope)?;
        let n = polytope.dim();
        let names = VariableNames::plain(polytope.num_facets());
        Ok(Self { polytope, lambda, names, depth_cap: 4 * n, bases: (0..=n).map(|_| OnceLock::new()).collect() })
    }

    /// Ring of the canonical characteristic of an `n`-coloring.
    pub fn canonical(polytope: CombinatorialPolytope, h: &Coloring) -> Result<Self, AlgebraError> {
        let lambda = canonical_characteristic(&polytope, h)?;
        Self::new(polytope, lambda)
    }

    /// Ring of the sign-vector characteristic of an `(n+1)`-coloring; the
    /// distinguished facets are named `t1, t2, ...`.
    pub fn special(
        polytope: CombinatorialPolytope,
        h: &Coloring,
        eps: Option<&SignVector>,
    ) -> Result<Self, AlgebraError> {
        let lambda = special_characteristic(&polytope, h, eps)?;
        let special = special_facets(&polytope, h);
        let mut ring = Self::new(polytope, lambda)?;
        ring.names = VariableNames::new(ring.polytope.num_facets(), special);
        Ok(ring)
    }

    pub fn with_depth_cap(mut self, cap: usize) -> Self {
        self.depth_cap = cap;
        self
    }

    pub fn polytope(&self) -> &CombinatorialPolytope {
        &self.polytope
    }

    pub fn characteristic(&self) -> &CharacteristicMatrix {
        &self.lambda
    }

    pub fn names(&self) -> &VariableNames {
        &self.names
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn parse(&self, text: &str) -> Result<RingElement<C>, AlgebraError> {
        literal::parse(text, &self.names)
    }

    pub fn render(&self, x: &RingElement<C>) -> String {
        self.names.render(x)
    }

    pub fn var(&self, facet: usize) -> RingElement<C> {
        RingElement::var(facet)
    }

    fn is_face(&self, m: &Monomial) -> bool {
        self.polytope.facets_meet(&m.support())
    }

    /// Rewrites a monomial into square-free face monomials. Returns the
    /// result and the length of the longest substitution chain used.
    fn reduce_monomial(
        &self,
        m: &Monomial,
        level: usize,
        memo: &mut Memo<C>,
    ) -> Result<(RingElement<C>, usize), AlgebraError> {
        if let Some((r, d)) = memo.get(m) {
            if level + d > self.depth_cap {
                return Err(AlgebraError::DepthExceeded {
                    cap: self.depth_cap,
                    monomial: self.names.render(&RingElement::<C>::monomial(m.clone())),
                });
            }
            return Ok((r.clone(), *d));
        }
        if !self.is_face(m) {
            return Ok((RingElement::zero(), 0));
        }
        if m.is_square_free() {
            return Ok((RingElement::monomial(m.clone()), 0));
        }
        if level >= self.depth_cap {
            return Err(AlgebraError::DepthExceeded {
                cap: self.depth_cap,
                monomial: self.names.render(&RingElement::<C>::monomial(m.clone())),
            });
        }
        let &(i, _) = m.pairs().iter().find(|&&(_, e)| e >= 2).expect("not square-free");
        let rest = m.without_var(i).expect("contains i");
        let support = m.support();
        let mut best: Option<(usize, usize, Vec<usize>)> = None;
        for r in 0..self.lambda.n {
            if self.lambda.entry(r, i).abs() != 1 {
                continue;
            }
            let live: Vec<usize> = (0..self.lambda.m)
                .filter(|&j| j != i && self.lambda.entry(r, j) != 0)
                .filter(|&j| {
                    let mut s = support.clone();
                    s.push(j);
                    self.polytope.facets_meet(&s)
                })
                .collect();
            let squares = live.iter().filter(|j| support.contains(j)).count();
            if best.as_ref().is_none_or(|b| squares < b.1) {
                best = Some((r, squares, live));
            }
        }
        let (r, _, live) = best.ok_or(AlgebraError::NoUnitPivot(i))?;
        // v_i = -lambda_ri * sum_{j != i} lambda_rj v_j
        let pivot = self.lambda.entry(r, i);
        let mut out = RingElement::zero();
        let mut depth = 0;
        for j in live {
            let coef = C::int(-pivot * self.lambda.entry(r, j));
            let (sub, d) = self.reduce_monomial(&rest.times_var(j), level + 1, memo)?;
            depth = depth.max(d);
            out = &out + &sub.scale(&coef);
        }
        memo.insert(m.clone(), (out.clone(), depth + 1));
        Ok((out, depth + 1))
    }

    fn reduce_element(&self, x: &RingElement<C>, memo: &mut Memo<C>) -> Result<(RingElement<C>, usize), AlgebraError> {
        let mut out = RingElement::zero();
        let mut depth = 0;
        for (m, c) in x.terms() {
            let (r, d) = self.reduce_monomial(m, 0, memo)?;
            depth = depth.max(d);
            out = &out + &r.scale(c);
        }
        Ok((out, depth))
    }

    /// Stanley-Reisner and square reduction without the linear relations
    /// between square-free monomials.
    pub fn square_reduce(&self, x: &RingElement<C>) -> Result<RingElement<C>, AlgebraError> {
        Ok(self.reduce_element(x, &mut HashMap::new())?.0)
    }

    /// Length of the longest square-substitution chain for `m`.
    pub fn rewrite_depth(&self, m: &Monomial) -> Result<usize, AlgebraError> {
        Ok(self.reduce_monomial(m, 0, &mut HashMap::new())?.1)
    }

    /// Graded piece of the given degree (total exponent), built once.
    pub fn basis(&self, degree: usize) -> Result<Arc<GradedBasis<C>>, AlgebraError> {
        if degree > self.dim() {
            return Ok(Arc::new(GradedBasis {
                degree,
                monomials: Vec::new(),
                index: HashMap::new(),
                relations: Lattice::from_rows(Vec::new(), 0),
                rewrite_depth: 0,
            }));
        }
        self.bases[degree].get_or_init(|| self.build_basis(degree).map(Arc::new)).clone()
    }

    fn build_basis(&self, d: usize) -> Result<GradedBasis<C>, AlgebraError> {
        let n = self.dim();
        let monomials: Vec<Monomial> = if d == 0 {
            vec![Monomial::one()]
        } else {
            let mut ms: Vec<Monomial> =
                self.polytope.enumerate_faces(n - d)?.iter().map(|f| Monomial::square_free(&f.facets)).collect();
            ms.sort();
            ms
        };
        let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        let mut memo = HashMap::new();
        let mut rewrite_depth = 0;
        if d > 0 {
            for mu in self.face_supported_monomials(d - 1) {
                for r in 0..self.lambda.n {
                    let mut rel = RingElement::zero();
                    for j in 0..self.lambda.m {
                        let c = self.lambda.entry(r, j);
                        if c != 0 {
                            rel.add_term(mu.times_var(j), C::int(c));
                        }
                    }
                    let (red, depth) = self.reduce_element(&rel, &mut memo)?;
                    rewrite_depth = rewrite_depth.max(depth);
                    let mut v = vec![C::zero(); monomials.len()];
                    for (m, c) in red.terms() {
                        v[index[m]] = c.clone();
                    }
                    rows.push(v);
                }
            }
        }
        let relations = Lattice::from_rows(rows, monomials.len());
        Ok(GradedBasis { degree: d, monomials, index, relations, rewrite_depth })
    }

    /// All monomials of degree `d` (squares allowed) whose support is a face.
    fn face_supported_monomials(&self, d: usize) -> Vec<Monomial> {
        let m = self.polytope.num_facets();
        let mut out = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        fn rec(
            p: &CombinatorialPolytope,
            m: usize,
            d: usize,
            start: usize,
            stack: &mut Vec<usize>,
            out: &mut Vec<Monomial>,
        ) {
            if stack.len() == d {
                out.push(Monomial::from_pairs(stack.iter().map(|&f| (f, 1))));
                return;
            }
            for f in start..m {
                stack.push(f);
                let mut s = stack.clone();
                s.dedup();
                if p.facets_meet(&s) {
                    rec(p, m, d, f, stack, out);
                }
                stack.pop();
            }
        }
        rec(&self.polytope, m, d, 0, &mut stack, &mut out);
        out
    }

    /// Canonical representative: square-free face monomials, reduced
    /// modulo the relation lattice of each degree.
    pub fn normal_form(&self, x: &RingElement<C>) -> Result<RingElement<C>, AlgebraError> {
        let (reduced, _) = self.reduce_element(x, &mut HashMap::new())?;
        let mut out = RingElement::zero();
        for d in reduced.degrees() {
            let basis = self.basis(d)?;
            let part = reduced.component(d);
            if basis.monomials.is_empty() {
                continue;
            }
            let v = basis.relations.reduce(&basis.to_vector(&part));
            out = &out + &basis.element(&v);
        }
        Ok(out)
    }

    pub fn equal(&self, a: &RingElement<C>, b: &RingElement<C>) -> Result<bool, AlgebraError> {
        Ok(self.normal_form(&(a - b))?.is_zero())
    }

    /// Zero test for a homogeneous element.
    pub fn is_zero_in_degree(&self, x: &RingElement<C>) -> Result<bool, AlgebraError> {
        if x.is_zero() {
            return Ok(true);
        }
        if x.homogeneous_degree().is_none() {
            let ds = x.degrees();
            return Err(AlgebraError::NotHomogeneous { expected: ds[0], found: ds[ds.len() - 1] });
        }
        Ok(self.normal_form(x)?.is_zero())
    }

    /// Pairing with the fundamental class, normalized so that the monomial
    /// of the facets at `ref_vertex` integrates to `+1`.
    pub fn integrate(&self, x: &RingElement<C>, ref_vertex: usize) -> Result<C, AlgebraError> {
        let n = self.dim();
        if ref_vertex >= self.polytope.num_vertices() {
            return Err(crate::error::PolytopeError::NoSuchVertex(ref_vertex).into());
        }
        if let Some(&d) = x.degrees().iter().find(|&&d| d != n) {
            return Err(AlgebraError::NotHomogeneous { expected: n, found: d });
        }
        let top = self.basis(n)?;
        let free = top.relations.free_columns();
        if free.len() != 1 {
            return Err(AlgebraError::TopRank(free.len()));
        }
        if !top.relations.is_saturated() {
            return Err(AlgebraError::NotAGenerator("top degree has torsion".into()));
        }
        let c0 = free[0];
        let (reduced, _) = self.reduce_element(x, &mut HashMap::new())?;
        let value = top.relations.reduce(&top.to_vector(&reduced))[c0].clone();
        let generator = Monomial::square_free(self.polytope.vertex_facets(ref_vertex));
        let g = top.relations.reduce(&top.to_vector(&RingElement::monomial(generator)))[c0].clone();
        if !g.is_unit() {
            return Err(AlgebraError::NotAGenerator(g.to_string()));
        }
        Ok(value * g)
    }

    /// `omega = sum of the variables of the facets at vertex V`.
    pub fn vertex_class(&self, vertex: usize) -> Result<RingElement<C>, AlgebraError> {
        vertex_class(&self.polytope, vertex)
    }

    /// `t = t_1 + ... + t_k`, the distinguished facets.
    pub fn simplicial_class(&self) -> RingElement<C> {
        RingElement::sum_of_vars(self.names.special())
    }

    /// Longest rewriting chain over the graded pieces built so far.
    pub fn max_rewrite_depth(&self) -> usize {
        self.bases
            .iter()
            .filter_map(|b| b.get().and_then(|r| r.as_ref().ok()).map(|b| b.rewrite_depth))
            .max()
            .unwrap_or(0)
    }
}

pub fn vertex_class<C: Coefficient>(p: &CombinatorialPolytope, vertex: usize) -> Result<RingElement<C>, AlgebraError> {
    if vertex >= p.num_vertices() {
        return Err(crate::error::PolytopeError::NoSuchVertex(vertex).into());
    }
    Ok(RingElement::sum_of_vars(p.vertex_facets(vertex)))
}

/// Sum of the variables of all facets with the distinguished color `n`.
pub fn simplicial_class<C: Coefficient>(p: &CombinatorialPolytope, h: &Coloring) -> RingElement<C> {
    RingElement::sum_of_vars(&special_facets(p, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::builders;
    use num_bigint::BigInt;

    fn cube_ring(n: usize) -> CohomologyRing<i64> {
        let b = builders::cube::<f64>(n);
        CohomologyRing::canonical(b.polytope, b.coloring.as_ref().unwrap()).unwrap()
    }

    #[test]
    fn square_ring_top_degree() {
        let ring = cube_ring(2);
        let top = ring.basis(2).unwrap();
        assert_eq!(top.monomials.len(), 4);
        assert_eq!(top.quotient_rank(), 1);
        // opposite facets: v1 = -v3 so v1 v2 = -v3 v2
        let a = ring.parse("v1*v2").unwrap();
        let b = ring.parse("-v3*v2").unwrap();
        assert!(ring.equal(&a, &b).unwrap());
        assert_eq!(ring.integrate(&a, 0).unwrap(), 1);
    }

    #[test]
    fn omega_cubed_on_cube() {
        let ring = cube_ring(3);
        let omega = ring.vertex_class(0).unwrap();
        assert_eq!(ring.integrate(&omega.pow(3), 0).unwrap(), 6);
        assert_eq!(ring.max_rewrite_depth(), 1);
    }

    #[test]
    fn same_color_products_and_squares_vanish() {
        let ring = cube_ring(3);
        for x in ["v1*v4", "v2^2", "v1 + v4", "v3*v6*v1"] {
            assert!(ring.is_zero_in_degree(&ring.parse(x).unwrap()).unwrap(), "{x}");
        }
        assert!(!ring.is_zero_in_degree(&ring.parse("v1*v2").unwrap()).unwrap());
        assert!(ring.is_zero_in_degree(&ring.parse("v1 + v1*v2").unwrap()).is_err());
    }

    #[test]
    fn truncated_cube_special_class() {
        let b = builders::truncate_vertices(&builders::cube::<f64>(3), &[0], None).unwrap();
        let ring = CohomologyRing::<i64>::special(b.polytope.clone(), b.coloring.as_ref().unwrap(), None).unwrap();
        let t = ring.simplicial_class();
        assert_eq!(ring.render(&t), "t1");
        // reference vertex on the triangle
        let v = b.polytope.facet_vertices(6)[0];
        assert_eq!(ring.integrate(&t.pow(3), v).unwrap(), 1);
    }

    #[test]
    fn big_coefficients_agree() {
        let b = builders::cube::<f64>(3);
        let ring = CohomologyRing::<BigInt>::canonical(b.polytope, b.coloring.as_ref().unwrap()).unwrap();
        let omega = ring.vertex_class(5).unwrap();
        assert_eq!(ring.integrate(&omega.pow(3), 5).unwrap(), BigInt::from(6));
    }

    #[test]
    fn non_unit_matrix_is_rejected_for_reduction() {
        let b = builders::cube::<f64>(2);
        let lambda = CharacteristicMatrix::new(2, vec![vec![2, 0], vec![0, 1], vec![2, 0], vec![0, 1]]).unwrap();
        let ring = CohomologyRing::<i64>::new(b.polytope, lambda).unwrap();
        let x = ring.parse("v1^2").unwrap();
        assert!(matches!(ring.normal_form(&x), Err(AlgebraError::NoUnitPivot(0))));
    }

    #[test]
    fn depth_cap_reported() {
        let b = builders::truncate_vertices(&builders::cube::<f64>(3), &[0], None).unwrap();
        let ring =
            CohomologyRing::<i64>::special(b.polytope, b.coloring.as_ref().unwrap(), None).unwrap().with_depth_cap(1);
        let x = ring.parse("t1^3").unwrap();
        assert!(matches!(ring.normal_form(&x), Err(AlgebraError::DepthExceeded { cap: 1, .. })));
    }
}
