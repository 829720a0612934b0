//! Relation suites: the ring identities behind the covering theorems,
//! each checked as an exact normal-form equality.

use serde::Serialize;

use super::element::{Monomial, RingElement};
use super::ring::CohomologyRing;
use crate::error::AlgebraError;
use crate::polytope::combinatorial::subsets;
use crate::polytope::Coloring;
use crate::scalar::{factorial, Coefficient};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    pub cases: usize,
    /// First failing case, if any.
    pub failure: Option<String>,
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, case: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(case());
        }
    }

    fn finish(self, name: &str) -> IdentityCheck {
        IdentityCheck { name: name.into(), holds: self.failure.is_none(), cases: self.cases, failure: self.failure }
    }
}

fn same_color_pairs(ring_p: &crate::polytope::CombinatorialPolytope, h: &Coloring) -> Vec<(usize, usize)> {
    let m = ring_p.num_facets();
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if h.color(i) == h.color(j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Square-free face monomials of degree `< n`.
fn lower_face_monomials<C: Coefficient>(ring: &CohomologyRing<C>) -> Result<Vec<Monomial>, AlgebraError> {
    let mut out = Vec::new();
    for d in 1..ring.dim() {
        out.extend(ring.basis(d)?.monomials.iter().cloned());
    }
    Ok(out)
}

/// Identities of the canonical ring of an `n`-coloring.
pub fn canonical_identities<C: Coefficient>(
    ring: &CohomologyRing<C>,
    h: &Coloring,
) -> Result<Vec<IdentityCheck>, AlgebraError> {
    let p = ring.polytope();
    let n = ring.dim();
    let m = p.num_facets();
    let show = |x: &RingElement<C>| ring.render(x);
    let mut out = Vec::new();

    let mut t = Tally::default();
    for (i, j) in same_color_pairs(p, h) {
        let x = &ring.var(i) * &ring.var(j);
        t.record(ring.is_zero_in_degree(&x)?, || show(&x));
    }
    out.push(t.finish("same-color products vanish"));

    let mut t = Tally::default();
    for c in 0..n {
        let x = RingElement::sum_of_vars(&h.class(c));
        t.record(ring.is_zero_in_degree(&x)?, || show(&x));
    }
    out.push(t.finish("color class sums vanish"));

    let mut t = Tally::default();
    for i in 0..m {
        let x = ring.var(i).pow(2);
        t.record(ring.is_zero_in_degree(&x)?, || show(&x));
    }
    out.push(t.finish("squares vanish"));

    let mut t = Tally::default();
    let mut powers = Tally::default();
    let nf = factorial::<C>(n as u32);
    for v in 0..p.num_vertices() {
        let omega = ring.vertex_class(v)?;
        let facets = p.vertex_facets(v);
        let mut power = RingElement::one();
        for k in 1..=n {
            power = &power * &omega;
            let mut rhs = RingElement::zero();
            for j in subsets(facets, k) {
                rhs.add_term(Monomial::square_free(&j), factorial::<C>(k as u32));
            }
            let ok = ring.equal(&power, &rhs)? && !ring.is_zero_in_degree(&power)?;
            powers.record(ok, || format!("vertex {v}, k = {k}"));
        }
        let value = ring.integrate(&power, v)?;
        t.record(value == nf, || format!("vertex {v}: integral {value}"));
    }
    out.push(powers.finish("powers of the vertex class"));
    out.push(t.finish("top power of the vertex class integrates to n!"));

    let mut t = Tally::default();
    for mu in lower_face_monomials(ring)? {
        for j1 in 0..m {
            let lhs = &ring.var(j1) * &RingElement::monomial(mu.clone());
            let mut others = RingElement::zero();
            for j in h.class(h.color(j1)) {
                if j != j1 {
                    others.add_term(mu.times_var(j), -C::one());
                }
            }
            t.record(ring.equal(&lhs, &others)?, || format!("v{} * {}", j1 + 1, mu));
        }
    }
    out.push(t.finish("generator replacement within a color"));

    let mut t = Tally::default();
    let top = ring.basis(n)?;
    t.record(top.quotient_rank() == 1, || format!("rank {}", top.quotient_rank()));
    t.record(ring.max_rewrite_depth() <= 2, || format!("depth {}", ring.max_rewrite_depth()));
    out.push(t.finish("top degree has rank one, rewriting depth at most two"));
    Ok(out)
}

/// The unique facet of color `i` adjacent to the simplex facet `tj`.
pub fn neighbor_of_color(
    ring_p: &crate::polytope::CombinatorialPolytope,
    h: &Coloring,
    tj: usize,
    i: usize,
) -> Option<usize> {
    h.class(i).into_iter().find(|&f| ring_p.facets_meet(&[tj, f]))
}

/// Vertex of the first distinguished facet lying on its neighbors of
/// colors `0..n-1`, i.e. the vertex of `v_{1,1} ... v_{n-1,1} t_1`.
pub fn special_reference_vertex<C: Coefficient>(ring: &CohomologyRing<C>, h: &Coloring) -> Option<usize> {
    let p = ring.polytope();
    let n = ring.dim();
    let t1 = *ring.names().special().first()?;
    let mut facets = vec![t1];
    for i in 0..n - 1 {
        facets.push(neighbor_of_color(p, h, t1, i)?);
    }
    facets.sort_unstable();
    (0..p.num_vertices()).find(|&v| p.vertex_facets(v) == facets.as_slice())
}

/// Identities of the sign-vector ring of a special `(n+1)`-coloring with
/// the preferred sign vector.
pub fn special_identities<C: Coefficient>(
    ring: &CohomologyRing<C>,
    h: &Coloring,
) -> Result<Vec<IdentityCheck>, AlgebraError> {
    let p = ring.polytope();
    let n = ring.dim();
    let show = |x: &RingElement<C>| ring.render(x);
    let specials = ring.names().special().to_vec();
    let t_sum = ring.simplicial_class();
    let mut out = Vec::new();

    let mut t = Tally::default();
    for (i, j) in same_color_pairs(p, h) {
        let x = &ring.var(i) * &ring.var(j);
        t.record(ring.is_zero_in_degree(&x)?, || show(&x));
    }
    out.push(t.finish("same-color products vanish"));

    let mut t = Tally::default();
    for c in 0..n {
        let x = &t_sum - &RingElement::sum_of_vars(&h.class(c));
        t.record(ring.is_zero_in_degree(&x)?, || show(&x));
    }
    out.push(t.finish("simplicial class equals every color class sum"));

    let mut t = Tally::default();
    let mut chain = Tally::default();
    let mut unit = Tally::default();
    let reference = special_reference_vertex(ring, h);
    for &tj in &specials {
        let tv = ring.var(tj);
        let mut vs = Vec::new();
        for i in 0..n {
            let Some(f) = neighbor_of_color(p, h, tj, i) else {
                t.record(false, || format!("{} has no neighbor of color {i}", show(&tv)));
                continue;
            };
            vs.push(f);
            let lhs = tv.pow(2);
            let rhs = &tv * &ring.var(f);
            t.record(ring.equal(&lhs, &rhs)?, || format!("{} vs {}", show(&lhs), show(&rhs)));
        }
        if vs.len() != n {
            continue;
        }
        let mut rhs = tv.clone();
        for &f in &vs[..n - 1] {
            rhs = &rhs * &ring.var(f);
        }
        let power = tv.pow(n as u32);
        chain.record(ring.equal(&power, &rhs)?, || show(&tv));
        if let Some(r) = reference {
            let a = ring.integrate(&power, r)?;
            let b = ring.integrate(&rhs, r)?;
            unit.record(a.is_one() && b.is_one(), || format!("{}: integrals {a}, {b}", show(&tv)));
        }
    }
    out.push(t.finish("square of a simplex class"));
    out.push(chain.finish("top power of a simplex class is a vertex monomial"));
    out.push(unit.finish("top power of a simplex class integrates to one"));

    let mut t = Tally::default();
    if let (Some(&t1), Some(r)) = (specials.first(), reference) {
        let k = C::int(specials.len() as i64);
        let power = t_sum.pow(n as u32);
        let single = ring.var(t1).pow(n as u32).scale(&k);
        t.record(ring.equal(&power, &single)?, || "t^n vs k t1^n".into());
        let value = ring.integrate(&power, r)?;
        t.record(value == k, || format!("integral {value}"));
    }
    out.push(t.finish("top power of the simplicial class integrates to k"));
    Ok(out)
}
