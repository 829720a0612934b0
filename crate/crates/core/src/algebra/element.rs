use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Coefficient;

/// Monomial in the facet variables: sorted `(facet, exponent)` pairs with
/// positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(facet: usize) -> Self {
        Self(vec![(facet, 1)])
    }

    /// Square-free monomial on a set of facets.
    pub fn square_free(facets: &[usize]) -> Self {
        let mut fs = facets.to_vec();
        fs.sort_unstable();
        fs.dedup();
        Self(fs.into_iter().map(|f| (f, 1)).collect())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (f, e) in pairs {
            *map.entry(f).or_insert(0) += e;
        }
        Self(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn pairs(&self) -> &[(usize, u32)] {
        &self.0
    }

    /// Total exponent (the cohomological degree is twice this).
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&(_, e)| e as usize).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        self.0.iter().map(|&(f, _)| f).collect()
    }

    pub fn exponent(&self, facet: usize) -> u32 {
        self.0.iter().find(|&&(f, _)| f == facet).map_or(0, |&(_, e)| e)
    }

    pub fn is_square_free(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_pairs(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn times_var(&self, facet: usize) -> Self {
        Self::from_pairs(self.0.iter().copied().chain([(facet, 1)]))
    }

    /// Removes one factor of `facet`; `None` if absent.
    pub fn without_var(&self, facet: usize) -> Option<Self> {
        let i = self.0.iter().position(|&(f, _)| f == facet)?;
        let mut pairs = self.0.clone();
        pairs[i].1 -= 1;
        if pairs[i].1 == 0 {
            pairs.remove(i);
        }
        Some(Self(pairs))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, &(v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "v{}", v + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Integer polynomial in the facet variables, zero terms never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> Default for RingElement<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> RingElement<C> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn var(facet: usize) -> Self {
        Self::term(C::one(), Monomial::var(facet))
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(C::one(), m)
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    /// Sum of the variables of the given facets.
    pub fn sum_of_vars(facets: &[usize]) -> Self {
        let mut out = Self::zero();
        for &f in facets {
            out.add_term(Monomial::var(f), C::one());
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(C::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degrees (total exponents) present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(Monomial::degree).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// The unique degree if homogeneous; `None` for zero or mixed degree.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn component(&self, degree: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> RingElement<D> {
        let mut out = RingElement::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Renders with a variable namer, e.g. `3*v1*v2 - t1^2`.
    pub fn display_with(&self, name: impl Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> =
                m.pairs().iter().map(|&(f, e)| if e > 1 { format!("{}^{e}", name(f)) } else { name(f) }).collect();
            if vars.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&format!("{abs}*"));
                }
                s.push_str(&vars.join("*"));
            }
        }
        s
    }
}

impl<C: Coefficient> fmt::Display for RingElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(|v| format!("v{}", v + 1)))
    }
}

impl<C: Coefficient> Add for &RingElement<C> {
    type Output = RingElement<C>;
    fn add(self, rhs: Self) -> RingElement<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for &RingElement<C> {
    type Output = RingElement<C>;
    fn sub(self, rhs: Self) -> RingElement<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coefficient> Neg for &RingElement<C> {
    type Output = RingElement<C>;
    fn neg(self) -> RingElement<C> {
        self.scale(&-C::one())
    }
}

impl<C: Coefficient> Mul for &RingElement<C> {
    type Output = RingElement<C>;
    fn mul(self, rhs: Self) -> RingElement<C> {
        let mut out = RingElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.mul(b), x.clone() * y.clone());
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl<C: Coefficient> $tr for RingElement<C> {
            type Output = RingElement<C>;
            fn $f(self, rhs: Self) -> RingElement<C> {
                (&self).$f(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;

    type E = RingElement<i64>;

    #[test]
    fn binomial_expansion() {
        let x = &E::var(0) + &E::var(1);
        let cube = x.pow(3);
        assert_eq!(cube.coefficient(&Monomial::from_pairs([(0, 2), (1, 1)])), 3);
        assert_eq!(cube.coefficient(&Monomial::from_pairs([(1, 3)])), 1);
        assert_eq!(cube.len(), 4);
        assert_eq!(cube.homogeneous_degree(), Some(3));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let x = &E::var(0) - &E::var(0);
        assert!(x.is_zero());
        assert_eq!(x.to_string(), "0");
    }

    #[test]
    fn display_round_shape() {
        let x = &E::term(3, Monomial::square_free(&[0, 1])) - &E::term(1, Monomial::from_pairs([(2, 2)]));
        assert_eq!(x.to_string(), "3*v1*v2 - v3^2");
    }

    #[test]
    fn monomial_factor_removal() {
        let m = Monomial::from_pairs([(3, 2), (1, 1)]);
        assert_eq!(m.without_var(3), Some(Monomial::from_pairs([(1, 1), (3, 1)])));
        assert_eq!(m.without_var(1), Some(Monomial::from_pairs([(3, 2)])));
        assert_eq!(m.without_var(0), None);
        assert!(!m.is_square_free());
        assert_eq!(m.support(), vec![1, 3]);
    }
}
