//! Ring element literals such as `3*v1*v2 - t1^2` or `(v1+v2+v3)^3`.
//!
//! `v<i>` is the variable of facet `i` (1-based). `t<j>` is the `j`-th
//! facet of the distinguished color, in facet order.

use super::element::RingElement;
use crate::error::AlgebraError;
use crate::scalar::Coefficient;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableNames {
    m: usize,
    special: Vec<usize>,
}

impl VariableNames {
    pub fn new(m: usize, special: Vec<usize>) -> Self {
        Self { m, special }
    }

    pub fn plain(m: usize) -> Self {
        Self::new(m, Vec::new())
    }

    pub fn special(&self) -> &[usize] {
        &self.special
    }

    pub fn resolve(&self, name: &str) -> Result<usize, AlgebraError> {
        let unknown = || AlgebraError::UnknownVariable(name.to_string());
        let (kind, idx) = name.split_at(1);
        let idx: usize = idx.parse().map_err(|_| unknown())?;
        if idx == 0 {
            return Err(unknown());
        }
        match kind {
            "v" if idx <= self.m => Ok(idx - 1),
            "t" => self.special.get(idx - 1).copied().ok_or_else(unknown),
            _ => Err(unknown()),
        }
    }

    /// `t<j>` for distinguished facets, `v<i>` otherwise.
    pub fn name(&self, facet: usize) -> String {
        match self.special.iter().position(|&f| f == facet) {
            Some(j) => format!("t{}", j + 1),
            None => format!("v{}", facet + 1),
        }
    }

    pub fn render<C: Coefficient>(&self, x: &RingElement<C>) -> String {
        x.display_with(|f| self.name(f))
    }
}

pub fn parse<C: Coefficient>(text: &str, names: &VariableNames) -> Result<RingElement<C>, AlgebraError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, names };
    let x = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(x)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    names: &'a VariableNames,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr<C: Coefficient>(&mut self) -> Result<RingElement<C>, AlgebraError> {
        let mut acc = self.signed_term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn signed_term<C: Coefficient>(&mut self) -> Result<RingElement<C>, AlgebraError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.term()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()
            }
            _ => self.term(),
        }
    }

    fn term<C: Coefficient>(&mut self) -> Result<RingElement<C>, AlgebraError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power<C: Coefficient>(&mut self) -> Result<RingElement<C>, AlgebraError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.digits().ok_or_else(|| self.err("expected exponent"))?;
            let k: u32 = k.parse().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn atom<C: Coefficient>(&mut self) -> Result<RingElement<C>, AlgebraError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let x = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(x)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().expect("digit present");
                let v: i64 = d.parse().map_err(|_| self.err("integer too large"))?;
                Ok(RingElement::constant(C::int(v)))
            }
            Some(b'v' | b't') => {
                let start = self.pos;
                self.pos += 1;
                if self.digits().is_none() {
                    return Err(self.err("expected variable index"));
                }
                let name = String::from_utf8_lossy(&self.s[start..self.pos]).into_owned();
                Ok(RingElement::var(self.names.resolve(&name)?))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::element::Monomial;

    type E = RingElement<i64>;

    #[test]
    fn parses_brief_example() {
        let names = VariableNames::new(7, vec![6]);
        let x: E = parse("3*v1*v2 - t1^2", &names).unwrap();
        assert_eq!(x.coefficient(&Monomial::square_free(&[0, 1])), 3);
        assert_eq!(x.coefficient(&Monomial::from_pairs([(6, 2)])), -1);
        assert_eq!(names.render(&x), "3*v1*v2 - t1^2");
    }

    #[test]
    fn powers_and_parentheses() {
        let names = VariableNames::plain(3);
        let x: E = parse("(v1+v2+v3)^3", &names).unwrap();
        assert_eq!(x.coefficient(&Monomial::square_free(&[0, 1, 2])), 6);
        let y: E = parse(" -2 * (v1 - v2) + 2*v1", &names).unwrap();
        assert_eq!(y, E::term(2, Monomial::var(1)));
        let z: E = parse("v1 * -v2", &names).unwrap();
        assert_eq!(z, E::term(-1, Monomial::square_free(&[0, 1])));
    }

    #[test]
    fn errors_carry_positions() {
        let names = VariableNames::new(3, vec![2]);
        assert!(matches!(parse::<i64>("v4", &names), Err(AlgebraError::UnknownVariable(_))));
        assert!(matches!(parse::<i64>("t2", &names), Err(AlgebraError::UnknownVariable(_))));
        assert!(matches!(parse::<i64>("v0", &names), Err(AlgebraError::UnknownVariable(_))));
        assert!(matches!(parse::<i64>("v1 +", &names), Err(AlgebraError::Parse { pos: 4, .. })));
        assert!(matches!(parse::<i64>("(v1", &names), Err(AlgebraError::Parse { .. })));
        assert!(matches!(parse::<i64>("v1 v2", &names), Err(AlgebraError::Parse { pos: 3, .. })));
        assert!(matches!(parse::<i64>("x1", &names), Err(AlgebraError::Parse { pos: 0, .. })));
    }
}
