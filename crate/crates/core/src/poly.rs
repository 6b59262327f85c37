//! Sparse multivariate polynomials over an exact field.
//!
//! A [`Poly`] is a list of `(monomial, coefficient)` pairs, strictly
//! decreasing in the term order of the [`PolyRing`] that built it, with no
//! zero coefficients. Polynomials do not carry their ring; arithmetic goes
//! through the ring value.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Monomial, TermOrder, MAX_VARS};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<K: Field> {
    terms: Vec<(Monomial, K::Elem)>,
}

impl<K: Field> Poly<K> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, K::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, K::Elem)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    pub fn lead_coeff(&self) -> Option<&K::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|t| t.0)
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    /// Smallest total degree of a term (the order at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => {
                let d = m.degree();
                self.terms.iter().all(|t| t.0.degree() == d)
            }
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_coeff(&self) -> Option<&K::Elem> {
        // the constant term sits at either end depending on the order
        [self.terms.first(), self.terms.last()]
            .into_iter()
            .flatten()
            .find(|t| t.0.is_one())
            .map(|t| &t.1)
    }

    /// Trusted constructor: terms must already be sorted, merged, nonzero.
    pub(crate) fn from_sorted_unchecked(terms: Vec<(Monomial, K::Elem)>) -> Self {
        Poly { terms }
    }
}

/// Polynomial ring `k[x_0, ..., x_{n-1}]` with a fixed term order.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<K: Field> {
    field: K,
    names: Vec<String>,
    order: TermOrder,
}

impl<K: Field> PolyRing<K> {
    pub fn new(field: K, names: Vec<String>, order: TermOrder) -> Result<Self> {
        if names.is_empty() || names.len() > MAX_VARS {
            return Err(Error::Input(format!(
                "number of variables must be between 1 and {MAX_VARS}, got {}",
                names.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Input(format!("duplicate variable `{n}`")));
            }
        }
        if let TermOrder::Block { first } = order {
            if first == 0 || first >= names.len() {
                return Err(Error::Input(format!("bad elimination block size {first}")));
            }
        }
        Ok(PolyRing { field, names, order })
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Same variables, different term order.
    pub fn with_order(&self, order: TermOrder) -> Result<Self> {
        PolyRing::new(self.field.clone(), self.names.clone(), order)
    }

    #[inline]
    pub fn cmp(&self, u: Monomial, v: Monomial) -> Ordering {
        self.order.cmp(u, v)
    }

    pub fn one(&self) -> Poly<K> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: K::Elem) -> Poly<K> {
        self.term(c, Monomial::ONE)
    }

    pub fn term(&self, c: K::Elem, m: Monomial) -> Poly<K> {
        if self.field.is_zero(&c) {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(&self, i: usize) -> Poly<K> {
        assert!(i < self.nvars());
        self.term(self.field.one(), Monomial::var(i))
    }

    pub fn monomial(&self, m: Monomial) -> Poly<K> {
        self.term(self.field.one(), m)
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges duplicates and
    /// drops zeros.
    pub fn from_terms(&self, terms: Vec<(Monomial, K::Elem)>) -> Poly<K> {
        let mut acc: FxHashMap<Monomial, K::Elem> = FxHashMap::default();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(e) => *e = self.field.add(e, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        self.collect_map(acc)
    }

    pub(crate) fn collect_map(&self, acc: FxHashMap<Monomial, K::Elem>) -> Poly<K> {
        let mut terms: Vec<_> = acc
            .into_iter()
            .filter(|(_, c)| !self.field.is_zero(c))
            .collect();
        terms.sort_unstable_by(|a, b| self.cmp(b.0, a.0));
        Poly { terms }
    }

    pub fn is_sorted(&self, p: &Poly<K>) -> bool {
        p.terms
            .windows(2)
            .all(|w| self.cmp(w[0].0, w[1].0) == Ordering::Greater)
            && p.terms.iter().all(|t| !self.field.is_zero(&t.1))
    }

    fn merge(&self, a: &Poly<K>, b: &Poly<K>, negate_b: bool) -> Poly<K> {
        let f = &self.field;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            let (ma, ca) = &a.terms[i];
            let (mb, cb) = &b.terms[j];
            match self.cmp(*ma, *mb) {
                Ordering::Greater => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((*mb, if negate_b { f.neg(cb) } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_b { f.sub(ca, cb) } else { f.add(ca, cb) };
                    if !f.is_zero(&c) {
                        out.push((*ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a.terms[i..].iter().cloned());
        out.extend(
            b.terms[j..]
                .iter()
                .map(|(m, c)| (*m, if negate_b { f.neg(c) } else { c.clone() })),
        );
        Poly { terms: out }
    }

    pub fn add(&self, a: &Poly<K>, b: &Poly<K>) -> Poly<K> {
        self.merge(a, b, false)
    }

    pub fn sub(&self, a: &Poly<K>, b: &Poly<K>) -> Poly<K> {
        self.merge(a, b, true)
    }

    pub fn neg(&self, a: &Poly<K>) -> Poly<K> {
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(m, c)| (*m, self.field.neg(c)))
                .collect(),
        }
    }

    pub fn scale(&self, a: &Poly<K>, c: &K::Elem) -> Poly<K> {
        if self.field.is_zero(c) {
            return Poly::zero();
        }
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(m, x)| (*m, self.field.mul(x, c)))
                .collect(),
        }
    }

    /// `c * m * a`. Multiplication by a monomial preserves the term order.
    pub fn mul_term(&self, a: &Poly<K>, c: &K::Elem, m: Monomial) -> Poly<K> {
        if self.field.is_zero(c) {
            return Poly::zero();
        }
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(x, y)| (x.mul(m), self.field.mul(y, c)))
                .collect(),
        }
    }

    pub fn mul(&self, a: &Poly<K>, b: &Poly<K>) -> Poly<K> {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        if a.len() == 1 {
            return self.mul_term(b, &a.terms[0].1, a.terms[0].0);
        }
        if b.len() == 1 {
            return self.mul_term(a, &b.terms[0].1, b.terms[0].0);
        }
        let mut acc: FxHashMap<Monomial, K::Elem> =
            FxHashMap::with_capacity_and_hasher(a.len() * b.len(), Default::default());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = ma.mul(*mb);
                let c = self.field.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(e) => *e = self.field.add(e, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        self.collect_map(acc)
    }

    pub fn pow(&self, a: &Poly<K>, e: u32) -> Poly<K> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self, a: &Poly<K>) -> Poly<K> {
        match a.lead_coeff() {
            None => Poly::zero(),
            Some(c) if self.field.is_one(c) => a.clone(),
            Some(c) => {
                let inv = self.field.inv(c);
                self.scale(a, &inv)
            }
        }
    }

    /// Drops every term whose degree in the variables of `mask` is at
    /// least `bound`.
    pub fn truncate(&self, a: &Poly<K>, bound: u32, mask: u64) -> Poly<K> {
        Poly {
            terms: a
                .terms
                .iter()
                .filter(|t| t.0.degree_in(mask) < bound)
                .cloned()
                .collect(),
        }
    }

    /// Re-sorts a polynomial produced under another order on the same
    /// variables.
    pub fn resort(&self, a: &Poly<K>) -> Poly<K> {
        let mut terms = a.terms.clone();
        terms.sort_unstable_by(|x, y| self.cmp(y.0, x.0));
        Poly { terms }
    }

    /// Moves a polynomial into `target`, whose variables start with `shift`
    /// fresh ones followed by this ring's variables.
    pub fn embed_shifted(&self, a: &Poly<K>, target: &PolyRing<K>, shift: usize) -> Result<Poly<K>> {
        let mut terms = Vec::with_capacity(a.len());
        for (m, c) in &a.terms {
            terms.push((m.shifted(shift)?, c.clone()));
        }
        terms.sort_unstable_by(|x, y| target.cmp(y.0, x.0));
        Ok(Poly { terms })
    }

    /// Inverse of [`PolyRing::embed_shifted`] for polynomials free of the
    /// fresh variables.
    pub fn unshift(&self, a: &Poly<K>, shift: usize) -> Poly<K> {
        let mut terms: Vec<_> = a
            .terms
            .iter()
            .map(|(m, c)| (m.unshifted(shift), c.clone()))
            .collect();
        terms.sort_unstable_by(|x, y| self.cmp(y.0, x.0));
        Poly { terms }
    }

    /// Evaluates every variable to a constant (used by tests and the
    /// origin check).
    pub fn eval(&self, a: &Poly<K>, point: &[K::Elem]) -> K::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &a.terms {
            let mut v = c.clone();
            for (i, x) in point.iter().enumerate() {
                for _ in 0..m.exponent(i) {
                    v = f.mul(&v, x);
                }
            }
            acc = f.add(&acc, &v);
        }
        acc
    }

    // ---- text form -------------------------------------------------------

    pub fn format_monomial(&self, m: Monomial) -> String {
        let mut s = String::new();
        for (i, name) in self.names.iter().enumerate() {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('*');
            }
            s.push_str(name);
            if e > 1 {
                let _ = write!(s, "^{e}");
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    /// Canonical text form, e.g. `X^4 + X*Y^3 - 2*X*Z^3`.
    pub fn format(&self, a: &Poly<K>) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut s = String::new();
        for (k, (m, c)) in a.terms.iter().enumerate() {
            let text = f.format(c);
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&mag);
            } else {
                if mag != "1" {
                    s.push_str(&mag);
                    s.push('*');
                }
                s.push_str(&self.format_monomial(*m));
            }
        }
        s
    }

    pub fn parse(&self, text: &str) -> Result<Poly<K>> {
        let mut p = Parser {
            ring: self,
            src: text.as_bytes(),
            pos: 0,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(out)
    }
}

struct Parser<'a, K: Field> {
    ring: &'a PolyRing<K>,
    src: &'a [u8],
    pos: usize,
}

impl<K: Field> Parser<'_, K> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            line: 1,
            column: self.pos + 1,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly<K>> {
        let ring = self.ring;
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let t = self.product()?;
                ring.neg(&t)
            }
            Some(b'+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.product()?;
                    acc = ring.add(&acc, &t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.product()?;
                    acc = ring.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Poly<K>> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.power()?;
            acc = self.ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly<K>> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| self.error("exponent too large"))?;
            if e > crate::monomial::MAX_EXPONENT {
                return Err(self.error("exponent too large"));
            }
            return Ok(self.ring.pow(&base, e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Poly<K>> {
        let ring = self.ring;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let den = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    self.integer()?
                } else {
                    BigInt::from(1)
                };
                let c = ring.field().from_ratio(&num, &den).map_err(|e| self.error(&e.to_string()))?;
                Ok(ring.constant(c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii name");
                match ring.var_index(name) {
                    Some(i) => Ok(ring.var(i)),
                    None => Err(Error::UndeclaredVariable(name.to_string())),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn ring3() -> PolyRing<Rationals> {
        PolyRing::new(
            Rationals,
            vec!["X".into(), "Y".into(), "Z".into()],
            TermOrder::DegRevLex,
        )
        .unwrap()
    }

    #[test]
    fn additive_inverse_and_cancellation() {
        let r = ring3();
        let x = r.parse("X").unwrap();
        assert!(r.add(&x, &r.neg(&x)).is_zero());
        let a = r.parse("X^2 - Y^2").unwrap();
        let b = r.parse("Y^2 - Z^2").unwrap();
        assert_eq!(r.add(&a, &b), r.parse("X^2 - Z^2").unwrap());
    }

    #[test]
    fn prime_field_sum() {
        let r = PolyRing::new(
            PrimeField::new(5).unwrap(),
            vec!["X".into()],
            TermOrder::DegRevLex,
        )
        .unwrap();
        let a = r.parse("3*X").unwrap();
        assert_eq!(r.add(&a, &a), r.parse("X").unwrap());
    }

    #[test]
    fn products() {
        let r = ring3();
        let xy = r.parse("X + Y").unwrap();
        assert_eq!(r.mul(&xy, &r.one()), xy);
        let d = r.parse("X - Y").unwrap();
        assert_eq!(r.mul(&xy, &d), r.parse("X^2 - Y^2").unwrap());
        let s = r.parse("Y^3 + Z^3").unwrap();
        let x = r.parse("X").unwrap();
        assert_eq!(r.mul(&s, &x), r.parse("X*Y^3 + X*Z^3").unwrap());
        assert_eq!(r.parse("X*(Y^3+Z^3)").unwrap(), r.parse("X*Y^3 + X*Z^3").unwrap());
    }

    #[test]
    fn text_form() {
        let r = ring3();
        let p = r.parse("X^4 + X*Y^3 + X*Z^3").unwrap();
        assert_eq!(r.format(&p), "X^4 + X*Y^3 + X*Z^3");
        let q = r.parse("-1/2*X*Y + 3 - Z^2").unwrap();
        assert_eq!(r.format(&q), "-1/2*X*Y - Z^2 + 3");
        assert_eq!(r.format(&Poly::zero()), "0");
        assert!(matches!(r.parse("X + W"), Err(Error::UndeclaredVariable(v)) if v == "W"));
        assert!(matches!(r.parse("X + "), Err(Error::Parse { .. })));
    }
}
