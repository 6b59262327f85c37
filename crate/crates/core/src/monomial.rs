//! Packed monomials and term orders.
//!
//! A monomial stores up to eight exponents, one byte each, in a single
//! `u64`; variable `i` occupies byte `i`. Exponents are kept below 128 so
//! that divisibility, products, lcm and gcd are branch-free word operations.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 8;
pub const MAX_EXPONENT: u32 = 127;

const HIGH: u64 = 0x8080_8080_8080_8080;
const LOW7: u64 = 0x7f7f_7f7f_7f7f_7f7f;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u64);

#[inline]
fn byte_sum(x: u64) -> u32 {
    let x = (x & 0x00ff_00ff_00ff_00ff) + ((x >> 8) & 0x00ff_00ff_00ff_00ff);
    let x = (x & 0x0000_ffff_0000_ffff) + ((x >> 16) & 0x0000_ffff_0000_ffff);
    ((x & 0xffff_ffff) + (x >> 32)) as u32
}

/// Bytewise mask with `0xff` where `a >= b` and `0x00` elsewhere.
#[inline]
fn ge_mask(a: u64, b: u64) -> u64 {
    let flags = ((a | HIGH) - b) & HIGH;
    (flags >> 7) * 0xff
}

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::ExponentOverflow);
        }
        let mut packed = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            if e > MAX_EXPONENT {
                return Err(Error::ExponentOverflow);
            }
            packed |= (e as u64) << (8 * i);
        }
        Ok(Monomial(packed))
    }

    /// The variable `x_i`.
    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS);
        Monomial(1 << (8 * i))
    }

    pub fn var_power(i: usize, e: u32) -> Result<Self> {
        if i >= MAX_VARS || e > MAX_EXPONENT {
            return Err(Error::ExponentOverflow);
        }
        Ok(Monomial((e as u64) << (8 * i)))
    }

    #[inline]
    pub fn packed(self) -> u64 {
        self.0
    }

    #[inline]
    pub(crate) fn from_packed(packed: u64) -> Self {
        Monomial(packed)
    }

    #[inline]
    pub fn exponent(self, i: usize) -> u32 {
        ((self.0 >> (8 * i)) & 0xff) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    #[inline]
    pub fn degree(self) -> u32 {
        byte_sum(self.0)
    }

    /// Degree counted only over the variables selected by `mask`
    /// (a byte mask, see [`var_mask`]).
    #[inline]
    pub fn degree_in(self, mask: u64) -> u32 {
        byte_sum(self.0 & mask)
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    /// `self | other` componentwise.
    #[inline]
    pub fn divides(self, other: Monomial) -> bool {
        ((other.0 | HIGH) - self.0) & HIGH == HIGH
    }

    #[inline]
    pub fn checked_mul(self, other: Monomial) -> Option<Monomial> {
        let s = self.0 + other.0;
        if s & HIGH == 0 {
            Some(Monomial(s))
        } else {
            None
        }
    }

    /// Product; panics when an exponent would exceed [`MAX_EXPONENT`].
    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        self.checked_mul(other)
            .expect("monomial exponent overflow (limit 127 per variable)")
    }

    /// Quotient `self / other`; requires `other | self`.
    #[inline]
    pub fn div(self, other: Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        Monomial(self.0 - other.0)
    }

    #[inline]
    pub fn lcm(self, other: Monomial) -> Monomial {
        let m = ge_mask(self.0, other.0);
        Monomial((self.0 & m) | (other.0 & !m))
    }

    #[inline]
    pub fn gcd(self, other: Monomial) -> Monomial {
        let m = ge_mask(self.0, other.0);
        Monomial((other.0 & m) | (self.0 & !m))
    }

    #[inline]
    pub fn is_coprime(self, other: Monomial) -> bool {
        self.gcd(other).is_one()
    }

    /// Restriction to the variables in `mask`.
    #[inline]
    pub fn masked(self, mask: u64) -> Monomial {
        Monomial(self.0 & mask)
    }

    /// Shift every exponent up by `k` variable slots (used to make room for
    /// auxiliary variables).
    pub fn shifted(self, k: usize) -> Result<Monomial> {
        if k == 0 {
            return Ok(self);
        }
        if k >= MAX_VARS || (self.0 >> (64 - 8 * k)) != 0 {
            return Err(Error::ExponentOverflow);
        }
        Ok(Monomial(self.0 << (8 * k)))
    }

    /// Inverse of [`Monomial::shifted`]; the low `k` slots are dropped.
    pub fn unshifted(self, k: usize) -> Monomial {
        Monomial(self.0 >> (8 * k))
    }

    pub fn is_valid(self) -> bool {
        self.0 & !LOW7 == 0
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{:?}", self.exponents(MAX_VARS))
    }
}

/// Byte mask selecting variables `range.start..range.end`.
pub fn var_mask(range: std::ops::Range<usize>) -> u64 {
    range.fold(0u64, |acc, i| acc | (0xff << (8 * i)))
}

/// Monomial order. Variables are ranked in declaration order, the first
/// variable being the largest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TermOrder {
    /// Graded reverse lexicographic order.
    DegRevLex,
    /// Elimination order: degrevlex on the first `first` variables, ties
    /// broken by degrevlex on the remaining ones.
    Block { first: usize },
    /// Local order: lower total degree is larger, ties broken reverse
    /// lexicographically. Not a well-order on the whole ring; it is only
    /// used together with a degree truncation, where the support is finite.
    NegDegRevLex,
}

impl Default for TermOrder {
    fn default() -> Self {
        TermOrder::DegRevLex
    }
}

const DEG_CEIL: u128 = 1 << 11;

/// Graded reverse lexicographic comparison of packed monomials.
#[inline]
fn degrevlex(u: u64, v: u64) -> Ordering {
    match byte_sum(u).cmp(&byte_sum(v)) {
        Ordering::Equal => {
            // the highest differing byte is the last differing variable;
            // a smaller exponent there makes the monomial larger
            v.cmp(&u)
        }
        o => o,
    }
}

#[inline]
fn low_bits(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

impl TermOrder {
    /// Sort key: `u > v` in this order iff `key(u) > key(v)`.
    #[inline]
    pub fn key(&self, u: Monomial) -> u128 {
        match *self {
            TermOrder::DegRevLex => ((byte_sum(u.0) as u128) << 64) | (!u.0) as u128,
            TermOrder::NegDegRevLex => {
                ((DEG_CEIL - byte_sum(u.0) as u128) << 64) | (!u.0) as u128
            }
            TermOrder::Block { first } => {
                let b1 = 8 * first as u32;
                let b2 = 64 - b1;
                let m1 = u.0 & low_bits(b1);
                let m2 = if b1 >= 64 { 0 } else { u.0 >> b1 };
                let mut k = byte_sum(m1) as u128;
                k = (k << b1) | (!m1 & low_bits(b1)) as u128;
                k = (k << 11) | byte_sum(m2) as u128;
                (k << b2) | (!m2 & low_bits(b2)) as u128
            }
        }
    }

    #[inline]
    pub fn cmp(&self, u: Monomial, v: Monomial) -> Ordering {
        match *self {
            TermOrder::DegRevLex => degrevlex(u.0, v.0),
            _ => self.key(u).cmp(&self.key(v)),
        }
    }

    /// Whether the order is a well-order (usable without truncation).
    pub fn is_global(&self) -> bool {
        !matches!(self, TermOrder::NegDegRevLex)
    }

    /// Arity-checked comparison on explicit exponent vectors.
    pub fn compare(&self, u: &[u32], v: &[u32]) -> Result<Ordering> {
        if u.len() != v.len() {
            return Err(Error::Input(format!(
                "arity mismatch: {} vs {} exponents",
                u.len(),
                v.len()
            )));
        }
        Ok(self.cmp(Monomial::from_exponents(u)?, Monomial::from_exponents(v)?))
    }

    pub fn is_degree_compatible(&self) -> bool {
        matches!(self, TermOrder::DegRevLex | TermOrder::NegDegRevLex)
    }
}

/// All monomials in `nvars` variables of total degree exactly `deg`.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = exps.len();
        if i + 1 == n {
            exps[i] = left;
            if let Ok(m) = Monomial::from_exponents(exps) {
                out.push(m);
            }
            exps[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    if nvars == 0 {
        if deg == 0 {
            out.push(Monomial::ONE);
        }
        return out;
    }
    rec(0, deg, &mut exps, &mut out);
    out
}

/// Monomials of degree `deg` in the variables selected by `vars`.
pub fn monomials_of_degree_in(vars: &[usize], deg: u32) -> Vec<Monomial> {
    monomials_of_degree(vars.len(), deg)
        .into_iter()
        .map(|m| {
            let mut packed = 0u64;
            for (k, &v) in vars.iter().enumerate() {
                packed |= (m.exponent(k) as u64) << (8 * v);
            }
            Monomial(packed)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    #[test]
    fn degrevlex_examples() {
        let o = TermOrder::DegRevLex;
        // X^2 > XY, XY > Y^2 with X > Y > Z.
        assert_eq!(o.cmp(m(&[2, 0, 0]), m(&[1, 1, 0])), Ordering::Greater);
        assert_eq!(o.cmp(m(&[1, 1, 0]), m(&[0, 2, 0])), Ordering::Greater);
        // Y^2 > XZ: XZ carries the last variable.
        assert_eq!(o.cmp(m(&[0, 2, 0]), m(&[1, 0, 1])), Ordering::Greater);
        // degree dominates
        assert_eq!(o.cmp(m(&[0, 0, 3]), m(&[2, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn compare_checks_arity() {
        let o = TermOrder::DegRevLex;
        assert!(o.compare(&[1, 0], &[1, 0, 0]).is_err());
        assert_eq!(o.compare(&[2, 0], &[1, 1]).unwrap(), Ordering::Greater);
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let o = TermOrder::Block { first: 1 };
        // t > x^5 even though degree is smaller
        assert_eq!(o.cmp(m(&[1, 0]), m(&[0, 5])), Ordering::Greater);
        assert_eq!(o.cmp(m(&[1, 2]), m(&[1, 1])), Ordering::Greater);
    }

    #[test]
    fn local_order_prefers_low_degree() {
        let o = TermOrder::NegDegRevLex;
        assert_eq!(o.cmp(m(&[1, 0]), m(&[2, 0])), Ordering::Greater);
        assert_eq!(o.cmp(m(&[2, 0, 0]), m(&[1, 1, 0])), Ordering::Greater);
        assert_eq!(o.cmp(m(&[0, 2, 0]), m(&[1, 0, 1])), Ordering::Greater);
    }

    #[test]
    fn keys_agree_with_comparison() {
        let all: Vec<Monomial> = (0..4).flat_map(|d| monomials_of_degree(3, d)).collect();
        for o in [TermOrder::DegRevLex, TermOrder::Block { first: 1 }, TermOrder::NegDegRevLex] {
            for &u in &all {
                for &v in &all {
                    assert_eq!(o.key(u).cmp(&o.key(v)), o.cmp(u, v));
                    if o != TermOrder::NegDegRevLex {
                        continue;
                    }
                    let ud = degrevlex(u.0, v.0);
                    if u.degree() == v.degree() {
                        assert_eq!(o.cmp(u, v), ud);
                    }
                }
            }
        }
    }

    #[test]
    fn word_operations() {
        let a = m(&[3, 0, 2]);
        let b = m(&[1, 4, 2]);
        assert_eq!(a.lcm(b), m(&[3, 4, 2]));
        assert_eq!(a.gcd(b), m(&[1, 0, 2]));
        assert!(m(&[1, 0, 2]).divides(a));
        assert!(!b.divides(a));
        assert_eq!(a.mul(b), m(&[4, 4, 4]));
        assert_eq!(a.div(m(&[1, 0, 1])), m(&[2, 0, 1]));
        assert_eq!(a.degree(), 5);
        assert_eq!(a.degree_in(var_mask(1..3)), 2);
        assert!(m(&[100, 0]).checked_mul(m(&[28, 0])).is_none());
        assert!(Monomial::from_exponents(&[128]).is_err());
    }

    #[test]
    fn enumerate_degree() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(1, 4), vec![m(&[4])]);
        let in_vars = monomials_of_degree_in(&[1, 2], 1);
        assert_eq!(in_vars, vec![m(&[0, 1, 0]), m(&[0, 0, 1])]);
    }
}
