//! Local rings `(R, m)` with `R = k[x_1..x_n]_{(x)} / F`.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Monomial, TermOrder};
use crate::poly::{Poly, PolyRing};

/// Default ceiling for the truncation degree when searching for the
/// `m`-adic index of an ideal given by generators.
pub const DEFAULT_TRUNCATION_CEILING: u32 = 40;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// The ambient polynomial ring, an optional defining ideal and the declared
/// Krull dimension of the local ring at the origin.
#[derive(Debug)]
pub struct RingSpec<K: Field> {
    id: u64,
    local: PolyRing<K>,
    global: PolyRing<K>,
    defining: Vec<Poly<K>>,
    dim: usize,
    ceiling: u32,
}

impl<K: Field> RingSpec<K> {
    /// A polynomial ring localized at the origin, of dimension `n`.
    pub fn polynomial(field: K, names: &[&str]) -> Result<Arc<Self>> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let n = names.len();
        Self::new(field, names, Vec::new(), n)
    }

    /// Builds a ring from defining polynomials given in text form.
    pub fn from_text(field: K, names: &[&str], defining: &[&str], dim: usize) -> Result<Arc<Self>> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let local = PolyRing::new(field, names.clone(), TermOrder::NegDegRevLex)?;
        let polys = defining
            .iter()
            .map(|s| local.parse(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(local.field().clone(), names, polys, dim)
    }

    /// `defining` polynomials may be sorted in any order; they are re-sorted.
    pub fn new(field: K, names: Vec<String>, defining: Vec<Poly<K>>, dim: usize) -> Result<Arc<Self>> {
        let local = PolyRing::new(field.clone(), names.clone(), TermOrder::NegDegRevLex)?;
        let global = PolyRing::new(field, names, TermOrder::DegRevLex)?;
        if dim == 0 {
            return Err(Error::Input("declared dimension must be at least 1".into()));
        }
        if dim > local.nvars() {
            return Err(Error::Input(format!(
                "declared dimension {dim} exceeds the number of variables {}",
                local.nvars()
            )));
        }
        if defining.is_empty() && dim != local.nvars() {
            return Err(Error::Input(format!(
                "a polynomial ring in {} variables has dimension {}, not {dim}",
                local.nvars(),
                local.nvars()
            )));
        }
        let mut defs = Vec::new();
        for f in defining {
            let f = local.resort(&f);
            if f.is_zero() {
                continue;
            }
            if f.constant_coeff().is_some() {
                return Err(Error::Input(format!(
                    "defining polynomial `{}` does not vanish at the origin",
                    global.format(&global.resort(&f))
                )));
            }
            defs.push(f);
        }
        Ok(Arc::new(RingSpec {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            local,
            global,
            defining: defs,
            dim,
            ceiling: DEFAULT_TRUNCATION_CEILING,
        }))
    }

    /// Same ring with a different truncation ceiling.
    pub fn with_ceiling(&self, ceiling: u32) -> Arc<Self> {
        Arc::new(RingSpec {
            id: self.id,
            local: self.local.clone(),
            global: self.global.clone(),
            defining: self.defining.clone(),
            dim: self.dim,
            ceiling,
        })
    }

    /// `R/(elems)`, declared of dimension `dim - elems.len()` (the elements
    /// are meant to be part of a system of parameters).
    pub fn quotient_by(&self, elems: &[Poly<K>]) -> Result<Arc<Self>> {
        // dimension saturates at zero: Artinian quotients are fine for lengths
        let mut defs = self.defining.clone();
        defs.extend(elems.iter().cloned());
        let dim = self.dim.saturating_sub(elems.len());
        Ok(Arc::new(RingSpec {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            local: self.local.clone(),
            global: self.global.clone(),
            defining: defs.into_iter().filter(|f| !f.is_zero()).collect(),
            dim,
            ceiling: self.ceiling,
        }))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn same(&self, other: &RingSpec<K>) -> bool {
        self.id == other.id
    }

    pub fn field(&self) -> &K {
        self.local.field()
    }

    /// Polynomial ring with the local order; all ideal arithmetic uses it.
    pub fn local(&self) -> &PolyRing<K> {
        &self.local
    }

    /// Polynomial ring with degrevlex; used for display.
    pub fn global(&self) -> &PolyRing<K> {
        &self.global
    }

    pub fn nvars(&self) -> usize {
        self.local.nvars()
    }

    pub fn names(&self) -> &[String] {
        self.local.names()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn defining(&self) -> &[Poly<K>] {
        &self.defining
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.defining.is_empty()
    }

    pub fn ceiling(&self) -> u32 {
        self.ceiling
    }

    pub fn parse(&self, text: &str) -> Result<Poly<K>> {
        self.local.parse(text)
    }

    /// Text form in degrevlex order.
    pub fn format(&self, f: &Poly<K>) -> String {
        self.global.format(&self.global.resort(f))
    }

    pub fn var(&self, i: usize) -> Poly<K> {
        self.local.var(i)
    }

    pub fn monomial(&self, m: Monomial) -> Poly<K> {
        self.local.monomial(m)
    }

    /// Generators of the maximal ideal.
    pub fn maximal_gens(&self) -> Vec<Poly<K>> {
        (0..self.nvars()).map(|i| self.var(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn validation() {
        let f = PrimeField::default();
        assert!(RingSpec::from_text(f, &["X", "Y"], &["X*Y - 1"], 1).is_err());
        assert!(RingSpec::from_text(f, &["X", "Y"], &[], 1).is_err());
        assert!(RingSpec::from_text(f, &["X", "Y"], &["X*Y"], 0).is_err());
        let r = RingSpec::from_text(f, &["X", "Y"], &["X*Y"], 1).unwrap();
        assert_eq!(r.dim(), 1);
        assert_eq!(r.format(&r.parse("Y + X^2").unwrap()), "X^2 + Y");
    }
}
