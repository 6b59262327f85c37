//! Ideals of the local ring `(R, m)`, represented by truncated standard
//! bases.
//!
//! Every ideal handled here is `m`-primary. Once `m^D ⊆ I` is known, all
//! computations happen in the finite-dimensional algebra `k[x]/m^{D+1}`
//! with the local order, and the reduced standard basis there is canonical.
//! The index `D` is certified when some degree `D < N` carries no standard
//! monomial of `I + m^N`: then `m^D ⊆ I + m^{D+1}`, so `m^D ⊆ I` by Nakayama.

use std::fmt;
use std::sync::Arc;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{compute, standard_monomials, Reducer};
use crate::linalg::Echelon;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::monomial_ideal;
use crate::poly::Poly;
use crate::ring::RingSpec;

/// Canonical data of an `m`-primary ideal.
#[derive(Debug)]
pub struct Standard<K: Field> {
    /// Reduced standard basis of `I + m^{D+1}` (the defining ideal of the
    /// ring included), terms of degree `> D` dropped.
    basis: Vec<Poly<K>>,
    /// Smallest `D` with `m^D ⊆ I`.
    index: u32,
    /// Monomials outside the initial ideal, ascending in the local order.
    staircase: Vec<Monomial>,
    positions: FxHashMap<Monomial, usize>,
    monomial: bool,
}

impl<K: Field> Standard<K> {
    pub fn basis(&self) -> &[Poly<K>] {
        &self.basis
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn staircase(&self) -> &[Monomial] {
        &self.staircase
    }

    pub fn lead_monomials(&self) -> Vec<Monomial> {
        self.basis
            .iter()
            .filter_map(|g| g.lead_monomial())
            .collect()
    }
}

/// An `m`-primary ideal of a [`RingSpec`].
#[derive(Clone)]
pub struct Ideal<K: Field> {
    ring: Arc<RingSpec<K>>,
    gens: Vec<Poly<K>>,
    std: Arc<Standard<K>>,
}

impl<K: Field> fmt::Debug for Ideal<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({})", self.to_text())
    }
}

/// What is known about the `m`-adic index before the computation.
#[derive(Clone, Copy, Debug)]
enum Bound {
    /// `m^n ⊆ I` is known.
    Known(u32),
    /// Search with increasing truncation degrees.
    Search,
}

impl<K: Field> Ideal<K> {
    /// The ideal generated by `gens` (plus the defining ideal). Fails with
    /// [`Error::NotPrimary`] when no index is found below the ring's
    /// truncation ceiling.
    pub fn new(ring: &Arc<RingSpec<K>>, gens: Vec<Poly<K>>) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|g| ring.local().resort(g))
            .filter(|g| !g.is_zero())
            .collect();
        Self::build(ring, gens, Bound::Search, false)
    }

    pub fn from_text(ring: &Arc<RingSpec<K>>, gens: &[&str]) -> Result<Self> {
        let polys = gens.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(ring, polys)
    }

    /// The ideal generated by `gens` when `m^index` is known to lie in it;
    /// the claim is checked.
    pub fn with_known_index(ring: &Arc<RingSpec<K>>, gens: Vec<Poly<K>>, index: u32) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|g| ring.local().truncate(&ring.local().resort(g), index + 1, u64::MAX))
            .filter(|g| !g.is_zero())
            .collect();
        Self::build(ring, gens, Bound::Known(index), false)
    }

    /// The maximal ideal.
    pub fn maximal(ring: &Arc<RingSpec<K>>) -> Self {
        Self::build(ring, ring.maximal_gens(), Bound::Known(1), false)
            .expect("the maximal ideal has index one")
    }

    /// `m^n`.
    pub fn maximal_power(ring: &Arc<RingSpec<K>>, n: u32) -> Self {
        let gens = monomials_of_degree(ring.nvars(), n)
            .into_iter()
            .map(|m| ring.monomial(m))
            .collect();
        Self::build(ring, gens, Bound::Known(n), false).expect("m^n has index at most n")
    }

    pub fn unit(ring: &Arc<RingSpec<K>>) -> Self {
        Self::build(ring, vec![ring.local().one()], Bound::Known(0), false)
            .expect("unit ideal")
    }

    fn build(ring: &Arc<RingSpec<K>>, gens: Vec<Poly<K>>, bound: Bound, truncate_gens: bool) -> Result<Self> {
        let local = ring.local();
        let nvars = ring.nvars();
        let defs = ring.defining();
        let attempt = |n: u32| -> Result<(crate::groebner::Computation<K>, Vec<Monomial>, Option<u32>)> {
            let mut inputs: Vec<Poly<K>> = defs.to_vec();
            inputs.extend(gens.iter().cloned());
            let comp = compute(local, &inputs, Some(n))?;
            let lts: Vec<Monomial> = comp.basis.iter().filter_map(|g| g.lead_monomial()).collect();
            let (st, d) = standard_monomials(nvars, &lts, n);
            Ok((comp, st, d))
        };
        let (comp, st, d) = match bound {
            Bound::Known(n) => {
                let (comp, st, d) = attempt(n + 1)?;
                let d = d.ok_or_else(|| {
                    Error::Arithmetic(format!("claimed index {n} not confirmed"))
                })?;
                (comp, st, d)
            }
            Bound::Search => {
                let top = gens.iter().filter_map(|g| g.degree()).max().unwrap_or(0);
                let mut n = top + 2;
                loop {
                    if n > ring.ceiling() {
                        return Err(Error::NotPrimary { degree: ring.ceiling() });
                    }
                    let (comp, st, d) = attempt(n)?;
                    if let Some(d) = d {
                        break (comp, st, d);
                    }
                    n += 2;
                }
            }
        };
        let keep = d + 1;
        let basis: Vec<Poly<K>> = comp
            .basis
            .iter()
            .filter(|g| g.lead_monomial().map(|m| m.degree() < keep).unwrap_or(false))
            .map(|g| local.truncate(g, keep, u64::MAX))
            .collect();
        let monomial = basis.iter().all(|g| g.is_monomial());
        let mut staircase: Vec<Monomial> = st.into_iter().filter(|m| m.degree() < d).collect();
        let order = local.order();
        staircase.sort_by_key(|m| order.key(*m));
        let positions = staircase.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let nd = defs.len();
        let mut out_gens: Vec<Poly<K>> = comp
            .kept
            .iter()
            .filter(|&&k| k >= nd)
            .map(|&k| gens[k - nd].clone())
            .collect();
        if truncate_gens {
            out_gens = out_gens
                .iter()
                .map(|g| local.truncate(g, keep, u64::MAX))
                .filter(|g| !g.is_zero())
                .collect();
        }
        if out_gens.is_empty() && d > 0 {
            // the ideal is contained in the defining ideal: keep one
            // representative so that the generator list is never empty
            out_gens = defs.first().cloned().into_iter().collect();
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens: out_gens,
            std: Arc::new(Standard {
                basis,
                index: d,
                staircase,
                positions,
                monomial,
            }),
        })
    }

    pub fn ring(&self) -> &Arc<RingSpec<K>> {
        &self.ring
    }

    /// Generators (without the defining ideal of the ring).
    pub fn gens(&self) -> &[Poly<K>] {
        &self.gens
    }

    pub fn standard(&self) -> &Standard<K> {
        &self.std
    }

    /// Smallest `D` with `m^D ⊆ I`.
    pub fn index(&self) -> u32 {
        self.std.index
    }

    /// `λ(R/I)`.
    pub fn length(&self) -> usize {
        self.std.staircase.len()
    }

    pub fn staircase(&self) -> &[Monomial] {
        &self.std.staircase
    }

    pub fn is_unit(&self) -> bool {
        self.std.index == 0
    }

    /// Whether the ideal (together with the defining ideal) has a monomial
    /// standard basis.
    pub fn is_monomial(&self) -> bool {
        self.std.monomial
    }

    /// Minimal monomial generators when the ideal is monomial.
    pub fn monomial_gens(&self) -> Option<Vec<Monomial>> {
        if !self.is_monomial() {
            return None;
        }
        Some(self.std.lead_monomials())
    }

    fn check_ring(&self, other: &Ideal<K>) -> Result<()> {
        if self.ring.same(&other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn reducer(&self) -> (Vec<usize>, u32) {
        ((0..self.std.basis.len()).collect(), self.std.index)
    }

    /// Normal form modulo the ideal: a combination of staircase monomials.
    pub fn normal_form(&self, f: &Poly<K>) -> Poly<K> {
        let (active, bound) = self.reducer();
        Reducer {
            ring: self.ring.local(),
            bound: Some(bound),
            polys: &self.std.basis,
            active: &active,
        }
        .reduce(f)
    }

    pub fn contains(&self, f: &Poly<K>) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Coordinates of the normal form on the staircase.
    pub fn coordinates(&self, f: &Poly<K>) -> Vec<K::Elem> {
        let fld = self.ring.field();
        let mut v = vec![fld.zero(); self.length()];
        for (m, c) in self.normal_form(f).into_terms() {
            let i = self.std.positions[&m];
            v[i] = c;
        }
        v
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Ideal<K>) -> Result<bool> {
        self.check_ring(other)?;
        Ok(other.gens.iter().all(|g| self.contains(g)))
    }

    /// Errors with the first generator of `inner` outside `self`.
    pub fn require_contains(&self, inner: &Ideal<K>) -> Result<()> {
        self.check_ring(inner)?;
        match inner.gens.iter().find(|g| !self.contains(g)) {
            None => Ok(()),
            Some(g) => Err(Error::NotContained {
                generator: self.ring.format(g),
            }),
        }
    }

    /// Equality in the local ring.
    pub fn equals(&self, other: &Ideal<K>) -> Result<bool> {
        self.check_ring(other)?;
        if self.length() != other.length() || self.index() != other.index() {
            return Ok(false);
        }
        self.contains_ideal(other)
    }

    pub fn sum(&self, other: &Ideal<K>) -> Result<Ideal<K>> {
        self.check_ring(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Self::build(&self.ring, gens, Bound::Known(self.index().min(other.index())), false)
    }

    /// `I + (elems)`.
    pub fn add_elements(&self, elems: &[Poly<K>]) -> Result<Ideal<K>> {
        let mut gens = self.gens.clone();
        gens.extend(elems.iter().map(|e| self.ring.local().resort(e)));
        Self::build(&self.ring, gens, Bound::Known(self.index()), false)
    }

    /// Like [`Ideal::add_elements`], but seeds the computation with the
    /// existing standard basis, which is much cheaper for large ideals.
    pub fn enlarge(&self, elems: &[Poly<K>]) -> Result<Ideal<K>> {
        let mut gens = self.std.basis.clone();
        gens.extend(elems.iter().map(|e| self.ring.local().resort(e)));
        Self::build(&self.ring, gens, Bound::Known(self.index()), true)
    }

    pub fn product(&self, other: &Ideal<K>) -> Result<Ideal<K>> {
        self.check_ring(other)?;
        let n = self.index() + other.index();
        let local = self.ring.local();
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                let p = local.truncate(&local.mul(a, b), n + 1, u64::MAX);
                if !p.is_zero() {
                    gens.push(p);
                }
            }
        }
        Self::build(&self.ring, gens, Bound::Known(n), true)
    }

    /// `I^n` by repeated products.
    pub fn power(&self, n: u32) -> Result<Ideal<K>> {
        if n == 0 {
            return Ok(Self::unit(&self.ring));
        }
        let mut p = self.clone();
        for _ in 1..n {
            p = p.product(self)?;
        }
        Ok(p)
    }

    /// `(I : b)` for one element.
    pub fn colon_element(&self, b: &Poly<K>) -> Result<Ideal<K>> {
        self.colon_gens(&[self.ring.local().resort(b)])
    }

    /// `(I : J)`.
    pub fn colon(&self, other: &Ideal<K>) -> Result<Ideal<K>> {
        self.check_ring(other)?;
        if self.ring.is_polynomial_ring() && self.is_monomial() && other.is_monomial() {
            let a = self.std.lead_monomials();
            let b = other.std.lead_monomials();
            let c = monomial_ideal::colon(&a, &b);
            let gens = c.into_iter().map(|m| self.ring.monomial(m)).collect();
            return Self::build(&self.ring, gens, Bound::Known(self.index()), false);
        }
        self.colon_gens(&other.gens)
    }

    /// Kernel of `f ↦ (f·b)_b` on `R/I`, lifted to `(I : (bs))`.
    fn colon_gens(&self, bs: &[Poly<K>]) -> Result<Ideal<K>> {
        let fld = self.ring.field();
        let local = self.ring.local();
        let st = &self.std.staircase;
        let ncols = st.len();
        let mut ech = Echelon::new(fld.clone(), ncols);
        let one = fld.one();
        'outer: for b in bs {
            let b = local.truncate(b, self.index(), u64::MAX);
            if b.is_zero() {
                continue;
            }
            let cols: Vec<Vec<K::Elem>> = st
                .iter()
                .map(|s| self.coordinates(&local.mul_term(&b, &one, *s)))
                .collect();
            for r in 0..ncols {
                let row: Vec<K::Elem> = cols.iter().map(|c| c[r].clone()).collect();
                ech.insert(row);
                if ech.rank() == ncols {
                    break 'outer;
                }
            }
        }
        let kernel = ech.into_rref().kernel();
        let polys = self.kernel_polys(st, kernel);
        let mut gens = self.gens.clone();
        gens.extend(polys);
        Self::build(&self.ring, gens, Bound::Known(self.index()), false)
    }

    /// Turns kernel vectors (indexed by `cols`, ascending in the local
    /// order) into polynomials, keeping those whose leading monomial is
    /// minimal among the kernel's leading monomials.
    fn kernel_polys(&self, cols: &[Monomial], kernel: Vec<(usize, Vec<K::Elem>)>) -> Vec<Poly<K>> {
        let fld = self.ring.field();
        let leads: Vec<Monomial> = kernel.iter().map(|(c, _)| cols[*c]).collect();
        let lead_set: FxHashSet<Monomial> = leads.iter().copied().collect();
        kernel
            .into_iter()
            .filter(|(c, _)| {
                let m = cols[*c];
                !lead_set.iter().any(|&u| u != m && u.divides(m))
            })
            .map(|(_, v)| {
                let terms: Vec<(Monomial, K::Elem)> = v
                    .into_iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, x)| !fld.is_zero(x))
                    .map(|(i, x)| (cols[i], x))
                    .collect();
                Poly::from_sorted_unchecked(terms)
            })
            .collect()
    }

    pub fn intersect(&self, other: &Ideal<K>) -> Result<Ideal<K>> {
        self.check_ring(other)?;
        let n = self.index().max(other.index());
        if self.ring.is_polynomial_ring() && self.is_monomial() && other.is_monomial() {
            let c = monomial_ideal::intersect(&self.std.lead_monomials(), &other.std.lead_monomials());
            let gens = c.into_iter().map(|m| self.ring.monomial(m)).collect();
            return Self::build(&self.ring, gens, Bound::Known(n), false);
        }
        let order = self.ring.local().order();
        let mut cols: Vec<Monomial> = (0..n)
            .flat_map(|d| monomials_of_degree(self.ring.nvars(), d))
            .collect();
        cols.sort_by_key(|m| order.key(*m));
        let fld = self.ring.field();
        let mut ech = Echelon::new(fld.clone(), cols.len());
        for ideal in [self, other] {
            let images: Vec<Vec<K::Elem>> = cols
                .iter()
                .map(|m| ideal.coordinates(&self.ring.monomial(*m)))
                .collect();
            for r in 0..ideal.length() {
                let row: Vec<K::Elem> = images.iter().map(|c| c[r].clone()).collect();
                ech.insert(row);
            }
        }
        let kernel = ech.into_rref().kernel();
        let mut gens = self.kernel_polys(&cols, kernel);
        gens.extend(
            monomials_of_degree(self.ring.nvars(), n)
                .into_iter()
                .map(|m| self.ring.monomial(m)),
        );
        Self::build(&self.ring, gens, Bound::Known(n), false)
    }

    /// The image of this ideal in a quotient ring `S = R/(x)` built with
    /// [`RingSpec::quotient_by`].
    pub fn extend_to(&self, ring: &Arc<RingSpec<K>>) -> Result<Ideal<K>> {
        if ring.nvars() != self.ring.nvars() {
            return Err(Error::RingMismatch);
        }
        Self::build(ring, self.gens.clone(), Bound::Known(self.index()), false)
    }

    /// Comma-separated generators.
    pub fn to_text(&self) -> String {
        self.gens
            .iter()
            .map(|g| self.ring.format(g))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// `λ(outer/inner)`, after checking `inner ⊆ outer`.
pub fn quotient_length<K: Field>(inner: &Ideal<K>, outer: &Ideal<K>) -> Result<usize> {
    outer.require_contains(inner)?;
    Ok(inner.length() - outer.length())
}

/// `λ(R/(A ∩ B))` from lengths of `A`, `B` and `A + B`.
pub fn intersection_length<K: Field>(a: &Ideal<K>, b: &Ideal<K>) -> Result<usize> {
    let s = a.sum(b)?;
    Ok(a.length() + b.length() - s.length())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn r3() -> Arc<RingSpec<PrimeField>> {
        RingSpec::polynomial(PrimeField::default(), &["X", "Y", "Z"]).unwrap()
    }

    #[test]
    fn lengths_of_basic_ideals() {
        let r = r3();
        assert_eq!(Ideal::maximal(&r).length(), 1);
        assert_eq!(Ideal::maximal_power(&r, 3).length(), 10);
        let i = Ideal::from_text(&r, &["X^2-Y^2", "Y^2-Z^2", "X*Y", "X*Z", "Y*Z"]).unwrap();
        assert_eq!(i.length(), 5);
        assert_eq!(i.index(), 3);
        assert!(Ideal::from_text(&r, &["X", "Y"]).is_err());
    }

    #[test]
    fn local_units_are_invisible() {
        let r = r3();
        // (X + X^2) = (X) locally
        let a = Ideal::from_text(&r, &["X+X^2", "Y", "Z^3"]).unwrap();
        let b = Ideal::from_text(&r, &["X", "Y", "Z^3"]).unwrap();
        assert!(a.equals(&b).unwrap());
        assert_eq!(a.length(), 3);
        // (X - X^2 Y) contains X even though X is not a polynomial multiple
        let c = Ideal::from_text(&r, &["X-X*Y", "Y^2", "Z"]).unwrap();
        assert!(c.contains(&r.parse("X").unwrap()));
    }

    #[test]
    fn powers_of_the_three_dim_example() {
        let r = r3();
        let i = Ideal::from_text(&r, &["X^2-Y^2", "Y^2-Z^2", "X*Y", "X*Z", "Y*Z"]).unwrap();
        for n in 2..=4 {
            let p = i.power(n).unwrap();
            assert!(p.equals(&Ideal::maximal_power(&r, 2 * n)).unwrap());
            assert!(p.is_monomial());
        }
    }

    #[test]
    fn colon_and_intersection() {
        let r = RingSpec::polynomial(PrimeField::default(), &["X", "Y"]).unwrap();
        let a = Ideal::from_text(&r, &["X^2", "Y^2"]).unwrap();
        let m = Ideal::maximal(&r);
        let c = a.colon(&m).unwrap();
        let expect = Ideal::from_text(&r, &["X^2", "X*Y", "Y^2"]).unwrap();
        assert!(c.equals(&expect).unwrap());
        // same through the linear-algebra path
        let c2 = a.colon_gens(m.gens()).unwrap();
        assert!(c2.equals(&expect).unwrap());
        assert!(a.colon(&Ideal::unit(&r)).unwrap().equals(&a).unwrap());

        let x = Ideal::from_text(&r, &["X", "Y^3"]).unwrap();
        let y = Ideal::from_text(&r, &["Y", "X^3"]).unwrap();
        let meet = x.intersect(&y).unwrap();
        let expect = Ideal::from_text(&r, &["X*Y", "X^3", "Y^3"]).unwrap();
        assert!(meet.equals(&expect).unwrap());
        assert_eq!(intersection_length(&x, &y).unwrap(), meet.length());
    }

    #[test]
    fn non_monomial_colon_and_intersection() {
        let r = r3();
        let i = Ideal::from_text(&r, &["X^2-Y^2", "Y^2-Z^2", "X*Y", "X*Z", "Y*Z"]).unwrap();
        let i2 = i.power(2).unwrap();
        let c = i2.colon(&i).unwrap();
        assert!(c.equals(&Ideal::maximal_power(&r, 2)).unwrap());
        let j = Ideal::from_text(&r, &["X+Y", "X-Y+Z^2", "X*Z+Z^3"]).unwrap();
        let meet = i.intersect(&j).unwrap();
        assert_eq!(meet.length(), intersection_length(&i, &j).unwrap());
        for g in meet.gens() {
            assert!(i.contains(g) && j.contains(g));
        }
    }

    #[test]
    fn quotient_lengths_check_containment() {
        let r = r3();
        let m = Ideal::maximal(&r);
        let m2 = Ideal::maximal_power(&r, 2);
        assert_eq!(quotient_length(&m2, &m).unwrap(), 3);
        assert!(matches!(quotient_length(&m, &m2), Err(Error::NotContained { .. })));
    }

    #[test]
    fn quotient_ring_example() {
        let f = PrimeField::default();
        let r = RingSpec::from_text(
            f,
            &["X", "Y", "Z", "U", "V", "W"],
            &["Z^2", "Z*U", "Z*V", "U*V", "Y*Z-U^3", "X*Z-V^3"],
            3,
        )
        .unwrap();
        let m = Ideal::maximal(&r);
        let j = Ideal::from_text(&r, &["X", "Y", "W"]).unwrap();
        let m2 = m.power(2).unwrap();
        let m3 = m.power(3).unwrap();
        let m4 = m.power(4).unwrap();
        assert_eq!(quotient_length(&j.product(&m).unwrap(), &m2).unwrap(), 2);
        assert_eq!(quotient_length(&j.product(&m2).unwrap(), &m3).unwrap(), 2);
        assert!(j.product(&m3).unwrap().equals(&m4).unwrap());
    }
}
