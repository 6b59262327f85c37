//! Buchberger's algorithm with the Gebauer–Möller criteria.
//!
//! One engine serves two purposes:
//!
//! * global Gröbner bases for degrevlex and block (elimination) orders, with
//!   no truncation;
//! * truncated standard bases for the local order, where every term of total
//!   degree `>= bound` is discarded. This computes a standard basis of
//!   `(gens) + m^bound`; since the ideal contains the highest corner, the
//!   local order behaves like a well-order on the finite remaining support.
//!
//! Pairs and pending inputs are processed by increasing degree of their
//! lcm / leading monomial (normal strategy).

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Monomial, TermOrder};
use crate::poly::{Poly, PolyRing};

#[derive(Clone, Copy, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduction context: a list of monic polynomials used as reducers.
pub(crate) struct Reducer<'a, K: Field> {
    pub ring: &'a PolyRing<K>,
    pub bound: Option<u32>,
    pub polys: &'a [Poly<K>],
    pub active: &'a [usize],
}

impl<K: Field> Reducer<'_, K> {
    #[inline]
    fn find_divisor(&self, m: Monomial) -> Option<usize> {
        self.active.iter().copied().find(|&i| {
            self.polys[i]
                .lead_monomial()
                .map(|lt| lt.divides(m))
                .unwrap_or(false)
        })
    }

    #[inline]
    fn keep(&self, m: Monomial) -> bool {
        match self.bound {
            Some(b) => m.degree() < b,
            None => true,
        }
    }

    /// Full reduction: no term of the result is divisible by a leading
    /// monomial of a reducer. Terms beyond the truncation are dropped.
    pub fn reduce(&self, f: &Poly<K>) -> Poly<K> {
        let fld = self.ring.field();
        let order = self.ring.order();
        let mut heap: BinaryHeap<(u128, u64)> = BinaryHeap::with_capacity(f.len());
        let mut acc: FxHashMap<Monomial, K::Elem> = FxHashMap::default();
        for (m, c) in f.terms() {
            if self.keep(*m) {
                heap.push((order.key(*m), m.packed()));
                acc.insert(*m, c.clone());
            }
        }
        let mut out = Vec::new();
        while let Some((_, packed)) = heap.pop() {
            let m = Monomial::from_packed(packed);
            let Some(c) = acc.remove(&m) else { continue };
            if fld.is_zero(&c) {
                continue;
            }
            match self.find_divisor(m) {
                Some(gi) => {
                    let g = &self.polys[gi];
                    let q = m.div(g.lead_monomial().expect("nonzero reducer"));
                    for (mt, ct) in &g.terms()[1..] {
                        let mm = q.mul(*mt);
                        if !self.keep(mm) {
                            continue;
                        }
                        let delta = fld.mul(&c, ct);
                        match acc.get_mut(&mm) {
                            Some(e) => *e = fld.sub(e, &delta),
                            None => {
                                acc.insert(mm, fld.neg(&delta));
                                heap.push((order.key(mm), mm.packed()));
                            }
                        }
                    }
                }
                None => out.push((m, c)),
            }
        }
        Poly::from_sorted_unchecked(out)
    }
}

/// Result of a Buchberger run.
#[derive(Clone, Debug)]
pub struct Computation<K: Field> {
    /// Reduced (tail-reduced, monic) basis sorted by increasing leading
    /// monomial.
    pub basis: Vec<Poly<K>>,
    /// Indices of the inputs that did not reduce to zero when processed.
    pub kept: Vec<usize>,
}

struct Engine<'a, K: Field> {
    ring: &'a PolyRing<K>,
    bound: Option<u32>,
    polys: Vec<Poly<K>>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl<'a, K: Field> Engine<'a, K> {
    fn reducer(&self) -> Reducer<'_, K> {
        Reducer {
            ring: self.ring,
            bound: self.bound,
            polys: &self.polys,
            active: &self.active,
        }
    }

    fn lt(&self, i: usize) -> Monomial {
        self.polys[i].lead_monomial().expect("basis elements are nonzero")
    }

    fn spoly(&self, p: &Pair) -> Poly<K> {
        let r = self.ring;
        let f = &self.polys[p.i];
        let g = &self.polys[p.j];
        let one = r.field().one();
        let a = r.mul_term(f, &one, p.lcm.div(self.lt(p.i)));
        let b = r.mul_term(g, &one, p.lcm.div(self.lt(p.j)));
        let s = r.sub(&a, &b);
        match self.bound {
            Some(n) => r.truncate(&s, n, u64::MAX),
            None => s,
        }
    }

    fn pair_live(&self, lcm: Monomial) -> bool {
        match self.bound {
            // every term of such an S-polynomial lies in m^bound
            Some(n) => lcm.degree() < n,
            None => true,
        }
    }

    /// Gebauer–Möller update after inserting basis element `t`.
    fn insert(&mut self, h: Poly<K>) {
        let t = self.polys.len();
        let h = self.ring.monic(&h);
        let lt_h = h.lead_monomial().expect("inserting nonzero polynomial");
        self.polys.push(h);

        // candidate new pairs
        let mut cand: Vec<(Pair, bool)> = self
            .active
            .iter()
            .map(|&i| {
                let lt_i = self.lt(i);
                (
                    Pair {
                        i,
                        j: t,
                        lcm: lt_i.lcm(lt_h),
                    },
                    lt_i.is_coprime(lt_h),
                )
            })
            .collect();

        // criterion M: drop pairs whose lcm is properly divisible by another lcm
        let lcms: Vec<Monomial> = cand.iter().map(|c| c.0.lcm).collect();
        cand.retain(|(p, _)| {
            !lcms
                .iter()
                .any(|&l| l != p.lcm && l.divides(p.lcm))
        });
        // criterion F: one pair per lcm; a class containing a coprime pair is
        // dropped entirely (criterion B)
        let mut by_lcm: FxHashMap<Monomial, (Pair, bool)> = FxHashMap::default();
        for (p, coprime) in cand {
            by_lcm
                .entry(p.lcm)
                .and_modify(|e| e.1 |= coprime)
                .or_insert((p, coprime));
        }

        // prune old pairs
        let lt_of = |k: usize| self.polys[k].lead_monomial().expect("nonzero");
        self.pairs.retain(|p| {
            !(lt_h.divides(p.lcm)
                && lt_of(p.i).lcm(lt_h) != p.lcm
                && lt_of(p.j).lcm(lt_h) != p.lcm)
        });

        let mut fresh: Vec<Pair> = by_lcm
            .into_values()
            .filter(|(p, coprime)| !coprime && self.pair_live(p.lcm))
            .map(|(p, _)| p)
            .collect();
        fresh.sort_by_key(|p| (p.i, p.j));
        self.pairs.extend(fresh);

        // elements whose leading monomial is now redundant stop being active
        let polys = &self.polys;
        self.active.retain(|&i| {
            !lt_h.divides(polys[i].lead_monomial().expect("nonzero"))
        });
        self.active.push(t);
    }

    fn next_pair(&mut self) -> Option<(usize, (u32, u128))> {
        let order = self.ring.order();
        self.pairs
            .iter()
            .enumerate()
            .map(|(k, p)| (k, (p.lcm.degree(), order.key(p.lcm))))
            .min_by_key(|x| x.1)
    }

    fn interreduce(mut self) -> Vec<Poly<K>> {
        let order = self.ring.order();
        let mut act = self.active.clone();
        act.sort_by_key(|&i| order.key(self.lt(i)));
        let mut out = Vec::with_capacity(act.len());
        for (pos, &i) in act.iter().enumerate() {
            let g = self.polys[i].clone();
            let lt = g.lead_monomial().expect("nonzero");
            let lc = g.lead_coeff().expect("nonzero").clone();
            let others: Vec<usize> = act
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != pos)
                .map(|(_, &j)| j)
                .collect();
            let tail = Poly::from_sorted_unchecked(g.terms()[1..].to_vec());
            let red = Reducer {
                ring: self.ring,
                bound: self.bound,
                polys: &self.polys,
                active: &others,
            }
            .reduce(&tail);
            let mut terms = vec![(lt, lc)];
            terms.extend(red.into_terms());
            out.push(self.ring.monic(&Poly::from_sorted_unchecked(terms)));
        }
        self.polys.clear();
        out
    }
}

fn check_order<K: Field>(ring: &PolyRing<K>, bound: Option<u32>) -> Result<()> {
    if !ring.order().is_global() && bound.is_none() {
        return Err(Error::Unsupported(
            "the local order requires a degree truncation".into(),
        ));
    }
    if ring.order().is_global() && bound.is_some() {
        return Err(Error::Unsupported(
            "degree truncation is only supported with the local order".into(),
        ));
    }
    Ok(())
}

/// Runs Buchberger's algorithm. With `bound = Some(n)` (local order only)
/// the result is a standard basis of `(gens) + m^n`, with terms of degree
/// `>= n` discarded.
pub fn compute<K: Field>(
    ring: &PolyRing<K>,
    gens: &[Poly<K>],
    bound: Option<u32>,
) -> Result<Computation<K>> {
    check_order(ring, bound)?;
    let order = ring.order();
    let prep: Vec<Poly<K>> = gens
        .iter()
        .map(|g| match bound {
            Some(n) => ring.truncate(g, n, u64::MAX),
            None => g.clone(),
        })
        .collect();

    if prep.iter().all(|g| g.len() <= 1) {
        return Ok(monomial_basis(ring, &prep));
    }

    // pending inputs, smallest (degree, key) first
    let mut pending: BinaryHeap<Reverse<((u32, u128), usize)>> = prep
        .iter()
        .enumerate()
        .filter_map(|(k, g)| {
            g.lead_monomial()
                .map(|m| Reverse(((m.degree(), order.key(m)), k)))
        })
        .collect();

    let mut eng = Engine {
        ring,
        bound,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    let mut kept = Vec::new();

    loop {
        let next_in = pending.peek().map(|r| r.0 .0);
        let next_pair = eng.next_pair();
        let take_input = match (next_in, &next_pair) {
            (None, None) => break,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(a), Some((_, b))) => a <= *b,
        };
        if take_input {
            let Reverse((_, k)) = pending.pop().expect("peeked");
            let h = eng.reducer().reduce(&prep[k]);
            if !h.is_zero() {
                kept.push(k);
                if h.lead_monomial() == Some(Monomial::ONE) {
                    return Ok(unit_basis(ring, kept));
                }
                eng.insert(h);
            }
        } else {
            let (idx, _) = next_pair.expect("checked");
            let p = eng.pairs.swap_remove(idx);
            let s = eng.spoly(&p);
            let h = eng.reducer().reduce(&s);
            if !h.is_zero() {
                if h.lead_monomial() == Some(Monomial::ONE) {
                    return Ok(unit_basis(ring, kept));
                }
                eng.insert(h);
            }
        }
    }
    kept.sort_unstable();
    Ok(Computation {
        basis: eng.interreduce(),
        kept,
    })
}

fn unit_basis<K: Field>(ring: &PolyRing<K>, mut kept: Vec<usize>) -> Computation<K> {
    kept.sort_unstable();
    Computation {
        basis: vec![ring.one()],
        kept,
    }
}

/// All inputs are monomials (or zero): the basis is the set of minimal
/// monomials.
fn monomial_basis<K: Field>(ring: &PolyRing<K>, gens: &[Poly<K>]) -> Computation<K> {
    let order = ring.order();
    let mut idx: Vec<usize> = (0..gens.len()).filter(|&k| !gens[k].is_zero()).collect();
    idx.sort_by_key(|&k| {
        let m = gens[k].lead_monomial().expect("nonzero");
        (m.degree(), order.key(m), k)
    });
    let mut kept: Vec<usize> = Vec::new();
    let mut mons: Vec<Monomial> = Vec::new();
    for k in idx {
        let m = gens[k].lead_monomial().expect("nonzero");
        if mons.iter().any(|u| u.divides(m)) {
            continue;
        }
        mons.push(m);
        kept.push(k);
    }
    mons.sort_by_key(|m| order.key(*m));
    kept.sort_unstable();
    Computation {
        basis: mons.into_iter().map(|m| ring.monomial(m)).collect(),
        kept,
    }
}

/// A reduced Gröbner basis for a global order.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis<K: Field> {
    ring: PolyRing<K>,
    gens: Vec<Poly<K>>,
}

impl<K: Field> GroebnerBasis<K> {
    pub fn gens(&self) -> &[Poly<K>] {
        &self.gens
    }

    pub fn ring(&self) -> &PolyRing<K> {
        &self.ring
    }

    pub fn order(&self) -> TermOrder {
        self.ring.order()
    }

    /// Minimal generators of the initial ideal.
    pub fn staircase(&self) -> Vec<Monomial> {
        self.gens.iter().filter_map(|g| g.lead_monomial()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.staircase().iter().any(|m| m.is_one())
    }

    pub fn normal_form(&self, f: &Poly<K>) -> Poly<K> {
        let active: Vec<usize> = (0..self.gens.len()).collect();
        Reducer {
            ring: &self.ring,
            bound: None,
            polys: &self.gens,
            active: &active,
        }
        .reduce(f)
    }

    pub fn is_member(&self, f: &Poly<K>) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Number of standard monomials, `None` when the quotient is infinite
    /// dimensional.
    pub fn quotient_dimension(&self) -> Option<usize> {
        let n = self.ring.nvars();
        let lts = self.staircase();
        // zero-dimensional iff a pure power of every variable is a leading term
        for i in 0..n {
            let pure = lts.iter().any(|m| {
                m.exponent(i) > 0 && (0..n).all(|j| j == i || m.exponent(j) == 0)
            });
            if !pure {
                return None;
            }
        }
        let max_deg = lts.iter().map(|m| m.degree()).sum::<u32>() + 1;
        Some(standard_monomials(n, &lts, max_deg).0.len())
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` for the ring's
/// (global) order.
pub fn buchberger<K: Field>(ring: &PolyRing<K>, gens: &[Poly<K>]) -> Result<GroebnerBasis<K>> {
    if gens.is_empty() {
        return Err(Error::Input("empty generator list".into()));
    }
    if !ring.order().is_global() {
        return Err(Error::Unsupported(
            "global Gröbner bases need a global order".into(),
        ));
    }
    let c = compute(ring, gens, None)?;
    Ok(GroebnerBasis {
        ring: ring.clone(),
        gens: c.basis,
    })
}

pub fn normal_form<K: Field>(f: &Poly<K>, g: &GroebnerBasis<K>) -> Poly<K> {
    g.normal_form(f)
}

pub fn is_member<K: Field>(f: &Poly<K>, g: &GroebnerBasis<K>) -> bool {
    g.is_member(f)
}

/// Eliminates the first `k` variables: returns generators of
/// `(gens) ∩ k[x_k, ..., x_{n-1}]`, computed with the block order.
pub fn eliminate<K: Field>(ring: &PolyRing<K>, gens: &[Poly<K>], k: usize) -> Result<Vec<Poly<K>>> {
    let block = ring.with_order(TermOrder::Block { first: k })?;
    let moved: Vec<Poly<K>> = gens.iter().map(|g| block.resort(g)).collect();
    let gb = buchberger(&block, &moved)?;
    let mask = crate::monomial::var_mask(0..k);
    Ok(gb
        .gens
        .into_iter()
        .filter(|g| g.monomials().all(|m| m.masked(mask).is_one()))
        .map(|g| ring.resort(&g))
        .collect())
}

/// Intersection of two ideals of a polynomial ring via the classical
/// auxiliary-variable construction `(tA + (1-t)B) ∩ k[x]`.
pub fn intersect_global<K: Field>(
    ring: &PolyRing<K>,
    a: &[Poly<K>],
    b: &[Poly<K>],
) -> Result<Vec<Poly<K>>> {
    let mut names = vec!["_t".to_string()];
    names.extend(ring.names().iter().cloned());
    let ext = PolyRing::new(ring.field().clone(), names, TermOrder::Block { first: 1 })?;
    let t = ext.var(0);
    let one_minus_t = ext.sub(&ext.one(), &t);
    let mut gens = Vec::new();
    for f in a {
        gens.push(ext.mul(&t, &ring.embed_shifted(f, &ext, 1)?));
    }
    for f in b {
        gens.push(ext.mul(&one_minus_t, &ring.embed_shifted(f, &ext, 1)?));
    }
    let gb = buchberger(&ext, &gens)?;
    let mut out: Vec<Poly<K>> = gb
        .gens
        .into_iter()
        .filter(|g| g.monomials().all(|m| m.exponent(0) == 0))
        .map(|g| ring.unshift(&g, 1))
        .collect();
    out.sort_by_key(|g| g.lead_monomial().map(|m| ring.order().key(m)));
    Ok(out)
}

/// Standard monomials of a monomial ideal below degree `bound`, by
/// breadth-first search over degrees. Also returns the smallest degree
/// `D < bound` with no standard monomial, if any.
pub fn standard_monomials(nvars: usize, lts: &[Monomial], bound: u32) -> (Vec<Monomial>, Option<u32>) {
    let mut out = Vec::new();
    if bound == 0 {
        return (out, None);
    }
    if lts.iter().any(|m| m.is_one()) {
        return (out, Some(0));
    }
    let mut level = vec![Monomial::ONE];
    let mut deg = 0u32;
    loop {
        out.extend(level.iter().copied());
        deg += 1;
        if deg >= bound {
            return (out, None);
        }
        let mut next: Vec<Monomial> = Vec::new();
        let mut seen = rustc_hash::FxHashSet::default();
        for u in &level {
            // extend only by variables >= the last variable of u to avoid
            // duplicates; then check membership
            let last = (0..nvars).rev().find(|&i| u.exponent(i) > 0).unwrap_or(0);
            for i in last..nvars {
                let Some(w) = u.checked_mul(Monomial::var(i)) else {
                    continue;
                };
                if !seen.insert(w) {
                    continue;
                }
                if lts.iter().any(|m| m.divides(w)) {
                    continue;
                }
                // all lower neighbours must be standard (order ideal)
                next.push(w);
            }
        }
        if next.is_empty() {
            return (out, Some(deg));
        }
        level = next;
    }
}
