//! Hilbert filtrations: `I`-adic, Ratliff–Rush, integral closure (monomial
//! ideals) and images in quotient rings.

use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::Ideal;
use crate::monomial_ideal::NewtonPolyhedron;
use crate::poly::Poly;
use crate::ring::RingSpec;

/// Default ceiling for the Ratliff–Rush colon chain.
pub const DEFAULT_RR_CEILING: u32 = 12;

enum Kind<K: Field> {
    Adic(Ideal<K>),
    RatliffRush { base: Ideal<K>, adic: Box<Filtration<K>> },
    Closure { base: Ideal<K>, polyhedron: NewtonPolyhedron },
    Quotient { base: Box<Filtration<K>>, ring: Arc<RingSpec<K>> },
}

/// A filtration `F_0 = R ⊇ F_1 ⊇ F_2 ⊇ ...` with memoised terms.
pub struct Filtration<K: Field> {
    kind: Kind<K>,
    memo: Mutex<FxHashMap<u32, Ideal<K>>>,
    rr_ceiling: u32,
}

/// Result of the colon chain `I^{n+k} : I^k`.
#[derive(Clone, Debug)]
pub struct RatliffRush<K: Field> {
    pub n: u32,
    pub ideal: Ideal<K>,
    /// First `k` at which the chain repeated.
    pub k_star: u32,
    /// Whether the result equals `I^n`.
    pub equals_power: bool,
}

/// Integral closedness of `I^n`, decided where `I^n` is a monomial ideal of
/// a polynomial ring.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticNormality {
    /// `closed[n-1]` for `n = 1..=bound`; `None` when undecidable here.
    pub closed: Vec<Option<bool>>,
    /// Smallest `N` with `I^n` closed for every checked `n >= N`.
    pub first_normal: Option<u32>,
}

impl<K: Field> Filtration<K> {
    fn with_kind(kind: Kind<K>) -> Self {
        Filtration {
            kind,
            memo: Mutex::new(FxHashMap::default()),
            rr_ceiling: DEFAULT_RR_CEILING,
        }
    }

    pub fn adic(i: &Ideal<K>) -> Self {
        Self::with_kind(Kind::Adic(i.clone()))
    }

    pub fn ratliff_rush(i: &Ideal<K>) -> Self {
        Self::with_kind(Kind::RatliffRush {
            base: i.clone(),
            adic: Box::new(Self::adic(i)),
        })
    }

    /// `n ↦ closure(I^n)` for a monomial ideal of a polynomial ring.
    pub fn closure(i: &Ideal<K>) -> Result<Self> {
        let gens = monomial_support(i)?;
        let polyhedron = NewtonPolyhedron::new(&gens, i.ring().nvars())?;
        Ok(Self::with_kind(Kind::Closure {
            base: i.clone(),
            polyhedron,
        }))
    }

    /// The images `F_n + (elems)` in `R/(elems)`. The elements must lie in
    /// `F_1`.
    pub fn quotient(self, elems: &[Poly<K>]) -> Result<Self> {
        if elems.is_empty() {
            return Ok(self);
        }
        let f1 = self.term(1)?;
        if let Some(bad) = elems.iter().find(|e| !f1.contains(e)) {
            return Err(Error::NotContained {
                generator: f1.ring().format(bad),
            });
        }
        let ring = f1.ring().quotient_by(elems)?;
        let rr_ceiling = self.rr_ceiling;
        Ok(match self.kind {
            // the image of I^n is the n-th power of the image of I
            Kind::Adic(i) => Self::adic(&i.extend_to(&ring)?),
            kind => Self {
                kind: Kind::Quotient {
                    base: Box::new(Self {
                        kind,
                        memo: self.memo,
                        rr_ceiling,
                    }),
                    ring,
                },
                memo: Mutex::new(FxHashMap::default()),
                rr_ceiling,
            },
        })
    }

    pub fn with_rr_ceiling(mut self, ceiling: u32) -> Self {
        self.rr_ceiling = ceiling;
        if let Kind::RatliffRush { adic, .. } = &mut self.kind {
            adic.rr_ceiling = ceiling;
        }
        self
    }

    pub fn ring(&self) -> Arc<RingSpec<K>> {
        match &self.kind {
            Kind::Adic(i) | Kind::RatliffRush { base: i, .. } | Kind::Closure { base: i, .. } => {
                i.ring().clone()
            }
            Kind::Quotient { ring, .. } => ring.clone(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            Kind::Adic(_) => "adic",
            Kind::RatliffRush { .. } => "ratliff-rush",
            Kind::Closure { .. } => "closure",
            Kind::Quotient { .. } => "quotient",
        }
    }

    /// `F_n`.
    pub fn term(&self, n: u32) -> Result<Ideal<K>> {
        if n == 0 {
            return Ok(Ideal::unit(&self.ring()));
        }
        if let Some(i) = self.memo.lock().expect("memo lock").get(&n) {
            return Ok(i.clone());
        }
        let value = match &self.kind {
            Kind::Adic(i) => {
                if n == 1 {
                    i.clone()
                } else {
                    self.term(n - 1)?.product(i)?
                }
            }
            Kind::RatliffRush { base, adic } => {
                ratliff_rush_with(base, adic, n, self.rr_ceiling)?.ideal
            }
            Kind::Closure { base, polyhedron } => {
                let gens = polyhedron
                    .closure_gens(n)?
                    .into_iter()
                    .map(|m| base.ring().monomial(m))
                    .collect();
                Ideal::new(base.ring(), gens)?
            }
            Kind::Quotient { base, ring } => base.term(n)?.extend_to(ring)?,
        };
        self.memo.lock().expect("memo lock").insert(n, value.clone());
        Ok(value)
    }

    /// `λ(R/F_n)`.
    pub fn colength(&self, n: u32) -> Result<usize> {
        if let Kind::Closure { polyhedron, .. } = &self.kind {
            return polyhedron.closure_colength(n);
        }
        Ok(self.term(n)?.length())
    }
}

fn monomial_support<K: Field>(i: &Ideal<K>) -> Result<Vec<crate::monomial::Monomial>> {
    if !i.ring().is_polynomial_ring() {
        return Err(Error::Unsupported(
            "integral closure is only computed for monomial ideals of polynomial rings".into(),
        ));
    }
    i.monomial_gens().ok_or_else(|| {
        Error::Unsupported("integral closure is only computed for monomial ideals".into())
    })
}

fn ratliff_rush_with<K: Field>(
    base: &Ideal<K>,
    adic: &Filtration<K>,
    n: u32,
    ceiling: u32,
) -> Result<RatliffRush<K>> {
    let mut prev: Option<Ideal<K>> = None;
    for k in 1..=ceiling {
        let mut c = adic.term(n + k)?;
        for _ in 0..k {
            c = c.colon(base)?;
        }
        if let Some(p) = &prev {
            if p.equals(&c)? {
                let equals_power = c.equals(&adic.term(n)?)?;
                return Ok(RatliffRush {
                    n,
                    ideal: c,
                    k_star: k - 1,
                    equals_power,
                });
            }
        }
        prev = Some(c);
    }
    Err(Error::NoStabilization(ceiling as usize))
}

/// `Ĩ^n = ∪_k (I^{n+k} : I^k)`, stopping when two consecutive colons agree.
pub fn ratliff_rush<K: Field>(i: &Ideal<K>, n: u32, ceiling: u32) -> Result<RatliffRush<K>> {
    ratliff_rush_with(i, &Filtration::adic(i), n, ceiling)
}

/// Integral closure of a monomial ideal.
pub fn monomial_closure<K: Field>(i: &Ideal<K>) -> Result<Ideal<K>> {
    Filtration::closure(i)?.term(1)
}

pub fn is_integrally_closed_monomial<K: Field>(i: &Ideal<K>) -> Result<bool> {
    monomial_closure(i)?.equals(i)
}

/// Checks `I^n` for `n = 1..=bound`; powers that are not monomial ideals of
/// a polynomial ring are reported as undecided.
pub fn asymptotic_normality<K: Field>(i: &Ideal<K>, bound: u32) -> Result<AsymptoticNormality> {
    let adic = Filtration::adic(i);
    let mut closed = Vec::with_capacity(bound as usize);
    for n in 1..=bound {
        let p = adic.term(n)?;
        let v = if p.ring().is_polynomial_ring() && p.is_monomial() {
            Some(is_integrally_closed_monomial(&p)?)
        } else {
            None
        };
        closed.push(v);
    }
    let mut first_normal = None;
    for n in (1..=bound).rev() {
        if closed[n as usize - 1] == Some(true) {
            first_normal = Some(n);
        } else {
            break;
        }
    }
    Ok(AsymptoticNormality {
        closed,
        first_normal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn r2() -> Arc<RingSpec<PrimeField>> {
        RingSpec::polynomial(PrimeField::default(), &["X", "Y"]).unwrap()
    }

    #[test]
    fn closures_of_small_ideals() {
        let r = r2();
        let sq = Ideal::from_text(&r, &["X^2", "Y^2"]).unwrap();
        let c = monomial_closure(&sq).unwrap();
        assert!(c.equals(&Ideal::maximal_power(&r, 2)).unwrap());
        assert!(!is_integrally_closed_monomial(&sq).unwrap());
        assert!(is_integrally_closed_monomial(&Ideal::maximal_power(&r, 2)).unwrap());
        let cube = Ideal::from_text(&r, &["X^3", "Y^3"]).unwrap();
        let c = monomial_closure(&cube).unwrap();
        assert_eq!(c.length(), 6);
        let nonmono = Ideal::from_text(&r, &["X^2+X*Y", "Y^2"]).unwrap();
        assert!(matches!(monomial_closure(&nonmono), Err(Error::Unsupported(_))));
    }

    #[test]
    fn asymptotic_normality_of_squares() {
        let r = r2();
        let sq = Ideal::from_text(&r, &["X^2", "Y^2"]).unwrap();
        let a = asymptotic_normality(&sq, 3).unwrap();
        assert_eq!(a.closed, vec![Some(false); 3]);
        assert_eq!(a.first_normal, None);
        let m2 = Ideal::maximal_power(&r, 2);
        assert_eq!(asymptotic_normality(&m2, 3).unwrap().first_normal, Some(1));
    }

    #[test]
    fn ratliff_rush_of_parameter_and_maximal_ideals() {
        let r = r2();
        let sq = Ideal::from_text(&r, &["X^2", "Y^2"]).unwrap();
        let rr = ratliff_rush(&sq, 1, DEFAULT_RR_CEILING).unwrap();
        assert!(rr.equals_power);
        let m = Ideal::maximal(&r);
        assert!(ratliff_rush(&m, 1, DEFAULT_RR_CEILING).unwrap().equals_power);
    }

    #[test]
    fn three_dimensional_example_is_not_ratliff_rush_closed() {
        let r = RingSpec::polynomial(PrimeField::default(), &["X", "Y", "Z"]).unwrap();
        let i = Ideal::from_text(&r, &["X^2-Y^2", "Y^2-Z^2", "X*Y", "X*Z", "Y*Z"]).unwrap();
        let rr = ratliff_rush(&i, 1, DEFAULT_RR_CEILING).unwrap();
        assert!(!rr.equals_power);
        assert!(rr.ideal.equals(&Ideal::maximal_power(&r, 2)).unwrap());
        let f = Filtration::adic(&i);
        assert!(f.term(2).unwrap().equals(&Ideal::maximal_power(&r, 4)).unwrap());
        assert_eq!(f.term(0).unwrap().length(), 0);
    }

    #[test]
    fn quotient_filtration_checks_membership() {
        let r = r2();
        let m = Ideal::maximal(&r);
        let x = r.parse("X").unwrap();
        let q = Filtration::adic(&m).quotient(&[x]).unwrap();
        assert_eq!(q.colength(3).unwrap(), 3);
        let one = r.parse("1").unwrap();
        assert!(Filtration::adic(&m).quotient(&[one]).is_err());
    }
}
