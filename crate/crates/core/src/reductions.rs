//! Minimal reductions, reduction numbers, superficial elements and depth
//! certificates for the associated graded ring.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::{ratliff_rush, Filtration, DEFAULT_RR_CEILING};
use crate::ideal::{intersection_length, Ideal};
use crate::monomial::monomials_of_degree;
use crate::poly::Poly;

pub const DEFAULT_RMAX: usize = 10;
pub const DEFAULT_RETRIES: usize = 5;

/// Random choices and search bounds.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Config {
    pub seed: u64,
    pub rmax: usize,
    pub retries: usize,
    /// Bound for depth certificates; `None` means `2r + 3`.
    pub ncert: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 1,
            rmax: DEFAULT_RMAX,
            retries: DEFAULT_RETRIES,
            ncert: None,
        }
    }
}

/// A reduction `J = (x_1..x_d) ⊆ I` with `I^{r+1} = J I^r`.
#[derive(Clone, Debug)]
pub struct ReductionData<K: Field> {
    pub elems: Vec<Poly<K>>,
    pub j: Ideal<K>,
    /// Least `r` with `I^{r+1} = J I^r`.
    pub r: usize,
    /// `λ(I^{n+1}/J I^n)` for `n = 0..=r`.
    pub lambda: Vec<usize>,
    /// Seed of the successful attempt (`None` for given elements).
    pub seed: Option<u64>,
}

impl<K: Field> ReductionData<K> {
    /// `Σ_{n≥1} n λ(I^{n+1}/J I^n)`.
    pub fn weighted_sum(&self) -> usize {
        self.lambda.iter().enumerate().map(|(n, l)| n * l).sum()
    }

    /// `Σ_{n≥0} λ(I^{n+1}/J I^n)`.
    pub fn total(&self) -> usize {
        self.lambda.iter().sum()
    }

    /// `λ(I²/JI)`, zero when `r = 0`.
    pub fn lambda2(&self) -> usize {
        self.lambda.get(1).copied().unwrap_or(0)
    }
}

/// Random `k`-linear combination of the generators of `I`.
pub fn random_element<K: Field>(i: &Ideal<K>, rng: &mut ChaCha8Rng) -> Poly<K> {
    let ring = i.ring().local();
    let fld = ring.field();
    let mut acc = Poly::zero();
    for g in i.gens() {
        let c = fld.random(rng);
        acc = ring.add(&acc, &ring.scale(g, &c));
    }
    acc
}

/// `(elems)·gens(P) + m^{corner}`, certified with `m^{corner} ⊆` result.
fn corner_product<K: Field>(elems: &[Poly<K>], p: &Ideal<K>, corner: u32) -> Result<Ideal<K>> {
    let ring = p.ring();
    let local = ring.local();
    let mut gens = Vec::with_capacity(elems.len() * p.gens().len());
    for x in elems {
        for g in p.gens() {
            let h = local.truncate(&local.mul(x, g), corner + 1, u64::MAX);
            if !h.is_zero() {
                gens.push(h);
            }
        }
    }
    gens.extend(
        monomials_of_degree(ring.nvars(), corner)
            .into_iter()
            .map(|m| ring.monomial(m)),
    );
    Ideal::with_known_index(ring, gens, corner)
}

/// Whether `(elems) I^n = I^{n+1}`: compared modulo `m^{D+1}` where
/// `m^D ⊆ I^{n+1}`, which suffices by Nakayama.
fn is_reduction_at<K: Field>(elems: &[Poly<K>], adic: &Filtration<K>, n: u32) -> Result<bool> {
    let target = adic.term(n + 1)?;
    let p = adic.term(n)?;
    let c = corner_product(elems, &p, target.index() + 1)?;
    Ok(c.length() == target.length())
}

/// Reduction data for given elements of `I`.
pub fn reduction_for<K: Field>(i: &Ideal<K>, elems: &[Poly<K>], rmax: usize) -> Result<ReductionData<K>> {
    reduction_with(i, &Filtration::adic(i), elems, rmax, None)?.ok_or(
        Error::ReductionNotCertified {
            rmax,
            attempts: 1,
        },
    )
}

fn reduction_with<K: Field>(
    i: &Ideal<K>,
    adic: &Filtration<K>,
    elems: &[Poly<K>],
    rmax: usize,
    seed: Option<u64>,
) -> Result<Option<ReductionData<K>>> {
    if let Some(bad) = elems.iter().find(|x| !i.contains(x)) {
        return Err(Error::NotContained {
            generator: i.ring().format(bad),
        });
    }
    let mut r = None;
    for n in 0..=rmax {
        if is_reduction_at(elems, adic, n as u32)? {
            r = Some(n);
            break;
        }
    }
    let Some(r) = r else { return Ok(None) };
    // J ⊇ I^{r+1}, so its index is bounded by that of I^{r+1}
    let j = Ideal::with_known_index(i.ring(), elems.to_vec(), adic.term(r as u32 + 1)?.index())?;
    let mut lambda = Vec::with_capacity(r + 1);
    for n in 0..=r {
        let p = adic.term(n as u32)?;
        let jp = j.product(&p)?;
        lambda.push(jp.length() - adic.term(n as u32 + 1)?.length());
    }
    Ok(Some(ReductionData {
        elems: elems.to_vec(),
        j,
        r,
        lambda,
        seed,
    }))
}

/// A reduction generated by `d` random combinations of the generators,
/// certified by finding `r <= rmax`; retried with fresh seeds.
pub fn minimal_reduction<K: Field>(i: &Ideal<K>, cfg: &Config) -> Result<ReductionData<K>> {
    minimal_reduction_with(i, &Filtration::adic(i), cfg)
}

pub fn minimal_reduction_with<K: Field>(
    i: &Ideal<K>,
    adic: &Filtration<K>,
    cfg: &Config,
) -> Result<ReductionData<K>> {
    let d = i.ring().dim();
    let attempts = cfg.retries.max(1);
    for attempt in 0..attempts {
        let seed = cfg.seed.wrapping_add(attempt as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let elems: Vec<Poly<K>> = (0..d).map(|_| random_element(i, &mut rng)).collect();
        if let Some(data) = reduction_with(i, adic, &elems, cfg.rmax, Some(seed))? {
            return Ok(data);
        }
    }
    Err(Error::ReductionNotCertified {
        rmax: cfg.rmax,
        attempts,
    })
}

/// Least `n <= rmax` with `I^{n+1} = J I^n`.
pub fn reduction_number<K: Field>(i: &Ideal<K>, j: &Ideal<K>, rmax: usize) -> Result<usize> {
    i.require_contains(j)?;
    let adic = Filtration::adic(i);
    for n in 0..=rmax {
        let p = adic.term(n as u32)?;
        if j.product(&p)?.equals(&adic.term(n as u32 + 1)?)? {
            return Ok(n);
        }
    }
    Err(Error::ReductionNotCertified { rmax, attempts: 1 })
}

/// Witness that `x` is superficial: `(I^n : x) ∩ I^c = I^{n-1}` for
/// `c < n <= n_max`.
#[derive(Clone, Debug)]
pub struct SuperficialCert<K: Field> {
    pub x: Poly<K>,
    pub c: u32,
    pub n_max: u32,
    pub seed: Option<u64>,
}

/// Smallest `c <= c_max` for which the superficiality test passes.
pub fn check_superficial<K: Field>(
    i: &Ideal<K>,
    x: &Poly<K>,
    c_max: u32,
    n_max: u32,
) -> Result<Option<u32>> {
    if !i.contains(x) {
        return Err(Error::NotContained {
            generator: i.ring().format(x),
        });
    }
    let adic = Filtration::adic(i);
    let mut colons = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        colons.push(adic.term(n)?.colon_element(x)?);
    }
    'c: for c in 0..=c_max {
        let ic = adic.term(c)?;
        for n in c + 1..=n_max {
            let colon = &colons[n as usize - 1];
            let meet = intersection_length(colon, &ic)?;
            if meet != adic.term(n - 1)?.length() {
                continue 'c;
            }
        }
        return Ok(Some(c));
    }
    Ok(None)
}

/// Random superficial element, with retries.
pub fn superficial_element<K: Field>(i: &Ideal<K>, cfg: &Config, c_max: u32, n_max: u32) -> Result<SuperficialCert<K>> {
    let attempts = cfg.retries.max(1);
    for attempt in 0..attempts {
        let seed = cfg.seed.wrapping_add(attempt as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element(i, &mut rng);
        if let Some(c) = check_superficial(i, &x, c_max, n_max)? {
            return Ok(SuperficialCert {
                x,
                c,
                n_max,
                seed: Some(seed),
            });
        }
    }
    Err(Error::SuperficialNotFound(attempts))
}

/// Bounds on `depth gr_I(R)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthCertificate {
    /// Certified (up to `n_cert`) lower bound.
    pub lower: usize,
    /// Upper bound, if one was established.
    pub upper: Option<usize>,
    pub methods: Vec<String>,
    pub n_cert: usize,
}

impl DepthCertificate {
    pub fn new(lower: usize, n_cert: usize) -> Self {
        DepthCertificate {
            lower,
            upper: None,
            methods: Vec::new(),
            n_cert,
        }
    }

    /// Tightens the upper bound; a bound below the lower one is a
    /// contradiction.
    pub fn cap(&mut self, upper: usize, method: &str) -> Result<()> {
        if upper < self.lower {
            return Err(Error::Soundness(format!(
                "{method} bounds the depth by {upper}, below the certified {}",
                self.lower
            )));
        }
        self.upper = Some(self.upper.map_or(upper, |u| u.min(upper)));
        self.methods.push(method.to_string());
        Ok(())
    }

    pub fn exact(&self) -> Option<usize> {
        (self.upper == Some(self.lower)).then_some(self.lower)
    }
}

/// Successive quotients: `x_k^*` is regular on the associated graded ring
/// of `R/(x_1..x_{k-1})` iff `λ(R_k/I^{n+1}) = λ(R_{k-1}/I^{n+1}) -
/// λ(R_{k-1}/I^n)` for all `n`; checked for `n <= n_cert`. For a
/// superficial sequence the number of successful steps is the depth; a
/// failure bounds the depth from above.
pub fn vv_depth<K: Field>(i: &Ideal<K>, elems: &[Poly<K>], n_cert: usize) -> Result<DepthCertificate> {
    // λ(R_k / I^n R_k) with R_k = R/(x_1..x_k) equals λ(R / (I^n + (x_1..x_k)))
    let adic = Filtration::adic(i);
    let mut ideals: Vec<Ideal<K>> = (0..=n_cert + 1)
        .map(|n| adic.term(n as u32))
        .collect::<Result<_>>()?;
    let mut prev: Vec<usize> = ideals.iter().map(|a| a.length()).collect();
    let mut lower = 0;
    let mut failed = false;
    for (k, x) in elems.iter().enumerate() {
        ideals = ideals
            .iter()
            .map(|a| a.enlarge(std::slice::from_ref(x)))
            .collect::<Result<_>>()?;
        let cur: Vec<usize> = ideals.iter().map(|a| a.length()).collect();
        let ok = (0..=n_cert).all(|n| cur[n + 1] + prev[n] == prev[n + 1]);
        if !ok {
            failed = true;
            break;
        }
        lower = k + 1;
        prev = cur;
    }
    let mut cert = DepthCertificate::new(lower, n_cert);
    if failed {
        cert.cap(lower, "successive-quotients")?;
    } else {
        cert.methods.push("successive-quotients".into());
    }
    Ok(cert)
}

/// Depth bounds from the reduction's own elements (taken as a superficial
/// sequence), with a Ratliff–Rush confirmation when the first step fails.
pub fn depth_certificate<K: Field>(i: &Ideal<K>, red: &ReductionData<K>, cfg: &Config) -> Result<DepthCertificate> {
    let n_cert = cfg.ncert.unwrap_or(2 * red.r + 3);
    let mut cert = vv_depth(i, &red.elems, n_cert)?;
    if cert.lower == 0 && !rr_depth_positive(i, (red.r + 1).min(n_cert) as u32)? {
        cert.cap(0, "ratliff-rush")?;
    }
    Ok(cert)
}

/// Whether `Ĩ^n = I^n` for every `n <= n_max` (positive depth criterion).
pub fn rr_depth_positive<K: Field>(i: &Ideal<K>, n_max: u32) -> Result<bool> {
    for n in 1..=n_max {
        if !ratliff_rush(i, n, DEFAULT_RR_CEILING)?.equals_power {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `J ∩ I² = JI`, decided through lengths (`JI ⊆ J ∩ I²` always).
pub fn itoh_huneke_check<K: Field>(i: &Ideal<K>, j: &Ideal<K>) -> Result<bool> {
    let i2 = i.power(2)?;
    let ji = j.product(i)?;
    Ok(intersection_length(j, &i2)? == ji.length())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::ring::RingSpec;

    #[test]
    fn maximal_ideal_of_regular_ring() {
        let r = RingSpec::polynomial(PrimeField::default(), &["X", "Y", "Z"]).unwrap();
        let m = Ideal::maximal(&r);
        let red = minimal_reduction(&m, &Config::default()).unwrap();
        assert_eq!(red.r, 0);
        assert_eq!(red.j.length(), 1);
        let cert = vv_depth(&m, &red.elems, 3).unwrap();
        assert_eq!(cert.lower, 3);
        assert!(rr_depth_positive(&m, 3).unwrap());
    }

    #[test]
    fn squares_in_the_plane() {
        let r = RingSpec::polynomial(PrimeField::default(), &["X", "Y"]).unwrap();
        let m2 = Ideal::maximal_power(&r, 2);
        let j = Ideal::from_text(&r, &["X^2", "Y^2"]).unwrap();
        assert_eq!(reduction_number(&m2, &j, 4).unwrap(), 1);
        assert_eq!(reduction_number(&j, &j, 4).unwrap(), 0);
        let red = minimal_reduction(&m2, &Config::default()).unwrap();
        assert_eq!(red.r, 1);
        assert_eq!(red.lambda, vec![1, 0]);
        assert_eq!(red.j.length(), 4);
        assert!(itoh_huneke_check(&m2, &red.j).unwrap());
        let x = random_element(&j, &mut ChaCha8Rng::seed_from_u64(3));
        assert!(check_superficial(&j, &x, 2, 5).unwrap().is_some());
    }

    #[test]
    fn three_dimensional_example_superficial() {
        let r = RingSpec::polynomial(PrimeField::default(), &["X", "Y", "Z"]).unwrap();
        let i = Ideal::from_text(&r, &["X^2-Y^2", "Y^2-Z^2", "X*Y", "X*Z", "Y*Z"]).unwrap();
        let xy = r.parse("X*Y").unwrap();
        assert_eq!(check_superficial(&i, &xy, 3, 5).unwrap(), Some(1));
        assert!(!rr_depth_positive(&i, 2).unwrap());
    }

    #[test]
    fn depth_certificate_caps() {
        let mut c = DepthCertificate::new(1, 5);
        c.cap(2, "a").unwrap();
        c.cap(1, "b").unwrap();
        assert_eq!(c.exact(), Some(1));
        assert!(c.cap(0, "c").is_err());
    }
}
