//! Golden examples with embedded expected values, and a fuzzed property
//! suite over random monomial ideals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::{monomial_closure, ratliff_rush, Filtration, DEFAULT_RR_CEILING};
use crate::hilbert::{power_transform, predicted_series, HilbertData};
use crate::ideal::Ideal;
use crate::linalg::rank;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::monomial_ideal::{self, in_closure_by_powers};
use crate::reductions::{
    check_superficial, itoh_huneke_check, minimal_reduction_with, reduction_for, rr_depth_positive,
    superficial_element, Config,
};
use crate::ring::RingSpec;
use crate::session::parse_session;
use crate::theorems::{Conclusion, Hypothesis, Instance, Options, Verdict};

pub const DEPTH_TWO: &str = include_str!("../../../sessions/depth_two.ses");
pub const GORENSTEIN: &str = include_str!("../../../sessions/gorenstein.ses");
pub const QUOTIENT3: &str = include_str!("../../../sessions/quotient3.ses");
pub const QUOTIENT2: &str = include_str!("../../../sessions/quotient2.ses");
pub const SQUARE: &str = include_str!("../../../sessions/square.ses");

/// One compared value.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub example: String,
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<Check>,
    pub verdicts: Vec<(String, Verdict)>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.verdicts.iter().all(|(_, v)| !v.is_violation())
    }

    fn cmp(&mut self, example: &str, name: &str, expected: impl Serialize, actual: impl Serialize) {
        let expected = serde_json::to_value(expected).unwrap_or(Value::Null);
        let actual = serde_json::to_value(actual).unwrap_or(Value::Null);
        self.checks.push(Check {
            example: example.to_string(),
            name: name.to_string(),
            pass: expected == actual,
            expected,
            actual,
        });
    }

    fn verdict(&mut self, example: &str, v: Verdict) {
        self.verdicts.push((example.to_string(), v));
    }

    /// The verdict for `theorem` on `example`, if it was run.
    pub fn find_verdict(&self, example: &str, theorem: &str) -> Option<&Verdict> {
        self.verdicts
            .iter()
            .find(|(e, v)| e == example && v.theorem == theorem)
            .map(|(_, v)| v)
    }
}

fn trimmed(h: &[i64]) -> Vec<i64> {
    let end = h.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
    h[..end].to_vec()
}

fn run_all<K: Field>(report: &mut SuiteReport, example: &str, inst: &Instance<K>, ids: &[&str]) -> Result<()> {
    for id in ids {
        let v = inst.check(id)?;
        report.verdict(example, v);
    }
    Ok(())
}

/// Gorenstein ideal of minimal multiplicity in three variables.
pub fn gorenstein<K: Field>(field: K, opts: &Options, report: &mut SuiteReport) -> Result<()> {
    let ex = "gorenstein";
    let s = parse_session(GORENSTEIN, field)?;
    let i = s.ideal(None)?.clone();
    let ring = s.ring.clone();
    let inst = Instance::new(i.clone(), *opts);
    let h = inst.hilbert()?;
    report.cmp(ex, "numerator", [5, 0, 6, -4, 1], &h.h);
    report.cmp(ex, "e", [8, 4, 0, 0], &h.e);
    report.cmp(ex, "length", 5, i.length());
    for n in 2..=4u32 {
        let eq = inst.adic().term(n)?.equals(&Ideal::maximal_power(&ring, 2 * n))?;
        report.cmp(ex, &format!("I^{n} = m^{}", 2 * n), true, eq);
    }
    report.cmp(ex, "rr_depth_positive", false, rr_depth_positive(&i, 3)?);
    let xy = ring.parse("X*Y")?;
    let sup = check_superficial(&i, &xy, 3, 5)?;
    report.cmp(ex, "XY superficial", true, sup.is_some());
    let i2 = inst.adic().term(2)?;
    let colon = i2.colon_element(&xy)?;
    report.cmp(ex, "(I^2 : XY) = m^2", true, colon.equals(&Ideal::maximal_power(&ring, 2))?);
    let sup = superficial_element(&i, &opts.reduction, 3, 5)?;
    let colon = i2.colon_element(&sup.x)?;
    report.cmp(ex, "(I^2 : a) = m^2, a random superficial", true, colon.equals(&Ideal::maximal_power(&ring, 2))?);
    let pt = power_transform(&h.e, 2)?;
    report.cmp(ex, "eps(q=2)", [64, 48, 4, 0], pt.eps);
    let fit = HilbertData::compute(&Filtration::adic(&i2), 3, opts.window, opts.nmax)?;
    report.cmp(ex, "eps(q=2) fit", [64, 48, 4, 0], &fit.e);
    let identity = pt.eps[2] - pt.eps[1] + pt.eps[0] - i2.length() as i64;
    report.cmp(ex, "eps2 - eps1 + eps0 - length(I^2)", h.e[3], identity);
    let e2 = inst.check("e2_lower_ic")?;
    report.cmp(ex, "closedness hypothesis untestable", "untestable", e2.hypothesis);
    report.verdict(ex, e2);
    run_all(report, ex, &inst, &["northcott", "e2_upper", "e3_nonneg", "e3_zero"])
}

/// `I = N + m^5`, depth `d - 1`, over a field of characteristic not 3.
pub fn depth_two<K: Field>(field: K, opts: &Options, report: &mut SuiteReport) -> Result<()> {
    let ex = "depth-two";
    if field.characteristic() == 3 {
        return Err(Error::Input("this example needs characteristic other than 3".into()));
    }
    let s = parse_session(DEPTH_TWO, field)?;
    let i = s.ideal(None)?.clone();
    let inst = Instance::new(i.clone(), *opts);
    let h = inst.hilbert()?;
    report.cmp(ex, "numerator", [31, 43, 1, 1], &h.h);
    report.cmp(ex, "e", [76, 48, 4, 1], &h.e);
    let red = inst.reduction()?;
    report.cmp(ex, "lambda(I^2/JI), lambda(I^3/JI^2)", [2, 1], &red.lambda[1..3.min(red.lambda.len())]);
    report.cmp(ex, "reduction number", 3, red.r);
    report.cmp(ex, "e0 = length(R/J)", h.e[0], red.j.length());
    let v = inst.check("e2_upper")?;
    report.cmp(ex, "e2 = sigma", true, v.quantities.get("equality").cloned().unwrap_or(Value::Null));
    report.verdict(ex, v);
    report.cmp(ex, "depth lower bound >= 2", true, inst.depth()?.lower >= 2);
    report.cmp(ex, "J ∩ I^2 = JI", true, itoh_huneke_check(&i, &red.j)?);
    let predicted = predicted_series(h.table[1], h.e[0], red.lambda2() as i64)?;
    report.cmp(ex, "forced series differs", true, trimmed(&predicted) != trimmed(&h.h));
    run_all(report, ex, &inst, &["northcott", "huckaba_marley", "hm_intersection", "e2_near_max"])
}

/// Three-dimensional quotient ring; maximal ideal of depth 1.
pub fn quotient3<K: Field>(field: K, opts: &Options, report: &mut SuiteReport) -> Result<()> {
    let ex = "quotient3";
    let s = parse_session(QUOTIENT3, field)?;
    let m = s.ideal(Some("m"))?.clone();
    let j = s.ideal(Some("J"))?;
    let inst = Instance::new(m.clone(), *opts);
    let h = inst.hilbert()?;
    report.cmp(ex, "numerator", [1, 3, 0, 3, -1], &h.h);
    report.cmp(ex, "e", [6, 8, 3, -1], &h.e);
    let given = reduction_for(&m, j.gens(), opts.reduction.rmax)?;
    report.cmp(ex, "lambda with J = (X,Y,W)", [5, 2, 2, 0], &given.lambda);
    report.cmp(ex, "m^4 = J m^3", 3, given.r);
    let v = inst.check("e2_near_max")?;
    report.cmp(ex, "branch (b) hypothesis", "holds", v.hypothesis);
    report.cmp(ex, "depth >= d - 2", "holds", v.conclusion);
    report.verdict(ex, v);
    let d = inst.depth()?;
    report.cmp(ex, "depth lower bound", 1, d.lower);
    let v = inst.check("e2_upper")?;
    report.cmp(ex, "e2 = sigma", false, v.quantities.get("equality").cloned().unwrap_or(Value::Null));
    report.verdict(ex, v);
    run_all(report, ex, &inst, &["northcott", "e2_forbidden", "itoh", "e3_nonneg"])
}

/// Two-dimensional quotient ring; maximal ideal of depth 0.
pub fn quotient2<K: Field>(field: K, opts: &Options, report: &mut SuiteReport) -> Result<()> {
    let ex = "quotient2";
    let s = parse_session(QUOTIENT2, field)?;
    let m = s.ideal(None)?.clone();
    let inst = Instance::new(m.clone(), *opts);
    let h = inst.hilbert()?;
    report.cmp(ex, "numerator", [1, 3, 0, 3, -1], &h.h);
    report.cmp(ex, "e2", 3, h.e[2]);
    report.cmp(ex, "e2 = e1 - e0 + 1", h.e[1] - h.e[0] + 1, h.e[2]);
    report.cmp(ex, "rr_depth_positive", false, rr_depth_positive(&m, 3)?);
    let v = inst.check("valla_normal")?;
    report.cmp(ex, "normality hypothesis untestable", "untestable", v.hypothesis);
    report.verdict(ex, v);
    run_all(report, ex, &inst, &["northcott", "e2_upper", "narita_d2"])
}

/// `(X,Y)^2`: all equivalent conditions hold, Cohen–Macaulay, series `3 + t`.
pub fn square<K: Field>(field: K, opts: &Options, report: &mut SuiteReport) -> Result<()> {
    let ex = "square";
    let s = parse_session(SQUARE, field)?;
    let i = s.ideal(None)?.clone();
    let inst = Instance::new(i, *opts);
    let h = inst.hilbert()?;
    let red = inst.reduction()?;
    let v = inst.check("e2_lower_ic")?;
    report.cmp(ex, "conditions", [true, true, true], v.quantities.get("conditions").cloned().unwrap_or(Value::Null));
    report.cmp(ex, "verdict", "holds", v.conclusion);
    report.verdict(ex, v);
    report.cmp(ex, "depth", 2, inst.depth()?.lower);
    let predicted = predicted_series(h.table[1], h.e[0], red.lambda2() as i64)?;
    report.cmp(ex, "predicted series", [3, 1], trimmed(&predicted));
    report.cmp(ex, "series", [3, 1], trimmed(&h.h));
    run_all(report, ex, &inst, &["northcott", "narita_d2", "valla_normal", "param_closure"])
}

pub const GOLDEN: &[&str] = &["gorenstein", "depth-two", "quotient3", "quotient2", "square"];

/// Runs the golden examples.
pub fn golden_suite<K: Field>(field: K, opts: &Options) -> Result<SuiteReport> {
    let mut report = SuiteReport::default();
    gorenstein(field.clone(), opts, &mut report)?;
    depth_two(field.clone(), opts, &mut report)?;
    quotient3(field.clone(), opts, &mut report)?;
    quotient2(field.clone(), opts, &mut report)?;
    square(field, opts, &mut report)?;
    Ok(report)
}

/// `λ(R/I)` for an ideal of a polynomial ring by linear algebra: the
/// codimension of the span of `u·g` modulo `m^N` in the polynomials of
/// degree `< N`, where `m^N ⊆ I`.
pub fn linear_algebra_length<K: Field>(i: &Ideal<K>) -> Result<usize> {
    let ring = i.ring();
    if !ring.is_polynomial_ring() {
        return Err(Error::Unsupported("linear-algebra length needs a polynomial ring".into()));
    }
    let n = i.index();
    let nv = ring.nvars();
    let cols: Vec<Monomial> = (0..n).flat_map(|k| monomials_of_degree(nv, k)).collect();
    let pos: rustc_hash::FxHashMap<Monomial, usize> = cols.iter().enumerate().map(|(k, m)| (*m, k)).collect();
    let fld = ring.field();
    let mut rows = Vec::new();
    for g in i.gens() {
        let low = g.terms().iter().map(|(m, _)| m.degree()).min().unwrap_or(0);
        for k in 0..n.saturating_sub(low) {
            for u in monomials_of_degree(nv, k) {
                let mut row = vec![fld.zero(); cols.len()];
                for (m, c) in g.terms() {
                    if let Some(&p) = pos.get(&m.mul(u)) {
                        row[p] = c.clone();
                    }
                }
                rows.push(row);
            }
        }
    }
    Ok(cols.len() - rank(fld, cols.len(), rows))
}

/// Random `m`-primary monomial ideal: pure powers plus a few extra
/// generators, all of degree at most `max_degree`.
pub fn random_monomial_ideal(rng: &mut ChaCha8Rng, nvars: usize, max_degree: u32) -> Vec<Monomial> {
    let mut gens = Vec::new();
    for v in 0..nvars {
        let a = rng.gen_range(1..=max_degree);
        gens.push(Monomial::var_power(v, a).expect("small exponent"));
    }
    for _ in 0..rng.gen_range(0..=3) {
        let deg = rng.gen_range(1..=max_degree);
        let mut e = vec![0u32; nvars];
        for _ in 0..deg {
            e[rng.gen_range(0..nvars)] += 1;
        }
        gens.push(Monomial::from_exponents(&e).expect("small exponent"));
    }
    monomial_ideal::minimalize(&gens)
}

/// Counts per property, and descriptions of every violation.
#[derive(Clone, Debug, Default, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub instances: usize,
    pub checked: std::collections::BTreeMap<String, usize>,
    /// `theorem: hypothesis/conclusion` tallies.
    pub outcomes: std::collections::BTreeMap<String, usize>,
    pub violations: Vec<String>,
}

impl FuzzReport {
    fn record(&mut self, property: &str, ok: bool, ideal: &str, detail: impl FnOnce() -> String) {
        *self.checked.entry(property.to_string()).or_default() += 1;
        if !ok {
            self.violations.push(format!("{property} on {ideal}: {}", detail()));
        }
    }

    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Largest power used by the closure membership oracle.
pub const POWER_ORACLE_MAX: u32 = 6;

/// Property suite over `count` random monomial ideals in 2 or 3 variables.
/// A verdict whose hypothesis holds and conclusion fails aborts the run.
pub fn fuzz_suite<K: Field>(field: K, seed: u64, count: usize, opts: &Options) -> Result<FuzzReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rings = [
        RingSpec::polynomial(field.clone(), &["X", "Y"])?,
        RingSpec::polynomial(field, &["X", "Y", "Z"])?,
    ];
    let mut report = FuzzReport {
        seed,
        ..Default::default()
    };
    for _ in 0..count {
        let nv = rng.gen_range(2..=3usize);
        let ring = &rings[nv - 2];
        let mons = random_monomial_ideal(&mut rng, nv, 4);
        let i = Ideal::new(ring, mons.iter().map(|m| ring.monomial(*m)).collect())?;
        let name = i.to_text();
        report.instances += 1;
        fuzz_one(&mut report, &i, &mons, &name, opts)?;
    }
    Ok(report)
}

fn fuzz_one<K: Field>(
    report: &mut FuzzReport,
    i: &Ideal<K>,
    mons: &[Monomial],
    name: &str,
    opts: &Options,
) -> Result<()> {
    let nv = i.ring().nvars();
    // lengths: staircase enumeration, linear algebra, standard basis
    let stair = monomial_ideal::staircase(mons, nv)?.len();
    let la = linear_algebra_length(i)?;
    report.record("staircase length = linear-algebra length", stair == la && la == i.length(), name, || {
        format!("staircase {stair}, linear algebra {la}, standard basis {}", i.length())
    });

    let inst = Instance::new(i.clone(), *opts);
    let h = inst.hilbert()?;
    let red = inst.reduction()?;
    let e2 = h.e(2);
    report.record("e2 >= 0", e2 >= 0, name, || format!("e = {:?}", h.e));
    report.record("e0 = length(R/J)", h.e[0] == red.j.length() as i64, name, || {
        format!("e0 = {}, length(R/J) = {}", h.e[0], red.j.length())
    });
    let sigma = red.weighted_sum() as i64;
    report.record("e2 <= sigma", e2 <= sigma, name, || format!("e2 = {e2}, sigma = {sigma}"));

    let other = Config {
        seed: opts.reduction.seed.wrapping_add(7919),
        ..opts.reduction
    };
    let red2 = minimal_reduction_with(i, inst.adic(), &other)?;
    report.record("lambda(I^2/JI) seed-independent", red.lambda2() == red2.lambda2(), name, || {
        format!("{} vs {}", red.lambda2(), red2.lambda2())
    });

    let rr = Filtration::ratliff_rush(i);
    let hr = HilbertData::compute(&rr, nv, opts.window, opts.nmax)?;
    report.record("Ratliff-Rush coefficients", hr.e == h.e, name, || {
        format!("{:?} vs {:?}", hr.e, h.e)
    });
    let rr1 = ratliff_rush(i, 1, DEFAULT_RR_CEILING)?;
    report.record("Ratliff-Rush closure contains I", rr1.ideal.contains_ideal(i)?, name, String::new);

    let c = monomial_closure(i)?;
    let cc = monomial_closure(&c)?;
    report.record("closure extensive", c.contains_ideal(i)?, name, String::new);
    report.record("closure idempotent", cc.equals(&c)?, name, String::new);
    let cgens = monomial_ideal::closure(mons, nv)?;
    let exps = monomial_ideal::pure_powers(mons, nv).expect("m-primary");
    let mut agree = true;
    let mut bad = None;
    monomial_ideal::for_each_in_box(&exps, |e| {
        let u = Monomial::from_exponents(e).expect("box exponents are small");
        let poly = monomial_ideal::contains(&cgens, u);
        let oracle = in_closure_by_powers(mons, u, POWER_ORACLE_MAX);
        if poly != oracle && agree {
            agree = false;
            bad = Some(u);
        }
    });
    report.record("polyhedral closure = power oracle", agree, name, || {
        format!("disagreement at {:?}", bad.map(|u| u.exponents(nv)))
    });

    for id in ["northcott", "e2_upper", "e2_near_max", "e2_lower_ic", "narita_d2", "param_closure"] {
        let v = inst.check(id)?;
        let key = format!("{id}: {}/{}", json!(v.hypothesis).as_str().unwrap_or("?"), json!(v.conclusion).as_str().unwrap_or("?"));
        *report.outcomes.entry(key).or_default() += 1;
        let ok = !(v.hypothesis == Hypothesis::Holds && v.conclusion == Conclusion::Fails);
        report.record(&format!("verdict {id}"), ok, name, || json!(v).to_string());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn linear_algebra_length_matches_engine() {
        let r = RingSpec::polynomial(PrimeField::default(), &["X", "Y", "Z"]).unwrap();
        let i = Ideal::from_text(&r, &["X^2-Y^2", "Y^2-Z^2", "X*Y", "X*Z", "Y*Z"]).unwrap();
        assert_eq!(linear_algebra_length(&i).unwrap(), 5);
        let i = Ideal::from_text(&r, &["X^2+Y^3", "Y^2", "Z^3+X*Y"]).unwrap();
        assert_eq!(linear_algebra_length(&i).unwrap(), i.length());
    }

    #[test]
    fn small_fuzz_run() {
        let r = fuzz_suite(PrimeField::default(), 3, 5, &Options::default()).unwrap();
        assert!(r.pass(), "{:?}", r.violations);
        assert_eq!(r.instances, 5);
    }
}
