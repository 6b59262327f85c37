//! Hilbert data checked against oracles that share no code with the engine:
//! brute-force monomial counting and an exact solve for the polynomial.

use std::sync::Arc;

use num_rational::Rational64;
use proptest::prelude::*;

use samuel_core::field::{PrimeField, Rationals};
use samuel_core::filtration::{ratliff_rush, Filtration, DEFAULT_RR_CEILING};
use samuel_core::hilbert::HilbertData;
use samuel_core::ideal::Ideal;
use samuel_core::monomial::Monomial;
use samuel_core::ring::RingSpec;
use samuel_core::session::parse_session;
use samuel_core::suite::GORENSTEIN;

type Exps = Vec<u32>;

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimal(mut g: Vec<Exps>) -> Vec<Exps> {
    g.sort();
    g.dedup();
    let keep: Vec<bool> = (0..g.len())
        .map(|i| !(0..g.len()).any(|j| j != i && divides(&g[j], &g[i])))
        .collect();
    g.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e).collect()
}

fn product(a: &[Exps], b: &[Exps]) -> Vec<Exps> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            out.push(x.iter().zip(y).map(|(p, q)| p + q).collect());
        }
    }
    minimal(out)
}

/// `λ(R/I^n)` for `n = 0..=top` by counting monomials outside `I^n`.
fn counted_lengths(gens: &[Exps], top: u32) -> Vec<i64> {
    let nv = gens[0].len();
    // largest pure power, bounding the staircase of I^n by n * it in each variable
    let pure: Vec<u32> = (0..nv)
        .map(|v| {
            gens.iter()
                .filter(|g| g.iter().enumerate().all(|(w, &e)| w == v || e == 0))
                .map(|g| g[v])
                .min()
                .expect("m-primary")
        })
        .collect();
    let mut table = vec![0i64];
    let mut pow = gens.to_vec();
    for n in 1..=top {
        if n > 1 {
            pow = product(&pow, gens);
        }
        let bound: Vec<u32> = pure.iter().map(|p| p * n).collect();
        let mut count = 0i64;
        let mut e = vec![0u32; nv];
        'outer: loop {
            if !pow.iter().any(|g| divides(g, &e)) {
                count += 1;
            }
            for v in 0..nv {
                e[v] += 1;
                if e[v] < bound[v] {
                    continue 'outer;
                }
                e[v] = 0;
            }
            break;
        }
        table.push(count);
    }
    table
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Solves `λ(R/I^n) = Σ (-1)^j e_j C(n+d-1-j, d-j)` on the last `d+1`
/// entries and checks one more point.
fn fitted_coefficients(table: &[i64], d: usize) -> Vec<i64> {
    let top = table.len() - 1;
    let rows: Vec<usize> = (top - d..=top).collect();
    let mut m: Vec<Vec<Rational64>> = rows
        .iter()
        .map(|&n| {
            let mut row: Vec<Rational64> = (0..=d)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    Rational64::from_integer(sign * binom(n as i64 + d as i64 - 1 - j as i64, (d - j) as i64))
                })
                .collect();
            row.push(Rational64::from_integer(table[n]));
            row
        })
        .collect();
    for c in 0..=d {
        let p = (c..=d).find(|&r| m[r][c] != Rational64::from_integer(0)).expect("nonsingular");
        m.swap(c, p);
        let piv = m[c][c];
        for k in c..=d + 1 {
            m[c][k] /= piv;
        }
        for r in 0..=d {
            if r != c {
                let f = m[r][c];
                for k in c..=d + 1 {
                    let t = m[c][k] * f;
                    m[r][k] -= t;
                }
            }
        }
    }
    let e: Vec<i64> = m.iter().map(|row| row[d + 1]).map(|x| {
        assert!(x.is_integer());
        x.to_integer()
    }).collect();
    // the point before the window must fit too, or the window was too early
    let n = (top - d - 1) as i64;
    let p: i64 = (0..=d)
        .map(|j| (if j % 2 == 0 { 1 } else { -1 }) * e[j] * binom(n + d as i64 - 1 - j as i64, (d - j) as i64))
        .sum();
    assert_eq!(p, table[top - d - 1], "table not yet polynomial");
    e
}

fn ideal(r: &Arc<RingSpec<PrimeField>>, gens: &[Exps]) -> Ideal<PrimeField> {
    let polys = gens.iter().map(|e| r.monomial(Monomial::from_exponents(e).unwrap())).collect();
    Ideal::new(r, polys).unwrap()
}

fn compare(gens: &[Exps], top: u32) {
    let d = gens[0].len();
    let names = ["X", "Y", "Z", "W"];
    let r = RingSpec::polynomial(PrimeField::default(), &names[..d]).unwrap();
    let i = ideal(&r, gens);
    let h = HilbertData::compute(&Filtration::adic(&i), d, 3, 16).unwrap();
    let table = counted_lengths(gens, top);
    let shared = h.table.len().min(table.len());
    assert_eq!(h.table[..shared], table[..shared], "{gens:?}");
    assert_eq!(h.e, fitted_coefficients(&table, d), "{gens:?}");
}

#[test]
fn powers_of_the_maximal_ideal() {
    // m^k in d variables: λ(R/m^{kn}) = C(kn+d-1, d)
    for d in 2..=4usize {
        for k in 1..=3u32 {
            let mut gens = Vec::new();
            let mut stack = vec![(Vec::new(), k)];
            while let Some((prefix, left)) = stack.pop() {
                if prefix.len() == d - 1 {
                    let mut e: Exps = prefix;
                    e.push(left);
                    gens.push(e);
                    continue;
                }
                for a in 0..=left {
                    let mut p = prefix.clone();
                    p.push(a);
                    stack.push((p, left - a));
                }
            }
            let top = if d == 4 { 6 } else { 8 };
            let table = counted_lengths(&gens, top);
            for (n, &l) in table.iter().enumerate() {
                assert_eq!(l, binom((k as usize * n + d - 1) as i64, d as i64));
            }
            compare(&gens, top);
            let e = fitted_coefficients(&table, d);
            assert_eq!(e[0], (k as i64).pow(d as u32));
        }
    }
}

#[test]
fn parameter_ideals() {
    for (a, b, c) in [(1, 1, 1), (2, 3, 1), (3, 2, 4), (4, 4, 2)] {
        let gens = vec![vec![a, 0, 0], vec![0, b, 0], vec![0, 0, c]];
        let e = fitted_coefficients(&counted_lengths(&gens, 8), 3);
        assert_eq!(e, vec![(a * b * c) as i64, 0, 0, 0]);
        compare(&gens, 8);
    }
}

#[test]
fn gorenstein_ideal_over_both_fields() {
    let p = parse_session(GORENSTEIN, PrimeField::default()).unwrap();
    let q = parse_session(GORENSTEIN, Rationals).unwrap();
    let ip = p.ideal(None).unwrap();
    let iq = q.ideal(None).unwrap();
    let hp = HilbertData::compute(&Filtration::adic(ip), 3, 3, 12).unwrap();
    let hq = HilbertData::compute(&Filtration::adic(iq), 3, 3, 12).unwrap();
    assert_eq!(hp, hq);
    // I^n = m^{2n} from n = 2 on, so the lengths are C(2n+2, 3)
    for n in 2..hp.table.len() {
        assert_eq!(hp.table[n], binom(2 * n as i64 + 2, 3));
    }
    // and its Ratliff-Rush closure is m^2, of colength 4
    let rr = ratliff_rush(iq, 1, DEFAULT_RR_CEILING).unwrap();
    assert!(rr.ideal.equals(&Ideal::maximal_power(&q.ring, 2)).unwrap());
    assert!(!rr.equals_power);
}

fn random_monomial_ideal(nvars: usize, max: u32) -> impl Strategy<Value = Vec<Exps>> {
    (
        prop::collection::vec(1..=max, nvars),
        prop::collection::vec(prop::collection::vec(0..=max, nvars), 0..4),
    )
        .prop_map(move |(pure, extra)| {
            let mut g: Vec<Exps> = (0..nvars)
                .map(|v| (0..nvars).map(|w| if w == v { pure[v] } else { 0 }).collect())
                .collect();
            g.extend(extra.into_iter().filter(|e| e.iter().any(|&x| x > 0)));
            minimal(g)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn plane_monomial_ideals(g in random_monomial_ideal(2, 4)) {
        compare(&g, 10);
    }

    #[test]
    fn space_monomial_ideals(g in random_monomial_ideal(3, 3)) {
        compare(&g, 9);
    }
}
