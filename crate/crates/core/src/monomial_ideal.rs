//! Combinatorics of monomial ideals: minimal generators, colons,
//! intersections, staircases and integral closure via the Newton
//! polyhedron.

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MAX_EXPONENT};

/// Minimal generators, sorted by degree then packed value.
pub fn minimalize(gens: &[Monomial]) -> Vec<Monomial> {
    let mut v: Vec<Monomial> = gens.to_vec();
    v.sort_by_key(|m| (m.degree(), m.packed()));
    v.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(v.len());
    for m in v {
        if !out.iter().any(|u| u.divides(m)) {
            out.push(m);
        }
    }
    out
}

pub fn contains(gens: &[Monomial], m: Monomial) -> bool {
    gens.iter().any(|g| g.divides(m))
}

pub fn product(a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &u in a {
        for &v in b {
            out.push(u.mul(v));
        }
    }
    minimalize(&out)
}

pub fn power(a: &[Monomial], n: u32) -> Vec<Monomial> {
    let mut p = vec![Monomial::ONE];
    for _ in 0..n {
        p = product(&p, a);
    }
    p
}

pub fn intersect(a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &u in a {
        for &v in b {
            out.push(u.lcm(v));
        }
    }
    minimalize(&out)
}

/// `(a : v)` for a single monomial.
pub fn colon_monomial(a: &[Monomial], v: Monomial) -> Vec<Monomial> {
    let out: Vec<Monomial> = a.iter().map(|&u| u.div(u.gcd(v))).collect();
    minimalize(&out)
}

/// `(a : b)`.
pub fn colon(a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
    let mut acc = vec![Monomial::ONE];
    for &v in b {
        acc = intersect(&acc, &colon_monomial(a, v));
    }
    acc
}

/// Exponent of the pure power of each variable among the generators, if
/// the ideal is primary to the maximal ideal.
pub fn pure_powers(gens: &[Monomial], nvars: usize) -> Option<Vec<u32>> {
    (0..nvars)
        .map(|i| {
            gens.iter()
                .filter(|g| g.degree() == g.exponent(i))
                .map(|g| g.exponent(i))
                .min()
        })
        .collect()
}

/// Monomials outside the ideal (the ideal must be primary to the maximal
/// ideal).
pub fn staircase(gens: &[Monomial], nvars: usize) -> Result<Vec<Monomial>> {
    let box_ = pure_powers(gens, nvars)
        .ok_or_else(|| Error::NotPrimary { degree: 0 })?;
    let mut out = Vec::new();
    for_each_in_box(&box_, |e| {
        let m = Monomial::from_exponents(e).expect("box within exponent range");
        if !contains(gens, m) {
            out.push(m);
        }
    });
    Ok(out)
}

/// Calls `f` on every exponent vector `e` with `0 <= e_i < box_[i]`.
pub fn for_each_in_box(box_: &[u32], mut f: impl FnMut(&[u32])) {
    let n = box_.len();
    if box_.iter().any(|&b| b == 0) {
        return;
    }
    let mut e = vec![0u32; n];
    loop {
        f(&e);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            e[i] += 1;
            if e[i] < box_[i] {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

/// Half-space `w·x >= c` with `w >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub normal: Vec<i64>,
    pub rhs: i64,
}

impl Inequality {
    pub fn holds(&self, e: &[u32], scale: i64) -> bool {
        let lhs: i64 = self.normal.iter().zip(e).map(|(w, x)| w * *x as i64).sum();
        lhs >= self.rhs * scale
    }
}

/// The Newton polyhedron `conv(exponents) + R^n_{>=0}` of a monomial ideal
/// primary to the maximal ideal, as a list of supporting half-spaces.
#[derive(Clone, Debug)]
pub struct NewtonPolyhedron {
    nvars: usize,
    pure: Vec<u32>,
    facets: Vec<Inequality>,
}

/// Determinant of a small integer matrix (Bareiss).
fn det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Normal of the hyperplane spanned by `n - 1` vectors in `Z^n`
/// (generalised cross product), or `None` when they are dependent.
fn normal_of(vectors: &[Vec<i64>], n: usize) -> Option<Vec<i64>> {
    let mut w = Vec::with_capacity(n);
    for col in 0..n {
        let minor: Vec<Vec<i128>> = vectors
            .iter()
            .map(|v| {
                (0..n)
                    .filter(|&j| j != col)
                    .map(|j| v[j] as i128)
                    .collect()
            })
            .collect();
        let d = det(minor);
        let s = if col % 2 == 0 { d } else { -d };
        w.push(i64::try_from(s).ok()?);
    }
    let g = w.iter().fold(0, |acc, &x| gcd(acc, x));
    if g == 0 {
        return None;
    }
    Some(w.into_iter().map(|x| x / g).collect())
}

fn subsets(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    'next: loop {
        f(&idx);
        for i in (0..k).rev() {
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                continue 'next;
            }
        }
        return;
    }
}

/// Upper limit on the number of hyperplane candidates examined.
const MAX_CANDIDATES: usize = 2_000_000;

impl NewtonPolyhedron {
    pub fn new(gens: &[Monomial], nvars: usize) -> Result<Self> {
        let gens = minimalize(gens);
        let pure = pure_powers(&gens, nvars).ok_or_else(|| {
            Error::Unsupported("closure needs an ideal primary to the maximal ideal".into())
        })?;
        let points: Vec<Vec<i64>> = gens
            .iter()
            .map(|g| (0..nvars).map(|i| g.exponent(i) as i64).collect())
            .collect();
        let mut budget = 0usize;
        let mut normals: FxHashSet<Vec<i64>> = FxHashSet::default();
        // k points and n - k coordinate rays span a candidate hyperplane
        for k in 1..=nvars.min(points.len()) {
            let mut err = None;
            subsets(points.len(), k, |ps| {
                subsets(nvars, nvars - k, |rays| {
                    budget += 1;
                    if budget > MAX_CANDIDATES {
                        err = Some(());
                        return;
                    }
                    let base = &points[ps[0]];
                    let mut vecs: Vec<Vec<i64>> = ps[1..]
                        .iter()
                        .map(|&p| points[p].iter().zip(base).map(|(a, b)| a - b).collect())
                        .collect();
                    for &r in rays {
                        let mut e = vec![0i64; nvars];
                        e[r] = 1;
                        vecs.push(e);
                    }
                    if let Some(w) = normal_of(&vecs, nvars) {
                        let w = if w.iter().all(|&x| x <= 0) {
                            w.into_iter().map(|x| -x).collect()
                        } else {
                            w
                        };
                        if w.iter().all(|&x| x >= 0) {
                            normals.insert(w);
                        }
                    }
                });
            });
            if err.is_some() {
                return Err(Error::Unsupported(
                    "too many generators for the Newton polyhedron".into(),
                ));
            }
        }
        let mut facets: Vec<Inequality> = normals
            .into_iter()
            .map(|w| {
                let rhs = points
                    .iter()
                    .map(|p| p.iter().zip(&w).map(|(a, b)| a * b).sum::<i64>())
                    .min()
                    .expect("nonempty");
                Inequality { normal: w, rhs }
            })
            .collect();
        facets.sort_by(|a, b| (&a.normal, a.rhs).cmp(&(&b.normal, b.rhs)));
        Ok(NewtonPolyhedron {
            nvars,
            pure,
            facets,
        })
    }

    pub fn facets(&self) -> &[Inequality] {
        &self.facets
    }

    /// Whether `e` lies in `n` times the polyhedron.
    pub fn contains_scaled(&self, e: &[u32], n: u32) -> bool {
        self.facets.iter().all(|f| f.holds(e, n as i64))
    }

    /// Minimal generators of the integral closure of `I^n`.
    pub fn closure_gens(&self, n: u32) -> Result<Vec<Monomial>> {
        let box_ = self.scaled_box(n)?;
        let mut pts = Vec::new();
        for_each_in_box(&box_, |e| {
            if self.contains_scaled(e, n) {
                pts.push(Monomial::from_exponents(e).expect("in range"));
            }
        });
        Ok(minimalize(&pts))
    }

    /// `λ(R / closure(I^n))`: lattice points outside `n` times the
    /// polyhedron.
    pub fn closure_colength(&self, n: u32) -> Result<usize> {
        let box_ = self.scaled_box(n)?;
        let mut count = 0;
        for_each_in_box(&box_, |e| {
            if !self.contains_scaled(e, n) {
                count += 1;
            }
        });
        Ok(count)
    }

    fn scaled_box(&self, n: u32) -> Result<Vec<u32>> {
        // pure powers scaled by n lie in the polyhedron, so everything of
        // interest sits in the box below them (plus one to include them)
        self.pure
            .iter()
            .map(|&a| {
                let b = a * n.max(1) + 1;
                if b > MAX_EXPONENT + 1 {
                    Err(Error::ExponentOverflow)
                } else {
                    Ok(b)
                }
            })
            .collect()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
}

/// Integral closure of a monomial ideal.
pub fn closure(gens: &[Monomial], nvars: usize) -> Result<Vec<Monomial>> {
    NewtonPolyhedron::new(gens, nvars)?.closure_gens(1)
}

/// Independent membership test for the integral closure: `u^k ∈ I^k`
/// for some `k <= max_power`. Sound but possibly incomplete.
pub fn in_closure_by_powers(gens: &[Monomial], u: Monomial, max_power: u32) -> bool {
    let mut p = vec![Monomial::ONE];
    let mut uk = Monomial::ONE;
    for _ in 1..=max_power {
        p = product(&p, gens);
        let Some(next) = uk.checked_mul(u) else {
            return false;
        };
        uk = next;
        if contains(&p, uk) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    #[test]
    fn colon_of_two_squares() {
        let a = [m(&[2, 0]), m(&[0, 2])];
        let b = [m(&[1, 0]), m(&[0, 1])];
        assert_eq!(colon(&a, &b), vec![m(&[2, 0]), m(&[1, 1]), m(&[0, 2])]);
        assert_eq!(intersect(&[m(&[1, 0])], &[m(&[0, 1])]), vec![m(&[1, 1])]);
    }

    #[test]
    fn closure_of_squares_is_maximal_square() {
        let a = [m(&[2, 0]), m(&[0, 2])];
        let c = closure(&a, 2).unwrap();
        assert_eq!(c, vec![m(&[2, 0]), m(&[1, 1]), m(&[0, 2])]);
        let np = NewtonPolyhedron::new(&a, 2).unwrap();
        // closure((X^2,Y^2)^n) = m^{2n}
        for n in 1..=5 {
            assert_eq!(np.closure_colength(n).unwrap(), (2 * n as usize) * (2 * n as usize + 1) / 2);
        }
        assert!(in_closure_by_powers(&a, m(&[1, 1]), 2));
        assert!(!in_closure_by_powers(&a, m(&[1, 0]), 6));
    }

    #[test]
    fn staircase_counts() {
        let a = [m(&[3, 0, 0]), m(&[0, 2, 0]), m(&[0, 0, 1]), m(&[1, 1, 0])];
        assert_eq!(staircase(&a, 3).unwrap().len(), 4);
        assert!(staircase(&[m(&[1, 1])], 2).is_err());
    }

    #[test]
    fn subset_enumeration() {
        let mut n = 0;
        subsets(5, 2, |_| n += 1);
        assert_eq!(n, 10);
        let mut n = 0;
        subsets(3, 0, |s| {
            assert!(s.is_empty());
            n += 1
        });
        assert_eq!(n, 1);
        let mut n = 0;
        subsets(3, 3, |_| n += 1);
        assert_eq!(n, 1);
    }
}
