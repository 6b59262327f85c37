//! Hilbert–Samuel tables, Hilbert series and Hilbert coefficients.
//!
//! Conventions: `T(n) = λ(R/F_n)`, `a_n = T(n+1) - T(n)`, and the Hilbert
//! series `Σ a_n t^n = h(t)/(1-t)^d`. Then `e_j = Σ_i C(i, j) h_i` and
//! `T(n) = Σ_j (-1)^j e_j C(n+d-j-1, d-j)` for `n` large.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::Filtration;

/// Default number of extra values a fit must reproduce.
pub const DEFAULT_WINDOW: usize = 3;
/// Default table length ceiling.
pub const DEFAULT_NMAX: usize = 12;

/// Generalised binomial coefficient `C(x, k)` for any integer `x`.
pub fn binomial(x: i64, k: i64) -> i64 {
    if k < 0 {
        return 0;
    }
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..k as i128 {
        num *= x as i128 - i;
        den *= i + 1;
    }
    (num / den) as i64
}

/// The Hilbert–Samuel polynomial `P(n) = Σ_j (-1)^j e_j C(n+d-j-1, d-j)`.
pub fn samuel_polynomial(e: &[i64], n: i64) -> i64 {
    let d = e.len() as i64 - 1;
    e.iter()
        .enumerate()
        .map(|(j, &ej)| {
            let j = j as i64;
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * ej * binomial(n + d - j - 1, d - j)
        })
        .sum()
}

/// `e_j = h^{(j)}(1)/j! = Σ_i C(i, j) h_i`.
pub fn e_from_h(h: &[i64], j: usize) -> i64 {
    h.iter()
        .enumerate()
        .map(|(i, &hi)| binomial(i as i64, j as i64) * hi)
        .sum()
}

/// Numerator coefficients `h_0..h_{len-1}` of `Σ a_n t^n` times `(1-t)^d`,
/// from a table `T(0..=L)`; only the first `L` coefficients are determined.
pub fn h_prefix(table: &[i64], d: usize) -> Vec<i64> {
    let a: Vec<i64> = table.windows(2).map(|w| w[1] - w[0]).collect();
    (0..a.len())
        .map(|i| {
            (0..=d.min(i))
                .map(|j| {
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * binomial(d as i64, j as i64) * a[i - j]
                })
                .sum()
        })
        .collect()
}

/// The Hilbert series numerator once its tail has vanished for `window`
/// consecutive coefficients; `None` otherwise.
pub fn stable_numerator(table: &[i64], d: usize, window: usize) -> Option<Vec<i64>> {
    let h = h_prefix(table, d);
    let last = h.iter().rposition(|&x| x != 0)?;
    if h.len() - 1 - last < window {
        return None;
    }
    Some(h[..=last].to_vec())
}

/// Solves for `e_0..e_d` from the last `d+1` table entries and walks back to
/// the postulation number, requiring agreement on `window` further values.
pub fn fit_coefficients(table: &[i64], d: usize, window: usize) -> Result<(Vec<i64>, usize)> {
    let len = table.len();
    if len < d + 1 + window {
        return Err(Error::NmaxTooSmall(format!(
            "{} table values cannot fit {} coefficients with window {window}",
            len,
            d + 1
        )));
    }
    let start = len - d - 1;
    // (d+1) x (d+1) system over Q: Σ_j (-1)^j C(n+d-j-1, d-j) e_j = T(n)
    let mut m: Vec<Vec<BigRational>> = (start..len)
        .map(|n| {
            let mut row: Vec<BigRational> = (0..=d)
                .map(|j| {
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    let b = binomial(n as i64 + d as i64 - j as i64 - 1, (d - j) as i64);
                    BigRational::from_integer(BigInt::from(s * b))
                })
                .collect();
            row.push(BigRational::from_integer(BigInt::from(table[n])));
            row
        })
        .collect();
    let k = d + 1;
    for c in 0..k {
        let p = (c..k)
            .find(|&r| !m[r][c].is_zero())
            .ok_or_else(|| Error::Arithmetic("singular fitting system".into()))?;
        m.swap(c, p);
        let inv = BigRational::one() / m[c][c].clone();
        for x in m[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..k {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..=k {
                    let v = &m[c][j] * &f;
                    m[r][j] = &m[r][j] - v;
                }
            }
        }
    }
    let mut e = Vec::with_capacity(k);
    for row in &m {
        let v = &row[k];
        if !v.is_integer() {
            return Err(Error::NonIntegral(format!("{v}")));
        }
        let v = v
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::Arithmetic("coefficient overflow".into()))?;
        e.push(v);
    }
    let mut post = len;
    while post > 0 && samuel_polynomial(&e, post as i64 - 1) == table[post - 1] {
        post -= 1;
    }
    if post + d + 1 + window > len {
        return Err(Error::NmaxTooSmall(format!(
            "polynomial agreement from n = {post} leaves fewer than {window} verification values"
        )));
    }
    Ok((e, post))
}

/// Hilbert data of a filtration of a `d`-dimensional ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertData {
    /// `λ(R/F_n)` for `n = 0..=L`.
    pub table: Vec<i64>,
    pub d: usize,
    pub e: Vec<i64>,
    pub h: Vec<i64>,
    pub postulation: usize,
    /// Largest `n` whose value entered the computation.
    pub certified_up_to: usize,
}

impl HilbertData {
    /// Builds the table adaptively: it grows until the numerator tail has
    /// been zero for `window` coefficients, with at most `nmax + 1` values.
    pub fn compute<K: Field>(f: &Filtration<K>, d: usize, window: usize, nmax: usize) -> Result<Self> {
        let mut table = vec![0i64];
        loop {
            let n = table.len();
            if let Some(h) = stable_numerator(&table, d, window) {
                if table.len() >= d + 1 + window {
                    match Self::from_parts(table.clone(), d, h, window) {
                        Ok(data) => return Ok(data),
                        Err(Error::NmaxTooSmall(_)) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
            if n > nmax {
                return Err(Error::SeriesNotStabilized(nmax));
            }
            table.push(f.colength(n as u32)? as i64);
            if n == 1 && table[1] == 0 {
                return Err(Error::Input("the ideal is the whole ring".into()));
            }
        }
    }

    /// From a complete table (no adaptivity).
    pub fn from_table(table: Vec<i64>, d: usize, window: usize) -> Result<Self> {
        let h = stable_numerator(&table, d, window)
            .ok_or(Error::SeriesNotStabilized(table.len().saturating_sub(1)))?;
        Self::from_parts(table, d, h, window)
    }

    fn from_parts(table: Vec<i64>, d: usize, h: Vec<i64>, window: usize) -> Result<Self> {
        let e: Vec<i64> = (0..=d).map(|j| e_from_h(&h, j)).collect();
        if e[0] <= 0 {
            return Err(Error::Arithmetic(format!("multiplicity {} is not positive", e[0])));
        }
        let (fit, postulation) = fit_coefficients(&table, d, window)?;
        if fit != e {
            return Err(Error::Soundness(format!(
                "series coefficients {e:?} disagree with the fitted polynomial {fit:?}"
            )));
        }
        Ok(HilbertData {
            certified_up_to: table.len() - 1,
            table,
            d,
            e,
            h,
            postulation,
        })
    }

    /// `e_j` for any `j`, including `j > d`.
    pub fn e(&self, j: usize) -> i64 {
        e_from_h(&self.h, j)
    }

    pub fn colength(&self, n: usize) -> Option<i64> {
        self.table.get(n).copied()
    }

    /// The numerator as text, e.g. `5 + 6t^2 - 4t^3 + t^4`.
    pub fn series_text(&self) -> String {
        format_series(&self.h)
    }
}

pub fn format_series(h: &[i64]) -> String {
    let mut s = String::new();
    for (i, &c) in h.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mag = c.abs();
        if s.is_empty() {
            if c < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if c < 0 { " - " } else { " + " });
        }
        let var = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        if mag != 1 || i == 0 {
            s.push_str(&mag.to_string());
        }
        s.push_str(&var);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// Coefficients of the `I^q`-adic filtration in dimension three.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerTransform {
    pub q: i64,
    pub eps: [i64; 4],
}

pub fn power_transform(e: &[i64], q: i64) -> Result<PowerTransform> {
    if e.len() != 4 {
        return Err(Error::Unsupported(format!(
            "the power transform is stated in dimension 3, got {}",
            e.len() as i64 - 1
        )));
    }
    if q < 1 {
        return Err(Error::Input("q must be positive".into()));
    }
    Ok(PowerTransform {
        q,
        eps: [
            e[0] * q * q * q,
            e[0] * q * q * (q - 1) + e[1] * q * q,
            e[0] * binomial(q, 3) + e[1] * binomial(q, 2) + e[2] * q,
            e[3],
        ],
    })
}

/// The numerator forced when a closed ideal satisfies `I^3 = JI^2`:
/// `λ(R/I) + (e_0 - λ(R/I) - λ(I²/JI)) t + λ(I²/JI) t²`.
pub fn predicted_series(length: i64, e0: i64, lambda2: i64) -> Result<Vec<i64>> {
    if length < 0 || e0 < 0 || lambda2 < 0 {
        return Err(Error::Input("lengths must be non-negative".into()));
    }
    let mid = e0 - length - lambda2;
    if mid < 0 {
        return Err(Error::Input(format!(
            "negative middle coefficient {mid}: hypotheses cannot hold"
        )));
    }
    let mut h = vec![length, mid, lambda2];
    while h.len() > 1 && h.last() == Some(&0) {
        h.pop();
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_from(h: &[i64], d: usize, len: usize) -> Vec<i64> {
        // a_n = Σ_i h_i C(n - i + d - 1, d - 1)
        let mut t = vec![0i64];
        for n in 0..len {
            let a: i64 = h
                .iter()
                .enumerate()
                .filter(|(i, _)| *i <= n)
                .map(|(i, &hi)| hi * binomial((n - i + d - 1) as i64, d as i64 - 1))
                .sum();
            t.push(t.last().unwrap() + a);
        }
        t
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(-1, 0), 1);
        assert_eq!(binomial(-1, 2), 1);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(-2, 3), -4);
    }

    #[test]
    fn coefficients_from_numerators() {
        let h = [31, 43, 1, 1];
        assert_eq!((0..4).map(|j| e_from_h(&h, j)).collect::<Vec<_>>(), vec![76, 48, 4, 1]);
        let h = [1, 3, 0, 3, -1];
        assert_eq!((0..4).map(|j| e_from_h(&h, j)).collect::<Vec<_>>(), vec![6, 8, 3, -1]);
        let h = [5, 0, 6, -4, 1];
        assert_eq!((0..4).map(|j| e_from_h(&h, j)).collect::<Vec<_>>(), vec![8, 4, 0, 0]);
        assert_eq!(e_from_h(&[1], 3), 0);
    }

    #[test]
    fn fit_agrees_with_series() {
        for (h, d) in [(vec![31, 43, 1, 1], 3), (vec![1, 3, 0, 3, -1], 2), (vec![5, 0, 6, -4, 1], 3)] {
            let t = table_from(&h, d, 12);
            let data = HilbertData::from_table(t.clone(), d, 3).unwrap();
            assert_eq!(data.h, h);
            let (e, post) = fit_coefficients(&t, d, 3).unwrap();
            assert_eq!(e, data.e);
            for n in post..t.len() {
                assert_eq!(samuel_polynomial(&e, n as i64), t[n]);
            }
        }
        // regular ring, m-adic: T(n) = C(n+2, 3)
        let t: Vec<i64> = (0..8).map(|n| binomial(n + 2, 3)).collect();
        let data = HilbertData::from_table(t, 3, 3).unwrap();
        assert_eq!(data.e, vec![1, 0, 0, 0]);
        assert_eq!(data.postulation, 0);
        assert_eq!(data.series_text(), "1");
    }

    #[test]
    fn short_tables_are_rejected() {
        let t: Vec<i64> = (0..4).map(|n| binomial(n + 2, 3)).collect();
        assert!(matches!(fit_coefficients(&t, 3, 3), Err(Error::NmaxTooSmall(_))));
    }

    #[test]
    fn power_transform_examples() {
        assert_eq!(power_transform(&[8, 4, 0, 0], 2).unwrap().eps, [64, 48, 4, 0]);
        assert_eq!(power_transform(&[1, 0, 0, 0], 3).unwrap().eps, [27, 18, 1, 0]);
        let e = [76, 48, 4, 1];
        assert_eq!(power_transform(&e, 1).unwrap().eps, e);
        assert!(power_transform(&[1, 0, 0], 2).is_err());
    }

    #[test]
    fn predicted_series_examples() {
        assert_eq!(predicted_series(3, 4, 0).unwrap(), vec![3, 1]);
        assert_eq!(predicted_series(31, 76, 2).unwrap(), vec![31, 43, 2]);
        assert_eq!(predicted_series(5, 5, 0).unwrap(), vec![5]);
    }

    #[test]
    fn series_text() {
        assert_eq!(format_series(&[5, 0, 6, -4, 1]), "5 + 6t^2 - 4t^3 + t^4");
        assert_eq!(format_series(&[1, 3, 0, 3, -1]), "1 + 3t + 3t^3 - t^4");
    }
}
