//! Poincaré polynomials `p_n(q)` of the permutohedral varieties, computed two
//! ways: from the exponential generating function
//! `1 + Σ p_n(q) yⁿ/n! = (q−1)/(q − e^{(q−1)y})`, and by counting points
//! stratum by stratum over compositions of `n`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::partitions::{partitions_of_length, LabelSet};
use crate::rational::{factorial, Q};

/// A polynomial in `q` with integer coefficients, lowest power first and
/// no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct QPolynomial {
    #[serde(with = "bigint_list")]
    coeffs: Vec<BigInt>,
}

mod bigint_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    // Small values serialize as JSON integers, larger ones as strings.
    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Wire {
        Int(i64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let wire: Vec<Wire> = v
            .iter()
            .map(|x| i64::try_from(x).map(Wire::Int).unwrap_or_else(|_| Wire::Str(x.to_string())))
            .collect();
        wire.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Wire>::deserialize(d)?
            .into_iter()
            .map(|w| match w {
                Wire::Int(i) => Ok(BigInt::from(i)),
                Wire::Str(s) => s.parse().map_err(serde::de::Error::custom),
            })
            .collect()
    }
}

impl<'de> Deserialize<'de> for QPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        bigint_list::deserialize(d).map(QPolynomial::new)
    }
}

impl QPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

impl fmt::Display for QPolynomial {
    /// Highest power first, e.g. `q^2 + 4q + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Dense polynomial in `q` with rational coefficients.
type RatPoly = Vec<Q>;

fn poly_mul(a: &[Q], b: &[Q]) -> RatPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_assign(a: &mut RatPoly, b: &[Q]) {
    if a.len() < b.len() {
        a.resize(b.len(), Q::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

/// A power series in `y`, truncated after `y^order`, with coefficients
/// polynomials in `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesInY {
    order: usize,
    coeffs: Vec<RatPoly>,
}

impl SeriesInY {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `y^k` as rational coefficients of powers of `q`.
    pub fn coeff(&self, k: usize) -> &[Q] {
        &self.coeffs[k]
    }
}

/// Expansion of `(q−1)/(q − e^{(q−1)y})` to order `y^order`.
///
/// The denominator is `(q−1)·(1 − Σ_{k≥1} (q−1)^{k−1} y^k/k!)`, so the
/// quotient is the inverse of the bracket, whose constant term is one.
pub fn generating_series(order: usize) -> SeriesInY {
    let q_minus_1: RatPoly = vec![-Q::one(), Q::one()];
    // c_k = (q−1)^{k−1}/k!
    let mut c: Vec<RatPoly> = vec![Vec::new(); order + 1];
    let mut power: RatPoly = vec![Q::one()];
    for (k, ck) in c.iter_mut().enumerate().skip(1) {
        let inv = Q::from_integer(factorial(k)).recip();
        *ck = power.iter().map(|x| x * &inv).collect();
        power = poly_mul(&power, &q_minus_1);
    }
    let mut f: Vec<RatPoly> = Vec::with_capacity(order + 1);
    f.push(vec![Q::one()]);
    for n in 1..=order {
        let mut acc = RatPoly::new();
        for k in 1..=n {
            poly_add_assign(&mut acc, &poly_mul(&c[k], &f[n - k]));
        }
        f.push(acc);
    }
    SeriesInY { order, coeffs: f }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerativeError {
    #[error("n must be at least 1")]
    ZeroN,
    #[error("coefficient of q^{power} in p_{n} is not an integer: {value}")]
    NonInteger { n: usize, power: usize, value: String },
}

/// `p_n` as `n!` times the `yⁿ` coefficient of the generating function.
pub fn poincare_gf(n: usize) -> Result<QPolynomial, EnumerativeError> {
    if n == 0 {
        return Err(EnumerativeError::ZeroN);
    }
    let series = generating_series(n);
    let nf = Q::from_integer(factorial(n));
    let coeffs = series
        .coeff(n)
        .iter()
        .enumerate()
        .map(|(power, c)| {
            let v = c * &nf;
            if v.is_integer() {
                Ok(v.to_integer())
            } else {
                Err(EnumerativeError::NonInteger {
                    n,
                    power,
                    value: crate::rational::format_q(&v),
                })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QPolynomial::new(coeffs))
}

/// All compositions `(s_1, …, s_l)` of `n`.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn multinomial(parts: &[usize]) -> BigInt {
    let n: usize = parts.iter().sum();
    parts.iter().fold(factorial(n), |acc, &s| acc / factorial(s))
}

fn binomial_row(k: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..k {
        let mut next = vec![BigInt::zero(); row.len() + 1];
        for (i, c) in row.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c;
        }
        row = next;
    }
    row
}

/// `(q−1)^k` with integer coefficients.
fn q_minus_one_power(k: usize) -> Vec<BigInt> {
    binomial_row(k)
        .into_iter()
        .enumerate()
        .map(|(i, c)| if (k - i).is_odd() { -c } else { c })
        .collect()
}

/// `p_n` as the point count `Σ_{(s_1..s_l)} (n; s_1..s_l) (q−1)^{n−l}`.
pub fn poincare_strata(n: usize) -> Result<QPolynomial, EnumerativeError> {
    if n == 0 {
        return Err(EnumerativeError::ZeroN);
    }
    let mut acc = vec![BigInt::zero(); n];
    for comp in compositions(n) {
        let m = multinomial(&comp);
        for (i, c) in q_minus_one_power(n - comp.len()).into_iter().enumerate() {
            acc[i] += &m * c;
        }
    }
    Ok(QPolynomial::new(acc))
}

/// `a_{n,i}`, the coefficient of `q^i` in `p_n`; zero out of range.
pub fn eulerian(n: usize, i: usize) -> BigInt {
    match poincare_strata(n) {
        Ok(p) => p.coeff(i),
        Err(_) => BigInt::zero(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PoincareRow {
    pub n: usize,
    pub generating_function: QPolynomial,
    pub strata: QPolynomial,
    /// Graded ring dimensions, when `n` is within the ring bound.
    pub ring: Option<Vec<usize>>,
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub n_max: usize,
    pub ring_max: usize,
    pub rows: Vec<PoincareRow>,
    pub failures: Vec<String>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares the two polynomial methods for `n ≤ n_max` and the ring
/// dimensions for `n ≤ ring_max`, and checks the standard consequences:
/// palindromic, nonnegative, `p_n(1) = n!`, `p_n(0) = 1`,
/// `a_{n,1} = 2ⁿ − n − 1`, and the stratum counts against enumeration.
pub fn cross_check(n_max: usize, ring_max: usize) -> CrossCheckReport {
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let gf = match poincare_gf(n) {
            Ok(p) => p,
            Err(e) => {
                failures.push(e.to_string());
                continue;
            }
        };
        let st = poincare_strata(n).expect("n >= 1");
        if gf != st {
            failures.push(format!("n={n}: generating function gives {gf}, strata give {st}"));
        }
        if !st.is_palindromic() {
            failures.push(format!("n={n}: {st} is not palindromic"));
        }
        if !st.has_nonnegative_coefficients() {
            failures.push(format!("n={n}: {st} has a negative coefficient"));
        }
        if st.degree() != Some(n - 1) {
            failures.push(format!("n={n}: degree of {st} is not {}", n - 1));
        }
        if st.eval(&BigInt::one()) != factorial(n) {
            failures.push(format!("n={n}: p(1) = {} but n! = {}", st.eval(&BigInt::one()), factorial(n)));
        }
        if st.eval(&BigInt::zero()) != BigInt::one() {
            failures.push(format!("n={n}: p(0) != 1"));
        }
        let h2 = (BigInt::one() << n) - BigInt::from(n) - BigInt::one();
        if n >= 2 && st.coeff(1) != h2 {
            failures.push(format!("n={n}: coefficient of q is {} but 2^n-n-1 = {h2}", st.coeff(1)));
        }
        let ring = (n <= ring_max).then(|| {
            let dims = crate::ring::graded_dimensions(&LabelSet::range(n));
            let expected: Vec<usize> = (0..n).map(|i| usize::try_from(st.coeff(i)).unwrap_or(usize::MAX)).collect();
            if dims != expected {
                failures.push(format!("n={n}: ring dimensions {dims:?}, polynomial {expected:?}"));
            }
            dims
        });
        if n <= 6 {
            let labels = LabelSet::range(n);
            for len in 1..=n {
                let counted: BigInt = compositions(n).iter().filter(|c| c.len() == len).map(|c| multinomial(c)).sum();
                let enumerated = partitions_of_length(&labels, len).len();
                if counted != BigInt::from(enumerated) {
                    failures.push(format!("n={n}: {counted} strata of length {len} counted, {enumerated} enumerated"));
                }
            }
        }
        rows.push(PoincareRow {
            n,
            display: st.to_string(),
            generating_function: gf,
            strata: st,
            ring,
        });
    }
    CrossCheckReport {
        n_max,
        ring_max,
        rows,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_polynomials() {
        assert_eq!(poincare_gf(1).unwrap(), QPolynomial::from_i64(&[1]));
        assert_eq!(poincare_strata(2).unwrap(), QPolynomial::from_i64(&[1, 1]));
        assert_eq!(poincare_gf(3).unwrap().to_string(), "q^2 + 4q + 1");
        assert_eq!(poincare_strata(4).unwrap().to_string(), "q^3 + 11q^2 + 11q + 1");
        assert_eq!(poincare_gf(5).unwrap().to_string(), "q^4 + 26q^3 + 66q^2 + 26q + 1");
        assert_eq!(poincare_strata(6).unwrap(), QPolynomial::from_i64(&[1, 57, 302, 302, 57, 1]));
        assert!(poincare_gf(0).is_err());
    }

    #[test]
    fn eulerian_values() {
        assert_eq!(eulerian(4, 1), BigInt::from(11));
        assert_eq!(eulerian(7, 0), BigInt::one());
        assert_eq!(eulerian(4, 9), BigInt::zero());
        assert_eq!(eulerian(0, 0), BigInt::zero());
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(4).len(), 8);
        assert_eq!(multinomial(&[2, 1, 1]), BigInt::from(12));
        assert_eq!(q_minus_one_power(2), vec![BigInt::from(1), BigInt::from(-2), BigInt::from(1)]);
    }

    #[test]
    fn display_and_json() {
        let p = QPolynomial::from_i64(&[1, -3, 0, 1]);
        assert_eq!(p.to_string(), "q^3 - 3q + 1");
        assert_eq!(QPolynomial::zero().to_string(), "0");
        assert_eq!(serde_json::to_string(&p).unwrap(), "[1,-3,0,1]");
        let back: QPolynomial = serde_json::from_str("[1,-3,0,1,0]").unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn cross_check_small() {
        let r = cross_check(6, 3);
        assert!(r.passed(), "{:?}", r.failures);
    }
}
