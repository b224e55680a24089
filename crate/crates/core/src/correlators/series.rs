//! Truncated matrix-valued power series in supercommuting variables `x^a`
//! and the condition `dB ∧ dB = 0`.
//!
//! Monomials are exponent vectors over the index positions, read as the
//! product of variables in increasing position; odd variables appear at
//! most once. The differential is odd, `d(x^a) = dx^a`, and forms follow
//! `dx^a ∧ dx^b = −(−1)^{p_a p_b} dx^b ∧ dx^a`. With `dB = Σ_a dx^a ∂_a B`
//! for left derivatives `∂_a`, the coefficient of `dx^a ∧ dx^b` (`a < b`)
//! in `dB ∧ dB` is, up to an overall sign, `∂_aB·∂_bB − (−1)^{p_a p_b}
//! ∂_bB·∂_aB`, and for odd `a` the coefficient of `dx^a ∧ dx^a` is
//! `(∂_aB)²`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::family::TopCorrelatorFamily;
use super::matrix::Matrix;
use super::sign::{koszul_sign, IndexEntry, Parity, SuperIndexSet};
use super::CorrelatorError;
use crate::partitions::Label;
use crate::rational::{factorial, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Ord for Monomial {
    /// By degree, then lexicographically on exponents.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn new(index: &SuperIndexSet, exps: Vec<u32>) -> Result<Self, CorrelatorError> {
        let bad = exps.len() != index.len() || exps.iter().zip(index.parities()).any(|(&e, p)| p.is_odd() && e > 1);
        if bad {
            return Err(CorrelatorError::BadMonomial(exps));
        }
        Ok(Monomial { exps })
    }

    pub fn one(vars: usize) -> Self {
        Monomial { exps: vec![0; vars] }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn odd_count(&self, index: &SuperIndexSet) -> usize {
        self.exps
            .iter()
            .zip(index.parities())
            .filter(|(&e, p)| p.is_odd() && e > 0)
            .count()
    }

    /// The canonical product of the variables at `positions` (in that
    /// order): the sign of sorting them and the monomial, or `None` when an
    /// odd variable repeats.
    pub fn from_word(index: &SuperIndexSet, positions: &[usize]) -> Option<(i32, Monomial)> {
        let parities: Vec<Parity> = positions.iter().map(|&k| index.parities()[k]).collect();
        let mut perm: Vec<usize> = (0..positions.len()).collect();
        perm.sort_by_key(|&k| positions[k]);
        let mut exps = vec![0u32; index.len()];
        for &k in positions {
            exps[k] += 1;
            if index.parities()[k].is_odd() && exps[k] > 1 {
                return None;
            }
        }
        Some((koszul_sign(&perm, &parities), Monomial { exps }))
    }

    /// `self · other` in canonical form with its sign.
    pub fn times(&self, other: &Monomial, index: &SuperIndexSet) -> Option<(i32, Monomial)> {
        let par = index.parities();
        let mut exps = vec![0u32; self.exps.len()];
        for k in 0..self.exps.len() {
            if par[k].is_odd() && self.exps[k] > 0 && other.exps[k] > 0 {
                return None;
            }
            exps[k] = self.exps[k] + other.exps[k];
        }
        // odd variables of `other` that must pass each odd variable of `self`
        let mut swaps = 0usize;
        for u in 0..self.exps.len() {
            if par[u].is_odd() && self.exps[u] > 0 {
                swaps += (0..u).filter(|&v| par[v].is_odd() && other.exps[v] > 0).count();
            }
        }
        Some((if swaps % 2 == 0 { 1 } else { -1 }, Monomial { exps }))
    }

    /// Left derivative by the variable at `pos`: `(sign·exponent, rest)`.
    pub fn derivative(&self, pos: usize, index: &SuperIndexSet) -> Option<(i64, Monomial)> {
        let e = self.exps[pos];
        if e == 0 {
            return None;
        }
        let par = index.parities();
        let mut rest = self.exps.clone();
        rest[pos] -= 1;
        let coeff = if par[pos].is_odd() {
            let before = (0..pos).filter(|&k| par[k].is_odd() && self.exps[k] > 0).count();
            if before % 2 == 0 {
                1
            } else {
                -1
            }
        } else {
            e as i64
        };
        Some((coeff, Monomial { exps: rest }))
    }

    /// The labels with multiplicity, in increasing order.
    pub fn to_sequence(&self, index: &SuperIndexSet) -> Vec<Label> {
        self.exps
            .iter()
            .zip(index.labels())
            .flat_map(|(&e, &a)| std::iter::repeat(a).take(e as usize))
            .collect()
    }

    fn factorial_weight(&self) -> BigInt {
        self.exps.iter().fold(BigInt::one(), |acc, &e| acc * factorial(e as usize))
    }
}

/// `Σ_m m·B_m` over monomials of degree `1..=order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    index: SuperIndexSet,
    dim: usize,
    order: usize,
    terms: BTreeMap<Monomial, Matrix>,
}

impl TruncatedSeries {
    pub fn new(index: SuperIndexSet, dim: usize, order: usize) -> Self {
        TruncatedSeries {
            index,
            dim,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn index(&self) -> &SuperIndexSet {
        &self.index
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Matrix)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Matrix {
        self.terms.get(m).cloned().unwrap_or_else(|| Matrix::zero(self.dim))
    }

    /// Adds `scale · m · value`; terms beyond the order are dropped.
    pub fn add_term(&mut self, m: Monomial, scale: &Q, value: &Matrix) -> Result<(), CorrelatorError> {
        if value.dim() != self.dim {
            return Err(CorrelatorError::DimensionMismatch {
                expected: self.dim,
                got: value.dim(),
            });
        }
        if m.degree() == 0 {
            return Err(CorrelatorError::BadMonomial(m.exps));
        }
        if m.degree() > self.order || scale.is_zero() {
            return Ok(());
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(|| Matrix::zero(self.dim));
        slot.add_scaled(scale, value);
        if slot.is_zero() {
            self.terms.remove(&m);
        }
        Ok(())
    }

    pub fn to_file(&self) -> SeriesFile {
        SeriesFile {
            dim_f: self.dim,
            indices: self.index.entries(),
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| SeriesTerm {
                    exponents: m.exps.clone(),
                    matrix: v.clone(),
                })
                .collect(),
        }
    }

    pub fn from_file(file: &SeriesFile) -> Result<Self, CorrelatorError> {
        let index = SuperIndexSet::new(file.indices.iter().map(|e| (e.label, e.parity)))?;
        let mut out = TruncatedSeries::new(index, file.dim_f, file.order);
        for t in &file.terms {
            let m = Monomial::new(&out.index, t.exponents.clone())?;
            if m.degree() > file.order {
                return Err(CorrelatorError::BeyondOrder {
                    len: m.degree(),
                    order: file.order,
                });
            }
            out.add_term(m, &Q::one(), &t.matrix)?;
        }
        Ok(out)
    }
}

/// Wire form of a series; monomials are exponent vectors over the indices
/// in increasing label order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesFile {
    #[serde(rename = "dimF")]
    pub dim_f: usize,
    pub indices: Vec<IndexEntry>,
    pub order: usize,
    pub terms: Vec<SeriesTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub exponents: Vec<u32>,
    pub matrix: Matrix,
}

/// `B = Σ_{n ≤ N} Σ_{(a_1..a_n)} x^{a_n} ⋯ x^{a_1}/n! · ⟨Δ_{a_1} ⋯ Δ_{a_n}⟩`,
/// summed literally over all index tuples.
pub fn build_series(top: &TopCorrelatorFamily, order: usize) -> Result<TruncatedSeries, CorrelatorError> {
    if order > top.order() {
        return Err(CorrelatorError::BeyondOrder {
            len: order,
            order: top.order(),
        });
    }
    let index = top.index().clone();
    let mut out = TruncatedSeries::new(index.clone(), top.dim(), order);
    for n in 1..=order {
        let inv = Q::from_integer(factorial(n)).recip();
        for a in index.tuples(n) {
            let Some(value) = top.lookup(&a)? else { continue };
            let word: Vec<usize> = a.iter().rev().map(|&l| index.position(l).expect("known label")).collect();
            let Some((sign, m)) = Monomial::from_word(&index, &word) else { continue };
            let scale = if sign == 1 { inv.clone() } else { -inv.clone() };
            out.add_term(m, &scale, &value)?;
        }
    }
    Ok(out)
}

/// Reads the top values off a series:
/// `⟨sorted⟩ = (−1)^{k(k−1)/2} · Π e_a! · coefficient`, `k` the number of
/// odd variables in the monomial.
pub fn top_from_series(series: &TruncatedSeries) -> Result<TopCorrelatorFamily, CorrelatorError> {
    let index = series.index();
    let mut out = TopCorrelatorFamily::new(index.clone(), series.dim(), series.order());
    for (m, v) in series.terms() {
        let k = m.odd_count(index);
        let mut scale = Q::from_integer(m.factorial_weight());
        if (k * k.saturating_sub(1) / 2) % 2 == 1 {
            scale = -scale;
        }
        out.insert(&m.to_sequence(index), v.scaled(&scale))?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutativityFailure {
    /// Labels of the two differentials.
    pub a: Label,
    pub b: Label,
    pub exponents: Vec<u32>,
    pub coefficient: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutativityReport {
    pub order: usize,
    /// Coefficients are checked at monomials of degree up to this.
    pub max_degree: usize,
    pub checked: usize,
    pub failure_count: usize,
    pub failures: Vec<CommutativityFailure>,
}

impl CommutativityReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

type SeriesMap = BTreeMap<Monomial, Matrix>;

fn derivative_series(series: &TruncatedSeries, pos: usize) -> SeriesMap {
    let mut out = SeriesMap::new();
    for (m, v) in series.terms() {
        if let Some((c, rest)) = m.derivative(pos, series.index()) {
            let slot = out.entry(rest).or_insert_with(|| Matrix::zero(series.dim()));
            slot.add_scaled(&Q::from_integer(BigInt::from(c)), v);
        }
    }
    out
}

fn product_into(out: &mut SeriesMap, scale: &Q, x: &SeriesMap, y: &SeriesMap, index: &SuperIndexSet, dim: usize, max_degree: usize) {
    for (m1, v1) in x {
        for (m2, v2) in y {
            if m1.degree() + m2.degree() > max_degree {
                continue;
            }
            let Some((sign, m)) = m1.times(m2, index) else { continue };
            let s = if sign == 1 { scale.clone() } else { -scale.clone() };
            out.entry(m).or_insert_with(|| Matrix::zero(dim)).add_scaled(&s, &(v1 * v2));
        }
    }
}

/// Checks that every coefficient of `dB ∧ dB` vanishes at monomials of
/// degree at most `max_degree` (default `order − 2`).
pub fn check_commutativity(series: &TruncatedSeries, max_degree: Option<usize>) -> Result<CommutativityReport, CorrelatorError> {
    if series.order() < 2 {
        return Err(CorrelatorError::OrderTooLow(2));
    }
    let max_degree = max_degree.unwrap_or(series.order() - 2).min(series.order() - 1);
    let index = series.index();
    let dim = series.dim();
    let derivs: Vec<SeriesMap> = (0..index.len()).map(|k| derivative_series(series, k)).collect();
    let par = index.parities();
    let mut report = CommutativityReport {
        order: series.order(),
        max_degree,
        checked: 0,
        failure_count: 0,
        failures: Vec::new(),
    };
    for a in 0..index.len() {
        for b in a..index.len() {
            let mut coeff = SeriesMap::new();
            if a == b {
                if !par[a].is_odd() {
                    continue;
                }
                product_into(&mut coeff, &Q::one(), &derivs[a], &derivs[a], index, dim, max_degree);
            } else {
                let both_odd = par[a].is_odd() && par[b].is_odd();
                let s = if both_odd { Q::one() } else { -Q::one() };
                product_into(&mut coeff, &Q::one(), &derivs[a], &derivs[b], index, dim, max_degree);
                product_into(&mut coeff, &s, &derivs[b], &derivs[a], index, dim, max_degree);
            }
            report.checked += 1;
            for (m, v) in coeff {
                if !v.is_zero() {
                    report.failure_count += 1;
                    if report.failures.len() < 20 {
                        report.failures.push(CommutativityFailure {
                            a: index.labels()[a],
                            b: index.labels()[b],
                            exponents: m.exps,
                            coefficient: v,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}
