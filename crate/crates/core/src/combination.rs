//! Rational linear combinations of partition-indexed symbols.
//!
//! The same container carries good-monomial combinations `Σ c·m(τ)` on the
//! cohomology side and generator combinations `Σ c·μ(τ)` on the homology
//! side; the marker type keeps the two from being mixed up.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::partitions::{LabelSet, OrderedSetPartition, PartitionError};
use crate::rational::{self, Q};

pub trait Symbol: Clone + fmt::Debug + PartialEq + Eq {
    const NAME: &'static str;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodMonomial;

impl Symbol for GoodMonomial {
    const NAME: &'static str = "m";
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle;

impl Symbol for Cycle {
    const NAME: &'static str = "mu";
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combination<S: Symbol> {
    labels: LabelSet,
    terms: BTreeMap<OrderedSetPartition, Q>,
    _symbol: PhantomData<S>,
}

/// `Σ c·m(τ)`: an element of the cohomology ring written in good monomials.
pub type GoodElement = Combination<GoodMonomial>;
/// `Σ c·μ(τ)`: an element of the homology module.
pub type ModuleElement = Combination<Cycle>;

impl<S: Symbol> Combination<S> {
    pub fn zero(labels: &LabelSet) -> Self {
        Combination {
            labels: labels.clone(),
            terms: BTreeMap::new(),
            _symbol: PhantomData,
        }
    }

    pub fn basis(tau: &OrderedSetPartition) -> Self {
        let mut out = Self::zero(&tau.labels());
        out.terms.insert(tau.clone(), Q::one());
        out
    }

    /// The symbol of the one-block partition.
    pub fn unit(labels: &LabelSet) -> Self {
        Self::basis(&OrderedSetPartition::trivial(labels))
    }

    pub fn from_terms(
        labels: &LabelSet,
        terms: impl IntoIterator<Item = (OrderedSetPartition, Q)>,
    ) -> Result<Self, PartitionError> {
        let mut out = Self::zero(labels);
        for (tau, c) in terms {
            if &tau.labels() != labels {
                return Err(PartitionError::LabelSetMismatch);
            }
            out.add_term(tau, c);
        }
        Ok(out)
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn add_term(&mut self, tau: OrderedSetPartition, c: Q) {
        debug_assert_eq!(tau.label_count(), self.labels.len());
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(tau);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, scale: &Q, other: &Self) {
        for (tau, c) in &other.terms {
            self.add_term(tau.clone(), scale * c);
        }
    }

    pub fn coeff(&self, tau: &OrderedSetPartition) -> Q {
        self.terms.get(tau).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OrderedSetPartition, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Literally zero (no stored terms). Vanishing modulo relations is a
    /// separate question answered by the relation spans.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, s: &Q) -> Self {
        let mut out = Self::zero(&self.labels);
        if !s.is_zero() {
            for (tau, c) in &self.terms {
                out.terms.insert(tau.clone(), c * s);
            }
        }
        out
    }

    /// Sorted distinct grades of the stored terms.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(OrderedSetPartition::grade).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// `Some(k)` when every term has grade `k`; `None` for zero or mixed.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        match self.grades().as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    pub fn homogeneous_part(&self, k: usize) -> Self {
        let mut out = Self::zero(&self.labels);
        for (tau, c) in &self.terms {
            if tau.grade() == k {
                out.terms.insert(tau.clone(), c.clone());
            }
        }
        out
    }

    /// Same coefficients attached to the other kind of symbol.
    pub fn relabel<T: Symbol>(&self) -> Combination<T> {
        Combination {
            labels: self.labels.clone(),
            terms: self.terms.clone(),
            _symbol: PhantomData,
        }
    }

    pub fn to_terms(&self) -> Vec<Term> {
        self.terms
            .iter()
            .map(|(tau, c)| Term {
                tau: tau.clone(),
                coeff: c.clone(),
            })
            .collect()
    }
}

impl<S: Symbol> AddAssign<&Combination<S>> for Combination<S> {
    fn add_assign(&mut self, rhs: &Combination<S>) {
        self.add_scaled(&Q::one(), rhs);
    }
}

impl<S: Symbol> SubAssign<&Combination<S>> for Combination<S> {
    fn sub_assign(&mut self, rhs: &Combination<S>) {
        self.add_scaled(&-Q::one(), rhs);
    }
}

impl<S: Symbol> Add for &Combination<S> {
    type Output = Combination<S>;
    fn add(self, rhs: &Combination<S>) -> Combination<S> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<S: Symbol> Sub for &Combination<S> {
    type Output = Combination<S>;
    fn sub(self, rhs: &Combination<S>) -> Combination<S> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<S: Symbol> Neg for &Combination<S> {
    type Output = Combination<S>;
    fn neg(self) -> Combination<S> {
        self.scaled(&-Q::one())
    }
}

impl<S: Symbol> fmt::Display for Combination<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (tau, c)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            let abs = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !abs.is_one() {
                write!(f, "{}*", rational::format_q(&abs))?;
            }
            write!(f, "{}{}", S::NAME, tau)?;
        }
        Ok(())
    }
}

/// Wire form of one term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub tau: OrderedSetPartition,
    #[serde(with = "rational::as_string")]
    pub coeff: Q,
}

/// Wire form of a homology element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleTerms {
    pub mu_terms: Vec<Term>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    fn p(blocks: &[&[u32]]) -> OrderedSetPartition {
        OrderedSetPartition::new(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn arithmetic_drops_zeros() {
        let b = LabelSet::range(2);
        let mut e = GoodElement::zero(&b);
        e.add_term(p(&[&[1], &[2]]), q(2));
        e.add_term(p(&[&[2], &[1]]), q(-1));
        let f = e.scaled(&q_frac(1, 2));
        let d = &e - &f;
        assert_eq!(d.coeff(&p(&[&[1], &[2]])), q(1));
        let z = &d - &d;
        assert!(z.is_empty());
        assert_eq!(e.homogeneous_grade(), Some(1));
        assert_eq!(format!("{e}"), "2*m({1},{2}) - m({2},{1})");
    }

    #[test]
    fn label_mismatch_rejected() {
        let r = GoodElement::from_terms(&LabelSet::range(3), [(p(&[&[1], &[2]]), q(1))]);
        assert_eq!(r, Err(PartitionError::LabelSetMismatch));
    }

    #[test]
    fn json_terms() {
        let e = ModuleElement::basis(&p(&[&[1, 2], &[3]]));
        let wire = ModuleTerms { mu_terms: e.to_terms() };
        let s = serde_json::to_string(&wire).unwrap();
        assert_eq!(s, r#"{"mu_terms":[{"tau":[[1,2],[3]],"coeff":"1"}]}"#);
        let back: ModuleTerms = serde_json::from_str(&s).unwrap();
        assert_eq!(back, wire);
    }
}
