//! The presented cohomology ring, written in good monomials.
//!
//! The ring is generated by symbols `l_σ`, one per 2-partition, modulo the
//! linear relations `Σ_{iσj} l_σ − Σ_{jσi} l_σ` and the products `l_σ l_ρ`
//! of oppositely separating pairs. Every element is a combination of good
//! monomials `m(τ)` (the product of the good family of `τ`), though these
//! are not independent; equality is decided modulo the relation spans of
//! [`crate::relations`].

use num_traits::One;

use crate::combination::GoodElement;
use crate::partitions::{
    classify_unchecked, good_family, refine_unchecked, splits, two_partitions, BreakClassification, Label,
    LabelSet, OrderedSetPartition, PartitionError, TwoPartition,
};
use crate::rational::Q;
use crate::relations::{self, relation_rank_fraction_free, relations_of_grade, Relation};

pub use crate::combination::GoodMonomial;

/// A relation among good monomials with its provenance `(τ, a, i, j)`.
pub type RelationVector = Relation<GoodMonomial>;

/// A monomial in the free generators `l_σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMonomial {
    labels: LabelSet,
    factors: Vec<TwoPartition>,
}

impl RawMonomial {
    pub fn new(labels: &LabelSet, factors: Vec<TwoPartition>) -> Result<Self, PartitionError> {
        if factors.iter().any(|f| &f.labels() != labels) {
            return Err(PartitionError::LabelSetMismatch);
        }
        Ok(RawMonomial {
            labels: labels.clone(),
            factors,
        })
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn factors(&self) -> &[TwoPartition] {
        &self.factors
    }
}

/// The linear generator `Σ_{σ: iσj} m(σ) − Σ_{σ: jσi} m(σ)`.
pub fn generator_relation_linear(labels: &LabelSet, i: Label, j: Label) -> Result<GoodElement, PartitionError> {
    Ok(relation_good(&OrderedSetPartition::trivial(labels), 0, i, j)?.element)
}

pub fn relation_good(tau: &OrderedSetPartition, a: usize, i: Label, j: Label) -> Result<RelationVector, PartitionError> {
    relations::relation(tau, a, i, j)
}

/// All relations of one grade.
pub fn relations_at_grade(labels: &LabelSet, k: usize) -> Vec<RelationVector> {
    relations_of_grade(labels, k)
}

/// `−Σ_{α: iα} [τ(α)] − Σ_{β: βj} [τ(β)]`: `α` splits block `a` with `i`
/// in its first part, `β` splits block `a + 1` with `j` in its second part.
pub(crate) fn between_expansion(
    tau: &OrderedSetPartition,
    a: usize,
    i: Label,
    j: Label,
) -> Vec<(OrderedSetPartition, Q)> {
    let mut out = Vec::new();
    for alpha in splits(tau.block(a)) {
        if alpha.in_first(i) {
            out.push((refine_unchecked(tau, a, &alpha), -Q::one()));
        }
    }
    for beta in splits(tau.block(a + 1)) {
        if !beta.in_first(j) {
            out.push((refine_unchecked(tau, a + 1, &beta), -Q::one()));
        }
    }
    out
}

/// Default choice of `(i, j)` in a between-blocks expansion.
pub(crate) fn default_pair(tau: &OrderedSetPartition, a: usize) -> (Label, Label) {
    (tau.block(a)[0], tau.block(a + 1)[0])
}

/// `l_σ · m(τ)` as a combination of good monomials.
pub(crate) fn generator_times_basis(sigma: &TwoPartition, tau: &OrderedSetPartition) -> Vec<(OrderedSetPartition, Q)> {
    match classify_unchecked(sigma, tau) {
        BreakClassification::Between(a) => {
            let (i, j) = default_pair(tau, a);
            between_expansion(tau, a, i, j)
        }
        BreakClassification::At { block, alpha } => vec![(refine_unchecked(tau, block, &alpha), Q::one())],
        BreakClassification::NoBreak { .. } => Vec::new(),
    }
}

/// `l_σ · e`, term by term.
pub fn multiply_generator(sigma: &TwoPartition, e: &GoodElement) -> Result<GoodElement, PartitionError> {
    if &sigma.labels() != e.labels() {
        return Err(PartitionError::LabelSetMismatch);
    }
    let mut out = GoodElement::zero(e.labels());
    for (tau, c) in e.terms() {
        for (t, x) in generator_times_basis(sigma, tau) {
            out.add_term(t, x * c);
        }
    }
    Ok(out)
}

/// `e1 · e2`: each monomial of `e2` is expanded into its good family and the
/// generators are applied to `e1` one at a time.
pub fn product(e1: &GoodElement, e2: &GoodElement) -> Result<GoodElement, PartitionError> {
    if e1.labels() != e2.labels() {
        return Err(PartitionError::LabelSetMismatch);
    }
    let mut out = GoodElement::zero(e1.labels());
    for (tau, c) in e2.terms() {
        let mut acc = e1.clone();
        for sigma in good_family(tau) {
            acc = multiply_generator(&sigma, &acc)?;
        }
        out.add_scaled(c, &acc);
    }
    Ok(out)
}

/// Image of a free monomial among good monomials.
pub fn reduce_raw(m: &RawMonomial) -> GoodElement {
    let mut acc = GoodElement::unit(&m.labels);
    for f in &m.factors {
        acc = multiply_generator(f, &acc).expect("factors share the label set");
    }
    acc
}

/// Dimension of grade `k`: the number of `(k+1)`-block partitions minus the
/// rank of the grade-`k` relations, by fraction-free elimination.
pub fn graded_dimension(labels: &LabelSet, k: usize) -> usize {
    let n = labels.len();
    if k >= n {
        return 0;
    }
    let count = crate::partitions::partitions_of_length(labels, k + 1).len();
    count - relation_rank_fraction_free(labels, k)
}

pub fn graded_dimensions(labels: &LabelSet) -> Vec<usize> {
    (0..labels.len()).map(|k| graded_dimension(labels, k)).collect()
}

/// Whether `e` is zero in the ring, decided grade by grade.
pub fn is_zero(e: &GoodElement) -> bool {
    relations::vanishes(e)
}

pub fn equivalent(e1: &GoodElement, e2: &GoodElement) -> bool {
    is_zero(&(e1 - e2))
}

/// Generators `l_σ` as good elements.
pub fn generators(labels: &LabelSet) -> Vec<(TwoPartition, GoodElement)> {
    two_partitions(labels)
        .into_iter()
        .map(|s| {
            let e = GoodElement::basis(s.as_partition());
            (s, e)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p(blocks: &[&[u32]]) -> OrderedSetPartition {
        OrderedSetPartition::new(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    fn two(a: &[u32], b: &[u32]) -> TwoPartition {
        TwoPartition::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn linear_generators() {
        let r = generator_relation_linear(&LabelSet::range(2), 1, 2).unwrap();
        let mut expected = GoodElement::basis(&p(&[&[1], &[2]]));
        expected.add_term(p(&[&[2], &[1]]), q(-1));
        assert_eq!(r, expected);

        // over {1,2,3}, two 2-partitions put 1 before 2 and two put 2 first
        let r = generator_relation_linear(&LabelSet::range(3), 1, 2).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r.coeff(&p(&[&[1], &[2, 3]])), q(1));
        assert_eq!(r.coeff(&p(&[&[1, 3], &[2]])), q(1));
        assert_eq!(r.coeff(&p(&[&[2], &[1, 3]])), q(-1));
        assert_eq!(r.coeff(&p(&[&[2, 3], &[1]])), q(-1));
        let back = generator_relation_linear(&LabelSet::range(3), 2, 1).unwrap();
        assert_eq!(back, r.scaled(&q(-1)));
        assert!(generator_relation_linear(&LabelSet::range(3), 2, 2).is_err());
    }

    #[test]
    fn good_relations() {
        let r = relation_good(&p(&[&[1, 2]]), 0, 1, 2).unwrap();
        assert_eq!(r.element, generator_relation_linear(&LabelSet::range(2), 1, 2).unwrap());
        let r = relation_good(&p(&[&[1, 2], &[3]]), 0, 1, 2).unwrap();
        let mut expected = GoodElement::basis(&p(&[&[1], &[2], &[3]]));
        expected.add_term(p(&[&[2], &[1], &[3]]), q(-1));
        assert_eq!(r.element, expected);
        assert!(relation_good(&p(&[&[1, 2], &[3]]), 0, 1, 3).is_err());
    }

    #[test]
    fn generator_action_cases() {
        let s = two(&[1], &[2, 3]);
        let unit = GoodElement::unit(&LabelSet::range(3));
        assert_eq!(multiply_generator(&s, &unit).unwrap(), GoodElement::basis(s.as_partition()));

        // l_σ · m(σ): only the β-sum contributes, with β = ({3},{2})
        let sq = multiply_generator(&s, &GoodElement::basis(s.as_partition())).unwrap();
        assert_eq!(sq, GoodElement::basis(&p(&[&[1], &[3], &[2]])).scaled(&q(-1)));

        let z = multiply_generator(&two(&[1, 3], &[2]), &GoodElement::basis(&p(&[&[1], &[2], &[3]]))).unwrap();
        assert!(z.is_empty());
    }

    #[test]
    fn products_and_reduction() {
        let b = LabelSet::range(3);
        let t = p(&[&[1], &[2], &[3]]);
        let m = GoodElement::basis(&t);
        assert_eq!(product(&GoodElement::unit(&b), &m).unwrap(), m);
        assert_eq!(product(&m, &GoodElement::unit(&b)).unwrap(), m);

        let fam = good_family(&t);
        let fwd = reduce_raw(&RawMonomial::new(&b, fam.clone()).unwrap());
        let rev = reduce_raw(&RawMonomial::new(&b, fam.into_iter().rev().collect()).unwrap());
        assert_eq!(fwd, m);
        assert_eq!(rev, m);
        assert_eq!(reduce_raw(&RawMonomial::new(&b, vec![two(&[1], &[2, 3])]).unwrap()), GoodElement::basis(&p(&[&[1], &[2, 3]])));

        // 1 σ 2 and 2 ρ 1 annihilate
        let z = reduce_raw(&RawMonomial::new(&b, vec![two(&[1], &[2, 3]), two(&[2], &[1, 3])]).unwrap());
        assert!(z.is_empty());
    }

    #[test]
    fn dimensions_small() {
        assert_eq!(graded_dimension(&LabelSet::range(3), 0), 1);
        assert_eq!(graded_dimensions(&LabelSet::range(3)), vec![1, 4, 1]);
        assert_eq!(graded_dimensions(&LabelSet::range(4)), vec![1, 11, 11, 1]);
        assert_eq!(graded_dimension(&LabelSet::range(3), 7), 0);
    }
}
