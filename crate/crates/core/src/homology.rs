//! The homology module: generators `μ(τ)`, the action of the ring
//! generators `l_σ`, and exhaustive checks that the action is well defined.
//!
//! The action of `l_σ` on `μ(τ)` depends on how `σ` breaks `τ`:
//! between two blocks it expands into refinements of those blocks, at a
//! block it refines that block, and otherwise it is zero. The checks in
//! [`verify_action`] establish that this table is independent of the
//! labels chosen in the expansion, respects the linear relations, gives
//! commuting operators, and is annihilated by the ideal of the ring.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::combination::{Combination, Cycle, GoodElement, GoodMonomial, ModuleElement};
use crate::partitions::{
    classify_unchecked, concatenate, enumerate_partitions, good_family, refine_unchecked, separates, splits,
    two_partitions, BreakClassification, Label, LabelSet, OrderedSetPartition, PartitionError, TwoPartition,
};
use crate::rational::Q;
use crate::relations::{self, relation_span, Relation};
use crate::ring::default_pair;

pub type HomologyRelation = Relation<Cycle>;

/// Which multiplication table to use. `FlippedBeta` negates the second sum
/// of the between-blocks expansion and exists as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionTable {
    #[default]
    Standard,
    FlippedBeta,
}

fn between_terms(
    table: ActionTable,
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
    let beta_sign = match table {
        ActionTable::Standard => -Q::one(),
        ActionTable::FlippedBeta => Q::one(),
    };
    for beta in splits(tau.block(a + 1)) {
        if !beta.in_first(j) {
            out.push((refine_unchecked(tau, a + 1, &beta), beta_sign.clone()));
        }
    }
    out
}

fn act_on_generator(table: ActionTable, sigma: &TwoPartition, tau: &OrderedSetPartition) -> Vec<(OrderedSetPartition, Q)> {
    match classify_unchecked(sigma, tau) {
        BreakClassification::Between(a) => {
            let (i, j) = default_pair(tau, a);
            between_terms(table, tau, a, i, j)
        }
        BreakClassification::At { block, alpha } => vec![(refine_unchecked(tau, block, &alpha), Q::one())],
        BreakClassification::NoBreak { .. } => Vec::new(),
    }
}

/// `l_σ · x` under the chosen table.
pub fn act_generator_with(table: ActionTable, sigma: &TwoPartition, x: &ModuleElement) -> ModuleElement {
    debug_assert_eq!(&sigma.labels(), x.labels());
    let mut out = ModuleElement::zero(x.labels());
    for (tau, c) in x.terms() {
        for (t, v) in act_on_generator(table, sigma, tau) {
            out.add_term(t, v * c);
        }
    }
    out
}

pub fn act_generator(sigma: &TwoPartition, x: &ModuleElement) -> Result<ModuleElement, PartitionError> {
    if &sigma.labels() != x.labels() {
        return Err(PartitionError::LabelSetMismatch);
    }
    Ok(act_generator_with(ActionTable::Standard, sigma, x))
}

/// `e · x`, expanding each good monomial of `e` into its good family.
pub fn act_element(e: &GoodElement, x: &ModuleElement) -> Result<ModuleElement, PartitionError> {
    if e.labels() != x.labels() {
        return Err(PartitionError::LabelSetMismatch);
    }
    let mut out = ModuleElement::zero(x.labels());
    for (tau, c) in e.terms() {
        let mut acc = x.clone();
        for sigma in good_family(tau) {
            acc = act_generator_with(ActionTable::Standard, &sigma, &acc);
        }
        out.add_scaled(c, &acc);
    }
    Ok(out)
}

/// Row-reduced basis of the grade-`k` relations, in the coordinates of the
/// `(k+1)`-block partitions in enumeration order.
pub fn relation_span_matrix(labels: &LabelSet, k: usize) -> Vec<Vec<Q>> {
    relation_span(labels, k).echelon_rows()
}

/// Whether `x` is zero in the module, grade by grade.
pub fn is_zero(x: &ModuleElement) -> bool {
    relations::vanishes(x)
}

/// `s`: the generator `μ(τ)` read as the good monomial `m(τ)`.
pub fn to_cohomology(x: &ModuleElement) -> GoodElement {
    x.relabel()
}

/// `t`: `m(τ) ↦ m(τ) · μ(1)`.
pub fn to_homology(e: &GoodElement) -> ModuleElement {
    act_element(e, &ModuleElement::unit(e.labels())).expect("same labels")
}

/// Bilinear extension of concatenation, from `{1..m}` and `{1..n}` to
/// `{1..m+n}`.
pub fn concat_product(x: &ModuleElement, y: &ModuleElement) -> Result<ModuleElement, PartitionError> {
    let m = x.labels().initial_segment_len().ok_or(PartitionError::NotInitialSegment)?;
    let n = y.labels().initial_segment_len().ok_or(PartitionError::NotInitialSegment)?;
    let mut out = ModuleElement::zero(&LabelSet::range(m + n));
    for (t1, c1) in x.terms() {
        for (t2, c2) in y.terms() {
            out.add_term(concatenate(t1, t2)?, c1 * c2);
        }
    }
    Ok(out)
}

/// Outcome of one family of checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn collect(items: Vec<Option<String>>) -> Self {
        CheckOutcome {
            checked: items.len(),
            failures: items.into_iter().flatten().collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionReport {
    pub labels: LabelSet,
    pub table: ActionTable,
    /// Expansions for different admissible `(i, j)` agree modulo relations.
    pub choice_independence: CheckOutcome,
    /// Each `l_σ` maps relations to relations.
    pub descent: CheckOutcome,
    /// `[l_σ, l_ρ]` vanishes on every generator.
    pub commutativity: CheckOutcome,
    /// The linear ideal generators act as zero.
    pub linear_annihilation: CheckOutcome,
    /// Products of oppositely separating generators act as zero.
    pub quadratic_annihilation: CheckOutcome,
}

impl ActionReport {
    pub fn passed(&self) -> bool {
        self.outcomes().iter().all(|(_, o)| o.passed())
    }

    pub fn outcomes(&self) -> [(&'static str, &CheckOutcome); 5] {
        [
            ("choice_independence", &self.choice_independence),
            ("descent", &self.descent),
            ("commutativity", &self.commutativity),
            ("linear_annihilation", &self.linear_annihilation),
            ("quadratic_annihilation", &self.quadratic_annihilation),
        ]
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(msg)
}

fn opposite_pair(s: &TwoPartition, r: &TwoPartition) -> bool {
    let labels = s.labels();
    let ls = labels.as_slice();
    ls.iter().enumerate().any(|(x, &i)| {
        ls[x + 1..].iter().any(|&j| {
            let a = separates(s.as_partition(), i, j).expect("labels of s");
            let b = separates(r.as_partition(), i, j).expect("labels of r");
            matches!((a, b), (Some(p), Some(q)) if p != q)
        })
    })
}

/// Runs all five families of checks exhaustively over `labels`.
pub fn verify_action(labels: &LabelSet, table: ActionTable) -> ActionReport {
    let gens = two_partitions(labels);
    let parts = enumerate_partitions(labels);
    let act = |s: &TwoPartition, x: &ModuleElement| act_generator_with(table, s, x);

    let pairs: Vec<(&TwoPartition, &OrderedSetPartition)> =
        gens.iter().flat_map(|s| parts.iter().map(move |t| (s, t))).collect();

    let choice_independence = CheckOutcome::collect(
        pairs
            .par_iter()
            .flat_map_iter(|&(s, tau)| {
                let mut out = Vec::new();
                if let BreakClassification::Between(a) = classify_unchecked(s, tau) {
                    let expand = |i, j| {
                        Combination::<Cycle>::from_terms(labels, between_terms(table, tau, a, i, j)).expect("labels")
                    };
                    let (i0, j0) = default_pair(tau, a);
                    let base = expand(i0, j0);
                    for &i in tau.block(a) {
                        for &j in tau.block(a + 1) {
                            let diff = &expand(i, j) - &base;
                            out.push(check(is_zero(&diff), || format!("l{s} on mu{tau} with i={i}, j={j}")));
                        }
                    }
                }
                out
            })
            .collect(),
    );

    let rels: Vec<HomologyRelation> = (1..labels.len()).flat_map(|k| relations::relations_of_grade(labels, k)).collect();
    let descent = CheckOutcome::collect(
        gens.par_iter()
            .flat_map_iter(|s| {
                rels.iter().map(move |r| {
                    check(is_zero(&act(s, &r.element)), || {
                        format!("l{s} on relation ({}, block {}, {}, {})", r.tau, r.block + 1, r.i, r.j)
                    })
                })
            })
            .collect(),
    );

    let gen_pairs: Vec<(usize, usize)> =
        (0..gens.len()).flat_map(|x| (x + 1..gens.len()).map(move |y| (x, y))).collect();
    let commutativity = CheckOutcome::collect(
        gen_pairs
            .par_iter()
            .flat_map_iter(|&(x, y)| {
                let (s, r) = (&gens[x], &gens[y]);
                parts.iter().map(move |tau| {
                    let mu = ModuleElement::basis(tau);
                    let sr = act(s, &act(r, &mu));
                    let rs = act(r, &act(s, &mu));
                    check(is_zero(&(&sr - &rs)), || format!("[l{s}, l{r}] on mu{tau}"))
                })
            })
            .collect(),
    );

    let ls = labels.as_slice();
    let label_pairs: Vec<(Label, Label)> =
        ls.iter().enumerate().flat_map(|(x, &i)| ls[x + 1..].iter().map(move |&j| (i, j))).collect();
    let linear_annihilation = CheckOutcome::collect(
        label_pairs
            .par_iter()
            .flat_map_iter(|&(i, j)| {
                let gens = &gens;
                parts.iter().map(move |tau| {
                    let mu = ModuleElement::basis(tau);
                    let mut total = ModuleElement::zero(labels);
                    for s in gens {
                        match separates(s.as_partition(), i, j).expect("labels") {
                            Some(std::cmp::Ordering::Less) => total += &act(s, &mu),
                            Some(std::cmp::Ordering::Greater) => total -= &act(s, &mu),
                            _ => {}
                        }
                    }
                    check(is_zero(&total), || format!("linear generator ({i}, {j}) on mu{tau}"))
                })
            })
            .collect(),
    );

    let opposite: Vec<(usize, usize)> = gen_pairs
        .iter()
        .copied()
        .filter(|&(x, y)| opposite_pair(&gens[x], &gens[y]))
        .collect();
    let quadratic_annihilation = CheckOutcome::collect(
        opposite
            .par_iter()
            .flat_map_iter(|&(x, y)| {
                let (s, r) = (&gens[x], &gens[y]);
                parts.iter().map(move |tau| {
                    let v = act(s, &act(r, &ModuleElement::basis(tau)));
                    check(is_zero(&v), || format!("l{s} l{r} on mu{tau}"))
                })
            })
            .collect(),
    );

    ActionReport {
        labels: labels.clone(),
        table,
        choice_independence,
        descent,
        commutativity,
        linear_annihilation,
        quadratic_annihilation,
    }
}

pub fn verify_technical_lemma(labels: &LabelSet) -> ActionReport {
    verify_action(labels, ActionTable::Standard)
}

/// The two maps between homology and cohomology composed both ways.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapMapReport {
    pub labels: LabelSet,
    /// `t(s(μ(τ))) − μ(τ)` vanishes modulo relations.
    pub homology_round_trip: CheckOutcome,
    /// `s(t(m(τ))) − m(τ)` vanishes modulo relations.
    pub cohomology_round_trip: CheckOutcome,
    /// Graded dimensions of the module, from the relation spans.
    pub module_dimensions: Vec<usize>,
    /// Graded dimensions of the ring, by fraction-free elimination.
    pub ring_dimensions: Vec<usize>,
}

impl CapMapReport {
    pub fn passed(&self) -> bool {
        self.homology_round_trip.passed()
            && self.cohomology_round_trip.passed()
            && self.module_dimensions == self.ring_dimensions
    }
}

pub fn verify_cap_maps(labels: &LabelSet) -> CapMapReport {
    let parts = enumerate_partitions(labels);
    let homology_round_trip = CheckOutcome::collect(
        parts
            .par_iter()
            .map(|tau| {
                let mu = ModuleElement::basis(tau);
                let back = to_homology(&to_cohomology(&mu));
                check(is_zero(&(&back - &mu)), || format!("t(s(mu{tau}))"))
            })
            .collect(),
    );
    let cohomology_round_trip = CheckOutcome::collect(
        parts
            .par_iter()
            .map(|tau| {
                let m = GoodElement::basis(tau);
                let back = to_cohomology(&to_homology(&m));
                check(crate::ring::is_zero(&(&back - &m)), || format!("s(t(m{tau}))"))
            })
            .collect(),
    );
    CapMapReport {
        labels: labels.clone(),
        homology_round_trip,
        cohomology_round_trip,
        module_dimensions: (0..labels.len()).map(|k| relation_span(labels, k).quotient_dimension()).collect(),
        ring_dimensions: crate::ring::graded_dimensions(labels),
    }
}

/// Graded dimensions of the module.
pub fn graded_dimensions(labels: &LabelSet) -> Vec<usize> {
    (0..labels.len()).map(|k| relation_span(labels, k).quotient_dimension()).collect()
}

/// Number of partitions per grade, for reporting.
pub fn generator_counts(labels: &LabelSet) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for t in enumerate_partitions(labels) {
        *out.entry(t.grade()).or_insert(0) += 1;
    }
    out
}

/// Cohomology-side image of the action, for comparing against the ring.
pub fn ring_side(sigma: &TwoPartition, x: &ModuleElement) -> ModuleElement {
    let e: Combination<GoodMonomial> = to_cohomology(x);
    crate::ring::multiply_generator(sigma, &e).expect("same labels").relabel()
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
    fn action_table_cases() {
        let b = LabelSet::range(3);
        let s = two(&[1], &[2, 3]);
        assert_eq!(act_generator(&s, &ModuleElement::unit(&b)).unwrap(), ModuleElement::basis(s.as_partition()));

        let s = two(&[1, 2], &[3]);
        let v = act_generator(&s, &ModuleElement::basis(s.as_partition())).unwrap();
        assert_eq!(v, ModuleElement::basis(&p(&[&[1], &[2], &[3]])).scaled(&q(-1)));

        let z = act_generator(&two(&[1, 3], &[2]), &ModuleElement::basis(&p(&[&[1], &[2], &[3]]))).unwrap();
        assert!(z.is_empty());
        assert!(act_generator(&s, &ModuleElement::unit(&LabelSet::range(2))).is_err());
    }

    #[test]
    fn element_action() {
        let b = LabelSet::range(3);
        let x = ModuleElement::basis(&p(&[&[2], &[1, 3]]));
        assert_eq!(act_element(&GoodElement::unit(&b), &x).unwrap(), x);
        for tau in enumerate_partitions(&b) {
            assert_eq!(to_homology(&GoodElement::basis(&tau)), ModuleElement::basis(&tau));
        }
    }

    #[test]
    fn zero_tests() {
        let b = LabelSet::range(2);
        assert!(!is_zero(&ModuleElement::unit(&b)));
        let mut d = ModuleElement::basis(&p(&[&[1], &[2]]));
        d.add_term(p(&[&[2], &[1]]), q(-1));
        assert!(is_zero(&d));
        assert_eq!(relation_span_matrix(&b, 1).len(), 1);
        assert!(relation_span_matrix(&b, 0).is_empty());
    }

    #[test]
    fn small_lemma_runs() {
        for n in 1..=3 {
            let r = verify_technical_lemma(&LabelSet::range(n));
            assert!(r.passed(), "{r:?}");
        }
        let flipped = verify_action(&LabelSet::range(3), ActionTable::FlippedBeta);
        assert!(!flipped.descent.passed() || !flipped.commutativity.passed());
    }

    #[test]
    fn concatenation_product() {
        let one = ModuleElement::basis(&p(&[&[1]]));
        assert_eq!(concat_product(&one, &one).unwrap(), ModuleElement::basis(&p(&[&[1], &[2]])));
        let mut r = ModuleElement::basis(&p(&[&[1], &[2]]));
        r.add_term(p(&[&[2], &[1]]), q(-1));
        assert!(is_zero(&concat_product(&r, &one).unwrap()));
        assert!(is_zero(&concat_product(&one, &r).unwrap()));
    }

    #[test]
    fn cap_maps_small() {
        for n in 1..=3 {
            assert!(verify_cap_maps(&LabelSet::range(n)).passed());
        }
    }
}
