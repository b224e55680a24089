//! The permutohedral fan in `R^B / R`.
//!
//! Vectors are functions `B → Z` (or `B → Q`) modulo constants, stored with
//! the value at the largest label normalized to zero. The cone of an
//! `(l+1)`-block partition `τ` is spanned by the partial sums
//! `χ_{τ_1}, χ_{τ_1} + χ_{τ_2}, …, χ_{τ_1} + … + χ_{τ_l}` of block
//! indicators; a vector lies in the interior of the cone of its decreasing
//! level-set partition.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Sub;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{smith_diagonal, solve_affine, Equation};
use crate::partitions::{
    enumerate_partitions, good_family, partition_from_good_family, refines, Label, LabelSet,
    OrderedSetPartition, PartitionError,
};
use crate::rational::{q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{small} is not a subset of {big}")]
    NotSubset { small: LabelSet, big: LabelSet },
    #[error("label {0} is missing")]
    MissingLabel(Label),
    #[error("forgotten label {0} already present")]
    ForgottenPresent(Label),
    #[error("the larger set must add exactly one label")]
    NotOneLabelExtension,
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

pub type Result<T> = std::result::Result<T, FanError>;

/// A function on a label set modulo constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassVector<T> {
    labels: LabelSet,
    values: Vec<T>,
}

pub type LatticeVector = ClassVector<i64>;
pub type RationalVector = ClassVector<Q>;

impl<T> ClassVector<T>
where
    T: Clone + Zero + Sub<Output = T>,
{
    /// Canonicalizes `values` (one per label, ascending label order).
    pub fn new(labels: &LabelSet, values: Vec<T>) -> Result<Self> {
        if values.len() != labels.len() {
            return Err(FanError::LengthMismatch {
                expected: labels.len(),
                got: values.len(),
            });
        }
        let base = values.last().cloned().expect("nonempty");
        Ok(ClassVector {
            labels: labels.clone(),
            values: values.into_iter().map(|v| v - base.clone()).collect(),
        })
    }

    pub fn zero(labels: &LabelSet) -> Self {
        ClassVector {
            labels: labels.clone(),
            values: vec![T::zero(); labels.len()],
        }
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Coordinates in `Z^B / Z`: all values except the normalized last one.
    pub fn coordinates(&self) -> &[T] {
        &self.values[..self.values.len() - 1]
    }

    pub fn value(&self, label: Label) -> Option<&T> {
        self.labels.position(label).map(|k| &self.values[k])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }
}

impl LatticeVector {
    /// The class of the 0/1 indicator of `subset`.
    pub fn indicator(labels: &LabelSet, subset: &[Label]) -> Self {
        let values = labels.iter().map(|l| i64::from(subset.contains(&l))).collect();
        ClassVector::new(labels, values).expect("length matches")
    }

    pub fn to_rational(&self) -> RationalVector {
        ClassVector {
            labels: self.labels.clone(),
            values: self.values.iter().map(|&v| q(v)).collect(),
        }
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        assert_eq!(self.labels, other.labels);
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        ClassVector::new(&self.labels, values).expect("length matches")
    }

    pub fn scale(&self, k: i64) -> LatticeVector {
        ClassVector::new(&self.labels, self.values.iter().map(|v| v * k).collect()).expect("length matches")
    }
}

impl RationalVector {
    pub fn from_ints(labels: &LabelSet, values: &[i64]) -> Result<Self> {
        ClassVector::new(labels, values.iter().map(|&v| q(v)).collect())
    }

    pub fn neg(&self) -> RationalVector {
        ClassVector {
            labels: self.labels.clone(),
            values: self.values.iter().map(|v| -v).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub tau: OrderedSetPartition,
    pub generators: Vec<LatticeVector>,
}

impl Cone {
    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    /// Sum of all generators, an interior point.
    pub fn generator_sum(&self) -> LatticeVector {
        self.generators
            .iter()
            .fold(LatticeVector::zero(&self.tau.labels()), |acc, g| acc.add(g))
    }
}

pub fn cone_of(tau: &OrderedSetPartition) -> Cone {
    let labels = tau.labels();
    let generators = good_family(tau)
        .iter()
        .map(|sigma| LatticeVector::indicator(&labels, sigma.first()))
        .collect();
    Cone {
        tau: tau.clone(),
        generators,
    }
}

/// Level sets of `chi` ordered by decreasing value.
pub fn locate(chi: &RationalVector) -> OrderedSetPartition {
    let mut levels: BTreeMap<&Q, Vec<Label>> = BTreeMap::new();
    for (l, v) in chi.labels.iter().zip(&chi.values) {
        levels.entry(v).or_default().push(l);
    }
    let blocks = levels.into_values().rev().collect();
    OrderedSetPartition::new(blocks).expect("level sets partition the labels")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// Coefficients of `chi` in the cone generators, if it lies in their span.
pub fn cone_coordinates(chi: &RationalVector, generators: &[LatticeVector]) -> Option<Vec<Q>> {
    let rows = chi.coordinates().len();
    let equations = (0..rows).map(|r| Equation {
        coeffs: generators
            .iter()
            .enumerate()
            .filter(|(_, g)| g.values[r] != 0)
            .map(|(k, g)| (k, q(g.values[r])))
            .collect(),
        rhs: chi.values[r].clone(),
    });
    let solution = solve_affine(generators.len(), equations)?;
    // the generators of every cone are independent, so the solution is unique
    debug_assert!(solution.kernel.is_empty());
    Some(solution.particular)
}

pub fn membership(chi: &RationalVector, tau: &OrderedSetPartition) -> Result<Membership> {
    if chi.labels != tau.labels() {
        return Err(PartitionError::LabelSetMismatch.into());
    }
    Ok(membership_in(chi, &cone_of(tau).generators))
}

pub fn membership_in(chi: &RationalVector, generators: &[LatticeVector]) -> Membership {
    match cone_coordinates(chi, generators) {
        None => Membership::Outside,
        Some(c) if c.iter().all(|x| x > &Q::zero()) => Membership::Interior,
        Some(c) if c.iter().all(|x| x >= &Q::zero()) => Membership::Boundary,
        Some(_) => Membership::Outside,
    }
}

/// Whether the cone of `tau_face` is a face of the cone of `tau`.
pub fn is_face(tau_face: &OrderedSetPartition, tau: &OrderedSetPartition) -> Result<bool> {
    Ok(refines(tau, tau_face)?)
}

/// The codimension-one faces: merge one adjacent pair of blocks.
pub fn facets(tau: &OrderedSetPartition) -> Vec<OrderedSetPartition> {
    let blocks = tau.blocks();
    (0..blocks.len().saturating_sub(1))
        .map(|i| {
            let mut merged: Vec<Vec<Label>> = blocks[..i].to_vec();
            let mut joined = blocks[i].clone();
            joined.extend_from_slice(&blocks[i + 1]);
            merged.push(joined);
            merged.extend_from_slice(&blocks[i + 2..]);
            OrderedSetPartition::new(merged).expect("merge of a partition")
        })
        .collect()
}

/// Index of the cone spanned by the generators two cones share.
pub fn common_face(tau1: &OrderedSetPartition, tau2: &OrderedSetPartition) -> Result<OrderedSetPartition> {
    let labels = tau1.labels();
    if labels != tau2.labels() {
        return Err(PartitionError::LabelSetMismatch.into());
    }
    let other: BTreeSet<_> = good_family(tau2).into_iter().collect();
    let shared: Vec<_> = good_family(tau1).into_iter().filter(|s| other.contains(s)).collect();
    if shared.is_empty() {
        return Ok(OrderedSetPartition::trivial(&labels));
    }
    Ok(partition_from_good_family(&shared)?)
}

pub fn generators_unimodular(generators: &[LatticeVector]) -> bool {
    if generators.is_empty() {
        return true;
    }
    let matrix: Vec<Vec<BigInt>> = generators
        .iter()
        .map(|g| g.coordinates().iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let diag = smith_diagonal(&matrix);
    diag.len() == generators.len() && diag.iter().all(One::is_one)
}

/// Whether the cone of `tau` is spanned by part of a lattice basis.
pub fn check_smooth(tau: &OrderedSetPartition) -> bool {
    generators_unimodular(&cone_of(tau).generators)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletenessFailure {
    pub point: Vec<i64>,
    pub located: OrderedSetPartition,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub samples: usize,
    pub seed: u64,
    pub failures: Vec<CompletenessFailure>,
    pub maximal_cones_hit: usize,
    pub maximal_cone_count: usize,
}

pub const SAMPLE_RANGE: i64 = 1000;

pub fn random_points(labels: &LabelSet, samples: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| (0..labels.len()).map(|_| rng.gen_range(-SAMPLE_RANGE..=SAMPLE_RANGE)).collect())
        .collect()
}

/// Samples integer points and checks each lies in the interior of exactly
/// one cone of its dimension.
pub fn check_complete(labels: &LabelSet, samples: usize, seed: u64) -> CompletenessReport {
    let mut by_len: BTreeMap<usize, Vec<Cone>> = BTreeMap::new();
    for tau in enumerate_partitions(labels) {
        by_len.entry(tau.len()).or_default().push(cone_of(&tau));
    }
    let points = random_points(labels, samples, seed);
    let outcomes: Vec<(OrderedSetPartition, Option<CompletenessFailure>)> = points
        .par_iter()
        .map(|pt| {
            let chi = RationalVector::from_ints(labels, pt).expect("length matches");
            let tau = locate(&chi);
            let fail = |reason: String| CompletenessFailure {
                point: pt.clone(),
                located: tau.clone(),
                reason,
            };
            if membership_in(&chi, &cone_of(&tau).generators) != Membership::Interior {
                return (tau.clone(), Some(fail("not interior to its located cone".into())));
            }
            let others = by_len[&tau.len()]
                .iter()
                .filter(|c| c.tau != tau && membership_in(&chi, &c.generators) == Membership::Interior)
                .map(|c| c.tau.to_string())
                .collect::<Vec<_>>();
            if !others.is_empty() {
                return (tau.clone(), Some(fail(format!("also interior to {}", others.join(", ")))));
            }
            (tau, None)
        })
        .collect();
    let n = labels.len();
    let hit: BTreeSet<&OrderedSetPartition> = outcomes.iter().map(|(t, _)| t).filter(|t| t.len() == n).collect();
    CompletenessReport {
        samples,
        seed,
        maximal_cones_hit: hit.len(),
        maximal_cone_count: by_len.get(&n).map_or(0, Vec::len),
        failures: outcomes.into_iter().filter_map(|(_, f)| f).collect(),
    }
}

/// Restriction of a function on `big` to `small`.
pub fn forgetful_vector_map(big: &LabelSet, small: &LabelSet, chi: &LatticeVector) -> Result<LatticeVector> {
    if !small.is_subset(big) {
        return Err(FanError::NotSubset {
            small: small.clone(),
            big: big.clone(),
        });
    }
    if chi.labels() != big {
        return Err(PartitionError::LabelSetMismatch.into());
    }
    let values = small.iter().map(|l| *chi.value(l).expect("subset")).collect();
    ClassVector::new(small, values)
}

/// Deletes the labels outside `small` and drops emptied blocks.
pub fn forgetful_partition_map(tau: &OrderedSetPartition, small: &LabelSet) -> Result<OrderedSetPartition> {
    let big = tau.labels();
    if !small.is_subset(&big) {
        return Err(FanError::NotSubset {
            small: small.clone(),
            big,
        });
    }
    let blocks: Vec<Vec<Label>> = tau
        .blocks()
        .iter()
        .map(|b| b.iter().copied().filter(|&l| small.contains(l)).collect::<Vec<_>>())
        .filter(|b| !b.is_empty())
        .collect();
    Ok(OrderedSetPartition::new(blocks)?)
}

fn forgotten_label(small: &LabelSet, big: &LabelSet) -> Result<Label> {
    if !small.is_subset(big) {
        return Err(FanError::NotSubset {
            small: small.clone(),
            big: big.clone(),
        });
    }
    let extra: Vec<Label> = big.iter().filter(|&l| !small.contains(l)).collect();
    match extra.as_slice() {
        [f] => Ok(*f),
        _ => Err(FanError::NotOneLabelExtension),
    }
}

/// Extends `chi` to `big` by copying its value at `j` to the forgotten label.
pub fn section_vector_map(j: Label, small: &LabelSet, big: &LabelSet, chi: &LatticeVector) -> Result<LatticeVector> {
    let forgotten = forgotten_label(small, big)?;
    if chi.labels() != small {
        return Err(PartitionError::LabelSetMismatch.into());
    }
    let at_j = *chi.value(j).ok_or(FanError::MissingLabel(j))?;
    let values = big
        .iter()
        .map(|l| if l == forgotten { at_j } else { *chi.value(l).expect("label of small") })
        .collect();
    ClassVector::new(big, values)
}

/// Cone index for the section through `j`: the forgotten label joins the
/// block of `j`.
pub fn section_partition_map(tau: &OrderedSetPartition, j: Label, forgotten: Label) -> Result<OrderedSetPartition> {
    if tau.labels().contains(forgotten) {
        return Err(FanError::ForgottenPresent(forgotten));
    }
    let b = tau.block_of(j).ok_or(FanError::MissingLabel(j))?;
    let mut blocks = tau.blocks().to_vec();
    blocks[b].push(forgotten);
    Ok(OrderedSetPartition::new(blocks)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumKind {
    /// The forgotten label joined an existing block.
    Component,
    /// The forgotten label became its own block.
    Node,
}

/// Partitions of `B ∪ {forgotten}` lying over `tau`: first the block
/// insertions, then the singleton insertions in each gap.
pub fn fiber_strata(tau: &OrderedSetPartition, forgotten: Label) -> Result<Vec<(OrderedSetPartition, StratumKind)>> {
    if tau.labels().contains(forgotten) {
        return Err(FanError::ForgottenPresent(forgotten));
    }
    let blocks = tau.blocks();
    let mut out = Vec::with_capacity(2 * blocks.len() + 1);
    for i in 0..blocks.len() {
        let mut v = blocks.to_vec();
        v[i].push(forgotten);
        out.push((OrderedSetPartition::new(v)?, StratumKind::Component));
    }
    for gap in 0..=blocks.len() {
        let mut v = blocks.to_vec();
        v.insert(gap, vec![forgotten]);
        out.push((OrderedSetPartition::new(v)?, StratumKind::Node));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeRecord {
    pub tau: OrderedSetPartition,
    pub generators: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanExport {
    #[serde(rename = "B")]
    pub labels: LabelSet,
    pub cones: Vec<ConeRecord>,
}

pub fn export_fan(labels: &LabelSet) -> FanExport {
    let cones = enumerate_partitions(labels)
        .into_iter()
        .map(|tau| {
            let cone = cone_of(&tau);
            ConeRecord {
                generators: cone.generators.iter().map(|g| g.values().to_vec()).collect(),
                tau,
            }
        })
        .collect();
    FanExport {
        labels: labels.clone(),
        cones,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanVerification {
    pub n: usize,
    pub cone_count: usize,
    pub non_smooth: Vec<OrderedSetPartition>,
    pub wrong_dimension: Vec<OrderedSetPartition>,
    pub maximal_cones: usize,
    pub expected_maximal_cones: usize,
    /// Pairs where the refinement order and generator containment disagree.
    pub face_mismatches: Vec<(OrderedSetPartition, OrderedSetPartition)>,
    /// Cones whose merged-pair list differs from their generator-dropping faces.
    pub facet_mismatches: Vec<OrderedSetPartition>,
    pub completeness: CompletenessReport,
}

impl FanVerification {
    pub fn passed(&self) -> bool {
        self.non_smooth.is_empty()
            && self.wrong_dimension.is_empty()
            && self.maximal_cones == self.expected_maximal_cones
            && self.face_mismatches.is_empty()
            && self.facet_mismatches.is_empty()
            && self.completeness.failures.is_empty()
    }
}

/// Smoothness, dimensions, maximal-cone count, the face lattice (refinement
/// order against generator containment) and sampled completeness.
pub fn verify_fan(labels: &LabelSet, samples: usize, seed: u64) -> FanVerification {
    let parts = enumerate_partitions(labels);
    let cones: Vec<Cone> = parts.iter().map(cone_of).collect();
    let gen_sets: Vec<BTreeSet<Vec<i64>>> = cones
        .iter()
        .map(|c| c.generators.iter().map(|g| g.values().to_vec()).collect())
        .collect();
    let non_smooth = cones.iter().filter(|c| !generators_unimodular(&c.generators)).map(|c| c.tau.clone()).collect();
    let wrong_dimension = cones
        .iter()
        .filter(|c| {
            let rank = crate::linalg::rank_fraction_free(
                &c.generators
                    .iter()
                    .map(|g| g.coordinates().iter().map(|&v| BigInt::from(v)).collect())
                    .collect::<Vec<_>>(),
            );
            c.dimension() != c.tau.len() - 1 || rank != c.dimension()
        })
        .map(|c| c.tau.clone())
        .collect();
    let n = labels.len();
    let face_mismatches: Vec<_> = (0..parts.len())
        .into_par_iter()
        .flat_map_iter(|a| {
            let parts = &parts;
            let gen_sets = &gen_sets;
            (0..parts.len()).filter_map(move |b| {
                let by_order = is_face(&parts[a], &parts[b]).expect("same labels");
                let by_generators = gen_sets[a].is_subset(&gen_sets[b]);
                (by_order != by_generators).then(|| (parts[a].clone(), parts[b].clone()))
            })
        })
        .collect();
    let facet_mismatches = cones
        .iter()
        .filter(|c| {
            let merged: BTreeSet<Vec<Vec<i64>>> = facets(&c.tau)
                .iter()
                .map(|f| {
                    let mut g: Vec<Vec<i64>> = cone_of(f).generators.iter().map(|v| v.values().to_vec()).collect();
                    g.sort();
                    g
                })
                .collect();
            let dropped: BTreeSet<Vec<Vec<i64>>> = (0..c.generators.len())
                .map(|skip| {
                    let mut g: Vec<Vec<i64>> = c
                        .generators
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != skip)
                        .map(|(_, v)| v.values().to_vec())
                        .collect();
                    g.sort();
                    g
                })
                .collect();
            merged != dropped
        })
        .map(|c| c.tau.clone())
        .collect();
    FanVerification {
        n,
        cone_count: cones.len(),
        non_smooth,
        wrong_dimension,
        maximal_cones: parts.iter().filter(|t| t.len() == n).count(),
        expected_maximal_cones: (1..=n).product(),
        face_mismatches,
        facet_mismatches,
        completeness: check_complete(labels, samples, seed),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForgetfulFailure {
    pub forgotten: Label,
    pub tau: OrderedSetPartition,
    pub problem: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForgetfulVerification {
    #[serde(rename = "B")]
    pub labels: LabelSet,
    pub cones_mapped: usize,
    pub sections_checked: usize,
    pub fibers_checked: usize,
    pub failures: Vec<ForgetfulFailure>,
}

impl ForgetfulVerification {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every label `f` of `labels`, forgetting `f`: each cone maps into
/// the cone of its image partition (interior to interior), each section
/// `s_j` followed by the restriction is the identity on generators and
/// lands in the section cone, and the partitions lying over each `τ` are
/// exactly the `2·len(τ) + 1` strata of [`fiber_strata`].
pub fn verify_forgetful(labels: &LabelSet) -> ForgetfulVerification {
    let mut out = ForgetfulVerification {
        labels: labels.clone(),
        cones_mapped: 0,
        sections_checked: 0,
        fibers_checked: 0,
        failures: Vec::new(),
    };
    if labels.len() < 2 {
        return out;
    }
    let big_parts = enumerate_partitions(labels);
    for f in labels.iter() {
        let small = LabelSet::new(labels.iter().filter(|&l| l != f)).expect("distinct labels");
        let mut fail = |tau: &OrderedSetPartition, problem: String| {
            out.failures.push(ForgetfulFailure {
                forgotten: f,
                tau: tau.clone(),
                problem,
            })
        };
        let mut over: BTreeMap<OrderedSetPartition, BTreeSet<OrderedSetPartition>> = BTreeMap::new();
        for tau in &big_parts {
            let image = forgetful_partition_map(tau, &small).expect("subset");
            let target = cone_of(&image).generators;
            let cone = cone_of(tau);
            for g in &cone.generators {
                let v = forgetful_vector_map(labels, &small, g).expect("subset").to_rational();
                if membership_in(&v, &target) == Membership::Outside {
                    fail(tau, format!("generator {:?} leaves the cone of {image}", g.values()));
                }
            }
            let inner = forgetful_vector_map(labels, &small, &cone.generator_sum()).expect("subset");
            if membership_in(&inner.to_rational(), &target) != Membership::Interior {
                fail(tau, format!("interior point misses the interior of {image}"));
            }
            over.entry(image).or_default().insert(tau.clone());
            out.cones_mapped += 1;
        }
        for tau in enumerate_partitions(&small) {
            let cone = cone_of(&tau);
            for j in small.iter() {
                let section = section_partition_map(&tau, j, f).expect("label of small");
                let target = cone_of(&section).generators;
                for g in &cone.generators {
                    let lifted = section_vector_map(j, &small, labels, g).expect("one-label extension");
                    if forgetful_vector_map(labels, &small, &lifted).expect("subset") != *g {
                        fail(&tau, format!("restricting the section through {j} is not the identity"));
                    }
                    if membership_in(&lifted.to_rational(), &target) == Membership::Outside {
                        fail(&tau, format!("section through {j} leaves the cone of {section}"));
                    }
                }
                out.sections_checked += 1;
            }
            let strata: BTreeSet<OrderedSetPartition> =
                fiber_strata(&tau, f).expect("forgotten label absent").into_iter().map(|(t, _)| t).collect();
            if strata.len() != 2 * tau.len() + 1 {
                fail(&tau, format!("{} fiber strata, expected {}", strata.len(), 2 * tau.len() + 1));
            }
            if over.get(&tau) != Some(&strata) {
                fail(&tau, "fiber strata differ from the partitions lying over".to_string());
            }
            out.fibers_checked += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(blocks: &[&[u32]]) -> OrderedSetPartition {
        OrderedSetPartition::new(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    fn b3() -> LabelSet {
        LabelSet::range(3)
    }

    #[test]
    fn cone_generators() {
        assert!(cone_of(&p(&[&[1, 2, 3]])).generators.is_empty());
        let c = cone_of(&p(&[&[1], &[2, 3]]));
        assert_eq!(c.generators.len(), 1);
        assert_eq!(c.generators[0].values(), &[1, 0, 0]);
        let c = cone_of(&p(&[&[1], &[2], &[3]]));
        assert_eq!(c.generators[0].values(), &[1, 0, 0]);
        assert_eq!(c.generators[1].values(), &[1, 1, 0]);
        // chi_{sigma_1} and -chi_{sigma_2} agree modulo constants
        let c = cone_of(&p(&[&[3], &[1, 2]]));
        assert_eq!(c.generators[0], LatticeVector::indicator(&b3(), &[1, 2]).scale(-1));
    }

    #[test]
    fn location() {
        assert_eq!(locate(&RationalVector::zero(&b3())), p(&[&[1, 2, 3]]));
        assert_eq!(locate(&RationalVector::from_ints(&b3(), &[5, 5, 0]).unwrap()), p(&[&[1, 2], &[3]]));
        assert_eq!(locate(&RationalVector::from_ints(&b3(), &[3, 1, 0]).unwrap()), p(&[&[1], &[2], &[3]]));
    }

    #[test]
    fn membership_cases() {
        let t = p(&[&[1], &[2], &[3]]);
        let sum = cone_of(&t).generator_sum().to_rational();
        assert_eq!(membership(&sum, &t).unwrap(), Membership::Interior);
        let g = cone_of(&t).generators[1].to_rational();
        assert_eq!(membership(&g, &t).unwrap(), Membership::Boundary);
        let s = p(&[&[1], &[2, 3]]);
        let neg = LatticeVector::indicator(&b3(), &[1]).to_rational().neg();
        assert_eq!(membership(&neg, &s).unwrap(), Membership::Outside);
        let off_span = RationalVector::from_ints(&b3(), &[0, 1, 0]).unwrap();
        assert_eq!(membership(&off_span, &s).unwrap(), Membership::Outside);
        assert_eq!(membership(&RationalVector::zero(&b3()), &p(&[&[1, 2, 3]])).unwrap(), Membership::Interior);
    }

    #[test]
    fn faces() {
        let fine = p(&[&[1], &[2], &[3]]);
        assert!(is_face(&p(&[&[1, 2, 3]]), &fine).unwrap());
        assert!(is_face(&p(&[&[1, 2], &[3]]), &fine).unwrap());
        assert!(!is_face(&fine, &p(&[&[1, 2], &[3]])).unwrap());
        assert_eq!(facets(&fine), vec![p(&[&[1, 2], &[3]]), p(&[&[1], &[2, 3]])]);
        assert_eq!(common_face(&fine, &p(&[&[2], &[1], &[3]])).unwrap(), p(&[&[1, 2], &[3]]));
        assert_eq!(common_face(&fine, &p(&[&[3], &[2], &[1]])).unwrap(), p(&[&[1, 2, 3]]));
    }

    #[test]
    fn smoothness() {
        assert!(check_smooth(&p(&[&[1, 2, 3]])));
        for tau in enumerate_partitions(&LabelSet::range(4)) {
            assert!(check_smooth(&tau));
        }
        let mut c = cone_of(&p(&[&[1], &[2], &[3]]));
        c.generators[0] = c.generators[0].scale(2);
        assert!(!generators_unimodular(&c.generators));
    }

    #[test]
    fn completeness_small() {
        let r = check_complete(&b3(), 500, 7);
        assert!(r.failures.is_empty());
        assert!(r.maximal_cones_hit <= 6);
        assert_eq!(r.maximal_cone_count, 6);
        let r = check_complete(&LabelSet::range(4), 50, 1);
        assert_eq!(r.maximal_cone_count, 24);
    }

    #[test]
    fn forgetful_and_sections() {
        let big = LabelSet::range(4);
        let small = b3();
        let chi = LatticeVector::indicator(&big, &[1, 4]);
        assert_eq!(forgetful_vector_map(&big, &small, &chi).unwrap(), LatticeVector::indicator(&small, &[1]));
        assert_eq!(forgetful_vector_map(&big, &big, &chi).unwrap(), chi);
        assert!(matches!(
            forgetful_vector_map(&small, &big, &LatticeVector::zero(&small)),
            Err(FanError::NotSubset { .. })
        ));
        assert_eq!(forgetful_partition_map(&p(&[&[1, 4], &[2], &[3]]), &small).unwrap(), p(&[&[1], &[2], &[3]]));
        assert_eq!(forgetful_partition_map(&p(&[&[4], &[1, 2, 3]]), &small).unwrap(), p(&[&[1, 2, 3]]));

        let b2 = LabelSet::range(2);
        let s = section_vector_map(1, &b2, &b3(), &LatticeVector::indicator(&b2, &[1])).unwrap();
        assert_eq!(s, LatticeVector::indicator(&b3(), &[1, 3]));
        assert_eq!(section_vector_map(9, &b2, &b3(), &LatticeVector::zero(&b2)), Err(FanError::MissingLabel(9)));
        assert_eq!(forgetful_vector_map(&b3(), &b2, &s).unwrap(), LatticeVector::indicator(&b2, &[1]));
    }

    #[test]
    fn fibers() {
        let strata = fiber_strata(&p(&[&[1]]), 2).unwrap();
        let taus: Vec<_> = strata.iter().map(|(t, _)| t.clone()).collect();
        assert_eq!(taus, vec![p(&[&[1, 2]]), p(&[&[2], &[1]]), p(&[&[1], &[2]])]);
        assert_eq!(strata[0].1, StratumKind::Component);
        assert_eq!(fiber_strata(&p(&[&[1], &[2], &[3]]), 4).unwrap().len(), 7);
        assert_eq!(fiber_strata(&p(&[&[1]]), 1), Err(FanError::ForgottenPresent(1)));
    }

    #[test]
    fn export_two_labels() {
        let e = export_fan(&LabelSet::range(2));
        assert_eq!(e.cones.len(), 3);
        assert_eq!(e.cones.iter().filter(|c| c.generators.len() == 1).count(), 2);
        let json = serde_json::to_string(&e).unwrap();
        assert!(json.starts_with(r#"{"B":[1,2],"cones":[{"tau":[[1,2]],"generators":[]}"#));
    }

    #[test]
    fn forgetful_coherence() {
        for n in 2..=4 {
            let r = verify_forgetful(&LabelSet::range(n));
            assert!(r.passed(), "{:?}", r.failures);
            assert_eq!(r.fibers_checked, n * enumerate_partitions(&LabelSet::range(n - 1)).len());
        }
    }
}
