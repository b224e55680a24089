//! Ordered set partitions and their calculus.
//!
//! An [`OrderedSetPartition`] is a sequence of disjoint nonempty blocks
//! covering a finite [`LabelSet`]. Block order is structure; the order of
//! labels inside a block is not, so blocks are stored sorted. Partitions of
//! length `N + 1` correspond one-to-one to nested families of `N`
//! 2-partitions ([`good_family`], [`partition_from_good_family`]), and a
//! 2-partition either cuts a partition between two blocks, splits one block,
//! or does neither ([`classify_break`]).
//!
//! Block indices in this API are 0-based.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Label = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("label set is empty")]
    EmptyLabelSet,
    #[error("label {0} occurs more than once")]
    DuplicateLabel(Label),
    #[error("partition has an empty block")]
    EmptyBlock,
    #[error("expected a 2-partition, found {0} blocks")]
    NotTwoPartition(usize),
    #[error("partitions are over different label sets")]
    LabelSetMismatch,
    #[error("labels must be distinct, got {0} twice")]
    SameLabel(Label),
    #[error("label {0} is not in the label set")]
    UnknownLabel(Label),
    #[error("family members {0} and {1} have incomparable first blocks")]
    NotNested(usize, usize),
    #[error("family members {0} and {1} coincide")]
    DuplicateMember(usize, usize),
    #[error("star undefined: the 2-partition does not split a single block")]
    StarUndefined,
    #[error("block index {0} is out of range")]
    BlockOutOfRange(usize),
    #[error("alpha does not partition block {0}")]
    NotABlockSplit(usize),
    #[error("labels do not form an initial segment 1..n")]
    NotInitialSegment,
    #[error("not a permutation of 1..{0}")]
    BadPermutation(usize),
}

pub type Result<T> = std::result::Result<T, PartitionError>;

/// A nonempty finite set of labels, stored ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Label>", into = "Vec<Label>")]
pub struct LabelSet(Vec<Label>);

impl LabelSet {
    pub fn new(labels: impl IntoIterator<Item = Label>) -> Result<Self> {
        let mut v: Vec<Label> = labels.into_iter().collect();
        v.sort_unstable();
        if v.is_empty() {
            return Err(PartitionError::EmptyLabelSet);
        }
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(PartitionError::DuplicateLabel(w[0]));
        }
        Ok(LabelSet(v))
    }

    /// The set `{1, ..., n}`.
    pub fn range(n: usize) -> Self {
        assert!(n >= 1, "label set must be nonempty");
        LabelSet((1..=n as Label).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[Label] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Label> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, label: Label) -> bool {
        self.0.binary_search(&label).is_ok()
    }

    pub fn position(&self, label: Label) -> Option<usize> {
        self.0.binary_search(&label).ok()
    }

    pub fn max(&self) -> Label {
        *self.0.last().expect("nonempty")
    }

    pub fn is_subset(&self, other: &LabelSet) -> bool {
        self.iter().all(|l| other.contains(l))
    }

    /// `Some(n)` when the set is exactly `{1, ..., n}`.
    pub fn initial_segment_len(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &l)| l as usize == i + 1)
            .then_some(self.0.len())
    }

    pub fn with(&self, label: Label) -> Result<Self> {
        LabelSet::new(self.iter().chain(std::iter::once(label)))
    }
}

impl TryFrom<Vec<Label>> for LabelSet {
    type Error = PartitionError;
    fn try_from(v: Vec<Label>) -> Result<Self> {
        LabelSet::new(v)
    }
}

impl From<LabelSet> for Vec<Label> {
    fn from(s: LabelSet) -> Self {
        s.0
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// An ordered set partition in canonical form.
///
/// Ordering compares the number of blocks first and the block contents
/// lexicographically after that; this is the enumeration order used
/// throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Label>>", into = "Vec<Vec<Label>>")]
pub struct OrderedSetPartition {
    blocks: Vec<Vec<Label>>,
}

impl Ord for OrderedSetPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.blocks
            .len()
            .cmp(&other.blocks.len())
            .then_with(|| self.blocks.cmp(&other.blocks))
    }
}

impl PartialOrd for OrderedSetPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl OrderedSetPartition {
    pub fn new(blocks: Vec<Vec<Label>>) -> Result<Self> {
        let mut blocks = blocks;
        let mut seen = Vec::new();
        for b in blocks.iter_mut() {
            if b.is_empty() {
                return Err(PartitionError::EmptyBlock);
            }
            b.sort_unstable();
            seen.extend_from_slice(b);
        }
        if blocks.is_empty() {
            return Err(PartitionError::EmptyLabelSet);
        }
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(PartitionError::DuplicateLabel(w[0]));
        }
        Ok(OrderedSetPartition { blocks })
    }

    /// Builds from blocks already known to be canonical and valid.
    pub(crate) fn from_canonical(blocks: Vec<Vec<Label>>) -> Self {
        debug_assert!(OrderedSetPartition::new(blocks.clone()).as_ref().map(|p| &p.blocks) == Ok(&blocks));
        OrderedSetPartition { blocks }
    }

    /// The one-block partition of `labels`.
    pub fn trivial(labels: &LabelSet) -> Self {
        OrderedSetPartition {
            blocks: vec![labels.0.clone()],
        }
    }

    /// The partition into singletons in increasing label order.
    pub fn finest(labels: &LabelSet) -> Self {
        OrderedSetPartition {
            blocks: labels.iter().map(|l| vec![l]).collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<Label>] {
        &self.blocks
    }

    pub fn block(&self, a: usize) -> &[Label] {
        &self.blocks[a]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Degree of the corresponding stratum class: `len() - 1`.
    pub fn grade(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn labels(&self) -> LabelSet {
        let mut v: Vec<Label> = self.blocks.iter().flatten().copied().collect();
        v.sort_unstable();
        LabelSet(v)
    }

    pub fn label_count(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn block_of(&self, label: Label) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&label).is_ok())
    }

    pub fn into_blocks(self) -> Vec<Vec<Label>> {
        self.blocks
    }

    pub fn as_two(&self) -> Result<TwoPartition> {
        TwoPartition::try_from(self.clone())
    }
}

impl TryFrom<Vec<Vec<Label>>> for OrderedSetPartition {
    type Error = PartitionError;
    fn try_from(v: Vec<Vec<Label>>) -> Result<Self> {
        OrderedSetPartition::new(v)
    }
}

impl From<OrderedSetPartition> for Vec<Vec<Label>> {
    fn from(p: OrderedSetPartition) -> Self {
        p.blocks
    }
}

impl fmt::Display for OrderedSetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (t, l) in b.iter().enumerate() {
                if t > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{l}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, ")")
    }
}

/// An ordered set partition with exactly two blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Label>>", into = "Vec<Vec<Label>>")]
pub struct TwoPartition(OrderedSetPartition);

impl TwoPartition {
    pub fn new(first: Vec<Label>, second: Vec<Label>) -> Result<Self> {
        TwoPartition::try_from(OrderedSetPartition::new(vec![first, second])?)
    }

    pub fn first(&self) -> &[Label] {
        &self.0.blocks[0]
    }

    pub fn second(&self) -> &[Label] {
        &self.0.blocks[1]
    }

    pub fn as_partition(&self) -> &OrderedSetPartition {
        &self.0
    }

    pub fn into_partition(self) -> OrderedSetPartition {
        self.0
    }

    pub fn labels(&self) -> LabelSet {
        self.0.labels()
    }

    pub fn in_first(&self, label: Label) -> bool {
        self.first().binary_search(&label).is_ok()
    }
}

impl TryFrom<OrderedSetPartition> for TwoPartition {
    type Error = PartitionError;
    fn try_from(p: OrderedSetPartition) -> Result<Self> {
        match p.len() {
            2 => Ok(TwoPartition(p)),
            n => Err(PartitionError::NotTwoPartition(n)),
        }
    }
}

impl TryFrom<Vec<Vec<Label>>> for TwoPartition {
    type Error = PartitionError;
    fn try_from(v: Vec<Vec<Label>>) -> Result<Self> {
        TwoPartition::try_from(OrderedSetPartition::new(v)?)
    }
}

impl From<TwoPartition> for Vec<Vec<Label>> {
    fn from(p: TwoPartition) -> Self {
        p.0.blocks
    }
}

impl fmt::Display for TwoPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// How a 2-partition sits relative to a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BreakClassification {
    /// The 2-partition is member `a` of the good family: it cuts between
    /// blocks `a` and `a + 1`.
    Between(usize),
    /// The 2-partition splits block `block` as `alpha` and is compatible
    /// with every other cut.
    At { block: usize, alpha: TwoPartition },
    /// Neither; `bad_pair` is the first adjacent pair `(b, b + 1)` with
    /// `tau_b` not inside the first part and `tau_{b+1}` meeting it.
    NoBreak { bad_pair: (usize, usize) },
}

fn ensure_same_labels(a: &OrderedSetPartition, b: &OrderedSetPartition) -> Result<()> {
    if a.labels() == b.labels() {
        Ok(())
    } else {
        Err(PartitionError::LabelSetMismatch)
    }
}

fn is_sorted_subset(small: &[Label], big: &[Label]) -> bool {
    small.iter().all(|l| big.binary_search(l).is_ok())
}

fn sorted_difference(a: &[Label], b: &[Label]) -> Vec<Label> {
    a.iter().copied().filter(|l| b.binary_search(l).is_err()).collect()
}

fn sorted_union(a: &[Label], b: &[Label]) -> Vec<Label> {
    let mut v: Vec<Label> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v
}

/// All ordered 2-partitions `(first, second)` of a block, in a fixed order.
pub fn splits(block: &[Label]) -> Vec<TwoPartition> {
    let k = block.len();
    if k < 2 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity((1usize << k) - 2);
    for mask in 1..(1u64 << k) - 1 {
        let (mut first, mut second) = (Vec::new(), Vec::new());
        for (t, &l) in block.iter().enumerate() {
            if mask >> t & 1 == 1 {
                first.push(l);
            } else {
                second.push(l);
            }
        }
        out.push(TwoPartition(OrderedSetPartition::from_canonical(vec![first, second])));
    }
    out.sort();
    out
}

/// Every ordered set partition of `labels`, sorted by length and then
/// lexicographically.
pub fn enumerate_partitions(labels: &LabelSet) -> Vec<OrderedSetPartition> {
    fn rec(rest: &[Label], prefix: &mut Vec<Vec<Label>>, out: &mut Vec<OrderedSetPartition>) {
        if rest.is_empty() {
            out.push(OrderedSetPartition::from_canonical(prefix.clone()));
            return;
        }
        let k = rest.len();
        for mask in 1..(1u64 << k) {
            let (mut block, mut remaining) = (Vec::new(), Vec::new());
            for (t, &l) in rest.iter().enumerate() {
                if mask >> t & 1 == 1 {
                    block.push(l);
                } else {
                    remaining.push(l);
                }
            }
            prefix.push(block);
            rec(&remaining, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(labels.as_slice(), &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Partitions of `labels` with exactly `len` blocks, in enumeration order.
pub fn partitions_of_length(labels: &LabelSet, len: usize) -> Vec<OrderedSetPartition> {
    enumerate_partitions(labels).into_iter().filter(|p| p.len() == len).collect()
}

/// All 2-partitions of `labels`.
pub fn two_partitions(labels: &LabelSet) -> Vec<TwoPartition> {
    splits(labels.as_slice())
}

/// Whether `tau` refines `sigma`: `tau` is obtained by replacing each block
/// of `sigma`, in order, by an ordered partition of it.
pub fn refines(tau: &OrderedSetPartition, sigma: &OrderedSetPartition) -> Result<bool> {
    ensure_same_labels(tau, sigma)?;
    let mut idx = 0;
    for s in &sigma.blocks {
        let mut covered = 0;
        while covered < s.len() {
            let Some(t) = tau.blocks.get(idx) else {
                return Ok(false);
            };
            if !is_sorted_subset(t, s) {
                return Ok(false);
            }
            covered += t.len();
            idx += 1;
        }
    }
    Ok(idx == tau.blocks.len())
}

/// Order in which `sigma` separates `i` and `j`: `Less` when the block of
/// `i` comes first, `Greater` when the block of `j` does, `None` when they
/// share a block.
pub fn separates(sigma: &OrderedSetPartition, i: Label, j: Label) -> Result<Option<Ordering>> {
    if i == j {
        return Err(PartitionError::SameLabel(i));
    }
    let bi = sigma.block_of(i).ok_or(PartitionError::UnknownLabel(i))?;
    let bj = sigma.block_of(j).ok_or(PartitionError::UnknownLabel(j))?;
    Ok(match bi.cmp(&bj) {
        Ordering::Equal => None,
        o => Some(o),
    })
}

/// The nested family of 2-partitions `sigma^(a) = (tau_1 ∪ … ∪ tau_a, rest)`.
pub fn good_family(tau: &OrderedSetPartition) -> Vec<TwoPartition> {
    let n = tau.blocks.len();
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    let mut first: Vec<Label> = Vec::new();
    for a in 0..n.saturating_sub(1) {
        first = sorted_union(&first, &tau.blocks[a]);
        let second: Vec<Label> = tau.blocks[a + 1..].iter().flatten().copied().collect();
        let mut second = second;
        second.sort_unstable();
        out.push(TwoPartition(OrderedSetPartition::from_canonical(vec![first.clone(), second])));
    }
    out
}

/// Inverse of [`good_family`]. The family may be given in any order; it is
/// sorted by inclusion of first blocks before reconstruction.
pub fn partition_from_good_family(family: &[TwoPartition]) -> Result<OrderedSetPartition> {
    let Some(head) = family.first() else {
        return Err(PartitionError::EmptyLabelSet);
    };
    let labels = head.labels();
    for m in family {
        if m.labels() != labels {
            return Err(PartitionError::LabelSetMismatch);
        }
    }
    for x in 0..family.len() {
        for y in x + 1..family.len() {
            let (a, b) = (family[x].first(), family[y].first());
            if a == b {
                return Err(PartitionError::DuplicateMember(x, y));
            }
            if !is_sorted_subset(a, b) && !is_sorted_subset(b, a) {
                return Err(PartitionError::NotNested(x, y));
            }
        }
    }
    let mut order: Vec<&TwoPartition> = family.iter().collect();
    order.sort_by_key(|m| m.first().len());
    let mut blocks = Vec::with_capacity(order.len() + 1);
    let mut prev: &[Label] = &[];
    for m in &order {
        blocks.push(sorted_difference(m.first(), prev));
        prev = m.first();
    }
    blocks.push(order.last().expect("nonempty").second().to_vec());
    Ok(OrderedSetPartition::from_canonical(blocks))
}

/// Classifies `sigma` against `tau` by scanning `sigma_1 ∩ tau_b` for each
/// block: full (2), empty (0) or proper (1).
pub fn classify_break(sigma: &TwoPartition, tau: &OrderedSetPartition) -> Result<BreakClassification> {
    ensure_same_labels(sigma.as_partition(), tau)?;
    Ok(classify_unchecked(sigma, tau))
}

pub(crate) fn classify_unchecked(sigma: &TwoPartition, tau: &OrderedSetPartition) -> BreakClassification {
    let first = sigma.first();
    let codes: Vec<u8> = tau
        .blocks
        .iter()
        .map(|b| {
            let inside = b.iter().filter(|l| first.binary_search(l).is_ok()).count();
            if inside == b.len() {
                2
            } else if inside == 0 {
                0
            } else {
                1
            }
        })
        .collect();
    let full = codes.iter().take_while(|&&c| c == 2).count();
    let tail_empty = |from: usize| codes[from..].iter().all(|&c| c == 0);
    if full > 0 && full < codes.len() && tail_empty(full) {
        return BreakClassification::Between(full - 1);
    }
    if full < codes.len() && codes[full] == 1 && tail_empty(full + 1) {
        let block = &tau.blocks[full];
        let a1: Vec<Label> = block.iter().copied().filter(|l| first.binary_search(l).is_ok()).collect();
        let a2 = sorted_difference(block, &a1);
        return BreakClassification::At {
            block: full,
            alpha: TwoPartition(OrderedSetPartition::from_canonical(vec![a1, a2])),
        };
    }
    let b = codes
        .windows(2)
        .position(|w| w[0] != 2 && w[1] != 0)
        .expect("a 2-partition that does not break tau has a bad pair");
    BreakClassification::NoBreak { bad_pair: (b, b + 1) }
}

/// `sigma * tau`, defined when `sigma` breaks `tau` at a block.
pub fn star(sigma: &TwoPartition, tau: &OrderedSetPartition) -> Result<OrderedSetPartition> {
    match classify_break(sigma, tau)? {
        BreakClassification::At { block, alpha } => refine_at(tau, block, &alpha),
        _ => Err(PartitionError::StarUndefined),
    }
}

/// `tau` with block `a` replaced by the two parts of `alpha`.
pub fn refine_at(tau: &OrderedSetPartition, a: usize, alpha: &TwoPartition) -> Result<OrderedSetPartition> {
    let block = tau.blocks.get(a).ok_or(PartitionError::BlockOutOfRange(a))?;
    if alpha.labels().as_slice() != block.as_slice() {
        return Err(PartitionError::NotABlockSplit(a));
    }
    Ok(refine_unchecked(tau, a, alpha))
}

pub(crate) fn refine_unchecked(tau: &OrderedSetPartition, a: usize, alpha: &TwoPartition) -> OrderedSetPartition {
    let mut blocks = Vec::with_capacity(tau.blocks.len() + 1);
    blocks.extend_from_slice(&tau.blocks[..a]);
    blocks.push(alpha.first().to_vec());
    blocks.push(alpha.second().to_vec());
    blocks.extend_from_slice(&tau.blocks[a + 1..]);
    OrderedSetPartition::from_canonical(blocks)
}

/// Blocks of `tau1` followed by the blocks of `tau2` shifted by `m`, where
/// `tau1` partitions `{1..m}` and `tau2` partitions `{1..n}`.
pub fn concatenate(tau1: &OrderedSetPartition, tau2: &OrderedSetPartition) -> Result<OrderedSetPartition> {
    let m = tau1.labels().initial_segment_len().ok_or(PartitionError::NotInitialSegment)?;
    tau2.labels().initial_segment_len().ok_or(PartitionError::NotInitialSegment)?;
    let shift = m as Label;
    let mut blocks = tau1.blocks.clone();
    blocks.extend(tau2.blocks.iter().map(|b| b.iter().map(|l| l + shift).collect()));
    Ok(OrderedSetPartition::from_canonical(blocks))
}

/// A bijection of `{1..n}`, stored as its list of images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<Label>,
}

impl Permutation {
    pub fn from_images(images: Vec<Label>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let k = (x as usize).wrapping_sub(1);
            if k >= n || seen[k] {
                return Err(PartitionError::BadPermutation(n));
            }
            seen[k] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n as Label).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: Label) -> Label {
        self.images[i as usize - 1]
    }

    pub fn images(&self) -> &[Label] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (k, &x) in self.images.iter().enumerate() {
            inv[x as usize - 1] = k as Label + 1;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&x| self.apply(x)).collect(),
        }
    }

    /// `s × t` acting on `{1..m} ∪ {m+1..m+n}` blockwise.
    pub fn juxtapose(&self, other: &Permutation) -> Self {
        let m = self.degree() as Label;
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|x| x + m));
        Permutation { images }
    }
}

/// Image partition: block `r` of the result is `s(tau_r)`.
pub fn apply_permutation(s: &Permutation, tau: &OrderedSetPartition) -> Result<OrderedSetPartition> {
    if tau.labels().initial_segment_len() != Some(s.degree()) {
        return Err(PartitionError::LabelSetMismatch);
    }
    let blocks = tau
        .blocks
        .iter()
        .map(|b| {
            let mut v: Vec<Label> = b.iter().map(|&l| s.apply(l)).collect();
            v.sort_unstable();
            v
        })
        .collect();
    Ok(OrderedSetPartition::from_canonical(blocks))
}
