//! Top correlator families, their extension to all partitions, and the
//! linear relations.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, LazyLock, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::sign::{koszul_sign, sort_with_sign, IndexEntry, Parity, SuperIndexSet};
use super::CorrelatorError;
use crate::combination::Cycle;
use crate::partitions::{
    apply_permutation, concatenate, enumerate_partitions, separates, two_partitions, Label, LabelSet,
    OrderedSetPartition, Permutation,
};
use crate::rational::Q;
use crate::relations::{relations_of_grade, Relation};

/// Values `⟨Δ_{a_1} … Δ_{a_n}⟩` for `n ≤ order`, stored on nondecreasing
/// sequences; any other sequence is read through its sorting sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopCorrelatorFamily {
    index: SuperIndexSet,
    dim: usize,
    order: usize,
    top: BTreeMap<Vec<Label>, Matrix>,
}

impl TopCorrelatorFamily {
    pub fn new(index: SuperIndexSet, dim: usize, order: usize) -> Self {
        TopCorrelatorFamily {
            index,
            dim,
            order,
            top: BTreeMap::new(),
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

    /// Stored nonzero values keyed by nondecreasing sequence.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<Label>, &Matrix)> {
        self.top.iter()
    }

    /// Sets the value on `seq` (any order); the stored representative
    /// absorbs the sorting sign.
    pub fn insert(&mut self, seq: &[Label], value: Matrix) -> Result<(), CorrelatorError> {
        if seq.is_empty() {
            return Err(CorrelatorError::EmptySequence);
        }
        if seq.len() > self.order {
            return Err(CorrelatorError::BeyondOrder {
                len: seq.len(),
                order: self.order,
            });
        }
        if value.dim() != self.dim {
            return Err(CorrelatorError::DimensionMismatch {
                expected: self.dim,
                got: value.dim(),
            });
        }
        let parities = self.index.parities_of(seq)?;
        let Some((sign, sorted)) = sort_with_sign(seq, &parities) else {
            return if value.is_zero() {
                Ok(())
            } else {
                Err(CorrelatorError::RepeatedOdd(seq.to_vec()))
            };
        };
        let odd = parities.iter().filter(|p| p.is_odd()).count();
        if value.is_zero() {
            self.top.remove(&sorted);
            return Ok(());
        }
        if odd % 2 == 1 {
            return Err(CorrelatorError::OddValue(seq.to_vec()));
        }
        let stored = if sign == 1 { value } else { -&value };
        self.top.insert(sorted, stored);
        Ok(())
    }

    /// `⟨Δ_{a_1} … Δ_{a_n}⟩`, `None` when zero.
    pub fn lookup(&self, seq: &[Label]) -> Result<Option<Matrix>, CorrelatorError> {
        let parities = self.index.parities_of(seq)?;
        Ok(self.lookup_with(seq, &parities))
    }

    fn lookup_with(&self, seq: &[Label], parities: &[Parity]) -> Option<Matrix> {
        let (sign, sorted) = sort_with_sign(seq, parities)?;
        let m = self.top.get(&sorted)?;
        Some(if sign == 1 { m.clone() } else { -m })
    }

    pub fn value(&self, seq: &[Label]) -> Result<Matrix, CorrelatorError> {
        Ok(self.lookup(seq)?.unwrap_or_else(|| Matrix::zero(self.dim)))
    }

    /// `τ⟨Δ_{a_1} … Δ_{a_n}⟩`: the ordered product over the blocks of `τ` of
    /// the top values on each block, times the sign of regrouping the
    /// indices block by block.
    pub fn extend_top(&self, tau: &OrderedSetPartition, indices: &[Label]) -> Result<Matrix, CorrelatorError> {
        let n = indices.len();
        if tau.labels().initial_segment_len() != Some(n) {
            return Err(CorrelatorError::LengthMismatch {
                partition: tau.label_count(),
                indices: n,
            });
        }
        let parities = self.index.parities_of(indices)?;
        let order: Vec<usize> = tau.blocks().iter().flatten().map(|&l| l as usize - 1).collect();
        let sign = koszul_sign(&order, &parities);
        let mut acc = Matrix::identity(self.dim);
        for block in tau.blocks() {
            let seq: Vec<Label> = block.iter().map(|&l| indices[l as usize - 1]).collect();
            let bpar: Vec<Parity> = block.iter().map(|&l| parities[l as usize - 1]).collect();
            match self.lookup_with(&seq, &bpar) {
                Some(v) => acc = &acc * &v,
                None => return Ok(Matrix::zero(self.dim)),
            }
        }
        Ok(if sign == 1 { acc } else { -&acc })
    }

    /// `extend_top` on every partition of `{1..n}` at once, reusing block
    /// values and shared prefixes.
    fn extend_all(&self, level: &Level, indices: &[Label]) -> Vec<Option<Matrix>> {
        let parities: Vec<Parity> = indices.iter().map(|&a| self.index.parity(a).expect("known index")).collect();
        let mut blocks: HashMap<u32, Option<Matrix>> = HashMap::new();
        let mut block_value = |mask: u32| -> Option<Matrix> {
            blocks
                .entry(mask)
                .or_insert_with(|| {
                    let pos: Vec<usize> = (0..level.n).filter(|k| mask >> k & 1 == 1).collect();
                    let seq: Vec<Label> = pos.iter().map(|&k| indices[k]).collect();
                    let par: Vec<Parity> = pos.iter().map(|&k| parities[k]).collect();
                    self.lookup_with(&seq, &par)
                })
                .clone()
        };
        let mut prefixes: HashMap<Vec<u32>, Option<Matrix>> = HashMap::new();
        level
            .masks
            .iter()
            .zip(&level.orders)
            .map(|(masks, order)| {
                // products of the first k blocks, memoized by mask prefix
                let mut acc: Option<Matrix> = Some(Matrix::identity(self.dim));
                for k in 1..=masks.len() {
                    let key = &masks[..k];
                    if let Some(v) = prefixes.get(key) {
                        acc = v.clone();
                    } else {
                        acc = match (acc, block_value(masks[k - 1])) {
                            (Some(a), Some(b)) => Some(&a * &b),
                            _ => None,
                        };
                        prefixes.insert(key.to_vec(), acc.clone());
                    }
                    if acc.is_none() {
                        break;
                    }
                }
                acc.map(|m| if koszul_sign(order, &parities) == 1 { m } else { -&m })
            })
            .collect()
    }

    pub fn to_file(&self) -> FamilyFile {
        FamilyFile {
            dim_f: self.dim,
            indices: self.index.entries(),
            order: Some(self.order),
            top: self
                .top
                .iter()
                .map(|(seq, m)| TopEntry {
                    seq: seq.clone(),
                    matrix: m.clone(),
                })
                .collect(),
        }
    }

    pub fn from_file(file: &FamilyFile) -> Result<Self, CorrelatorError> {
        let index = SuperIndexSet::new(file.indices.iter().map(|e| (e.label, e.parity)))?;
        let order = file
            .order
            .unwrap_or_else(|| file.top.iter().map(|e| e.seq.len()).max().unwrap_or(1));
        let mut out = TopCorrelatorFamily::new(index, file.dim_f, order);
        for e in &file.top {
            out.insert(&e.seq, e.matrix.clone())?;
        }
        Ok(out)
    }
}

/// Wire form of a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    #[serde(rename = "dimF")]
    pub dim_f: usize,
    pub indices: Vec<IndexEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    pub top: Vec<TopEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopEntry {
    pub seq: Vec<Label>,
    pub matrix: Matrix,
}

/// Partitions of `{1..n}` with block masks, regrouping orders and the
/// relations written as signed index lists.
struct Level {
    n: usize,
    masks: Vec<Vec<u32>>,
    orders: Vec<Vec<usize>>,
    relations: Vec<(Relation<Cycle>, Vec<(usize, bool)>)>,
}

impl Level {
    fn build(n: usize) -> Self {
        let labels = LabelSet::range(n);
        let parts = enumerate_partitions(&labels);
        let position: HashMap<&OrderedSetPartition, usize> = parts.iter().enumerate().map(|(k, t)| (t, k)).collect();
        let masks = parts
            .iter()
            .map(|t| t.blocks().iter().map(|b| b.iter().fold(0u32, |m, &l| m | 1 << (l - 1))).collect())
            .collect();
        let orders = parts
            .iter()
            .map(|t| t.blocks().iter().flatten().map(|&l| l as usize - 1).collect())
            .collect();
        let relations = (1..n)
            .flat_map(|k| relations_of_grade::<Cycle>(&labels, k))
            .map(|r| {
                let terms = r.element.terms().map(|(t, c)| (position[t], c.is_one())).collect();
                (r, terms)
            })
            .collect();
        Level {
            n,
            masks,
            orders,
            relations,
        }
    }
}

type LevelCache = RwLock<HashMap<usize, Arc<Level>>>;

static LEVELS: LazyLock<LevelCache> = LazyLock::new(|| RwLock::new(HashMap::new()));

fn level(n: usize) -> Arc<Level> {
    if let Some(l) = LEVELS.read().expect("level cache poisoned").get(&n) {
        return Arc::clone(l);
    }
    let mut w = LEVELS.write().expect("level cache poisoned");
    Arc::clone(w.entry(n).or_insert_with(|| Arc::new(Level::build(n))))
}

/// Which index tuples to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TupleSelection {
    /// Nondecreasing tuples only. Relations for a reordered tuple are the
    /// relations for the sorted one carried by a permutation, up to one
    /// overall sign, so this loses nothing once the values are
    /// permutation-coinvariant (which the extension is by construction).
    #[default]
    Representatives,
    /// Every tuple.
    Exhaustive,
}

impl TupleSelection {
    fn tuples(self, index: &SuperIndexSet, n: usize) -> Vec<Vec<Label>> {
        match self {
            TupleSelection::Representatives => index.sorted_tuples(n),
            TupleSelection::Exhaustive => index.tuples(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub indices: Vec<Label>,
    pub tau: OrderedSetPartition,
    /// 1-based block of `tau` that is split.
    pub block: usize,
    pub i: Label,
    pub j: Label,
    pub residual: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub order: usize,
    pub selection: TupleSelection,
    pub tuples: usize,
    pub relations: usize,
    pub failure_count: usize,
    /// The first few failures.
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

const MAX_REPORTED: usize = 20;

fn check_order(top: &TopCorrelatorFamily, n_max: usize) -> Result<(), CorrelatorError> {
    if n_max > top.order {
        return Err(CorrelatorError::BeyondOrder {
            len: n_max,
            order: top.order,
        });
    }
    Ok(())
}

/// Every linear relation among the extended values, for all partitions
/// `τ` of `{1..n}`, `n ≤ n_max`, every block with two or more labels and
/// every pair `i < j` in it.
pub fn check_linear_relations(
    top: &TopCorrelatorFamily,
    n_max: usize,
    selection: TupleSelection,
) -> Result<RelationReport, CorrelatorError> {
    check_order(top, n_max)?;
    let mut report = RelationReport {
        order: n_max,
        selection,
        tuples: 0,
        relations: 0,
        failure_count: 0,
        failures: Vec::new(),
    };
    for n in 2..=n_max {
        let lvl = level(n);
        for a in selection.tuples(&top.index, n) {
            report.tuples += 1;
            let values = top.extend_all(&lvl, &a);
            for (rel, terms) in &lvl.relations {
                report.relations += 1;
                let mut sum = Matrix::zero(top.dim);
                for &(k, positive) in terms {
                    if let Some(v) = &values[k] {
                        if positive {
                            sum += v;
                        } else {
                            sum -= v;
                        }
                    }
                }
                if !sum.is_zero() {
                    report.failure_count += 1;
                    if report.failures.len() < MAX_REPORTED {
                        report.failures.push(RelationFailure {
                            indices: a.clone(),
                            tau: rel.tau.clone(),
                            block: rel.block + 1,
                            i: rel.i,
                            j: rel.j,
                            residual: sum,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// The quadratic relations among top values alone: for every tuple and
/// `i < j`, `Σ_{σ: iσj} ε⟨σ_1⟩⟨σ_2⟩ − Σ_{σ: jσi} ε⟨σ_1⟩⟨σ_2⟩ = 0` over
/// 2-partitions `σ` of `{1..n}`. The parts are read in decreasing order
/// here, a different arrangement from [`TopCorrelatorFamily::extend_top`],
/// with the sign compensating.
pub fn check_top_relations(
    top: &TopCorrelatorFamily,
    n_max: usize,
    selection: TupleSelection,
) -> Result<RelationReport, CorrelatorError> {
    check_order(top, n_max)?;
    let mut report = RelationReport {
        order: n_max,
        selection,
        tuples: 0,
        relations: 0,
        failure_count: 0,
        failures: Vec::new(),
    };
    for n in 2..=n_max {
        let labels = LabelSet::range(n);
        let sigmas = two_partitions(&labels);
        for a in selection.tuples(&top.index, n) {
            report.tuples += 1;
            let parities = top.index.parities_of(&a)?;
            let terms: Vec<Option<Matrix>> = sigmas
                .iter()
                .map(|s| {
                    let first: Vec<usize> = s.first().iter().rev().map(|&l| l as usize - 1).collect();
                    let second: Vec<usize> = s.second().iter().rev().map(|&l| l as usize - 1).collect();
                    let order: Vec<usize> = first.iter().chain(&second).copied().collect();
                    let eps = koszul_sign(&order, &parities);
                    let part = |pos: &[usize]| {
                        let seq: Vec<Label> = pos.iter().map(|&k| a[k]).collect();
                        let par: Vec<Parity> = pos.iter().map(|&k| parities[k]).collect();
                        top.lookup_with(&seq, &par)
                    };
                    let v = &part(&first)? * &part(&second)?;
                    Some(if eps == 1 { v } else { -&v })
                })
                .collect();
            for i in 1..=n as Label {
                for j in i + 1..=n as Label {
                    report.relations += 1;
                    let mut sum = Matrix::zero(top.dim);
                    for (s, t) in sigmas.iter().zip(&terms) {
                        let Some(v) = t else { continue };
                        match separates(s.as_partition(), i, j).expect("labels 1..n") {
                            Some(std::cmp::Ordering::Less) => sum += v,
                            Some(std::cmp::Ordering::Greater) => sum -= v,
                            _ => {}
                        }
                    }
                    if !sum.is_zero() {
                        report.failure_count += 1;
                        if report.failures.len() < MAX_REPORTED {
                            report.failures.push(RelationFailure {
                                indices: a.clone(),
                                tau: OrderedSetPartition::trivial(&labels),
                                block: 1,
                                i,
                                j,
                                residual: sum,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `s · (μ(τ) ⊗ Δ_{a_1} ⊗ … ⊗ Δ_{a_n})`: the factor at position `i` moves
/// to position `s(i)` and `τ` becomes `s(τ)`. Returns the Koszul sign, the
/// new partition and the new indices.
pub fn act_permutation(
    index: &SuperIndexSet,
    s: &Permutation,
    tau: &OrderedSetPartition,
    indices: &[Label],
) -> Result<(i32, OrderedSetPartition, Vec<Label>), CorrelatorError> {
    if s.degree() != indices.len() {
        return Err(CorrelatorError::LengthMismatch {
            partition: s.degree(),
            indices: indices.len(),
        });
    }
    let parities = index.parities_of(indices)?;
    let inv = s.inverse();
    let perm: Vec<usize> = (1..=indices.len() as Label).map(|k| inv.apply(k) as usize - 1).collect();
    let moved: Vec<Label> = perm.iter().map(|&k| indices[k]).collect();
    Ok((koszul_sign(&perm, &parities), apply_permutation(s, tau)?, moved))
}

/// A finite combination of `μ(τ) ⊗ Δ_{a_1} ⊗ … ⊗ Δ_{a_n}` with `n` fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    n: usize,
    terms: BTreeMap<(OrderedSetPartition, Vec<Label>), Q>,
}

impl TensorElement {
    pub fn zero(n: usize) -> Self {
        TensorElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(tau: &OrderedSetPartition, indices: &[Label]) -> Result<Self, CorrelatorError> {
        let mut out = Self::zero(indices.len());
        out.add_term(tau.clone(), indices.to_vec(), Q::one())?;
        Ok(out)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(OrderedSetPartition, Vec<Label>), &Q)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, tau: OrderedSetPartition, indices: Vec<Label>, c: Q) -> Result<(), CorrelatorError> {
        if indices.len() != self.n || tau.labels().initial_segment_len() != Some(self.n) {
            return Err(CorrelatorError::LengthMismatch {
                partition: tau.label_count(),
                indices: indices.len(),
            });
        }
        let slot = self.terms.entry((tau, indices)).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    /// Concatenates partitions and index lists termwise.
    pub fn multiply(&self, other: &TensorElement) -> Result<TensorElement, CorrelatorError> {
        let mut out = Self::zero(self.n + other.n);
        for ((t1, a1), c1) in &self.terms {
            for ((t2, a2), c2) in &other.terms {
                let mut a = a1.clone();
                a.extend_from_slice(a2);
                out.add_term(concatenate(t1, t2)?, a, c1 * c2)?;
            }
        }
        Ok(out)
    }

    pub fn permuted(&self, index: &SuperIndexSet, s: &Permutation) -> Result<TensorElement, CorrelatorError> {
        let mut out = Self::zero(self.n);
        for ((tau, a), c) in &self.terms {
            let (sign, t, b) = act_permutation(index, s, tau, a)?;
            out.add_term(t, b, if sign == 1 { c.clone() } else { -c })?;
        }
        Ok(out)
    }
}

/// The representation applied to a combination: the linear extension of
/// [`TopCorrelatorFamily::extend_top`].
pub fn representation_apply(top: &TopCorrelatorFamily, x: &TensorElement) -> Result<Matrix, CorrelatorError> {
    let mut out = Matrix::zero(top.dim);
    for ((tau, a), c) in x.terms() {
        out.add_scaled(c, &top.extend_top(tau, a)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use Parity::{Even, Odd};

    fn p(blocks: &[&[u32]]) -> OrderedSetPartition {
        OrderedSetPartition::new(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    fn mixed() -> SuperIndexSet {
        SuperIndexSet::new([(1, Even), (2, Odd), (3, Odd)]).unwrap()
    }

    #[test]
    fn insert_and_lookup_signs() {
        let mut f = TopCorrelatorFamily::new(mixed(), 2, 3);
        let m = Matrix::from_ints(&[&[1, 2], &[3, 4]]);
        f.insert(&[3, 2], m.clone()).unwrap();
        assert_eq!(f.lookup(&[2, 3]).unwrap(), Some(-&m));
        assert_eq!(f.lookup(&[3, 2]).unwrap(), Some(m.clone()));
        assert_eq!(f.lookup(&[2, 2]).unwrap(), None);
        f.insert(&[1, 3, 2], m.clone()).unwrap();
        assert_eq!(f.lookup(&[2, 1, 3]).unwrap(), Some(-&m));
        assert_eq!(f.lookup(&[3, 1, 2]).unwrap(), Some(m.clone()));
        assert_eq!(f.insert(&[2], m.clone()), Err(CorrelatorError::OddValue(vec![2])));
        assert_eq!(f.insert(&[2, 2], m.clone()), Err(CorrelatorError::RepeatedOdd(vec![2, 2])));
        assert!(f.insert(&[1, 1, 1, 1], m.clone()).is_err());
        assert!(f.insert(&[1], Matrix::zero(3)).is_err());
        assert!(f.lookup(&[7]).is_err());
    }

    #[test]
    fn extension_examples() {
        let idx = SuperIndexSet::even(2);
        let mut f = TopCorrelatorFamily::new(idx, 2, 3);
        let c1 = Matrix::from_ints(&[&[1, 1], &[0, 1]]);
        let c2 = Matrix::from_ints(&[&[2, 0], &[0, 3]]);
        let t = Matrix::from_ints(&[&[0, 5], &[7, 0]]);
        f.insert(&[1], c1.clone()).unwrap();
        f.insert(&[2], c2.clone()).unwrap();
        f.insert(&[1, 2, 2], t.clone()).unwrap();
        assert_eq!(f.extend_top(&p(&[&[1, 2, 3]]), &[2, 1, 2]).unwrap(), t);
        let finest = f.extend_top(&p(&[&[2], &[1], &[3]]), &[1, 2, 1]).unwrap();
        assert_eq!(finest, &(&c2 * &c1) * &c1);
        assert!(f.extend_top(&p(&[&[1, 2]]), &[1]).is_err());
    }

    #[test]
    fn odd_regrouping_sign() {
        let mut f = TopCorrelatorFamily::new(mixed(), 1, 2);
        f.insert(&[2, 3], Matrix::from_ints(&[&[1]])).unwrap();
        // regrouping (2, 1, 3) into blocks {1,3},{2} moves Δ_3 past Δ_1 only
        let v = f.extend_top(&p(&[&[1, 3], &[2]]), &[2, 1, 3]).unwrap();
        assert_eq!(v, Matrix::zero(1));
        let mut g = TopCorrelatorFamily::new(mixed(), 1, 2);
        g.insert(&[2, 3], Matrix::from_ints(&[&[1]])).unwrap();
        g.insert(&[1], Matrix::from_ints(&[&[5]])).unwrap();
        let v = g.extend_top(&p(&[&[2], &[1, 3]]), &[3, 1, 2]).unwrap();
        // regrouped order (Δ_1, Δ_3, Δ_2) from (Δ_3, Δ_1, Δ_2): no odd pair reversed
        assert_eq!(v, Matrix::from_ints(&[&[-5]]));
    }

    #[test]
    fn permutation_action_is_coinvariant() {
        let mut f = TopCorrelatorFamily::new(mixed(), 1, 3);
        f.insert(&[2, 3], Matrix::from_ints(&[&[2]])).unwrap();
        f.insert(&[1, 2, 3], Matrix::from_ints(&[&[3]])).unwrap();
        f.insert(&[1], Matrix::from_ints(&[&[5]])).unwrap();
        let tau = p(&[&[1, 3], &[2]]);
        let a = [2, 1, 3];
        let s = Permutation::from_images(vec![3, 1, 2]).unwrap();
        let x = TensorElement::basis(&tau, &a).unwrap();
        let y = x.permuted(f.index(), &s).unwrap();
        assert_eq!(representation_apply(&f, &x).unwrap(), representation_apply(&f, &y).unwrap());
        let (sign, t, b) = act_permutation(f.index(), &s, &tau, &a).unwrap();
        assert_eq!(t, p(&[&[2, 3], &[1]]));
        assert_eq!(b, vec![1, 3, 2]);
        assert_eq!(sign, -1);
    }

    #[test]
    fn commuting_one_point_values_pass_at_two_points() {
        let idx = SuperIndexSet::even(2);
        let mut f = TopCorrelatorFamily::new(idx.clone(), 2, 2);
        f.insert(&[1], Matrix::from_ints(&[&[1, 1], &[0, 1]])).unwrap();
        f.insert(&[2], Matrix::from_ints(&[&[2, 3], &[0, 2]])).unwrap();
        assert!(check_linear_relations(&f, 2, TupleSelection::Exhaustive).unwrap().passed());
        let mut g = TopCorrelatorFamily::new(idx, 2, 2);
        g.insert(&[1], Matrix::from_ints(&[&[0, 1], &[0, 0]])).unwrap();
        g.insert(&[2], Matrix::from_ints(&[&[0, 0], &[1, 0]])).unwrap();
        let r = check_linear_relations(&g, 2, TupleSelection::Exhaustive).unwrap();
        assert!(!r.passed());
        assert!(!check_top_relations(&g, 2, TupleSelection::Exhaustive).unwrap().passed());
        assert!(check_linear_relations(&g, 3, TupleSelection::Exhaustive).is_err());
    }

    #[test]
    fn tensor_products_factor() {
        let mut f = TopCorrelatorFamily::new(SuperIndexSet::even(2), 2, 2);
        f.insert(&[1], Matrix::from_ints(&[&[1, 1], &[0, 1]])).unwrap();
        f.insert(&[2], Matrix::from_ints(&[&[0, 1], &[1, 0]])).unwrap();
        f.insert(&[1, 2], Matrix::from_ints(&[&[4, 0], &[0, 1]])).unwrap();
        let x = TensorElement::basis(&p(&[&[1, 2]]), &[2, 1]).unwrap();
        let mut y = TensorElement::basis(&p(&[&[1]]), &[2]).unwrap();
        y.add_term(p(&[&[1]]), vec![1], q(3)).unwrap();
        let xy = x.multiply(&y).unwrap();
        assert_eq!(
            representation_apply(&f, &xy).unwrap(),
            &representation_apply(&f, &x).unwrap() * &representation_apply(&f, &y).unwrap()
        );
    }
}
