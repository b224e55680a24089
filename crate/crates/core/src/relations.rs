//! The linear relations among partition symbols and their spans.
//!
//! For a partition `τ`, a block `τ_a` with at least two labels and labels
//! `i ≠ j` in it, the relation is
//!
//! ```text
//! Σ_{α: i α j} [τ(α)] − Σ_{α: j α i} [τ(α)]
//! ```
//!
//! over the 2-partitions `α` of `τ_a`. The same coefficient vectors give the
//! relations between good monomials in the ring and between generators of
//! the homology module, so one span per `(B, grade)` serves both. Spans are
//! built once and cached for the life of the process.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combination::{Combination, Symbol};
use crate::linalg::{rank_fraction_free, RowSpace, SparseVec};
use crate::partitions::{
    partitions_of_length, refine_unchecked, splits, Label, LabelSet, OrderedSetPartition, PartitionError,
};
use crate::rational::Q;

/// A relation together with the data it was generated from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation<S: Symbol> {
    pub element: Combination<S>,
    pub tau: OrderedSetPartition,
    pub block: usize,
    pub i: Label,
    pub j: Label,
}

/// Builds the relation for `(tau, block, i, j)`.
pub fn relation<S: Symbol>(tau: &OrderedSetPartition, block: usize, i: Label, j: Label) -> Result<Relation<S>, PartitionError> {
    let b = tau.blocks().get(block).ok_or(PartitionError::BlockOutOfRange(block))?;
    if i == j {
        return Err(PartitionError::SameLabel(i));
    }
    for l in [i, j] {
        if b.binary_search(&l).is_err() {
            return Err(PartitionError::UnknownLabel(l));
        }
    }
    let mut element = Combination::zero(&tau.labels());
    for alpha in splits(b) {
        let (i_first, j_first) = (alpha.in_first(i), alpha.in_first(j));
        let sign = match (i_first, j_first) {
            (true, false) => Q::one(),
            (false, true) => -Q::one(),
            _ => continue,
        };
        element.add_term(refine_unchecked(tau, block, &alpha), sign);
    }
    Ok(Relation {
        element,
        tau: tau.clone(),
        block,
        i,
        j,
    })
}

/// All relations whose terms have the given grade, one per `(τ, a, i < j)`.
pub fn relations_of_grade<S: Symbol>(labels: &LabelSet, grade: usize) -> Vec<Relation<S>> {
    if grade == 0 || grade >= labels.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for tau in partitions_of_length(labels, grade) {
        for (a, b) in tau.blocks().iter().enumerate() {
            for (x, &i) in b.iter().enumerate() {
                for &j in &b[x + 1..] {
                    out.push(relation(&tau, a, i, j).expect("labels from the block"));
                }
            }
        }
    }
    out
}

/// The span of all relations of one grade, in the coordinates of the
/// partitions of that grade (enumeration order).
#[derive(Debug)]
pub struct RelationSpan {
    labels: LabelSet,
    grade: usize,
    columns: Vec<OrderedSetPartition>,
    index: HashMap<OrderedSetPartition, usize>,
    space: RowSpace,
    relation_count: usize,
}

impl RelationSpan {
    pub fn build(labels: &LabelSet, grade: usize) -> Self {
        let columns = if grade < labels.len() {
            partitions_of_length(labels, grade + 1)
        } else {
            Vec::new()
        };
        let index: HashMap<_, _> = columns.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect();
        let mut space = RowSpace::new(columns.len());
        let rels = relations_of_grade::<crate::combination::GoodMonomial>(labels, grade);
        let relation_count = rels.len();
        for r in rels {
            let row = r.element.terms().map(|(t, c)| (index[t], c.clone())).collect();
            space.insert(row);
        }
        RelationSpan {
            labels: labels.clone(),
            grade,
            columns,
            index,
            space,
            relation_count,
        }
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn columns(&self) -> &[OrderedSetPartition] {
        &self.columns
    }

    pub fn rank(&self) -> usize {
        self.space.rank()
    }

    pub fn relation_count(&self) -> usize {
        self.relation_count
    }

    /// Dimension of the quotient at this grade.
    pub fn quotient_dimension(&self) -> usize {
        self.columns.len() - self.rank()
    }

    /// The row-reduced echelon basis as dense rows.
    pub fn echelon_rows(&self) -> Vec<Vec<Q>> {
        self.space
            .rows()
            .map(|(_, row)| {
                let mut dense = vec![Q::zero(); self.columns.len()];
                for (c, x) in row {
                    dense[*c] = x.clone();
                }
                dense
            })
            .collect()
    }

    pub fn coordinates<S: Symbol>(&self, x: &Combination<S>) -> SparseVec {
        x.terms()
            .map(|(t, c)| {
                let k = *self
                    .index
                    .get(t)
                    .unwrap_or_else(|| panic!("term {t} is not of grade {} over {}", self.grade, self.labels));
                (k, c.clone())
            })
            .collect()
    }

    /// Whether a homogeneous element of this grade lies in the span.
    pub fn contains<S: Symbol>(&self, x: &Combination<S>) -> bool {
        self.space.contains(&self.coordinates(x))
    }
}

type SpanCache = RwLock<HashMap<(LabelSet, usize), Arc<RelationSpan>>>;

static SPANS: LazyLock<SpanCache> = LazyLock::new(|| RwLock::new(HashMap::new()));

/// Cached span for `(labels, grade)`.
pub fn relation_span(labels: &LabelSet, grade: usize) -> Arc<RelationSpan> {
    let key = (labels.clone(), grade);
    if let Some(s) = SPANS.read().expect("span cache poisoned").get(&key) {
        return Arc::clone(s);
    }
    let mut w = SPANS.write().expect("span cache poisoned");
    Arc::clone(w.entry(key).or_insert_with(|| Arc::new(RelationSpan::build(labels, grade))))
}

/// Whether `x` vanishes modulo the relations, grade by grade.
pub fn vanishes<S: Symbol>(x: &Combination<S>) -> bool {
    x.grades()
        .into_iter()
        .all(|k| relation_span(x.labels(), k).contains(&x.homogeneous_part(k)))
}

/// Rank of the grade-`k` relations by fraction-free elimination on the
/// integer relation matrix.
pub fn relation_rank_fraction_free(labels: &LabelSet, grade: usize) -> usize {
    let rels = relations_of_grade::<crate::combination::GoodMonomial>(labels, grade);
    if rels.is_empty() {
        return 0;
    }
    let columns = partitions_of_length(labels, grade + 1);
    let index: HashMap<_, _> = columns.iter().enumerate().map(|(k, t)| (t, k)).collect();
    let matrix: Vec<Vec<BigInt>> = rels
        .iter()
        .map(|r| {
            let mut row = vec![BigInt::zero(); columns.len()];
            for (t, c) in r.element.terms() {
                debug_assert!(c.is_integer());
                row[index[t]] = c.to_integer();
            }
            row
        })
        .collect();
    rank_fraction_free(&matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combination::{GoodMonomial, ModuleElement};
    use crate::rational::q;

    fn p(blocks: &[&[u32]]) -> OrderedSetPartition {
        OrderedSetPartition::new(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn two_label_span() {
        let b = LabelSet::range(2);
        let s = relation_span(&b, 1);
        assert_eq!(s.rank(), 1);
        assert_eq!(s.columns(), &[p(&[&[1], &[2]]), p(&[&[2], &[1]])]);
        assert_eq!(relation_span(&b, 0).rank(), 0);
        let mut diff = ModuleElement::basis(&p(&[&[1], &[2]]));
        diff.add_term(p(&[&[2], &[1]]), q(-1));
        assert!(vanishes(&diff));
        let mut sum = ModuleElement::basis(&p(&[&[1], &[2]]));
        sum.add_term(p(&[&[2], &[1]]), q(1));
        assert!(!vanishes(&sum));
        assert!(!vanishes(&ModuleElement::unit(&b)));
    }

    #[test]
    fn relation_errors() {
        let t = p(&[&[1, 2], &[3]]);
        assert!(relation::<GoodMonomial>(&t, 1, 1, 2).is_err());
        assert!(relation::<GoodMonomial>(&t, 0, 1, 1).is_err());
        assert!(relation::<GoodMonomial>(&t, 4, 1, 2).is_err());
    }

    #[test]
    fn both_rank_routes_agree() {
        for n in 1..=4 {
            let b = LabelSet::range(n);
            for k in 0..n {
                assert_eq!(relation_span(&b, k).rank(), relation_rank_fraction_free(&b, k), "n={n} k={k}");
            }
        }
    }
}
