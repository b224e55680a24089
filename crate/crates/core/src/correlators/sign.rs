//! Index sets with parities and Koszul signs of reorderings.

use serde::{Deserialize, Serialize};

use super::CorrelatorError;
use crate::partitions::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn from_count(odd_count: usize) -> Self {
        if odd_count % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl From<Parity> for u8 {
    fn from(p: Parity) -> u8 {
        p as u8
    }
}

impl TryFrom<u8> for Parity {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            0 => Ok(Parity::Even),
            1 => Ok(Parity::Odd),
            _ => Err(format!("parity must be 0 or 1, got {v}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub label: Label,
    pub parity: Parity,
}

/// Labels of a homogeneous basis `Δ_a` with their parities, kept sorted by
/// label. Positions in this order index the series variables `x^a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SuperIndexSet {
    labels: Vec<Label>,
    parities: Vec<Parity>,
}

impl SuperIndexSet {
    pub fn new(entries: impl IntoIterator<Item = (Label, Parity)>) -> Result<Self, CorrelatorError> {
        let mut v: Vec<(Label, Parity)> = entries.into_iter().collect();
        v.sort_by_key(|e| e.0);
        if v.is_empty() {
            return Err(CorrelatorError::EmptyIndexSet);
        }
        if let Some(w) = v.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(CorrelatorError::DuplicateIndex(w[0].0));
        }
        Ok(SuperIndexSet {
            labels: v.iter().map(|e| e.0).collect(),
            parities: v.iter().map(|e| e.1).collect(),
        })
    }

    /// Labels `1..=n`, all even.
    pub fn even(n: usize) -> Self {
        Self::new((1..=n as Label).map(|a| (a, Parity::Even))).expect("distinct labels")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn all_even(&self) -> bool {
        self.parities.iter().all(|p| !p.is_odd())
    }

    pub fn position(&self, label: Label) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn parity(&self, label: Label) -> Result<Parity, CorrelatorError> {
        self.position(label).map(|k| self.parities[k]).ok_or(CorrelatorError::UnknownIndex(label))
    }

    pub fn parities_of(&self, seq: &[Label]) -> Result<Vec<Parity>, CorrelatorError> {
        seq.iter().map(|&a| self.parity(a)).collect()
    }

    pub fn entries(&self) -> Vec<IndexEntry> {
        self.labels
            .iter()
            .zip(&self.parities)
            .map(|(&label, &parity)| IndexEntry { label, parity })
            .collect()
    }

    /// Every sequence of length `n` over the labels, lexicographically.
    pub fn tuples(&self, n: usize) -> Vec<Vec<Label>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|t| {
                    self.labels.iter().map(move |&a| {
                        let mut t = t.clone();
                        t.push(a);
                        t
                    })
                })
                .collect();
        }
        out
    }

    /// Nondecreasing sequences of length `n`: one per reordering class.
    pub fn sorted_tuples(&self, n: usize) -> Vec<Vec<Label>> {
        fn rec(labels: &[Label], n: usize, start: usize, cur: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for k in start..labels.len() {
                cur.push(labels[k]);
                rec(labels, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(&self.labels, n, 0, &mut Vec::new(), &mut out);
        out
    }
}

/// Sign of the reordering that puts the element at original position
/// `perm[k]` into new position `k`: `−1` to the number of pairs of odd
/// elements whose relative order is reversed.
pub fn koszul_sign(perm: &[usize], parities: &[Parity]) -> i32 {
    assert_eq!(perm.len(), parities.len(), "permutation and parity lengths differ");
    let mut inversions = 0usize;
    for x in 0..perm.len() {
        if !parities[perm[x]].is_odd() {
            continue;
        }
        for y in x + 1..perm.len() {
            if parities[perm[y]].is_odd() && perm[x] > perm[y] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Stable sort of `seq` by label with the Koszul sign of the reordering.
/// `None` when an odd label repeats, since such products vanish.
pub fn sort_with_sign(seq: &[Label], parities: &[Parity]) -> Option<(i32, Vec<Label>)> {
    let mut perm: Vec<usize> = (0..seq.len()).collect();
    perm.sort_by_key(|&k| seq[k]);
    let sorted: Vec<Label> = perm.iter().map(|&k| seq[k]).collect();
    for w in perm.windows(2) {
        if seq[w[0]] == seq[w[1]] && parities[w[0]].is_odd() {
            return None;
        }
    }
    Some((koszul_sign(&perm, parities), sorted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Parity::{Even, Odd};

    #[test]
    fn sign_examples() {
        assert_eq!(koszul_sign(&[2, 0, 1], &[Even, Even, Even]), 1);
        assert_eq!(koszul_sign(&[1, 0], &[Odd, Odd]), -1);
        // a 3-cycle on (odd, odd, even) that swaps the two odd elements
        assert_eq!(koszul_sign(&[2, 1, 0], &[Odd, Odd, Even]), -1);
        assert_eq!(koszul_sign(&[2, 0, 1], &[Odd, Odd, Even]), 1);
        assert_eq!(koszul_sign(&[1, 0], &[Odd, Even]), 1);
    }

    #[test]
    fn sorting() {
        assert_eq!(sort_with_sign(&[3, 1], &[Odd, Odd]), Some((-1, vec![1, 3])));
        assert_eq!(sort_with_sign(&[2, 2], &[Odd, Odd]), None);
        assert_eq!(sort_with_sign(&[2, 2], &[Even, Even]), Some((1, vec![2, 2])));
    }

    #[test]
    fn index_sets() {
        let i = SuperIndexSet::new([(2, Odd), (1, Even)]).unwrap();
        assert_eq!(i.labels(), &[1, 2]);
        assert_eq!(i.parity(2), Ok(Odd));
        assert!(i.parity(5).is_err());
        assert!(SuperIndexSet::new([(1, Odd), (1, Even)]).is_err());
        assert_eq!(i.tuples(2).len(), 4);
        assert_eq!(i.sorted_tuples(2), vec![vec![1, 1], vec![1, 2], vec![2, 2]]);
        let json = serde_json::to_string(&i.entries()).unwrap();
        assert_eq!(json, r#"[{"label":1,"parity":0},{"label":2,"parity":1}]"#);
    }
}
