//! The ring computed in good monomials against a direct computation in the
//! free polynomial ring on the divisor symbols.

use std::collections::HashMap;

use lmcalc::combination::GoodElement;
use lmcalc::partitions::{LabelSet, OrderedSetPartition, TwoPartition};
use lmcalc::ring::{equivalent, generators, graded_dimension, is_zero, multiply_generator, product};
use proptest::prelude::*;

const P: i64 = 1_000_003;

/// First parts of 2-partitions of `{1..n}` as bitmasks.
fn divisors(n: usize) -> Vec<u32> {
    (1..(1u32 << n) - 1).collect()
}

fn monomials(vars: usize, degree: usize) -> Vec<Vec<usize>> {
    fn rec(vars: usize, degree: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == degree {
            out.push(cur.clone());
            return;
        }
        for v in start..vars {
            cur.push(v);
            rec(vars, degree, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(vars, degree, 0, &mut Vec::new(), &mut out);
    out
}

fn rank_mod_p(mut rows: Vec<Vec<i64>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][c], P - 2);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % P;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for k in 0..ncols {
                    rows[r][k] = ((rows[r][k] - f * rows[rank][k]) % P + P) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: i64, mut e: i64) -> i64 {
    let mut r = 1;
    b = b.rem_euclid(P);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

/// Dimension of the degree-`k` part of `Q[x_S] / (linear, quadratic)`.
fn presented_dimension(n: usize, k: usize) -> usize {
    let divs = divisors(n);
    let vars = divs.len();
    let basis = monomials(vars, k);
    if k == 0 {
        return 1;
    }
    let index: HashMap<Vec<usize>, usize> = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    // ideal generators as sparse polynomials over monomials of their own degree
    let mut gens: Vec<(usize, Vec<(Vec<usize>, i64)>)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let terms = divs
                .iter()
                .enumerate()
                .filter_map(|(v, &s)| {
                    let (hi, hj) = (s >> i & 1 == 1, s >> j & 1 == 1);
                    match (hi, hj) {
                        (true, false) => Some((vec![v], 1)),
                        (false, true) => Some((vec![v], -1)),
                        _ => None,
                    }
                })
                .collect();
            gens.push((1, terms));
        }
    }
    for (a, &s) in divs.iter().enumerate() {
        for (b, &t) in divs.iter().enumerate().skip(a) {
            if s & t != s && s & t != t {
                gens.push((2, vec![(vec![a, b], 1)]));
            }
        }
    }
    let mut rows = Vec::new();
    for (d, terms) in &gens {
        if *d > k {
            continue;
        }
        for m in monomials(vars, k - d) {
            let mut row = vec![0i64; basis.len()];
            for (t, c) in terms {
                let mut full: Vec<usize> = m.iter().chain(t).copied().collect();
                full.sort_unstable();
                let slot = &mut row[index[&full]];
                *slot = (*slot + c).rem_euclid(P);
            }
            rows.push(row);
        }
    }
    basis.len() - rank_mod_p(rows)
}

#[test]
fn free_presentation_matches_good_monomials() {
    for n in 1..=4 {
        let labels = LabelSet::range(n);
        for k in 0..n {
            assert_eq!(graded_dimension(&labels, k), presented_dimension(n, k), "n = {n}, k = {k}");
        }
    }
}

#[test]
fn quadratic_generators_vanish() {
    let labels = LabelSet::range(4);
    let gens = generators(&labels);
    for (s, gs) in &gens {
        for (t, _) in &gens {
            let a = s.first();
            let b = t.first();
            let nested = a.iter().all(|x| b.contains(x)) || b.iter().all(|x| a.contains(x));
            let prod = multiply_generator(t, gs).unwrap();
            assert_eq!(is_zero(&prod), !nested, "{s} {t}");
        }
    }
}

fn two_partition(n: usize, mask: u32) -> TwoPartition {
    let (a, b): (Vec<u32>, Vec<u32>) = (1..=n as u32).partition(|&l| mask >> (l - 1) & 1 == 1);
    TwoPartition::new(a, b).unwrap()
}

fn stratum(n: usize, order: &[usize], cuts: u32) -> OrderedSetPartition {
    let mut blocks: Vec<Vec<u32>> = vec![vec![order[0] as u32 + 1]];
    for k in 1..n {
        if cuts >> (k - 1) & 1 == 1 {
            blocks.push(Vec::new());
        }
        blocks.last_mut().unwrap().push(order[k] as u32 + 1);
    }
    OrderedSetPartition::new(blocks).unwrap()
}

fn stratum_strategy(n: usize) -> impl Strategy<Value = GoodElement> {
    (Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), 0u32..1 << (n - 1))
        .prop_map(move |(order, cuts)| GoodElement::basis(&stratum(n, &order, cuts)))
}

fn element_strategy() -> impl Strategy<Value = (GoodElement, GoodElement, GoodElement)> {
    (2usize..=4).prop_flat_map(|n| (stratum_strategy(n), stratum_strategy(n), stratum_strategy(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_commute_and_associate((a, b, c) in element_strategy()) {
        let ab = product(&a, &b).unwrap();
        let ba = product(&b, &a).unwrap();
        prop_assert!(equivalent(&ab, &ba));
        let left = product(&ab, &c).unwrap();
        let right = product(&a, &product(&b, &c).unwrap()).unwrap();
        prop_assert!(equivalent(&left, &right));
    }

    #[test]
    fn generators_commute(n in 2usize..=4, s in 1u32..14, t in 1u32..14, cuts in 0u32..8) {
        let full = (1u32 << n) - 1;
        let (s, t) = (s % (full - 1) + 1, t % (full - 1) + 1);
        let (gs, gt) = (two_partition(n, s), two_partition(n, t));
        let order: Vec<usize> = (0..n).collect();
        let x = GoodElement::basis(&stratum(n, &order, cuts % (1 << (n - 1))));
        let st = multiply_generator(&gs, &multiply_generator(&gt, &x).unwrap()).unwrap();
        let ts = multiply_generator(&gt, &multiply_generator(&gs, &x).unwrap()).unwrap();
        prop_assert!(equivalent(&st, &ts));
    }
}
