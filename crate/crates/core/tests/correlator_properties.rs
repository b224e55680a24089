//! Invariants of correlator families: coinvariance, factorization, series
//! round trips and the equivalence of the relation checks.

use lmcalc::correlators::{
    act_permutation, build_series, check_commutativity, check_linear_relations, check_top_relations,
    product_family, random_commuting_matrices, representation_apply, solve_order_by_order, top_from_series, Matrix,
    Parity, SuperIndexSet, TensorElement, TopCorrelatorFamily, TupleSelection,
};
use lmcalc::partitions::{concatenate, enumerate_partitions, LabelSet, OrderedSetPartition, Permutation};
use lmcalc::rational::q;
use proptest::prelude::*;

fn index_strategy() -> impl Strategy<Value = SuperIndexSet> {
    prop::collection::vec(any::<bool>(), 1..=3).prop_map(|odd| {
        SuperIndexSet::new(
            odd.iter()
                .enumerate()
                .map(|(k, &o)| (k as u32 + 1, if o { Parity::Odd } else { Parity::Even })),
        )
        .unwrap()
    })
}

/// Arbitrary values on every admissible sorted sequence.
fn random_family(index: &SuperIndexSet, dim: usize, order: usize, entries: &[i64]) -> TopCorrelatorFamily {
    let mut f = TopCorrelatorFamily::new(index.clone(), dim, order);
    let mut it = entries.iter().cycle();
    for n in 1..=order {
        for seq in index.sorted_tuples(n) {
            let par = index.parities_of(&seq).unwrap();
            let odd = par.iter().filter(|p| p.is_odd()).count();
            let repeats_odd = seq.windows(2).any(|w| w[0] == w[1] && index.parity(w[0]).unwrap().is_odd());
            if odd % 2 == 1 || repeats_odd {
                continue;
            }
            let rows = (0..dim).map(|_| (0..dim).map(|_| q(*it.next().unwrap())).collect()).collect();
            f.insert(&seq, Matrix::from_rows(rows).unwrap()).unwrap();
        }
    }
    f
}

fn family_strategy(order: usize) -> impl Strategy<Value = TopCorrelatorFamily> {
    (index_strategy(), 1usize..=2, prop::collection::vec(-3i64..=3, 7..40))
        .prop_map(move |(idx, dim, entries)| random_family(&idx, dim, order, &entries))
}

fn partition_strategy(n: usize) -> impl Strategy<Value = OrderedSetPartition> {
    let parts = enumerate_partitions(&LabelSet::range(n));
    (0..parts.len()).prop_map(move |k| parts[k].clone())
}

fn permutation_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn indices_strategy(index: &SuperIndexSet, n: usize) -> impl Strategy<Value = Vec<u32>> {
    let labels = index.labels().to_vec();
    prop::collection::vec(prop::sample::select(labels), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extension_is_coinvariant(
        (f, tau, s, a) in family_strategy(4).prop_flat_map(|f| {
            (1usize..=4).prop_flat_map(move |n| {
                let idx = f.index().clone();
                (Just(f.clone()), partition_strategy(n), permutation_strategy(n), indices_strategy(&idx, n))
            })
        })
    ) {
        let (sign, tau2, b) = act_permutation(f.index(), &s, &tau, &a).unwrap();
        let moved = f.extend_top(&tau2, &b).unwrap();
        let original = f.extend_top(&tau, &a).unwrap();
        prop_assert_eq!(if sign == 1 { moved } else { -&moved }, original);
        // the same statement through the tensor representation
        let x = TensorElement::basis(&tau, &a).unwrap();
        let y = x.permuted(f.index(), &s).unwrap();
        prop_assert_eq!(representation_apply(&f, &y).unwrap(), representation_apply(&f, &x).unwrap());
    }

    #[test]
    fn extension_factorizes(
        (f, t1, t2, a1, a2) in family_strategy(3).prop_flat_map(|f| {
            (1usize..=2, 1usize..=3).prop_flat_map(move |(m, n)| {
                let idx = f.index().clone();
                (Just(f.clone()), partition_strategy(m), partition_strategy(n),
                 indices_strategy(&idx, m), indices_strategy(&idx, n))
            })
        })
    ) {
        let joined: Vec<u32> = a1.iter().chain(&a2).copied().collect();
        let whole = f.extend_top(&concatenate(&t1, &t2).unwrap(), &joined).unwrap();
        let product = &f.extend_top(&t1, &a1).unwrap() * &f.extend_top(&t2, &a2).unwrap();
        prop_assert_eq!(whole, product);
        let x = TensorElement::basis(&t1, &a1).unwrap();
        let y = TensorElement::basis(&t2, &a2).unwrap();
        prop_assert_eq!(
            representation_apply(&f, &x.multiply(&y).unwrap()).unwrap(),
            &representation_apply(&f, &x).unwrap() * &representation_apply(&f, &y).unwrap()
        );
    }

    #[test]
    fn series_round_trip(f in family_strategy(4)) {
        let s = build_series(&f, 4).unwrap();
        prop_assert_eq!(&top_from_series(&s).unwrap(), &f);
        prop_assert_eq!(build_series(&top_from_series(&s).unwrap(), 4).unwrap(), s);
    }

    #[test]
    fn relation_checks_agree(f in family_strategy(4), level in 2usize..=4) {
        let lin = check_linear_relations(&f, level, TupleSelection::Exhaustive).unwrap();
        let top = check_top_relations(&f, level, TupleSelection::Exhaustive).unwrap();
        let series = check_commutativity(&build_series(&f, level).unwrap(), None).unwrap();
        prop_assert_eq!(lin.passed(), top.passed());
        prop_assert_eq!(lin.passed(), series.passed());
        let reps = check_linear_relations(&f, level, TupleSelection::Representatives).unwrap();
        prop_assert_eq!(lin.passed(), reps.passed());
    }

    #[test]
    fn products_of_matrices_pass_iff_they_commute(
        entries in prop::collection::vec(-2i64..=2, 8),
        order in 2usize..=4,
    ) {
        let idx = SuperIndexSet::even(2);
        let a = Matrix::from_rows(vec![vec![q(entries[0]), q(entries[1])], vec![q(entries[2]), q(entries[3])]]).unwrap();
        let b = Matrix::from_rows(vec![vec![q(entries[4]), q(entries[5])], vec![q(entries[6]), q(entries[7])]]).unwrap();
        let commute = a.commutator(&b).is_zero();
        let f = product_family(&idx, order, &[a, b]).unwrap();
        let lin = check_linear_relations(&f, order, TupleSelection::Exhaustive).unwrap();
        let series = check_commutativity(&build_series(&f, order).unwrap(), None).unwrap();
        prop_assert_eq!(lin.passed(), commute);
        prop_assert_eq!(series.passed(), commute);
    }

    #[test]
    fn solved_families_pass_and_checks_agree_after_perturbation(
        idx in index_strategy(),
        dim in 1usize..=2,
        seed in any::<u64>(),
        pick in any::<prop::sample::Index>(),
    ) {
        let order = 4;
        let mut one = random_commuting_matrices(idx.len(), dim, seed);
        for (k, p) in idx.parities().iter().enumerate() {
            if p.is_odd() {
                one[k] = Matrix::zero(dim);
            }
        }
        let f = solve_order_by_order(&idx, order, &one, seed ^ 1).unwrap();
        prop_assert!(check_linear_relations(&f, order, TupleSelection::Exhaustive).unwrap().passed());
        prop_assert!(check_top_relations(&f, order, TupleSelection::Exhaustive).unwrap().passed());
        prop_assert!(check_commutativity(&build_series(&f, order).unwrap(), None).unwrap().passed());

        // shift one value below the top level by a nilpotent matrix
        let lower: Vec<Vec<u32>> = (1..order)
            .flat_map(|n| idx.sorted_tuples(n))
            .filter(|seq| {
                let par = idx.parities_of(seq).unwrap();
                par.iter().filter(|p| p.is_odd()).count() % 2 == 0
                    && !seq.windows(2).any(|w| w[0] == w[1] && idx.parity(w[0]).unwrap().is_odd())
            })
            .collect();
        prop_assume!(!lower.is_empty());
        let seq = pick.get(&lower).clone();
        let mut shift = Matrix::identity(dim);
        if dim > 1 {
            shift = Matrix::zero(dim);
            shift.set(0, 1, q(1));
        }
        let mut g = f.clone();
        g.insert(&seq, &f.value(&seq).unwrap() + &shift).unwrap();
        let lin = check_linear_relations(&g, order, TupleSelection::Exhaustive).unwrap();
        let top = check_top_relations(&g, order, TupleSelection::Exhaustive).unwrap();
        let series = check_commutativity(&build_series(&g, order).unwrap(), None).unwrap();
        prop_assert_eq!(lin.passed(), top.passed());
        prop_assert_eq!(lin.passed(), series.passed());
    }
}
