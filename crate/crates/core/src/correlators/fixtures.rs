//! Families and series with known behaviour under the relations: products
//! of commuting matrices, linear forms, scalar combinations of commuting
//! matrices, non-commuting counterexamples, and families solved level by
//! level from their one-point values.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::family::TopCorrelatorFamily;
use super::matrix::Matrix;
use super::series::{Monomial, TruncatedSeries};
use super::sign::{koszul_sign, sort_with_sign, Parity, SuperIndexSet};
use super::CorrelatorError;
use crate::linalg::{solve_affine, Equation, SparseVec};
use crate::partitions::{separates, two_partitions, Label, LabelSet};
use crate::rational::{q, Q};

fn check_one_point(index: &SuperIndexSet, mats: &[Matrix], dim: usize) -> Result<(), CorrelatorError> {
    if mats.len() != index.len() {
        return Err(CorrelatorError::WrongCount {
            expected: index.len(),
            got: mats.len(),
        });
    }
    for (k, m) in mats.iter().enumerate() {
        if m.dim() != dim {
            return Err(CorrelatorError::DimensionMismatch { expected: dim, got: m.dim() });
        }
        if index.parities()[k].is_odd() && !m.is_zero() {
            return Err(CorrelatorError::OddOnePoint(index.labels()[k]));
        }
    }
    Ok(())
}

/// `⟨Δ_{a_1} … Δ_{a_n}⟩ = C_{a_1} ⋯ C_{a_n}` on nondecreasing sequences,
/// without checking anything about the matrices. Sequences touching an
/// odd index get zero.
pub fn product_family(index: &SuperIndexSet, order: usize, mats: &[Matrix]) -> Result<TopCorrelatorFamily, CorrelatorError> {
    let dim = mats.first().map_or(0, Matrix::dim);
    check_one_point(index, mats, dim)?;
    let mut out = TopCorrelatorFamily::new(index.clone(), dim, order);
    for n in 1..=order {
        for seq in index.sorted_tuples(n) {
            let positions: Vec<usize> = seq.iter().map(|&a| index.position(a).expect("known label")).collect();
            if positions.iter().any(|&k| index.parities()[k].is_odd()) {
                continue;
            }
            let v = positions.iter().fold(Matrix::identity(dim), |acc, &k| &acc * &mats[k]);
            out.insert(&seq, v)?;
        }
    }
    Ok(out)
}

/// [`product_family`] for pairwise commuting matrices, which satisfies all
/// the relations. Errors on the first non-commuting pair.
pub fn build_from_commuting(index: &SuperIndexSet, order: usize, mats: &[Matrix]) -> Result<TopCorrelatorFamily, CorrelatorError> {
    for a in 0..mats.len() {
        for b in a + 1..mats.len() {
            if !mats[a].commutator(&mats[b]).is_zero() {
                return Err(CorrelatorError::NotCommuting(index.labels()[a], index.labels()[b]));
            }
        }
    }
    product_family(index, order, mats)
}

/// `count` matrices `c_0 + c_1 M + c_2 M²` for one random `M` with small
/// integer entries, upper triangular with a random diagonal.
pub fn random_commuting_matrices(count: usize, dim: usize, seed: u64) -> Vec<Matrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Matrix::zero(dim);
    for i in 0..dim {
        for j in i..dim {
            m.set(i, j, q(rng.gen_range(-2..=2)));
        }
    }
    let m2 = &m * &m;
    (0..count)
        .map(|_| {
            let mut c = Matrix::identity(dim).scaled(&q(rng.gen_range(-2..=2)));
            c.add_scaled(&q(rng.gen_range(-2..=2)), &m);
            c.add_scaled(&q(rng.gen_range(-1..=1)), &m2);
            c
        })
        .collect()
}

/// `E_12` and `E_21`, whose commutator is `diag(1, −1)`.
pub fn noncommuting_pair() -> (Matrix, Matrix) {
    (
        Matrix::from_ints(&[&[0, 1], &[0, 0]]),
        Matrix::from_ints(&[&[0, 0], &[1, 0]]),
    )
}

/// `x^1 E_12 + x^2 E_21` in two even variables.
pub fn noncommuting_series(order: usize) -> TruncatedSeries {
    let index = SuperIndexSet::even(2);
    let (e12, e21) = noncommuting_pair();
    let mut s = TruncatedSeries::new(index.clone(), 2, order);
    s.add_term(Monomial::new(&index, vec![1, 0]).expect("valid"), &Q::one(), &e12)
        .expect("degree one");
    s.add_term(Monomial::new(&index, vec![0, 1]).expect("valid"), &Q::one(), &e21)
        .expect("degree one");
    s
}

/// `⟨Δ_{a_1} … Δ_{a_n}⟩ = w_{a_1} ⋯ w_{a_n} · D_n` for scalar weights and
/// one arbitrary matrix per level. The `D_n` need not commute: every
/// relation pairs terms with equal products. Odd indices need zero weight.
pub fn linear_form_family(index: &SuperIndexSet, weights: &[Q], levels: &[Matrix]) -> Result<TopCorrelatorFamily, CorrelatorError> {
    if weights.len() != index.len() {
        return Err(CorrelatorError::WrongCount {
            expected: index.len(),
            got: weights.len(),
        });
    }
    if let Some(k) = (0..index.len()).find(|&k| index.parities()[k].is_odd() && !weights[k].is_zero()) {
        return Err(CorrelatorError::OddOnePoint(index.labels()[k]));
    }
    let dim = levels.first().map_or(0, Matrix::dim);
    let mut out = TopCorrelatorFamily::new(index.clone(), dim, levels.len());
    for (n, d) in levels.iter().enumerate() {
        for seq in index.sorted_tuples(n + 1) {
            let w = seq
                .iter()
                .fold(Q::one(), |acc, &a| acc * &weights[index.position(a).expect("known label")]);
            if !w.is_zero() {
                out.insert(&seq, d.scaled(&w))?;
            }
        }
    }
    Ok(out)
}

/// `B = Σ_i f_i C_i` with `f_i` random even polynomials without constant
/// term and `C_i` commuting. Then `dB ∧ dB = Σ_{i,j} df_i ∧ df_j C_i C_j`
/// vanishes, since the `df_i` anticommute and the `C_i C_j` are symmetric.
pub fn scalar_series(index: &SuperIndexSet, dim: usize, order: usize, terms: usize, seed: u64) -> TruncatedSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mats = random_commuting_matrices(terms, dim, rng.gen());
    let mut out = TruncatedSeries::new(index.clone(), dim, order);
    for c in &mats {
        for degree in 1..=order {
            for _ in 0..2 {
                let word: Vec<usize> = (0..degree).map(|_| rng.gen_range(0..index.len())).collect();
                let Some((_, m)) = Monomial::from_word(index, &word) else { continue };
                if m.odd_count(index) % 2 == 1 {
                    continue;
                }
                let coeff = q(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
                out.add_term(m, &coeff, c).expect("matching dimension");
            }
        }
    }
    out
}

/// Extends one-point values to a family of the given order satisfying all
/// the relations, level by level through [`extend_level`].
///
/// A choice made at one level can leave the next level without solutions.
/// The whole chain is then redone with fresh random coefficients, then with
/// all free coefficients zero, and finally replaced by the product family
/// of the one-point values, which always extends.
pub fn solve_order_by_order(
    index: &SuperIndexSet,
    order: usize,
    one_point: &[Matrix],
    seed: u64,
) -> Result<TopCorrelatorFamily, CorrelatorError> {
    if order == 0 {
        return Err(CorrelatorError::OrderTooLow(1));
    }
    let base = build_from_commuting(index, 1, one_point)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const RANDOM_ATTEMPTS: usize = 4;
    for attempt in 0..=RANDOM_ATTEMPTS {
        let mut top = base.clone();
        let mut ok = true;
        for _ in 2..=order {
            let next = if attempt < RANDOM_ATTEMPTS {
                extend_level(&top, Some(&mut rng))
            } else {
                extend_level(&top, None)
            };
            match next {
                Ok(t) => top = t,
                Err(CorrelatorError::Unsolvable(_)) => {
                    ok = false;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if ok {
            return Ok(top);
        }
    }
    build_from_commuting(index, order, one_point)
}

/// Adds level `order + 1` to `top`, solving it from the relations among top
/// values one level higher. Free directions get coefficients drawn from
/// `-2..=2`, or zero without a generator.
pub fn extend_level(top: &TopCorrelatorFamily, rng: Option<&mut ChaCha8Rng>) -> Result<TopCorrelatorFamily, CorrelatorError> {
    let index = top.index();
    let dim = top.dim();
    let n = top.order() + 1;
    let unknowns: Vec<Vec<Label>> = index
        .sorted_tuples(n)
        .into_iter()
        .filter(|seq| {
            let par = index.parities_of(seq).expect("known labels");
            let odd = par.iter().filter(|p| p.is_odd()).count();
            odd % 2 == 0 && sort_with_sign(seq, &par).is_some()
        })
        .collect();
    let slot: BTreeMap<&Vec<Label>, usize> = unknowns.iter().enumerate().map(|(k, s)| (s, k)).collect();
    let d2 = dim * dim;
    let nvars = unknowns.len() * d2;
    let equations = level_equations(top, n, &slot, dim)?;
    let solution = solve_affine(nvars, equations).ok_or(CorrelatorError::Unsolvable(n))?;
    let params: Vec<Q> = match rng {
        Some(rng) => (0..solution.kernel.len()).map(|_| q(rng.gen_range(-2..=2))).collect(),
        None => Vec::new(),
    };
    let values = solution.at(&params);
    let mut grown = TopCorrelatorFamily::new(index.clone(), dim, n);
    for (seq, v) in top.entries() {
        grown.insert(seq, v.clone())?;
    }
    for (k, seq) in unknowns.iter().enumerate() {
        let rows = values[k * d2..(k + 1) * d2].chunks(dim).map(<[Q]>::to_vec).collect();
        grown.insert(seq, Matrix::from_rows(rows).expect("square"))?;
    }
    Ok(grown)
}

/// One side of a product term: a known matrix or an unknown level-`n`
/// value with its sign.
enum Factor {
    Known(Matrix),
    Unknown(usize, i32),
}

fn level_equations(
    top: &TopCorrelatorFamily,
    n: usize,
    slot: &BTreeMap<&Vec<Label>, usize>,
    dim: usize,
) -> Result<Vec<Equation>, CorrelatorError> {
    let index = top.index();
    let m = n + 1;
    let labels = LabelSet::range(m);
    let sigmas = two_partitions(&labels);
    let mut equations = Vec::new();
    for a in index.sorted_tuples(m) {
        let parities = index.parities_of(&a)?;
        let factor = |pos: &[usize]| -> Result<Option<Factor>, CorrelatorError> {
            let seq: Vec<Label> = pos.iter().map(|&k| a[k]).collect();
            if pos.len() < n {
                return Ok(top.lookup(&seq)?.map(Factor::Known));
            }
            let par: Vec<Parity> = pos.iter().map(|&k| parities[k]).collect();
            let Some((s, sorted)) = sort_with_sign(&seq, &par) else { return Ok(None) };
            Ok(slot.get(&sorted).map(|&v| Factor::Unknown(v, s)))
        };
        let mut terms = Vec::with_capacity(sigmas.len());
        for s in &sigmas {
            let first: Vec<usize> = s.first().iter().map(|&l| l as usize - 1).collect();
            let second: Vec<usize> = s.second().iter().map(|&l| l as usize - 1).collect();
            let concat: Vec<usize> = first.iter().chain(&second).copied().collect();
            let eps = koszul_sign(&concat, &parities);
            terms.push(match (factor(&first)?, factor(&second)?) {
                (Some(x), Some(y)) => Some((eps, x, y)),
                _ => None,
            });
        }
        for i in 1..=m as Label {
            for j in i + 1..=m as Label {
                let mut rows: Vec<Equation> = vec![Equation::default(); dim * dim];
                for (s, t) in sigmas.iter().zip(&terms) {
                    let Some((eps, x, y)) = t else { continue };
                    let side = match separates(s.as_partition(), i, j).expect("labels 1..m") {
                        Some(std::cmp::Ordering::Less) => 1,
                        Some(std::cmp::Ordering::Greater) => -1,
                        _ => continue,
                    };
                    let sign = q((side * eps) as i64);
                    add_product(&mut rows, &sign, x, y, dim);
                }
                equations.extend(rows.into_iter().filter(|e| !e.coeffs.is_empty() || !e.rhs.is_zero()));
            }
        }
    }
    Ok(equations)
}

/// Adds `sign · x · y` to the entry equations `Σ coeffs·u = rhs`.
fn add_product(rows: &mut [Equation], sign: &Q, x: &Factor, y: &Factor, dim: usize) {
    let d2 = dim * dim;
    for p in 0..dim {
        for r in 0..dim {
            let row = &mut rows[p * dim + r];
            match (x, y) {
                (Factor::Known(u), Factor::Known(v)) => {
                    let mut s = Q::zero();
                    for k in 0..dim {
                        s += u.get(p, k) * v.get(k, r);
                    }
                    row.rhs -= sign * s;
                }
                (Factor::Unknown(var, s), Factor::Known(v)) => {
                    for k in 0..dim {
                        let c = v.get(k, r);
                        if !c.is_zero() {
                            bump(&mut row.coeffs, var * d2 + p * dim + k, &(sign * c * q(*s as i64)));
                        }
                    }
                }
                (Factor::Known(u), Factor::Unknown(var, s)) => {
                    for k in 0..dim {
                        let c = u.get(p, k);
                        if !c.is_zero() {
                            bump(&mut row.coeffs, var * d2 + k * dim + r, &(sign * c * q(*s as i64)));
                        }
                    }
                }
                (Factor::Unknown(..), Factor::Unknown(..)) => unreachable!("both factors unknown only at level one"),
            }
        }
    }
}

fn bump(coeffs: &mut SparseVec, k: usize, c: &Q) {
    let slot = coeffs.entry(k).or_insert_with(Q::zero);
    *slot += c;
    if slot.is_zero() {
        coeffs.remove(&k);
    }
}
