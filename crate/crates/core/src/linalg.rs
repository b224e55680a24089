//! Exact linear algebra over Q and Z.
//!
//! Three tools live here:
//!
//! * [`RowSpace`], an incrementally built echelon basis of sparse rational
//!   rows, used for membership tests in relation spans;
//! * [`rank_fraction_free`], Bareiss elimination on integer matrices;
//! * [`smith_diagonal`], the invariant factors of an integer matrix.
//!
//! [`solve_affine`] builds on `RowSpace` to describe the full solution set of
//! a sparse linear system.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Q;

/// Sparse vector: column index to nonzero coefficient.
pub type SparseVec = BTreeMap<usize, Q>;

pub fn axpy(target: &mut SparseVec, scale: &Q, row: &[(usize, Q)]) {
    for (c, v) in row {
        let entry = target.entry(*c).or_insert_with(Q::zero);
        *entry += scale * v;
        if entry.is_zero() {
            target.remove(c);
        }
    }
}

/// Echelon basis of a subspace of Q^ncols.
///
/// Every stored row is normalized so that its leading (pivot) coefficient is
/// one and all of its other entries sit in larger columns.
#[derive(Debug, Clone, Default)]
pub struct RowSpace {
    ncols: usize,
    rows: BTreeMap<usize, Vec<(usize, Q)>>,
}

impl RowSpace {
    pub fn new(ncols: usize) -> Self {
        RowSpace {
            ncols,
            rows: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Echelon rows in pivot order.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &[(usize, Q)])> + '_ {
        self.rows.iter().map(|(p, r)| (*p, r.as_slice()))
    }

    /// Residual of `v` after eliminating every pivot column.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).next().map(|(c, x)| (*c, x.clone()));
            let Some((col, coeff)) = next else { break };
            if let Some(row) = self.rows.get(&col) {
                axpy(&mut v, &(-coeff), row);
            }
            cursor = col + 1;
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.keys().all(|&c| c < self.ncols));
        let r = self.reduce(v);
        let Some((&pivot, lead)) = r.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        let row = r.iter().map(|(c, x)| (*c, x * &inv)).collect();
        self.rows.insert(pivot, row);
        true
    }
}

/// Rank of an integer matrix by Bareiss fraction-free elimination.
pub fn rank_fraction_free(matrix: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = v / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Nonzero invariant factors of an integer matrix, in divisibility order.
pub fn smith_diagonal(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let nrows = m.len();
    let ncols = if nrows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry of the remaining block as pivot
        let mut best: Option<(usize, usize)> = None;
        for r in t..nrows {
            for c in t..ncols {
                if !m[r][c].is_zero()
                    && best.map_or(true, |(br, bc)| m[r][c].abs() < m[br][bc].abs())
                {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        let mut clean = true;
        for r in t + 1..nrows {
            let f = m[r][t].div_floor(&m[t][t]);
            if !f.is_zero() {
                for c in t..ncols {
                    let v = &m[t][c] * &f;
                    m[r][c] -= v;
                }
            }
            clean &= m[r][t].is_zero();
        }
        for c in t + 1..ncols {
            let f = m[t][c].div_floor(&m[t][t]);
            if !f.is_zero() {
                for r in t..nrows {
                    let v = &m[r][t] * &f;
                    m[r][c] -= v;
                }
            }
            clean &= m[t][c].is_zero();
        }
        if !clean {
            continue;
        }
        // the pivot must divide the whole remaining block
        let offender = (t + 1..nrows)
            .flat_map(|r| (t + 1..ncols).map(move |c| (r, c)))
            .find(|&(r, c)| !m[r][c].is_multiple_of(&m[t][t]));
        if let Some((r, _)) = offender {
            for c in t..ncols {
                let v = m[r][c].clone();
                m[t][c] += v;
            }
            continue;
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

/// A sparse linear equation `sum coeffs[k] * u_k = rhs`.
#[derive(Debug, Clone, Default)]
pub struct Equation {
    pub coeffs: SparseVec,
    pub rhs: Q,
}

/// Solution set `{particular + sum t_k * kernel[k]}` of a linear system.
#[derive(Debug, Clone)]
pub struct AffineSolution {
    pub particular: Vec<Q>,
    pub kernel: Vec<Vec<Q>>,
}

impl AffineSolution {
    /// The solution at the given kernel parameters.
    pub fn at(&self, params: &[Q]) -> Vec<Q> {
        let mut out = self.particular.clone();
        for (t, basis) in params.iter().zip(&self.kernel) {
            for (o, b) in out.iter_mut().zip(basis) {
                *o += t * b;
            }
        }
        out
    }
}

/// Solves a system in `nvars` unknowns; `None` when it is inconsistent.
pub fn solve_affine(nvars: usize, equations: impl IntoIterator<Item = Equation>) -> Option<AffineSolution> {
    let mut space = RowSpace::new(nvars + 1);
    for eq in equations {
        let mut row = eq.coeffs;
        if !eq.rhs.is_zero() {
            row.insert(nvars, eq.rhs);
        }
        space.insert(row);
    }
    if space.rows.contains_key(&nvars) {
        return None;
    }
    let free: Vec<usize> = (0..nvars).filter(|c| !space.rows.contains_key(c)).collect();
    let back_substitute = |free_values: &dyn Fn(usize) -> Q, with_rhs: bool| -> Vec<Q> {
        let mut u = vec![Q::zero(); nvars];
        for &f in &free {
            u[f] = free_values(f);
        }
        for (&p, row) in space.rows.iter().rev() {
            let mut val = Q::zero();
            for (c, x) in row.iter().skip(1) {
                if *c == nvars {
                    if with_rhs {
                        val += x;
                    }
                } else {
                    val -= x * &u[*c];
                }
            }
            u[p] = val;
        }
        u
    };
    let particular = back_substitute(&|_| Q::zero(), true);
    let kernel = free
        .iter()
        .map(|&k| back_substitute(&|f| if f == k { Q::one() } else { Q::zero() }, false))
        .collect();
    Some(AffineSolution { particular, kernel })
}
