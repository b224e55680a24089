//! Dense square matrices over the rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format_q, parse_q, q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    dim: usize,
    entries: Vec<Q>,
}

impl Matrix {
    pub fn zero(dim: usize) -> Self {
        Matrix {
            dim,
            entries: vec![Q::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self, String> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(format!("matrix with {dim} rows is not square"));
        }
        Ok(Matrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).expect("square input")
    }

    /// Entries drawn uniformly from `-bound..=bound`.
    pub fn random<R: Rng>(dim: usize, bound: i64, rng: &mut R) -> Self {
        Matrix {
            dim,
            entries: (0..dim * dim).map(|_| q(rng.gen_range(-bound..=bound))).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[Q] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Q>> {
        self.entries.chunks(self.dim.max(1)).take(self.dim).map(<[Q]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, s: &Q) -> Self {
        Matrix {
            dim: self.dim,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add_scaled(&mut self, s: &Q, other: &Matrix) {
        debug_assert_eq!(self.dim, other.dim);
        for (x, y) in self.entries.iter_mut().zip(&other.entries) {
            if !y.is_zero() {
                *x += s * y;
            }
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.dim), |acc, _| &acc * self)
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &Matrix) -> Self {
        &(self * other) - &(other * self)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        let d = self.dim;
        let mut out = Matrix::zero(d);
        for i in 0..d {
            for k in 0..d {
                let a = &self.entries[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &rhs.entries[k * d + j];
                    if !b.is_zero() {
                        out.entries[i * d + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl AddAssign<&Matrix> for Matrix {
    fn add_assign(&mut self, rhs: &Matrix) {
        debug_assert_eq!(self.dim, rhs.dim);
        for (x, y) in self.entries.iter_mut().zip(&rhs.entries) {
            if !y.is_zero() {
                *x += y;
            }
        }
    }
}

impl SubAssign<&Matrix> for Matrix {
    fn sub_assign(&mut self, rhs: &Matrix) {
        debug_assert_eq!(self.dim, rhs.dim);
        for (x, y) in self.entries.iter_mut().zip(&rhs.entries) {
            if !y.is_zero() {
                *x -= y;
            }
        }
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scaled(&-Q::one())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(format_q).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.rows().iter().map(|r| r.iter().map(format_q).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|x| parse_q(x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Matrix::from_rows(parsed).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;

    #[test]
    fn arithmetic() {
        let a = Matrix::from_ints(&[&[1, 2], &[0, 1]]);
        let b = Matrix::from_ints(&[&[0, 0], &[1, 0]]);
        assert_eq!(&a * &b, Matrix::from_ints(&[&[2, 0], &[1, 0]]));
        assert!(!a.commutator(&b).is_zero());
        assert!(a.commutator(&a.pow(3)).is_zero());
        assert_eq!(a.pow(0), Matrix::identity(2));
        assert!((&a - &a).is_zero());
        assert_eq!(format!("{a}"), "[1 2; 0 1]");
    }

    #[test]
    fn json() {
        let mut m = Matrix::zero(2);
        m.set(0, 1, q_frac(-1, 3));
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["0","-1/3"],["0","0"]]"#);
        assert_eq!(serde_json::from_str::<Matrix>(&s).unwrap(), m);
        assert!(serde_json::from_str::<Matrix>(r#"[["1","2"]]"#).is_err());
    }
}
