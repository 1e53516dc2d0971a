use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::zn;

/// Dense row-major matrix over Z/m.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResMatrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    data: Vec<u64>,
}

impl ResMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        ResMatrix { rows, cols, modulus, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; entries are reduced modulo `modulus`.
    pub fn from_rows(modulus: u64, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols, modulus);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged row {i}");
            for (j, &v) in r.iter().enumerate() {
                m.data[i * cols + j] = v % modulus;
            }
        }
        m
    }

    pub fn from_signed_rows(modulus: u64, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let converted: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| zn::from_i128(v as i128, modulus)).collect())
            .collect();
        Self::from_rows(modulus, cols, &converted)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.modulus;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.modulus);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// `self · x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        let m = self.modulus;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(0u64, |acc, (&a, &b)| zn::add(acc, zn::mul(a, b, m), m))
            })
            .collect()
    }

    /// `x · self` for a row vector `x`.
    pub fn vec_mul(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rows);
        let m = self.modulus;
        let mut out = vec![0u64; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi % m == 0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = zn::add(*o, zn::mul(xi, a, m), m);
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.modulus, other.modulus);
        let mut out = Self::zeros(self.rows, other.cols, self.modulus);
        for i in 0..self.rows {
            let r = other.vec_mul(self.row(i));
            out.data[i * other.cols..(i + 1) * other.cols].copy_from_slice(&r);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }
}

impl fmt::Display for ResMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Dense matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged row {i}");
            for (j, &v) in r.iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}
