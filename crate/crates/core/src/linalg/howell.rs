//! Howell normal form over Z/m and the span arithmetic built on it.
//!
//! A [`SpanBasis`] is the Howell form of a row span: echelon rows whose pivots
//! divide the modulus, entries above each pivot reduced into `[0, pivot)`, and
//! the Howell property (every vector of the span that vanishes on the first
//! `c + 1` columns lies in the span of the rows pivoting after column `c`).
//! Two spans are equal exactly when their forms are identical.

use serde::{Deserialize, Serialize};

use super::matrix::ResMatrix;
use super::zn;
use crate::error::{Error, Result};

/// Canonical basis of a Z/m-submodule of (Z/m)^dim.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpanBasis {
    modulus: u64,
    dim: usize,
    rows: Vec<Vec<u64>>,
    #[serde(skip)]
    pivots: Vec<usize>,
}

fn is_zero(v: &[u64]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// `dst += k * src` in Z/m.
fn axpy(dst: &mut [u64], k: u64, src: &[u64], m: u64) {
    if k % m == 0 {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = zn::add(*d, zn::mul(k, s, m), m);
    }
}

fn scaled(k: u64, v: &[u64], m: u64) -> Vec<u64> {
    v.iter().map(|&x| zn::mul(k, x, m)).collect()
}

/// Howell normal form of the row span of `rows`.
pub fn howell_form(rows: &ResMatrix) -> SpanBasis {
    SpanBasis::from_generators(rows.modulus(), rows.cols(), rows.to_rows())
}

impl SpanBasis {
    pub fn zero(modulus: u64, dim: usize) -> Self {
        SpanBasis { modulus, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(modulus: u64, dim: usize) -> Self {
        let rows: Vec<Vec<u64>> = (0..dim)
            .map(|i| {
                let mut r = vec![0u64; dim];
                r[i] = 1 % modulus;
                r
            })
            .collect();
        Self::from_generators(modulus, dim, rows)
    }

    /// Canonical span of arbitrary generators (entries are reduced mod `modulus`).
    pub fn from_generators<I>(modulus: u64, dim: usize, generators: I) -> Self
    where
        I: IntoIterator<Item = Vec<u64>>,
    {
        let m = modulus;
        let mut pool: Vec<Vec<u64>> = generators
            .into_iter()
            .map(|mut r| {
                assert_eq!(r.len(), dim, "generator has wrong length");
                r.iter_mut().for_each(|x| *x %= m);
                r
            })
            .filter(|r| !is_zero(r))
            .collect();
        let mut result: Vec<Vec<u64>> = Vec::new();
        let mut pivots = Vec::new();

        for c in 0..dim {
            let mut pivot: Option<Vec<u64>> = None;
            let mut rest = Vec::with_capacity(pool.len());
            for row in pool.drain(..) {
                if row[c] == 0 {
                    rest.push(row);
                    continue;
                }
                match pivot.take() {
                    None => pivot = Some(row),
                    Some(p) => {
                        let (g, s, t) = zn::xgcd(p[c], row[c]);
                        let (a_g, b_g) = (p[c] / g, row[c] / g);
                        let mut new_p = scaled(zn::from_i128(s, m), &p, m);
                        axpy(&mut new_p, zn::from_i128(t, m), &row, m);
                        let mut other = scaled(zn::neg(b_g, m), &p, m);
                        axpy(&mut other, a_g, &row, m);
                        debug_assert_eq!(other[c], 0);
                        if !is_zero(&other) {
                            rest.push(other);
                        }
                        pivot = Some(new_p);
                    }
                }
            }
            pool = rest;
            let Some(p) = pivot else { continue };
            let mut p = scaled(zn::normalizing_unit(p[c], m), &p, m);
            let g = p[c];
            debug_assert!(g != 0 && m % g == 0);
            let ann = scaled(m / g, &p, m);
            if !is_zero(&ann) {
                pool.push(ann);
            }
            for r in result.iter_mut() {
                let q = r[c] / g;
                if q > 0 {
                    axpy(r, zn::neg(q, m), &p, m);
                }
            }
            // keep entries canonical
            p.iter_mut().for_each(|x| *x %= m);
            result.push(p);
            pivots.push(c);
        }
        debug_assert!(pool.iter().all(|r| is_zero(r)));
        SpanBasis { modulus, dim, rows: result, pivots }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Number of rows in the canonical form.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn as_matrix(&self) -> ResMatrix {
        ResMatrix::from_rows(self.modulus, self.dim, &self.rows)
    }

    /// Additive order of each row's coefficient range, `m / pivot`.
    pub fn coefficient_ranges(&self) -> Vec<u64> {
        self.rows
            .iter()
            .zip(&self.pivots)
            .map(|(r, &c)| self.modulus / r[c])
            .collect()
    }

    /// Number of elements of the span; `None` on u128 overflow.
    pub fn size(&self) -> Option<u128> {
        self.coefficient_ranges()
            .into_iter()
            .try_fold(1u128, |acc, k| acc.checked_mul(k as u128))
    }

    /// Reduces `v` against the basis; returns the residual and the coefficients used.
    pub fn reduce(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        assert_eq!(v.len(), self.dim, "vector has wrong length");
        let m = self.modulus;
        let mut v: Vec<u64> = v.iter().map(|&x| x % m).collect();
        let mut coeffs = vec![0u64; self.rows.len()];
        for (i, (r, &c)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let g = r[c];
            if v[c] % g != 0 {
                continue;
            }
            let q = v[c] / g;
            if q > 0 {
                axpy(&mut v, zn::neg(q, m), r, m);
                coeffs[i] = q;
            }
        }
        (v, coeffs)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        is_zero(&self.reduce(v).0)
    }

    /// Coefficients `c` with `Σ c_i row_i = v`, or `None` if `v` is outside the span.
    pub fn coefficients(&self, v: &[u64]) -> Option<Vec<u64>> {
        let (res, c) = self.reduce(v);
        is_zero(&res).then_some(c)
    }

    pub fn combine(&self, coeffs: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.dim];
        for (r, &c) in self.rows.iter().zip(coeffs) {
            axpy(&mut out, c, r, self.modulus);
        }
        out
    }

    pub fn is_subset_of(&self, other: &SpanBasis) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &SpanBasis) -> SpanBasis {
        assert_eq!((self.modulus, self.dim), (other.modulus, other.dim));
        Self::from_generators(
            self.modulus,
            self.dim,
            self.rows.iter().chain(&other.rows).cloned(),
        )
    }

    pub fn intersect(&self, other: &SpanBasis) -> SpanBasis {
        assert_eq!((self.modulus, self.dim), (other.modulus, other.dim));
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.modulus, self.dim);
        }
        // a·X = b·Y  <=>  (a, b) in left kernel of [X; -Y]
        let m = self.modulus;
        let mut stacked = self.rows.clone();
        stacked.extend(
            other
                .rows
                .iter()
                .map(|r| r.iter().map(|&x| zn::neg(x, m)).collect::<Vec<_>>()),
        );
        let ker = left_kernel(&ResMatrix::from_rows(m, self.dim, &stacked));
        let k = self.rows.len();
        Self::from_generators(
            m,
            self.dim,
            ker.rows.iter().map(|c| self.combine(&c[..k])),
        )
    }

    /// Span of `k · v` for `v` in the span.
    pub fn scale(&self, k: u64) -> SpanBasis {
        Self::from_generators(
            self.modulus,
            self.dim,
            self.rows.iter().map(|r| scaled(k, r, self.modulus)),
        )
    }

    /// All elements, each exactly once.
    pub fn elements(&self) -> SpanElements<'_> {
        SpanElements {
            span: self,
            ranges: self.coefficient_ranges(),
            counter: vec![0; self.rows.len()],
            done: false,
        }
    }
}

/// Iterator over the elements of a span in mixed-radix coefficient order.
pub struct SpanElements<'a> {
    span: &'a SpanBasis,
    ranges: Vec<u64>,
    counter: Vec<u64>,
    done: bool,
}

impl Iterator for SpanElements<'_> {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.span.combine(&self.counter);
        let mut i = self.counter.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.counter[i] += 1;
            if self.counter[i] < self.ranges[i] {
                break;
            }
            self.counter[i] = 0;
        }
        Some(out)
    }
}

/// Row vectors `x` with `x · mat = 0`, as a canonical span in (Z/m)^rows.
pub fn left_kernel(mat: &ResMatrix) -> SpanBasis {
    let (r, c, m) = (mat.rows(), mat.cols(), mat.modulus());
    let aug = augmented(mat);
    let h = SpanBasis::from_generators(m, c + r, aug);
    SpanBasis::from_generators(
        m,
        r,
        h.rows
            .iter()
            .zip(&h.pivots)
            .filter(|(_, &p)| p >= c)
            .map(|(row, _)| row[c..].to_vec()),
    )
}

fn augmented(mat: &ResMatrix) -> Vec<Vec<u64>> {
    let (r, c, m) = (mat.rows(), mat.cols(), mat.modulus());
    (0..r)
        .map(|i| {
            let mut row = Vec::with_capacity(c + r);
            row.extend_from_slice(mat.row(i));
            row.extend((0..r).map(|j| u64::from(i == j) % m));
            row
        })
        .collect()
}

/// One solution `x` of `x · mat = b`, if any exists.
pub fn solve_left(mat: &ResMatrix, b: &[u64]) -> Option<Vec<u64>> {
    let (r, c, m) = (mat.rows(), mat.cols(), mat.modulus());
    assert_eq!(b.len(), c, "right-hand side has wrong length");
    let h = SpanBasis::from_generators(m, c + r, augmented(mat));
    let mut v: Vec<u64> = b.iter().map(|&x| x % m).chain(std::iter::repeat(0).take(r)).collect();
    for (row, &p) in h.rows.iter().zip(&h.pivots) {
        if p >= c {
            break;
        }
        let g = row[p];
        if v[p] % g != 0 {
            return None;
        }
        let q = v[p] / g;
        axpy(&mut v, zn::neg(q, m), row, m);
    }
    if !is_zero(&v[..c]) {
        return None;
    }
    Some(v[c..].iter().map(|&x| zn::neg(x, m)).collect())
}

/// Solution of the column system `A · x = b` together with the kernel of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: Option<Vec<u64>>,
    pub kernel: SpanBasis,
}

pub fn solve_linear(a: &ResMatrix, b: &[u64]) -> Result<LinearSolution> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let at = a.transpose();
    Ok(LinearSolution {
        particular: solve_left(&at, b),
        kernel: left_kernel(&at),
    })
}

/// Additive closure of `{x · y}` over basis rows of `x` and `y` under a bilinear map.
pub fn span_product<F>(x: &SpanBasis, y: &SpanBasis, out_dim: usize, mul: F) -> SpanBasis
where
    F: Fn(&[u64], &[u64]) -> Vec<u64>,
{
    assert_eq!(x.modulus, y.modulus);
    let gens: Vec<Vec<u64>> = x
        .rows
        .iter()
        .flat_map(|a| y.rows.iter().map(|b| mul(a, b)).collect::<Vec<_>>())
        .collect();
    SpanBasis::from_generators(x.modulus, out_dim, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn brute_span(m: u64, dim: usize, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
        let mut set = BTreeSet::new();
        set.insert(vec![0; dim]);
        loop {
            let mut grew = false;
            let current: Vec<_> = set.iter().cloned().collect();
            for v in &current {
                for g in gens {
                    let w: Vec<u64> = v.iter().zip(g).map(|(a, b)| (a + b) % m).collect();
                    grew |= set.insert(w);
                }
            }
            if !grew {
                return set;
            }
        }
    }

    #[test]
    fn howell_of_2_0_0_3_mod_6() {
        let rows = vec![vec![2, 0], vec![0, 3]];
        let h = SpanBasis::from_generators(6, 2, rows.clone());
        let expected = brute_span(6, 2, &rows);
        let got: BTreeSet<_> = h.elements().collect();
        assert_eq!(got, expected);
        assert_eq!(expected.len(), 6);
        assert_eq!(h.rows(), &[vec![2, 0], vec![0, 3]]);
    }

    #[test]
    fn zero_and_full() {
        let z = SpanBasis::from_generators(5, 3, vec![vec![0, 0, 0], vec![5, 10, 0]]);
        assert!(z.is_zero());
        let f = SpanBasis::from_generators(7, 2, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(f, SpanBasis::full(7, 2));
        assert_eq!(f.rows(), &[vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn howell_property_needs_annihilator_rows() {
        // (2,1) over Z/4: its double (0,2) must appear as its own row.
        let h = SpanBasis::from_generators(4, 2, vec![vec![2, 1]]);
        assert_eq!(h.rows(), &[vec![2, 1], vec![0, 2]]);
        assert!(h.contains(&[0, 2]));
        assert_eq!(h.size(), Some(4));
    }

    #[test]
    fn solve_examples() {
        let a = ResMatrix::from_rows(6, 1, &[vec![4]]);
        let s = solve_linear(&a, &[2]).unwrap();
        let x = s.particular.unwrap();
        assert_eq!(zn::mul(4, x[0], 6), 2);
        // the kernel of ×4 on Z/6 is {0, 3}
        assert_eq!(s.kernel.elements().collect::<BTreeSet<_>>().len(), 2);

        let a = ResMatrix::from_rows(4, 1, &[vec![2]]);
        assert!(solve_linear(&a, &[1]).unwrap().particular.is_none());

        let id = ResMatrix::identity(3, 9);
        let s = solve_linear(&id, &[4, 7, 1]).unwrap();
        assert_eq!(s.particular, Some(vec![4, 7, 1]));
        assert!(s.kernel.is_zero());

        assert!(matches!(
            solve_linear(&id, &[1, 2]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn intersection_matches_sets() {
        let x = SpanBasis::from_generators(12, 2, vec![vec![2, 0], vec![0, 3]]);
        let y = SpanBasis::from_generators(12, 2, vec![vec![3, 3]]);
        let xs: BTreeSet<_> = x.elements().collect();
        let ys: BTreeSet<_> = y.elements().collect();
        let both: BTreeSet<_> = xs.intersection(&ys).cloned().collect();
        let got: BTreeSet<_> = x.intersect(&y).elements().collect();
        assert_eq!(got, both);
    }

    #[test]
    fn span_product_examples() {
        let mul4 = |a: &[u64], b: &[u64]| vec![(a[0] * b[0]) % 4];
        let full = SpanBasis::full(4, 1);
        assert_eq!(span_product(&full, &full, 1, mul4), full);
        let two = SpanBasis::from_generators(4, 1, vec![vec![2]]);
        assert!(span_product(&two, &two, 1, mul4).is_zero());
    }
}
