//! Jacobson radical via reduction to F_p-algebras.
//!
//! For each prime p dividing the modulus, `A = R/pR` is a finite-dimensional
//! F_p-algebra and `Jac(R)` is the intersection over p of the preimages of
//! `Rad(A)`. The radical of `A` is computed with the lifted-trace method of
//! Cohen, Ivanyos and Wales on the left regular representation, which needs
//! no factorisation of polynomials and works in every characteristic.

use serde::Serialize;

use super::FiniteRing;
use crate::linalg::{left_kernel, zn, Layout, LayoutMap, ResMatrix, SpanBasis};

/// `Jac(R) ⊋ Jac(R)^2 ⊋ … ⊋ Jac(R)^n = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadicalChain {
    pub radical: SpanBasis,
    /// `Jac, Jac², …, Jacⁿ = 0`; empty when the radical is already zero.
    pub chain: Vec<SpanBasis>,
    /// Least `n ≥ 1` with `Jacⁿ = 0`, or 0 when `Jac = 0`.
    pub nilpotency_index: usize,
}

pub fn jacobson_radical(r: &FiniteRing) -> SpanBasis {
    let mut jac = r.full_span();
    for (p, _) in zn::factor(r.modulus()) {
        jac = jac.intersect(&p_radical_preimage(r, p));
    }
    jac
}

pub fn radical_power_chain(r: &FiniteRing) -> RadicalChain {
    let radical = jacobson_radical(r);
    let mut chain = Vec::new();
    if !radical.is_zero() {
        let mut cur = radical.clone();
        loop {
            chain.push(cur.clone());
            if cur.is_zero() {
                break;
            }
            let next = r.span_mul(&cur, &radical);
            assert!(next != cur, "radical power chain stalled: radical is not nilpotent");
            cur = next;
        }
    }
    let nilpotency_index = chain.len();
    RadicalChain { radical, chain, nilpotency_index }
}

/// Preimage in R of `Rad(R/pR)`.
fn p_radical_preimage(r: &FiniteRing, p: u64) -> SpanBasis {
    let idx: Vec<usize> = (0..r.dim()).filter(|&i| r.orders()[i] % p == 0).collect();
    let n = idx.len();
    if n == 0 {
        return r.full_span();
    }
    let algebra = FpAlgebra::new(r, p, &idx);
    let rad = algebra.radical();
    let images = (0..r.dim())
        .map(|i| {
            let mut v = vec![0; n];
            if let Some(pos) = idx.iter().position(|&k| k == i) {
                v[pos] = 1;
            }
            v
        })
        .collect();
    let proj = LayoutMap::new(r.layout().clone(), Layout::free(p, n), images)
        .expect("reduction mod p is well defined");
    proj.preimage(&SpanBasis::from_generators(p, n, rad))
}

/// Structure constants of an F_p-algebra, lifted to integers in `[0, p)`.
struct FpAlgebra {
    p: u64,
    n: usize,
    // c[a][b] = coordinates of a_a · a_b
    c: Vec<Vec<Vec<u64>>>,
}

impl FpAlgebra {
    fn new(r: &FiniteRing, p: u64, idx: &[usize]) -> Self {
        let c = idx
            .iter()
            .map(|&a| {
                idx.iter()
                    .map(|&b| {
                        let prod = r.basis_product(a, b);
                        idx.iter().map(|&k| prod[k] % p).collect()
                    })
                    .collect()
            })
            .collect();
        FpAlgebra { p, n: idx.len(), c }
    }

    fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0; self.n];
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            for (b, &yb) in y.iter().enumerate() {
                if yb == 0 {
                    continue;
                }
                let s = zn::mul(xa, yb, p);
                for (o, &v) in out.iter_mut().zip(&self.c[a][b]) {
                    *o = zn::add(*o, zn::mul(s, v, p), p);
                }
            }
        }
        out
    }

    /// Integer lift of the left regular representation of `z`, reduced mod `q`.
    fn lifted_left_matrix(&self, z: &[u64], q: u64) -> ResMatrix {
        let n = self.n;
        let mut m = ResMatrix::zeros(n, n, q);
        for (a, &za) in z.iter().enumerate() {
            if za == 0 {
                continue;
            }
            for col in 0..n {
                for (row, &v) in self.c[a][col].iter().enumerate() {
                    if v != 0 {
                        let cur = m.get(row, col);
                        m.set(row, col, zn::add(cur, zn::mul(za, v, q), q));
                    }
                }
            }
        }
        m
    }

    /// `(Tr(L̃_z^{p^i}) mod p^{i+1}) / p^i`, as an element of F_p.
    fn lifted_trace(&self, z: &[u64], i: u32) -> u64 {
        let pi = self.p.pow(i);
        let q = pi * self.p;
        let base = self.lifted_left_matrix(z, q);
        let mut acc = ResMatrix::identity(self.n, q);
        let mut b = base;
        let mut e = pi;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.matmul(&b);
            }
        }
        let tr = (0..self.n).fold(0, |t, k| zn::add(t, acc.get(k, k), q));
        debug_assert_eq!(tr % pi, 0);
        (tr / pi) % self.p
    }

    fn radical(&self) -> Vec<Vec<u64>> {
        let (p, n) = (self.p, self.n);
        let mut l = 0u32;
        while (p as u128).pow(l + 1) <= n as u128 {
            l += 1;
        }
        let units: Vec<Vec<u64>> = (0..n)
            .map(|k| {
                let mut e = vec![0; n];
                e[k] = 1;
                e
            })
            .collect();
        let mut basis = units.clone();
        for i in 0..=l {
            if basis.is_empty() {
                break;
            }
            let g: Vec<Vec<u64>> = basis
                .iter()
                .map(|x| units.iter().map(|y| self.lifted_trace(&self.mul(x, y), i)).collect())
                .collect();
            let ker = left_kernel(&ResMatrix::from_rows(p, n, &g));
            basis = ker
                .rows()
                .iter()
                .map(|alpha| {
                    let mut v = vec![0; n];
                    for (a, x) in alpha.iter().zip(&basis) {
                        for (o, &xv) in v.iter_mut().zip(x) {
                            *o = zn::add(*o, zn::mul(*a, xv, p), p);
                        }
                    }
                    v
                })
                .collect();
            basis = SpanBasis::from_generators(p, n, basis).rows().to_vec();
        }
        basis
    }
}
