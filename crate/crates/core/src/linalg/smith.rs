//! Smith normal form over the integers, with transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `U · A · V = D` with `D` diagonal, `d_1 | d_2 | …`, all `d_i ≥ 0`.
///
/// `v_inv` is the inverse of `V`, tracked alongside because the cyclic
/// decompositions need generators as well as coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// The diagonal of `D`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for m in [&mut self.a, &mut self.u] {
            for c in 0..m.cols() {
                let t = m.get(i, c).clone();
                m.set(i, c, m.get(j, c).clone());
                m.set(j, c, t);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for m in [&mut self.a, &mut self.v] {
            for r in 0..m.rows() {
                let t = m.get(r, i).clone();
                m.set(r, i, m.get(r, j).clone());
                m.set(r, j, t);
            }
        }
        let vi = &mut self.v_inv;
        for c in 0..vi.cols() {
            let t = vi.get(i, c).clone();
            vi.set(i, c, vi.get(j, c).clone());
            vi.set(j, c, t);
        }
    }

    /// row `dst` += q · row `src`
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.u] {
            for c in 0..m.cols() {
                let v = m.get(dst, c) + q * m.get(src, c);
                m.set(dst, c, v);
            }
        }
    }

    /// col `dst` += q · col `src`
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.v] {
            for r in 0..m.rows() {
                let v = m.get(r, dst) + q * m.get(r, src);
                m.set(r, dst, v);
            }
        }
        // V' = V·E with E = I + q·e_src e_dstᵀ, so V'^{-1} = (I - q·e_src e_dstᵀ)·V^{-1}
        let vi = &mut self.v_inv;
        for c in 0..vi.cols() {
            let v = vi.get(src, c) - q * vi.get(dst, c);
            vi.set(src, c, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for c in 0..m.cols() {
                let v = -m.get(i, c);
                m.set(i, c, v);
            }
        }
    }
}

pub fn smith_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = Work {
        a: a.clone(),
        u: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let n = rows.min(cols);
    for t in 0..n {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = w.a.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if w.a.get(i, t).is_zero() {
                    continue;
                }
                let q = w.a.get(i, t).div_floor(w.a.get(t, t));
                w.add_row(i, t, &-q);
                if !w.a.get(i, t).is_zero() {
                    w.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if w.a.get(t, j).is_zero() {
                    continue;
                }
                let q = w.a.get(t, j).div_floor(w.a.get(t, t));
                w.add_col(j, t, &-q);
                if !w.a.get(t, j).is_zero() {
                    w.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let p = w.a.get(t, t).clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(w.a.get(i, j) % &p).is_zero()));
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
    }
    SmithForm { u: w.u, d: w.a, v: w.v, v_inv: w.v_inv }
}

/// Integer solutions of `A · x = b`: one particular solution and a basis of the kernel lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSolution {
    pub particular: Vec<BigInt>,
    pub kernel: Vec<Vec<BigInt>>,
}

pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<IntegerSolution> {
    assert_eq!(a.rows(), b.len(), "right-hand side has wrong length");
    let s = smith_form(a);
    // D·y = U·b with x = V·y
    let ub = s.u.mul_vec(b);
    let diag = s.diagonal();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, c) in ub.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !c.is_zero() {
                return None;
            }
        } else {
            let (q, r) = c.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    let particular = s.v.mul_vec(&y);
    let kernel = (0..a.cols())
        .filter(|&j| diag.get(j).is_none_or(|d| d.is_zero()))
        .map(|j| (0..a.cols()).map(|i| s.v.get(i, j).clone()).collect())
        .collect();
    Some(IntegerSolution { particular, kernel })
}
