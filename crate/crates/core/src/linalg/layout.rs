//! Finite abelian groups written as `⊕ Z/o_i` and the homomorphisms between them.
//!
//! Elements are stored in plain coordinates `x_i ∈ [0, o_i)`. Subgroups are
//! stored as [`SpanBasis`] values in scaled coordinates `u_i = x_i · (m / o_i)`
//! inside `(Z/m)^d`, which turns every subgroup question into a Howell-form
//! question over a single modulus.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::howell::{left_kernel, solve_left, SpanBasis};
use super::matrix::{IntMatrix, ResMatrix};
use super::smith::smith_form;
use super::zn;
use crate::error::{Error, Result};

/// Reduces a big integer into `[0, m)`.
pub fn big_mod(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("reduced value fits")
}

/// The group `⊕ Z/o_i` with every `o_i` dividing `modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Layout {
    modulus: u64,
    orders: Vec<u64>,
}

impl Layout {
    pub fn new(modulus: u64, orders: Vec<u64>) -> Result<Self> {
        if modulus == 0 || modulus >= zn::MAX_MODULUS {
            return Err(Error::InvalidModulus(modulus));
        }
        if let Some(i) = orders.iter().position(|&o| o == 0 || modulus % o != 0) {
            return Err(Error::InvalidOrder { index: i, order: orders[i], modulus });
        }
        Ok(Layout { modulus, orders })
    }

    pub fn free(modulus: u64, dim: usize) -> Self {
        Layout::new(modulus, vec![modulus; dim]).expect("free layout")
    }

    /// Smallest layout holding the given orders: the modulus is their lcm.
    pub fn from_orders(orders: Vec<u64>) -> Self {
        let m = orders.iter().fold(1, |a, &o| zn::lcm(a, o));
        Layout::new(m, orders).expect("lcm layout")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn dim(&self) -> usize {
        self.orders.len()
    }

    pub fn is_free(&self) -> bool {
        self.orders.iter().all(|&o| o == self.modulus)
    }

    pub fn size(&self) -> Option<u128> {
        self.orders
            .iter()
            .try_fold(1u128, |acc, &o| acc.checked_mul(o as u128))
    }

    /// The same group viewed inside a larger working modulus.
    pub fn with_modulus(&self, modulus: u64) -> Self {
        assert_eq!(modulus % self.modulus, 0, "modulus must be a multiple");
        Layout { modulus, orders: self.orders.clone() }
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.dim()]
    }

    pub fn reduce(&self, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.orders).map(|(&v, &o)| v % o).collect()
    }

    pub fn reduce_signed(&self, x: &[i64]) -> Vec<u64> {
        x.iter()
            .zip(&self.orders)
            .map(|(&v, &o)| zn::from_i128(v as i128, o))
            .collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((&a, &b), &o)| zn::add(a, b, o))
            .collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((&a, &b), &o)| zn::sub(a, b, o))
            .collect()
    }

    pub fn neg(&self, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.orders).map(|(&a, &o)| zn::neg(a, o)).collect()
    }

    pub fn scalar(&self, k: u64, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.orders).map(|(&a, &o)| zn::mul(k % o, a, o)).collect()
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        x.iter().zip(&self.orders).all(|(&a, &o)| a % o == 0)
    }

    /// Plain coordinates to scaled coordinates in `(Z/m)^d`.
    pub fn scale(&self, x: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        x.iter()
            .zip(&self.orders)
            .map(|(&a, &o)| zn::mul(a % o, m / o, m))
            .collect()
    }

    /// Inverse of [`Layout::scale`] on vectors of the scaled full group.
    pub fn unscale(&self, u: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        u.iter()
            .zip(&self.orders)
            .map(|(&a, &o)| {
                debug_assert_eq!(a % (m / o), 0, "not a scaled vector");
                a / (m / o)
            })
            .collect()
    }

    /// The whole group as a scaled span.
    pub fn full_span(&self) -> SpanBasis {
        let d = self.dim();
        SpanBasis::from_generators(
            self.modulus,
            d,
            (0..d).map(|i| {
                let mut e = vec![0; d];
                e[i] = 1;
                self.scale(&e)
            }),
        )
    }

    pub fn zero_span(&self) -> SpanBasis {
        SpanBasis::zero(self.modulus, self.dim())
    }

    /// Subgroup generated by elements given in plain coordinates.
    pub fn span_of<'a, I>(&self, elements: I) -> SpanBasis
    where
        I: IntoIterator<Item = &'a Vec<u64>>,
    {
        SpanBasis::from_generators(
            self.modulus,
            self.dim(),
            elements.into_iter().map(|x| self.scale(x)),
        )
    }

    pub fn contains(&self, span: &SpanBasis, x: &[u64]) -> bool {
        span.contains(&self.scale(x))
    }

    /// Elements of a scaled span, in plain coordinates.
    pub fn elements<'a>(&'a self, span: &'a SpanBasis) -> impl Iterator<Item = Vec<u64>> + 'a {
        span.elements().map(move |u| self.unscale(&u))
    }

    /// Basis elements `e_i` in plain coordinates.
    pub fn basis(&self) -> Vec<Vec<u64>> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let mut e = vec![0; d];
                e[i] = 1 % self.orders[i];
                e
            })
            .collect()
    }

    /// All elements of the group in mixed-radix order.
    pub fn all_elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let mut counter = Some(vec![0u64; self.dim()]);
        std::iter::from_fn(move || {
            let cur = counter.take()?;
            let mut next = cur.clone();
            let mut i = next.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                next[i] += 1;
                if next[i] < self.orders[i] {
                    counter = Some(next);
                    break;
                }
                next[i] = 0;
            }
            Some(cur)
        })
    }
}

/// A homomorphism `⊕ Z/o_i → ⊕ Z/o'_j`, row `i` holding the image of `e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutMap {
    src: Layout,
    dst: Layout,
    images: Vec<Vec<u64>>,
}

impl LayoutMap {
    pub fn new(src: Layout, dst: Layout, images: Vec<Vec<u64>>) -> Result<Self> {
        if images.len() != src.dim() {
            return Err(Error::DimensionMismatch { expected: src.dim(), found: images.len() });
        }
        let mut reduced = Vec::with_capacity(images.len());
        for (i, row) in images.iter().enumerate() {
            if row.len() != dst.dim() {
                return Err(Error::DimensionMismatch { expected: dst.dim(), found: row.len() });
            }
            let row = dst.reduce(row);
            if !dst.is_zero(&dst.scalar(src.orders[i], &row)) {
                return Err(Error::NotWellDefined(i));
            }
            reduced.push(row);
        }
        Ok(LayoutMap { src, dst, images: reduced })
    }

    /// Builds the map from a function evaluated on basis elements.
    pub fn from_fn<F>(src: Layout, dst: Layout, f: F) -> Result<Self>
    where
        F: Fn(&[u64]) -> Vec<u64>,
    {
        let images = src.basis().iter().map(|e| f(e)).collect();
        Self::new(src, dst, images)
    }

    pub fn src(&self) -> &Layout {
        &self.src
    }

    pub fn dst(&self) -> &Layout {
        &self.dst
    }

    pub fn images(&self) -> &[Vec<u64>] {
        &self.images
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        let mut out = self.dst.zero();
        for ((&xi, row), &o) in x.iter().zip(&self.images).zip(self.src.orders()) {
            let xi = xi % o;
            if xi == 0 {
                continue;
            }
            out = self.dst.add(&out, &self.dst.scalar(xi, row));
        }
        out
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &LayoutMap) -> LayoutMap {
        assert_eq!(self.dst, next.src, "composition layouts differ");
        LayoutMap {
            src: self.src.clone(),
            dst: next.dst.clone(),
            images: self.images.iter().map(|r| next.apply(r)).collect(),
        }
    }

    fn work_modulus(&self) -> u64 {
        zn::lcm(self.src.modulus, self.dst.modulus)
    }

    /// Images scaled into `(Z/M)^{d'}` for the working modulus `M`.
    fn scaled_matrix(&self) -> ResMatrix {
        let big = self.work_modulus();
        let dst = self.dst.with_modulus(big);
        let rows: Vec<Vec<u64>> = self.images.iter().map(|r| dst.scale(r)).collect();
        ResMatrix::from_rows(big, self.dst.dim(), &rows)
    }

    fn src_from_work(&self, x: &[u64]) -> Vec<u64> {
        self.src.scale(&self.src.reduce(x))
    }

    pub fn kernel(&self) -> SpanBasis {
        let ker = left_kernel(&self.scaled_matrix());
        SpanBasis::from_generators(
            self.src.modulus,
            self.src.dim(),
            ker.rows().iter().map(|x| self.src_from_work(x)),
        )
    }

    pub fn image(&self) -> SpanBasis {
        self.dst.span_of(&self.images)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.image() == self.dst.full_span()
    }

    /// Some `x` with `f(x) = y`, in plain source coordinates.
    pub fn solve(&self, y: &[u64]) -> Option<Vec<u64>> {
        let big = self.work_modulus();
        let target = self.dst.with_modulus(big).scale(y);
        solve_left(&self.scaled_matrix(), &target).map(|x| self.src.reduce(&x))
    }

    /// Preimage of a scaled subgroup of the target.
    pub fn preimage(&self, sub: &SpanBasis) -> SpanBasis {
        let big = self.work_modulus();
        let lift = big / self.dst.modulus;
        let d1 = self.src.dim();
        let mut rows = self.scaled_matrix().to_rows();
        rows.extend(
            sub.rows()
                .iter()
                .map(|r| r.iter().map(|&v| zn::mul(v, lift, big)).collect::<Vec<_>>()),
        );
        let stacked = ResMatrix::from_rows(big, self.dst.dim(), &rows);
        let ker = left_kernel(&stacked);
        SpanBasis::from_generators(
            self.src.modulus,
            d1,
            ker.rows().iter().map(|x| self.src_from_work(&x[..d1])),
        )
    }

    /// Image of a scaled subgroup of the source.
    pub fn image_of(&self, sub: &SpanBasis) -> SpanBasis {
        let pts: Vec<Vec<u64>> = sub
            .rows()
            .iter()
            .map(|u| self.apply(&self.src.unscale(u)))
            .collect();
        self.dst.span_of(&pts)
    }
}

/// A direct-sum basis of a subgroup: `H = ⊕ Z/d_k · g_k` with every `d_k > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicBasis {
    ambient: Layout,
    span: SpanBasis,
    orders: Vec<u64>,
    generators: Vec<Vec<u64>>,
    // Howell coefficients to cyclic coordinates: y_k = Σ_i c_i t[i][k] mod d_k
    transform: Vec<Vec<u64>>,
}

impl CyclicBasis {
    pub fn new(ambient: &Layout, span: &SpanBasis) -> Self {
        let m = ambient.modulus;
        let s = span.len();
        let kernel = left_kernel(&span.as_matrix());
        let mut rel: Vec<Vec<i64>> = kernel
            .rows()
            .iter()
            .map(|r| r.iter().map(|&v| v as i64).collect())
            .collect();
        for i in 0..s {
            let mut row = vec![0i64; s];
            row[i] = m as i64;
            rel.push(row);
        }
        let (orders, generators, transform) = if s == 0 {
            (Vec::new(), Vec::new(), Vec::new())
        } else {
            let snf = smith_form(&IntMatrix::from_i64(&rel));
            let diag = snf.diagonal();
            let keep: Vec<usize> = (0..s).filter(|&k| diag[k] != BigInt::from(1)).collect();
            let orders: Vec<u64> = keep.iter().map(|&k| diag[k].to_u64().expect("divides m")).collect();
            let generators = keep
                .iter()
                .map(|&k| {
                    let coeffs: Vec<u64> = (0..s).map(|i| big_mod(snf.v_inv.get(k, i), m)).collect();
                    ambient.unscale(&span.combine(&coeffs))
                })
                .collect();
            let transform = (0..s)
                .map(|i| {
                    keep.iter()
                        .zip(&orders)
                        .map(|(&k, &d)| big_mod(snf.v.get(i, k), d))
                        .collect()
                })
                .collect();
            (orders, generators, transform)
        };
        CyclicBasis { ambient: ambient.clone(), span: span.clone(), orders, generators, transform }
    }

    pub fn ambient(&self) -> &Layout {
        &self.ambient
    }

    pub fn span(&self) -> &SpanBasis {
        &self.span
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// The subgroup as a standalone layout.
    pub fn layout(&self) -> Layout {
        Layout::from_orders(self.orders.clone())
    }

    /// Cyclic coordinates of an ambient element, if it lies in the subgroup.
    pub fn coordinates(&self, x: &[u64]) -> Option<Vec<u64>> {
        let c = self.span.coefficients(&self.ambient.scale(x))?;
        Some(
            self.orders
                .iter()
                .enumerate()
                .map(|(k, &d)| {
                    c.iter()
                        .zip(&self.transform)
                        .fold(0, |acc, (&ci, t)| zn::add(acc, zn::mul(ci % d, t[k], d), d))
                })
                .collect(),
        )
    }

    /// Ambient element with the given cyclic coordinates.
    pub fn element(&self, y: &[u64]) -> Vec<u64> {
        let mut out = self.ambient.zero();
        for (g, &yk) in self.generators.iter().zip(y) {
            out = self.ambient.add(&out, &self.ambient.scalar(yk, g));
        }
        out
    }

    /// Inclusion of the subgroup layout into the ambient.
    pub fn inclusion(&self) -> LayoutMap {
        LayoutMap::new(self.layout(), self.ambient.clone(), self.generators.clone())
            .expect("generators have the declared orders")
    }
}

/// `L / H` as a layout, with projection and a set-theoretic section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientLayout {
    ambient: Layout,
    sub: SpanBasis,
    layout: Layout,
    projection: LayoutMap,
    section: Vec<Vec<u64>>,
}

impl QuotientLayout {
    pub fn new(ambient: &Layout, sub: &SpanBasis) -> Self {
        let d = ambient.dim();
        let mut rel: Vec<Vec<i64>> = (0..d)
            .map(|i| {
                let mut r = vec![0i64; d];
                r[i] = ambient.orders[i] as i64;
                r
            })
            .collect();
        rel.extend(
            sub.rows()
                .iter()
                .map(|u| ambient.unscale(u).into_iter().map(|v| v as i64).collect()),
        );
        let (orders, proj_rows, section) = if d == 0 {
            (Vec::new(), Vec::new(), Vec::new())
        } else {
            let snf = smith_form(&IntMatrix::from_i64(&rel));
            let diag = snf.diagonal();
            let keep: Vec<usize> = (0..d).filter(|&k| diag[k] != BigInt::from(1)).collect();
            let orders: Vec<u64> = keep.iter().map(|&k| diag[k].to_u64().expect("divides m")).collect();
            let proj_rows: Vec<Vec<u64>> = (0..d)
                .map(|i| {
                    keep.iter()
                        .zip(&orders)
                        .map(|(&k, &o)| big_mod(snf.v.get(i, k), o))
                        .collect()
                })
                .collect();
            let section = keep
                .iter()
                .map(|&k| {
                    (0..d)
                        .map(|i| big_mod(snf.v_inv.get(k, i), ambient.orders[i]))
                        .collect()
                })
                .collect();
            (orders, proj_rows, section)
        };
        let layout = Layout::from_orders(orders);
        let projection = LayoutMap::new(ambient.clone(), layout.clone(), proj_rows)
            .expect("projection is well defined");
        QuotientLayout { ambient: ambient.clone(), sub: sub.clone(), layout, projection, section }
    }

    pub fn ambient(&self) -> &Layout {
        &self.ambient
    }

    pub fn sub(&self) -> &SpanBasis {
        &self.sub
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn projection(&self) -> &LayoutMap {
        &self.projection
    }

    pub fn project(&self, x: &[u64]) -> Vec<u64> {
        self.projection.apply(x)
    }

    /// A representative of the class with quotient coordinates `y`.
    pub fn lift(&self, y: &[u64]) -> Vec<u64> {
        let mut out = self.ambient.zero();
        for (g, &yk) in self.section.iter().zip(y) {
            out = self.ambient.add(&out, &self.ambient.scalar(yk, g));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn howell_rows_are_not_a_direct_sum_basis() {
        // (2,1) generates a copy of Z/4 inside (Z/4)^2; its Howell form has two rows
        let l = Layout::free(4, 2);
        let h = l.span_of(&[vec![2, 1]]);
        assert_eq!(h.len(), 2);
        let cb = CyclicBasis::new(&l, &h);
        assert_eq!(cb.orders(), &[4]);
        for x in l.elements(&h) {
            let y = cb.coordinates(&x).unwrap();
            assert_eq!(cb.element(&y), x);
        }
    }

    #[test]
    fn cyclic_basis_of_z6_corner() {
        let l = Layout::free(6, 1);
        let h = l.span_of(&[vec![4]]);
        let cb = CyclicBasis::new(&l, &h);
        assert_eq!(cb.orders(), &[3]);
        assert_eq!(cb.layout().modulus(), 3);
        assert!(cb.coordinates(&[1]).is_none());
    }

    #[test]
    fn quotient_of_z4_z2() {
        let l = Layout::new(4, vec![4, 2]).unwrap();
        let h = l.span_of(&[vec![2, 1]]);
        let q = QuotientLayout::new(&l, &h);
        assert_eq!(q.layout().size(), Some(4));
        for x in l.all_elements() {
            let y = q.project(&x);
            let back = q.lift(&y);
            assert!(l.contains(&h, &l.sub(&x, &back)));
        }
    }

    #[test]
    fn maps_between_moduli() {
        // reduction Z/9 -> Z/3
        let f = LayoutMap::new(Layout::free(9, 1), Layout::free(3, 1), vec![vec![1]]).unwrap();
        assert!(f.is_surjective());
        let ker: BTreeSet<_> = f.src().elements(&f.kernel()).collect();
        assert_eq!(ker, [vec![0], vec![3], vec![6]].into_iter().collect());
        assert_eq!(f.apply(&f.solve(&[2]).unwrap()), vec![2]);
        // ×2 : Z/2 -> Z/4 is well defined, ×1 is not
        assert!(LayoutMap::new(Layout::free(2, 1), Layout::free(4, 1), vec![vec![2]]).is_ok());
        assert!(LayoutMap::new(Layout::free(2, 1), Layout::free(4, 1), vec![vec![1]]).is_err());
    }

    #[test]
    fn preimage_matches_enumeration() {
        let src = Layout::new(4, vec![4, 2]).unwrap();
        let dst = Layout::free(4, 1);
        let f = LayoutMap::new(src.clone(), dst.clone(), vec![vec![1], vec![2]]).unwrap();
        let h = dst.span_of(&[vec![2]]);
        let pre = f.preimage(&h);
        let got: BTreeSet<_> = src.elements(&pre).collect();
        let want: BTreeSet<_> = src
            .all_elements()
            .filter(|x| dst.contains(&h, &f.apply(x)))
            .collect();
        assert_eq!(got, want);
    }
}
