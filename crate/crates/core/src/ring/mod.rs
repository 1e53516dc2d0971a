//! Finite unital rings presented by structure constants over Z/m.

mod construct;
mod extract;
mod hom;
mod idempotent;
mod radical;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{span_product, zn, Layout, LayoutMap, SpanBasis};

pub use construct::*;
pub use extract::{center, peirce_corner, quotient_ring, ExtractedRing, QuotientRing};
pub use hom::RingHom;
pub use idempotent::{
    is_local, lift_idempotent, semiperfect_certificate, IdempotentLift, SemiperfectCertificate,
};
pub use radical::{jacobson_radical, radical_power_chain, RadicalChain};

/// Ring elements are coordinate vectors with `x_i ∈ [0, o_i)`.
pub type Elem = Vec<u64>;

/// A finite ring `⊕ Z/o_i · b_i` with `b_i b_j = Σ_k c_ijk b_k`.
///
/// Every additive order `o_i` divides the modulus; for rings read from files
/// all orders equal the modulus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RingSpec", try_from = "RingSpec")]
pub struct FiniteRing {
    layout: Layout,
    // products of basis pairs, indexed i * dim + j, sparse in k
    table: Vec<Vec<(usize, u64)>>,
    unity: Elem,
    labels: Option<Vec<String>>,
}

/// Interchange format of a ring definition file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub modulus: u64,
    pub dim: usize,
    pub tensor: Vec<Vec<Vec<i64>>>,
    pub unity: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<u64>>,
}

impl TryFrom<RingSpec> for FiniteRing {
    type Error = Error;

    fn try_from(spec: RingSpec) -> Result<Self> {
        let m = spec.modulus;
        if m == 0 || m >= zn::MAX_MODULUS {
            return Err(Error::InvalidModulus(m));
        }
        let d = spec.dim;
        let orders = spec.orders.unwrap_or_else(|| vec![m; d]);
        if orders.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: orders.len() });
        }
        let layout = Layout::new(m, orders)?;
        if spec.tensor.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: spec.tensor.len() });
        }
        let mut tensor = Vec::with_capacity(d);
        for plane in &spec.tensor {
            if plane.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: plane.len() });
            }
            let mut rows = Vec::with_capacity(d);
            for row in plane {
                if row.len() != d {
                    return Err(Error::DimensionMismatch { expected: d, found: row.len() });
                }
                rows.push(row.iter().map(|&v| zn::from_i128(v as i128, m)).collect());
            }
            tensor.push(rows);
        }
        if spec.unity.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: spec.unity.len() });
        }
        let unity = spec.unity.iter().map(|&v| zn::from_i128(v as i128, m)).collect();
        if let Some(l) = &spec.labels {
            if l.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: l.len() });
            }
        }
        FiniteRing::with_layout(layout, &tensor, unity, spec.labels)
    }
}

impl From<FiniteRing> for RingSpec {
    fn from(r: FiniteRing) -> Self {
        let d = r.dim();
        let tensor = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| r.basis_product(i, j).into_iter().map(|v| v as i64).collect())
                    .collect()
            })
            .collect();
        RingSpec {
            modulus: r.modulus(),
            dim: d,
            tensor,
            unity: r.unity.iter().map(|&v| v as i64).collect(),
            orders: (!r.layout.is_free()).then(|| r.layout.orders().to_vec()),
            labels: r.labels,
        }
    }
}

impl FiniteRing {
    /// Validated ring over Z/m with free additive group.
    pub fn new(modulus: u64, tensor: &[Vec<Vec<u64>>], unity: Elem) -> Result<Self> {
        let layout = Layout::new(modulus, vec![modulus; tensor.len()])?;
        Self::with_layout(layout, tensor, unity, None)
    }

    /// Validated ring with arbitrary additive orders; `tensor[i][j]` is `b_i b_j`.
    pub fn with_layout(
        layout: Layout,
        tensor: &[Vec<Vec<u64>>],
        unity: Elem,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let d = layout.dim();
        if tensor.len() != d || tensor.iter().any(|p| p.len() != d || p.iter().any(|r| r.len() != d)) {
            return Err(Error::DimensionMismatch { expected: d, found: tensor.len() });
        }
        Self::from_products(layout, |i, j| tensor[i][j].clone(), unity, labels)
    }

    /// Validated ring whose basis products are given by a function.
    pub fn from_products<F>(layout: Layout, product: F, unity: Elem, labels: Option<Vec<String>>) -> Result<Self>
    where
        F: Fn(usize, usize) -> Elem,
    {
        let d = layout.dim();
        if unity.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: unity.len() });
        }
        let mut table = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let p = layout.reduce(&product(i, j));
                if p.len() != d {
                    return Err(Error::DimensionMismatch { expected: d, found: p.len() });
                }
                let o = layout.orders();
                if !layout.is_zero(&layout.scalar(o[i], &p)) || !layout.is_zero(&layout.scalar(o[j], &p)) {
                    return Err(Error::OrderViolation { i, j });
                }
                table.push(p.into_iter().enumerate().filter(|&(_, v)| v != 0).collect());
            }
        }
        let unity = layout.reduce(&unity);
        let ring = FiniteRing { layout, table, unity, labels };
        ring.check_associativity()?;
        ring.check_unity()?;
        Ok(ring)
    }

    fn check_associativity(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let ij = self.basis_product(i, j);
                for k in 0..d {
                    let left = self.mul(&ij, &self.basis_element(k));
                    let right = self.mul(&self.basis_element(i), &self.basis_product(j, k));
                    if left != right {
                        return Err(Error::AssociativityViolation { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_unity(&self) -> Result<()> {
        for i in 0..self.dim() {
            let b = self.basis_element(i);
            if self.mul(&self.unity, &b) != b || self.mul(&b, &self.unity) != b {
                return Err(Error::UnityViolation(i));
            }
        }
        Ok(())
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn modulus(&self) -> u64 {
        self.layout.modulus()
    }

    pub fn orders(&self) -> &[u64] {
        self.layout.orders()
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim());
        self.labels = Some(labels);
        self
    }

    /// Number of elements, if it fits in a u128.
    pub fn size(&self) -> Option<u128> {
        self.layout.size()
    }

    /// Additive exponent (lcm of the basis orders).
    pub fn exponent(&self) -> u64 {
        self.orders().iter().fold(1, |a, &o| zn::lcm(a, o))
    }

    pub fn is_zero_ring(&self) -> bool {
        self.layout.is_zero(&self.unity)
    }

    pub fn unity(&self) -> Elem {
        self.unity.clone()
    }

    pub fn zero(&self) -> Elem {
        self.layout.zero()
    }

    pub fn basis_element(&self, i: usize) -> Elem {
        let mut e = self.zero();
        e[i] = 1 % self.orders()[i];
        e
    }

    pub fn basis(&self) -> Vec<Elem> {
        (0..self.dim()).map(|i| self.basis_element(i)).collect()
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Elem {
        let mut out = self.zero();
        for &(k, v) in &self.table[i * self.dim() + j] {
            out[k] = v;
        }
        out
    }

    /// Element with the given (possibly unreduced or negative) coordinates.
    pub fn element(&self, coords: &[i64]) -> Result<Elem> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: coords.len() });
        }
        Ok(self.layout.reduce_signed(coords))
    }

    /// Integer multiple of the unity.
    pub fn from_int(&self, k: i64) -> Elem {
        let u: Vec<i64> = self.unity.iter().map(|&v| v as i64).collect();
        let kz = zn::from_i128(k as i128, self.exponent().max(1));
        self.layout.scalar(kz, &self.layout.reduce_signed(&u))
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Elem {
        self.layout.add(x, y)
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Elem {
        self.layout.sub(x, y)
    }

    pub fn neg(&self, x: &[u64]) -> Elem {
        self.layout.neg(x)
    }

    pub fn scalar(&self, k: u64, x: &[u64]) -> Elem {
        self.layout.scalar(k, x)
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        self.layout.is_zero(x)
    }

    pub fn mul(&self, x: &[u64], y: &[u64]) -> Elem {
        let d = self.dim();
        let m = self.modulus();
        let mut acc = vec![0u64; d];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = zn::mul(xi, yj, m);
                for &(k, v) in &self.table[i * d + j] {
                    acc[k] = zn::add(acc[k], zn::mul(c, v, m), m);
                }
            }
        }
        self.layout.reduce(&acc)
    }

    /// Product of a list of elements, left to right.
    pub fn product(&self, xs: &[&[u64]]) -> Elem {
        xs.iter().fold(self.unity(), |acc, x| self.mul(&acc, x))
    }

    pub fn pow(&self, x: &[u64], mut n: u64) -> Elem {
        let mut acc = self.unity();
        let mut base = x.to_vec();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn is_idempotent(&self, x: &[u64]) -> bool {
        self.mul(x, x) == self.layout.reduce(x)
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (i + 1..d).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// Smallest `k ≥ 1` with `x^k = 0`, if `x` is nilpotent.
    pub fn nilpotency_index(&self, x: &[u64]) -> Option<u64> {
        if self.is_zero(x) {
            return Some(1);
        }
        // x^k = 0 for some k iff x^(2^t) = 0 for 2^t beyond the length of R
        let mut p = x.to_vec();
        let mut k = 1u64;
        let bound = self.dim() as u64 * 64 + 1;
        while k <= bound {
            p = self.mul(&p, x);
            k += 1;
            if self.is_zero(&p) {
                return Some(k);
            }
        }
        None
    }

    /// `x ↦ a·x` as an additive map.
    pub fn left_mul_map(&self, a: &[u64]) -> LayoutMap {
        LayoutMap::from_fn(self.layout.clone(), self.layout.clone(), |e| self.mul(a, e))
            .expect("multiplication is additive")
    }

    /// `x ↦ x·a` as an additive map.
    pub fn right_mul_map(&self, a: &[u64]) -> LayoutMap {
        LayoutMap::from_fn(self.layout.clone(), self.layout.clone(), |e| self.mul(e, a))
            .expect("multiplication is additive")
    }

    /// Two-sided inverse, if `x` is a unit.
    pub fn try_invert(&self, x: &[u64]) -> Option<Elem> {
        let y = self.left_mul_map(x).solve(&self.unity)?;
        (self.mul(&y, x) == self.unity).then_some(y)
    }

    pub fn is_unit(&self, x: &[u64]) -> bool {
        self.try_invert(x).is_some()
    }

    /// All elements in mixed-radix order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.layout.all_elements()
    }

    pub fn full_span(&self) -> SpanBasis {
        self.layout.full_span()
    }

    pub fn zero_span(&self) -> SpanBasis {
        self.layout.zero_span()
    }

    pub fn span_of<'a, I>(&self, elements: I) -> SpanBasis
    where
        I: IntoIterator<Item = &'a Elem>,
    {
        self.layout.span_of(elements)
    }

    pub fn span_contains(&self, span: &SpanBasis, x: &[u64]) -> bool {
        self.layout.contains(span, x)
    }

    /// Elements of a span in plain coordinates.
    pub fn span_elements<'a>(&'a self, span: &'a SpanBasis) -> impl Iterator<Item = Elem> + 'a {
        self.layout.elements(span)
    }

    /// Generators of a span in plain coordinates.
    pub fn span_generators(&self, span: &SpanBasis) -> Vec<Elem> {
        span.rows().iter().map(|u| self.layout.unscale(u)).collect()
    }

    /// Additive span of all products `x·y` with `x ∈ X`, `y ∈ Y`.
    pub fn span_mul(&self, x: &SpanBasis, y: &SpanBasis) -> SpanBasis {
        span_product(x, y, self.dim(), |u, v| {
            self.layout
                .scale(&self.mul(&self.layout.unscale(u), &self.layout.unscale(v)))
        })
    }

    /// `X^n` as a span (`X^0 = R`).
    pub fn span_pow(&self, x: &SpanBasis, n: u32) -> SpanBasis {
        let mut acc = self.full_span();
        for _ in 0..n {
            acc = self.span_mul(&acc, x);
        }
        acc
    }

    /// `aR`.
    pub fn right_ideal(&self, a: &[u64]) -> SpanBasis {
        self.left_mul_map(a).image()
    }

    /// `Ra`.
    pub fn left_ideal(&self, a: &[u64]) -> SpanBasis {
        self.right_mul_map(a).image()
    }

    /// Two-sided ideal generated by a span.
    pub fn ideal_closure(&self, x: &SpanBasis) -> SpanBasis {
        let full = self.full_span();
        self.span_mul(&self.span_mul(&full, x), &full).sum(x)
    }

    pub fn is_ideal(&self, x: &SpanBasis) -> bool {
        let full = self.full_span();
        self.span_mul(&full, x).is_subset_of(x) && self.span_mul(x, &full).is_subset_of(x)
    }

    /// Whether a span contains the unity and is closed under multiplication.
    pub fn is_subring_span(&self, x: &SpanBasis) -> bool {
        self.span_contains(x, &self.unity) && self.span_mul(x, x).is_subset_of(x)
    }

    /// Maps `x ↦ (x·c − c·x)_c` whose kernel is the centralizer of `cs`.
    pub fn commutator_map(&self, cs: &[Elem]) -> LayoutMap {
        let d = self.dim();
        let target = Layout::new(
            self.modulus(),
            cs.iter().flat_map(|_| self.orders().iter().copied()).collect(),
        )
        .expect("orders divide the modulus");
        let images = (0..d)
            .map(|i| {
                let b = self.basis_element(i);
                cs.iter()
                    .flat_map(|c| self.sub(&self.mul(&b, c), &self.mul(c, &b)))
                    .collect()
            })
            .collect();
        LayoutMap::new(self.layout.clone(), target, images).expect("commutators are additive")
    }

    pub fn label_of(&self, x: &[u64]) -> String {
        let names: Vec<String> = match &self.labels {
            Some(l) => l.clone(),
            None => (0..self.dim()).map(|i| format!("b{i}")).collect(),
        };
        let terms: Vec<String> = x
            .iter()
            .zip(&names)
            .filter(|(&v, _)| v != 0)
            .map(|(&v, n)| if v == 1 { n.clone() } else { format!("{v}{n}") })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}
