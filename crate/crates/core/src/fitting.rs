//! Fitting decomposition of ring elements and their associated idempotents.
//!
//! For `a` in a finite ring with stabilisation index `n`, `R = aⁿR ⊕ ann_r(aⁿ)`
//! and the component `e` of `1` in `aⁿR` is the unique idempotent with
//! `a = eae + faf`, `eae` a unit of `eRe` and `faf` nilpotent (`f = 1 − e`).

use serde::Serialize;

use crate::error::Result;
use crate::linalg::{solve_left, ResMatrix};
use crate::ring::{Elem, FiniteRing};
use crate::settings::Settings;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FittingCertificate {
    pub element: Elem,
    /// Least `n` with `aⁿR = aⁿ⁺¹R` and `Raⁿ = Raⁿ⁺¹`.
    pub index: usize,
    pub idempotent: Elem,
    pub complement: Elem,
    /// Inverse of `eae` inside `eRe`.
    pub corner_inverse: Elem,
    /// Least `k ≥ 1` with `(faf)ᵏ = 0`.
    pub nilpotency_index: u64,
}

impl FittingCertificate {
    /// Re-checks every stated property against the ring.
    pub fn verify(&self, r: &FiniteRing) -> bool {
        let (a, e, f, b) = (&self.element, &self.idempotent, &self.complement, &self.corner_inverse);
        let eae = r.product(&[e, a, e]);
        let faf = r.product(&[f, a, f]);
        r.is_idempotent(e)
            && r.add(e, f) == r.unity()
            && r.is_zero(&r.mul(e, f))
            && r.is_zero(&r.mul(f, e))
            && r.add(&eae, &faf) == *a
            && r.mul(b, &eae) == *e
            && r.mul(&eae, b) == *e
            && r.product(&[e, b, e]) == *b
            && r.is_zero(&r.pow(&faf, self.nilpotency_index))
            && (self.nilpotency_index == 1 || !r.is_zero(&r.pow(&faf, self.nilpotency_index - 1)))
            && fitting_index(r, a) == self.index
    }
}

pub fn fitting_index(r: &FiniteRing, a: &[u64]) -> usize {
    let first_stable = |ideal: &dyn Fn(&[u64]) -> crate::linalg::SpanBasis| {
        let mut k = 1;
        let mut pk = a.to_vec();
        let mut cur = ideal(&pk);
        loop {
            pk = r.mul(&pk, a);
            let next = ideal(&pk);
            if next == cur {
                return k;
            }
            cur = next;
            k += 1;
        }
    };
    let right = first_stable(&|x| r.right_ideal(x));
    let left = first_stable(&|x| r.left_ideal(x));
    right.max(left)
}

pub fn associated_idempotent(r: &FiniteRing, a: &[u64]) -> FittingCertificate {
    let a = r.layout().reduce(a);
    let n = fitting_index(r, &a);
    let an = r.pow(&a, n as u64);
    let image = r.right_ideal(&an);
    let annihilator = r.left_mul_map(&an).kernel();

    // 1 = e + f with e ∈ aⁿR, f ∈ ann_r(aⁿ); the sum is direct, so e is forced
    let mut rows = image.rows().to_vec();
    rows.extend_from_slice(annihilator.rows());
    let stacked = ResMatrix::from_rows(r.modulus(), r.dim(), &rows);
    let coeffs = solve_left(&stacked, &r.layout().scale(&r.unity()))
        .expect("R is the sum of the Fitting components");
    let e_scaled = image.combine(&coeffs[..image.len()]);
    let e = r.layout().unscale(&e_scaled);
    let f = r.sub(&r.unity(), &e);

    let eae = r.product(&[&e, &a, &e]);
    let y = r
        .right_mul_map(&eae)
        .solve(&e)
        .expect("eae is invertible in eRe");
    let b = r.product(&[&e, &y, &e]);
    let faf = r.product(&[&f, &a, &f]);
    let k = r.nilpotency_index(&faf).expect("faf is nilpotent");

    let cert = FittingCertificate {
        element: a,
        index: n,
        idempotent: e,
        complement: f,
        corner_inverse: b,
        nilpotency_index: k,
    };
    debug_assert!(cert.verify(r));
    cert
}

/// Whether an idempotent `e` satisfies the three Fitting conditions for `a`.
pub fn satisfies_fitting_conditions(r: &FiniteRing, a: &[u64], e: &[u64]) -> bool {
    if !r.is_idempotent(e) {
        return false;
    }
    let f = r.sub(&r.unity(), e);
    let eae = r.product(&[e, a, e]);
    let faf = r.product(&[&f, a, &f]);
    if r.add(&eae, &faf) != r.layout().reduce(a) {
        return false;
    }
    let Some(y) = r.right_mul_map(&eae).solve(e) else { return false };
    let b = r.product(&[e, &y, e]);
    r.mul(&b, &eae) == e && r.mul(&eae, &b) == e && r.nilpotency_index(&faf).is_some()
}

/// All idempotents, by enumeration under the cap.
pub fn idempotents(r: &FiniteRing, settings: &Settings) -> Result<Vec<Elem>> {
    settings.check_cap(r.size())?;
    Ok(r.elements().filter(|x| r.is_idempotent(x)).collect())
}

/// Exactly one idempotent satisfies the Fitting conditions for `a`.
pub fn uniqueness_check(r: &FiniteRing, a: &[u64], settings: &Settings) -> Result<bool> {
    let idem = idempotents(r, settings)?;
    Ok(unique_among(r, a, &idem))
}

/// As [`uniqueness_check`], against a precomputed idempotent list.
pub fn unique_among(r: &FiniteRing, a: &[u64], idempotents: &[Elem]) -> bool {
    idempotents
        .iter()
        .filter(|e| satisfies_fitting_conditions(r, a, e))
        .count()
        == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{matrix_ring, zn_ring};

    #[test]
    fn indices() {
        let z6 = zn_ring(6).unwrap();
        assert_eq!(fitting_index(&z6, &[2]), 1);
        assert_eq!(fitting_index(&z6, &[5]), 1);
        let z8 = zn_ring(8).unwrap();
        assert_eq!(fitting_index(&z8, &[2]), 3);
    }

    #[test]
    fn z6_element_two() {
        let z6 = zn_ring(6).unwrap();
        let c = associated_idempotent(&z6, &[2]);
        assert_eq!(c.idempotent, vec![4]);
        assert_eq!(c.corner_inverse, vec![2]);
        assert_eq!(c.nilpotency_index, 1);
        assert!(c.verify(&z6));
        for a in 0..6 {
            assert!(uniqueness_check(&z6, &[a], &Settings::default()).unwrap());
        }
    }

    #[test]
    fn units_and_nilpotents() {
        let z8 = zn_ring(8).unwrap();
        let c = associated_idempotent(&z8, &[2]);
        assert_eq!((c.idempotent.clone(), c.complement.clone(), c.corner_inverse.clone()), (vec![0], vec![1], vec![0]));
        assert_eq!(c.nilpotency_index, 3);
        let c = associated_idempotent(&z8, &[3]);
        assert_eq!((c.idempotent.clone(), c.corner_inverse.clone(), c.nilpotency_index), (vec![1], vec![3], 1));
    }

    #[test]
    fn diagonal_matrix_over_z4() {
        let m = matrix_ring(2, 4).unwrap();
        let c = associated_idempotent(&m, &[1, 0, 0, 2]);
        assert_eq!(c.idempotent, vec![1, 0, 0, 0]);
        assert!(c.verify(&m));
    }
}
