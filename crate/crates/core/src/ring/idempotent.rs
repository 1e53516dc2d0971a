//! Idempotent lifting and complete sets of primitive idempotents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{jacobson_radical, peirce_corner, quotient_ring, radical_power_chain, Elem, FiniteRing};
use crate::error::{Error, Result};
use crate::fitting::associated_idempotent;
use crate::linalg::{zn, LayoutMap, SpanBasis};
use crate::settings::Settings;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentLift {
    pub idempotent: Elem,
    pub iterations: u32,
    /// `⌈log₂ N⌉ + 1` for the nilpotency index `N` of the ideal.
    pub bound: u32,
}

/// Least `N ≥ 1` with `Jᴺ = 0`.
fn ideal_nilpotency(r: &FiniteRing, j: &SpanBasis) -> Result<u32> {
    let mut cur = j.clone();
    let mut n = 1;
    while !cur.is_zero() {
        let next = r.span_mul(&cur, j);
        if next == cur {
            return Err(Error::NotNilIdeal);
        }
        cur = next;
        n += 1;
    }
    Ok(n)
}

/// Lifts `x` with `x² − x ∈ J` to an idempotent congruent to `x` modulo the nil ideal `J`.
pub fn lift_idempotent(r: &FiniteRing, j: &SpanBasis, x: &[u64]) -> Result<IdempotentLift> {
    let n = ideal_nilpotency(r, j)?;
    let mut x = r.layout().reduce(x);
    if !r.span_contains(j, &r.sub(&r.mul(&x, &x), &x)) {
        return Err(Error::DefectNotInIdeal);
    }
    let bound = (n as f64).log2().ceil() as u32 + 1;
    let mut iterations = 0;
    // x ↦ 3x² − 2x³ sends the defect d = x² − x to d²(4d − 3)
    while !r.is_idempotent(&x) {
        let x2 = r.mul(&x, &x);
        let x3 = r.mul(&x2, &x);
        x = r.sub(&r.scalar(3, &x2), &r.scalar(2, &x3));
        iterations += 1;
        assert!(iterations <= 64, "idempotent lifting does not converge");
    }
    Ok(IdempotentLift { idempotent: x, iterations, bound })
}

/// Whether the ring is local: `R/Jac(R)` is a field.
pub fn is_local(r: &FiniteRing) -> bool {
    if r.is_zero_ring() {
        return false;
    }
    let q = quotient_ring(r, &jacobson_radical(r)).expect("the radical is an ideal");
    let q = q.ring();
    let p = q.exponent();
    if !zn::is_prime(p) || !q.is_commutative() {
        return false;
    }
    // in a commutative semisimple F_p-algebra, ker(x ↦ x^p − x) is F_p^(number of fields)
    let frob = LayoutMap::from_fn(q.layout().clone(), q.layout().clone(), |b| q.sub(&q.pow(b, p), b))
        .expect("Frobenius is additive");
    frob.kernel().size() == Some(p as u128)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemiperfectCertificate {
    pub radical: SpanBasis,
    pub nilpotency_index: usize,
    /// Complete set of orthogonal primitive idempotents, in canonical order.
    pub idempotents: Vec<Elem>,
    /// `Jac(eᵢReᵢ)` in ambient coordinates, one per idempotent.
    pub corner_radicals: Vec<SpanBasis>,
}

impl SemiperfectCertificate {
    /// Orthogonality, completeness and locality of every corner.
    pub fn verify(&self, r: &FiniteRing) -> bool {
        let es = &self.idempotents;
        let sum = es.iter().fold(r.zero(), |acc, e| r.add(&acc, e));
        let complete = if r.is_zero_ring() { es.is_empty() } else { sum == r.unity() };
        let orthogonal = es.iter().enumerate().all(|(i, a)| {
            es.iter()
                .enumerate()
                .all(|(j, b)| if i == j { r.is_idempotent(a) } else { r.is_zero(&r.mul(a, b)) })
        });
        let local = es.iter().zip(&self.corner_radicals).all(|(e, rad)| match peirce_corner(r, e) {
            Ok(c) => is_local(c.ring()) && c.span_to_ambient(&jacobson_radical(c.ring())) == *rad,
            Err(_) => false,
        });
        complete && orthogonal && local && es.len() == self.corner_radicals.len()
    }
}

fn canonical_key(x: &Elem) -> (usize, Elem) {
    (x.iter().position(|&v| v != 0).unwrap_or(x.len()), x.clone())
}

/// Splits `1` into orthogonal primitive idempotents.
///
/// Each non-local corner `eRe` contains an element that is neither a unit nor
/// nilpotent; its associated idempotent splits `e` into two orthogonal pieces.
pub fn semiperfect_certificate(r: &FiniteRing, settings: &Settings) -> SemiperfectCertificate {
    let chain = radical_power_chain(r);
    let mut done = Vec::new();
    if !r.is_zero_ring() {
        let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
        let mut stack = vec![r.unity()];
        while let Some(e) = stack.pop() {
            let corner = peirce_corner(r, &e).expect("e is idempotent");
            let c = corner.ring();
            if is_local(c) {
                done.push(e);
                continue;
            }
            let g = corner.to_ambient(&splitting_idempotent(c, settings, &mut rng));
            stack.push(r.sub(&e, &g));
            stack.push(g);
        }
    }
    done.sort_by_key(canonical_key);
    let corner_radicals = done
        .iter()
        .map(|e| {
            let c = peirce_corner(r, e).expect("e is idempotent");
            c.span_to_ambient(&jacobson_radical(c.ring()))
        })
        .collect();
    SemiperfectCertificate {
        radical: chain.radical,
        nilpotency_index: chain.nilpotency_index,
        idempotents: done,
        corner_radicals,
    }
}

/// An idempotent other than 0 and 1 in a non-local ring.
fn splitting_idempotent(c: &FiniteRing, settings: &Settings, rng: &mut ChaCha8Rng) -> Elem {
    let (zero, one) = (c.zero(), c.unity());
    let try_elem = |x: &Elem| -> Option<Elem> {
        let e = associated_idempotent(c, x).idempotent;
        (e != zero && e != one).then_some(e)
    };
    let basis = c.basis();
    for b in &basis {
        if let Some(e) = try_elem(b) {
            return e;
        }
    }
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if let Some(e) = try_elem(&c.add(&basis[i], &basis[j])) {
                return e;
            }
        }
    }
    for _ in 0..512 {
        let x: Elem = c.orders().iter().map(|&o| rng.gen_range(0..o)).collect();
        if let Some(e) = try_elem(&x) {
            return e;
        }
    }
    if settings.check_cap(c.size()).is_ok() {
        for x in c.elements() {
            if let Some(e) = try_elem(&x) {
                return e;
            }
        }
    }
    panic!("non-local ring without a splitting element");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{matrix_ring, product, upper_triangular, zn_ring};

    #[test]
    fn lifting_examples() {
        let z4 = zn_ring(4).unwrap();
        let j = z4.span_of(&[vec![2]]);
        let l = lift_idempotent(&z4, &j, &[3]).unwrap();
        assert_eq!(l.idempotent, vec![1]);
        assert_eq!(l.iterations, 1);
        assert_eq!(lift_idempotent(&z4, &j, &[1]).unwrap().iterations, 0);
        assert!(matches!(lift_idempotent(&z4, &z4.full_span(), &[1]), Err(Error::NotNilIdeal)));
        let z8 = zn_ring(8).unwrap();
        let j = z8.span_of(&[vec![2]]);
        let l = lift_idempotent(&z8, &j, &[5]).unwrap();
        assert_eq!(l.idempotent, vec![1]);
        assert!(l.iterations <= l.bound);
        let z6 = zn_ring(6).unwrap();
        assert!(matches!(
            lift_idempotent(&z6, &z6.zero_span(), &[2]),
            Err(Error::DefectNotInIdeal)
        ));
    }

    #[test]
    fn locality() {
        assert!(is_local(&zn_ring(4).unwrap()));
        assert!(is_local(&zn_ring(9).unwrap()));
        assert!(!is_local(&zn_ring(6).unwrap()));
        assert!(!is_local(&matrix_ring(2, 2).unwrap()));
        let f2 = zn_ring(2).unwrap();
        assert!(!is_local(&product(&[&f2, &f2]).unwrap()));
    }

    #[test]
    fn certificates() {
        let s = Settings::default();
        let z4 = zn_ring(4).unwrap();
        assert_eq!(semiperfect_certificate(&z4, &s).idempotents, vec![vec![1]]);
        let m2 = matrix_ring(2, 2).unwrap();
        let c = semiperfect_certificate(&m2, &s);
        assert_eq!(c.idempotents, vec![vec![1, 0, 0, 0], vec![0, 0, 0, 1]]);
        assert!(c.verify(&m2));
        let z6 = zn_ring(6).unwrap();
        let c = semiperfect_certificate(&z6, &s);
        assert_eq!(c.idempotents, vec![vec![3], vec![4]]);
        assert!(c.verify(&z6));
        let t2 = upper_triangular(2, 3).unwrap();
        let c = semiperfect_certificate(&t2, &s);
        assert_eq!(c.idempotents.len(), 2);
        assert!(c.verify(&t2));
    }
}
