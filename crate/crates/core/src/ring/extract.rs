//! Rings carved out of a given ring: subrings, corners and quotients.

use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::{Elem, FiniteRing};
use crate::error::{Error, Result};
use crate::linalg::{CyclicBasis, LayoutMap, QuotientLayout, SpanBasis};

/// A multiplicatively closed span with its own unity, presented as a standalone ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractedRing {
    ring: FiniteRing,
    basis: CyclicBasis,
}

impl Serialize for ExtractedRing {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExtractedRing", 3)?;
        st.serialize_field("span", self.basis.span())?;
        st.serialize_field("generators", self.basis.generators())?;
        st.serialize_field("ring", &self.ring)?;
        st.end()
    }
}

impl ExtractedRing {
    /// `span` must be closed under the ambient product, with `unity` acting as its identity.
    pub fn new(ambient: &FiniteRing, span: &SpanBasis, unity: &[u64]) -> Result<Self> {
        let basis = CyclicBasis::new(ambient.layout(), span);
        let gens = basis.generators();
        let unity_coords = basis
            .coordinates(unity)
            .ok_or_else(|| Error::NotSubring("unity is not in the span".into()))?;
        let mut products = Vec::with_capacity(gens.len() * gens.len());
        for a in gens {
            for b in gens {
                let p = basis
                    .coordinates(&ambient.mul(a, b))
                    .ok_or_else(|| Error::NotSubring("span is not closed under products".into()))?;
                products.push(p);
            }
        }
        let r = gens.len();
        let ring = FiniteRing::from_products(basis.layout(), |i, j| products[i * r + j].clone(), unity_coords, None)?;
        Ok(ExtractedRing { ring, basis })
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn basis(&self) -> &CyclicBasis {
        &self.basis
    }

    /// The span in ambient coordinates.
    pub fn span(&self) -> &SpanBasis {
        self.basis.span()
    }

    /// Generators of the extracted basis in ambient coordinates.
    pub fn generators(&self) -> &[Elem] {
        self.basis.generators()
    }

    pub fn to_ambient(&self, y: &[u64]) -> Elem {
        self.basis.element(y)
    }

    pub fn from_ambient(&self, x: &[u64]) -> Option<Elem> {
        self.basis.coordinates(x)
    }

    /// Embedding as an additive map into the ambient group.
    pub fn embedding(&self) -> LayoutMap {
        self.basis.inclusion()
    }

    /// A span of the extracted ring, in ambient coordinates.
    pub fn span_to_ambient(&self, s: &SpanBasis) -> SpanBasis {
        self.embedding().image_of(s)
    }

    /// A span of ambient elements lying in the extracted ring, in its own coordinates.
    pub fn span_from_ambient(&self, ambient: &FiniteRing, s: &SpanBasis) -> Option<SpanBasis> {
        let coords: Option<Vec<Elem>> = ambient
            .span_generators(s)
            .iter()
            .map(|x| self.from_ambient(x))
            .collect();
        Some(self.ring.span_of(&coords?))
    }
}

/// The corner `eRe` with unity `e`.
pub fn peirce_corner(r: &FiniteRing, e: &[u64]) -> Result<ExtractedRing> {
    if !r.is_idempotent(e) {
        return Err(Error::NotIdempotent);
    }
    let sandwich = LayoutMap::from_fn(r.layout().clone(), r.layout().clone(), |x| r.mul(&r.mul(e, x), e))?;
    ExtractedRing::new(r, &sandwich.image(), e)
}

/// `R/I` for a two-sided ideal `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientRing {
    ring: FiniteRing,
    quotient: QuotientLayout,
}

impl Serialize for QuotientRing {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QuotientRing", 2)?;
        st.serialize_field("ideal", self.quotient.sub())?;
        st.serialize_field("ring", &self.ring)?;
        st.end()
    }
}

impl QuotientRing {
    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn ideal(&self) -> &SpanBasis {
        self.quotient.sub()
    }

    pub fn project(&self, x: &[u64]) -> Elem {
        self.quotient.project(x)
    }

    /// Some preimage of a class.
    pub fn lift(&self, y: &[u64]) -> Elem {
        self.quotient.lift(y)
    }

    pub fn projection(&self) -> &LayoutMap {
        self.quotient.projection()
    }
}

pub fn quotient_ring(r: &FiniteRing, ideal: &SpanBasis) -> Result<QuotientRing> {
    if !r.is_ideal(ideal) {
        return Err(Error::InvalidInput("span is not a two-sided ideal".into()));
    }
    let quotient = QuotientLayout::new(r.layout(), ideal);
    let section: Vec<Elem> = quotient.layout().basis().iter().map(|y| quotient.lift(y)).collect();
    let n = section.len();
    let products: Vec<Elem> = section
        .iter()
        .flat_map(|a| section.iter().map(|b| quotient.project(&r.mul(a, b))).collect::<Vec<_>>())
        .collect();
    let unity = quotient.project(&r.unity());
    let ring = FiniteRing::from_products(quotient.layout().clone(), |i, j| products[i * n + j].clone(), unity, None)?;
    Ok(QuotientRing { ring, quotient })
}

/// `Cent(R)` as a span.
pub fn center(r: &FiniteRing) -> SpanBasis {
    r.commutator_map(&r.basis()).kernel()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{jacobson_radical, matrix_ring, upper_triangular, zn_ring};

    #[test]
    fn corners() {
        let z6 = zn_ring(6).unwrap();
        let c = peirce_corner(&z6, &[4]).unwrap();
        assert_eq!(c.ring().size(), Some(3));
        let mut elems: Vec<_> = z6.span_elements(c.span()).collect();
        elems.sort();
        assert_eq!(elems, vec![vec![0], vec![2], vec![4]]);
        assert_eq!(c.to_ambient(&c.ring().unity()), vec![4]);
        assert!(matches!(peirce_corner(&z6, &[2]), Err(Error::NotIdempotent)));

        let m2 = matrix_ring(2, 2).unwrap();
        let c = peirce_corner(&m2, &m2.basis_element(0)).unwrap();
        assert_eq!(c.ring().size(), Some(2));
        let whole = peirce_corner(&m2, &m2.unity()).unwrap();
        assert_eq!(whole.span(), &m2.full_span());
    }

    #[test]
    fn centers() {
        let m2 = matrix_ring(2, 2).unwrap();
        assert_eq!(center(&m2), m2.span_of(&[m2.unity()]));
        let t2 = upper_triangular(2, 2).unwrap();
        assert_eq!(center(&t2), t2.span_of(&[t2.unity()]));
        let z6 = zn_ring(6).unwrap();
        assert_eq!(center(&z6), z6.full_span());
    }

    #[test]
    fn quotient_by_radical_is_semisimple() {
        let t2 = upper_triangular(2, 3).unwrap();
        let q = quotient_ring(&t2, &jacobson_radical(&t2)).unwrap();
        assert_eq!(q.ring().size(), Some(9));
        assert!(jacobson_radical(q.ring()).is_zero());
    }
}
