use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::{Elem, FiniteRing};
use crate::error::{Error, Result};
use crate::linalg::{LayoutMap, SpanBasis};

/// A unital ring homomorphism, stored by the images of the source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingHom {
    source: FiniteRing,
    target: FiniteRing,
    map: LayoutMap,
}

impl Serialize for RingHom {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RingHom", 1)?;
        st.serialize_field("images", self.map.images())?;
        st.end()
    }
}

impl RingHom {
    /// Validates additivity, multiplicativity on basis pairs and unitality.
    pub fn new(source: &FiniteRing, target: &FiniteRing, images: Vec<Elem>) -> Result<Self> {
        let map = LayoutMap::new(source.layout().clone(), target.layout().clone(), images)
            .map_err(|e| Error::NotHomomorphism(e.to_string()))?;
        let h = RingHom { source: source.clone(), target: target.clone(), map };
        h.check()?;
        Ok(h)
    }

    /// Builds the hom from a function on basis elements, then validates it.
    pub fn from_fn<F>(source: &FiniteRing, target: &FiniteRing, f: F) -> Result<Self>
    where
        F: Fn(&[u64]) -> Elem,
    {
        let images = source.basis().iter().map(|b| f(b)).collect();
        Self::new(source, target, images)
    }

    fn check(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.apply(&s.unity()) != t.unity() {
            return Err(Error::NotHomomorphism("unity is not preserved".into()));
        }
        let imgs = self.map.images();
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                if self.apply(&s.basis_product(i, j)) != t.mul(&imgs[i], &imgs[j]) {
                    return Err(Error::NotHomomorphism(format!("fails on basis pair ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    pub fn identity(r: &FiniteRing) -> Self {
        RingHom::new(r, r, r.basis()).expect("identity is a hom")
    }

    /// Conjugation `x ↦ u x u⁻¹` by a unit.
    pub fn conjugation(r: &FiniteRing, u: &[u64]) -> Result<Self> {
        let inv = r
            .try_invert(u)
            .ok_or_else(|| Error::InvalidInput("conjugating element is not a unit".into()))?;
        RingHom::from_fn(r, r, |x| r.mul(&r.mul(u, x), &inv))
    }

    /// Coordinate-wise reduction between rings sharing a basis (e.g. `R/p^{i+1} → R/p^i`).
    pub fn reduction(source: &FiniteRing, target: &FiniteRing) -> Result<Self> {
        if source.dim() != target.dim() {
            return Err(Error::DimensionMismatch { expected: target.dim(), found: source.dim() });
        }
        RingHom::new(source, target, source.basis())
    }

    pub fn source(&self) -> &FiniteRing {
        &self.source
    }

    pub fn target(&self) -> &FiniteRing {
        &self.target
    }

    pub fn map(&self) -> &LayoutMap {
        &self.map
    }

    pub fn images(&self) -> &[Elem] {
        self.map.images()
    }

    pub fn apply(&self, x: &[u64]) -> Elem {
        self.map.apply(x)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &RingHom) -> Result<RingHom> {
        if self.target != next.source {
            return Err(Error::RingMismatch);
        }
        Ok(RingHom { source: self.source.clone(), target: next.target.clone(), map: self.map.then(&next.map) })
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn is_identity(&self) -> bool {
        self.is_endomorphism() && self.map.images() == self.source.basis().as_slice()
    }

    pub fn kernel(&self) -> SpanBasis {
        self.map.kernel()
    }

    pub fn image(&self) -> SpanBasis {
        self.map.image()
    }

    pub fn is_surjective(&self) -> bool {
        self.map.is_surjective()
    }

    pub fn is_injective(&self) -> bool {
        self.map.is_injective()
    }
}
