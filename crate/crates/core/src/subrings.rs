//! Subrings, semi-invariance constructions and the radical-power inclusion.

use serde::ser::{Serialize as SerializeTrait, SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Layout, LayoutMap, SpanBasis};
use crate::ring::{
    product, radical_power_chain, semiperfect_certificate, Elem, ExtractedRing, FiniteRing, RingHom,
    SemiperfectCertificate,
};
use crate::settings::Settings;

/// A subring (same unity) of an ambient ring, with a standalone presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subring {
    ambient: FiniteRing,
    extracted: ExtractedRing,
}

impl SerializeTrait for Subring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Subring", 3)?;
        st.serialize_field("span", self.span())?;
        st.serialize_field("generators", self.extracted.generators())?;
        st.serialize_field("ring", self.ring())?;
        st.end()
    }
}

impl Subring {
    pub fn from_span(ambient: &FiniteRing, span: &SpanBasis) -> Result<Self> {
        if !ambient.span_contains(span, &ambient.unity()) {
            return Err(Error::NotSubring("unity is not in the span".into()));
        }
        if !ambient.span_mul(span, span).is_subset_of(span) {
            return Err(Error::NotSubring("span is not closed under products".into()));
        }
        let extracted = ExtractedRing::new(ambient, span, &ambient.unity())?;
        Ok(Subring { ambient: ambient.clone(), extracted })
    }

    pub fn full(ambient: &FiniteRing) -> Self {
        Self::from_span(ambient, &ambient.full_span()).expect("R is a subring of itself")
    }

    pub fn ambient(&self) -> &FiniteRing {
        &self.ambient
    }

    pub fn span(&self) -> &SpanBasis {
        self.extracted.span()
    }

    /// The subring as a ring in its own right.
    pub fn ring(&self) -> &FiniteRing {
        self.extracted.ring()
    }

    pub fn extracted(&self) -> &ExtractedRing {
        &self.extracted
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.ambient.span_contains(self.span(), x)
    }

    pub fn size(&self) -> Option<u128> {
        self.span().size()
    }

    /// Elements in ambient coordinates.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.ambient.span_elements(self.span())
    }
}

/// Smallest subring containing the generators.
pub fn subring_closure(r: &FiniteRing, generators: &[Elem]) -> Subring {
    let mut gens = generators.to_vec();
    gens.push(r.unity());
    let mut span = r.span_of(&gens);
    loop {
        let next = span.sum(&r.span_mul(&span, &span));
        if next == span {
            break;
        }
        span = next;
    }
    Subring::from_span(r, &span).expect("closure is a subring")
}

/// `{r : xr = rx for all x ∈ X}`.
pub fn centralizer(r: &FiniteRing, xs: &[Elem]) -> Subring {
    let span = r.commutator_map(xs).kernel();
    Subring::from_span(r, &span).expect("centralizers are subrings")
}

/// Kernel of `x ↦ (φ₁(x) − φ₂(x))` over a list of hom pairs with a common source.
fn equalizer_span(r: &FiniteRing, pairs: &[(&RingHom, &RingHom)]) -> Result<SpanBasis> {
    let mut orders = Vec::new();
    let mut modulus = r.modulus();
    for (a, b) in pairs {
        if a.source() != r || b.source() != r {
            return Err(Error::RingMismatch);
        }
        if a.target() != b.target() {
            return Err(Error::RingMismatch);
        }
        orders.extend_from_slice(a.target().orders());
        modulus = crate::linalg::zn::lcm(modulus, a.target().modulus());
    }
    if pairs.is_empty() {
        return Ok(r.full_span());
    }
    let target = Layout::new(modulus, orders)?;
    let images = r
        .basis()
        .iter()
        .map(|b| {
            pairs
                .iter()
                .flat_map(|(p, q)| p.target().sub(&p.apply(b), &q.apply(b)))
                .collect()
        })
        .collect();
    Ok(LayoutMap::new(r.layout().clone(), target, images)?.kernel())
}

/// `R^Σ` for a list of ring endomorphisms.
pub fn invariant_subring(r: &FiniteRing, sigmas: &[RingHom]) -> Result<Subring> {
    for s in sigmas {
        if s.source() != r || s.target() != r {
            return Err(Error::NotEndomorphism("map is not an endomorphism of the ambient ring".into()));
        }
    }
    let id = RingHom::identity(r);
    let pairs: Vec<(&RingHom, &RingHom)> = sigmas.iter().map(|s| (s, &id)).collect();
    Subring::from_span(r, &equalizer_span(r, &pairs)?)
}

/// A pair of homs out of the ambient ring into a common target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqualizerTriple {
    pub first: RingHom,
    pub second: RingHom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqualizerSpec {
    pub triples: Vec<EqualizerTriple>,
}

impl EqualizerSpec {
    pub fn new(triples: Vec<(RingHom, RingHom)>) -> Self {
        EqualizerSpec {
            triples: triples.into_iter().map(|(first, second)| EqualizerTriple { first, second }).collect(),
        }
    }

    /// The spec whose equalizer is `R^Σ`.
    pub fn invariant(r: &FiniteRing, sigmas: &[RingHom]) -> Self {
        Self::new(sigmas.iter().map(|s| (s.clone(), RingHom::identity(r))).collect())
    }

    /// The spec whose equalizer is the centralizer of a set of units.
    pub fn centralizer_of_units(r: &FiniteRing, units: &[Elem]) -> Result<Self> {
        let triples = units
            .iter()
            .map(|u| Ok((RingHom::conjugation(r, u)?, RingHom::identity(r))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(triples))
    }
}

/// `{r : ψ⁽¹⁾ᵢ(r) = ψ⁽²⁾ᵢ(r) for all i}`.
pub fn equalizer_subring(r: &FiniteRing, spec: &EqualizerSpec) -> Result<Subring> {
    let pairs: Vec<(&RingHom, &RingHom)> = spec.triples.iter().map(|t| (&t.first, &t.second)).collect();
    Subring::from_span(r, &equalizer_span(r, &pairs)?)
}

/// `S = ∏ (Sᵢ × Sᵢ)`, the embedding `Ψ` and the swap `σ`, with coherence checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductEqualizer {
    pub ring: FiniteRing,
    pub embedding: RingHom,
    pub involution: RingHom,
    /// `S^σ`.
    pub fixed: SpanBasis,
    /// `Ψ⁻¹(S^σ)` in ambient coordinates.
    pub pulled_back: SpanBasis,
    pub embedding_injective: bool,
    pub involution_squares_to_identity: bool,
    pub matches_equalizer: bool,
}

pub fn build_product_equalizer(r: &FiniteRing, spec: &EqualizerSpec) -> Result<ProductEqualizer> {
    let id = RingHom::identity(r);
    let mut homs: Vec<(&RingHom, &RingHom)> = vec![(&id, &id)];
    homs.extend(spec.triples.iter().map(|t| (&t.first, &t.second)));
    let factors: Vec<&FiniteRing> = homs
        .iter()
        .flat_map(|(a, _)| [a.target(), a.target()])
        .collect();
    let s = product(&factors)?;
    let embedding = RingHom::from_fn(r, &s, |x| {
        homs.iter()
            .flat_map(|(a, b)| a.apply(x).into_iter().chain(b.apply(x)))
            .collect()
    })?;
    // blocks (i,1) and (i,2) are adjacent with equal sizes
    let mut swap_of = vec![0usize; s.dim()];
    let mut offset = 0;
    for (a, _) in &homs {
        let d = a.target().dim();
        for k in 0..d {
            swap_of[offset + k] = offset + d + k;
            swap_of[offset + d + k] = offset + k;
        }
        offset += 2 * d;
    }
    let involution = RingHom::from_fn(&s, &s, |x| {
        let mut y = vec![0; x.len()];
        for (i, &v) in x.iter().enumerate() {
            y[swap_of[i]] = v;
        }
        y
    })?;
    let id_s = RingHom::identity(&s);
    let fixed = equalizer_span(&s, &[(&involution, &id_s)])?;
    let pulled_back = embedding.map().preimage(&fixed);
    let equalizer = equalizer_subring(r, spec)?;
    Ok(ProductEqualizer {
        embedding_injective: embedding.is_injective(),
        involution_squares_to_identity: involution.then(&involution)?.is_identity(),
        matches_equalizer: pulled_back == *equalizer.span(),
        ring: s,
        embedding,
        involution,
        fixed,
        pulled_back,
    })
}

/// `S'' = S ⊕ S·x̄` with `x̄ s = σ(s) x̄`, `x̄² = 1`, and `τ` = conjugation by `x̄`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedQuotient {
    pub ring: FiniteRing,
    pub xbar: Elem,
    pub tau: RingHom,
    pub tau_squares_to_identity: bool,
    #[serde(skip)]
    base: FiniteRing,
    #[serde(skip)]
    sigma: RingHom,
}

impl TwistedQuotient {
    /// `s ↦ s + 0·x̄`.
    pub fn embed(&self, s: &[u64]) -> Elem {
        s.iter().copied().chain(std::iter::repeat(0).take(s.len())).collect()
    }

    pub fn embedding(&self) -> RingHom {
        RingHom::from_fn(&self.base, &self.ring, |s| self.embed(s)).expect("S embeds in S''")
    }

    /// `(R^σ, R^τ)` for a subring span `R ⊆ S`, both in the coordinates of `S`.
    pub fn fixed_rings(&self, sub: &SpanBasis) -> Result<(SpanBasis, SpanBasis)> {
        let id = RingHom::identity(&self.base);
        let sigma_fixed = equalizer_span(&self.base, &[(&self.sigma, &id)])?.intersect(sub);
        let id2 = RingHom::identity(&self.ring);
        let tau_fixed = equalizer_span(&self.ring, &[(&self.tau, &id2)])?;
        let tau_fixed = self.embedding().map().preimage(&tau_fixed).intersect(sub);
        Ok((sigma_fixed, tau_fixed))
    }
}

pub fn build_twisted_involution_quotient(s: &FiniteRing, sigma: &RingHom) -> Result<TwistedQuotient> {
    if sigma.source() != s || sigma.target() != s {
        return Err(Error::NotEndomorphism("σ must be an endomorphism of S".into()));
    }
    if !sigma.then(sigma)?.is_identity() {
        return Err(Error::NotInvolution);
    }
    let d = s.dim();
    let layout = Layout::new(s.modulus(), s.orders().iter().chain(s.orders()).copied().collect())?;
    let split = |k: usize| (k % d, k >= d);
    let sig: Vec<Elem> = s.basis().iter().map(|b| sigma.apply(b)).collect();
    let ring = FiniteRing::from_products(
        layout,
        |a, b| {
            let ((i, xa), (j, xb)) = (split(a), split(b));
            // (bᵢ x̄^ε)(bⱼ x̄^δ) = bᵢ σ^ε(bⱼ) x̄^(ε+δ)
            let right = if xa { sig[j].clone() } else { s.basis_element(j) };
            let prod = s.mul(&s.basis_element(i), &right);
            if xa ^ xb {
                std::iter::repeat(0).take(d).chain(prod).collect()
            } else {
                prod.into_iter().chain(std::iter::repeat(0).take(d)).collect()
            }
        },
        s.unity().into_iter().chain(std::iter::repeat(0).take(d)).collect(),
        None,
    )?;
    let xbar: Elem = std::iter::repeat(0).take(d).chain(s.unity()).collect();
    let tau = RingHom::conjugation(&ring, &xbar)?;
    let tau_squares_to_identity = tau.then(&tau)?.is_identity();
    Ok(TwistedQuotient { ring, xbar, tau, tau_squares_to_identity, base: s.clone(), sigma: sigma.clone() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalClosure {
    pub closed: bool,
    /// A unit of the ambient ring lying in the span whose inverse does not.
    pub witness: Option<Elem>,
    pub witness_inverse: Option<Elem>,
}

/// Whether every ambient unit in the span has its inverse in the span.
pub fn rationally_closed_span(r: &FiniteRing, span: &SpanBasis, settings: &Settings) -> Result<RationalClosure> {
    settings.check_cap(span.size())?;
    for x in r.span_elements(span) {
        if let Some(y) = r.try_invert(&x) {
            if !r.span_contains(span, &y) {
                return Ok(RationalClosure { closed: false, witness: Some(x), witness_inverse: Some(y) });
            }
        }
    }
    Ok(RationalClosure { closed: true, witness: None, witness_inverse: None })
}

pub fn rationally_closed_check(r0: &Subring, settings: &Settings) -> Result<RationalClosure> {
    rationally_closed_span(r0.ambient(), r0.span(), settings)
}

pub fn intersect(a: &Subring, b: &Subring) -> Result<Subring> {
    if a.ambient != b.ambient {
        return Err(Error::AmbientMismatch);
    }
    Subring::from_span(&a.ambient, &a.span().intersect(b.span()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainTheoremReport {
    /// Least `n ≥ 1` with `Jac(R₀)ⁿ ⊆ Jac(R)`.
    pub n_min: usize,
    pub jac_ambient: SpanBasis,
    /// `Jac(R₀)`, computed intrinsically and written in ambient coordinates.
    pub jac_subring: SpanBasis,
    pub nilpotency_index_ambient: usize,
    pub nilpotency_index_subring: usize,
    /// Composition length of `R/Jac(R)`: the number of primitive idempotents.
    pub length_bound: usize,
    pub certificate_ambient: SemiperfectCertificate,
    /// Certificate of `R₀`, in the coordinates of its own presentation.
    pub certificate_subring: SemiperfectCertificate,
    pub subring_idempotents_in_ambient: Vec<Elem>,
}

pub fn verify_main_theorem(r0: &Subring, settings: &Settings) -> MainTheoremReport {
    let r = r0.ambient();
    let certificate_ambient = semiperfect_certificate(r, settings);
    let certificate_subring = semiperfect_certificate(r0.ring(), settings);
    let chain0 = radical_power_chain(r0.ring());
    let jac_subring = r0.extracted().span_to_ambient(&chain0.radical);
    let jac_ambient = certificate_ambient.radical.clone();
    let mut power = jac_subring.clone();
    let mut n_min = 1;
    while !power.is_subset_of(&jac_ambient) {
        power = r.span_mul(&power, &jac_subring);
        n_min += 1;
    }
    MainTheoremReport {
        n_min,
        nilpotency_index_ambient: certificate_ambient.nilpotency_index,
        nilpotency_index_subring: chain0.nilpotency_index,
        length_bound: certificate_ambient.idempotents.len(),
        subring_idempotents_in_ambient: certificate_subring
            .idempotents
            .iter()
            .map(|e| r0.extracted().to_ambient(e))
            .collect(),
        jac_ambient,
        jac_subring,
        certificate_ambient,
        certificate_subring,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ring::{center, matrix_ring, zn_ring};

    #[test]
    fn closures() {
        let m2 = matrix_ring(2, 2).unwrap();
        let prime = subring_closure(&m2, &[]);
        assert_eq!(prime.size(), Some(2));
        let diag = subring_closure(&m2, &[m2.basis_element(0)]);
        assert_eq!(diag.span(), &m2.span_of(&[m2.unity(), m2.basis_element(0)]));
        assert_eq!(subring_closure(&m2, &m2.basis()).span(), &m2.full_span());
    }

    #[test]
    fn centralizers() {
        let m2 = matrix_ring(2, 2).unwrap();
        assert_eq!(centralizer(&m2, &[m2.unity()]).span(), &m2.full_span());
        assert_eq!(centralizer(&m2, &m2.basis()).span(), &center(&m2));
        let m24 = matrix_ring(2, 4).unwrap();
        let n = m24.basis_element(1);
        let c = centralizer(&m24, &[n.clone()]);
        assert_eq!(c.span(), &m24.span_of(&[m24.unity(), n]));
        assert_eq!(c.size(), Some(16));
    }

    #[test]
    fn invariants() {
        let r = catalog::ring("f2xf2").unwrap();
        let swap = RingHom::new(&r, &r, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let inv = invariant_subring(&r, &[swap]).unwrap();
        assert_eq!(inv.span(), &r.span_of(&[vec![1, 1]]));
        let m2 = matrix_ring(2, 2).unwrap();
        let u = vec![0, 1, 1, 0];
        let conj = RingHom::conjugation(&m2, &u).unwrap();
        assert_eq!(invariant_subring(&m2, &[conj]).unwrap().span(), centralizer(&m2, &[u]).span());
    }

    #[test]
    fn main_theorem_fixture() {
        let m24 = matrix_ring(2, 4).unwrap();
        let r0 = centralizer(&m24, &[m24.basis_element(1)]);
        let rep = verify_main_theorem(&r0, &Settings::default());
        assert_eq!(rep.n_min, 2);
        assert_eq!(rep.jac_subring, m24.span_of(&[vec![2, 0, 0, 2], vec![0, 1, 0, 0]]));
        assert_eq!(verify_main_theorem(&Subring::full(&m24), &Settings::default()).n_min, 1);
    }

    #[test]
    fn field_inside_matrix_ring() {
        let r = catalog::ring("m2-f4").unwrap();
        // companion matrix of x^2 + x + 1 over F_2, embedded in M2(F4): [[0,1],[1,1]]
        let one = |k: usize| {
            let mut v = vec![0; 8];
            v[2 * k] = 1;
            v
        };
        let c = r.add(&r.add(&one(1), &one(2)), &one(3));
        let r0 = centralizer(&r, &[c]);
        let rep = verify_main_theorem(&r0, &Settings::default());
        assert_eq!(rep.n_min, 1);
        assert!(rep.jac_subring.is_zero());
    }

    #[test]
    fn rational_closure_on_spans() {
        let z6 = zn_ring(6).unwrap();
        let s = Settings::default();
        assert!(rationally_closed_check(&Subring::full(&z6), &s).unwrap().closed);
        // span{1, α} in F8 contains 1 + α, whose inverse α² + α lies outside
        let f8 = catalog::ring("f8").unwrap();
        let span = f8.span_of(&[vec![1, 0, 0], vec![0, 1, 0]]);
        let rc = rationally_closed_span(&f8, &span, &s).unwrap();
        assert!(!rc.closed);
        let w = rc.witness.unwrap();
        assert_eq!(f8.mul(&w, &rc.witness_inverse.unwrap()), f8.unity());
    }

    #[test]
    fn product_equalizer_on_diagonal() {
        let m2 = matrix_ring(2, 2).unwrap();
        let id = RingHom::identity(&m2);
        let pe = build_product_equalizer(&m2, &EqualizerSpec::new(vec![(id.clone(), id)])).unwrap();
        assert!(pe.matches_equalizer && pe.involution_squares_to_identity && pe.embedding_injective);
        assert_eq!(pe.pulled_back, m2.full_span());
    }

    #[test]
    fn twisted_quotient_swap() {
        let r = catalog::ring("f2xf2").unwrap();
        let swap = RingHom::new(&r, &r, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let tq = build_twisted_involution_quotient(&r, &swap).unwrap();
        assert_eq!(tq.ring.dim(), 4);
        assert!(tq.tau_squares_to_identity);
        let (s, t) = tq.fixed_rings(&r.full_span()).unwrap();
        assert_eq!(s, t);
        assert_eq!(s, r.span_of(&[vec![1, 1]]));
        let f8 = catalog::ring("f8").unwrap();
        let frob = RingHom::from_fn(&f8, &f8, |x| f8.mul(x, x)).unwrap();
        assert!(matches!(build_twisted_involution_quotient(&f8, &frob), Err(Error::NotInvolution)));
    }
}
