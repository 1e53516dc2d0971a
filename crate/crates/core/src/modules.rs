//! Finite right modules over finite rings, their Hom and End rings,
//! presentations, Krull-Schmidt decompositions and restriction of scalars.

use std::cmp::Reverse;

use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitting::associated_idempotent;
use crate::linalg::{zn, CyclicBasis, Layout, LayoutMap, QuotientLayout, SpanBasis};
use crate::ring::{
    is_local, product, quotient_ring, semiperfect_certificate, Elem, FiniteRing, RingHom,
    SemiperfectCertificate,
};
use crate::settings::Settings;
use crate::subrings::{centralizer, verify_main_theorem, MainTheoremReport, Subring};

/// A finite right module: an additive group `⊕ Z/o_i` with `x ↦ x·b_j` for each ring basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModule {
    ring: FiniteRing,
    layout: Layout,
    action: Vec<LayoutMap>,
}

impl Serialize for FiniteModule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FiniteModule", 2)?;
        st.serialize_field("orders", self.layout.orders())?;
        let action: Vec<&[Elem]> = self.action.iter().map(|a| a.images()).collect();
        st.serialize_field("action", &action)?;
        st.end()
    }
}

/// Interchange format of a module definition file (the ring is resolved separately).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleData {
    pub add_rank: usize,
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
    pub action: Vec<Vec<Vec<i64>>>,
}

fn axiom(msg: impl Into<String>) -> Error {
    Error::ModuleAxiom(msg.into())
}

fn map_sub(a: &LayoutMap, b: &LayoutMap) -> LayoutMap {
    let dst = a.dst();
    let images = a.images().iter().zip(b.images()).map(|(x, y)| dst.sub(x, y)).collect();
    LayoutMap::new(a.src().clone(), dst.clone(), images).expect("difference of homomorphisms")
}

impl FiniteModule {
    /// `action[j][k]` is `e_k · b_j`.
    pub fn new(ring: &FiniteRing, layout: Layout, action: Vec<Vec<Elem>>) -> Result<Self> {
        if action.len() != ring.dim() {
            return Err(Error::DimensionMismatch { expected: ring.dim(), found: action.len() });
        }
        let action = action
            .into_iter()
            .map(|imgs| LayoutMap::new(layout.clone(), layout.clone(), imgs).map_err(|e| axiom(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let m = FiniteModule { ring: ring.clone(), layout, action };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        let r = &self.ring;
        for (j, a) in self.action.iter().enumerate() {
            let o = r.orders()[j];
            if a.images().iter().any(|x| !self.layout.is_zero(&self.layout.scalar(o, x))) {
                return Err(axiom(format!("additive order of basis element {j} does not kill its action")));
            }
        }
        if self.act_map(&r.unity()).images() != self.layout.basis().as_slice() {
            return Err(axiom("unity does not act as the identity"));
        }
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                if self.act_map(&r.basis_product(i, j)) != self.action[i].then(&self.action[j]) {
                    return Err(axiom(format!("action is not multiplicative on basis pair ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    /// `(Z/m)^t` modulo a relation span, with action matrices in row convention `x ↦ x·A_j`.
    pub fn from_data(ring: &FiniteRing, data: &ModuleData) -> Result<Self> {
        let m = ring.modulus();
        let t = data.add_rank;
        let free = Layout::free(m, t);
        for rel in &data.relations {
            if rel.len() != t {
                return Err(Error::DimensionMismatch { expected: t, found: rel.len() });
            }
        }
        let rels: Vec<Elem> = data.relations.iter().map(|r| free.reduce_signed(r)).collect();
        let rel_span = free.span_of(&rels);
        if data.action.len() != ring.dim() {
            return Err(Error::DimensionMismatch { expected: ring.dim(), found: data.action.len() });
        }
        let mut mats = Vec::new();
        for a in &data.action {
            if a.len() != t || a.iter().any(|row| row.len() != t) {
                return Err(axiom("action matrices must be add_rank x add_rank"));
            }
            let rows: Vec<Elem> = a.iter().map(|row| free.reduce_signed(row)).collect();
            let map = LayoutMap::new(free.clone(), free.clone(), rows)?;
            if !map.image_of(&rel_span).is_subset_of(&rel_span) {
                return Err(axiom("action does not preserve the relations"));
            }
            mats.push(map);
        }
        let q = QuotientLayout::new(&free, &rel_span);
        let basis = q.layout().basis();
        let action = mats
            .iter()
            .map(|a| basis.iter().map(|y| q.project(&a.apply(&q.lift(y)))).collect())
            .collect();
        FiniteModule::new(ring, q.layout().clone(), action)
    }

    /// `R_R`.
    pub fn regular(ring: &FiniteRing) -> Self {
        let action = ring.basis().iter().map(|b| ring.right_mul_map(b).images().to_vec()).collect();
        FiniteModule::new(ring, ring.layout().clone(), action).expect("the regular module is a module")
    }

    /// `R^n`.
    pub fn free(ring: &FiniteRing, n: usize) -> Self {
        let reg = FiniteModule::regular(ring);
        FiniteModule::direct_sum(ring, &vec![&reg; n]).expect("same ring")
    }

    pub fn zero(ring: &FiniteRing) -> Self {
        FiniteModule::free(ring, 0)
    }

    pub fn direct_sum(ring: &FiniteRing, parts: &[&FiniteModule]) -> Result<Self> {
        if parts.iter().any(|p| p.ring != *ring) {
            return Err(Error::RingMismatch);
        }
        let orders: Vec<u64> = parts.iter().flat_map(|p| p.layout.orders().iter().copied()).collect();
        let layout = Layout::new(ring.modulus(), orders)?;
        let total = layout.dim();
        let action = (0..ring.dim())
            .map(|j| {
                let mut imgs = Vec::with_capacity(total);
                let mut offset = 0;
                for p in parts {
                    for row in p.action[j].images() {
                        let mut v = vec![0; total];
                        v[offset..offset + row.len()].copy_from_slice(row);
                        imgs.push(v);
                    }
                    offset += p.dim();
                }
                imgs
            })
            .collect();
        FiniteModule::new(ring, layout, action)
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn orders(&self) -> &[u64] {
        self.layout.orders()
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn size(&self) -> Option<u128> {
        self.layout.size()
    }

    /// Least common multiple of the additive orders.
    pub fn exponent(&self) -> u64 {
        self.orders().iter().fold(1, |acc, &o| zn::lcm(acc, o))
    }

    /// `x ↦ x·b_j`.
    pub fn action(&self, j: usize) -> &LayoutMap {
        &self.action[j]
    }

    /// `x ↦ x·r`.
    pub fn act_map(&self, r: &[u64]) -> LayoutMap {
        let d = self.dim();
        let images = (0..d)
            .map(|k| {
                self.action.iter().zip(r).fold(self.layout.zero(), |acc, (a, &c)| {
                    self.layout.add(&acc, &self.layout.scalar(c, &a.images()[k]))
                })
            })
            .collect();
        LayoutMap::new(self.layout.clone(), self.layout.clone(), images).expect("action is additive")
    }

    pub fn act(&self, x: &[u64], r: &[u64]) -> Elem {
        self.action.iter().zip(r).fold(self.layout.zero(), |acc, (a, &c)| {
            self.layout.add(&acc, &self.layout.scalar(c, &a.apply(x)))
        })
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.layout.all_elements()
    }

    /// Submodule generated by the given elements.
    pub fn submodule_generated(&self, xs: &[Elem]) -> SpanBasis {
        let mut span = self.layout.span_of(xs);
        loop {
            let next = self.action.iter().fold(span.clone(), |acc, a| acc.sum(&a.image_of(&span)));
            if next == span {
                return span;
            }
            span = next;
        }
    }

    pub fn is_submodule(&self, span: &SpanBasis) -> bool {
        self.action.iter().all(|a| a.image_of(span).is_subset_of(span))
    }

    /// A submodule as a module in its own right, with its inclusion.
    pub fn submodule(&self, span: &SpanBasis) -> Result<(FiniteModule, LayoutMap)> {
        if !self.is_submodule(span) {
            return Err(axiom("span is not a submodule"));
        }
        let cb = CyclicBasis::new(&self.layout, span);
        let action = self
            .action
            .iter()
            .map(|a| {
                cb.generators()
                    .iter()
                    .map(|g| cb.coordinates(&a.apply(g)).expect("submodule is closed"))
                    .collect()
            })
            .collect();
        let sub = FiniteModule::new(&self.ring, cb.layout(), action)?;
        Ok((sub, cb.inclusion()))
    }

    /// `M/N` for a submodule `N`, with the quotient data.
    pub fn quotient(&self, span: &SpanBasis) -> Result<(FiniteModule, QuotientLayout)> {
        if !self.is_submodule(span) {
            return Err(axiom("span is not a submodule"));
        }
        let q = QuotientLayout::new(&self.layout, span);
        let basis = q.layout().basis();
        let action = self
            .action
            .iter()
            .map(|a| basis.iter().map(|y| q.project(&a.apply(&q.lift(y)))).collect())
            .collect();
        Ok((FiniteModule::new(&self.ring, q.layout().clone(), action)?, q))
    }

    /// Restriction of scalars along a ring hom `φ: R → S` (`self` an `S`-module).
    pub fn restrict(&self, phi: &RingHom) -> Result<FiniteModule> {
        if phi.target() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let action = phi.images().iter().map(|s| self.act_map(s).images().to_vec()).collect();
        FiniteModule::new(phi.source(), self.layout.clone(), action)
    }
}

/// Coordinates on `Hom_Z(⊕Z/o_r, ⊕Z/o'_s) = ⊕ Z/gcd(o_r, o'_s)`.
///
/// Coordinate `(r, s)` is the map sending `e_r` to `(o'_s / g)·e'_s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomLayout {
    src: Layout,
    dst: Layout,
    layout: Layout,
    steps: Vec<u64>,
}

impl HomLayout {
    pub fn new(src: &Layout, dst: &Layout) -> Self {
        let modulus = zn::lcm(src.modulus(), dst.modulus());
        let mut orders = Vec::new();
        let mut steps = Vec::new();
        for &o in src.orders() {
            for &p in dst.orders() {
                let g = zn::gcd(o, p);
                orders.push(g);
                steps.push(p / g);
            }
        }
        let layout = Layout::new(modulus, orders).expect("gcds divide the modulus");
        HomLayout { src: src.clone(), dst: dst.clone(), layout, steps }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn to_map(&self, phi: &[u64]) -> LayoutMap {
        let ds = self.dst.dim();
        let images = (0..self.src.dim())
            .map(|r| {
                (0..ds)
                    .map(|s| {
                        let k = r * ds + s;
                        zn::mul(phi[k] % self.layout.orders()[k], self.steps[k], self.dst.orders()[s])
                    })
                    .collect()
            })
            .collect();
        LayoutMap::new(self.src.clone(), self.dst.clone(), images).expect("coordinates give well-defined maps")
    }

    pub fn from_map(&self, f: &LayoutMap) -> Elem {
        assert!(f.src() == &self.src && f.dst() == &self.dst, "map layouts differ");
        let ds = self.dst.dim();
        let mut phi = vec![0; self.layout.dim()];
        for (r, row) in f.images().iter().enumerate() {
            for (s, &v) in row.iter().enumerate() {
                let k = r * ds + s;
                debug_assert_eq!(v % self.steps[k], 0);
                phi[k] = v / self.steps[k];
            }
        }
        phi
    }
}

/// `End_Z(A)` under composition: `f·g = f∘g`.
pub fn endomorphism_ring_z(layout: &Layout) -> (FiniteRing, HomLayout) {
    let hom = HomLayout::new(layout, layout);
    let maps: Vec<LayoutMap> = hom.layout().basis().iter().map(|b| hom.to_map(b)).collect();
    let id = LayoutMap::from_fn(layout.clone(), layout.clone(), |x| x.to_vec()).expect("identity");
    let n = maps.len();
    let ring = FiniteRing::from_products(
        hom.layout().clone(),
        |i, j| hom.from_map(&maps[j].then(&maps[i])),
        hom.from_map(&id),
        None,
    )
    .expect("composition is associative");
    debug_assert_eq!(ring.dim(), n);
    (ring, hom)
}

/// `Hom_R(M, N)` inside `Hom_Z(M, N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpace {
    hom: HomLayout,
    span: SpanBasis,
}

impl Serialize for HomSpace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HomSpace", 2)?;
        st.serialize_field("orders", self.hom.layout().orders())?;
        st.serialize_field("span", &self.span)?;
        st.end()
    }
}

impl HomSpace {
    pub fn hom_layout(&self) -> &HomLayout {
        &self.hom
    }

    pub fn span(&self) -> &SpanBasis {
        &self.span
    }

    pub fn size(&self) -> Option<u128> {
        self.span.size()
    }

    pub fn to_map(&self, phi: &[u64]) -> LayoutMap {
        self.hom.to_map(phi)
    }

    /// Generating intertwiners as maps.
    pub fn generators(&self) -> Vec<LayoutMap> {
        self.span
            .rows()
            .iter()
            .map(|u| self.hom.to_map(&self.hom.layout().unscale(u)))
            .collect()
    }

    pub fn contains(&self, f: &LayoutMap) -> bool {
        self.hom.layout().contains(&self.span, &self.hom.from_map(f))
    }

    pub fn elements(&self) -> impl Iterator<Item = LayoutMap> + '_ {
        self.hom.layout().elements(&self.span).map(|phi| self.hom.to_map(&phi))
    }
}

pub fn hom_space(m: &FiniteModule, n: &FiniteModule) -> Result<HomSpace> {
    if m.ring != n.ring {
        return Err(Error::RingMismatch);
    }
    let hom = HomLayout::new(&m.layout, &n.layout);
    let d = m.ring.dim();
    let hl = hom.layout();
    let target = Layout::new(hl.modulus(), (0..d).flat_map(|_| hl.orders().iter().copied()).collect())?;
    let defect = LayoutMap::from_fn(hl.clone(), target, |phi| {
        let f = hom.to_map(phi);
        (0..d)
            .flat_map(|j| hom.from_map(&map_sub(&m.action[j].then(&f), &f.then(&n.action[j]))))
            .collect()
    })?;
    Ok(HomSpace { span: defect.kernel(), hom })
}

/// `End_R(M)` as a standalone ring, multiplication being composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndRing {
    hom: HomLayout,
    endz: FiniteRing,
    subring: Subring,
}

impl Serialize for EndRing {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("EndRing", 3)?;
        st.serialize_field("ring", self.ring())?;
        let reps: Vec<Vec<Elem>> = self.representation().iter().map(|f| f.images().to_vec()).collect();
        st.serialize_field("representation", &reps)?;
        st.serialize_field("span", self.subring.span())?;
        st.end()
    }
}

impl EndRing {
    pub fn ring(&self) -> &FiniteRing {
        self.subring.ring()
    }

    /// `End_Z(M)`, the ambient of the endomorphism ring.
    pub fn ambient(&self) -> &FiniteRing {
        &self.endz
    }

    pub fn subring(&self) -> &Subring {
        &self.subring
    }

    pub fn hom_layout(&self) -> &HomLayout {
        &self.hom
    }

    pub fn to_map(&self, y: &[u64]) -> LayoutMap {
        self.hom.to_map(&self.subring.extracted().to_ambient(y))
    }

    pub fn from_map(&self, f: &LayoutMap) -> Option<Elem> {
        self.subring.extracted().from_ambient(&self.hom.from_map(f))
    }

    /// The maps of the ring's basis elements.
    pub fn representation(&self) -> Vec<LayoutMap> {
        self.ring().basis().iter().map(|b| self.to_map(b)).collect()
    }
}

pub fn end_ring(m: &FiniteModule) -> EndRing {
    let (endz, hom) = endomorphism_ring_z(&m.layout);
    let span = hom_space(m, m).expect("same ring").span;
    let subring = Subring::from_span(&endz, &span).expect("endomorphisms form a subring");
    EndRing { hom, endz, subring }
}

/// `R^n → R^m`, row `i` holding the image of the `i`-th free generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    #[serde(skip)]
    ring: FiniteRing,
    cols: usize,
    matrix: Vec<Vec<Elem>>,
}

/// Interchange format of a presentation file (the ring is resolved separately).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationData {
    pub matrix: Vec<Vec<Vec<i64>>>,
    /// Number of columns; needed only when the matrix has no rows.
    #[serde(default)]
    pub cols: Option<usize>,
}

impl Presentation {
    pub fn new(ring: &FiniteRing, cols: usize, matrix: Vec<Vec<Elem>>) -> Result<Self> {
        for row in &matrix {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            for x in row {
                if x.len() != ring.dim() {
                    return Err(Error::DimensionMismatch { expected: ring.dim(), found: x.len() });
                }
            }
        }
        let matrix = matrix
            .into_iter()
            .map(|row| row.into_iter().map(|x| ring.layout().reduce(&x)).collect())
            .collect();
        Ok(Presentation { ring: ring.clone(), cols, matrix })
    }

    pub fn from_data(ring: &FiniteRing, data: &PresentationData) -> Result<Self> {
        let cols = match (data.cols, data.matrix.first()) {
            (Some(c), _) => c,
            (None, Some(row)) => row.len(),
            (None, None) => return Err(Error::InvalidInput("empty presentation needs 'cols'".into())),
        };
        let matrix = data
            .matrix
            .iter()
            .map(|row| row.iter().map(|x| ring.element(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(ring, cols, matrix)
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn source(&self) -> FiniteModule {
        FiniteModule::free(&self.ring, self.rows())
    }

    pub fn target(&self) -> FiniteModule {
        FiniteModule::free(&self.ring, self.cols)
    }

    /// The map `R^n → R^m`.
    pub fn map(&self) -> LayoutMap {
        let (a, b) = (self.source(), self.target());
        let r = &self.ring;
        let d = r.dim();
        let images = (0..self.rows())
            .flat_map(|i| {
                (0..d).map(move |k| {
                    self.matrix[i].iter().flat_map(|x| r.mul(x, &r.basis_element(k))).collect::<Elem>()
                })
            })
            .collect();
        LayoutMap::new(a.layout, b.layout, images).expect("free modules share the ring layout")
    }

    /// The cokernel with its quotient data.
    pub fn cokernel(&self) -> (FiniteModule, QuotientLayout) {
        self.target().quotient(&self.map().image()).expect("the image of a module map is a submodule")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactSequenceReport {
    /// `W₀ ⊆ End(A) × End(B)`.
    pub w0: Subring,
    /// `W₀ → End(C)`, in the coordinates of `W₀`'s and `End(C)`'s presentations.
    pub induced: RingHom,
    pub surjective: bool,
    /// Kernel of the induced map, in `End(A) × End(B)` coordinates.
    pub kernel: SpanBasis,
    /// The kernel equals `{(α, β) ∈ W₀ : im β ⊆ im f}`.
    pub kernel_matches: bool,
    /// `W₀ / kernel ≅ End(C)` through the induced map.
    pub quotient_isomorphic: bool,
    pub end_cokernel_size: Option<u128>,
}

/// `End(C)` as a quotient of `W₀ = {(α, β) : β∘f = f∘α}` for `A → B → C → 0` with `A`, `B` free.
pub fn exact_sequence_ring(p: &Presentation) -> Result<ExactSequenceReport> {
    let (a, b) = (p.source(), p.target());
    let f = p.map();
    let (c, q) = p.cokernel();
    let (ea, eb, ec) = (end_ring(&a), end_ring(&b), end_ring(&c));
    let d = product(&[ea.ring(), eb.ring()])?;
    let da = ea.ring().dim();
    let split = |x: &[u64]| (ea.to_map(&x[..da]), eb.to_map(&x[da..]));

    let hom_ab = HomLayout::new(a.layout(), b.layout());
    let commutator = LayoutMap::from_fn(d.layout().clone(), hom_ab.layout().clone(), |x| {
        let (alpha, beta) = split(x);
        hom_ab.from_map(&map_sub(&f.then(&beta), &alpha.then(&f)))
    })?;
    let w0 = Subring::from_span(&d, &commutator.kernel())?;

    let induced_map = |x: &[u64]| -> LayoutMap {
        let (_, beta) = split(x);
        LayoutMap::from_fn(c.layout().clone(), c.layout().clone(), |y| q.project(&beta.apply(&q.lift(y))))
            .expect("β preserves the image of f")
    };
    let ext = w0.extracted();
    let images = w0
        .ring()
        .basis()
        .iter()
        .map(|y| ec.from_map(&induced_map(&ext.to_ambient(y))).ok_or_else(|| Error::NotExact(0)))
        .collect::<Result<Vec<_>>>()?;
    let induced = RingHom::new(w0.ring(), ec.ring(), images)?;
    let kernel_local = induced.kernel();
    let kernel = ext.span_to_ambient(&kernel_local);

    let hom_bc = HomLayout::new(b.layout(), c.layout());
    let to_c = LayoutMap::from_fn(d.layout().clone(), hom_bc.layout().clone(), |x| {
        hom_bc.from_map(&split(x).1.then(q.projection()))
    })?;
    let kernel_matches = to_c.kernel().intersect(w0.span()) == kernel;

    let quotient = quotient_ring(w0.ring(), &kernel_local)?;
    let q_images = quotient.ring().basis().iter().map(|y| induced.apply(&quotient.lift(y))).collect();
    let quotient_isomorphic = match RingHom::new(quotient.ring(), ec.ring(), q_images) {
        Ok(h) => h.is_injective() && h.is_surjective(),
        Err(_) => false,
    };
    Ok(ExactSequenceReport {
        surjective: induced.is_surjective(),
        end_cokernel_size: ec.ring().size(),
        w0,
        induced,
        kernel,
        kernel_matches,
        quotient_isomorphic,
    })
}

/// An indecomposable direct summand cut out by a primitive idempotent of `End(M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub module: FiniteModule,
    /// The idempotent, in `End(M)` coordinates.
    pub idempotent: Elem,
    /// Image of the idempotent inside `M`.
    pub span: SpanBasis,
    #[serde(skip)]
    pub inclusion: LayoutMap,
    #[serde(skip)]
    pub projection: LayoutMap,
    pub local_endomorphisms: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KrullSchmidt {
    pub end_certificate: SemiperfectCertificate,
    pub summands: Vec<Summand>,
}

impl KrullSchmidt {
    /// Internal direct sum: the summand spans add up to `M` with sizes multiplying to `|M|`.
    pub fn verify(&self, m: &FiniteModule) -> bool {
        let total = self.summands.iter().fold(m.layout().zero_span(), |acc, s| acc.sum(&s.span));
        let size: Option<u128> =
            self.summands.iter().try_fold(1u128, |acc, s| s.span.size().and_then(|k| acc.checked_mul(k)));
        total == m.layout().full_span()
            && size == m.size()
            && self.summands.iter().all(|s| s.local_endomorphisms)
    }
}

fn summand_key(s: &Summand) -> (Reverse<u64>, Reverse<u128>, Vec<u64>, Vec<Vec<Elem>>) {
    let m = &s.module;
    (
        Reverse(m.exponent()),
        Reverse(m.size().unwrap_or(u128::MAX)),
        m.orders().to_vec(),
        m.action.iter().map(|a| a.images().to_vec()).collect(),
    )
}

pub fn krull_schmidt(m: &FiniteModule, settings: &Settings) -> KrullSchmidt {
    let end = end_ring(m);
    let cert = semiperfect_certificate(end.ring(), settings);
    let mut summands: Vec<Summand> = cert
        .idempotents
        .iter()
        .map(|e| {
            let map = end.to_map(e);
            let span = map.image();
            let (module, inclusion) = m.submodule(&span).expect("images of endomorphisms are submodules");
            let cb = CyclicBasis::new(m.layout(), &span);
            let projection = LayoutMap::from_fn(m.layout().clone(), module.layout().clone(), |x| {
                cb.coordinates(&map.apply(x)).expect("image lies in the summand")
            })
            .expect("projection is additive");
            let local_endomorphisms = is_local(end_ring(&module).ring());
            Summand { module, idempotent: e.clone(), span, inclusion, projection, local_endomorphisms }
        })
        .collect();
    summands.sort_by_key(summand_key);
    KrullSchmidt { end_certificate: cert, summands }
}

/// An isomorphism between modules with local endomorphism rings, if any.
///
/// When `End(A)` is local and `A ≅ B`, some product `k∘h` of generators of
/// `Hom(A, B)` and `Hom(B, A)` is a unit, making `h` an isomorphism.
fn local_iso(a: &FiniteModule, b: &FiniteModule) -> Result<Option<LayoutMap>> {
    if a.size() != b.size() || a.exponent() != b.exponent() {
        return Ok(None);
    }
    let ab = hom_space(a, b)?.generators();
    let ba = hom_space(b, a)?.generators();
    let end = end_ring(a);
    let one = end.ring().unity();
    for h in &ab {
        for k in &ba {
            let kh = end.from_map(&h.then(k)).expect("composite is an endomorphism");
            if associated_idempotent(end.ring(), &kh).idempotent == one {
                return Ok(Some(h.clone()));
            }
        }
    }
    Ok(None)
}

/// An `R`-linear bijection `M → N`, found by matching Krull-Schmidt summands.
pub fn module_iso_test(m: &FiniteModule, n: &FiniteModule, settings: &Settings) -> Result<Option<LayoutMap>> {
    if m.ring != n.ring {
        return Err(Error::RingMismatch);
    }
    if m.size() != n.size() {
        return Ok(None);
    }
    let (km, kn) = (krull_schmidt(m, settings), krull_schmidt(n, settings));
    if km.summands.len() != kn.summands.len() {
        return Ok(None);
    }
    let mut used = vec![false; kn.summands.len()];
    let mut pieces = Vec::new();
    for s in &km.summands {
        let mut found = None;
        for (j, t) in kn.summands.iter().enumerate() {
            if used[j] {
                continue;
            }
            if let Some(h) = local_iso(&s.module, &t.module)? {
                found = Some((j, h));
                break;
            }
        }
        let Some((j, h)) = found else { return Ok(None) };
        used[j] = true;
        pieces.push(s.projection.then(&h).then(&kn.summands[j].inclusion));
    }
    let zero = LayoutMap::from_fn(m.layout().clone(), n.layout().clone(), |_| n.layout().zero())?;
    let iso = pieces.iter().fold(zero, |acc, p| {
        let images = acc.images().iter().zip(p.images()).map(|(x, y)| n.layout().add(x, y)).collect();
        LayoutMap::new(m.layout().clone(), n.layout().clone(), images).expect("sum of homomorphisms")
    });
    debug_assert!(iso.is_injective() && hom_space(m, n)?.contains(&iso));
    Ok(Some(iso))
}

/// As [`module_iso_test`], by enumerating `Hom(M, N)`.
pub fn module_iso_exhaustive(m: &FiniteModule, n: &FiniteModule, settings: &Settings) -> Result<Option<LayoutMap>> {
    if m.size() != n.size() {
        return Ok(None);
    }
    let hom = hom_space(m, n)?;
    settings.check_cap(hom.size())?;
    let found = hom.elements().find(|f| f.is_injective());
    Ok(found)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionReport {
    pub end_r_size: Option<u128>,
    pub end_s_size: Option<u128>,
    /// `End(M_S)` as a span of `End_Z(M)`.
    pub end_s: SpanBasis,
    /// `End(M_S) = Cent_{End(M_R)}(im φ)`, the centralizer computed inside `End(M_R)`.
    pub centralizer_identity: bool,
    pub n_min: usize,
    /// `Jac(End(M_S))^(n−1) ⊄ Jac(End(M_R))` when `n > 1`.
    pub minimal: bool,
    pub main: MainTheoremReport,
}

/// Compares `End(M_S)` with `End(M_R)` for `φ: R ↪ S` and an `S`-module `M`.
pub fn restricted_endomorphism_check(
    phi: &RingHom,
    m: &FiniteModule,
    settings: &Settings,
) -> Result<RestrictionReport> {
    if !phi.is_injective() {
        return Err(Error::NotSubring("the ring map is not injective".into()));
    }
    let m_r = m.restrict(phi)?;
    let (endz, hom) = endomorphism_ring_z(m.layout());
    let actions = |module: &FiniteModule| -> Vec<Elem> {
        (0..module.ring().dim()).map(|j| hom.from_map(module.action(j))).collect()
    };
    let end_r = centralizer(&endz, &actions(&m_r));
    let end_s = hom_space(m, m)?.span;

    // centralizer of the S-action computed in End(M_R)'s own coordinates
    let ext = end_r.extracted();
    let s_actions = actions(m);
    let target = Layout::new(
        endz.modulus(),
        s_actions.iter().flat_map(|_| endz.orders().iter().copied()).collect(),
    )?;
    let comm = LayoutMap::from_fn(end_r.ring().layout().clone(), target, |y| {
        let x = ext.to_ambient(y);
        s_actions.iter().flat_map(|a| endz.sub(&endz.mul(&x, a), &endz.mul(a, &x))).collect()
    })?;
    let cent = comm.kernel();
    let centralizer_identity = ext.span_to_ambient(&cent) == end_s;

    let r0 = Subring::from_span(end_r.ring(), &cent)?;
    let main = verify_main_theorem(&r0, settings);
    let minimal = main.n_min == 1 || {
        let er = end_r.ring();
        let prev = (1..main.n_min - 1).fold(main.jac_subring.clone(), |acc, _| er.span_mul(&acc, &main.jac_subring));
        !prev.is_subset_of(&main.jac_ambient)
    };
    Ok(RestrictionReport {
        end_r_size: end_r.size(),
        end_s_size: end_s.size(),
        end_s,
        centralizer_identity,
        n_min: main.n_min,
        minimal,
        main,
    })
}
