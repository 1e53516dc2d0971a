//! Finite truncation towers `R_N → … → R_1` with surjective reduction connectors.
//!
//! Levels are numbered from 1 (coarsest) in reports; vectors are indexed from 0.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitting::{associated_idempotent, FittingCertificate};
use crate::linalg::{zn, CyclicBasis, LayoutMap, SpanBasis};
use crate::modules::FiniteModule;
use crate::ring::{jacobson_radical, matrix_ring, opposite, quaternion, tensor, zn_ring, Elem, FiniteRing, RingHom};
use crate::subrings::{centralizer, invariant_subring};

pub const MAX_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub family: String,
    pub p: u64,
    /// Matrix size for the `matzpk` family.
    #[serde(default)]
    pub k: usize,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tower {
    levels: Vec<FiniteRing>,
    /// `connectors[i]: levels[i + 1] → levels[i]`.
    #[serde(skip)]
    connectors: Vec<RingHom>,
}

/// One component per level, coarsest first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerElement {
    pub components: Vec<Elem>,
}

impl Tower {
    pub fn new(levels: Vec<FiniteRing>, connectors: Vec<RingHom>) -> Result<Self> {
        if levels.is_empty() || connectors.len() + 1 != levels.len() {
            return Err(Error::InvalidInput("a tower needs one connector between consecutive levels".into()));
        }
        for (i, c) in connectors.iter().enumerate() {
            if c.source() != &levels[i + 1] || c.target() != &levels[i] {
                return Err(Error::RingMismatch);
            }
            if !c.is_surjective() {
                return Err(Error::InvalidInput(format!("connector into level {} is not surjective", i + 1)));
            }
        }
        Ok(Tower { levels, connectors })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[FiniteRing] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &FiniteRing {
        &self.levels[i]
    }

    pub fn connector(&self, i: usize) -> &RingHom {
        &self.connectors[i]
    }

    pub fn top(&self) -> &FiniteRing {
        self.levels.last().expect("towers are non-empty")
    }

    /// Pushes a top-level element down through every connector.
    pub fn project(&self, x: &[u64]) -> TowerElement {
        let mut comps = vec![self.top().layout().reduce(x)];
        for c in self.connectors.iter().rev() {
            let next = c.apply(comps.last().expect("non-empty"));
            comps.push(next);
        }
        comps.reverse();
        TowerElement { components: comps }
    }

    /// First level (0-based) whose component is not the image of the next one.
    pub fn incompatibility(&self, a: &TowerElement) -> Option<usize> {
        if a.components.len() != self.depth() {
            return Some(0);
        }
        (0..self.connectors.len()).find(|&i| self.connectors[i].apply(&a.components[i + 1]) != a.components[i])
    }

    pub fn is_compatible(&self, a: &TowerElement) -> bool {
        self.incompatibility(a).is_none()
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> TowerElement {
        let top: Elem = self.top().orders().iter().map(|&o| rng.gen_range(0..o)).collect();
        self.project(&top)
    }

    /// `R_N → R_i`.
    pub fn reduction_to(&self, i: usize) -> LayoutMap {
        let top = self.depth() - 1;
        let id = RingHom::identity(self.top()).map().clone();
        (i..top).rev().fold(id, |acc, j| acc.then(self.connectors[j].map()))
    }
}

fn reduction_tower<F>(depth: usize, p: u64, build: F) -> Result<Tower>
where
    F: Fn(u64) -> Result<FiniteRing>,
{
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::UnsupportedSpec(format!("depth must be between 1 and {MAX_DEPTH}")));
    }
    if !zn::is_prime(p) {
        return Err(Error::UnsupportedSpec(format!("{p} is not a prime")));
    }
    let mut modulus = 1u64;
    let mut levels = Vec::with_capacity(depth);
    for _ in 0..depth {
        modulus = modulus
            .checked_mul(p)
            .filter(|&m| m < zn::MAX_MODULUS)
            .ok_or_else(|| Error::UnsupportedSpec("modulus p^depth is too large".into()))?;
        levels.push(build(modulus)?);
    }
    let connectors = (0..depth - 1)
        .map(|i| RingHom::reduction(&levels[i + 1], &levels[i]))
        .collect::<Result<Vec<_>>>()?;
    Tower::new(levels, connectors)
}

pub fn build_truncation_tower(spec: &TowerSpec) -> Result<Tower> {
    let (p, n) = (spec.p, spec.depth);
    match spec.family.as_str() {
        "zpk" => reduction_tower(n, p, zn_ring),
        "matzpk" => {
            if spec.k == 0 {
                return Err(Error::UnsupportedSpec("matzpk needs a matrix size k ≥ 1".into()));
            }
            reduction_tower(n, p, |m| matrix_ring(spec.k, m))
        }
        "quaternion3" | "quaternion-tensor3" if p != 3 => {
            Err(Error::UnsupportedSpec(format!("{} is defined for p = 3", spec.family)))
        }
        "quaternion3" => reduction_tower(n, p, quaternion),
        "quaternion-tensor3" => reduction_tower(n, p, |m| {
            let a = quaternion(m)?;
            tensor(&a, &opposite(&a)?)
        }),
        other => Err(Error::UnsupportedSpec(format!("unknown tower family '{other}'"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiPiCertificate {
    pub element: TowerElement,
    pub idempotent: TowerElement,
    pub levels: Vec<FittingCertificate>,
    /// Per level, the least `k` with `(faf)^k = 0`.
    pub vanishing: Vec<u64>,
}

pub fn tower_associated_idempotent(t: &Tower, a: &TowerElement) -> Result<QuasiPiCertificate> {
    if let Some(i) = t.incompatibility(a) {
        return Err(Error::InvalidInput(format!("element is not compatible at level {}", i + 1)));
    }
    let levels: Vec<FittingCertificate> = t
        .levels
        .iter()
        .zip(&a.components)
        .map(|(r, x)| associated_idempotent(r, x))
        .collect();
    let idempotent = TowerElement { components: levels.iter().map(|c| c.idempotent.clone()).collect() };
    if let Some(i) = t.incompatibility(&idempotent) {
        return Err(Error::CompatibilityViolation(i + 1));
    }
    Ok(QuasiPiCertificate {
        element: a.clone(),
        idempotent,
        vanishing: levels.iter().map(|c| c.nilpotency_index).collect(),
        levels,
    })
}

/// Per-level subring data for a tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TowerSubringSpec {
    Full,
    /// Centralizer of elements given in top-level coordinates.
    CentralizerOf(Vec<Vec<i64>>),
    /// Invariants under conjugation by units given in top-level coordinates.
    InvariantUnderConjugation(Vec<Vec<i64>>),
}

/// Level spans of a subring tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerSubring {
    pub spans: Vec<SpanBasis>,
    /// Rank of each span as a direct sum of cyclic groups.
    pub ranks: Vec<usize>,
}

fn signed_at(r: &FiniteRing, xs: &[Vec<i64>]) -> Result<Vec<Elem>> {
    xs.iter().map(|x| r.element(x)).collect()
}

pub fn tower_subring(t: &Tower, spec: &TowerSubringSpec) -> Result<TowerSubring> {
    let spans = t
        .levels
        .iter()
        .map(|r| {
            Ok(match spec {
                TowerSubringSpec::Full => r.full_span(),
                TowerSubringSpec::CentralizerOf(xs) => centralizer(r, &signed_at(r, xs)?).span().clone(),
                TowerSubringSpec::InvariantUnderConjugation(us) => {
                    let sigmas = signed_at(r, us)?
                        .iter()
                        .map(|u| RingHom::conjugation(r, u))
                        .collect::<Result<Vec<_>>>()?;
                    invariant_subring(r, &sigmas)?.span().clone()
                }
            })
        })
        .collect::<Result<Vec<SpanBasis>>>()?;
    let ranks = t
        .levels
        .iter()
        .zip(&spans)
        .map(|(r, s)| CyclicBasis::new(r.layout(), s).rank())
        .collect();
    Ok(TowerSubring { spans, ranks })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubringQuasiPiReport {
    pub holds: bool,
    pub certificate: QuasiPiCertificate,
    pub ranks: Vec<usize>,
}

/// Whether every level of the associated idempotent of `a ∈ R₀` lies in `R₀`.
pub fn subring_quasi_pi_check(t: &Tower, r0: &TowerSubring, a: &TowerElement) -> Result<SubringQuasiPiReport> {
    if r0.spans.len() != t.depth() {
        return Err(Error::IncompatibleSubringSpec(0));
    }
    for i in 0..t.depth() - 1 {
        if !t.connectors[i].map().image_of(&r0.spans[i + 1]).is_subset_of(&r0.spans[i]) {
            return Err(Error::IncompatibleSubringSpec(i + 1));
        }
    }
    for (i, (r, x)) in t.levels.iter().zip(&a.components).enumerate() {
        if !r.span_contains(&r0.spans[i], x) {
            return Err(Error::InvalidInput(format!("element is not in the subring at level {}", i + 1)));
        }
    }
    let certificate = tower_associated_idempotent(t, a)?;
    let holds = t
        .levels
        .iter()
        .zip(&certificate.idempotent.components)
        .zip(&r0.spans)
        .all(|((r, e), s)| r.span_contains(s, e));
    Ok(SubringQuasiPiReport { holds, certificate, ranks: r0.ranks.clone() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpennessRow {
    pub level: usize,
    /// Least `n` with `Jac(R_N)^n ⊆ ker(R_N → R_level)`.
    pub n: usize,
}

pub fn jacobson_power_openness(t: &Tower) -> Vec<OpennessRow> {
    let top = t.top();
    let jac = jacobson_radical(top);
    (0..t.depth() - 1)
        .map(|i| {
            let kernel = t.reduction_to(i).kernel();
            let mut power = jac.clone();
            let mut n = 1;
            while !power.is_subset_of(&kernel) {
                power = top.span_mul(&power, &jac);
                n += 1;
            }
            OpennessRow { level: i + 1, n }
        })
        .collect()
}

/// A module at each level with additive connectors `M_{i+1} → M_i`, semilinear over the ring connectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerModule {
    pub modules: Vec<FiniteModule>,
    pub connectors: Vec<LayoutMap>,
}

impl TowerModule {
    pub fn new(t: &Tower, modules: Vec<FiniteModule>, connectors: Vec<LayoutMap>) -> Result<Self> {
        if modules.len() != t.depth() || connectors.len() + 1 != modules.len() {
            return Err(Error::InvalidInput("one module per level and one connector between levels".into()));
        }
        for i in 0..connectors.len() {
            let (hi, lo, c) = (&modules[i + 1], &modules[i], &connectors[i]);
            if hi.ring() != t.level(i + 1) || lo.ring() != t.level(i) {
                return Err(Error::RingMismatch);
            }
            // π(x·b) = π(x)·f(b) on basis elements
            for (j, b) in hi.ring().basis().iter().enumerate() {
                if hi.action(j).then(c) != c.then(&lo.act_map(&t.connectors[i].apply(b))) {
                    return Err(Error::CompatibilityViolation(i + 1));
                }
            }
        }
        Ok(TowerModule { modules, connectors })
    }

    /// `R_i^n` with coordinatewise reduction.
    pub fn free(t: &Tower, n: usize) -> Self {
        let modules: Vec<FiniteModule> = t.levels.iter().map(|r| FiniteModule::free(r, n)).collect();
        let connectors = (0..t.depth() - 1)
            .map(|i| {
                let images = modules[i + 1]
                    .layout()
                    .basis()
                    .iter()
                    .map(|b| modules[i].layout().reduce(b))
                    .collect();
                LayoutMap::new(modules[i + 1].layout().clone(), modules[i].layout().clone(), images)
                    .expect("reduction is well defined")
            })
            .collect();
        TowerModule::new(t, modules, connectors).expect("free towers are compatible")
    }

    pub fn project(&self, x: &[u64]) -> Vec<Elem> {
        let mut comps = vec![self.modules.last().expect("non-empty").layout().reduce(x)];
        for c in self.connectors.iter().rev() {
            let next = c.apply(comps.last().expect("non-empty"));
            comps.push(next);
        }
        comps.reverse();
        comps
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureMembership {
    pub member: bool,
    /// One tower element per generator with `Σ g_j·a_j = m` at every level.
    pub coefficients: Vec<TowerElement>,
}

/// `x ↦ Σ g_j·a_j` from `R^k` into the module at one level.
fn combination_map(m: &FiniteModule, gens: &[Elem]) -> LayoutMap {
    let r = m.ring();
    let d = r.dim();
    let src = crate::linalg::Layout::new(
        r.modulus(),
        gens.iter().flat_map(|_| r.orders().iter().copied()).collect(),
    )
    .expect("ring orders divide the modulus");
    LayoutMap::from_fn(src, m.layout().clone(), |x| {
        gens.iter()
            .enumerate()
            .fold(m.layout().zero(), |acc, (j, g)| m.layout().add(&acc, &m.act(g, &x[j * d..(j + 1) * d])))
    })
    .expect("module combinations are additive")
}

/// Decides whether `m` lies in the closure of the submodule generated by `gens`.
///
/// Generators and candidate are compatible families, one component per level.
pub fn closure_membership(
    t: &Tower,
    tm: &TowerModule,
    gens: &[Vec<Elem>],
    candidate: &[Elem],
) -> Result<ClosureMembership> {
    let n = t.depth();
    let level_gens = |i: usize| -> Vec<Elem> { gens.iter().map(|g| g[i].clone()).collect() };
    let mut solutions = Vec::with_capacity(n);
    for i in 0..n {
        let sol = combination_map(&tm.modules[i], &level_gens(i))
            .solve(&candidate[i])
            .ok_or(Error::LevelUnsolvable(i + 1))?;
        solutions.push(sol);
    }
    // every coset X_i is nonempty; the finest solution maps into all coarser ones
    let d = t.top().dim();
    let top = solutions.pop().expect("non-empty");
    let coefficients: Vec<TowerElement> =
        (0..gens.len()).map(|j| t.project(&top[j * d..(j + 1) * d])).collect();
    let member = (0..n).all(|i| {
        let x: Elem = coefficients.iter().flat_map(|c| c.components[i].clone()).collect();
        combination_map(&tm.modules[i], &level_gens(i)).apply(&x) == candidate[i]
    });
    Ok(ClosureMembership { member, coefficients })
}
