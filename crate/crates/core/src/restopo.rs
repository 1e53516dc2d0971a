//! Topologies on `End(M)` induced by finite free resolutions over `Z` or `Z/N`.
//!
//! A resolution `E_{n−1} → … → E_0 → M` has free terms `E_i = B^{r_i}` over
//! the base `B` and integer differentials in row convention (`x ↦ x·D_i`).
//! For an ideal `J = aB`, `Ball(J, E)` collects the endomorphisms of `M`
//! that extend to a chain map `f_•` with every `im f_i ⊆ E_i·J`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{smith_form, solve_integer, zn, IntMatrix, Layout, LayoutMap, SpanBasis};
use crate::modules::{endomorphism_ring_z, HomLayout};
use crate::settings::Settings;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    /// `0` for `Z`, otherwise `N` for `Z/N`.
    pub base: u64,
    /// Additive orders of `M`.
    pub module: Vec<u64>,
    /// Images in `M` of the basis of `E_0`.
    pub augmentation: Vec<Vec<i64>>,
    /// `D_1, …, D_{n−1}`, `D_i` of shape `r_i × r_{i−1}`.
    #[serde(default)]
    pub differentials: Vec<Vec<Vec<i64>>>,
}

/// Chain maps `F_0, …, F_{n−1}` as integer matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub maps: Vec<Vec<Vec<i64>>>,
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Generators of a lattice in `Z^r`, plus `N·Z^r` over `Z/N`.
fn with_base(base: u64, r: usize, mut gens: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    if base > 0 {
        for i in 0..r {
            let mut v = vec![BigInt::zero(); r];
            v[i] = BigInt::from(base);
            gens.push(v);
        }
    }
    gens
}

fn lattice_contains(gens: &[Vec<BigInt>], r: usize, v: &[BigInt]) -> bool {
    if v.iter().all(|x| x.is_zero()) {
        return true;
    }
    if gens.is_empty() {
        return false;
    }
    // columns of A are the generators
    let mut a = IntMatrix::zeros(r, gens.len());
    for (j, g) in gens.iter().enumerate() {
        for i in 0..r {
            a.set(i, j, g[i].clone());
        }
    }
    solve_integer(&a, v).is_some()
}

fn lattice_subset(a: &[Vec<BigInt>], b: &[Vec<BigInt>], r: usize) -> bool {
    a.iter().all(|v| lattice_contains(b, r, v))
}

/// `{x : x·A = 0}` for the rows of `A` (shape `rows × cols`).
fn left_kernel_lattice(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let n = rows.len();
    let mut a = IntMatrix::zeros(n, cols);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            a.set(i, j, v.clone());
        }
    }
    let snf = smith_form(&a);
    let rank = snf.rank();
    (rank..n).map(|i| snf.u.row(i).to_vec()).collect()
}

impl Resolution {
    pub fn length(&self) -> usize {
        self.differentials.len() + 1
    }

    fn rank(&self, i: usize) -> usize {
        if i == 0 {
            self.augmentation.len()
        } else {
            self.differentials[i - 1].len()
        }
    }

    pub fn module_layout(&self) -> Result<Layout> {
        let m = self.module.iter().fold(1u64, |acc, &o| zn::lcm(acc, o));
        if self.base > 0 && self.base % m != 0 {
            return Err(Error::InvalidInput("module orders must divide the base modulus".into()));
        }
        Layout::new(m, self.module.clone())
    }

    /// Shapes, surjectivity onto `M` and exactness at every `E_i` with `i < n − 1`.
    pub fn validate(&self) -> Result<()> {
        let layout = self.module_layout()?;
        let t = layout.dim();
        let r0 = self.rank(0);
        if let Some(row) = self.augmentation.iter().find(|row| row.len() != t) {
            return Err(Error::DimensionMismatch { expected: t, found: row.len() });
        }
        for i in 1..self.length() {
            let cols = self.rank(i - 1);
            if let Some(row) = self.differentials[i - 1].iter().find(|row| row.len() != cols) {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
        }
        let aug: Vec<Elem64> = self.augmentation.iter().map(|r| layout.reduce_signed(r)).collect();
        if layout.span_of(&aug) != layout.full_span() {
            return Err(Error::NotExact(-1));
        }
        if self.length() == 1 {
            return Ok(());
        }
        // ker(E_0 → M) from the left kernel of [A; diag(o)]
        let mut rows: Vec<Vec<BigInt>> =
            self.augmentation.iter().map(|r| r.iter().map(|&v| big(v)).collect()).collect();
        for (s, &o) in layout.orders().iter().enumerate() {
            let mut v = vec![BigInt::zero(); t];
            v[s] = BigInt::from(o);
            rows.push(v);
        }
        let ker: Vec<Vec<BigInt>> = left_kernel_lattice(&rows, t).into_iter().map(|v| v[..r0].to_vec()).collect();
        let ker = with_base(self.base, r0, ker);
        let img = with_base(self.base, r0, self.diff_rows(1));
        if !(lattice_subset(&ker, &img, r0) && lattice_subset(&img, &ker, r0)) {
            return Err(Error::NotExact(0));
        }
        for i in 1..self.length() - 1 {
            let r = self.rank(i);
            let mut rows = self.diff_rows(i);
            let cols = self.rank(i - 1);
            if self.base > 0 {
                for c in 0..cols {
                    let mut v = vec![BigInt::zero(); cols];
                    v[c] = BigInt::from(self.base);
                    rows.push(v);
                }
            }
            let ker: Vec<Vec<BigInt>> =
                left_kernel_lattice(&rows, cols).into_iter().map(|v| v[..r].to_vec()).collect();
            let ker = with_base(self.base, r, ker);
            let img = with_base(self.base, r, self.diff_rows(i + 1));
            if !(lattice_subset(&ker, &img, r) && lattice_subset(&img, &ker, r)) {
                return Err(Error::NotExact(i as i64));
            }
        }
        Ok(())
    }

    fn diff_rows(&self, i: usize) -> Vec<Vec<BigInt>> {
        self.differentials[i - 1].iter().map(|r| r.iter().map(|&v| big(v)).collect()).collect()
    }
}

type Elem64 = Vec<u64>;

/// Normalised generator of `J = aB` (`a = 0` is the zero ideal).
fn ideal_generator(base: u64, a: u64) -> u64 {
    if base > 0 {
        zn::gcd(a, base)
    } else {
        a
    }
}

/// Endomorphisms `f` of `M` with `im f ⊆ aM`.
fn maps_into_jm(layout: &Layout, f: &LayoutMap, a: u64) -> bool {
    let jm = layout.span_of(&layout.basis().iter().map(|b| layout.scalar(a, b)).collect::<Vec<_>>());
    f.images().iter().all(|x| layout.contains(&jm, x))
}

/// A chain map over `f` with `im f_i ⊆ E_i·J` at every level, if one exists.
///
/// All levels are solved as one integer system, so freedom in early lifts is
/// never committed before later constraints are seen.
pub fn lift_through(res: &Resolution, f: &LayoutMap, a: u64) -> Result<Option<Chain>> {
    res.validate()?;
    let layout = res.module_layout()?;
    if f.src() != &layout || f.dst() != &layout {
        return Err(Error::DimensionMismatch { expected: layout.dim(), found: f.src().dim() });
    }
    let a = ideal_generator(res.base, a);
    if !maps_into_jm(&layout, f, a) {
        return Ok(None);
    }
    let n = res.length();
    let t = layout.dim();
    let ranks: Vec<usize> = (0..n).map(|i| res.rank(i)).collect();

    // unknowns: G_i (r_i × r_i) with F_i = a·G_i, then slack variables
    let mut offsets = Vec::with_capacity(n);
    let mut nvars = 0;
    for &r in &ranks {
        offsets.push(nvars);
        nvars += r * r;
    }
    let var = |i: usize, k: usize, l: usize| offsets[i] + k * ranks[i] + l;
    let mut eqs: Vec<(Vec<(usize, BigInt)>, BigInt, Option<u64>)> = Vec::new();

    let aug: Vec<Vec<u64>> = res.augmentation.iter().map(|r| layout.reduce_signed(r)).collect();
    let a_big = BigInt::from(a);
    for k in 0..ranks[0] {
        let target = f.apply(&aug[k]);
        for s in 0..t {
            let coeffs = (0..ranks[0]).map(|l| (var(0, k, l), &a_big * BigInt::from(aug[l][s]))).collect();
            eqs.push((coeffs, BigInt::from(target[s]), Some(layout.orders()[s])));
        }
    }
    for i in 1..n {
        let d = &res.differentials[i - 1];
        let (ri, rp) = (ranks[i], ranks[i - 1]);
        for k in 0..ri {
            for c in 0..rp {
                let mut coeffs = Vec::new();
                for l in 0..ri {
                    if d[l][c] != 0 {
                        coeffs.push((var(i, k, l), &a_big * big(d[l][c])));
                    }
                }
                for l in 0..rp {
                    if d[k][l] != 0 {
                        coeffs.push((var(i - 1, l, c), -&a_big * big(d[k][l])));
                    }
                }
                eqs.push((coeffs, BigInt::zero(), (res.base > 0).then_some(res.base)));
            }
        }
    }

    let slack: usize = eqs.iter().filter(|e| e.2.is_some()).count();
    let mut mat = IntMatrix::zeros(eqs.len(), nvars + slack);
    let mut rhs = Vec::with_capacity(eqs.len());
    let mut next_slack = nvars;
    for (row, (coeffs, b, modulus)) in eqs.into_iter().enumerate() {
        for (v, c) in coeffs {
            let cur = mat.get(row, v).clone();
            mat.set(row, v, cur + c);
        }
        if let Some(m) = modulus {
            mat.set(row, next_slack, BigInt::from(m));
            next_slack += 1;
        }
        rhs.push(b);
    }
    let Some(sol) = solve_integer(&mat, &rhs) else { return Ok(None) };
    let maps = (0..n)
        .map(|i| {
            (0..ranks[i])
                .map(|k| {
                    (0..ranks[i])
                        .map(|l| {
                            let mut v = &a_big * &sol.particular[var(i, k, l)];
                            if res.base > 0 {
                                let b = BigInt::from(res.base);
                                v = ((v % &b) + &b) % &b;
                            }
                            v.to_i64().ok_or_else(|| Error::InvalidInput("lift entries overflow i64".into()))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let chain = Chain { maps };
    debug_assert!(verify_chain(res, f, a, &chain));
    Ok(Some(chain))
}

/// Re-checks the chain conditions and the image constraints.
pub fn verify_chain(res: &Resolution, f: &LayoutMap, a: u64, chain: &Chain) -> bool {
    let Ok(layout) = res.module_layout() else { return false };
    let a = ideal_generator(res.base, a);
    let reduce = |v: i128| -> i128 {
        if res.base > 0 {
            v.rem_euclid(res.base as i128)
        } else {
            v
        }
    };
    let in_j = |v: i64| if a == 0 { reduce(v as i128) == 0 } else { reduce(v as i128) % a as i128 == 0 };
    if !maps_into_jm(&layout, f, a) || chain.maps.len() != res.length() {
        return false;
    }
    if chain.maps.iter().any(|m| m.iter().flatten().any(|&v| !in_j(v))) {
        return false;
    }
    let aug: Vec<Vec<u64>> = res.augmentation.iter().map(|r| layout.reduce_signed(r)).collect();
    let f0 = &chain.maps[0];
    for (k, row) in f0.iter().enumerate() {
        let img = row.iter().zip(&aug).fold(layout.zero(), |acc, (&c, x)| {
            layout.add(&acc, &layout.scalar(zn::from_i128(c as i128, layout.modulus()), x))
        });
        if img != f.apply(&aug[k]) {
            return false;
        }
    }
    let mul = |x: &[Vec<i64>], y: &[Vec<i64>]| -> Vec<Vec<i128>> {
        x.iter()
            .map(|row| {
                (0..y.first().map_or(0, |r| r.len()))
                    .map(|c| reduce(row.iter().zip(y).map(|(&u, yr)| u as i128 * yr[c] as i128).sum()))
                    .collect()
            })
            .collect()
    };
    (1..res.length()).all(|i| {
        let d = &res.differentials[i - 1];
        mul(&chain.maps[i], d) == mul(d, &chain.maps[i - 1])
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallIdeal {
    pub ideal: u64,
    /// Members as a span of `End_Z(M)` coordinates.
    pub span: SpanBasis,
    /// A chain for each span generator.
    pub witnesses: Vec<(Vec<u64>, Chain)>,
    pub is_ideal: bool,
}

fn end_layout(res: &Resolution) -> Result<(Layout, HomLayout)> {
    let layout = res.module_layout()?;
    let hom = HomLayout::new(&layout, &layout);
    Ok((layout, hom))
}

pub fn ball_ideal(res: &Resolution, a: u64, settings: &Settings) -> Result<BallIdeal> {
    let (layout, hom) = end_layout(res)?;
    settings.check_cap(hom.layout().size())?;
    let mut members = Vec::new();
    for phi in hom.layout().all_elements() {
        if lift_through(res, &hom.to_map(&phi), a)?.is_some() {
            members.push(phi);
        }
    }
    let span = hom.layout().span_of(&members);
    debug_assert_eq!(span.size(), Some(members.len() as u128));
    let witnesses = span
        .rows()
        .iter()
        .map(|u| {
            let phi = hom.layout().unscale(u);
            let chain = lift_through(res, &hom.to_map(&phi), a)?.expect("span generators are members");
            Ok((phi, chain))
        })
        .collect::<Result<Vec<_>>>()?;
    let (endz, _) = endomorphism_ring_z(&layout);
    let full = endz.full_span();
    let is_ideal = endz.span_mul(&full, &span).is_subset_of(&span) && endz.span_mul(&span, &full).is_subset_of(&span);
    Ok(BallIdeal { ideal: a, span, witnesses, is_ideal })
}

/// `Hom(M, MJ)` as a span of `End_Z(M)` coordinates.
pub fn standard_ball(module: &[u64], a: u64) -> Result<SpanBasis> {
    let m = module.iter().fold(1u64, |acc, &o| zn::lcm(acc, o));
    let layout = Layout::new(m, module.to_vec())?;
    let hom = HomLayout::new(&layout, &layout);
    let members: Vec<Vec<u64>> =
        hom.layout().all_elements().filter(|phi| maps_into_jm(&layout, &hom.to_map(phi), a)).collect();
    Ok(hom.layout().span_of(&members))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealComparison {
    pub ideal: u64,
    pub standard: SpanBasis,
    pub first: SpanBasis,
    pub second: SpanBasis,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparatingWitness {
    pub ideal: u64,
    /// `End_Z(M)` coordinates.
    pub coordinates: Vec<u64>,
    /// Image of each generator of `M`.
    pub images: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologyComparison {
    pub per_ideal: Vec<IdealComparison>,
    pub equal: bool,
    pub witness: Option<SeparatingWitness>,
}

/// Compares the Ball ideals of two resolutions of the same module over a list of ideals.
///
/// The witness is the member of the first ball outside the second with the
/// fewest nonzero coordinates, ties broken lexicographically.
pub fn compare_topologies(
    first: &Resolution,
    second: &Resolution,
    ideals: &[u64],
    settings: &Settings,
) -> Result<TopologyComparison> {
    if first.base != second.base || first.module != second.module {
        return Err(Error::InvalidInput("resolutions of different modules".into()));
    }
    let (_, hom) = end_layout(first)?;
    let mut per_ideal = Vec::new();
    let mut witness = None;
    for &a in ideals {
        let b1 = ball_ideal(first, a, settings)?;
        let b2 = ball_ideal(second, a, settings)?;
        let equal = b1.span == b2.span;
        if !equal && witness.is_none() {
            let (outer, inner) = if b2.span.is_subset_of(&b1.span) { (&b1, &b2) } else { (&b2, &b1) };
            let best = hom
                .layout()
                .elements(&outer.span)
                .filter(|phi| !hom.layout().contains(&inner.span, phi))
                .min_by_key(|phi| (phi.iter().filter(|&&v| v != 0).count(), phi.clone()))
                .expect("the spans differ");
            witness = Some(SeparatingWitness {
                ideal: a,
                images: hom.to_map(&best).images().to_vec(),
                coordinates: best,
            });
        }
        per_ideal.push(IdealComparison {
            ideal: a,
            standard: standard_ball(&first.module, ideal_generator(first.base, a))?,
            first: b1.span,
            second: b2.span,
            equal,
        });
    }
    Ok(TopologyComparison { equal: per_ideal.iter().all(|c| c.equal), per_ideal, witness })
}

pub fn resolution_independence_check(
    p: &Resolution,
    q: &Resolution,
    a: u64,
    settings: &Settings,
) -> Result<bool> {
    Ok(ball_ideal(p, a, settings)?.span == ball_ideal(q, a, settings)?.span)
}

/// `M = Z/4 × Z/2` over `Z` with the resolutions `Z² → M` and `4Z × 2Z ↪ Z² → M`.
pub fn appendix_fixture() -> (Resolution, Resolution, Vec<u64>) {
    let aug = vec![vec![1, 0], vec![0, 1]];
    let short = Resolution { base: 0, module: vec![4, 2], augmentation: aug.clone(), differentials: vec![] };
    let long = Resolution {
        base: 0,
        module: vec![4, 2],
        augmentation: aug,
        differentials: vec![vec![vec![4, 0], vec![0, 2]]],
    };
    let ideals = (0..4).map(|n| 2 * 3u64.pow(n)).collect();
    (short, long, ideals)
}
