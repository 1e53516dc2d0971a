//! Deterministic fixture families built over the catalog rings.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog;
use crate::linalg::{zn, SpanBasis};
use crate::modules::{FiniteModule, ModuleData, Presentation};
use crate::ring::{
    jacobson_radical, matrix_ring, poly_quotient, product, quotient_ring, upper_triangular, zn_ring, Elem,
    FiniteRing, RingHom,
};
use crate::settings::Settings;
use crate::subrings::{centralizer, invariant_subring, EqualizerSpec, Subring};

pub struct SubringPair {
    pub label: String,
    pub subring: Subring,
}

fn random_elem(r: &FiniteRing, rng: &mut ChaCha8Rng) -> Elem {
    r.orders().iter().map(|&o| rng.gen_range(0..o)).collect()
}

/// Non-central units, found by sampling.
fn random_units(r: &FiniteRing, count: usize, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    let central = crate::ring::center(r);
    let mut out: Vec<Elem> = Vec::new();
    for _ in 0..400 {
        if out.len() == count {
            break;
        }
        let x = random_elem(r, rng);
        if r.is_unit(&x) && !r.span_contains(&central, &x) && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// `x ↦ x^p` on a commutative ring of prime characteristic `p`.
pub fn frobenius(r: &FiniteRing) -> Option<RingHom> {
    let p = r.exponent();
    if !zn::is_prime(p) || !r.is_commutative() {
        return None;
    }
    RingHom::from_fn(r, r, |x| r.pow(x, p)).ok()
}

/// Centralizer and invariant subrings over every catalog ring, deduplicated by span.
pub fn subring_pairs(settings: &Settings) -> Vec<SubringPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut out: Vec<SubringPair> = Vec::new();
    let push = |label: String, s: Subring, out: &mut Vec<SubringPair>| {
        if !out.iter().any(|p| p.subring.ambient() == s.ambient() && p.subring.span() == s.span()) {
            out.push(SubringPair { label, subring: s });
        }
    };
    for (name, r) in catalog::all_rings() {
        if r.size().is_none_or(|n| n > 4096) {
            continue;
        }
        push(format!("{name}: whole ring"), Subring::full(&r), &mut out);
        for (i, b) in r.basis().iter().enumerate() {
            push(format!("{name}: centralizer of basis element {i}"), centralizer(&r, &[b.clone()]), &mut out);
        }
        let x = random_elem(&r, &mut rng);
        let y = random_elem(&r, &mut rng);
        push(format!("{name}: centralizer of {x:?}, {y:?}"), centralizer(&r, &[x, y]), &mut out);
        for u in random_units(&r, 2, &mut rng) {
            let sigma = RingHom::conjugation(&r, &u).expect("u is a unit");
            let s = invariant_subring(&r, &[sigma]).expect("conjugation is an endomorphism");
            push(format!("{name}: invariants of conjugation by {u:?}"), s, &mut out);
        }
        if let Some(f) = frobenius(&r) {
            let s = invariant_subring(&r, &[f]).expect("Frobenius is an endomorphism");
            push(format!("{name}: Frobenius invariants"), s, &mut out);
        }
    }
    out
}

pub struct EqualizerFixture {
    pub label: String,
    pub ring: FiniteRing,
    pub spec: EqualizerSpec,
}

fn quotient_projection(r: &FiniteRing) -> Option<RingHom> {
    let j = jacobson_radical(r);
    if j.is_zero() {
        return None;
    }
    let q = quotient_ring(r, &j).ok()?;
    RingHom::new(r, q.ring(), r.basis().iter().map(|b| q.project(b)).collect()).ok()
}

/// Equalizer specs of several shapes over the smaller catalog rings.
pub fn equalizer_specs(settings: &Settings) -> Vec<EqualizerFixture> {
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed ^ 0x5eed);
    let names = ["m2-f2", "t2-f2", "t2-f3", "m2-f3", "f2-s3", "quat-z3", "t3-f2", "m2-z4", "f4", "f2xf2", "f8"];
    let mut out = Vec::new();
    for name in names {
        let r = catalog::ring(name).expect("listed");
        let id = RingHom::identity(&r);
        out.push(EqualizerFixture {
            label: format!("{name}: identity pair"),
            ring: r.clone(),
            spec: EqualizerSpec::new(vec![(id.clone(), id.clone())]),
        });
        let units = random_units(&r, 2, &mut rng);
        if let Some(u) = units.first() {
            out.push(EqualizerFixture {
                label: format!("{name}: centralizer of {u:?}"),
                ring: r.clone(),
                spec: EqualizerSpec::centralizer_of_units(&r, &[u.clone()]).expect("unit"),
            });
        }
        if units.len() == 2 {
            out.push(EqualizerFixture {
                label: format!("{name}: centralizer of two units"),
                ring: r.clone(),
                spec: EqualizerSpec::centralizer_of_units(&r, &units).expect("units"),
            });
        }
        if let Some(f) = frobenius(&r) {
            out.push(EqualizerFixture {
                label: format!("{name}: Frobenius invariants"),
                ring: r.clone(),
                spec: EqualizerSpec::invariant(&r, &[f]),
            });
        }
        if let (Some(pi), Some(u)) = (quotient_projection(&r), units.first()) {
            let conj = RingHom::conjugation(&r, u).expect("unit").then(&pi).expect("composable");
            out.push(EqualizerFixture {
                label: format!("{name}: commutes with {u:?} modulo the radical"),
                ring: r.clone(),
                spec: EqualizerSpec::new(vec![(pi, conj)]),
            });
        }
        if let (Some(f), Some(u)) = (frobenius(&r), units.first()) {
            out.push(EqualizerFixture {
                label: format!("{name}: Frobenius and conjugation"),
                ring: r.clone(),
                spec: EqualizerSpec::new(vec![
                    (f, id.clone()),
                    (RingHom::conjugation(&r, u).expect("unit"), id.clone()),
                ]),
            });
        }
    }
    // swap on F_2 x F_2 and an endomorphism mixed with a conjugation on M_2(F_2) x F_2
    let f2 = zn_ring(2).expect("valid");
    let f2xf2 = product(&[&f2, &f2]).expect("valid");
    let swap = RingHom::new(&f2xf2, &f2xf2, vec![vec![0, 1], vec![1, 0]]).expect("swap");
    out.push(EqualizerFixture {
        label: "f2xf2: swap invariants".into(),
        spec: EqualizerSpec::invariant(&f2xf2, &[swap]),
        ring: f2xf2,
    });
    let m2 = matrix_ring(2, 2).expect("valid");
    let mix = product(&[&m2, &f2]).expect("valid");
    let u: Elem = vec![1, 1, 0, 1, 1];
    let collapse = RingHom::from_fn(&mix, &mix, |x| {
        // (A, c) ↦ (c·I, c)
        vec![x[4], 0, 0, x[4], x[4]]
    })
    .expect("endomorphism");
    out.push(EqualizerFixture {
        label: "m2-f2 x f2: collapse and conjugation".into(),
        spec: EqualizerSpec::new(vec![
            (collapse, RingHom::identity(&mix)),
            (RingHom::conjugation(&mix, &u).expect("unit"), RingHom::identity(&mix)),
        ]),
        ring: mix,
    });
    out
}

/// Random presentations over `Z/4`, `Z/8`, `Z/9` and `T_2(F_2)`.
pub fn presentations(settings: &Settings) -> Vec<(String, Presentation)> {
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed ^ 0x9e37);
    let rings = [
        ("z4", zn_ring(4).expect("valid")),
        ("z8", zn_ring(8).expect("valid")),
        ("z9", zn_ring(9).expect("valid")),
        ("t2-f2", upper_triangular(2, 2).expect("valid")),
    ];
    let shapes = [(0, 1), (1, 1), (1, 2), (2, 1), (2, 2), (3, 2)];
    let mut out = Vec::new();
    for (name, r) in &rings {
        for &(n, m) in &shapes {
            if r.dim() > 1 && n * m > 4 {
                continue;
            }
            let matrix: Vec<Vec<Elem>> = (0..n).map(|_| (0..m).map(|_| random_elem(r, &mut rng)).collect()).collect();
            let p = Presentation::new(r, m, matrix).expect("shapes match");
            out.push((format!("{name}: {n}x{m}"), p));
        }
    }
    let z4 = &rings[0].1;
    out.push(("z4: multiplication by 2".into(), Presentation::new(z4, 1, vec![vec![vec![2]]]).expect("valid")));
    let z8 = &rings[1].1;
    out.push(("z8: multiplication by 2".into(), Presentation::new(z8, 1, vec![vec![vec![2]]]).expect("valid")));
    out
}

/// `P^{-1}` alongside a random invertible `P` over `Z/m`.
fn random_gl(t: usize, m: u64, rng: &mut ChaCha8Rng) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let id = |n: usize| -> Vec<Vec<u64>> { (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect() };
    let (mut p, mut q) = (id(t), id(t));
    if t < 2 {
        return (p, q);
    }
    for _ in 0..3 * t {
        let (i, j) = (rng.gen_range(0..t), rng.gen_range(0..t));
        if i == j {
            continue;
        }
        let c = rng.gen_range(1..m);
        // P ← E·P with E = I + c·e_ij; Q ← Q·E^{-1}
        for k in 0..t {
            p[i][k] = zn::add(p[i][k], zn::mul(c, p[j][k], m), m);
            q[k][j] = zn::sub(q[k][j], zn::mul(c, q[k][i], m), m);
        }
    }
    (p, q)
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], m: u64) -> Vec<Vec<u64>> {
    a.iter()
        .map(|row| {
            (0..b.first().map_or(0, |r| r.len()))
                .map(|c| row.iter().zip(b).fold(0, |acc, (&x, br)| zn::add(acc, zn::mul(x, br[c], m), m)))
                .collect()
        })
        .collect()
}

/// Rewrites module data in the basis `y = x·P`.
pub fn scramble(data: &ModuleData, m: u64, rng: &mut ChaCha8Rng) -> ModuleData {
    let t = data.add_rank;
    let (p, q) = random_gl(t, m, rng);
    let to_u = |rows: &[Vec<i64>]| -> Vec<Vec<u64>> {
        rows.iter().map(|r| r.iter().map(|&v| zn::from_i128(v as i128, m)).collect()).collect()
    };
    let to_i = |rows: Vec<Vec<u64>>| -> Vec<Vec<i64>> {
        rows.into_iter().map(|r| r.into_iter().map(|v| v as i64).collect()).collect()
    };
    let relations = to_i(mat_mul(&to_u(&data.relations), &p, m));
    let action = data.action.iter().map(|a| to_i(mat_mul(&mat_mul(&q, &to_u(a), m), &p, m))).collect();
    ModuleData { add_rank: t, relations, action }
}

/// Direct sums of given module data, block-diagonally.
pub fn direct_sum_data(parts: &[&ModuleData]) -> ModuleData {
    let t: usize = parts.iter().map(|p| p.add_rank).sum();
    let d = parts.first().map_or(0, |p| p.action.len());
    let mut relations = Vec::new();
    let mut action = vec![vec![vec![0i64; t]; t]; d];
    let mut off = 0;
    for p in parts {
        for r in &p.relations {
            let mut v = vec![0; t];
            v[off..off + p.add_rank].copy_from_slice(r);
            relations.push(v);
        }
        for (j, a) in p.action.iter().enumerate() {
            for (i, row) in a.iter().enumerate() {
                action[j][off + i][off..off + p.add_rank].copy_from_slice(row);
            }
        }
        off += p.add_rank;
    }
    ModuleData { add_rank: t, relations, action }
}

/// `Z/k` as a module over `Z/m`.
pub fn cyclic_data(k: i64) -> ModuleData {
    ModuleData { add_rank: 1, relations: vec![vec![k]], action: vec![vec![vec![1]]] }
}

/// Indecomposable right modules over `T_2(F_2)` (basis `e11, e12, e22`).
pub fn t2_indecomposables() -> Vec<(&'static str, ModuleData)> {
    let simple1 = ModuleData { add_rank: 1, relations: vec![], action: vec![vec![vec![1]], vec![vec![0]], vec![vec![0]]] };
    let simple2 = ModuleData { add_rank: 1, relations: vec![], action: vec![vec![vec![0]], vec![vec![0]], vec![vec![1]]] };
    // e11·R with basis (e11, e12)
    let projective = ModuleData {
        add_rank: 2,
        relations: vec![],
        action: vec![
            vec![vec![1, 0], vec![0, 0]],
            vec![vec![0, 1], vec![0, 0]],
            vec![vec![0, 0], vec![0, 1]],
        ],
    };
    vec![("S1", simple1), ("S2", simple2), ("P1", projective)]
}

/// Scrambled direct sums of indecomposables over `Z/8`, `Z/12` and `T_2(F_2)`, each with at most 256 elements.
pub fn krull_schmidt_modules(settings: &Settings) -> Vec<(String, FiniteModule)> {
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed ^ 0x4b53);
    let mut out = Vec::new();
    let mut add = |label: String, ring: &FiniteRing, parts: Vec<ModuleData>, rng: &mut ChaCha8Rng| {
        let refs: Vec<&ModuleData> = parts.iter().collect();
        let data = scramble(&direct_sum_data(&refs), ring.modulus(), rng);
        let m = FiniteModule::from_data(ring, &data).expect("scrambled sums are modules");
        debug_assert!(m.size().is_some_and(|s| s <= 256));
        out.push((label, m));
    };
    let z8 = zn_ring(8).expect("valid");
    for combo in [&[8, 4][..], &[2, 2, 2], &[8, 2, 2], &[4, 4, 2], &[8, 8], &[4, 2, 2, 2], &[2, 4, 8]] {
        add(format!("z8: {combo:?}"), &z8, combo.iter().map(|&k| cyclic_data(k)).collect(), &mut rng);
    }
    let z12 = zn_ring(12).expect("valid");
    for combo in [&[12][..], &[6, 2], &[4, 3], &[12, 2], &[6, 6], &[3, 3, 4], &[12, 6]] {
        add(format!("z12: {combo:?}"), &z12, combo.iter().map(|&k| cyclic_data(k)).collect(), &mut rng);
    }
    let t2 = upper_triangular(2, 2).expect("valid");
    let ind = t2_indecomposables();
    for combo in [&[2][..], &[0, 1], &[2, 2], &[2, 0, 1], &[0, 0, 2], &[1, 1, 2, 0], &[2, 2, 1]] {
        let names: Vec<&str> = combo.iter().map(|&i| ind[i].0).collect();
        add(format!("t2-f2: {names:?}"), &t2, combo.iter().map(|&i| ind[i].1.clone()).collect(), &mut rng);
    }
    // a random submodule-generated piece of a free module over T_2(F_2)
    let free = FiniteModule::free(&t2, 2);
    let mut elems: Vec<Elem> = free.elements().collect();
    elems.shuffle(&mut rng);
    let span = free.submodule_generated(&elems[..2]);
    let (sub, _) = free.submodule(&span).expect("generated spans are submodules");
    out.push(("t2-f2: submodule of R^2".into(), sub));
    out
}

pub struct RestrictionFixture {
    pub label: String,
    pub embedding: RingHom,
    pub module: FiniteModule,
}

fn right_ideal_module(s: &FiniteRing, e: &Elem) -> FiniteModule {
    let reg = FiniteModule::regular(s);
    reg.submodule(&s.right_ideal(e)).expect("right ideals are submodules").0
}

fn embedding_of(r: &FiniteRing, s: &FiniteRing, images: Vec<Elem>) -> RingHom {
    RingHom::new(r, s, images).expect("fixture embeddings are homomorphisms")
}

/// `(R ↪ S, M_S)` triples.
pub fn restriction_fixtures() -> Vec<RestrictionFixture> {
    let f2 = zn_ring(2).expect("valid");
    let z4 = zn_ring(4).expect("valid");
    let z8 = zn_ring(8).expect("valid");
    let f4 = poly_quotient(2, &[1, 1]).expect("valid");
    let dual4 = poly_quotient(4, &[0, 0]).expect("valid");
    let f2xf2 = product(&[&f2, &f2]).expect("valid");
    let m2 = matrix_ring(2, 2).expect("valid");
    let t2 = upper_triangular(2, 2).expect("valid");
    let m2z4 = matrix_ring(2, 4).expect("valid");
    let z4xz2 = product(&[&z4, &f2]).expect("valid");
    let c2 = catalog::ring("f2-c2").expect("listed");
    let klein = catalog::ring("f2-klein").expect("listed");
    let scalar = |s: &FiniteRing| embedding_of(&zn_ring(s.exponent()).expect("valid"), s, vec![s.unity()]);

    let mut out = vec![
        RestrictionFixture { label: "Z/4[x]/(x^2) over itself".into(), embedding: RingHom::identity(&dual4), module: FiniteModule::regular(&dual4) },
        RestrictionFixture { label: "Z/4 in Z/4[x]/(x^2), M = S".into(), embedding: scalar(&dual4), module: FiniteModule::regular(&dual4) },
        RestrictionFixture { label: "F2 in F2 x F2, M = S".into(), embedding: scalar(&f2xf2), module: FiniteModule::regular(&f2xf2) },
        RestrictionFixture { label: "F2 in F4, M = S".into(), embedding: scalar(&f4), module: FiniteModule::regular(&f4) },
        RestrictionFixture { label: "F2 in M2(F2), M = S".into(), embedding: scalar(&m2), module: FiniteModule::regular(&m2) },
        RestrictionFixture {
            label: "diagonal in M2(F2), M = e11 S".into(),
            embedding: embedding_of(&f2xf2, &m2, vec![vec![1, 0, 0, 0], vec![0, 0, 0, 1]]),
            module: right_ideal_module(&m2, &m2.basis_element(0)),
        },
        RestrictionFixture {
            label: "T2(F2) in M2(F2), M = S".into(),
            embedding: embedding_of(&t2, &m2, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 1]]),
            module: FiniteModule::regular(&m2),
        },
        RestrictionFixture {
            label: "Z/8 over itself, M = Z/4 + Z/2".into(),
            embedding: RingHom::identity(&z8),
            module: FiniteModule::from_data(&z8, &direct_sum_data(&[&cyclic_data(4), &cyclic_data(2)])).expect("valid"),
        },
        RestrictionFixture { label: "F2 in F2[C2], M = S".into(), embedding: scalar(&c2), module: FiniteModule::regular(&c2) },
        RestrictionFixture {
            label: "Z/4 in Z/4 x Z/2, M = S".into(),
            embedding: embedding_of(&z4, &z4xz2, vec![vec![1, 1]]),
            module: FiniteModule::regular(&z4xz2),
        },
        RestrictionFixture {
            label: "F2[C2] in F2[C2 x C2], M = S".into(),
            embedding: embedding_of(&c2, &klein, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]),
            module: FiniteModule::regular(&klein),
        },
        RestrictionFixture {
            label: "T2(F2) in M2(F2), M = e11 S".into(),
            embedding: embedding_of(&t2, &m2, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 1]]),
            module: right_ideal_module(&m2, &m2.basis_element(0)),
        },
    ];
    let cent = centralizer(&m2z4, &[m2z4.basis_element(1)]);
    let emb = RingHom::new(cent.ring(), &m2z4, cent.ring().basis().iter().map(|b| cent.extracted().to_ambient(b)).collect())
        .expect("inclusion is a homomorphism");
    out.push(RestrictionFixture {
        label: "Cent(e12) in M2(Z/4), M = e11 S".into(),
        embedding: emb,
        module: right_ideal_module(&m2z4, &m2z4.basis_element(0)),
    });
    out
}

/// Members of a span, materialised.
pub fn span_members(r: &FiniteRing, s: &SpanBasis) -> Vec<Elem> {
    r.span_elements(s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_are_large_enough() {
        let s = Settings::default();
        assert!(subring_pairs(&s).len() >= 50);
        assert!(equalizer_specs(&s).len() >= 20);
        assert!(presentations(&s).len() >= 20);
        assert!(krull_schmidt_modules(&s).len() >= 20);
        assert!(restriction_fixtures().len() >= 10);
    }

    #[test]
    fn scrambling_preserves_the_module() {
        let s = Settings::default();
        let z8 = zn_ring(8).unwrap();
        let plain = FiniteModule::from_data(&z8, &direct_sum_data(&[&cyclic_data(4), &cyclic_data(2)])).unwrap();
        for (label, m) in krull_schmidt_modules(&s).into_iter().take(3) {
            assert!(m.size().unwrap() <= 256, "{label}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let data = scramble(&direct_sum_data(&[&cyclic_data(4), &cyclic_data(2)]), 8, &mut rng);
        let m = FiniteModule::from_data(&z8, &data).unwrap();
        assert_eq!(m.size(), plain.size());
        assert!(crate::modules::module_iso_exhaustive(&m, &plain, &s).unwrap().is_some());
    }

    #[test]
    fn deterministic_in_the_seed() {
        let s = Settings::default();
        let a: Vec<String> = subring_pairs(&s).into_iter().map(|p| p.label).collect();
        let b: Vec<String> = subring_pairs(&s).into_iter().map(|p| p.label).collect();
        assert_eq!(a, b);
    }
}
