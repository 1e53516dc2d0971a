//! Structural invariants over the catalog, sampled with proptest.

mod common;

use proptest::prelude::*;

use common::*;
use ringcert::catalog;
use ringcert::fitting::associated_idempotent;
use ringcert::modules::{end_ring, module_iso_test, FiniteModule};
use ringcert::restopo::{ball_ideal, standard_ball, Resolution};
use ringcert::ring::{jacobson_radical, peirce_corner, semiperfect_certificate, Elem, FiniteRing, RingHom};
use ringcert::subrings::{centralizer, intersect, invariant_subring, rationally_closed_check};
use ringcert::towers::{
    build_truncation_tower, closure_membership, jacobson_power_openness, TowerModule, TowerSpec,
};
use ringcert::Settings;

fn rings() -> Vec<(&'static str, FiniteRing)> {
    catalog::all_rings().into_iter().filter(|(_, r)| r.size().is_some_and(|n| n <= 4096)).collect()
}

fn pick(r: &FiniteRing, seed: &[u64]) -> Elem {
    r.orders().iter().zip(seed.iter().cycle()).map(|(&o, &s)| s % o).collect()
}

fn ring_and_elems(n: usize) -> impl Strategy<Value = (usize, Vec<Vec<u64>>)> {
    (0..rings().len(), prop::collection::vec(prop::collection::vec(any::<u64>(), 8), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fitting_decomposition_is_consistent((i, seeds) in ring_and_elems(1)) {
        let (_, r) = &rings()[i];
        let a = pick(r, &seeds[0]);
        let c = associated_idempotent(r, &a);
        let (e, f) = (&c.idempotent, &c.complement);
        prop_assert_eq!(r.add(e, f), r.unity());
        prop_assert!(r.is_zero(&r.mul(e, f)) && r.is_zero(&r.mul(f, e)));
        let eae = r.product(&[e, &a, e]);
        let faf = r.product(&[f, &a, f]);
        let (mut ak, mut ek, mut fk) = (a.clone(), eae.clone(), faf.clone());
        for _ in 0..2 * c.nilpotency_index.max(1) {
            prop_assert_eq!(&ak, &r.add(&ek, &fk));
            ak = r.mul(&ak, &a);
            ek = r.mul(&ek, &eae);
            fk = r.mul(&fk, &faf);
        }
        // eR is the stable member of the chain aⁿR
        let an = r.pow(&a, c.index as u64);
        prop_assert_eq!(r.right_ideal(e), r.right_ideal(&an));
    }

    #[test]
    fn radical_is_a_two_sided_ideal(i in 0..rings().len()) {
        let (_, r) = &rings()[i];
        let j = jacobson_radical(r);
        let full = r.full_span();
        prop_assert!(r.span_mul(&r.span_mul(&full, &j), &full).is_subset_of(&j));
    }

    #[test]
    fn semiperfect_certificates_and_corners(i in 0..rings().len()) {
        let (_, r) = &rings()[i];
        let cert = semiperfect_certificate(r, &Settings::default());
        prop_assert!(cert.verify(r));
        let sum = cert.idempotents.iter().fold(r.zero(), |acc, e| r.add(&acc, e));
        prop_assert_eq!(sum, r.unity());
        for (a, e) in cert.idempotents.iter().enumerate() {
            for (b, g) in cert.idempotents.iter().enumerate() {
                let prod = r.mul(e, g);
                prop_assert_eq!(prod, if a == b { e.clone() } else { r.zero() });
            }
            let corner = peirce_corner(r, e).unwrap();
            for y in corner.ring().basis() {
                prop_assert_eq!(corner.from_ambient(&corner.to_ambient(&y)), Some(y));
            }
        }
    }

    #[test]
    fn subrings_are_closed_and_rationally_closed((i, seeds) in ring_and_elems(2)) {
        let (_, r) = &rings()[i];
        let xs: Vec<Elem> = seeds.iter().map(|s| pick(r, s)).collect();
        let c = centralizer(r, &xs);
        let members: ElemSet = c.elements().collect();
        prop_assert!(members.contains(&r.unity()));
        if members.len() <= 256 {
            for x in &members {
                for y in &members {
                    prop_assert!(members.contains(&r.mul(x, y)));
                }
            }
        }
        if c.size().unwrap() <= 4096 {
            prop_assert!(rationally_closed_check(&c, &Settings::default()).unwrap().closed);
        }
        // intersecting centralizers is centralizing the union
        let both = intersect(&centralizer(r, &xs[..1]), &centralizer(r, &xs[1..])).unwrap();
        prop_assert_eq!(both.span(), c.span());
    }

    #[test]
    fn conjugation_invariants_are_centralizers((i, seeds) in ring_and_elems(4)) {
        let (_, r) = &rings()[i];
        let Some(u) = seeds.iter().map(|s| pick(r, s)).find(|x| r.is_unit(x)) else { return Ok(()) };
        let sigma = RingHom::conjugation(r, &u).unwrap();
        let inv = invariant_subring(r, &[sigma]).unwrap();
        let cent = centralizer(r, &[u]);
        prop_assert_eq!(inv.span(), cent.span());
        prop_assert!(rationally_closed_check(&inv, &Settings::default()).unwrap().closed);
    }

    #[test]
    fn idempotents_of_subrings_stay_inside((i, seeds) in ring_and_elems(2)) {
        let (_, r) = &rings()[i];
        let xs: Vec<Elem> = seeds.iter().map(|s| pick(r, s)).collect();
        let c = centralizer(r, &xs[..1]);
        let a = r.add(&xs[0], &r.mul(&xs[0], &xs[0]));
        prop_assert!(c.contains(&a));
        prop_assert!(c.contains(&associated_idempotent(r, &a).idempotent));
    }

    #[test]
    fn regular_endomorphisms_are_the_ring(i in 0..rings().len()) {
        let (_, r) = &rings()[i];
        prop_assume!(r.size().unwrap() <= 256);
        let reg = FiniteModule::regular(r);
        let end = end_ring(&reg);
        prop_assert_eq!(end.ring().size(), r.size());
        // x ↦ left multiplication by x is a ring isomorphism R → End(R_R)
        let images: Vec<Elem> = r.basis().iter().map(|b| end.from_map(&r.left_mul_map(b)).unwrap()).collect();
        let phi = RingHom::new(r, end.ring(), images).unwrap();
        prop_assert!(phi.is_injective() && phi.is_surjective());
        // as modules over End(R), the regular module is isomorphic to itself transported through φ
        let reg_end = FiniteModule::regular(end.ring());
        let transported = reg_end.restrict(&phi).unwrap();
        prop_assert!(module_iso_test(&transported, &reg, &Settings::default()).unwrap().is_some());
    }
}

fn resolution(orders: &[u64], diag: Option<&[i64]>) -> Resolution {
    let n = orders.len();
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let differentials = diag
        .map(|d| vec![(0..n).map(|i| (0..n).map(|j| if i == j { d[i] } else { 0 }).collect()).collect()])
        .unwrap_or_default();
    Resolution { base: 0, module: orders.to_vec(), augmentation: id, differentials }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn balls_are_monotone_ideals(
        orders in prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 6]), 1..=2),
        a in 1u64..=6,
        k in 1u64..=3,
        long in any::<bool>(),
    ) {
        let diag: Vec<i64> = orders.iter().map(|&o| o as i64).collect();
        let res = resolution(&orders, long.then_some(&diag[..]));
        let s = Settings::default();
        let ball = ball_ideal(&res, a, &s).unwrap();
        prop_assert!(ball.is_ideal);
        // aZ ⊇ akZ
        let finer = ball_ideal(&res, a * k, &s).unwrap();
        prop_assert!(finer.span.is_subset_of(&ball.span));
        prop_assert!(ball.span.is_subset_of(&standard_ball(&orders, a).unwrap()));
    }

    #[test]
    fn tower_openness_is_monotone(p in prop::sample::select(vec![2u64, 3, 5]), depth in 2usize..=5, mat in any::<bool>()) {
        let spec = TowerSpec { family: if mat { "matzpk" } else { "zpk" }.into(), p, k: 2, depth };
        let t = build_truncation_tower(&spec).unwrap();
        let rows = jacobson_power_openness(&t);
        for w in rows.windows(2) {
            prop_assert!(w[0].n <= w[1].n);
        }
    }

    #[test]
    fn closure_coefficients_solve_every_level(
        p in prop::sample::select(vec![2u64, 3]),
        depth in 2usize..=4,
        g in prop::collection::vec(any::<u64>(), 4),
        c in prop::collection::vec(any::<u64>(), 4),
    ) {
        let t = build_truncation_tower(&TowerSpec { family: "zpk".into(), p, k: 0, depth }).unwrap();
        let tm = TowerModule::free(&t, 2);
        let top = tm.modules.last().unwrap().layout().clone();
        let gens: Vec<Vec<Elem>> = g.chunks(2).map(|x| tm.project(&top.reduce(x))).collect();
        // a combination of the generators is always a member
        let cand_top: Elem = {
            let m = tm.modules.last().unwrap();
            let ring = t.top();
            gens.iter().zip(&c).fold(top.zero(), |acc, (gen, &k)| top.add(&acc, &m.act(gen.last().unwrap(), &ring.from_int(k as i64 % 1000))))
        };
        let cand = tm.project(&cand_top);
        let res = closure_membership(&t, &tm, &gens, &cand).unwrap();
        prop_assert!(res.member);
        for i in 0..depth {
            let m = &tm.modules[i];
            let sum = gens.iter().zip(&res.coefficients).fold(m.layout().zero(), |acc, (gen, coef)| {
                m.layout().add(&acc, &m.act(&gen[i], &coef.components[i]))
            });
            prop_assert_eq!(&sum, &cand[i]);
        }
    }
}
