//! Properties of the exact linear algebra, checked against enumeration.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use ringcert::linalg::{
    left_kernel, smith_form, solve_integer, solve_left, zn, IntMatrix, Layout, LayoutMap, ResMatrix, SpanBasis,
};

/// Every combination `Σ cᵢ·gᵢ` with `cᵢ ∈ Z/m`.
fn combinations(m: u64, dim: usize, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let mut out = BTreeSet::from([vec![0; dim]]);
    for g in gens {
        let prev: Vec<Vec<u64>> = out.iter().cloned().collect();
        for v in prev {
            for c in 1..m {
                out.insert(v.iter().zip(g).map(|(&x, &y)| zn::add(x, zn::mul(c, y, m), m)).collect());
            }
        }
    }
    out
}

fn all_vectors(m: u64, dim: usize) -> Vec<Vec<u64>> {
    (0..m.pow(dim as u32))
        .map(|mut k| {
            (0..dim)
                .map(|_| {
                    let d = k % m;
                    k /= m;
                    d
                })
                .collect()
        })
        .collect()
}

fn system() -> impl Strategy<Value = (u64, usize, Vec<Vec<u64>>)> {
    (2u64..=16, 1usize..=3, 0usize..=3).prop_flat_map(|(m, dim, n)| {
        (Just(m), Just(dim), prop::collection::vec(prop::collection::vec(0..m, dim), n))
    })
}

fn small_int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-12i64..=12, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn span_matches_enumeration((m, dim, gens) in system()) {
        let span = SpanBasis::from_generators(m, dim, gens.clone());
        let got: BTreeSet<Vec<u64>> = span.elements().collect();
        let expected = combinations(m, dim, &gens);
        prop_assert_eq!(span.size(), Some(expected.len() as u128));
        prop_assert_eq!(&got, &expected);
        for v in all_vectors(m, dim) {
            prop_assert_eq!(span.contains(&v), expected.contains(&v));
            if let Some(c) = span.coefficients(&v) {
                prop_assert_eq!(span.combine(&c), v);
            }
        }
    }

    #[test]
    fn howell_form_is_canonical((m, dim, gens) in system(), seed in any::<u64>()) {
        let span = SpanBasis::from_generators(m, dim, gens.clone());
        prop_assert_eq!(&SpanBasis::from_generators(m, dim, span.rows().to_vec()), &span);
        let mut shuffled = gens.clone();
        if !shuffled.is_empty() {
            let k = (seed as usize) % shuffled.len();
            shuffled.rotate_left(k);
            // adding a combination of generators leaves the span unchanged
            let extra: Vec<u64> = shuffled.iter().fold(vec![0; dim], |acc, g| {
                acc.iter().zip(g).map(|(&x, &y)| zn::add(x, zn::mul(seed % m, y, m), m)).collect()
            });
            shuffled.push(extra);
        }
        prop_assert_eq!(&SpanBasis::from_generators(m, dim, shuffled), &span);
    }

    #[test]
    fn sum_and_intersection((m, dim, a) in system(), b_seed in prop::collection::vec(any::<u64>(), 0..=6)) {
        let b: Vec<Vec<u64>> = b_seed.chunks(dim).filter(|c| c.len() == dim).map(|c| c.iter().map(|x| x % m).collect()).collect();
        let sa = SpanBasis::from_generators(m, dim, a.clone());
        let sb = SpanBasis::from_generators(m, dim, b.clone());
        let ea: BTreeSet<_> = sa.elements().collect();
        let eb: BTreeSet<_> = sb.elements().collect();
        let inter: BTreeSet<_> = sa.intersect(&sb).elements().collect();
        prop_assert_eq!(inter, ea.intersection(&eb).cloned().collect::<BTreeSet<_>>());
        let sum: BTreeSet<_> = sa.sum(&sb).elements().collect();
        let expected = combinations(m, dim, &[a, b].concat());
        prop_assert_eq!(sum, expected);
        prop_assert_eq!(sa.is_subset_of(&sb), ea.is_subset(&eb));
    }

    #[test]
    fn left_solving_is_sound_and_complete((m, cols, rows) in system(), target in prop::collection::vec(any::<u64>(), 3)) {
        prop_assume!(!rows.is_empty());
        let mat = ResMatrix::from_rows(m, cols, &rows);
        let b: Vec<u64> = target.iter().take(cols).map(|x| x % m).collect();
        let xs = all_vectors(m, rows.len());
        let hit = xs.iter().find(|x| mat.vec_mul(x) == b);
        match solve_left(&mat, &b) {
            Some(x) => prop_assert_eq!(mat.vec_mul(&x), b),
            None => prop_assert!(hit.is_none()),
        }
        let kernel: BTreeSet<_> = left_kernel(&mat).elements().collect();
        let expected: BTreeSet<_> = xs.into_iter().filter(|x| mat.vec_mul(x).iter().all(|&v| v == 0)).collect();
        prop_assert_eq!(kernel, expected);
    }

    #[test]
    fn smith_form_properties(a in small_int_matrix()) {
        let mat = IntMatrix::from_i64(&a);
        let s = smith_form(&mat);
        prop_assert_eq!(s.u.matmul(&mat).matmul(&s.v), s.d.clone());
        prop_assert!(s.d.is_diagonal());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        prop_assert_eq!(s.v.matmul(&s.v_inv), IntMatrix::identity(mat.cols()));
        let diag = s.diagonal();
        for d in &diag {
            prop_assert!(*d >= BigInt::zero());
        }
        for w in diag.windows(2) {
            prop_assert!(w[0].is_zero() && w[1].is_zero() || !w[0].is_zero() && (&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn integer_solving(a in small_int_matrix(), x0 in prop::collection::vec(-9i64..=9, 4), b_noise in prop::collection::vec(-9i64..=9, 4)) {
        let mat = IntMatrix::from_i64(&a);
        let x0: Vec<BigInt> = x0.iter().take(mat.cols()).map(|&v| BigInt::from(v)).collect();
        let b = mat.mul_vec(&x0);
        let sol = solve_integer(&mat, &b);
        prop_assert!(sol.is_some());
        let sol = sol.unwrap();
        prop_assert_eq!(mat.mul_vec(&sol.particular), b);
        for k in &sol.kernel {
            prop_assert!(mat.mul_vec(k).iter().all(|v| v.is_zero()));
        }
        let noisy: Vec<BigInt> = b_noise.iter().take(mat.rows()).map(|&v| BigInt::from(v)).collect();
        if let Some(s) = solve_integer(&mat, &noisy) {
            prop_assert_eq!(mat.mul_vec(&s.particular), noisy);
        }
    }

    #[test]
    fn layout_maps_match_enumeration(
        src in prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 6, 12]), 1..=2),
        dst in prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 6, 12]), 1..=2),
        raw in prop::collection::vec(any::<u64>(), 4),
    ) {
        let (ls, ld) = (Layout::from_orders(src.clone()), Layout::from_orders(dst.clone()));
        // generator i goes to an element killed by its order
        let images: Vec<Vec<u64>> = src
            .iter()
            .enumerate()
            .map(|(i, &o)| {
                ld.orders()
                    .iter()
                    .enumerate()
                    .map(|(j, &p)| {
                        let step = p / zn::gcd(o, p);
                        (raw[(2 * i + j) % 4] % p) / step * step
                    })
                    .collect()
            })
            .collect();
        let f = LayoutMap::new(ls.clone(), ld.clone(), images).unwrap();
        let elems: Vec<Vec<u64>> = ls.all_elements().collect();
        let kernel: BTreeSet<_> = ls.elements(&f.kernel()).collect();
        let expected: BTreeSet<_> = elems.iter().filter(|x| ld.is_zero(&f.apply(x))).cloned().collect();
        prop_assert_eq!(kernel, expected);
        let image: BTreeSet<_> = ld.elements(&f.image()).collect();
        let expected: BTreeSet<_> = elems.iter().map(|x| f.apply(x)).collect();
        prop_assert_eq!(&image, &expected);
        for y in ld.all_elements() {
            match f.solve(&y) {
                Some(x) => prop_assert_eq!(f.apply(&x), y),
                None => prop_assert!(!expected.contains(&y)),
            }
        }
    }
}
