//! Standard ring constructions.

use super::{Elem, FiniteRing};
use crate::error::{Error, Result};
use crate::linalg::{zn, Layout};

/// Z/m.
pub fn zn_ring(m: u64) -> Result<FiniteRing> {
    Ok(FiniteRing::new(m, &[vec![vec![1 % m]]], vec![1 % m])?.with_labels(vec!["1".into()]))
}

/// M_n(Z/m) on the matrix units `e_rs`, indexed `r·n + s`.
pub fn matrix_ring(n: usize, m: u64) -> Result<FiniteRing> {
    let layout = Layout::new(m, vec![m; n * n])?;
    let unity = (0..n * n).map(|i| u64::from(i / n == i % n)).collect();
    let labels = (0..n * n).map(|i| format!("e{}{}", i / n + 1, i % n + 1)).collect();
    FiniteRing::from_products(
        layout,
        |a, b| {
            let (r, s, t, u) = (a / n, a % n, b / n, b % n);
            let mut p = vec![0; n * n];
            if s == t {
                p[r * n + u] = 1;
            }
            p
        },
        unity,
        Some(labels),
    )
}

/// Upper-triangular n×n matrices over Z/m, basis `e_rs` with `r ≤ s` in row order.
pub fn upper_triangular(n: usize, m: u64) -> Result<FiniteRing> {
    let units: Vec<(usize, usize)> = (0..n).flat_map(|r| (r..n).map(move |s| (r, s))).collect();
    let index = |r: usize, s: usize| units.iter().position(|&u| u == (r, s));
    let layout = Layout::new(m, vec![m; units.len()])?;
    let unity = units.iter().map(|&(r, s)| u64::from(r == s)).collect();
    let labels = units.iter().map(|&(r, s)| format!("e{}{}", r + 1, s + 1)).collect();
    FiniteRing::from_products(
        layout,
        |a, b| {
            let ((r, s), (t, u)) = (units[a], units[b]);
            let mut p = vec![0; units.len()];
            if s == t {
                p[index(r, u).expect("upper triangular")] = 1;
            }
            p
        },
        unity,
        Some(labels),
    )
}

/// `(Z/m)[x] / (f)` for monic `f = x^k + c_{k-1} x^{k-1} + … + c_0`, given as `[c_0, …, c_{k-1}]`.
pub fn poly_quotient(m: u64, lower_coeffs: &[u64]) -> Result<FiniteRing> {
    let k = lower_coeffs.len();
    if k == 0 {
        return Err(Error::InvalidInput("polynomial must have positive degree".into()));
    }
    // x^e for e < 2k, reduced
    let mut powers: Vec<Elem> = Vec::with_capacity(2 * k);
    for e in 0..2 * k {
        let mut v = vec![0u64; k];
        if e < k {
            v[e] = 1 % m;
        } else {
            // x^e = x · x^(e-1)
            let prev = &powers[e - 1];
            let top = prev[k - 1];
            for i in (1..k).rev() {
                v[i] = prev[i - 1];
            }
            v[0] = 0;
            for i in 0..k {
                v[i] = zn::sub(v[i], zn::mul(top, lower_coeffs[i], m), m);
            }
        }
        powers.push(v);
    }
    let layout = Layout::new(m, vec![m; k])?;
    let mut unity = vec![0; k];
    unity[0] = 1;
    let labels = (0..k)
        .map(|e| match e {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{e}"),
        })
        .collect();
    FiniteRing::from_products(layout, |a, b| powers[a + b].clone(), unity, Some(labels))
}

/// Direct product; the modulus is the lcm of the factors' moduli.
pub fn product(factors: &[&FiniteRing]) -> Result<FiniteRing> {
    let m = factors.iter().fold(1, |a, r| zn::lcm(a, r.modulus()));
    let orders: Vec<u64> = factors.iter().flat_map(|r| r.orders().iter().copied()).collect();
    let offsets: Vec<usize> = factors
        .iter()
        .scan(0, |acc, r| {
            let o = *acc;
            *acc += r.dim();
            Some(o)
        })
        .collect();
    let d: usize = factors.iter().map(|r| r.dim()).sum();
    let owner = |i: usize| {
        let f = offsets.iter().rposition(|&o| o <= i).expect("index in range");
        (f, i - offsets[f])
    };
    let layout = Layout::new(m, orders)?;
    let unity: Elem = factors.iter().flat_map(|r| r.unity()).collect();
    let labels = (0..d)
        .map(|i| {
            let (f, li) = owner(i);
            let base = factors[f]
                .labels()
                .map_or_else(|| format!("b{li}"), |l| l[li].clone());
            format!("({}){}", f + 1, base)
        })
        .collect();
    FiniteRing::from_products(
        layout,
        |a, b| {
            let ((fa, ia), (fb, ib)) = (owner(a), owner(b));
            let mut p = vec![0; d];
            if fa == fb {
                for (k, v) in factors[fa].basis_product(ia, ib).into_iter().enumerate() {
                    p[offsets[fa] + k] = v;
                }
            }
            p
        },
        unity,
        Some(labels),
    )
}

/// `A ⊗ B` over the integers; basis `a_i ⊗ b_j` indexed `i·dim B + j`.
pub fn tensor(a: &FiniteRing, b: &FiniteRing) -> Result<FiniteRing> {
    let (da, db) = (a.dim(), b.dim());
    let orders: Vec<u64> = (0..da * db)
        .map(|t| zn::gcd(a.orders()[t / db], b.orders()[t % db]))
        .collect();
    let layout = Layout::from_orders(orders);
    let m = layout.modulus();
    let tensor_elem = |x: &[u64], y: &[u64]| -> Elem {
        (0..da * db)
            .map(|t| zn::mul(x[t / db] % m, y[t % db] % m, m))
            .collect()
    };
    let unity = tensor_elem(&a.unity(), &b.unity());
    let label = |r: &FiniteRing, i: usize| r.labels().map_or_else(|| format!("b{i}"), |l| l[i].clone());
    let labels = (0..da * db)
        .map(|t| format!("{}⊗{}", label(a, t / db), label(b, t % db)))
        .collect();
    FiniteRing::from_products(
        layout,
        |s, t| {
            let pa = a.basis_product(s / db, t / db);
            let pb = b.basis_product(s % db, t % db);
            tensor_elem(&pa, &pb)
        },
        unity,
        Some(labels),
    )
}

/// The opposite ring, same basis.
pub fn opposite(a: &FiniteRing) -> Result<FiniteRing> {
    let labels = a.labels().map(|l| l.iter().map(|s| format!("{s}°")).collect());
    FiniteRing::from_products(a.layout().clone(), |i, j| a.basis_product(j, i), a.unity(), labels)
}

/// `M_n(A)`, basis `e_rs ⊗ a_i` indexed `(r·n + s)·dim A + i`.
pub fn matrix_over(a: &FiniteRing, n: usize) -> Result<FiniteRing> {
    tensor(&matrix_ring(n, a.modulus())?, a)
}

/// Group ring `(Z/m)[G]` from a multiplication table with identity at index 0.
pub fn group_ring(m: u64, table: &[Vec<usize>], names: &[&str]) -> Result<FiniteRing> {
    let n = table.len();
    if table.iter().any(|r| r.len() != n || r.iter().any(|&g| g >= n)) {
        return Err(Error::InvalidInput("malformed group table".into()));
    }
    let layout = Layout::new(m, vec![m; n])?;
    let mut unity = vec![0; n];
    unity[0] = 1;
    let labels = names.iter().map(|s| s.to_string()).collect();
    FiniteRing::from_products(
        layout,
        |g, h| {
            let mut p = vec![0; n];
            p[table[g][h]] = 1;
            p
        },
        unity,
        Some(labels),
    )
}

/// Cyclic group `C_n`.
pub fn cyclic_group_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

/// `C_2 × C_2` as `{e, a, b, ab}`.
pub fn klein_group_table() -> Vec<Vec<usize>> {
    (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect()
}

/// `S_3` as permutations of {0,1,2}, identity first; product is composition `g∘h`.
pub fn s3_table() -> (Vec<Vec<usize>>, Vec<&'static str>) {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let names = vec!["()", "(01)", "(12)", "(02)", "(012)", "(021)"];
    let table = perms
        .iter()
        .map(|g| {
            perms
                .iter()
                .map(|h| {
                    let c = [g[h[0]], g[h[1]], g[h[2]]];
                    perms.iter().position(|p| *p == c).expect("closed")
                })
                .collect()
        })
        .collect();
    (table, names)
}

/// Quaternions over Z/m on `{1, i, j, k}` with `i² = j² = −1`, `k = ij = −ji`.
pub fn quaternion(m: u64) -> Result<FiniteRing> {
    // (sign, index) of basis products, indices 0..4 = 1, i, j, k
    const T: [[(i64, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let layout = Layout::new(m, vec![m; 4])?;
    let labels = ["1", "i", "j", "k"].iter().map(|s| s.to_string()).collect();
    FiniteRing::from_products(
        layout,
        |a, b| {
            let (s, k) = T[a][b];
            let mut p = vec![0; 4];
            p[k] = zn::from_i128(s as i128, m);
            p
        },
        vec![1 % m, 0, 0, 0],
        Some(labels),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_units_multiply() {
        let r = matrix_ring(2, 2).unwrap();
        let e12 = r.basis_element(1);
        let e21 = r.basis_element(2);
        assert_eq!(r.mul(&e12, &e21), r.basis_element(0));
        assert_eq!(r.size(), Some(16));
    }

    #[test]
    fn quaternion_relations() {
        let q = quaternion(9).unwrap();
        let (one, i, j, k) = (q.basis_element(0), q.basis_element(1), q.basis_element(2), q.basis_element(3));
        let minus_one = q.neg(&one);
        assert_eq!(q.mul(&i, &i), minus_one);
        assert_eq!(q.mul(&j, &j), minus_one);
        assert_eq!(q.mul(&i, &j), k);
        assert_eq!(q.mul(&j, &i), q.neg(&k));
    }

    #[test]
    fn poly_quotient_is_field_f4() {
        let f4 = poly_quotient(2, &[1, 1]).unwrap();
        let x = f4.basis_element(1);
        // x^2 = x + 1
        assert_eq!(f4.mul(&x, &x), vec![1, 1]);
        assert!(f4.elements().filter(|e| !f4.is_zero(e)).all(|e| f4.is_unit(&e)));
    }

    #[test]
    fn product_with_mixed_moduli() {
        let r = product(&[&zn_ring(4).unwrap(), &zn_ring(2).unwrap()]).unwrap();
        assert_eq!(r.modulus(), 4);
        assert_eq!(r.orders(), &[4, 2]);
        assert_eq!(r.size(), Some(8));
    }

    #[test]
    fn tensor_dimensions() {
        let q = quaternion(3).unwrap();
        let t = tensor(&q, &opposite(&q).unwrap()).unwrap();
        assert_eq!(t.dim(), 16);
        assert_eq!(matrix_over(&poly_quotient(2, &[1, 1]).unwrap(), 2).unwrap().dim(), 8);
    }

    #[test]
    fn s3_group_ring_is_valid() {
        let (t, names) = s3_table();
        let r = group_ring(2, &t, &names).unwrap();
        assert!(!r.is_commutative());
    }
}
