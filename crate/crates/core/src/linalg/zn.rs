//! Word-size arithmetic in Z/m for moduli below 2^63.

/// Largest modulus accepted anywhere in the crate (exclusive).
pub const MAX_MODULUS: u64 = 1 << 63;

#[inline]
pub fn add(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub(a: u64, b: u64, m: u64) -> u64 {
    let (a, b) = (a % m, b % m);
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

#[inline]
pub fn neg(a: u64, m: u64) -> u64 {
    let a = a % m;
    if a == 0 {
        0
    } else {
        m - a
    }
}

#[inline]
pub fn mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, m);
        }
        base = mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub fn from_i128(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Extended gcd on non-negative inputs: returns `(g, s, t)` with `s*a + t*b = g`.
pub fn xgcd(a: u64, b: u64) -> (u64, i128, i128) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 as u64, s0, t0)
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, s, _) = xgcd(a % m, m);
    (g == 1).then(|| from_i128(s, m))
}

/// A unit `u` of Z/m with `u*a ≡ gcd(a, m) (mod m)`.
///
/// Used to normalise pivots to divisors of the modulus.
pub fn normalizing_unit(a: u64, m: u64) -> u64 {
    let a = a % m;
    if a == 0 || m == 1 {
        return 1 % m;
    }
    let g = gcd(a, m);
    let mg = m / g;
    let base = if mg == 1 { 0 } else { inv((a / g) % mg, mg).expect("coprime cofactor") };
    let mut u = base;
    loop {
        if gcd(u, m) == 1 {
            return u % m;
        }
        u += mg;
    }
}

/// Additive order of `a` in Z/m.
pub fn additive_order(a: u64, m: u64) -> u64 {
    m / gcd(a % m, m)
}

/// Prime factorisation by trial division, as `(p, e)` pairs in increasing order.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n) == vec![(n, 1)]
}

/// Largest power of `p` dividing `n` (as the power itself, not the exponent).
pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut acc = 1;
    while n % p == 0 && n > 0 {
        n /= p;
        acc *= p;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizing_unit_hits_gcd() {
        for m in 1..40u64 {
            for a in 0..m {
                let u = normalizing_unit(a, m);
                assert_eq!(gcd(u, m) % m.max(1), if m == 1 { 0 } else { 1 }, "u={u} m={m}");
                if a != 0 {
                    assert_eq!(mul(u, a, m), gcd(a, m) % m);
                }
            }
        }
    }

    #[test]
    fn xgcd_identity() {
        for a in 0..30u64 {
            for b in 0..30u64 {
                let (g, s, t) = xgcd(a, b);
                assert_eq!(g, gcd(a, b));
                assert_eq!(s * a as i128 + t * b as i128, g as i128);
            }
        }
    }

    #[test]
    fn factor_small() {
        assert_eq!(factor(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factor(1), vec![]);
        assert_eq!(factor(729), vec![(3, 6)]);
        assert!(is_prime(7) && !is_prime(9));
    }
}
