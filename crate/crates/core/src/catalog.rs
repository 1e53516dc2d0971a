//! Built-in fixture rings.

use crate::error::{Error, Result};
use crate::ring::{
    group_ring, klein_group_table, matrix_over, matrix_ring, poly_quotient, product, quaternion,
    s3_table, upper_triangular, zn_ring, cyclic_group_table, FiniteRing,
};

pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> Result<FiniteRing>,
}

impl CatalogEntry {
    pub fn build(&self) -> FiniteRing {
        (self.build)().expect("catalog rings are valid")
    }
}

fn f2() -> Result<FiniteRing> {
    zn_ring(2)
}

fn f4() -> Result<FiniteRing> {
    poly_quotient(2, &[1, 1])
}

const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry { name: "z4", description: "Z/4", build: || zn_ring(4) },
    CatalogEntry { name: "z6", description: "Z/6", build: || zn_ring(6) },
    CatalogEntry { name: "z8", description: "Z/8", build: || zn_ring(8) },
    CatalogEntry { name: "z9", description: "Z/9", build: || zn_ring(9) },
    CatalogEntry { name: "f4", description: "F_4 = F_2[x]/(x^2+x+1)", build: f4 },
    CatalogEntry { name: "m2-f2", description: "2x2 matrices over F_2", build: || matrix_ring(2, 2) },
    CatalogEntry { name: "m2-z4", description: "2x2 matrices over Z/4", build: || matrix_ring(2, 4) },
    CatalogEntry { name: "t2-f2", description: "upper-triangular 2x2 matrices over F_2", build: || upper_triangular(2, 2) },
    CatalogEntry { name: "t2-f3", description: "upper-triangular 2x2 matrices over F_3", build: || upper_triangular(2, 3) },
    CatalogEntry { name: "f2xf2", description: "F_2 x F_2", build: || product(&[&f2()?, &f2()?]) },
    CatalogEntry { name: "f2-c2", description: "group ring F_2[C_2]", build: || group_ring(2, &cyclic_group_table(2), &["1", "g"]) },
    CatalogEntry { name: "z12", description: "Z/12", build: || zn_ring(12) },
    CatalogEntry { name: "f8", description: "F_8 = F_2[x]/(x^3+x+1)", build: || poly_quotient(2, &[1, 1, 0]) },
    CatalogEntry { name: "f2-dual", description: "F_2[x]/(x^2)", build: || poly_quotient(2, &[0, 0]) },
    CatalogEntry { name: "z4-dual", description: "Z/4[x]/(x^2)", build: || poly_quotient(4, &[0, 0]) },
    CatalogEntry { name: "m2-f3", description: "2x2 matrices over F_3", build: || matrix_ring(2, 3) },
    CatalogEntry { name: "m2-f4", description: "2x2 matrices over F_4, as an 8-dimensional F_2-algebra", build: || matrix_over(&f4()?, 2) },
    CatalogEntry { name: "t3-f2", description: "upper-triangular 3x3 matrices over F_2", build: || upper_triangular(3, 2) },
    CatalogEntry { name: "z4xz2", description: "Z/4 x Z/2", build: || product(&[&zn_ring(4)?, &f2()?]) },
    CatalogEntry { name: "f2-klein", description: "group ring F_2[C_2 x C_2]", build: || group_ring(2, &klein_group_table(), &["1", "a", "b", "ab"]) },
    CatalogEntry {
        name: "f2-s3",
        description: "group ring F_2[S_3]",
        build: || {
            let (t, n) = s3_table();
            group_ring(2, &t, &n)
        },
    },
    CatalogEntry {
        name: "f3-s3",
        description: "group ring F_3[S_3]",
        build: || {
            let (t, n) = s3_table();
            group_ring(3, &t, &n)
        },
    },
    CatalogEntry { name: "quat-z3", description: "quaternions over Z/3", build: || quaternion(3) },
];

/// Every built-in ring.
pub fn entries() -> &'static [CatalogEntry] {
    ENTRIES
}

/// The eleven small rings on which every brute-force oracle runs.
pub const SMALL_RINGS: [&str; 11] =
    ["z4", "z6", "z8", "z9", "f4", "m2-f2", "m2-z4", "t2-f2", "t2-f3", "f2xf2", "f2-c2"];

pub fn ring(name: &str) -> Result<FiniteRing> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .map(|e| e.build())
        .ok_or_else(|| Error::InvalidInput(format!("unknown catalog ring '{name}'")))
}

pub fn small_rings() -> Vec<(&'static str, FiniteRing)> {
    SMALL_RINGS.iter().map(|&n| (n, ring(n).expect("listed"))).collect()
}

pub fn all_rings() -> Vec<(&'static str, FiniteRing)> {
    ENTRIES.iter().map(|e| (e.name, e.build())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_builds() {
        for e in entries() {
            let r = e.build();
            assert!(r.dim() > 0, "{}", e.name);
        }
        assert!(ring("nope").is_err());
    }

    #[test]
    fn small_rings_fit_the_cap() {
        for (name, r) in small_rings() {
            assert!(r.size().unwrap() <= 4096, "{name}");
        }
    }
}
