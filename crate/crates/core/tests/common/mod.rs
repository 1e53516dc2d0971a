//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use ringcert::linalg::Layout;
use ringcert::modules::FiniteModule;
use ringcert::ring::{Elem, FiniteRing};

pub type ElemSet = HashSet<Elem>;

pub fn unit_set(r: &FiniteRing) -> ElemSet {
    let all: Vec<_> = r.elements().collect();
    let one = r.unity();
    all.iter().filter(|x| all.iter().any(|y| r.mul(x, y) == one)).cloned().collect()
}

/// `{x : 1 − s·x is a unit for all s}`.
pub fn brute_radical(r: &FiniteRing) -> ElemSet {
    let units = unit_set(r);
    let all: Vec<_> = r.elements().collect();
    let one = r.unity();
    all.iter()
        .filter(|x| all.iter().all(|s| units.contains(&r.sub(&one, &r.mul(s, x)))))
        .cloned()
        .collect()
}

/// Radical of the subring whose elements are `sub`, by quasi-regularity inside `sub`.
pub fn brute_radical_of_subset(r: &FiniteRing, sub: &[Elem]) -> ElemSet {
    let set: ElemSet = sub.iter().cloned().collect();
    let one = r.unity();
    let units: ElemSet = sub.iter().filter(|x| sub.iter().any(|y| r.mul(x, y) == one)).cloned().collect();
    sub.iter()
        .filter(|x| sub.iter().all(|s| units.contains(&r.sub(&one, &r.mul(s, x)))))
        .filter(|x| set.contains(*x))
        .cloned()
        .collect()
}

pub fn idempotent_set(r: &FiniteRing) -> Vec<Elem> {
    r.elements().filter(|x| r.mul(x, x) == *x).collect()
}

/// The unique idempotent among the powers `a, a², a³, …`.
pub fn idempotent_power(r: &FiniteRing, a: &[u64]) -> Elem {
    let mut x = a.to_vec();
    for _ in 0..=r.size().unwrap_or(u128::MAX).min(1 << 20) {
        if r.mul(&x, &x) == x {
            return x;
        }
        x = r.mul(&x, a);
    }
    panic!("no idempotent power found");
}

pub fn is_nilpotent(r: &FiniteRing, x: &[u64]) -> bool {
    let mut y = x.to_vec();
    for _ in 0..64 {
        if r.is_zero(&y) {
            return true;
        }
        y = r.mul(&y, &y);
    }
    false
}

/// Idempotents `e` with `ae = ea`, `eae` invertible in `eRe` and `faf` nilpotent.
pub fn fitting_idempotents(r: &FiniteRing, a: &[u64], idempotents: &[Elem], units: &ElemSet) -> Vec<Elem> {
    let one = r.unity();
    idempotents
        .iter()
        .filter(|e| {
            if r.mul(a, e) != r.mul(e, a) {
                return false;
            }
            let f = r.sub(&one, e);
            let eae = r.mul(&r.mul(e, a), e);
            let faf = r.mul(&r.mul(&f, a), &f);
            // eae is a unit of eRe exactly when eae + f is a unit of R
            units.contains(&r.add(&eae, &f)) && is_nilpotent(r, &faf)
        })
        .cloned()
        .collect()
}

pub fn additive_closure(r: &FiniteRing, gens: impl IntoIterator<Item = Elem>) -> ElemSet {
    let gens: Vec<Elem> = gens.into_iter().collect();
    let mut set: ElemSet = HashSet::from([r.zero()]);
    let mut frontier = vec![r.zero()];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = r.add(&x, g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

/// `X·Y` as the additive span of products.
pub fn set_product(r: &FiniteRing, x: &ElemSet, y: &ElemSet) -> ElemSet {
    let prods: BTreeSet<Elem> = x.iter().flat_map(|a| y.iter().map(move |b| r.mul(a, b))).collect();
    additive_closure(r, prods)
}

/// Least `n` with `Jⁿ = 0`, or `None` if the powers stabilise away from zero.
pub fn nilpotency_of_set(r: &FiniteRing, j: &ElemSet) -> Option<usize> {
    let mut power = j.clone();
    let mut n = 1;
    while power.len() > 1 {
        let next = set_product(r, &power, j);
        if next == power {
            return None;
        }
        power = next;
        n += 1;
    }
    Some(n)
}

/// Every tuple of images of the layout generators allowed by their orders.
pub fn all_additive_maps(layout: &Layout) -> Vec<Vec<Vec<u64>>> {
    let elems: Vec<Vec<u64>> = layout.all_elements().collect();
    let mut maps: Vec<Vec<Vec<u64>>> = vec![vec![]];
    for &o in layout.orders() {
        let allowed: Vec<&Vec<u64>> = elems.iter().filter(|y| layout.is_zero(&layout.scalar(o, y))).collect();
        maps = maps
            .into_iter()
            .flat_map(|m| {
                allowed.iter().map(move |y| {
                    let mut m = m.clone();
                    m.push((*y).clone());
                    m
                })
            })
            .collect();
    }
    maps
}

pub fn apply_images(layout: &Layout, images: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
    images.iter().zip(x).fold(layout.zero(), |acc, (y, &c)| layout.add(&acc, &layout.scalar(c, y)))
}

/// Whether the additive map with the given generator images is linear over the listed ring elements.
pub fn commutes_with(m: &FiniteModule, images: &[Vec<u64>], ring_elems: &[Elem]) -> bool {
    let l = m.layout();
    ring_elems.iter().all(|s| {
        l.basis()
            .iter()
            .all(|b| apply_images(l, images, &m.act(b, s)) == m.act(&apply_images(l, images, b), s))
    })
}

/// Elements of a submodule, as a set of module vectors.
pub fn module_elements(m: &FiniteModule) -> ElemSet {
    m.elements().collect()
}

/// Least number of elements generating the submodule `set` of `m`, with such generators.
pub fn generating_set(m: &FiniteModule, set: &ElemSet, ring_elems: &[Elem]) -> Vec<Elem> {
    let mut sorted: Vec<Elem> = set.iter().cloned().collect();
    sorted.sort();
    for g in 1..=sorted.len() {
        let mut found = None;
        combinations(&sorted, g, &mut |gens| {
            if found.is_none() && generated(m, gens, ring_elems).len() == set.len() {
                found = Some(gens.to_vec());
            }
        });
        if let Some(gens) = found {
            return gens;
        }
    }
    vec![]
}

fn combinations(items: &[Elem], k: usize, f: &mut dyn FnMut(&[Elem])) {
    fn go(items: &[Elem], k: usize, start: usize, cur: &mut Vec<Elem>, f: &mut dyn FnMut(&[Elem])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            go(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    go(items, k, 0, &mut Vec::new(), f)
}

/// The submodule generated by `gens`, as a set.
pub fn generated(m: &FiniteModule, gens: &[Elem], ring_elems: &[Elem]) -> ElemSet {
    let l = m.layout();
    let cyclic: Vec<Elem> = gens.iter().flat_map(|g| ring_elems.iter().map(move |s| m.act(g, s))).collect();
    let mut set: ElemSet = HashSet::from([l.zero()]);
    let mut frontier = vec![l.zero()];
    while let Some(x) = frontier.pop() {
        for g in &cyclic {
            let y = l.add(&x, g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Every `R`-linear map `A → B`, as a table on the elements of `A`, found by trying each
/// assignment of images to a minimal generating set.
pub fn brute_homs(a: &FiniteModule, b: &FiniteModule, mut visit: impl FnMut(&HashMap<Elem, Elem>) -> bool) {
    let ring_elems: Vec<Elem> = a.ring().elements().collect();
    let all_a = module_elements(a);
    let gens = generating_set(a, &all_a, &ring_elems);
    let targets: Vec<Elem> = b.elements().collect();
    let (la, lb) = (a.layout(), b.layout());
    // every element of A as Σ gᵢ·rᵢ
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for _ in &gens {
        tuples = tuples
            .into_iter()
            .flat_map(|t| (0..ring_elems.len()).map(move |i| [t.clone(), vec![i]].concat()))
            .collect();
    }
    let sources: Vec<Elem> = tuples
        .iter()
        .map(|t| t.iter().zip(&gens).fold(la.zero(), |acc, (&i, g)| la.add(&acc, &a.act(g, &ring_elems[i]))))
        .collect();
    let mut choice: Vec<Elem> = Vec::new();
    search_images(gens.len(), &targets, &mut choice, &mut |imgs| {
        let mut map = HashMap::new();
        for (t, x) in tuples.iter().zip(&sources) {
            let y = t.iter().zip(imgs).fold(lb.zero(), |acc, (&i, h)| lb.add(&acc, &b.act(h, &ring_elems[i])));
            match map.get(x) {
                Some(prev) if prev != &y => return false,
                Some(_) => {}
                None => {
                    map.insert(x.clone(), y);
                }
            }
        }
        visit(&map)
    });
}

/// Number of `R`-linear endomorphisms.
pub fn brute_end_count(m: &FiniteModule) -> u128 {
    let mut n = 0;
    brute_homs(m, m, |_| {
        n += 1;
        false
    });
    n
}

/// Whether two modules over the same ring are isomorphic.
pub fn brute_isomorphic(a: &FiniteModule, b: &FiniteModule) -> bool {
    if a.size() != b.size() {
        return false;
    }
    let size = b.size().unwrap() as usize;
    let mut found = false;
    brute_homs(a, b, |map| {
        let image: HashSet<&Elem> = map.values().collect();
        found = image.len() == size;
        found
    });
    found
}

/// Tries assignments until `test` accepts one.
fn search_images(k: usize, targets: &[Elem], choice: &mut Vec<Elem>, test: &mut dyn FnMut(&[Elem]) -> bool) -> bool {
    if choice.len() == k {
        return test(choice);
    }
    for t in targets {
        choice.push(t.clone());
        if search_images(k, targets, choice, test) {
            return true;
        }
        choice.pop();
    }
    false
}

/// Partition exponents `λ` of a finite abelian `p`-group from the counts `|M[pᵏ]|`.
pub fn p_group_partition(layout: &Layout, p: u64) -> Vec<u32> {
    let elems: Vec<Vec<u64>> = layout.all_elements().collect();
    let log_p = |n: usize| -> u32 {
        let mut k = 0;
        let mut n = n as u64;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        assert_eq!(n, 1);
        k
    };
    // tₖ = log_p |M[pᵏ]| = Σ min(λᵢ, k)
    let mut t = vec![0u32];
    let mut pk = 1u64;
    loop {
        pk *= p;
        let count = elems.iter().filter(|x| layout.is_zero(&layout.scalar(pk, x))).count();
        let cur = log_p(count);
        t.push(cur);
        if cur == t[t.len() - 2] {
            break;
        }
    }
    // number of parts ≥ k is t_k − t_{k−1}
    let mut parts = Vec::new();
    for k in 1..t.len() {
        let ge_k = t[k] - t[k - 1];
        let ge_next = if k + 1 < t.len() { t[k + 1] - t[k] } else { 0 };
        for _ in 0..(ge_k - ge_next) {
            parts.push(k as u32);
        }
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Rank of a matrix over the prime field `F_p`.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] % p != 0) else { continue };
        rows.swap(rank, piv);
        let inv = (1..p).find(|&v| rows[rank][c] * v % p == 1).unwrap();
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][c] % p != 0 {
                let f = rows[i][c] % p;
                for k in 0..cols {
                    rows[i][k] = (rows[i][k] + p * p - f * rows[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Every submodule of `m`, as element sets.
pub fn all_submodules(m: &FiniteModule, ring_elems: &[Elem]) -> Vec<ElemSet> {
    let elems: Vec<Elem> = m.elements().collect();
    let zero: ElemSet = HashSet::from([m.layout().zero()]);
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let key = |s: &ElemSet| {
        let mut v: Vec<Elem> = s.iter().cloned().collect();
        v.sort();
        v
    };
    seen.insert(key(&zero));
    let mut out = vec![zero.clone()];
    let mut frontier = vec![zero];
    while let Some(s) = frontier.pop() {
        for x in &elems {
            if s.contains(x) {
                continue;
            }
            let mut gens: Vec<Elem> = s.iter().cloned().collect();
            gens.push(x.clone());
            let t = generated(m, &gens, ring_elems);
            if seen.insert(key(&t)) {
                out.push(t.clone());
                frontier.push(t);
            }
        }
    }
    out
}

/// A decomposition of `m` into indecomposable submodules, found by exhaustive search over
/// pairs of complementary submodules.
pub fn exhaustive_decomposition(m: &FiniteModule) -> Vec<ElemSet> {
    let ring_elems: Vec<Elem> = m.ring().elements().collect();
    let subs = all_submodules(m, &ring_elems);
    let whole = module_elements(m);
    let mut out = Vec::new();
    split(m, &subs, whole, &mut out);
    out
}

fn split(m: &FiniteModule, subs: &[ElemSet], n: ElemSet, out: &mut Vec<ElemSet>) {
    let l = m.layout();
    let inside: Vec<&ElemSet> = subs.iter().filter(|s| s.len() > 1 && s.len() < n.len() && s.is_subset(&n)).collect();
    for a in &inside {
        for b in &inside {
            if a.len() * b.len() == n.len() && a.intersection(b).count() == 1 {
                let sum: ElemSet = a.iter().flat_map(|x| b.iter().map(move |y| l.add(x, y))).collect();
                if sum.len() == n.len() {
                    split(m, subs, (*a).clone(), out);
                    split(m, subs, (*b).clone(), out);
                    return;
                }
            }
        }
    }
    out.push(n);
}

/// `(a, b, c)` with `M ≅ S₁ᵃ ⊕ S₂ᵇ ⊕ P₁ᶜ` over `T₂(F₂)`, from the sizes of `M·e₁₁`, `M·e₂₂`, `M·e₁₂`.
pub fn t2_type_counts(m: &FiniteModule) -> (u32, u32, u32) {
    let r = m.ring();
    let log2 = |s: ElemSet| s.len().trailing_zeros();
    let image = |k: usize| -> ElemSet { m.elements().map(|x| m.act(&x, &r.basis_element(k))).collect() };
    // S₁ = e₁₁-line, S₂ = e₂₂-line, P₁ = e₁₁R with M·e₁₂ ≠ 0
    let (e11, e12, e22) = (log2(image(0)), log2(image(1)), log2(image(2)));
    (e11 - e12, e22 - e12, e12)
}
