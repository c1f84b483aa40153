//! Signed cycle types, class representatives and element enumeration in `B_n`.
//!
//! Two elements of `B_n` are conjugate iff they have the same multiset of
//! `(cycle length, parity of the sign sum on the cycle)` pairs.

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::perm::Permutation;
use crate::signed::{SignBlock, SignedElement};

/// One cycle of a signed cycle type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedCycle {
    pub len: usize,
    pub odd: bool,
}

impl SignedCycle {
    pub fn order(self) -> u64 {
        let l = self.len as u64;
        if self.odd {
            2 * l
        } else {
            l
        }
    }
}

/// A conjugacy class of `B_n`, cycles sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedCycleType(pub Vec<SignedCycle>);

impl SignedCycleType {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|c| c.len).sum()
    }

    pub fn order(&self) -> u64 {
        self.0.iter().fold(1, |acc, c| acc.lcm(&c.order()))
    }

    /// The canonical representative: cycles on consecutive points, each odd
    /// cycle carrying its sign on its first point.
    pub fn representative(&self) -> SignedElement {
        let n = self.degree();
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut bits = vec![false; n];
        let mut k = 0;
        for c in &self.0 {
            for idx in 0..c.len {
                images[k + idx] = (k + (idx + 1) % c.len) as u32;
            }
            bits[k] = c.odd;
            k += c.len;
        }
        SignedElement::new(Permutation::from_raw(images), SignBlock::from_bits(bits)).expect("lengths agree")
    }
}

/// All signed cycle types of degree `n` whose element order is exactly `order`.
pub fn classes_of_order(n: usize, order: u64) -> Vec<SignedCycleType> {
    let parts: Vec<SignedCycle> = (1..=n)
        .rev()
        .flat_map(|len| [SignedCycle { len, odd: true }, SignedCycle { len, odd: false }])
        .filter(|c| order.is_multiple_of(c.order()))
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    collect_types(&parts, 0, n, &mut current, &mut out);
    out.retain(|t| t.order() == order);
    out
}

fn collect_types(
    parts: &[SignedCycle],
    from: usize,
    remaining: usize,
    current: &mut Vec<SignedCycle>,
    out: &mut Vec<SignedCycleType>,
) {
    if remaining == 0 {
        out.push(SignedCycleType(current.clone()));
        return;
    }
    for (k, &part) in parts.iter().enumerate().skip(from) {
        if part.len <= remaining {
            current.push(part);
            collect_types(parts, k, remaining - part.len, current, out);
            current.pop();
        }
    }
}

/// Decodes the `index`-th permutation of `{0..n}` in lexicographic order.
pub fn nth_permutation(n: usize, mut index: u64) -> Permutation {
    let mut pool: Vec<u32> = (0..n as u32).collect();
    let mut fact: Vec<u64> = vec![1; n + 1];
    for k in 1..=n {
        fact[k] = fact[k - 1] * k as u64;
    }
    let mut images = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let q = (index / fact[k]) as usize;
        index %= fact[k];
        images.push(pool.remove(q));
    }
    Permutation::from_raw(images)
}

/// Every element of `B_n` with underlying permutation `perm` and order `order`.
pub fn signed_lifts_of_order(perm: &Permutation, order: u64) -> Vec<SignedElement> {
    let n = perm.degree();
    assert!(n < 32, "sign enumeration is limited to small degrees");
    let masks: Vec<(u32, u64)> = perm
        .cycles()
        .iter()
        .map(|c| (c.iter().fold(0u32, |m, &p| m | 1 << (p - 1)), c.len() as u64))
        .collect();
    let fixed_mask = (0..n)
        .filter(|&i| perm.apply(i + 1) == i + 1)
        .fold(0u32, |m, i| m | 1 << i);
    let mut out = Vec::new();
    for signs in 0u32..1 << n {
        let mut ord = 1u64;
        for &(mask, len) in &masks {
            let l = if (signs & mask).count_ones() % 2 == 1 {
                2 * len
            } else {
                len
            };
            ord = ord.lcm(&l);
        }
        for i in 0..n {
            if fixed_mask >> i & 1 == 1 && signs >> i & 1 == 1 {
                ord = ord.lcm(&2);
            }
        }
        if ord == order {
            let bits = (0..n).map(|i| signs >> i & 1 == 1).collect();
            out.push(SignedElement::new(perm.clone(), SignBlock::from_bits(bits)).expect("lengths agree"));
        }
    }
    out
}

/// A random element of order exactly `order`, built from a random signed
/// cycle type and a random labelling. `None` after a bounded number of tries.
pub fn random_element_of_order(n: usize, order: u64, rng: &mut ChaCha8Rng) -> Option<SignedElement> {
    let kinds: Vec<SignedCycle> = (1..=n)
        .flat_map(|len| [SignedCycle { len, odd: false }, SignedCycle { len, odd: true }])
        .filter(|c| order.is_multiple_of(c.order()))
        .collect();
    for _ in 0..64 {
        let mut cycles = Vec::new();
        let mut remaining = n;
        while remaining > 0 {
            let fitting: Vec<&SignedCycle> = kinds.iter().filter(|c| c.len <= remaining).collect();
            let c = **fitting.choose(rng)?;
            remaining -= c.len;
            cycles.push(c);
        }
        if cycles.iter().fold(1, |acc: u64, c| acc.lcm(&c.order())) != order {
            continue;
        }
        let mut points: Vec<u32> = (0..n as u32).collect();
        points.shuffle(rng);
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut bits = vec![false; n];
        let mut k = 0;
        for c in &cycles {
            let block = &points[k..k + c.len];
            for idx in 0..c.len {
                images[block[idx] as usize] = block[(idx + 1) % c.len];
            }
            let mut odd = false;
            for &p in &block[..c.len - 1] {
                let b = rng.gen();
                bits[p as usize] = b;
                odd ^= b;
            }
            bits[block[c.len - 1] as usize] = odd != c.odd;
            k += c.len;
        }
        let x = SignedElement::new(Permutation::from_raw(images), SignBlock::from_bits(bits)).expect("lengths agree");
        debug_assert_eq!(x.element_order(), order);
        return Some(x);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_order::factorial;
    use rand::SeedableRng;
    use std::collections::HashSet;

    fn all_elements(n: usize) -> Vec<SignedElement> {
        let count: u64 = factorial(n).try_into().unwrap();
        (0..count)
            .flat_map(|k| {
                let p = nth_permutation(n, k);
                (0u32..1 << n).map(move |s| {
                    let bits = (0..n).map(|i| s >> i & 1 == 1).collect();
                    SignedElement::new(p.clone(), SignBlock::from_bits(bits)).unwrap()
                })
            })
            .collect()
    }

    #[test]
    fn permutations_are_enumerated_once() {
        let seen: HashSet<Permutation> = (0..120).map(|k| nth_permutation(5, k)).collect();
        assert_eq!(seen.len(), 120);
        assert!(nth_permutation(5, 0).is_identity());
    }

    #[test]
    fn class_sizes_sum_to_group_order() {
        // brute force: conjugacy classes of B_3 and B_4 by orbit computation
        for n in [3usize, 4] {
            let elements = all_elements(n);
            let mut classes = Vec::new();
            for order in [1u64, 2, 3, 4, 6, 8] {
                classes.extend(classes_of_order(n, order));
            }
            let mut covered = HashSet::new();
            for t in &classes {
                let rep = t.representative();
                assert_eq!(rep.element_order(), t.order());
                let class: HashSet<SignedElement> = elements.iter().map(|g| g.inverse().then(&rep).then(g)).collect();
                for x in &class {
                    assert!(covered.insert(x.clone()), "classes overlap");
                }
            }
            assert_eq!(covered.len(), elements.len());
        }
    }

    #[test]
    fn lifts_match_brute_force() {
        let elements = all_elements(4);
        for k in [0u64, 5, 17, 23] {
            let p = nth_permutation(4, k);
            for order in [1u64, 2, 4, 6, 8] {
                let fast: HashSet<_> = signed_lifts_of_order(&p, order).into_iter().collect();
                let slow: HashSet<_> = elements
                    .iter()
                    .filter(|g| g.perm() == &p && g.element_order() == order)
                    .cloned()
                    .collect();
                assert_eq!(fast, slow);
            }
        }
    }

    #[test]
    fn random_elements_have_requested_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..10 {
            for order in [2u64, 4, 6, 8] {
                if let Some(x) = random_element_of_order(n, order, &mut rng) {
                    assert_eq!(x.element_order(), order);
                }
            }
        }
        assert!(random_element_of_order(3, 5, &mut rng).is_none());
    }
}
