//! Stabilizer chains (base and strong generating set) for permutation groups.
//!
//! Chains are built in two phases. A seeded random Schreier–Sims phase sifts
//! product-replacement elements until the chain stops growing; a
//! deterministic Schreier–Sims pass then checks every Schreier generator and
//! repairs the chain where needed. The resulting order is exact.
//!
//! When the caller already knows an upper bound for the group (for example
//! `|B_n| = n!·2^n` for subgroups of `B_n`), [`reaches_order`] can stop as soon
//! as the product of the basic orbit lengths reaches that bound: every basic
//! orbit of a partial chain is contained in the true basic orbit, so that
//! product never exceeds the group order.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::perm::{PermError, Permutation};
use crate::signed::SignedElement;

type Raw = Vec<u32>;

const RANDOM_SEED: u64 = 0x5eed_c4a1_2024;
const QUIET_SIFTS: usize = 24;

fn compose(a: &[u32], b: &[u32]) -> Raw {
    a.iter().map(|&x| b[x as usize]).collect()
}

fn invert(a: &[u32]) -> Raw {
    let mut inv = vec![0u32; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

fn is_id(a: &[u32]) -> bool {
    a.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

fn first_moved(a: &[u32]) -> Option<usize> {
    a.iter().enumerate().position(|(i, &x)| i as u32 != x)
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    /// Indices into `StabilizerChain::strong`.
    gens: Vec<usize>,
    orbit: Vec<u32>,
    /// `slot[point]` indexes `reps`/`reps_inv` for points in the orbit.
    slot: Vec<Option<u32>>,
    /// `reps[k]` maps the base point to `orbit[k]`.
    reps: Vec<Raw>,
    reps_inv: Vec<Raw>,
}

impl Level {
    fn new(degree: usize, base: usize) -> Self {
        let mut slot = vec![None; degree];
        slot[base] = Some(0);
        let id: Raw = (0..degree as u32).collect();
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base as u32],
            slot,
            reps: vec![id.clone()],
            reps_inv: vec![id],
        }
    }
}

/// A base and strong generating set with explicit transversals.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    strong: Vec<Raw>,
    levels: Vec<Level>,
}

impl StabilizerChain {
    fn empty(degree: usize) -> Self {
        StabilizerChain {
            degree,
            strong: Vec::new(),
            levels: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// 1-based base points.
    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base + 1).collect()
    }

    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        self.strong.iter().cloned().map(Permutation::from_raw).collect()
    }

    /// Strong generators lying in the stabilizer of the first `level` base points.
    pub fn level_generators(&self, level: usize) -> Vec<Permutation> {
        self.levels[level]
            .gens
            .iter()
            .map(|&g| Permutation::from_raw(self.strong[g].clone()))
            .collect()
    }

    /// Exact group order: the product of the transversal sizes.
    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn group_size(&self) -> BigUint {
        self.order()
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool, PermError> {
        if p.degree() != self.degree {
            return Err(PermError::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        let (h, j) = self.strip(p.raw().to_vec(), 0);
        Ok(j == self.levels.len() && is_id(&h))
    }

    /// Sifts `g` from `start`; returns the residue and the level where it dropped out
    /// (`levels.len()` if it passed every level).
    fn strip(&self, mut g: Raw, start: usize) -> (Raw, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let image = g[level.base] as usize;
            match level.slot[image] {
                Some(k) => g = compose(&g, &level.reps_inv[k as usize]),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    fn push_level(&mut self, base: usize) {
        self.levels.push(Level::new(self.degree, base));
    }

    /// Adds strong generator `id` to level `l` and extends that level's orbit.
    fn add_gen_to_level(&mut self, l: usize, id: usize) {
        let level = &mut self.levels[l];
        level.gens.push(id);
        let old_len = level.orbit.len();
        let newest = level.gens.len() - 1;
        let mut head = 0;
        while head < level.orbit.len() {
            let x = level.orbit[head] as usize;
            let k = level.slot[x].expect("orbit point has a slot") as usize;
            // old orbit points only need the new generator
            let first = if head < old_len { newest } else { 0 };
            for gi in first..level.gens.len() {
                let s = &self.strong[level.gens[gi]];
                let y = s[x] as usize;
                if level.slot[y].is_none() {
                    let rep = compose(&level.reps[k], s);
                    let inv = invert(&rep);
                    level.slot[y] = Some(level.reps.len() as u32);
                    level.reps.push(rep);
                    level.reps_inv.push(inv);
                    level.orbit.push(y as u32);
                }
            }
            head += 1;
        }
    }

    /// Records `h` as a strong generator in levels `from..=to`, creating a new
    /// level when `to` is one past the current depth.
    fn install(&mut self, h: Raw, from: usize, to: usize) {
        if to == self.levels.len() {
            let b = first_moved(&h).expect("nonidentity residue");
            self.push_level(b);
        }
        let id = self.strong.len();
        self.strong.push(h);
        for l in from..=to {
            self.add_gen_to_level(l, id);
        }
    }

    /// Sifts `g` from the top and installs its residue if it is not trivial.
    /// Returns true when the chain grew.
    fn sift_and_install(&mut self, g: Raw) -> bool {
        let (h, j) = self.strip(g, 0);
        if j == self.levels.len() && is_id(&h) {
            return false;
        }
        self.install(h, 0, j);
        true
    }

    /// Deterministic Schreier–Sims: verifies every Schreier generator and
    /// repairs the chain until it is a complete base and strong generating set.
    fn complete(&mut self) {
        let mut done: Vec<HashSet<(u32, u32)>> = vec![HashSet::new(); self.levels.len()];
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let li = i as usize;
            if done.len() < self.levels.len() {
                done.resize(self.levels.len(), HashSet::new());
            }
            let mut jumped_to = None;
            'pairs: for oi in 0..self.levels[li].orbit.len() {
                for gi in 0..self.levels[li].gens.len() {
                    if !done[li].insert((oi as u32, gi as u32)) {
                        continue;
                    }
                    let level = &self.levels[li];
                    let beta = level.orbit[oi] as usize;
                    let s = &self.strong[level.gens[gi]];
                    let u = &level.reps[level.slot[beta].unwrap() as usize];
                    let image = s[beta] as usize;
                    let v_inv = &level.reps_inv[level.slot[image].unwrap() as usize];
                    let schreier = compose(&compose(u, s), v_inv);
                    if is_id(&schreier) {
                        continue;
                    }
                    let (h, j) = self.strip(schreier, li + 1);
                    if j < self.levels.len() || !is_id(&h) {
                        self.install(h, li + 1, j);
                        jumped_to = Some(j);
                        break 'pairs;
                    }
                }
            }
            match jumped_to {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }
}

/// Seeded product-replacement generator of random group elements.
struct RandomElements {
    rng: ChaCha8Rng,
    state: Vec<Raw>,
    acc: Raw,
}

impl RandomElements {
    fn new(degree: usize, gens: &[Raw], seed: u64) -> Self {
        let mut state: Vec<Raw> = gens.to_vec();
        let id: Raw = (0..degree as u32).collect();
        if state.is_empty() {
            state.push(id.clone());
        }
        let mut k = 0;
        while state.len() < 10 {
            state.push(state[k].clone());
            k += 1;
        }
        let mut r = RandomElements {
            rng: ChaCha8Rng::seed_from_u64(seed),
            state,
            acc: id,
        };
        for _ in 0..50 {
            r.next();
        }
        r
    }

    fn next(&mut self) -> Raw {
        let len = self.state.len();
        let s = self.rng.gen_range(0..len);
        let mut t = self.rng.gen_range(0..len - 1);
        if t >= s {
            t += 1;
        }
        self.state[s] = if self.rng.gen_bool(0.5) {
            compose(&self.state[s], &self.state[t])
        } else {
            compose(&self.state[t], &self.state[s])
        };
        self.acc = compose(&self.acc, &self.state[s]);
        self.acc.clone()
    }
}

fn checked_raw(degree: usize, gens: &[Permutation]) -> Vec<Raw> {
    gens.iter()
        .map(|g| {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
            g.raw().to_vec()
        })
        .filter(|g| !is_id(g))
        .collect()
}

fn seed_chain(degree: usize, gens: &[Raw]) -> StabilizerChain {
    let mut chain = StabilizerChain::empty(degree);
    for g in gens {
        chain.sift_and_install(g.clone());
    }
    chain
}

/// Builds a verified stabilizer chain for the group generated by `gens`.
pub fn build_chain(degree: usize, gens: &[Permutation]) -> StabilizerChain {
    let raw = checked_raw(degree, gens);
    let mut chain = seed_chain(degree, &raw);
    if !raw.is_empty() {
        let mut random = RandomElements::new(degree, &raw, RANDOM_SEED);
        let mut quiet = 0;
        while quiet < QUIET_SIFTS {
            if chain.sift_and_install(random.next()) {
                quiet = 0;
            } else {
                quiet += 1;
            }
        }
    }
    chain.complete();
    chain
}

/// Order of the group generated by `gens`.
pub fn group_size(degree: usize, gens: &[Permutation]) -> BigUint {
    build_chain(degree, gens).order()
}

/// True iff `⟨gens⟩` has order at least `target`.
///
/// Random Schreier–Sims runs until the product of basic orbit lengths reaches
/// `target`. If it stalls, the chain is completed deterministically and the
/// exact order decides, so the answer is never a false positive or negative.
pub fn reaches_order(degree: usize, gens: &[Permutation], target: &BigUint) -> bool {
    let raw = checked_raw(degree, gens);
    let mut chain = seed_chain(degree, &raw);
    if &chain.order() >= target {
        return true;
    }
    if raw.is_empty() {
        return false;
    }
    let mut random = RandomElements::new(degree, &raw, RANDOM_SEED);
    let mut quiet = 0;
    while quiet < QUIET_SIFTS * 2 {
        if chain.sift_and_install(random.next()) {
            if &chain.order() >= target {
                return true;
            }
            quiet = 0;
        } else {
            quiet += 1;
        }
    }
    chain.complete();
    &chain.order() >= target
}

/// `n!·2^n`.
pub fn hyperoctahedral_order(n: usize) -> BigUint {
    factorial(n) << n
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Cheap refutation: all generators inside one of the two index-2 subgroups
/// that still project onto `Σ_n`.
pub fn lies_in_index_two_subgroup(gens: &[SignedElement]) -> bool {
    gens.iter().all(SignedElement::in_even_sign_subgroup) || gens.iter().all(SignedElement::in_parity_matched_subgroup)
}

/// True iff `gens` generate all of `B_n`.
///
/// The index-2 pre-filter only ever answers `false`; the stabilizer chain on
/// the `2n`-point embedding is the authority.
pub fn is_full_hyperoctahedral(gens: &[SignedElement], n: usize) -> bool {
    if gens.iter().any(|g| g.degree() != n) {
        return false;
    }
    if lies_in_index_two_subgroup(gens) {
        return false;
    }
    chain_generates_hyperoctahedral(gens, n)
}

/// The chain check alone, without the pre-filter.
pub fn chain_generates_hyperoctahedral(gens: &[SignedElement], n: usize) -> bool {
    let embedded: Vec<Permutation> = gens.iter().map(SignedElement::embed).collect();
    reaches_order(2 * n, &embedded, &hyperoctahedral_order(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetricClass {
    FullSymmetric,
    Alternating,
    Smaller,
}

/// Classifies `⟨gens⟩ ≤ Σ_n` by exact order.
pub fn is_full_symmetric(degree: usize, gens: &[Permutation]) -> SymmetricClass {
    let full = factorial(degree);
    if reaches_order(degree, gens, &full) {
        return SymmetricClass::FullSymmetric;
    }
    let order = group_size(degree, gens);
    if degree >= 2 && order == full / 2u32 {
        SymmetricClass::Alternating
    } else {
        SymmetricClass::Smaller
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_cycles;

    fn p(text: &str, n: usize) -> Permutation {
        parse_cycles(text, n).unwrap()
    }

    fn symmetric_gens(n: usize) -> Vec<Permutation> {
        let cycle: Vec<usize> = (1..=n).collect();
        vec![p("(1 2)", n), Permutation::from_cycles(n, &[cycle]).unwrap()]
    }

    #[test]
    fn small_orders() {
        assert_eq!(group_size(5, &symmetric_gens(5)), BigUint::from(120u32));
        assert_eq!(group_size(4, &[p("(1 2 3 4)", 4)]), BigUint::from(4u32));
        assert_eq!(group_size(7, &symmetric_gens(7)), BigUint::from(5040u32));
        assert_eq!(group_size(3, &[]), BigUint::one());
        assert!(build_chain(3, &[]).base().is_empty());
    }

    #[test]
    fn membership() {
        let s5 = build_chain(5, &symmetric_gens(5));
        assert!(s5.contains(&p("(1 2 3)", 5)).unwrap());
        let a5 = build_chain(5, &[p("(1 2 3)", 5), p("(1 2 3 4 5)", 5)]);
        assert_eq!(a5.order(), BigUint::from(60u32));
        assert!(!a5.contains(&p("(1 2)", 5)).unwrap());
        assert!(a5.contains(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn chain_invariants() {
        let chain = build_chain(6, &[p("(1 2 3)(4 5)", 6), p("(2 6)", 6)]);
        let sizes: BigUint = chain
            .transversal_sizes()
            .iter()
            .fold(BigUint::one(), |a, &s| a * BigUint::from(s));
        assert_eq!(sizes, chain.order());
        let base = chain.base();
        for l in 0..base.len() {
            for g in chain.level_generators(l) {
                for &b in &base[..l] {
                    assert_eq!(g.apply(b), b);
                }
            }
        }
    }

    #[test]
    fn classification() {
        let fig_sigma = p("(1 2 3 4)(5 6 7 8)(9 10 11 12)(13 14)(15 16 17 18)", 19);
        let fig_tau = p("(1 15)(2 5)(3 4)(7 17)(8 9)(12 13)(14 16)(18 19)", 19);
        assert_eq!(
            is_full_symmetric(19, &[fig_sigma, fig_tau]),
            SymmetricClass::FullSymmetric
        );
        assert_eq!(
            is_full_symmetric(5, &[p("(1 2 3)", 5), p("(1 4 5)", 5)]),
            SymmetricClass::Alternating
        );
        assert_eq!(is_full_symmetric(4, &[p("(1 2)", 4)]), SymmetricClass::Smaller);
    }

    #[test]
    fn hyperoctahedral_generation() {
        let flip = SignedElement::parse("[() | 100]").unwrap();
        assert!(!is_full_hyperoctahedral(std::slice::from_ref(&flip), 3));
        let both_even = [
            SignedElement::parse("[(1 2) | 110]").unwrap(),
            SignedElement::parse("[(1 2 3) | 000]").unwrap(),
        ];
        assert!(!is_full_hyperoctahedral(&both_even, 3));
        let standard = [
            SignedElement::parse("[(1 2) | 000]").unwrap(),
            SignedElement::parse("[(1 2 3) | 000]").unwrap(),
            flip,
        ];
        assert!(is_full_hyperoctahedral(&standard, 3));
        assert_eq!(hyperoctahedral_order(5), BigUint::from(3840u32));
    }
}
