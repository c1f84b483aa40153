//! Assembly of `(σ, τ)` pairs with `σ⁴ = τ² = (στ)⁶ = 1` from small pieces.
//!
//! A piece is a transitive pair on a few points. Two pieces are joined at a
//! pair of `τ`-fixed points on each side: if `a₁, b₁` are fixed by `τ₁` and
//! `a₂, b₂` by `τ₂`, the joined `τ` swaps `a₁ ↔ a₂` and `b₁ ↔ b₂` while `σ` is
//! the disjoint union. The product `στ` changes by the two transpositions, so
//! only the cycles through the handle points change: with `b = (στ)^d(a)` in a
//! cycle of length `l` on each side, the two new cycles have lengths
//! `d₁ + l₂ − d₂` and `l₁ − d₁ + d₂`. Joins are only made when both divide 6.
//!
//! A single join swaps one `τ`-fixed point on each side, merging two cycles
//! of `στ` of lengths `l₁` and `l₂` into one of length `l₁ + l₂`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::perm::Permutation;

const MAX_ENUMERATED_DEGREE: usize = 9;
const MAX_SAMPLED_DEGREE: usize = 12;
const MAX_SAMPLED_TAU_FIXED: usize = 7;
const PER_BUCKET: usize = 16;
const SAMPLES_PER_BUCKET: usize = 40_000;
const POOL_SEED: u64 = 0x0246_b10c;

fn divides_six(len: usize) -> bool {
    matches!(len, 1 | 2 | 3 | 6)
}

/// A pair of `τ`-fixed points in one `στ`-cycle: `b = (στ)^dist(a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Handle {
    pub a: u32,
    pub b: u32,
    pub len: u32,
    pub dist: u32,
}

impl Handle {
    fn joins_with(&self, other: &Handle) -> bool {
        let l1 = (self.dist + other.len - other.dist) as usize;
        let l2 = (self.len - self.dist + other.dist) as usize;
        divides_six(l1) && divides_six(l2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Diagram {
    pub sigma: Vec<u32>,
    pub tau: Vec<u32>,
}

impl Diagram {
    pub fn degree(&self) -> usize {
        self.sigma.len()
    }

    fn product(&self) -> Vec<u32> {
        self.sigma.iter().map(|&x| self.tau[x as usize]).collect()
    }

    pub fn to_perms(&self) -> (Permutation, Permutation) {
        (
            Permutation::from_raw(self.sigma.clone()),
            Permutation::from_raw(self.tau.clone()),
        )
    }

    fn is_transitive(&self) -> bool {
        let n = self.degree();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0usize];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for y in [self.sigma[x] as usize, self.tau[x] as usize] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == n
    }

    fn product_cycles_divide_six(&self) -> bool {
        let pi = self.product();
        let n = pi.len();
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = pi[x] as usize;
            }
            if !divides_six(len) {
                return false;
            }
        }
        true
    }

    pub fn handles(&self) -> Vec<Handle> {
        let pi = self.product();
        let n = pi.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32);
                x = pi[x] as usize;
            }
            let len = cycle.len() as u32;
            let fixed: Vec<(u32, u32)> = cycle
                .iter()
                .enumerate()
                .filter(|&(_, &p)| self.tau[p as usize] == p)
                .map(|(k, &p)| (k as u32, p))
                .collect();
            for &(ka, a) in &fixed {
                for &(kb, b) in &fixed {
                    if a != b {
                        let dist = (kb + len - ka) % len;
                        out.push(Handle { a, b, len, dist });
                    }
                }
            }
        }
        out
    }

    /// The `στ`-cycle through a `σ`-fixed point that also holds a `τ`-fixed point.
    fn lift_site(&self) -> Option<Vec<u32>> {
        let pi = self.product();
        (0..self.degree())
            .filter(|&i| self.sigma[i] as usize == i)
            .find_map(|i| {
                let mut cycle = vec![i as u32];
                let mut x = pi[i] as usize;
                while x != i {
                    cycle.push(x as u32);
                    x = pi[x] as usize;
                }
                cycle
                    .iter()
                    .any(|&p| p as usize != i && self.tau[p as usize] == p)
                    .then_some(cycle)
            })
    }

    /// `τ`-fixed points with the length of their `στ`-cycle.
    pub fn ports(&self) -> Vec<(u32, u32)> {
        let pi = self.product();
        let mut out = Vec::new();
        for (p, &t) in self.tau.iter().enumerate() {
            if t as usize == p {
                let mut len = 1;
                let mut x = pi[p] as usize;
                while x != p {
                    len += 1;
                    x = pi[x] as usize;
                }
                if len < 6 {
                    out.push((p as u32, len));
                }
            }
        }
        out
    }

    /// Joins `other` (relabelled after `self`) at one `τ`-fixed point on each side.
    pub fn join_single(&self, p1: u32, other: &Diagram, p2: u32) -> Diagram {
        let offset = self.degree() as u32;
        let mut sigma = self.sigma.clone();
        sigma.extend(other.sigma.iter().map(|&x| x + offset));
        let mut tau = self.tau.clone();
        tau.extend(other.tau.iter().map(|&x| x + offset));
        tau[p1 as usize] = p2 + offset;
        tau[(p2 + offset) as usize] = p1;
        Diagram { sigma, tau }
    }

    /// Joins `other` (relabelled after `self`) along the two handles.
    pub fn join(&self, h1: &Handle, other: &Diagram, h2: &Handle) -> Diagram {
        let offset = self.degree() as u32;
        let mut sigma = self.sigma.clone();
        sigma.extend(other.sigma.iter().map(|&x| x + offset));
        let mut tau = self.tau.clone();
        tau.extend(other.tau.iter().map(|&x| x + offset));
        let (a2, b2) = (h2.a + offset, h2.b + offset);
        tau[h1.a as usize] = a2;
        tau[a2 as usize] = h1.a;
        tau[h1.b as usize] = b2;
        tau[b2 as usize] = h1.b;
        Diagram { sigma, tau }
    }
}

/// `σ` in block form for every cycle type with parts in {1, 2, 4}.
fn sigma_shapes(degree: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for fours in 0..=degree / 4 {
        for twos in 0..=(degree - 4 * fours) / 2 {
            let mut sigma: Vec<u32> = (0..degree as u32).collect();
            let mut k = 0;
            for (len, count) in [(4, fours), (2, twos)] {
                for _ in 0..count {
                    for idx in 0..len {
                        sigma[k + idx] = (k + (idx + 1) % len) as u32;
                    }
                    k += len;
                }
            }
            out.push(sigma);
        }
    }
    out
}

fn involutions(degree: usize) -> Vec<Vec<u32>> {
    fn extend(tau: &mut Vec<u32>, from: usize, out: &mut Vec<Vec<u32>>) {
        let Some(x) = (from..tau.len()).find(|&x| tau[x] == u32::MAX) else {
            out.push(tau.clone());
            return;
        };
        tau[x] = x as u32;
        extend(tau, x + 1, out);
        for y in x + 1..tau.len() {
            if tau[y] == u32::MAX {
                tau[x] = y as u32;
                tau[y] = x as u32;
                extend(tau, x + 1, out);
                tau[y] = u32::MAX;
            }
        }
        tau[x] = u32::MAX;
    }
    let mut out = Vec::new();
    extend(&mut vec![u32::MAX; degree], 0, &mut out);
    out
}

fn parity_odd(d: &Diagram) -> bool {
    let pi = d.product();
    let mut seen = vec![false; pi.len()];
    let mut cycles = 0;
    for start in 0..pi.len() {
        if !seen[start] {
            cycles += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = pi[x] as usize;
            }
        }
    }
    (pi.len() - cycles) % 2 == 1
}

/// Keeps at most `PER_BUCKET` evenly spaced members of each bucket.
fn thin<T, K: Ord>(items: Vec<T>, key: impl Fn(&T) -> K) -> Vec<T> {
    let mut buckets: BTreeMap<K, Vec<T>> = BTreeMap::new();
    for item in items {
        buckets.entry(key(&item)).or_default().push(item);
    }
    let mut out = Vec::new();
    for (_, bucket) in buckets {
        let step = bucket.len().div_ceil(PER_BUCKET);
        out.extend(bucket.into_iter().step_by(step));
    }
    out
}

fn enumerate_diagrams() -> Vec<Diagram> {
    let mut out = Vec::new();
    for degree in 1..=MAX_ENUMERATED_DEGREE {
        let taus = involutions(degree);
        for sigma in sigma_shapes(degree) {
            for tau in &taus {
                let d = Diagram {
                    sigma: sigma.clone(),
                    tau: tau.clone(),
                };
                if d.is_transitive() && d.product_cycles_divide_six() {
                    out.push(d);
                }
            }
        }
    }
    out
}

fn random_piece(degree: usize, tau_fixed: usize, rng: &mut ChaCha8Rng) -> Diagram {
    let mut points: Vec<u32> = (0..degree as u32).collect();
    points.shuffle(rng);
    let mut sigma: Vec<u32> = (0..degree as u32).collect();
    let mut k = 0;
    while k < degree {
        let len = match rng.gen_range(0..6) {
            0 => 1,
            1 => 2,
            _ => 4,
        };
        let len = len.min(degree - k);
        let len = if len == 3 { 2 } else { len };
        for idx in 0..len {
            sigma[points[k + idx] as usize] = points[k + (idx + 1) % len];
        }
        k += len;
    }
    points.shuffle(rng);
    let mut tau: Vec<u32> = (0..degree as u32).collect();
    for pair in points[tau_fixed..].chunks_exact(2) {
        tau[pair[0] as usize] = pair[1];
        tau[pair[1] as usize] = pair[0];
    }
    Diagram { sigma, tau }
}

fn sample_diagrams() -> Vec<Diagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(POOL_SEED);
    let mut out = Vec::new();
    for degree in MAX_ENUMERATED_DEGREE + 1..=MAX_SAMPLED_DEGREE {
        for tau_fixed in (1..=MAX_SAMPLED_TAU_FIXED).filter(|f| (degree - f) % 2 == 0) {
            let mut found: Vec<Diagram> = Vec::new();
            for _ in 0..SAMPLES_PER_BUCKET {
                let d = random_piece(degree, tau_fixed, &mut rng);
                if d.product_cycles_divide_six() && d.is_transitive() && !found.contains(&d) {
                    found.push(d);
                    if found.len() == PER_BUCKET {
                        break;
                    }
                }
            }
            out.extend(found);
        }
    }
    out
}

/// Every transitive diagram up to the enumeration bound plus seeded samples above it.
fn catalogue() -> &'static [Diagram] {
    static ALL: OnceLock<Vec<Diagram>> = OnceLock::new();
    ALL.get_or_init(|| {
        let mut all = enumerate_diagrams();
        all.extend(sample_diagrams());
        all
    })
}

fn bucket_key(d: &Diagram) -> (usize, bool, usize) {
    (d.degree(), parity_odd(d), tau_fixed_count(d))
}

/// Small pieces that can be joined, bucketed by degree, parity of `στ` and
/// number of `τ`-fixed points.
pub(crate) fn piece_pool() -> &'static [Diagram] {
    static POOL: OnceLock<Vec<Diagram>> = OnceLock::new();
    POOL.get_or_init(|| {
        let joinable = catalogue()
            .iter()
            .filter(|d| !d.ports().is_empty() || !d.handles().is_empty())
            .cloned()
            .collect();
        thin(joinable, bucket_key)
    })
}

/// A piece with a lift site: a `σ`-fixed point sharing its `στ`-cycle with a
/// `τ`-fixed point. The points of that cycle are never used for joins.
#[derive(Debug, Clone)]
pub(crate) struct Starter {
    pub diagram: Diagram,
    pub protected: Vec<u32>,
}

pub(crate) fn starter_pool() -> &'static [Starter] {
    static POOL: OnceLock<Vec<Starter>> = OnceLock::new();
    POOL.get_or_init(|| {
        let starters = catalogue()
            .iter()
            .filter_map(|d| {
                let protected = d.lift_site()?;
                let free = d.ports().iter().any(|(p, _)| !protected.contains(p));
                free.then(|| Starter {
                    diagram: d.clone(),
                    protected,
                })
            })
            .collect();
        thin(starters, |s| bucket_key(&s.diagram))
    })
}

pub(crate) fn tau_fixed_count(d: &Diagram) -> usize {
    d.tau.iter().enumerate().filter(|&(i, &x)| i as u32 == x).count()
}

/// Tries one join of `piece` onto `current`, single or double at random.
fn try_join(current: &Diagram, protected: &[u32], piece: &Diagram, rng: &mut ChaCha8Rng) -> Option<Diagram> {
    if rng.gen_bool(0.5) {
        let mut own = current.ports();
        own.retain(|(p, _)| !protected.contains(p));
        let (p1, l1) = *own.choose(rng)?;
        let theirs: Vec<u32> = piece
            .ports()
            .into_iter()
            .filter(|&(_, l2)| divides_six((l1 + l2) as usize))
            .map(|(p, _)| p)
            .collect();
        let p2 = *theirs.choose(rng)?;
        Some(current.join_single(p1, piece, p2))
    } else {
        let mut own = current.handles();
        own.retain(|h| !protected.contains(&h.a) && !protected.contains(&h.b));
        let h1 = own.choose(rng)?;
        let theirs = piece.handles();
        let compatible: Vec<&Handle> = theirs.iter().filter(|h2| h1.joins_with(h2)).collect();
        let h2 = compatible.choose(rng)?;
        Some(current.join(h1, piece, h2))
    }
}

/// One randomized assembly attempt of exactly `n` points whose result keeps a
/// lift site (a `σ`-fixed point and a `τ`-fixed point in one `στ`-cycle) and at
/// least three `τ`-fixed points.
pub(crate) fn assemble_liftable(n: usize, rng: &mut ChaCha8Rng) -> Option<Diagram> {
    let starters: Vec<&Starter> = starter_pool().iter().filter(|s| s.diagram.degree() <= n).collect();
    let start = *starters.choose(rng)?;
    grow(start.diagram.clone(), &start.protected, n, 3, rng)
}

/// One randomized assembly attempt of exactly `n` points with no side conditions.
pub(crate) fn assemble_any(n: usize, rng: &mut ChaCha8Rng) -> Option<Diagram> {
    let starters: Vec<&Diagram> = piece_pool().iter().filter(|d| d.degree() <= n).collect();
    let start = (*starters.choose(rng)?).clone();
    grow(start, &[], n, 0, rng)
}

fn grow(
    mut current: Diagram,
    protected: &[u32],
    n: usize,
    final_tau_fixed: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Diagram> {
    let pool = piece_pool();
    while current.degree() < n {
        let remaining = n - current.degree();
        let mut joined = None;
        for _ in 0..64 {
            let piece = pool.choose(rng)?;
            if piece.degree() > remaining {
                continue;
            }
            let Some(next) = try_join(&current, protected, piece, rng) else {
                continue;
            };
            let done = next.degree() == n;
            let reserve = if done {
                final_tau_fixed
            } else {
                final_tau_fixed.max(1) + 1
            };
            if tau_fixed_count(&next) < reserve || (!done && next.ports().is_empty() && next.handles().is_empty()) {
                continue;
            }
            joined = Some(next);
            break;
        }
        current = joined?;
    }
    debug_assert!(current.product_cycles_divide_six() && current.is_transitive());
    Some(current)
}

/// Uniformly random sign vectors `(b, c)` such that `[σ, b]`, `[τ, c]` and
/// their product have the same orders as `σ`, `τ` and `στ`.
///
/// The conditions are linear over GF(2): a cycle of length `L` in an element
/// of order `m` needs an even sign sum exactly when `2L` does not divide `m`.
pub(crate) fn random_order_preserving_signs(
    sigma: &Permutation,
    tau: &Permutation,
    rng: &mut ChaCha8Rng,
) -> (Vec<bool>, Vec<bool>) {
    let n = sigma.degree();
    let product = sigma.then(tau);
    let constrained = |p: &Permutation| -> Vec<Vec<usize>> {
        let m = p.order() as usize;
        let mut cycles = p.cycles();
        cycles.extend(p.fixed_points().into_iter().map(|i| vec![i]));
        cycles.into_iter().filter(|c| !m.is_multiple_of(2 * c.len())).collect()
    };
    let mut rows: Vec<Vec<bool>> = Vec::new();
    for cycle in constrained(sigma) {
        let mut row = vec![false; 2 * n];
        for p in cycle {
            row[p - 1] = true;
        }
        rows.push(row);
    }
    for cycle in constrained(tau) {
        let mut row = vec![false; 2 * n];
        for p in cycle {
            row[n + p - 1] = true;
        }
        rows.push(row);
    }
    // the product carries c_k + b_m on position k = τ(m)
    let tau_inv = tau.inverse();
    for cycle in constrained(&product) {
        let mut row = vec![false; 2 * n];
        for k in cycle {
            row[n + k - 1] ^= true;
            row[tau_inv.apply(k) - 1] ^= true;
        }
        rows.push(row);
    }
    let solution = random_kernel_vector(rows, 2 * n, rng);
    (solution[..n].to_vec(), solution[n..].to_vec())
}

fn random_kernel_vector(mut rows: Vec<Vec<bool>>, width: usize, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        let Some(r) = (rank..rows.len()).find(|&r| rows[r][col]) else {
            continue;
        };
        rows.swap(rank, r);
        for other in 0..rows.len() {
            if other != rank && rows[other][col] {
                let pivot = rows[rank].clone();
                for (a, b) in rows[other].iter_mut().zip(pivot) {
                    *a ^= b;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let mut x: Vec<bool> = (0..width).map(|_| rng.gen()).collect();
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = rows[r]
            .iter()
            .zip(&x)
            .enumerate()
            .filter(|&(c, _)| c != col)
            .fold(false, |acc, (_, (&a, &v))| acc ^ (a & v));
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn check_shape(d: &Diagram, n: usize) {
        assert_eq!(d.degree(), n);
        let (s, t) = d.to_perms();
        assert_eq!(4 % s.order(), 0);
        assert_eq!(t.then(&t), Permutation::identity(n));
        assert_eq!(6 % s.then(&t).order(), 0);
        assert!(d.is_transitive());
    }

    #[test]
    fn pool_pieces_are_valid() {
        let pool = piece_pool();
        assert!(pool.len() > 100);
        for d in pool {
            check_shape(d, d.degree());
        }
        for s in starter_pool() {
            let (sigma, tau) = s.diagram.to_perms();
            assert!(crate::lifting::choose_lift_points(&sigma, &tau).is_some());
        }
    }

    #[test]
    fn enumeration_counts() {
        // involutions of {1..n}: 1, 2, 4, 10, 26, 76, 232
        let counts: Vec<usize> = (1..=7).map(|n| involutions(n).len()).collect();
        assert_eq!(counts, [1, 2, 4, 10, 26, 76, 232]);
        assert_eq!(sigma_shapes(8).len(), 9);
    }

    #[test]
    fn assemblies_have_exact_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [29usize, 33, 47] {
            let made: Vec<Diagram> = (0..200).filter_map(|_| assemble_any(n, &mut rng)).collect();
            assert!(!made.is_empty());
            made.iter().for_each(|d| check_shape(d, n));
            let liftable: Vec<Diagram> = (0..200).filter_map(|_| assemble_liftable(n, &mut rng)).collect();
            assert!(!liftable.is_empty());
            for d in &liftable {
                check_shape(d, n);
                let (s, t) = d.to_perms();
                assert!(crate::lifting::choose_lift_points(&s, &t).is_some());
                assert!(t.fixed_points().len() >= 3);
            }
        }
    }

    #[test]
    fn order_preserving_signs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [12usize, 25, 40] {
            for _ in 0..20 {
                let Some(d) = assemble_any(n, &mut rng) else { continue };
                let (sigma, tau) = d.to_perms();
                let (b, c) = random_order_preserving_signs(&sigma, &tau, &mut rng);
                let x =
                    crate::signed::SignedElement::new(sigma.clone(), crate::signed::SignBlock::from_bits(b)).unwrap();
                let y = crate::signed::SignedElement::new(tau.clone(), crate::signed::SignBlock::from_bits(c)).unwrap();
                assert_eq!(x.element_order(), sigma.order());
                assert_eq!(y.element_order(), tau.order());
                assert_eq!(x.then(&y).element_order(), sigma.then(&tau).order());
            }
        }
    }
}
