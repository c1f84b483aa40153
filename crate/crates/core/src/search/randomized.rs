use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::classes::random_element_of_order;
use super::glue::{assemble_any, random_order_preserving_signs};
use super::{find_first, Execution, PairSignature, SearchOutcome, SearchStats, SearchStatus};
use crate::group_order::{is_full_hyperoctahedral, is_full_symmetric, SymmetricClass};
use crate::perm::is_transitive;
use crate::signed::{SignBlock, SignedElement};

/// Above this degree a `(2,4,6)` target is sampled through glued projections.
pub const RANDOMIZED_DIRECT_LIMIT: usize = 8;
const SIGN_TRIES: usize = 8;

pub(crate) fn candidate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Samples pairs with the target orders and certifies the first hit with a
/// stabilizer chain. Candidate `k` draws from its own stream of `seed`, so the
/// result does not depend on the execution mode.
///
/// Up to [`RANDOMIZED_DIRECT_LIMIT`], and for any target other than
/// `(2,4,6)`, both elements come from random signed cycle types. Above it a
/// candidate is a glued `(σ, τ)` with `σ⁴ = τ² = (στ)⁶ = 1` generating `Σ_n`,
/// lifted with uniformly random order-preserving signs; the pair is listed
/// as `([τ, c], [σ, b])`.
pub fn randomized_pair_search(
    n: usize,
    target: PairSignature,
    budget: u64,
    seed: u64,
    execution: Execution,
) -> SearchOutcome {
    let start = Instant::now();
    let candidates = AtomicU64::new(0);
    let chain_builds = AtomicU64::new(0);
    let glued = target == PairSignature::new(2, 4, 6) && n > RANDOMIZED_DIRECT_LIMIT;
    let found = find_first(execution, budget, |k| {
        let mut rng = candidate_rng(seed, k);
        if glued {
            glued_candidate(n, &mut rng, &candidates, &chain_builds)
        } else {
            direct_candidate(n, target, &mut rng, &candidates, &chain_builds)
        }
    });
    SearchOutcome {
        n,
        status: if found.is_some() {
            SearchStatus::Found
        } else {
            SearchStatus::BudgetExhausted
        },
        signature: found.as_ref().map(|_| target),
        pair: found,
        stats: SearchStats {
            candidates: candidates.into_inner(),
            chain_builds: chain_builds.into_inner(),
            elapsed: start.elapsed(),
        },
        seed: Some(seed),
        witness: None,
    }
}

fn direct_candidate(
    n: usize,
    target: PairSignature,
    rng: &mut ChaCha8Rng,
    candidates: &AtomicU64,
    chain_builds: &AtomicU64,
) -> Option<(SignedElement, SignedElement)> {
    let x = random_element_of_order(n, target.p, rng)?;
    let y = random_element_of_order(n, target.q, rng)?;
    candidates.fetch_add(1, Ordering::Relaxed);
    if x.then(&y).element_order() != target.r || !is_transitive(n, &[x.project(), y.project()]) {
        return None;
    }
    chain_builds.fetch_add(1, Ordering::Relaxed);
    is_full_hyperoctahedral(&[x.clone(), y.clone()], n).then_some((x, y))
}

fn glued_candidate(
    n: usize,
    rng: &mut ChaCha8Rng,
    candidates: &AtomicU64,
    chain_builds: &AtomicU64,
) -> Option<(SignedElement, SignedElement)> {
    let diagram = assemble_any(n, rng)?;
    let (sigma, tau) = diagram.to_perms();
    candidates.fetch_add(1, Ordering::Relaxed);
    if !(sigma.parity().is_odd() || tau.parity().is_odd()) {
        return None;
    }
    if is_full_symmetric(n, &[sigma.clone(), tau.clone()]) != SymmetricClass::FullSymmetric {
        return None;
    }
    for _ in 0..SIGN_TRIES {
        let (b, c) = random_order_preserving_signs(&sigma, &tau, rng);
        let x = SignedElement::new(tau.clone(), SignBlock::from_bits(c)).expect("same degree");
        let y = SignedElement::new(sigma.clone(), SignBlock::from_bits(b)).expect("same degree");
        debug_assert_eq!(
            (x.element_order(), y.element_order(), x.then(&y).element_order()),
            (2, 4, 6)
        );
        chain_builds.fetch_add(1, Ordering::Relaxed);
        let pair = [x, y];
        if is_full_hyperoctahedral(&pair, n) {
            let [x, y] = pair;
            return Some((x, y));
        }
    }
    None
}
