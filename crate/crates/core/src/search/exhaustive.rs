use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use super::classes::{classes_of_order, nth_permutation, signed_lifts_of_order};
use super::{
    candidate_signatures, find_first, Execution, PairSignature, SearchError, SearchOutcome, SearchStats, SearchStatus,
};
use crate::group_order::{factorial, is_full_hyperoctahedral};
use crate::perm::is_transitive;
use crate::signed::SignedElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExhaustiveConfig {
    /// Largest degree searched without `allow_long`.
    pub max_n: usize,
    /// Admits degrees up to 8.
    pub allow_long: bool,
    /// Fix `x` up to conjugacy; when false every element of order `p` is tried.
    pub use_class_reps: bool,
    /// Walk the candidate space in reverse order.
    pub reverse: bool,
    pub execution: Execution,
}

impl Default for ExhaustiveConfig {
    fn default() -> Self {
        ExhaustiveConfig {
            max_n: 6,
            allow_long: false,
            use_class_reps: true,
            reverse: false,
            execution: Execution::Parallel,
        }
    }
}

const LONG_BOUND: usize = 8;

fn check_bounds(n: usize, config: &ExhaustiveConfig) -> Result<(), SearchError> {
    if n < 2 {
        return Err(SearchError::DegreeTooSmall { n, min: 2 });
    }
    let bound = if config.allow_long {
        config.max_n.max(LONG_BOUND)
    } else {
        config.max_n
    };
    if n > bound {
        return Err(SearchError::AboveExhaustiveBound { n, bound });
    }
    Ok(())
}

fn elements_of_order(n: usize, order: u64) -> Vec<SignedElement> {
    let count: u64 = factorial(n).try_into().expect("small degree");
    (0..count)
        .flat_map(|k| signed_lifts_of_order(&nth_permutation(n, k), order))
        .collect()
}

/// Decides whether `B_n` has a generating pair with signature `sig`.
///
/// `x` runs over elements of order `p` (one per conjugacy class by default)
/// and `y` over all elements of order `q`; `|xy| = r`, the index-2 pre-filter
/// and transitivity of the projection are checked before the stabilizer chain.
pub fn exhaustive_pair_search(
    n: usize,
    sig: PairSignature,
    config: &ExhaustiveConfig,
) -> Result<SearchOutcome, SearchError> {
    check_bounds(n, config)?;
    if !sig.is_hyperbolic() {
        return Err(SearchError::InvalidSignature(sig));
    }
    let start = Instant::now();
    let xs: Vec<SignedElement> = if config.use_class_reps {
        classes_of_order(n, sig.p).iter().map(|t| t.representative()).collect()
    } else {
        elements_of_order(n, sig.p)
    };
    let perms: u64 = factorial(n).try_into().expect("small degree");
    let tasks = xs.len() as u64 * perms;
    let candidates = AtomicU64::new(0);
    let chain_builds = AtomicU64::new(0);
    let found = find_first(config.execution, tasks, |t| {
        let t = if config.reverse { tasks - 1 - t } else { t };
        let x = &xs[(t / perms) as usize];
        let perm = nth_permutation(n, t % perms);
        let mut ys = signed_lifts_of_order(&perm, sig.q);
        if config.reverse {
            ys.reverse();
        }
        for y in ys {
            candidates.fetch_add(1, Ordering::Relaxed);
            if x.then(&y).element_order() != sig.r {
                continue;
            }
            if !is_transitive(n, &[x.project(), y.project()]) {
                continue;
            }
            chain_builds.fetch_add(1, Ordering::Relaxed);
            let pair = [x.clone(), y];
            if is_full_hyperoctahedral(&pair, n) {
                let [x, y] = pair;
                return Some((x, y));
            }
        }
        None
    });
    let stats = SearchStats {
        candidates: candidates.into_inner(),
        chain_builds: chain_builds.into_inner(),
        elapsed: start.elapsed(),
    };
    let status = if found.is_some() {
        SearchStatus::Found
    } else {
        SearchStatus::ExhaustedNone
    };
    Ok(SearchOutcome {
        n,
        status,
        signature: found.as_ref().map(|_| sig),
        pair: found,
        stats,
        seed: None,
        witness: None,
    })
}

/// Per-signature outcomes in candidate order, ending at the first found one.
#[derive(Debug, Clone)]
pub struct MinimalPairReport {
    pub n: usize,
    pub entries: Vec<(PairSignature, SearchOutcome)>,
}

impl MinimalPairReport {
    pub fn minimal(&self) -> Option<&SearchOutcome> {
        self.entries.iter().map(|(_, o)| o).find(|o| o.is_found())
    }
}

/// Runs [`exhaustive_pair_search`] over the candidate signatures (or just
/// `filter`) in order and stops at the first signature that is realised.
pub fn exhaustive_minimal_pair(
    n: usize,
    filter: Option<PairSignature>,
    config: &ExhaustiveConfig,
) -> Result<MinimalPairReport, SearchError> {
    check_bounds(n, config)?;
    let signatures = match filter {
        Some(sig) => vec![sig],
        None => candidate_signatures(n.max(3)),
    };
    let mut entries = Vec::new();
    for sig in signatures {
        let outcome = exhaustive_pair_search(n, sig, config)?;
        let found = outcome.is_found();
        entries.push((sig, outcome));
        if found {
            break;
        }
    }
    Ok(MinimalPairReport { n, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::signature_of;

    #[test]
    fn bounds() {
        let c = ExhaustiveConfig::default();
        assert!(matches!(
            exhaustive_pair_search(7, PairSignature::new(2, 4, 6), &c),
            Err(SearchError::AboveExhaustiveBound { n: 7, bound: 6 })
        ));
        assert!(check_bounds(8, &ExhaustiveConfig { allow_long: true, ..c }).is_ok());
        assert!(check_bounds(9, &ExhaustiveConfig { allow_long: true, ..c }).is_err());
    }

    #[test]
    fn b4_minimal_pair() {
        let report = exhaustive_minimal_pair(4, None, &ExhaustiveConfig::default()).unwrap();
        let found = report.minimal().unwrap();
        assert_eq!(found.signature, Some(PairSignature::new(2, 4, 6)));
        let (x, y) = found.pair.as_ref().unwrap();
        assert_eq!(signature_of(x, y), PairSignature::new(2, 4, 6));
        assert_eq!(x.element_order(), 2);
        assert_eq!(report.entries.len(), 1);
    }

    #[test]
    fn b3_statuses_agree_with_and_without_reduction() {
        let base = ExhaustiveConfig {
            execution: Execution::Sequential,
            ..Default::default()
        };
        for sig in candidate_signatures(3) {
            let reduced = exhaustive_pair_search(3, sig, &base).unwrap();
            let full = exhaustive_pair_search(
                3,
                sig,
                &ExhaustiveConfig {
                    use_class_reps: false,
                    ..base
                },
            )
            .unwrap();
            assert_eq!(reduced.status, full.status, "{sig}");
        }
    }
}
