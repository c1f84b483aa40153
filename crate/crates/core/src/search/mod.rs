//! Searches for generating pairs of `B_n`: exhaustive minimal-pair search for
//! small `n`, randomized search, and structured construction for large `n`.

pub mod classes;
mod exhaustive;
pub(crate) mod glue;
mod randomized;
mod structured;

use std::fmt;
use std::time::Duration;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

use crate::lifting::JordanWitness;
use crate::signed::SignedElement;

pub use exhaustive::{exhaustive_minimal_pair, exhaustive_pair_search, ExhaustiveConfig, MinimalPairReport};
pub use randomized::{randomized_pair_search, RANDOMIZED_DIRECT_LIMIT};
pub use structured::{liftable_sigma_tau, structured_sigma_tau, StructuredPair, STRUCTURED_MIN_DEGREE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("degree {n} exceeds the exhaustive bound {bound}; pass --long to allow n up to 8")]
    AboveExhaustiveBound { n: usize, bound: usize },
    #[error("degree {n} is below the supported minimum {min}")]
    DegreeTooSmall { n: usize, min: usize },
    #[error("signature {0} is not a valid hyperbolic signature")]
    InvalidSignature(PairSignature),
    #[error("search budget of {budget} candidates exhausted for n = {n}")]
    BudgetExhausted { n: usize, budget: u64 },
}

/// Orders `(p, q, r)` of `x`, `y` and `xy`, sorted ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairSignature {
    pub p: u64,
    pub q: u64,
    pub r: u64,
}

impl PairSignature {
    /// Sorts the three orders.
    pub fn new(a: u64, b: u64, c: u64) -> Self {
        let mut v = [a, b, c];
        v.sort_unstable();
        PairSignature {
            p: v[0],
            q: v[1],
            r: v[2],
        }
    }

    /// `1/p + 1/q + 1/r` as an exact rational.
    pub fn reciprocal_sum(&self) -> Ratio<u64> {
        let l = self.p.lcm(&self.q).lcm(&self.r);
        Ratio::new(l / self.p + l / self.q + l / self.r, l)
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.p > 0 && self.reciprocal_sum() < Ratio::from_integer(1)
    }

    pub fn all_even(&self) -> bool {
        self.p.is_multiple_of(2) && self.q.is_multiple_of(2) && self.r.is_multiple_of(2)
    }
}

impl fmt::Display for PairSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.r)
    }
}

/// `{|x|, |y|, |xy|}` sorted ascending.
pub fn signature_of(x: &SignedElement, y: &SignedElement) -> PairSignature {
    PairSignature::new(x.element_order(), y.element_order(), x.then(y).element_order())
}

/// Strictly larger `1/p + 1/q + 1/r`; ties are not better.
pub fn better_signature(a: &PairSignature, b: &PairSignature) -> bool {
    a.reciprocal_sum() > b.reciprocal_sum()
}

/// All-even hyperbolic signatures whose Riemann–Hurwitz bound on `|B_n|`
/// stays within reach of Singerman's lemma, ordered by descending
/// `1/p + 1/q + 1/r`, ties by ascending `r`.
///
/// The bound `1 + |G|/2 · (1 - s)` satisfies `|G| >= 12(g - 1)` exactly when
/// `s >= 5/6`, independently of `|G|`. The equality case is kept because it
/// holds the minimal signatures of `B_6`.
pub fn candidate_signatures(n: usize) -> Vec<PairSignature> {
    debug_assert!(n >= 3);
    let floor = Ratio::new(5u64, 6);
    let mut out = Vec::new();
    for p in (2..=12).step_by(2) {
        for q in (p..=12).step_by(2) {
            for r in (q..=12).step_by(2) {
                let sig = PairSignature { p, q, r };
                if sig.is_hyperbolic() && sig.reciprocal_sum() >= floor {
                    out.push(sig);
                }
            }
        }
    }
    out.sort_by(|a, b| b.reciprocal_sum().cmp(&a.reciprocal_sum()).then(a.r.cmp(&b.r)));
    out
}

/// The signature realising the strong symmetric genus of `B_n`.
pub fn minimal_signature(n: usize) -> PairSignature {
    match n {
        5 => PairSignature::new(2, 4, 10),
        6 => PairSignature::new(2, 6, 6),
        8 => PairSignature::new(2, 4, 8),
        _ => PairSignature::new(2, 4, 6),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    ExhaustedNone,
    BudgetExhausted,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::Found => "found",
            SearchStatus::ExhaustedNone => "exhausted_none",
            SearchStatus::BudgetExhausted => "budget_exhausted",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Pairs whose three orders were compared against the target.
    pub candidates: u64,
    /// Pairs that reached the stabilizer chain.
    pub chain_builds: u64,
    pub elapsed: Duration,
}

/// Result of a search. A `Found` outcome always carries a pair whose
/// generation of `B_n` was certified by a stabilizer chain.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub n: usize,
    pub status: SearchStatus,
    pub pair: Option<(SignedElement, SignedElement)>,
    pub signature: Option<PairSignature>,
    pub stats: SearchStats,
    pub seed: Option<u64>,
    pub witness: Option<JordanWitness>,
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        self.status == SearchStatus::Found
    }
}

/// How data-parallel loops are run. Without the `parallel` feature every
/// mode runs sequentially.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

/// The first index in `0..count` (in index order) for which `f` yields a value.
pub(crate) fn find_first<T, F>(execution: Execution, count: u64, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().find_map_first(f)
        }
        _ => (0..count).find_map(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_sorting() {
        assert_eq!(PairSignature::new(4, 2, 6), PairSignature { p: 2, q: 4, r: 6 });
        assert_eq!(PairSignature::new(1, 1, 1).to_string(), "(1,1,1)");
        assert!(!PairSignature::new(1, 1, 1).is_hyperbolic());
    }

    #[test]
    fn signature_comparisons() {
        let s246 = PairSignature::new(2, 4, 6);
        let s248 = PairSignature::new(2, 4, 8);
        let s266 = PairSignature::new(2, 6, 6);
        let s2410 = PairSignature::new(2, 4, 10);
        assert!(better_signature(&s246, &s248));
        assert!(better_signature(&s248, &s266));
        assert!(better_signature(&s2410, &s266));
        assert!(!better_signature(&s246, &s246));
        assert_eq!(s246.reciprocal_sum(), Ratio::new(11, 12));
        assert_eq!(s266.reciprocal_sum(), Ratio::new(5, 6));
    }

    #[test]
    fn candidates() {
        let c = candidate_signatures(5);
        let shown: Vec<String> = c.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["(2,4,6)", "(2,4,8)", "(2,4,10)", "(2,6,6)", "(2,4,12)"]);
        assert!(c.iter().all(|s| s.all_even() && s.is_hyperbolic()));
        for w in c.windows(2) {
            assert!(!better_signature(&w[1], &w[0]));
        }
    }

    #[test]
    fn first_found_is_in_index_order() {
        let f = |k: u64| (k % 7 == 3 && k > 10).then_some(k);
        assert_eq!(find_first(Execution::Parallel, 1000, f), Some(17));
        assert_eq!(find_first(Execution::Sequential, 1000, f), Some(17));
        assert_eq!(find_first(Execution::Sequential, 5, f), None);
    }
}
