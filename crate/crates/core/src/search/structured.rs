use super::glue::assemble_liftable;
use super::randomized::candidate_rng;
use super::{find_first, Execution, SearchError};
use crate::lifting::{check_conditions, ConditionReport, WitnessBudget};
use crate::perm::Permutation;

/// Smallest degree handled by [`structured_sigma_tau`].
pub const STRUCTURED_MIN_DEGREE: usize = 41;

/// Witness budget per candidate; the table words are always tried first.
const CANDIDATE_WITNESS_BUDGET: WitnessBudget = WitnessBudget {
    max_syllables: 12,
    max_exponent: 3,
    max_words: 20_000,
};

#[derive(Debug, Clone)]
pub struct StructuredPair {
    pub sigma: Permutation,
    pub tau: Permutation,
    /// All seven conditions pass; `i`, `j` and the witness are set.
    pub report: ConditionReport,
    /// Index of the accepted candidate.
    pub candidate: u64,
}

/// `σ` of order 4 with a fixed point and `τ` an involution with at least
/// three fixed points, `στ` odd of order 6, `⟨σ, τ⟩` transitive and an
/// anchored prime cycle found, for `n >= 41`.
pub fn structured_sigma_tau(
    n: usize,
    seed: u64,
    budget: u64,
    execution: Execution,
) -> Result<StructuredPair, SearchError> {
    if n < STRUCTURED_MIN_DEGREE {
        return Err(SearchError::DegreeTooSmall {
            n,
            min: STRUCTURED_MIN_DEGREE,
        });
    }
    liftable_sigma_tau(n, seed, budget, execution)
}

/// The construction behind [`structured_sigma_tau`] without the degree floor.
///
/// Candidates are glued from small diagrams around a starter piece whose lift
/// site is never touched by a join; candidate `k` uses stream `k` of `seed`.
pub fn liftable_sigma_tau(
    n: usize,
    seed: u64,
    budget: u64,
    execution: Execution,
) -> Result<StructuredPair, SearchError> {
    find_first(execution, budget, |k| {
        let mut rng = candidate_rng(seed, k);
        let diagram = assemble_liftable(n, &mut rng)?;
        let (sigma, tau) = diagram.to_perms();
        if !sigma.then(&tau).parity().is_odd() {
            return None;
        }
        let report = check_conditions(&sigma, &tau, CANDIDATE_WITNESS_BUDGET);
        report.all_pass().then_some(StructuredPair {
            sigma,
            tau,
            report,
            candidate: k,
        })
    })
    .ok_or(SearchError::BudgetExhausted { n, budget })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::verify_jordan;

    #[test]
    fn below_floor_is_rejected() {
        assert!(matches!(
            structured_sigma_tau(40, 1, 10, Execution::Sequential),
            Err(SearchError::DegreeTooSmall { n: 40, .. })
        ));
    }

    #[test]
    fn n41_passes_all_conditions() {
        let pair = structured_sigma_tau(41, 1, 2_000, Execution::Parallel).unwrap();
        assert!(pair.report.all_pass());
        assert_eq!(pair.sigma.order(), 4);
        assert_eq!(pair.tau.order(), 2);
        assert_eq!(pair.sigma.then(&pair.tau).order(), 6);
        assert!(pair.tau.fixed_points().len() >= 3);
        let w = pair.report.witness.as_ref().unwrap();
        assert!(verify_jordan(&pair.sigma, &pair.tau, w));
        let again = structured_sigma_tau(41, 1, 2_000, Execution::Sequential).unwrap();
        assert_eq!((again.sigma, again.tau), (pair.sigma, pair.tau));
    }
}
