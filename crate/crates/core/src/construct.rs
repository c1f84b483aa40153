//! End-to-end construction of certified generating pairs.

use thiserror::Error;

use crate::genus::{genus_certificate, GenusError, PairCertificate, VerificationMode};
use crate::group_order::is_full_hyperoctahedral;
use crate::lifting::{lift_pair, LiftError};
use crate::search::{
    exhaustive_minimal_pair, liftable_sigma_tau, randomized_pair_search, Execution, ExhaustiveConfig, PairSignature,
    SearchError, SearchOutcome, SearchStats, SearchStatus, STRUCTURED_MIN_DEGREE,
};

/// Degrees at or below which every certificate is chain-verified.
pub const ALWAYS_CHAIN_LIMIT: usize = 60;
/// Smallest degree at which the lifted construction is tried as a fallback.
const LIFT_FALLBACK_MIN_DEGREE: usize = 9;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("degree {0} is below 3")]
    DegreeTooSmall(usize),
    #[error("B_{0} has no (2,4,6) generating pair")]
    Excluded(usize),
    #[error("search budget exhausted for n = {n}")]
    BudgetExhausted { n: usize },
    #[error("the constructed pair for n = {n} failed chain verification")]
    NotCertified { n: usize },
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Genus(#[from] GenusError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructOptions {
    /// Chain-verify above [`ALWAYS_CHAIN_LIMIT`] as well.
    pub chain_verify: bool,
    /// Candidates per randomized or structured search.
    pub budget: u64,
    pub execution: Execution,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            chain_verify: true,
            budget: 20_000,
            execution: Execution::Parallel,
        }
    }
}

/// A certified `(2,4,6)` pair for `B_n`, `n >= 3`, `n ∉ {5, 6, 8}`.
///
/// Below 41 the randomized search is used, falling back to the lifted
/// construction from 9 on; from 41 on `σ, τ` come from the structured
/// search, are lifted at the smallest valid `(i, j)` and carry a Jordan
/// witness. The involution is listed first.
pub fn construct_246_pair(n: usize, seed: u64, opts: &ConstructOptions) -> Result<PairCertificate, ConstructError> {
    match n {
        0..=2 => return Err(ConstructError::DegreeTooSmall(n)),
        5 | 6 | 8 => return Err(ConstructError::Excluded(n)),
        _ => {}
    }
    if n < STRUCTURED_MIN_DEGREE {
        let outcome = randomized_pair_search(n, PairSignature::new(2, 4, 6), opts.budget, seed, opts.execution);
        if outcome.is_found() {
            return Ok(genus_certificate(n, &outcome)?);
        }
        if n < LIFT_FALLBACK_MIN_DEGREE {
            return Err(ConstructError::BudgetExhausted { n });
        }
    }
    lifted_pair(n, seed, opts)
}

fn lifted_pair(n: usize, seed: u64, opts: &ConstructOptions) -> Result<PairCertificate, ConstructError> {
    let structured = match liftable_sigma_tau(n, seed, opts.budget, opts.execution) {
        Ok(s) => s,
        Err(SearchError::BudgetExhausted { .. }) => return Err(ConstructError::BudgetExhausted { n }),
        Err(e) => return Err(e.into()),
    };
    let report = &structured.report;
    let (i, j) = (report.i.expect("conditions pass"), report.j.expect("conditions pass"));
    let (sigma_lift, tau_lift) = lift_pair(&structured.sigma, &structured.tau, i, j)?;
    let pair = [tau_lift, sigma_lift];
    let chain = opts.chain_verify || n <= ALWAYS_CHAIN_LIMIT;
    if chain && !is_full_hyperoctahedral(&pair, n) {
        return Err(ConstructError::NotCertified { n });
    }
    let [x, y] = pair;
    let outcome = SearchOutcome {
        n,
        status: SearchStatus::Found,
        pair: Some((x, y)),
        signature: Some(PairSignature::new(2, 4, 6)),
        stats: SearchStats::default(),
        seed: Some(seed),
        witness: report.witness.clone(),
    };
    let mut cert = genus_certificate(n, &outcome)?;
    cert.verification = if chain {
        VerificationMode::JordanAndChain
    } else {
        VerificationMode::Jordan
    };
    Ok(cert)
}

/// A certified pair with the minimal signature of `B_n`: exhaustive search
/// for `n ∈ {5, 6}`, randomized `(2,4,8)` search for `n = 8`, and
/// [`construct_246_pair`] otherwise.
pub fn construct_minimal_pair(n: usize, seed: u64, opts: &ConstructOptions) -> Result<PairCertificate, ConstructError> {
    match n {
        0..=2 => Err(ConstructError::DegreeTooSmall(n)),
        5 | 6 => {
            let config = ExhaustiveConfig {
                execution: opts.execution,
                ..Default::default()
            };
            let report = exhaustive_minimal_pair(n, None, &config)?;
            let mut outcome = report.minimal().cloned().ok_or(ConstructError::BudgetExhausted { n })?;
            outcome.seed = Some(seed);
            Ok(genus_certificate(n, &outcome)?)
        }
        8 => {
            let outcome = randomized_pair_search(8, PairSignature::new(2, 4, 8), opts.budget, seed, opts.execution);
            if !outcome.is_found() {
                return Err(ConstructError::BudgetExhausted { n });
            }
            Ok(genus_certificate(n, &outcome)?)
        }
        _ => construct_246_pair(n, seed, opts),
    }
}
