//! Exact Riemann–Hurwitz arithmetic and the strong symmetric genus of `B_n`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::group_order::{factorial, hyperoctahedral_order};
use crate::lifting::JordanWitness;
use crate::search::{minimal_signature, signature_of, PairSignature, SearchOutcome};
use crate::signed::SignedElement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenusError {
    #[error("signature {0} is not hyperbolic")]
    NotHyperbolic(PairSignature),
    #[error("Riemann–Hurwitz bound for order {order} and signature {signature} is not an integer")]
    NonInteger { order: BigUint, signature: PairSignature },
    #[error("degree {0} is below 3")]
    DegreeTooSmall(usize),
    #[error("outcome is not a certified pair: {0}")]
    Uncertified(String),
    #[error("bound {bound} for the minimal signature differs from the genus {expected} of B_{n}")]
    MinimalMismatch {
        n: usize,
        bound: BigUint,
        expected: BigUint,
    },
}

/// A genus value, an arbitrary-precision non-negative integer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenusValue(pub BigUint);

impl GenusValue {
    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl fmt::Display for GenusValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for GenusValue {
    fn from(v: u64) -> Self {
        GenusValue(BigUint::from(v))
    }
}

/// `1 + |G|/2 · (1 - 1/p - 1/q - 1/r)`, which must be an integer.
pub fn rh_upper_bound(order: &BigUint, sig: PairSignature) -> Result<GenusValue, GenusError> {
    if !sig.is_hyperbolic() {
        return Err(GenusError::NotHyperbolic(sig));
    }
    let s = sig.reciprocal_sum();
    let s = BigRational::new(BigInt::from(*s.numer()), BigInt::from(*s.denom()));
    let g = BigRational::one()
        + BigRational::from_integer(BigInt::from(order.clone())) / BigInt::from(2) * (BigRational::one() - s);
    if !g.is_integer() {
        return Err(GenusError::NonInteger {
            order: order.clone(),
            signature: sig,
        });
    }
    let value = g.to_integer().to_biguint().expect("the bound is at least one");
    Ok(GenusValue(value))
}

/// Strong symmetric genus of `B_n`: `n!·2^(n-3)/3 + 1`, except for the
/// degrees 5, 6 and 8.
pub fn genus_bn(n: usize) -> Result<GenusValue, GenusError> {
    match n {
        0..=2 => Err(GenusError::DegreeTooSmall(n)),
        5 => Ok(289u64.into()),
        6 => Ok(3841u64.into()),
        8 => Ok(645_121u64.into()),
        _ => Ok(GenusValue((factorial(n) << (n - 3)) / 3u32 + 1u32)),
    }
}

/// `|G| > 12(g - 1)`.
pub fn singerman_applicable(order: &BigUint, genus: &GenusValue) -> bool {
    if genus.0.is_zero() {
        return true;
    }
    *order > BigUint::from(12u32) * (&genus.0 - 1u32)
}

/// How a certificate established generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerificationMode {
    Chain,
    JordanAndChain,
    Jordan,
}

impl VerificationMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerificationMode::Chain => "chain",
            VerificationMode::JordanAndChain => "jordan+chain",
            VerificationMode::Jordan => "jordan",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "chain" => Some(VerificationMode::Chain),
            "jordan+chain" => Some(VerificationMode::JordanAndChain),
            "jordan" => Some(VerificationMode::Jordan),
            _ => None,
        }
    }

    pub fn uses_chain(&self) -> bool {
        !matches!(self, VerificationMode::Jordan)
    }
}

/// A certified generating pair of `B_n` and the genus bound it gives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCertificate {
    pub n: usize,
    pub x: SignedElement,
    pub y: SignedElement,
    pub signature: PairSignature,
    pub order: BigUint,
    pub genus: GenusValue,
    pub singerman: bool,
    pub witness: Option<JordanWitness>,
    pub seed: u64,
    pub verification: VerificationMode,
}

/// Bundles a found outcome into a certificate. When the signature is the
/// minimal one for `n`, the bound must equal [`genus_bn`].
pub fn genus_certificate(n: usize, outcome: &SearchOutcome) -> Result<PairCertificate, GenusError> {
    if !outcome.is_found() || outcome.n != n {
        return Err(GenusError::Uncertified(format!(
            "status {} for n = {}",
            outcome.status, outcome.n
        )));
    }
    let (x, y) = outcome
        .pair
        .clone()
        .ok_or_else(|| GenusError::Uncertified("missing pair".into()))?;
    let signature = signature_of(&x, &y);
    if outcome.signature != Some(signature) {
        return Err(GenusError::Uncertified(format!(
            "recorded signature {:?} differs from {signature}",
            outcome.signature
        )));
    }
    let order = hyperoctahedral_order(n);
    let genus = rh_upper_bound(&order, signature)?;
    if n >= 3 && signature == minimal_signature(n) {
        let expected = genus_bn(n)?;
        if expected != genus {
            return Err(GenusError::MinimalMismatch {
                n,
                bound: genus.0,
                expected: expected.0,
            });
        }
    }
    let singerman = singerman_applicable(&order, &genus);
    let verification = if outcome.witness.is_some() {
        VerificationMode::JordanAndChain
    } else {
        VerificationMode::Chain
    };
    Ok(PairCertificate {
        n,
        x,
        y,
        signature,
        order,
        genus,
        singerman,
        witness: outcome.witness.clone(),
        seed: outcome.seed.unwrap_or(0),
        verification,
    })
}
