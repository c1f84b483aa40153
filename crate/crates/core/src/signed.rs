//! Signed permutations: elements `[σ, b]` of `B_n = Z_2 ≀ Σ_n`.
//!
//! Multiplication is `[σ, b]·[τ, c] = [σ·τ, τ⁻¹(b) + c]` where `σ·τ` is
//! left-to-right composition and a permutation acts on sign blocks by
//! `(π(b))_k = b_{π(k)}`. With that action the law is associative and
//! [`SignedElement::embed`] is a homomorphism into `Σ_{2n}`.

use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use thiserror::Error;

use crate::perm::{parse_cycles, Parity, PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignedError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("sign block has length {signs}, permutation has degree {perm}")]
    LengthMismatch { perm: usize, signs: usize },
    #[error("malformed signed element: {0}")]
    Malformed(String),
}

/// A length-`n` tuple over `Z_2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignBlock {
    bits: Vec<bool>,
}

impl SignBlock {
    pub fn zeros(n: usize) -> Self {
        SignBlock { bits: vec![false; n] }
    }

    pub fn ones(n: usize) -> Self {
        SignBlock { bits: vec![true; n] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        SignBlock { bits }
    }

    /// The block with a single 1 in (1-based) position `i`.
    pub fn singleton(n: usize, i: usize) -> Self {
        let mut bits = vec![false; n];
        bits[i - 1] = true;
        SignBlock { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bit at 1-based position `i`.
    pub fn get(&self, i: usize) -> bool {
        self.bits[i - 1]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Even or odd according to the number of ones.
    pub fn parity(&self) -> Parity {
        Parity::from_count(self.weight())
    }

    pub fn is_zero(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn xor(&self, other: &SignBlock) -> SignBlock {
        assert_eq!(self.len(), other.len(), "sign block length mismatch");
        SignBlock {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        }
    }

    /// `π(b)` with `(π(b))_k = b_{π(k)}`.
    pub fn act(&self, p: &Permutation) -> SignBlock {
        assert_eq!(self.len(), p.degree(), "sign block length mismatch");
        SignBlock {
            bits: p.raw().iter().map(|&x| self.bits[x as usize]).collect(),
        }
    }
}

impl fmt::Display for SignBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignBlock({self})")
    }
}

/// An element `[σ, b]` of the hyperoctahedral group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedElement {
    perm: Permutation,
    signs: SignBlock,
}

impl SignedElement {
    pub fn new(perm: Permutation, signs: SignBlock) -> Result<Self, SignedError> {
        if perm.degree() != signs.len() {
            return Err(SignedError::LengthMismatch {
                perm: perm.degree(),
                signs: signs.len(),
            });
        }
        Ok(SignedElement { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        SignedElement {
            perm: Permutation::identity(n),
            signs: SignBlock::zeros(n),
        }
    }

    /// The central element `[1, (1,…,1)]`.
    pub fn central_flip(n: usize) -> Self {
        SignedElement {
            perm: Permutation::identity(n),
            signs: SignBlock::ones(n),
        }
    }

    pub fn degree(&self) -> usize {
        self.perm.degree()
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn signs(&self) -> &SignBlock {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity() && self.signs.is_zero()
    }

    pub fn multiply(&self, other: &SignedElement) -> Result<SignedElement, SignedError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            }
            .into());
        }
        Ok(self.then(other))
    }

    /// [`multiply`](Self::multiply) without the degree check; panics on mismatch.
    pub fn then(&self, other: &SignedElement) -> SignedElement {
        let perm = self.perm.then(&other.perm);
        // τ⁻¹(b)_k = b_{τ⁻¹(k)}, i.e. bit m of b lands on position τ(m)
        let mut bits = other.signs.bits.clone();
        for (m, &t) in other.perm.raw().iter().enumerate() {
            bits[t as usize] ^= self.signs.bits[m];
        }
        SignedElement {
            perm,
            signs: SignBlock { bits },
        }
    }

    pub fn inverse(&self) -> SignedElement {
        // [σ,b]⁻¹ = [σ⁻¹, σ(b)]
        SignedElement {
            perm: self.perm.inverse(),
            signs: self.signs.act(&self.perm),
        }
    }

    /// `self^k` by repeated squaring.
    pub fn power(&self, mut k: u64) -> SignedElement {
        let mut base = self.clone();
        let mut acc = SignedElement::identity(self.degree());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        acc
    }

    /// Order computed per cycle of σ: a cycle of length `L` carrying an odd
    /// sign sum contributes `2L`, otherwise `L`.
    pub fn element_order(&self) -> u64 {
        let n = self.degree();
        let raw = self.perm.raw();
        let mut seen = vec![false; n];
        let mut order = 1u64;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut odd = false;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                odd ^= self.signs.bits[x];
                x = raw[x] as usize;
            }
            let contribution = if odd { 2 * len } else { len };
            order = order.lcm(&contribution);
        }
        order
    }

    /// Faithful action on `{1..2n}`: point `i` is `+i` and point `n+i` is `-i`.
    pub fn embed(&self) -> Permutation {
        let n = self.degree();
        let raw = self.perm.raw();
        let mut images = vec![0u32; 2 * n];
        for i in 0..n {
            let target = raw[i] as usize;
            let flip = self.signs.bits[target];
            let (plus, minus) = if flip {
                (target + n, target)
            } else {
                (target, target + n)
            };
            images[i] = plus as u32;
            images[i + n] = minus as u32;
        }
        Permutation::from_raw(images)
    }

    /// `π([σ, b]) = σ`.
    pub fn project(&self) -> Permutation {
        self.perm.clone()
    }

    /// `i(b) = [1, b]`.
    pub fn inject(signs: SignBlock) -> SignedElement {
        SignedElement {
            perm: Permutation::identity(signs.len()),
            signs,
        }
    }

    /// The zero-sign section `s(σ) = [σ, 0…0]`.
    pub fn section(perm: Permutation) -> SignedElement {
        let n = perm.degree();
        SignedElement {
            perm,
            signs: SignBlock::zeros(n),
        }
    }

    /// Membership in `{[σ, b] : b even}`.
    pub fn in_even_sign_subgroup(&self) -> bool {
        self.signs.parity() == Parity::Even
    }

    /// Membership in `{[σ, b] : b even iff σ ∈ A_n}`.
    pub fn in_parity_matched_subgroup(&self) -> bool {
        self.signs.parity() == self.perm.parity()
    }

    /// Parses `"[(1 2)(3 4) | 0110]"`; the degree is the bitstring length.
    pub fn parse(text: &str) -> Result<SignedElement, SignedError> {
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| SignedError::Malformed(format!("expected [cycles | bits], got {t:?}")))?;
        let (cycles, bits) = inner
            .split_once('|')
            .ok_or_else(|| SignedError::Malformed(format!("missing '|' in {t:?}")))?;
        let bits = bits.trim();
        if bits.is_empty() {
            return Err(SignedError::Malformed("empty sign block".into()));
        }
        let bits = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(SignedError::Malformed(format!("bad sign digit {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let perm = parse_cycles(cycles, bits.len())?;
        SignedElement::new(perm, SignBlock::from_bits(bits))
    }
}

impl Mul for &SignedElement {
    type Output = SignedElement;
    fn mul(self, rhs: &SignedElement) -> SignedElement {
        self.then(rhs)
    }
}

impl fmt::Display for SignedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} | {}]", self.perm, self.signs)
    }
}

impl fmt::Debug for SignedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
