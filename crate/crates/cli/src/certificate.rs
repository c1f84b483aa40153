//! Line-oriented `key = value` certificate files.

use std::fmt::Write as _;

use num_bigint::BigUint;
use thiserror::Error;

use hyperoct::genus::{genus_bn, rh_upper_bound, PairCertificate, VerificationMode};
use hyperoct::group_order::{hyperoctahedral_order, is_full_hyperoctahedral, is_full_symmetric, SymmetricClass};
use hyperoct::lifting::{lift_pair, verify_jordan, GroupWord, JordanWitness};
use hyperoct::perm::{format_cycles, is_transitive, parse_cycles};
use hyperoct::search::{minimal_signature, signature_of, PairSignature};
use hyperoct::signed::SignedElement;

pub const SCHEMA_VERSION: u32 = 1;

const KEYS: [&str; 10] = [
    "schema_version",
    "n",
    "signature",
    "generator_x",
    "generator_y",
    "order",
    "genus",
    "jordan_witness",
    "seed",
    "verification_mode",
];

/// Everything a certificate file states, as read back from disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateFile {
    pub schema_version: u32,
    pub n: usize,
    pub signature: PairSignature,
    pub x: SignedElement,
    pub y: SignedElement,
    pub order: BigUint,
    pub genus: BigUint,
    pub witness: Option<JordanWitness>,
    pub seed: u64,
    pub verification: VerificationMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: expected `key = value`")]
    Malformed { line: usize },
    #[error("line {line}: unknown field `{field}`")]
    UnknownField { line: usize, field: String },
    #[error("line {line}: duplicate field `{field}`")]
    Duplicate { line: usize, field: String },
    #[error("line {line}, field `{field}`: {reason}")]
    BadValue {
        line: usize,
        field: &'static str,
        reason: String,
    },
    #[error("missing field `{0}`")]
    Missing(&'static str),
}

/// The first check a certificate failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{check} check failed: {detail}")]
pub struct VerifyError {
    pub check: &'static str,
    pub detail: String,
}

fn fail(check: &'static str, detail: impl Into<String>) -> VerifyError {
    VerifyError {
        check,
        detail: detail.into(),
    }
}

impl From<&PairCertificate> for CertificateFile {
    fn from(c: &PairCertificate) -> Self {
        CertificateFile {
            schema_version: SCHEMA_VERSION,
            n: c.n,
            signature: c.signature,
            x: c.x.clone(),
            y: c.y.clone(),
            order: c.order.clone(),
            genus: c.genus.0.clone(),
            witness: c.witness.clone(),
            seed: c.seed,
            verification: c.verification,
        }
    }
}

fn format_witness(w: &JordanWitness) -> String {
    let cycle: Vec<String> = w.cycle.iter().map(ToString::to_string).collect();
    format!(
        "word={}; power={}; prime={}; cycle=({}); anchors={},{}",
        w.word,
        w.power,
        w.prime,
        cycle.join(" "),
        w.anchor_a,
        w.anchor_b
    )
}

impl CertificateFile {
    /// Serializes to the canonical text form, one field per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: &dyn std::fmt::Display| writeln!(out, "{k} = {v}").expect("string write");
        put("schema_version", &self.schema_version);
        put("n", &self.n);
        put("signature", &self.signature);
        put("generator_x", &self.x);
        put("generator_y", &self.y);
        put("order", &self.order);
        put("genus", &self.genus);
        if let Some(w) = &self.witness {
            put("jordan_witness", &format_witness(w));
        }
        put("seed", &self.seed);
        put("verification_mode", &self.verification.as_str());
        out
    }

    pub fn parse(text: &str) -> Result<CertificateFile, ParseError> {
        let mut values: [Option<(usize, &str)>; KEYS.len()] = Default::default();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let (key, value) = raw.split_once('=').ok_or(ParseError::Malformed { line })?;
            let key = key.trim();
            let slot = KEYS
                .iter()
                .position(|&known| known == key)
                .ok_or_else(|| ParseError::UnknownField {
                    line,
                    field: key.to_string(),
                })?;
            if values[slot].is_some() {
                return Err(ParseError::Duplicate {
                    line,
                    field: key.to_string(),
                });
            }
            values[slot] = Some((line, value.trim()));
        }
        let get = |field: &'static str| -> Result<(usize, &str), ParseError> {
            let slot = KEYS.iter().position(|&k| k == field).expect("known field");
            values[slot].ok_or(ParseError::Missing(field))
        };
        let number = |field: &'static str| -> Result<u64, ParseError> {
            let (line, v) = get(field)?;
            v.parse().map_err(|e: std::num::ParseIntError| ParseError::BadValue {
                line,
                field,
                reason: e.to_string(),
            })
        };
        let element = |field: &'static str| -> Result<SignedElement, ParseError> {
            let (line, v) = get(field)?;
            SignedElement::parse(v).map_err(|e| ParseError::BadValue {
                line,
                field,
                reason: e.to_string(),
            })
        };
        let big = |field: &'static str| -> Result<BigUint, ParseError> {
            let (line, v) = get(field)?;
            v.parse::<BigUint>().map_err(|e| ParseError::BadValue {
                line,
                field,
                reason: e.to_string(),
            })
        };

        let schema_version = number("schema_version")? as u32;
        let n = number("n")? as usize;
        let signature = {
            let (line, v) = get("signature")?;
            parse_signature(v).ok_or_else(|| ParseError::BadValue {
                line,
                field: "signature",
                reason: format!("expected (p,q,r), got {v:?}"),
            })?
        };
        let x = element("generator_x")?;
        let y = element("generator_y")?;
        let order = big("order")?;
        let genus = big("genus")?;
        let witness = match get("jordan_witness") {
            Ok((line, v)) => Some(parse_witness(v, n).map_err(|reason| ParseError::BadValue {
                line,
                field: "jordan_witness",
                reason,
            })?),
            Err(_) => None,
        };
        let seed = number("seed")?;
        let verification = {
            let (line, v) = get("verification_mode")?;
            VerificationMode::parse(v).ok_or_else(|| ParseError::BadValue {
                line,
                field: "verification_mode",
                reason: format!("unknown mode {v:?}"),
            })?
        };
        Ok(CertificateFile {
            schema_version,
            n,
            signature,
            x,
            y,
            order,
            genus,
            witness,
            seed,
            verification,
        })
    }

    /// Re-derives every claim in the file and names the first one that fails.
    pub fn verify(&self) -> Result<(), VerifyError> {
        let n = self.n;
        if self.schema_version != SCHEMA_VERSION {
            return Err(fail("schema", format!("unsupported version {}", self.schema_version)));
        }
        if n < 3 {
            return Err(fail("degree", format!("n = {n} is below 3")));
        }
        if self.x.degree() != n || self.y.degree() != n {
            return Err(fail("degree", format!("generators do not act on {n} points")));
        }
        let order = hyperoctahedral_order(n);
        if self.order != order {
            return Err(fail("order", format!("stated {} but |B_{n}| = {order}", self.order)));
        }
        let actual = signature_of(&self.x, &self.y);
        if actual != self.signature {
            return Err(fail(
                "element orders",
                format!("stated {} but the generators give {actual}", self.signature),
            ));
        }
        if !actual.all_even() {
            return Err(fail("evenness", format!("{actual} has an odd entry")));
        }
        if self.verification == VerificationMode::Chain && self.witness.is_some() {
            return Err(fail("mode", "chain mode carries a Jordan witness"));
        }
        if self.verification != VerificationMode::Chain {
            self.verify_lift()?;
        }
        if self.verification.uses_chain() && !is_full_hyperoctahedral(&[self.x.clone(), self.y.clone()], n) {
            return Err(fail("generation", format!("the generators do not generate B_{n}")));
        }
        let bound = rh_upper_bound(&order, self.signature).map_err(|e| fail("genus", e.to_string()))?;
        if bound.0 != self.genus {
            return Err(fail("genus", format!("stated {} but the bound is {bound}", self.genus)));
        }
        if self.signature == minimal_signature(n) {
            let expected = genus_bn(n).map_err(|e| fail("minimal genus", e.to_string()))?;
            if expected.0 != self.genus {
                return Err(fail("minimal genus", format!("the genus of B_{n} is {expected}")));
            }
        }
        Ok(())
    }

    /// The pair must be a single-bit lift of `(σ, τ)` generating `Σ_n`,
    /// certified by the witness.
    fn verify_lift(&self) -> Result<(), VerifyError> {
        let n = self.n;
        let w = self
            .witness
            .as_ref()
            .ok_or_else(|| fail("witness", "Jordan mode without a witness"))?;
        let (sigma, tau) = (self.y.project(), self.x.project());
        if sigma.order() != 4 || tau.order() != 2 {
            return Err(fail("conditions", "σ must have order 4 and τ order 2"));
        }
        let single = |e: &SignedElement| -> Option<usize> {
            let bits = e.signs().bits();
            (e.signs().weight() == 1).then(|| bits.iter().position(|&b| b).expect("one bit") + 1)
        };
        let (i, j) = match (single(&self.y), single(&self.x)) {
            (Some(i), Some(j)) => (i, j),
            _ => return Err(fail("conditions", "each generator must carry exactly one sign")),
        };
        if tau.fixed_points().len() < 3 {
            return Err(fail("conditions", "τ fixes fewer than three points"));
        }
        let lifted = lift_pair(&sigma, &tau, i, j).map_err(|e| fail("conditions", e.to_string()))?;
        if lifted != (self.y.clone(), self.x.clone()) {
            return Err(fail("conditions", "generators are not the lift of their projections"));
        }
        if !sigma.then(&tau).parity().is_odd() {
            return Err(fail("conditions", "σ·τ is even"));
        }
        if !is_transitive(n, &[sigma.clone(), tau.clone()]) {
            return Err(fail("conditions", "⟨σ, τ⟩ is intransitive"));
        }
        if !verify_jordan(&sigma, &tau, w) {
            return Err(fail("witness", format!("{} does not certify Σ_{n}", format_witness(w))));
        }
        if n <= 15 && is_full_symmetric(n, &[sigma, tau]) != SymmetricClass::FullSymmetric {
            return Err(fail("witness", format!("⟨σ, τ⟩ is not Σ_{n}")));
        }
        Ok(())
    }
}

fn parse_signature(v: &str) -> Option<PairSignature> {
    let inner = v.strip_prefix('(')?.strip_suffix(')')?;
    let parts: Vec<u64> = inner.split(',').map(|p| p.trim().parse().ok()).collect::<Option<_>>()?;
    match parts[..] {
        [p, q, r] if p <= q && q <= r => Some(PairSignature { p, q, r }),
        _ => None,
    }
}

fn parse_witness(v: &str, n: usize) -> Result<JordanWitness, String> {
    let mut word = None;
    let mut power = None;
    let mut prime = None;
    let mut cycle = None;
    let mut anchors = None;
    for part in v.split(';') {
        let (k, val) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value in {part:?}"))?;
        let val = val.trim();
        let int = |s: &str| s.trim().parse::<u64>().map_err(|e| format!("{k}: {e}"));
        match k.trim() {
            "word" => word = Some(GroupWord::parse(val).map_err(|e| format!("word: {e}"))?),
            "power" => power = Some(int(val)?),
            "prime" => prime = Some(int(val)?),
            "cycle" => {
                let perm = parse_cycles(val, n).map_err(|e| format!("cycle: {e}"))?;
                let inner = val.trim_start_matches('(').trim_end_matches(')');
                let points: Vec<usize> = inner
                    .split_whitespace()
                    .map(|p| p.parse().map_err(|e| format!("cycle: {e}")))
                    .collect::<Result<_, _>>()?;
                if perm.cycles().len() != 1 {
                    return Err(format!("cycle {} is not a single cycle", format_cycles(&perm)));
                }
                cycle = Some(points);
            }
            "anchors" => {
                let (a, b) = val.split_once(',').ok_or("anchors: expected a,b")?;
                anchors = Some((int(a)? as usize, int(b)? as usize));
            }
            other => return Err(format!("unknown witness key {other:?}")),
        }
    }
    let (anchor_a, anchor_b) = anchors.ok_or("missing anchors")?;
    Ok(JordanWitness {
        word: word.ok_or("missing word")?,
        power: power.ok_or("missing power")?,
        prime: prime.ok_or("missing prime")?,
        cycle: cycle.ok_or("missing cycle")?,
        anchor_a,
        anchor_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_text() {
        assert_eq!(parse_signature("(2,4,6)"), Some(PairSignature::new(2, 4, 6)));
        assert_eq!(parse_signature("(2, 4, 10)"), Some(PairSignature::new(2, 4, 10)));
        assert_eq!(parse_signature("(4,2,6)"), None);
        assert_eq!(parse_signature("2,4,6"), None);
    }

    #[test]
    fn witness_text_round_trip() {
        let w = JordanWitness {
            word: GroupWord::parse("s^2 t s t").unwrap(),
            power: 3,
            prime: 5,
            cycle: vec![1, 4, 7, 9, 11],
            anchor_a: 4,
            anchor_b: 9,
        };
        assert_eq!(parse_witness(&format_witness(&w), 12).unwrap(), w);
        assert!(parse_witness("word=s; power=1", 12).is_err());
    }

    #[test]
    fn parse_errors_name_line_and_field() {
        let err = CertificateFile::parse("schema_version = 1\nn = x\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::BadValue {
                line: 2,
                field: "n",
                reason: "invalid digit found in string".into()
            }
        );
        assert!(matches!(
            CertificateFile::parse("bogus = 3"),
            Err(ParseError::UnknownField { line: 1, .. })
        ));
        assert!(matches!(
            CertificateFile::parse("n 3"),
            Err(ParseError::Malformed { line: 1 })
        ));
        assert_eq!(
            CertificateFile::parse("schema_version = 1\n"),
            Err(ParseError::Missing("n"))
        );
    }
}
