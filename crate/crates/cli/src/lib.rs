//! Commands behind the `hyperoct` binary.

pub mod certificate;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use hyperoct::construct::{construct_minimal_pair, ConstructError, ConstructOptions};
use hyperoct::genus::genus_bn;
use hyperoct::group_order::hyperoctahedral_order;
use hyperoct::search::{exhaustive_minimal_pair, minimal_signature, ExhaustiveConfig, SearchError, SearchStatus};

pub use certificate::{CertificateFile, ParseError, VerifyError, SCHEMA_VERSION};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Budget(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) | CliError::Io { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<ConstructError> for CliError {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::BudgetExhausted { .. } | ConstructError::Search(SearchError::BudgetExhausted { .. }) => {
                CliError::Budget(e.to_string())
            }
            ConstructError::DegreeTooSmall(_) | ConstructError::Excluded(_) => CliError::Usage(e.to_string()),
            other => CliError::Verification(other.to_string()),
        }
    }
}

/// One row per degree: `n`, `|B_n|`, minimal signature and genus.
pub fn genus_table(from: usize, to: usize) -> Result<String, CliError> {
    if from < 3 || from > to {
        return Err(CliError::Usage(format!("need 3 <= from <= to, got {from}..{to}")));
    }
    let mut out = String::new();
    writeln!(out, "{:>4}  {:>24}  {:>10}  {:>26}", "n", "|B_n|", "signature", "genus").unwrap();
    for n in from..=to {
        let genus = genus_bn(n).map_err(|e| CliError::Usage(e.to_string()))?;
        let flag = if matches!(n, 5 | 6 | 8) { "  exceptional" } else { "" };
        writeln!(
            out,
            "{n:>4}  {:>24}  {:>10}  {:>26}{flag}",
            hyperoctahedral_order(n).to_string(),
            minimal_signature(n).to_string(),
            genus.to_string()
        )
        .unwrap();
    }
    Ok(out)
}

/// Builds a minimal-signature certificate for `B_n` and returns its text.
pub fn construct(n: usize, seed: u64, chain_verify: bool) -> Result<String, CliError> {
    if n < 3 {
        return Err(CliError::Usage(format!("n = {n} is below 3")));
    }
    let opts = ConstructOptions {
        chain_verify,
        ..Default::default()
    };
    let cert = construct_minimal_pair(n, seed, &opts)?;
    let file = CertificateFile::from(&cert);
    file.verify().map_err(|e| CliError::Verification(e.to_string()))?;
    Ok(file.to_text())
}

/// Writes `text` to `path`; nothing is written on error upstream.
pub fn write_certificate(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses and fully re-verifies a certificate file.
pub fn verify_file(path: &Path) -> Result<CertificateFile, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    verify_text(&text)
}

pub fn verify_text(text: &str) -> Result<CertificateFile, CliError> {
    let file = CertificateFile::parse(text).map_err(|e| CliError::Verification(format!("parse error: {e}")))?;
    file.verify().map_err(|e| CliError::Verification(e.to_string()))?;
    Ok(file)
}

/// Per-signature exhaustive statuses, ending at the first realised signature.
pub fn search_min(n: usize, long: bool) -> Result<String, CliError> {
    if n < 3 {
        return Err(CliError::Usage(format!("n = {n} is below 3")));
    }
    let config = ExhaustiveConfig {
        allow_long: long,
        ..Default::default()
    };
    let report = exhaustive_minimal_pair(n, None, &config).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = String::new();
    for (sig, outcome) in &report.entries {
        let status = match outcome.status {
            SearchStatus::Found => "FOUND",
            SearchStatus::ExhaustedNone => "none (exhaustive)",
            SearchStatus::BudgetExhausted => "budget exhausted",
        };
        writeln!(
            out,
            "{sig}: {status}  [{} candidates, {} chain builds, {:.2?}]",
            outcome.stats.candidates, outcome.stats.chain_builds, outcome.stats.elapsed
        )
        .unwrap();
        if let Some((x, y)) = &outcome.pair {
            writeln!(out, "  x = {x}\n  y = {y}").unwrap();
        }
    }
    if report.minimal().is_none() {
        writeln!(out, "no candidate signature is realised by a generating pair of B_{n}").unwrap();
    }
    Ok(out)
}
