use std::fmt;

use serde::{Deserialize, Serialize};

/// Which counting engine evaluates the sequences of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Coefficients of generating functions built once per scan.
    #[default]
    Series,
    /// Direct lattice enumeration per index.
    Oracle,
    /// Both, requiring the engines to agree.
    Both,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Series => "series",
            Engine::Oracle => "oracle",
            Engine::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemKind {
    Identity,
    GfIdentity,
    LinearRule,
    CorrectionRule,
}

impl fmt::Display for ItemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ItemKind::Identity => "identity",
            ItemKind::GfIdentity => "gf_identity",
            ItemKind::LinearRule => "linear_rule",
            ItemKind::CorrectionRule => "correction_rule",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Counterexample,
    Skipped,
    /// The check could not be carried out, or the engines disagreed.
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "verified",
            Status::Counterexample => "counterexample",
            Status::Skipped => "skipped",
            Status::Error => "error",
        })
    }
}

/// Inclusive range of indices (or series exponents) that was examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckedRange {
    pub from: u64,
    pub to: u64,
}

/// Values at the first failing index. Integers are decimal strings so that
/// arbitrarily large values survive JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: u64,
    pub lhs: String,
    pub rhs: String,
}

/// A nonzero value of a correction rule's residual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exceptional {
    pub n: u64,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub item: ItemKind,
    pub engine: Engine,
    pub range: CheckedRange,
    /// How many indices were actually compared.
    pub checked: u64,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exceptional: Vec<Exceptional>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, item: ItemKind, engine: Engine, range: CheckedRange) -> Self {
        VerificationReport {
            name: name.into(),
            item,
            engine,
            range,
            checked: 0,
            status: Status::Verified,
            witness: None,
            message: None,
            flags: Vec::new(),
            exceptional: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub(crate) fn fail(mut self, status: Status, message: impl Into<String>) -> Self {
        self.status = status;
        self.message = Some(message.into());
        self
    }

    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Verified => "PASS",
            Status::Counterexample => "FAIL",
            Status::Skipped => "SKIP",
            Status::Error => "ERROR",
        };
        write!(
            f,
            "{tag:<5} {} [{} {}, {}..={}, {} checked]",
            self.name, self.item, self.engine, self.range.from, self.range.to, self.checked
        )?;
        if let Some(w) = &self.witness {
            write!(f, " at n={}: lhs={} rhs={}", w.n, w.lhs, w.rhs)?;
        }
        if let Some(m) = &self.message {
            write!(f, " ({m})")?;
        }
        if !self.flags.is_empty() {
            write!(f, " flags={}", self.flags.join(","))?;
        }
        if !self.exceptional.is_empty() {
            let shown: Vec<String> = self
                .exceptional
                .iter()
                .take(8)
                .map(|e| format!("r({})={}", e.n, e.value))
                .collect();
            let more = self.exceptional.len().saturating_sub(shown.len());
            write!(f, " nonzero: {}", shown.join(" "))?;
            if more > 0 {
                write!(f, " (+{more} more)")?;
            }
        }
        Ok(())
    }
}
