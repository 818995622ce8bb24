//! A small language for theta expressions: sums of monomial-scaled products
//! of `phi(q^k)^e` and `psi(q^k)^e`.
//!
//! Identity corpora are plain text (`.qid`), one identity per line:
//!
//! ```text
//! # comment
//! psi_squared : psi(q)^2 == phi(q)*psi(q^2)
//! ```

mod ast;
mod eval;
mod parser;

pub use ast::{Factor, Term, ThetaExpr};
pub use eval::{eval, eval_with};
pub use parser::{parse, ParseError, ParseErrorKind};

use thiserror::Error;

/// One `name : LHS == RHS` line of a `.qid` corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityRecord {
    pub name: String,
    pub lhs: ThetaExpr,
    pub rhs: ThetaExpr,
    /// Where the record came from, as `file:line`.
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QidError {
    #[error("line {line}: expected `name : LHS == RHS`")]
    MissingSeparator { line: usize },
    #[error("line {line}: identity name must be nonempty and free of whitespace")]
    BadName { line: usize },
    #[error("line {line}: duplicate identity name {name:?}")]
    DuplicateName { line: usize, name: String },
    #[error("line {line}, column {column}: {kind}")]
    Syntax {
        line: usize,
        column: usize,
        kind: ParseErrorKind,
    },
}

/// Parses the text of a `.qid` corpus. `origin` labels each record's source.
pub fn parse_qid(text: &str, origin: &str) -> Result<Vec<IdentityRecord>, QidError> {
    let mut records: Vec<IdentityRecord> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let (name, body) = content
            .split_once(':')
            .ok_or(QidError::MissingSeparator { line })?;
        let name = name.trim();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(QidError::BadName { line });
        }
        let (lhs_text, rhs_text) = body
            .split_once("==")
            .ok_or(QidError::MissingSeparator { line })?;
        let body_offset = name_end(content) + 1;
        let side = |text: &str, offset: usize| {
            parse(text).map_err(|e| QidError::Syntax {
                line,
                column: offset + e.column,
                kind: e.kind,
            })
        };
        let lhs = side(lhs_text, body_offset)?;
        let rhs = side(rhs_text, body_offset + lhs_text.len() + 2)?;
        if records.iter().any(|r| r.name == name) {
            return Err(QidError::DuplicateName { line, name: name.to_string() });
        }
        records.push(IdentityRecord {
            name: name.to_string(),
            lhs,
            rhs,
            source: format!("{origin}:{line}"),
        });
    }
    Ok(records)
}

fn name_end(content: &str) -> usize {
    content.find(':').unwrap_or(0)
}
