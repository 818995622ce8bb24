use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::model::{CorrectionRule, GfIdentity, LinearRule};
use super::report::ItemKind;
use crate::qdsl::{parse_qid, IdentityRecord, QidError};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Qid { path: PathBuf, source: QidError },
    #[error("{path}: line {line}, column {column}: {message}")]
    Json { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{path}: {name}: {message}")]
    Invalid { path: PathBuf, name: String, message: String },
    #[error("{path}: duplicate item name {name:?}")]
    DuplicateName { path: PathBuf, name: String },
    #[error("{path}: unrecognised corpus extension (expected .qid or .json)")]
    UnknownFormat { path: PathBuf },
}

/// On-disk layout of a JSON corpus. Every section is optional.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonCorpus {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gf_identities: Vec<GfIdentity>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rules: Vec<LinearRule>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub corrections: Vec<CorrectionRule>,
}

/// One checkable item of any kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuiteItem {
    Identity(IdentityRecord),
    Gf(GfIdentity),
    Rule(LinearRule),
    Correction(CorrectionRule),
}

impl SuiteItem {
    pub fn name(&self) -> &str {
        match self {
            SuiteItem::Identity(r) => &r.name,
            SuiteItem::Gf(g) => &g.name,
            SuiteItem::Rule(r) => &r.name,
            SuiteItem::Correction(c) => &c.name,
        }
    }

    pub fn kind(&self) -> ItemKind {
        match self {
            SuiteItem::Identity(_) => ItemKind::Identity,
            SuiteItem::Gf(_) => ItemKind::GfIdentity,
            SuiteItem::Rule(_) => ItemKind::LinearRule,
            SuiteItem::Correction(_) => ItemKind::CorrectionRule,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub identities: Vec<IdentityRecord>,
    pub gf_identities: Vec<GfIdentity>,
    pub rules: Vec<LinearRule>,
    pub corrections: Vec<CorrectionRule>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.identities.len() + self.gf_identities.len() + self.rules.len() + self.corrections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn extend(&mut self, other: Corpus) {
        self.identities.extend(other.identities);
        self.gf_identities.extend(other.gf_identities);
        self.rules.extend(other.rules);
        self.corrections.extend(other.corrections);
    }

    pub fn items(&self) -> Vec<SuiteItem> {
        let mut items: Vec<SuiteItem> = self.identities.iter().cloned().map(SuiteItem::Identity).collect();
        items.extend(self.gf_identities.iter().cloned().map(SuiteItem::Gf));
        items.extend(self.rules.iter().cloned().map(SuiteItem::Rule));
        items.extend(self.corrections.iter().cloned().map(SuiteItem::Correction));
        items
    }
}

/// Loads a `.qid` or `.json` corpus, dispatching on the extension.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| CorpusError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("qid") => {
            let origin = path.file_name().and_then(|n| n.to_str()).unwrap_or("<corpus>");
            let identities = parse_qid(&text, origin).map_err(|source| CorpusError::Qid {
                path: path.to_path_buf(),
                source,
            })?;
            Ok(Corpus { identities, ..Corpus::default() })
        }
        Some("json") => parse_json_corpus(&text, path),
        _ => Err(CorpusError::UnknownFormat { path: path.to_path_buf() }),
    }
}

/// Parses and validates JSON corpus text; `path` only labels errors.
pub fn parse_json_corpus(text: &str, path: &Path) -> Result<Corpus, CorpusError> {
    let file: JsonCorpus = serde_json::from_str(text).map_err(|e| CorpusError::Json {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let invalid = |name: &str, message: String| CorpusError::Invalid {
        path: path.to_path_buf(),
        name: name.to_string(),
        message,
    };
    for g in &file.gf_identities {
        g.validate().map_err(|m| invalid(&g.name, m))?;
    }
    for r in &file.rules {
        r.validate().map_err(|m| invalid(&r.name, m))?;
    }
    for c in &file.corrections {
        c.validate().map_err(|m| invalid(&c.name, m))?;
    }
    let mut seen = HashSet::new();
    let names = file
        .gf_identities
        .iter()
        .map(|g| &g.name)
        .chain(file.rules.iter().map(|r| &r.name))
        .chain(file.corrections.iter().map(|c| &c.name));
    for name in names {
        if !seen.insert(name) {
            return Err(CorpusError::DuplicateName { path: path.to_path_buf(), name: name.clone() });
        }
    }
    Ok(Corpus {
        identities: Vec::new(),
        gf_identities: file.gf_identities,
        rules: file.rules,
        corrections: file.corrections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::model::{AffineIndex, Ratio, ResidueClass};
    use crate::seq::SeqKind;

    const ROW: &str = r#"{
        "rules": [{
            "name": "t233_2mod8",
            "lhs": {"kind": "t", "form": [2, 3, 3], "at": [1, 0]},
            "rhs": [{"coef": 1, "kind": "N", "form": [1, 3, 3], "at": [1, 1]}],
            "ratio": [2, 1],
            "domain": {"modulus": 8, "residues": [2]},
            "exclude": {"modulus": 16, "residues": [15]}
        }]
    }"#;

    #[test]
    fn json_rule() {
        let c = parse_json_corpus(ROW, Path::new("t.json")).unwrap();
        let r = &c.rules[0];
        assert_eq!(r.lhs.kind, SeqKind::Triangular);
        assert_eq!(r.rhs[0].at, AffineIndex::new(1, 1));
        assert_eq!(r.ratio, Ratio::new(2, 1));
        assert_eq!(r.exclude, Some(ResidueClass::new(16, [15])));
        assert_eq!(r.n_start, 1);
        assert_eq!(c.items().len(), 1);
    }

    #[test]
    fn json_errors_carry_location() {
        let bad = ROW.replace("\"ratio\"", "\"ratoi\"");
        match parse_json_corpus(&bad, Path::new("t.json")).unwrap_err() {
            CorpusError::Json { line, .. } => assert_eq!(line, 6),
            other => panic!("unexpected {other}"),
        }
        let zero = ROW.replace("[2, 1]", "[2, 0]");
        assert!(matches!(
            parse_json_corpus(&zero, Path::new("t.json")).unwrap_err(),
            CorpusError::Invalid { .. }
        ));
    }

    #[test]
    fn duplicate_names_rejected() {
        let v: serde_json::Value = serde_json::from_str(ROW).unwrap();
        let rule = v["rules"][0].clone();
        let doubled = serde_json::json!({ "rules": [rule.clone(), rule] }).to_string();
        assert!(matches!(
            parse_json_corpus(&doubled, Path::new("t.json")).unwrap_err(),
            CorpusError::DuplicateName { .. }
        ));
    }

    #[test]
    fn files_by_extension() {
        let dir = tempfile::tempdir().unwrap();
        let qid = dir.path().join("a.qid");
        fs::write(&qid, "x : psi(q)^2 == phi(q)*psi(q^2)\n").unwrap();
        assert_eq!(load_corpus(&qid).unwrap().identities[0].source, "a.qid:1");

        let bad = dir.path().join("b.qid");
        fs::write(&bad, "ok : 1 == 1\nbroken line\n").unwrap();
        let msg = load_corpus(&bad).unwrap_err().to_string();
        assert!(msg.contains("line 2"), "{msg}");

        assert!(matches!(load_corpus(dir.path().join("none.json")), Err(CorpusError::Io { .. })));
        let txt = dir.path().join("c.txt");
        fs::write(&txt, "").unwrap();
        assert!(matches!(load_corpus(&txt), Err(CorpusError::UnknownFormat { .. })));
    }
}
