use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::seq::ThetaFunc;

/// `func(q^arg)^power`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Factor {
    pub func: ThetaFunc,
    pub arg: u64,
    pub power: u32,
}

/// `coefficient * q^qexponent * factor * factor * ...`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coefficient: i64,
    pub qexponent: u64,
    pub factors: Vec<Factor>,
}

/// A sum of terms. Never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThetaExpr {
    pub terms: Vec<Term>,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.func.name())?;
        if self.arg == 1 {
            f.write_str("(q)")?;
        } else {
            write!(f, "(q^{})", self.arg)?;
        }
        if self.power != 1 {
            write!(f, "^{}", self.power)?;
        }
        Ok(())
    }
}

impl Term {
    fn fmt_magnitude(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mag = self.coefficient.unsigned_abs();
        let bare = self.qexponent == 0 && self.factors.is_empty();
        let mut wrote = false;
        if mag != 1 || bare {
            write!(f, "{mag}")?;
            wrote = true;
        }
        match self.qexponent {
            0 => {}
            1 => {
                f.write_str("q")?;
                wrote = true;
            }
            e => {
                write!(f, "q^{e}")?;
                wrote = true;
            }
        }
        for factor in &self.factors {
            if wrote {
                f.write_str("*")?;
            }
            write!(f, "{factor}")?;
            wrote = true;
        }
        Ok(())
    }
}

impl fmt::Display for ThetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, term) in self.terms.iter().enumerate() {
            match (i, term.coefficient < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            term.fmt_magnitude(f)?;
        }
        Ok(())
    }
}

impl Serialize for ThetaExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ThetaExpr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }
}
