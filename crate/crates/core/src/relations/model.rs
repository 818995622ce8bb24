//! Schema for sequence-level results: dissected generating functions, linear
//! relations on residue classes, and quadratic-family correction rules.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::qdsl::ThetaExpr;
use crate::seq::{Form, SeqKind, SeqSpec};

/// The affine index map `n -> mul*n + add`, written `[mul, add]` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[u64; 2]", into = "[u64; 2]")]
pub struct AffineIndex {
    pub mul: u64,
    pub add: u64,
}

impl AffineIndex {
    pub const IDENTITY: AffineIndex = AffineIndex { mul: 1, add: 0 };

    pub fn new(mul: u64, add: u64) -> Self {
        AffineIndex { mul, add }
    }

    pub fn apply(&self, n: u64) -> u64 {
        self.mul * n + self.add
    }
}

impl From<[u64; 2]> for AffineIndex {
    fn from([mul, add]: [u64; 2]) -> Self {
        AffineIndex { mul, add }
    }
}

impl From<AffineIndex> for [u64; 2] {
    fn from(a: AffineIndex) -> Self {
        [a.mul, a.add]
    }
}

impl fmt::Display for AffineIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.mul, self.add) {
            (1, 0) => write!(f, "n"),
            (1, b) => write!(f, "n+{b}"),
            (a, 0) => write!(f, "{a}n"),
            (a, b) => write!(f, "{a}n+{b}"),
        }
    }
}

/// A sequence evaluated along an affine index, e.g. `N(1,3,3;8n+3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeqAt {
    pub kind: SeqKind,
    pub form: Form,
    pub at: AffineIndex,
}

impl SeqAt {
    pub fn new(kind: SeqKind, form: Form, at: AffineIndex) -> Self {
        SeqAt { kind, form, at }
    }

    pub fn spec(&self) -> SeqSpec {
        SeqSpec::new(self.kind, self.form)
    }
}

impl fmt::Display for SeqAt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({};{})", self.kind, self.form, self.at)
    }
}

/// `coef * seq(at(n))` on the right-hand side of a linear rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhsTerm {
    pub coef: i64,
    pub kind: SeqKind,
    pub form: Form,
    pub at: AffineIndex,
}

impl RhsTerm {
    pub fn seq(&self) -> SeqAt {
        SeqAt::new(self.kind, self.form, self.at)
    }
}

/// Positive rational `num/den`, written `[num, den]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[u64; 2]", into = "[u64; 2]")]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Self {
        Ratio { num, den }
    }
}

impl From<[u64; 2]> for Ratio {
    fn from([num, den]: [u64; 2]) -> Self {
        Ratio { num, den }
    }
}

impl From<Ratio> for [u64; 2] {
    fn from(r: Ratio) -> Self {
        [r.num, r.den]
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// The set of `n` with `n mod modulus` in `residues`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidueClass {
    pub modulus: u64,
    pub residues: Vec<u64>,
}

impl ResidueClass {
    pub fn all() -> Self {
        ResidueClass { modulus: 1, residues: vec![0] }
    }

    pub fn new(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Self {
        let mut residues: Vec<u64> = residues.into_iter().collect();
        residues.sort_unstable();
        residues.dedup();
        ResidueClass { modulus, residues }
    }

    pub fn contains(&self, n: u64) -> bool {
        self.residues.contains(&(n % self.modulus))
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.modulus == 0 {
            return Err("residue modulus must be positive".into());
        }
        if self.residues.is_empty() {
            return Err("residue set is empty".into());
        }
        if let Some(r) = self.residues.iter().find(|&&r| r >= self.modulus) {
            return Err(format!("residue {r} is not reduced modulo {}", self.modulus));
        }
        Ok(())
    }
}

impl Default for ResidueClass {
    fn default() -> Self {
        ResidueClass::all()
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rs: Vec<String> = self.residues.iter().map(u64::to_string).collect();
        write!(f, "n = {} mod {}", rs.join(","), self.modulus)
    }
}

fn default_one() -> u64 {
    1
}

fn is_one(v: &u64) -> bool {
    *v == 1
}

fn is_all(r: &ResidueClass) -> bool {
    r.modulus == 1
}

/// `scale_den * sum_n seq(mul*n + add) q^n == rhs` as series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GfIdentity {
    pub name: String,
    pub seq: SeqSpec,
    pub at: AffineIndex,
    #[serde(default = "default_one", skip_serializing_if = "is_one")]
    pub scale_den: u64,
    pub rhs: ThetaExpr,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl GfIdentity {
    pub fn validate(&self) -> Result<(), String> {
        if self.at.mul == 0 {
            return Err("index multiplier must be at least 1".into());
        }
        if self.scale_den == 0 {
            return Err("scale_den must be positive".into());
        }
        Ok(())
    }
}

/// `den * lhs(n) == num * sum_i coef_i * rhs_i(n)` for every `n >= n_start`
/// in `domain` and outside `exclude`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearRule {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub lhs: SeqAt,
    pub rhs: Vec<RhsTerm>,
    pub ratio: Ratio,
    #[serde(default, skip_serializing_if = "is_all")]
    pub domain: ResidueClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclude: Option<ResidueClass>,
    #[serde(default = "default_one")]
    pub n_start: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl LinearRule {
    pub fn validate(&self) -> Result<(), String> {
        if self.rhs.is_empty() {
            return Err("right-hand side has no terms".into());
        }
        if self.ratio.num == 0 || self.ratio.den == 0 {
            return Err("ratio must be a positive fraction".into());
        }
        let maps = std::iter::once(self.lhs.at).chain(self.rhs.iter().map(|t| t.at));
        for at in maps {
            if at.mul == 0 {
                return Err("index multiplier must be at least 1".into());
            }
        }
        self.domain.validate()?;
        if let Some(ex) = &self.exclude {
            ex.validate()?;
        }
        Ok(())
    }

    pub fn admits(&self, n: u64) -> bool {
        n >= self.n_start
            && self.domain.contains(n)
            && !self.exclude.as_ref().is_some_and(|ex| ex.contains(n))
    }

    /// Every sequence read by the rule, left side first.
    pub fn sides(&self) -> impl Iterator<Item = SeqAt> + '_ {
        std::iter::once(self.lhs).chain(self.rhs.iter().map(RhsTerm::seq))
    }
}

/// Sign-alternating value `(-1)^(k + sign_shift) * (slope*k + intercept)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyValue {
    pub sign_shift: i64,
    pub slope: i64,
    pub intercept: i64,
}

impl FamilyValue {
    pub fn at(&self, k: i64) -> i64 {
        let magnitude = self.slope * k + self.intercept;
        if (k + self.sign_shift).rem_euclid(2) == 0 {
            magnitude
        } else {
            -magnitude
        }
    }
}

/// Fires at `n` when `2*(n + target_offset) = A k^2 + B k + C` has an
/// integer solution `k`; `equation` is `[A, B, C]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticFamily {
    pub equation: [i64; 3],
    pub target_offset: u64,
    pub value: FamilyValue,
}

impl QuadraticFamily {
    /// All integer `k` solving the family equation for this `n`, ascending.
    pub fn solutions(&self, n: u64) -> Vec<i64> {
        let [a, b, c] = self.equation.map(i128::from);
        let target = 2 * (n as i128 + self.target_offset as i128);
        // a k^2 + b k + (c - target) = 0
        let c0 = c - target;
        if a == 0 {
            if b != 0 && (-c0) % b == 0 {
                return vec![(-c0 / b) as i64];
            }
            return Vec::new();
        }
        let disc = b * b - 4 * a * c0;
        if disc < 0 {
            return Vec::new();
        }
        let root = num_integer::Roots::sqrt(&disc);
        if root * root != disc {
            return Vec::new();
        }
        let mut ks: Vec<i64> = [-b - root, -b + root]
            .into_iter()
            .filter(|num| num % (2 * a) == 0)
            .map(|num| (num / (2 * a)) as i64)
            .collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }
}

/// `r(n) = minuend(n) - subtrahend(n)/subtrahend_den`, predicted to equal the
/// value of the first firing quadratic family, or 0 when none fires.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrectionRule {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub minuend: SeqAt,
    pub subtrahend: SeqAt,
    pub subtrahend_den: u64,
    pub families: Vec<QuadraticFamily>,
    #[serde(default = "default_one")]
    pub n_start: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CorrectionRule {
    pub fn validate(&self) -> Result<(), String> {
        if self.subtrahend_den == 0 {
            return Err("subtrahend_den must be positive".into());
        }
        if self.minuend.at.mul == 0 || self.subtrahend.at.mul == 0 {
            return Err("index multiplier must be at least 1".into());
        }
        if self.families.iter().any(|f| f.equation[0] == 0 && f.equation[1] == 0) {
            return Err("family equation is constant in k".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_membership() {
        let r = ResidueClass::new(16, [7, 3, 3]);
        assert_eq!(r.residues, vec![3, 7]);
        assert!(r.contains(19));
        assert!(!r.contains(11));
        assert!(ResidueClass::new(4, [4]).validate().is_err());
        assert!(ResidueClass::new(0, [0]).validate().is_err());
    }

    #[test]
    fn family_solutions() {
        // 2n = 9k^2 - 9k
        let fam = QuadraticFamily {
            equation: [9, -9, 0],
            target_offset: 0,
            value: FamilyValue { sign_shift: 1, slope: 6, intercept: -3 },
        };
        assert_eq!(fam.solutions(9), vec![-1, 2]);
        assert_eq!(fam.value.at(2), -9);
        assert_eq!(fam.value.at(-1), -9);
        assert!(fam.solutions(2).is_empty());
        assert_eq!(fam.solutions(0), vec![0, 1]);

        // 2(n+1) = 9k^2 - 3k: n = 5 at k = -1, n = 2 at k = 1
        let fam = QuadraticFamily {
            equation: [9, -3, 0],
            target_offset: 1,
            value: FamilyValue { sign_shift: 0, slope: 6, intercept: -1 },
        };
        assert_eq!(fam.solutions(2), vec![1]);
        assert_eq!(fam.solutions(5), vec![-1]);
        assert_eq!(fam.value.at(-1), 7);
    }

    #[test]
    fn rule_json_shape() {
        let json = r#"{
            "name": "x", "lhs": {"kind":"t","form":[2,3,3],"at":[1,0]},
            "rhs": [{"coef":1,"kind":"N","form":[1,3,3],"at":[1,1]}],
            "ratio": [2,1], "domain": {"modulus":8,"residues":[2]},
            "exclude": {"modulus":16,"residues":[15]}
        }"#;
        let rule: LinearRule = serde_json::from_str(json).unwrap();
        assert_eq!(rule.n_start, 1);
        assert_eq!(rule.ratio, Ratio::new(2, 1));
        assert!(rule.admits(10) && !rule.admits(2 + 8 * 100 + 6));
        assert!(rule.validate().is_ok());
        let again: LinearRule = serde_json::from_str(&serde_json::to_string(&rule).unwrap()).unwrap();
        assert_eq!(again, rule);

        let unknown = json.replace("\"ratio\"", "\"ratoi\"");
        assert!(serde_json::from_str::<LinearRule>(&unknown).is_err());
    }
}
