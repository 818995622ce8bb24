//! Theta series, representation-count generating functions, and the direct
//! enumeration oracle that cross-checks them.
//!
//! The oracle never touches [`Series`]: it walks lattice points and tests
//! membership with exact integer square roots.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fps::Series;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("form coefficients must be positive, got ({0},{1},{2})")]
    NonPositiveCoefficient(u64, u64, u64),
    #[error("unknown sequence kind {0:?} (expected N, t or T)")]
    UnknownKind(String),
    #[error("malformed form {0:?} (expected a,b,c)")]
    MalformedForm(String),
}

/// The two Ramanujan theta functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThetaFunc {
    /// `sum_{n in Z} q^{n^2}`
    Phi,
    /// `sum_{n >= 0} q^{n(n+1)/2}`
    Psi,
}

impl ThetaFunc {
    pub fn name(self) -> &'static str {
        match self {
            ThetaFunc::Phi => "phi",
            ThetaFunc::Psi => "psi",
        }
    }
}

/// What a representation-count sequence counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SeqKind {
    /// `N(a,b,c;n)`: solutions of `ax^2 + by^2 + cz^2 = n` over Z^3.
    #[serde(rename = "N")]
    Squares,
    /// `t(a,b,c;n)`: weighted sums of triangular numbers over Z^3.
    #[serde(rename = "t")]
    Triangular,
    /// `T(a,b,c;n)`: the same over N^3.
    #[serde(rename = "T")]
    TriangularNatural,
}

impl SeqKind {
    pub fn symbol(self) -> &'static str {
        match self {
            SeqKind::Squares => "N",
            SeqKind::Triangular => "t",
            SeqKind::TriangularNatural => "T",
        }
    }
}

impl FromStr for SeqKind {
    type Err = SeqError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "N" => Ok(SeqKind::Squares),
            "t" => Ok(SeqKind::Triangular),
            "T" => Ok(SeqKind::TriangularNatural),
            other => Err(SeqError::UnknownKind(other.to_string())),
        }
    }
}

impl fmt::Display for SeqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Coefficient triple `(a,b,c)` of a diagonal ternary form, all positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[u64; 3]", into = "[u64; 3]")]
pub struct Form([u64; 3]);

impl Form {
    pub fn new(a: u64, b: u64, c: u64) -> Result<Form, SeqError> {
        if a == 0 || b == 0 || c == 0 {
            return Err(SeqError::NonPositiveCoefficient(a, b, c));
        }
        Ok(Form([a, b, c]))
    }

    pub fn coefficients(&self) -> [u64; 3] {
        self.0
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    /// The same form with coefficients in ascending order. Every count is
    /// invariant under permuting the coefficients.
    pub fn sorted(&self) -> Form {
        let mut c = self.0;
        c.sort_unstable();
        Form(c)
    }
}

impl TryFrom<[u64; 3]> for Form {
    type Error = SeqError;
    fn try_from(c: [u64; 3]) -> Result<Self, Self::Error> {
        Form::new(c[0], c[1], c[2])
    }
}

impl From<Form> for [u64; 3] {
    fn from(f: Form) -> Self {
        f.0
    }
}

impl FromStr for Form {
    type Err = SeqError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<u64> = s
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| SeqError::MalformedForm(s.to_string()))?;
        match parts.as_slice() {
            &[a, b, c] => Form::new(a, b, c),
            _ => Err(SeqError::MalformedForm(s.to_string())),
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "{a},{b},{c}")
    }
}

/// A representation-count sequence such as `t(2,3,3;n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeqSpec {
    pub kind: SeqKind,
    pub form: Form,
}

impl SeqSpec {
    pub fn new(kind: SeqKind, form: Form) -> Self {
        SeqSpec { kind, form }
    }

    /// Canonical representative used as a cache key.
    pub fn normalized(&self) -> SeqSpec {
        SeqSpec {
            kind: self.kind,
            form: self.form.sorted(),
        }
    }
}

impl fmt::Display for SeqSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.form)
    }
}

/// `C(a,b,c)` together with the form it was computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormConstant {
    pub form: Form,
    pub value: u64,
}

/// `phi(q^k)` or `psi(q^k)` to the given precision, built directly from the
/// exponent characterization rather than by substitution.
pub fn theta(func: ThetaFunc, k: u64, order: usize) -> Series {
    assert!(order > 0, "series precision must be positive");
    assert!(k > 0, "theta argument power must be positive");
    let mut coeffs = vec![BigInt::zero(); order];
    let k = k as u128;
    let limit = order as u128;
    coeffs[0] = BigInt::from(1);
    let mut n: u128 = 1;
    loop {
        let e = match func {
            ThetaFunc::Phi => k * n * n,
            ThetaFunc::Psi => k * n * (n + 1) / 2,
        };
        if e >= limit {
            break;
        }
        coeffs[e as usize] += match func {
            ThetaFunc::Phi => 2,
            ThetaFunc::Psi => 1,
        };
        n += 1;
    }
    Series::from_vec_unchecked(coeffs)
}

pub fn phi(order: usize) -> Series {
    theta(ThetaFunc::Phi, 1, order)
}

pub fn psi(order: usize) -> Series {
    theta(ThetaFunc::Psi, 1, order)
}

/// Generating function `sum_n count(n) q^n` truncated to `order`.
pub fn gf(spec: &SeqSpec, order: usize) -> Series {
    let func = match spec.kind {
        SeqKind::Squares => ThetaFunc::Phi,
        SeqKind::Triangular | SeqKind::TriangularNatural => ThetaFunc::Psi,
    };
    let [a, b, c] = spec.form.coefficients();
    let product = theta(func, a, order)
        .mul(&theta(func, b, order))
        .mul(&theta(func, c, order));
    match spec.kind {
        SeqKind::Triangular => product.scale(&BigInt::from(8)),
        _ => product,
    }
}

/// Exact integer square root test.
pub fn is_square(m: u64) -> bool {
    let r = m.sqrt();
    r * r == m
}

/// `m = x(x+1)/2` for some integer `x`, tested as `8m+1` being a square.
pub fn is_triangular(m: u64) -> bool {
    let d = 8 * m as u128 + 1;
    let r = d.sqrt();
    r * r == d
}

fn tri(x: i64) -> u64 {
    (x as i128 * (x as i128 + 1) / 2) as u64
}

/// Largest `x >= 0` with `coef * x(x+1)/2 <= n`.
fn max_tri_index(n: u64, coef: u64) -> i64 {
    let bound = n / coef;
    let mut x = (((8 * bound as u128 + 1).sqrt() - 1) / 2) as i64;
    while tri(x + 1) <= bound {
        x += 1;
    }
    x
}

/// Count by direct enumeration over lattice points.
///
/// The two largest form coefficients drive the outer loops; the smallest one
/// is solved for in closed form.
pub fn oracle_count(spec: &SeqSpec, n: u64) -> u64 {
    let [a, b, c] = spec.form.sorted().coefficients();
    match spec.kind {
        SeqKind::Squares => {
            let mut count = 0;
            let zmax = (n / c).sqrt() as i64;
            for z in -zmax..=zmax {
                let rz = n - c * (z * z) as u64;
                let ymax = (rz / b).sqrt() as i64;
                for y in -ymax..=ymax {
                    let r = rz - b * (y * y) as u64;
                    if r.is_multiple_of(a) && is_square(r / a) {
                        count += if r == 0 { 1 } else { 2 };
                    }
                }
            }
            count
        }
        SeqKind::TriangularNatural => {
            let mut count = 0;
            for z in 0..=max_tri_index(n, c) {
                let rz = n - c * tri(z);
                for y in 0..=max_tri_index(rz, b) {
                    let r = rz - b * tri(y);
                    if r.is_multiple_of(a) && is_triangular(r / a) {
                        count += 1;
                    }
                }
            }
            count
        }
        SeqKind::Triangular => {
            let mut count = 0;
            let zmax = max_tri_index(n, c);
            for z in (-1 - zmax)..=zmax {
                let rz = n - c * tri(z);
                let ymax = max_tri_index(rz, b);
                for y in (-1 - ymax)..=ymax {
                    let r = rz - b * tri(y);
                    // x and -1-x give the same triangular value
                    if r.is_multiple_of(a) && is_triangular(r / a) {
                        count += 2;
                    }
                }
            }
            count
        }
    }
}

/// `C(a,b,c) = i1(i1-1)(i1-2)(i1-3)/4 + i1(i1-1)i2/2 + i1*i3`, where `ij`
/// counts the coefficients equal to `j`.
pub fn form_constant(form: Form) -> FormConstant {
    let count = |j: u64| form.coefficients().iter().filter(|&&x| x == j).count() as i64;
    let (i1, i2, i3) = (count(1), count(2), count(3));
    let value = i1 * (i1 - 1) * (i1 - 2) * (i1 - 3) / 4 + i1 * (i1 - 1) * i2 / 2 + i1 * i3;
    FormConstant {
        form,
        value: value as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: &str, a: u64, b: u64, c: u64) -> SeqSpec {
        SeqSpec::new(kind.parse().unwrap(), Form::new(a, b, c).unwrap())
    }

    fn ints(s: &Series) -> Vec<i64> {
        s.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn theta_prefixes() {
        assert_eq!(ints(&phi(10)), vec![1, 2, 0, 0, 2, 0, 0, 0, 0, 2]);
        assert_eq!(ints(&phi(1)), vec![1]);
        assert_eq!(phi(17).coefficient(16).unwrap(), &BigInt::from(2));
        assert_eq!(ints(&psi(11)), vec![1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1]);
        assert_eq!(ints(&psi(1)), vec![1]);
        assert_eq!(psi(16).coefficient(15).unwrap(), &BigInt::from(1));
    }

    #[test]
    fn theta_of_power_matches_substitution() {
        for k in 1..6 {
            for func in [ThetaFunc::Phi, ThetaFunc::Psi] {
                let direct = theta(func, k, 200);
                let sub = theta(func, 1, 200).substitute_power(k as usize).unwrap();
                assert!(direct.equal_to_order(&sub, 200).unwrap().is_equal());
            }
        }
    }

    #[test]
    fn gf_examples() {
        let t111 = gf(&spec("t", 1, 1, 1), 4);
        assert_eq!(t111.coefficient(0).unwrap(), &BigInt::from(8));
        assert_eq!(gf(&spec("N", 1, 3, 3), 4).coefficient(1).unwrap(), &BigInt::from(2));
        assert_eq!(gf(&spec("T", 2, 3, 3), 8).coefficient(6).unwrap(), &BigInt::from(2));
        assert_eq!(gf(&spec("t", 2, 3, 3), 8).coefficient(6).unwrap(), &BigInt::from(16));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_count(&spec("N", 1, 1, 1), 3), 8);
        assert_eq!(oracle_count(&spec("t", 7, 2, 9), 0), 8);
        assert_eq!(oracle_count(&spec("N", 1, 3, 16), 7), 4);
        assert_eq!(oracle_count(&spec("t", 1, 3, 16), 1), 8);
        assert_eq!(oracle_count(&spec("T", 2, 3, 3), 6), 2);
        assert_eq!(oracle_count(&spec("N", 1, 1, 1), 0), 1);
        assert_eq!(oracle_count(&spec("T", 5, 5, 5), 0), 1);
        assert_eq!(oracle_count(&spec("N", 1, 1, 1), 7), 0);
    }

    #[test]
    fn membership_tests() {
        let squares: Vec<u64> = (0..50).filter(|&m| is_square(m)).collect();
        assert_eq!(squares, vec![0, 1, 4, 9, 16, 25, 36, 49]);
        let tris: Vec<u64> = (0..50).filter(|&m| is_triangular(m)).collect();
        assert_eq!(tris, vec![0, 1, 3, 6, 10, 15, 21, 28, 36, 45]);
        assert!(is_square(u32::MAX as u64 * u32::MAX as u64));
        assert!(!is_square(u32::MAX as u64 * u32::MAX as u64 + 1));
        assert_eq!(max_tri_index(10, 1), 4);
        assert_eq!(max_tri_index(9, 1), 3);
        assert_eq!(max_tri_index(0, 7), 0);
    }

    #[test]
    fn form_constant_examples() {
        let c = |a, b, cc| form_constant(Form::new(a, b, cc).unwrap()).value;
        assert_eq!(c(1, 1, 1), 0);
        assert_eq!(c(1, 1, 2), 1);
        assert_eq!(c(2, 2, 3), 0);
        assert_eq!(c(1, 3, 4), 1);
        assert_eq!(c(1, 2, 3), 1);
    }

    #[test]
    fn parsing() {
        assert_eq!("1, 3,3".parse::<Form>().unwrap(), Form::new(1, 3, 3).unwrap());
        assert!("1,3".parse::<Form>().is_err());
        assert!("0,1,1".parse::<Form>().is_err());
        assert!("x".parse::<SeqKind>().is_err());
        assert_eq!(spec("t", 2, 3, 3).to_string(), "t(2,3,3)");
        let json = serde_json::to_string(&spec("N", 1, 3, 3)).unwrap();
        assert_eq!(json, r#"{"kind":"N","form":[1,3,3]}"#);
        assert!(serde_json::from_str::<SeqSpec>(r#"{"kind":"N","form":[0,3,3]}"#).is_err());
    }
}
