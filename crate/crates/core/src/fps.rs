//! Truncated formal power series in one variable `q` with exact integer
//! coefficients.
//!
//! A [`Series`] knows its coefficients for every exponent `0 <= k < P`,
//! where `P` is the precision. Nothing is known beyond the window, so every
//! binary operation truncates to the smaller precision of its operands.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("precision {precision} requires exactly {precision} coefficients, got {actual}")]
    LengthMismatch { precision: usize, actual: usize },
    #[error("precision must be positive")]
    ZeroPrecision,
    #[error("exponent {exponent} is outside the known window [0, {precision})")]
    OutOfWindow { exponent: usize, precision: usize },
    #[error("{0}")]
    InvalidArgument(String),
}

/// A power series `c_0 + c_1 q + ... + c_{P-1} q^{P-1} + O(q^P)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Vec<BigInt>,
}

/// Outcome of [`Series::equal_to_order`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    /// Smallest exponent at which the two series differ.
    Differs {
        exponent: usize,
        left: BigInt,
        right: BigInt,
    },
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal)
    }
}

impl Series {
    pub fn new(coeffs: Vec<BigInt>, precision: usize) -> Result<Self, SeriesError> {
        if precision == 0 {
            return Err(SeriesError::ZeroPrecision);
        }
        if coeffs.len() != precision {
            return Err(SeriesError::LengthMismatch {
                precision,
                actual: coeffs.len(),
            });
        }
        Ok(Series { coeffs })
    }

    /// Builds a series whose precision is the number of supplied coefficients.
    pub fn from_ints<I, T>(coeffs: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let coeffs: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        let precision = coeffs.len();
        Series::new(coeffs, precision)
    }

    /// The zero series of the given precision.
    ///
    /// Panics if `precision` is zero.
    pub fn zero(precision: usize) -> Self {
        assert!(precision > 0, "series precision must be positive");
        Series {
            coeffs: vec![BigInt::zero(); precision],
        }
    }

    /// The constant series `c + O(q^P)`.
    ///
    /// Panics if `precision` is zero.
    pub fn constant(c: impl Into<BigInt>, precision: usize) -> Self {
        let mut s = Series::zero(precision);
        s.coeffs[0] = c.into();
        s
    }

    pub fn one(precision: usize) -> Self {
        Series::constant(1, precision)
    }

    pub(crate) fn from_vec_unchecked(coeffs: Vec<BigInt>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Series { coeffs }
    }

    #[inline]
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^n`. Reading beyond the window is an error, never 0.
    pub fn coefficient(&self, n: usize) -> Result<&BigInt, SeriesError> {
        self.coeffs.get(n).ok_or(SeriesError::OutOfWindow {
            exponent: n,
            precision: self.precision(),
        })
    }

    /// Number of nonzero coefficients.
    pub fn support_len(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn add(&self, other: &Series) -> Series {
        let p = self.precision().min(other.precision());
        let coeffs = self.coeffs[..p]
            .iter()
            .zip(&other.coeffs[..p])
            .map(|(a, b)| a + b)
            .collect();
        Series { coeffs }
    }

    pub fn sub(&self, other: &Series) -> Series {
        let p = self.precision().min(other.precision());
        let coeffs = self.coeffs[..p]
            .iter()
            .zip(&other.coeffs[..p])
            .map(|(a, b)| a - b)
            .collect();
        Series { coeffs }
    }

    pub fn neg(&self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Truncated product; precision is the smaller operand precision.
    pub fn mul(&self, other: &Series) -> Series {
        let p = self.precision().min(other.precision());
        let (lhs, rhs) = (&self.coeffs[..p], &other.coeffs[..p]);
        let (nnz_l, nnz_r) = (count_nonzero(lhs), count_nonzero(rhs));
        // Iterate the outer loop over the sparser operand.
        let (sparse, dense, nnz) = if nnz_l <= nnz_r {
            (lhs, rhs, nnz_l)
        } else {
            (rhs, lhs, nnz_r)
        };
        if nnz == 0 {
            return Series::zero(p);
        }

        if let (Some(a), Some(b)) = (to_i64_vec(sparse), to_i64_vec(dense)) {
            // Every output coefficient is a sum of at most `nnz` products, so
            // this bound covers all partial sums as well.
            let bound = max_abs(&a)
                .checked_mul(max_abs(&b))
                .and_then(|m| m.checked_mul(nnz as u128));
            match bound {
                Some(bound) if bound <= i64::MAX as u128 => {
                    return Series::from_vec_unchecked(
                        convolve_i64(&a, &b).into_iter().map(BigInt::from).collect(),
                    );
                }
                Some(bound) if bound <= i128::MAX as u128 => {
                    return Series::from_vec_unchecked(
                        convolve_i128(&a, &b).into_iter().map(BigInt::from).collect(),
                    );
                }
                _ => {}
            }
        }
        Series::from_vec_unchecked(convolve_big(sparse, dense))
    }

    /// `c * q^s * self`. The window grows by `s`: the low `s` coefficients
    /// are exactly zero.
    pub fn monomial_scale(&self, c: &BigInt, s: usize) -> Series {
        let mut coeffs = Vec::with_capacity(self.precision() + s);
        coeffs.resize(s, BigInt::zero());
        coeffs.extend(self.coeffs.iter().map(|a| a * c));
        Series { coeffs }
    }

    /// Replaces `q` by `q^k`. Output precision is `k*(P-1) + 1`.
    pub fn substitute_power(&self, k: usize) -> Result<Series, SeriesError> {
        if k == 0 {
            return Err(SeriesError::InvalidArgument(
                "substitution power must be at least 1".into(),
            ));
        }
        if k == 1 {
            return Ok(self.clone());
        }
        let precision = k * (self.precision() - 1) + 1;
        let mut coeffs = vec![BigInt::zero(); precision];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Ok(Series { coeffs })
    }

    /// The series `sum_n a[m*n + r] q^n`. Output precision is
    /// `ceil((P - r) / m)`.
    pub fn extract_progression(&self, m: usize, r: usize) -> Result<Series, SeriesError> {
        if m == 0 {
            return Err(SeriesError::InvalidArgument("modulus must be at least 1".into()));
        }
        if r >= m {
            return Err(SeriesError::InvalidArgument(format!(
                "residue {r} is not reduced modulo {m}"
            )));
        }
        if r >= self.precision() {
            return Err(SeriesError::OutOfWindow {
                exponent: r,
                precision: self.precision(),
            });
        }
        let coeffs = self.coeffs[r..].iter().step_by(m).cloned().collect();
        Ok(Series { coeffs })
    }

    /// Divides by `q^s`, discarding the `s` lowest coefficients.
    pub fn shift_down(&self, s: usize) -> Result<Series, SeriesError> {
        if s >= self.precision() {
            return Err(SeriesError::OutOfWindow {
                exponent: s,
                precision: self.precision(),
            });
        }
        Ok(Series {
            coeffs: self.coeffs[s..].to_vec(),
        })
    }

    pub fn truncate(&self, order: usize) -> Result<Series, SeriesError> {
        if order == 0 {
            return Err(SeriesError::ZeroPrecision);
        }
        if order > self.precision() {
            return Err(SeriesError::OutOfWindow {
                exponent: order - 1,
                precision: self.precision(),
            });
        }
        Ok(Series {
            coeffs: self.coeffs[..order].to_vec(),
        })
    }

    /// Compares coefficients for all exponents below `order`.
    pub fn equal_to_order(&self, other: &Series, order: usize) -> Result<Comparison, SeriesError> {
        let common = self.precision().min(other.precision());
        if order == 0 {
            return Err(SeriesError::ZeroPrecision);
        }
        if order > common {
            return Err(SeriesError::OutOfWindow {
                exponent: order - 1,
                precision: common,
            });
        }
        let mismatch = self.coeffs[..order]
            .iter()
            .zip(&other.coeffs[..order])
            .position(|(a, b)| a != b);
        Ok(match mismatch {
            None => Comparison::Equal,
            Some(e) => Comparison::Differs {
                exponent: e,
                left: self.coeffs[e].clone(),
                right: other.coeffs[e].clone(),
            },
        })
    }
}

fn count_nonzero(c: &[BigInt]) -> usize {
    c.iter().filter(|x| !x.is_zero()).count()
}

fn to_i64_vec(c: &[BigInt]) -> Option<Vec<i64>> {
    c.iter().map(|x| x.to_i64()).collect()
}

fn max_abs(c: &[i64]) -> u128 {
    c.iter().map(|x| x.unsigned_abs() as u128).max().unwrap_or(0)
}

fn convolve_i64(sparse: &[i64], dense: &[i64]) -> Vec<i64> {
    let p = sparse.len();
    let mut out = vec![0i64; p];
    for (i, &x) in sparse.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (o, &y) in out[i..].iter_mut().zip(&dense[..p - i]) {
            *o += x * y;
        }
    }
    out
}

fn convolve_i128(sparse: &[i64], dense: &[i64]) -> Vec<i128> {
    let p = sparse.len();
    let mut out = vec![0i128; p];
    for (i, &x) in sparse.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let x = x as i128;
        for (o, &y) in out[i..].iter_mut().zip(&dense[..p - i]) {
            *o += x * y as i128;
        }
    }
    out
}

fn convolve_big(sparse: &[BigInt], dense: &[BigInt]) -> Vec<BigInt> {
    let p = sparse.len();
    let mut out = vec![BigInt::zero(); p];
    for (i, x) in sparse.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out[i..].iter_mut().zip(&dense[..p - i]) {
            if !y.is_zero() {
                *o += x * y;
            }
        }
    }
    out
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        Series::add(self, rhs)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        Series::sub(self, rhs)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        Series::mul(self, rhs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::neg(self)
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series(")?;
        f.debug_list().entries(&self.coeffs).finish()?;
        write!(f, ", P={})", self.precision())
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = e == 0 || mag != BigInt::from(1);
            if show_mag {
                write!(f, "{mag}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.precision())
    }
}
