//! Scalar arithmetic shared by every computation in the crate.
//!
//! A computation runs entirely in one of two modes: exact rationals
//! ([`Rational`]) or binary floats (`f64`). Generic code is written against
//! the [`Scalar`] trait; the [`Mode`] enum selects the instantiation at run
//! time.

mod expr;
mod jet;
mod parse;

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use expr::{Expr, Func, Singularity, SingularityKind};
pub use jet::{Jet, JET_ORDER};
pub use parse::{parse_f, ParseError};

/// Arbitrary-precision rational number.
pub type Rational = num::BigRational;

/// Default absolute tolerance for float mode.
pub const DEFAULT_FLOAT_TOLERANCE: f64 = 1e-9;

static FLOAT_TOLERANCE: OnceLock<f64> = OnceLock::new();

/// Global float tolerance. Reads `ECS_LAB_TOL` once, falling back to 1e-9.
pub fn float_tolerance() -> f64 {
    *FLOAT_TOLERANCE.get_or_init(|| {
        std::env::var("ECS_LAB_TOL")
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
            .unwrap_or(DEFAULT_FLOAT_TOLERANCE)
    })
}

/// Arithmetic mode of a whole run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(format!("unknown mode `{other}` (expected exact|float)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("`{0}` has no exact rational value; use float mode")]
    Transcendental(&'static str),
    #[error("rational power {exponent} of {base} is irrational")]
    Irrational { base: String, exponent: String },
    #[error("{0}")]
    Domain(String),
}

/// Field operations plus the handful of analytic functions the expression
/// language needs.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    /// Exact zero test. Used to guard divisions.
    fn is_zero(&self) -> bool;

    /// Zero up to the mode's tolerance: exact in exact mode, `|x| <= tol` in
    /// float mode.
    fn is_negligible(&self) -> bool;

    /// Sign as -1, 0 or 1, with the tolerance of [`Scalar::is_negligible`].
    fn sign(&self) -> i32 {
        if self.is_negligible() {
            0
        } else if self.to_f64() > 0.0 {
            1
        } else {
            -1
        }
    }

    fn abs(&self) -> Self {
        if self.to_f64() < 0.0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError>;

    fn recip(&self) -> Result<Self, ScalarError> {
        Self::one().checked_div(self)
    }

    fn powi(&self, k: i64) -> Result<Self, ScalarError> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc * &base;
        }
        Ok(acc)
    }

    /// `self^(num/den)` for a positive base.
    fn rational_pow(&self, exponent: &Rational) -> Result<Self, ScalarError>;

    fn ln(&self) -> Result<Self, ScalarError>;
    fn exp(&self) -> Result<Self, ScalarError>;
    fn sin(&self) -> Result<Self, ScalarError>;
    fn cos(&self) -> Result<Self, ScalarError>;
    fn pi() -> Result<Self, ScalarError>;

    fn div_i64(&self, d: i64) -> Self {
        self.checked_div(&Self::from_i64(d))
            .expect("nonzero integer divisor")
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_negligible(&self) -> bool {
        Zero::is_zero(self)
    }

    fn sign(&self) -> i32 {
        if Zero::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if Zero::is_zero(rhs) {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self / rhs)
    }

    fn rational_pow(&self, exponent: &Rational) -> Result<Self, ScalarError> {
        if !self.is_positive() {
            return Err(ScalarError::Domain(format!(
                "rational power of non-positive value {self}"
            )));
        }
        let den = exponent.denom().to_u32().ok_or_else(|| {
            ScalarError::Domain(format!("root index of {exponent} is too large"))
        })?;
        let root = exact_root(self, den).ok_or_else(|| ScalarError::Irrational {
            base: self.to_string(),
            exponent: exponent.to_string(),
        })?;
        let num = exponent.numer().to_i64().ok_or_else(|| {
            ScalarError::Domain(format!("exponent {exponent} is too large"))
        })?;
        root.powi(num)
    }

    fn ln(&self) -> Result<Self, ScalarError> {
        Err(ScalarError::Transcendental("ln"))
    }

    fn exp(&self) -> Result<Self, ScalarError> {
        Err(ScalarError::Transcendental("exp"))
    }

    fn sin(&self) -> Result<Self, ScalarError> {
        Err(ScalarError::Transcendental("sin"))
    }

    fn cos(&self) -> Result<Self, ScalarError> {
        Err(ScalarError::Transcendental("cos"))
    }

    fn pi() -> Result<Self, ScalarError> {
        Err(ScalarError::Transcendental("pi"))
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn is_negligible(&self) -> bool {
        f64::abs(*self) <= float_tolerance()
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if *rhs == 0.0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self / rhs)
    }

    fn rational_pow(&self, exponent: &Rational) -> Result<Self, ScalarError> {
        if *self <= 0.0 {
            return Err(ScalarError::Domain(format!(
                "rational power of non-positive value {self}"
            )));
        }
        Ok(self.powf(rational_to_f64(exponent)))
    }

    fn ln(&self) -> Result<Self, ScalarError> {
        if *self <= 0.0 {
            return Err(ScalarError::Domain(format!("ln of non-positive value {self}")));
        }
        Ok(f64::ln(*self))
    }

    fn exp(&self) -> Result<Self, ScalarError> {
        Ok(f64::exp(*self))
    }

    fn sin(&self) -> Result<Self, ScalarError> {
        Ok(f64::sin(*self))
    }

    fn cos(&self) -> Result<Self, ScalarError> {
        Ok(f64::cos(*self))
    }

    fn pi() -> Result<Self, ScalarError> {
        Ok(std::f64::consts::PI)
    }
}

/// Nearest-float conversion that survives huge numerators and denominators.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale both parts down by a common power of two.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
    let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// Exact `k`-th root of a positive rational, if it is rational.
fn exact_root(r: &Rational, k: u32) -> Option<Rational> {
    if k == 1 {
        return Some(r.clone());
    }
    let root_int = |v: &BigInt| -> Option<BigInt> {
        let c = v.nth_root(k);
        (num::pow(c.clone(), k as usize) == *v).then_some(c)
    };
    Some(Rational::new(root_int(r.numer())?, root_int(r.denom())?))
}

/// Rational from a pair of integers.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Converts a rational into the run's scalar type.
pub fn lift<S: Scalar>(r: &Rational) -> S {
    S::from_rational(r)
}
