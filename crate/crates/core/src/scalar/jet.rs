use std::ops::{Add, Mul, Neg, Sub};

use super::{Rational, Scalar, ScalarError};

/// Highest derivative order carried by a [`Jet`].
pub const JET_ORDER: usize = 4;

const BINOMIAL: [[i64; 5]; 5] = [
    [1, 0, 0, 0, 0],
    [1, 1, 0, 0, 0],
    [1, 2, 1, 0, 0],
    [1, 3, 3, 1, 0],
    [1, 4, 6, 4, 1],
];

/// Value of a function of `t` together with its first four derivatives.
///
/// `d[k]` is the k-th derivative (not the Taylor coefficient). Arithmetic
/// applies the Leibniz and Faà di Bruno rules, truncated at order four.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<S> {
    pub d: [S; JET_ORDER + 1],
}

impl<S: Scalar> Jet<S> {
    pub fn new(d: [S; JET_ORDER + 1]) -> Self {
        Self { d }
    }

    pub fn constant(v: S) -> Self {
        Self {
            d: [v, S::zero(), S::zero(), S::zero(), S::zero()],
        }
    }

    /// The identity function `t` at `t0`: `(t0, 1, 0, 0, 0)`.
    pub fn variable(t0: S) -> Self {
        Self {
            d: [t0, S::one(), S::zero(), S::zero(), S::zero()],
        }
    }

    pub fn value(&self) -> &S {
        &self.d[0]
    }

    pub fn derivative(&self, k: usize) -> &S {
        &self.d[k]
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            d: self.d.clone().map(|v| v * c),
        }
    }

    /// Derivative of the jet, shifting orders down; the top slot becomes zero.
    pub fn shift(&self) -> Self {
        let [_, a, b, c, d] = self.d.clone();
        Self {
            d: [a, b, c, d, S::zero()],
        }
    }

    /// `φ∘self`, given `φ, φ', …, φ''''` evaluated at `self.value()`.
    pub fn compose(&self, phi: [S; JET_ORDER + 1]) -> Self {
        let [_, u1, u2, u3, u4] = &self.d;
        let [p0, p1, p2, p3, p4] = phi;
        let u1sq = u1.clone() * u1;
        let d1 = p1.clone() * u1;
        let d2 = p2.clone() * &u1sq + p1.clone() * u2;
        let d3 = p3.clone() * &(u1sq.clone() * u1)
            + S::from_i64(3) * p2.clone() * &(u1.clone() * u2)
            + p1.clone() * u3;
        let d4 = p4 * &(u1sq.clone() * &u1sq)
            + S::from_i64(6) * p3 * &(u1sq * u2)
            + p2 * &(S::from_i64(3) * u2.clone() * u2 + S::from_i64(4) * u1.clone() * u3)
            + p1 * u4;
        Self {
            d: [p0, d1, d2, d3, d4],
        }
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        self.powi(-1)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self.clone() * rhs.recip()?)
    }

    /// Integer power. Negative exponents need a nonzero value.
    pub fn powi(&self, k: i64) -> Result<Self, ScalarError> {
        let u = self.value();
        if k == 0 {
            return Ok(Self::constant(S::one()));
        }
        let mut phi: [S; 5] = std::array::from_fn(|_| S::zero());
        let mut falling = S::one();
        for (j, slot) in phi.iter_mut().enumerate() {
            let e = k - j as i64;
            if j > 0 {
                falling = falling * &S::from_i64(k - j as i64 + 1);
            }
            if falling.is_zero() {
                break;
            }
            *slot = falling.clone() * &u.powi(e)?;
        }
        Ok(self.compose(phi))
    }

    /// `self^r` for a non-integer rational `r`; requires a positive value.
    pub fn rational_pow(&self, r: &Rational) -> Result<Self, ScalarError> {
        let u = self.value();
        if u.sign() <= 0 || u.is_zero() {
            return Err(ScalarError::Domain(format!(
                "rational power {r} of non-positive value {u}"
            )));
        }
        let base = u.rational_pow(r)?;
        let rs = S::from_rational(r);
        let mut phi: [S; 5] = std::array::from_fn(|_| S::zero());
        let mut coeff = S::one();
        let mut upow = base;
        for (j, slot) in phi.iter_mut().enumerate() {
            if j > 0 {
                coeff = coeff * &(rs.clone() - &S::from_i64(j as i64 - 1));
                upow = upow.checked_div(u)?;
            }
            *slot = coeff.clone() * &upow;
        }
        Ok(self.compose(phi))
    }

    /// `|self|`, differentiated as `sign(u) u'`; undefined at zero.
    pub fn abs(&self) -> Result<Self, ScalarError> {
        match self.value().sign() {
            0 => Err(ScalarError::Domain("abs is not differentiable at 0".into())),
            s if s > 0 => Ok(self.clone()),
            _ => Ok(-self.clone()),
        }
    }

    pub fn ln(&self) -> Result<Self, ScalarError> {
        let u = self.value();
        if u.sign() <= 0 || u.is_zero() {
            return Err(ScalarError::Domain(format!("ln of non-positive value {u}")));
        }
        let r = u.recip()?;
        let r2 = r.clone() * &r;
        let r3 = r2.clone() * &r;
        let r4 = r3.clone() * &r;
        Ok(self.compose([
            u.ln()?,
            r,
            -r2,
            S::from_i64(2) * r3,
            S::from_i64(-6) * r4,
        ]))
    }

    pub fn exp(&self) -> Result<Self, ScalarError> {
        let e = self.value().exp()?;
        Ok(self.compose([e.clone(), e.clone(), e.clone(), e.clone(), e]))
    }

    pub fn sin(&self) -> Result<Self, ScalarError> {
        let (s, c) = (self.value().sin()?, self.value().cos()?);
        Ok(self.compose([s.clone(), c.clone(), -s.clone(), -c, s]))
    }

    pub fn cos(&self) -> Result<Self, ScalarError> {
        let (s, c) = (self.value().sin()?, self.value().cos()?);
        Ok(self.compose([c.clone(), -s.clone(), -c.clone(), s, c]))
    }

    pub fn to_f64(&self) -> Jet<f64> {
        Jet {
            d: self.d.clone().map(|v| v.to_f64()),
        }
    }
}

impl<S: Scalar> Add for Jet<S> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let mut d = self.d;
        for (a, b) in d.iter_mut().zip(rhs.d) {
            *a = a.clone() + b;
        }
        Self { d }
    }
}

impl<S: Scalar> Sub for Jet<S> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Self;

    fn neg(self) -> Self {
        Self { d: self.d.map(|v| -v) }
    }
}

impl<S: Scalar> Mul for Jet<S> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let d = std::array::from_fn(|k| {
            let mut acc = S::zero();
            for j in 0..=k {
                let term = self.d[j].clone() * &rhs.d[k - j];
                acc = acc + term * S::from_i64(BINOMIAL[k][j]);
            }
            acc
        });
        Self { d }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn identity_jet() {
        let j = Jet::variable(int(7));
        assert_eq!(j.d, [int(7), int(1), int(0), int(0), int(0)]);
    }

    #[test]
    fn inverse_square_at_one_and_two() {
        // d^k/dt^k t^-2 = (-1)^k (k+1)! t^(-2-k)
        let j = Jet::variable(int(1)).powi(-2).unwrap();
        assert_eq!(j.d, [int(1), int(-2), int(6), int(-24), int(120)]);
        let j = Jet::variable(int(2)).powi(-2).unwrap();
        assert_eq!(
            j.d,
            [ratio(1, 4), ratio(-1, 4), ratio(3, 8), ratio(-3, 4), ratio(15, 8)]
        );
    }

    #[test]
    fn product_rule_matches_power() {
        let t = Jet::variable(ratio(3, 5));
        let cube = t.clone() * t.clone() * t.clone();
        assert_eq!(cube, t.powi(3).unwrap());
    }

    #[test]
    fn sqrt_then_square_is_identity() {
        let t = Jet::variable(int(4));
        let r = t.rational_pow(&ratio(1, 2)).unwrap();
        assert_eq!(r.clone() * r, t);
    }

    #[test]
    fn abs_rejects_zero() {
        assert!(Jet::variable(int(0)).abs().is_err());
        let j = Jet::variable(int(-2)).abs().unwrap();
        assert_eq!(j.d[1], int(-1));
    }

    #[test]
    fn transcendental_jets_in_float() {
        let t = Jet::variable(0.3f64);
        let s = t.sin().unwrap();
        let expected = [0.3f64.sin(), 0.3f64.cos(), -0.3f64.sin(), -0.3f64.cos(), 0.3f64.sin()];
        for (a, b) in s.d.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        let l = Jet::variable(2.0f64).ln().unwrap();
        assert!((l.d[4] + 6.0 / 16.0).abs() < 1e-15);
        assert!(Jet::variable(int(2)).ln().is_err());
    }
}
