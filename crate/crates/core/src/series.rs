//! Truncated multivariate Taylor series around a base point.
//!
//! A [`Series`] stores the coefficients of a polynomial in the displacement
//! variables `u_0 .. u_{k-1}` together with the total degree up to which the
//! coefficients are valid. Derivatives at the base point are read off as
//! `∂^α = α! · coeff(α)`.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// Largest number of displacement variables.
pub const MAX_VARS: usize = 8;

/// Truncation order of a series that is exact (a polynomial known to all
/// orders, e.g. a constant).
pub const EXACT: u8 = u8::MAX;

pub type Mono = [u8; MAX_VARS];

fn degree(m: &Mono) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series<S> {
    order: u8,
    terms: BTreeMap<Mono, S>,
}

impl<S: Scalar> Series<S> {
    pub fn zero() -> Self {
        Series {
            order: EXACT,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: S) -> Self {
        let mut s = Self::zero();
        s.insert([0; MAX_VARS], c);
        s
    }

    /// `c + u_var`.
    pub fn variable(var: usize, c: S) -> Self {
        let mut s = Self::constant(c);
        let mut m = [0; MAX_VARS];
        m[var] = 1;
        s.insert(m, S::one());
        s
    }

    /// Builds a series from `(monomial, coefficient)` pairs, valid to `order`.
    pub fn from_terms(order: u8, terms: impl IntoIterator<Item = (Mono, S)>) -> Self {
        let mut s = Series {
            order,
            terms: BTreeMap::new(),
        };
        for (m, c) in terms {
            if degree(&m) <= order as u32 {
                s.accumulate(m, c);
            }
        }
        s
    }

    fn insert(&mut self, m: Mono, c: S) {
        if !c.is_zero() {
            self.terms.insert(m, c);
        }
    }

    fn accumulate(&mut self, m: Mono, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    /// True when no coefficient survives (the series is zero up to its order).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Value at the base point.
    pub fn value(&self) -> S {
        self.coeff(&[0; MAX_VARS])
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> S {
        let mut best = S::zero();
        for c in self.terms.values() {
            let a = c.abs();
            if a.to_f64() > best.to_f64() {
                best = a;
            }
        }
        best
    }

    /// Drops every term of degree above `order`.
    pub fn truncate(&self, order: u8) -> Self {
        let order = order.min(self.order);
        Series {
            order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| degree(m) <= order as u32)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Partial derivative in displacement variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let order = if self.order == EXACT {
            EXACT
        } else {
            self.order.saturating_sub(1)
        };
        let mut out = Series {
            order,
            terms: BTreeMap::new(),
        };
        if self.order == 0 {
            out.terms.clear();
            return out;
        }
        for (m, c) in &self.terms {
            if m[var] == 0 {
                continue;
            }
            let mut d = *m;
            d[var] -= 1;
            if degree(&d) <= order as u32 {
                out.accumulate(d, c.clone() * &S::from_i64(m[var] as i64));
            }
        }
        out
    }

    /// The mixed partial `∂^α` at the base point, `α! · coeff(α)`.
    pub fn partial_at_base(&self, alpha: &Mono) -> S {
        let mut fact: i64 = 1;
        for &e in alpha {
            for k in 2..=e as i64 {
                fact *= k;
            }
        }
        self.coeff(alpha) * &S::from_i64(fact)
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Series {
                order: self.order,
                terms: BTreeMap::new(),
            };
        }
        Series {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.clone() * k))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.truncate(rhs.order);
        for (m, c) in &rhs.terms {
            if degree(m) <= out.order as u32 {
                out.accumulate(*m, c.clone());
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Lowest degree present, or `None` for the zero series.
    fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(degree).min()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (Some(va), Some(vb)) = (self.valuation(), rhs.valuation()) else {
            return Series {
                order: self.order.min(rhs.order),
                terms: BTreeMap::new(),
            };
        };
        let bound = |o: u8, v: u32| -> u32 {
            if o == EXACT {
                u32::MAX
            } else {
                o as u32 + v
            }
        };
        let order = bound(self.order, vb).min(bound(rhs.order, va)).min(EXACT as u32) as u8;
        let mut out = Series {
            order,
            terms: BTreeMap::new(),
        };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut m = [0u8; MAX_VARS];
                for k in 0..MAX_VARS {
                    m[k] = ma[k] + mb[k];
                }
                if order == EXACT || degree(&m) <= order as u32 {
                    out.accumulate(m, ca.clone() * cb);
                }
            }
        }
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Series<T> {
        Series::from_terms(self.order, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Evaluates the truncated polynomial at displacement `u`.
    pub fn eval(&self, u: &[S]) -> S {
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (k, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    term = term * &u[k];
                }
            }
            acc = acc + term;
        }
        acc
    }
}

/// Univariate Taylor polynomial `Σ_k d_k / k! · u_var^k` from derivative values.
pub fn univariate<S: Scalar>(var: usize, derivs: &[S], order: u8) -> Series<S> {
    let mut fact = S::one();
    let mut terms = Vec::new();
    for (k, d) in derivs.iter().enumerate().take(order as usize + 1) {
        if k > 0 {
            fact = fact * &S::from_i64(k as i64);
        }
        let mut m = [0; MAX_VARS];
        m[var] = k as u8;
        terms.push((m, d.checked_div(&fact).expect("factorial is nonzero")));
    }
    Series::from_terms(order, terms)
}

/// Monomial with a single variable raised to `power`.
pub fn mono(var: usize, power: u8) -> Mono {
    let mut m = [0; MAX_VARS];
    m[var] = power;
    m
}
