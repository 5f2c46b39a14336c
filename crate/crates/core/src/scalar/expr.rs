use std::fmt;

use super::{Jet, Rational, Scalar, ScalarError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Abs,
    Ln,
    Exp,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Ln => "ln",
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "abs" => Func::Abs,
            "ln" => Func::Ln,
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            _ => return None,
        })
    }
}

/// Expression in the single variable `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Rational),
    Var,
    /// The constant π (float mode only).
    Pi,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    /// Non-integer rational power of a positive subexpression.
    RationalPow(Box<Expr>, Rational),
    Apply(Func, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityKind {
    /// Continuous but not differentiable (zero of an `abs` argument).
    Kink,
    /// Pole or domain boundary: the expression is undefined there.
    Pole,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub t: f64,
    pub kind: SingularityKind,
}

impl Expr {
    pub fn t() -> Self {
        Expr::Var
    }

    pub fn constant(r: Rational) -> Self {
        Expr::Const(r)
    }

    pub fn int(v: i64) -> Self {
        Expr::Const(super::int(v))
    }

    pub fn pow(self, k: i64) -> Self {
        Expr::Pow(Box::new(self), k)
    }

    pub fn rational_pow(self, r: Rational) -> Self {
        if r.is_integer() {
            let k = num::ToPrimitive::to_i64(&r.to_integer()).expect("small exponent");
            return Expr::Pow(Box::new(self), k);
        }
        Expr::RationalPow(Box::new(self), r)
    }

    pub fn apply(f: Func, arg: Expr) -> Self {
        Expr::Apply(f, Box::new(arg))
    }

    pub fn abs(self) -> Self {
        Expr::apply(Func::Abs, self)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, rhs: Expr) -> Self {
        Expr::Add(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, rhs: Expr) -> Self {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: Expr) -> Self {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, rhs: Expr) -> Self {
        Expr::Div(Box::new(self), Box::new(rhs))
    }

    /// True when the tree contains no transcendental node.
    pub fn is_rational_function(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var => true,
            Expr::Pi | Expr::Apply(_, _) | Expr::RationalPow(_, _) => false,
            Expr::Neg(a) | Expr::Pow(a, _) => a.is_rational_function(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_rational_function() && b.is_rational_function()
            }
        }
    }

    /// True when `t` does not occur.
    pub fn is_constant_tree(&self) -> bool {
        match self {
            Expr::Var => false,
            Expr::Const(_) | Expr::Pi => true,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::RationalPow(a, _) | Expr::Apply(_, a) => {
                a.is_constant_tree()
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_constant_tree() && b.is_constant_tree()
            }
        }
    }

    /// Value and first four `t`-derivatives at `t0`.
    pub fn eval_jet<S: Scalar>(&self, t0: &S) -> Result<Jet<S>, ScalarError> {
        Ok(match self {
            Expr::Const(r) => Jet::constant(S::from_rational(r)),
            Expr::Var => Jet::variable(t0.clone()),
            Expr::Pi => Jet::constant(S::pi()?),
            Expr::Neg(a) => -a.eval_jet(t0)?,
            Expr::Add(a, b) => a.eval_jet(t0)? + b.eval_jet(t0)?,
            Expr::Sub(a, b) => a.eval_jet(t0)? - b.eval_jet(t0)?,
            Expr::Mul(a, b) => a.eval_jet(t0)? * b.eval_jet(t0)?,
            Expr::Div(a, b) => a.eval_jet(t0)?.checked_div(&b.eval_jet(t0)?)?,
            Expr::Pow(a, k) => a.eval_jet(t0)?.powi(*k)?,
            Expr::RationalPow(a, r) => a.eval_jet(t0)?.rational_pow(r)?,
            Expr::Apply(f, a) => {
                let inner = a.eval_jet(t0)?;
                match f {
                    Func::Abs => inner.abs()?,
                    Func::Ln => inner.ln()?,
                    Func::Exp => inner.exp()?,
                    Func::Sin => inner.sin()?,
                    Func::Cos => inner.cos()?,
                }
            }
        })
    }

    /// Plain value at `t0`. Unlike [`Expr::eval_jet`] this accepts the kink
    /// of `abs` at zero.
    pub fn eval<S: Scalar>(&self, t0: &S) -> Result<S, ScalarError> {
        Ok(match self {
            Expr::Const(r) => S::from_rational(r),
            Expr::Var => t0.clone(),
            Expr::Pi => S::pi()?,
            Expr::Neg(a) => -a.eval(t0)?,
            Expr::Add(a, b) => a.eval(t0)? + b.eval(t0)?,
            Expr::Sub(a, b) => a.eval(t0)? - b.eval(t0)?,
            Expr::Mul(a, b) => a.eval(t0)? * b.eval(t0)?,
            Expr::Div(a, b) => a.eval(t0)?.checked_div(&b.eval(t0)?)?,
            Expr::Pow(a, k) => a.eval(t0)?.powi(*k)?,
            Expr::RationalPow(a, r) => {
                let v = a.eval(t0)?;
                if v.is_zero() && num::Signed::is_positive(r) {
                    S::zero()
                } else {
                    v.rational_pow(r)?
                }
            }
            Expr::Apply(f, a) => {
                let v = a.eval(t0)?;
                match f {
                    Func::Abs => v.abs(),
                    Func::Ln => {
                        if v.sign() <= 0 {
                            return Err(ScalarError::Domain(format!("ln of non-positive value {v}")));
                        }
                        v.ln()?
                    }
                    Func::Exp => v.exp()?,
                    Func::Sin => v.sin()?,
                    Func::Cos => v.cos()?,
                }
            }
        })
    }

    /// Locates the points of `[lo, hi]` where the expression fails to be
    /// smooth, by scanning every guarded subexpression (divisors, bases of
    /// negative or fractional powers, `abs` and `ln` arguments) on a uniform
    /// grid of `resolution` cells and refining sign changes by bisection.
    ///
    /// Domain violations (a `ln` argument or fractional-power base that is
    /// negative on a whole cell) are reported as poles at the cell midpoint.
    pub fn singularities_in(&self, lo: f64, hi: f64, resolution: usize) -> Vec<Singularity> {
        let mut guards = Vec::new();
        self.collect_guards(&mut guards);
        let mut out: Vec<Singularity> = Vec::new();
        let n = resolution.max(1);
        let grid: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
        for (guard, kind, positivity) in guards {
            let vals: Vec<Option<f64>> = grid.iter().map(|t| guard.eval::<f64>(t).ok()).collect();
            for k in 0..n {
                let (a, b) = (grid[k], grid[k + 1]);
                match (vals[k], vals[k + 1]) {
                    (Some(va), _) if va == 0.0 => out.push(Singularity { t: a, kind }),
                    (Some(va), Some(vb)) if va * vb < 0.0 => {
                        out.push(Singularity { t: bisect_root(&guard, a, b, va), kind })
                    }
                    (Some(va), Some(vb)) if positivity && va < 0.0 && vb < 0.0 => out.push(Singularity {
                        t: 0.5 * (a + b),
                        kind: SingularityKind::Pole,
                    }),
                    // The guard itself is undefined here; an inner guard reports it.
                    _ => {}
                }
            }
            if let Some(Some(v)) = vals.last() {
                if *v == 0.0 {
                    out.push(Singularity { t: hi, kind });
                }
            }
        }
        out.sort_by(|a, b| a.t.total_cmp(&b.t));
        out.dedup_by(|a, b| (a.t - b.t).abs() <= 1e-12 * (1.0 + a.t.abs()) && a.kind == b.kind);
        out
    }

    fn collect_guards(&self, out: &mut Vec<(Expr, SingularityKind, bool)>) {
        match self {
            Expr::Const(_) | Expr::Var | Expr::Pi => {}
            Expr::Neg(a) => a.collect_guards(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_guards(out);
                b.collect_guards(out);
            }
            Expr::Div(a, b) => {
                a.collect_guards(out);
                b.collect_guards(out);
                if !b.is_constant_tree() {
                    out.push(((**b).clone(), SingularityKind::Pole, false));
                }
            }
            Expr::Pow(a, k) => {
                a.collect_guards(out);
                if *k < 0 && !a.is_constant_tree() {
                    out.push(((**a).clone(), SingularityKind::Pole, false));
                }
            }
            Expr::RationalPow(a, _) => {
                a.collect_guards(out);
                if !a.is_constant_tree() {
                    out.push(((**a).clone(), SingularityKind::Pole, true));
                }
            }
            Expr::Apply(f, a) => {
                a.collect_guards(out);
                if a.is_constant_tree() {
                    return;
                }
                match f {
                    Func::Abs => out.push(((**a).clone(), SingularityKind::Kink, false)),
                    Func::Ln => out.push(((**a).clone(), SingularityKind::Pole, true)),
                    _ => {}
                }
            }
        }
    }
}

fn bisect_root(guard: &Expr, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        match guard.eval::<f64>(&m) {
            Ok(fm) if fm == 0.0 => return m,
            Ok(fm) if fm * fa < 0.0 => b = m,
            Ok(fm) => {
                a = m;
                fa = fm;
            }
            Err(_) => break,
        }
    }
    0.5 * (a + b)
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(_, _) | Expr::Sub(_, _) => 1,
        Expr::Mul(_, _) | Expr::Div(_, _) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(_, _) | Expr::RationalPow(_, _) => 4,
        Expr::Const(r) if !r.is_integer() || num::Signed::is_negative(r) => 2,
        _ => 5,
    }
}

struct Wrapped<'a>(&'a Expr, u8);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if precedence(self.0) < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(r) => write!(f, "{r}"),
            Expr::Var => write!(f, "t"),
            Expr::Pi => write!(f, "pi"),
            Expr::Neg(a) => write!(f, "-{}", Wrapped(a, 4)),
            Expr::Add(a, b) => write!(f, "{} + {}", Wrapped(a, 1), Wrapped(b, 2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", Wrapped(a, 1), Wrapped(b, 2)),
            Expr::Mul(a, b) => write!(f, "{}*{}", Wrapped(a, 2), Wrapped(b, 3)),
            Expr::Div(a, b) => write!(f, "{}/{}", Wrapped(a, 2), Wrapped(b, 3)),
            Expr::Pow(a, k) => write!(f, "{}^{}", Wrapped(a, 5), k),
            Expr::RationalPow(a, r) => write!(f, "{}^({})", Wrapped(a, 5), r),
            Expr::Apply(func, a) => write!(f, "{}({})", func.name(), a),
        }
    }
}
