//! Periods `∫_{t0}^{γ(t0)} χ dt` along the loop generated by a deck
//! transformation, and invariant primitives `μ(t) = ∫_{t0}^t χ`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::model::Interval;
use crate::scalar::{int, Expr, Rational, Scalar, SingularityKind};

use super::SymmetryError;

/// Absolute tolerance of the adaptive quadrature.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Periods with modulus at most this are treated as zero.
pub const PERIOD_TOL: f64 = 1e-10;

const MAX_DEPTH: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeriodMethod {
    /// Closed-form antiderivative of a Laurent polynomial.
    Antiderivative,
    AdaptiveSimpson,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Period {
    pub value: f64,
    /// Exact value, when the antiderivative is rational.
    pub exact: Option<String>,
    pub method: PeriodMethod,
    pub lower: f64,
    pub upper: f64,
}

impl Period {
    /// The class of `χ dt` vanishes on the loop.
    pub fn is_trivial(&self) -> bool {
        self.value.abs() <= PERIOD_TOL
    }
}

/// Coefficients of a Laurent polynomial in `t`, keyed by exponent.
type Laurent = BTreeMap<i64, Rational>;

fn laurent_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = out.entry(ea + eb).or_insert_with(Rational::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn laurent_add(a: &Laurent, b: &Laurent, sign: i64) -> Laurent {
    let mut out = a.clone();
    for (e, c) in b {
        let slot = out.entry(*e).or_insert_with(Rational::zero);
        *slot += c * int(sign);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Rewrites `e` as a Laurent polynomial when its tree only uses `+ − ×`,
/// integer powers, and division by monomials.
fn laurent(e: &Expr) -> Option<Laurent> {
    let constant = |c: Rational| {
        let mut m = Laurent::new();
        if !c.is_zero() {
            m.insert(0, c);
        }
        m
    };
    Some(match e {
        Expr::Const(c) => constant(c.clone()),
        Expr::Var => Laurent::from([(1, int(1))]),
        Expr::Neg(a) => laurent_add(&Laurent::new(), &laurent(a)?, -1),
        Expr::Add(a, b) => laurent_add(&laurent(a)?, &laurent(b)?, 1),
        Expr::Sub(a, b) => laurent_add(&laurent(a)?, &laurent(b)?, -1),
        Expr::Mul(a, b) => laurent_mul(&laurent(a)?, &laurent(b)?),
        Expr::Div(a, b) => {
            let den = laurent(b)?;
            if den.len() != 1 {
                return None;
            }
            let (e, c) = den.into_iter().next()?;
            let inv = Laurent::from([(-e, Scalar::recip(&c).ok()?)]);
            laurent_mul(&laurent(a)?, &inv)
        }
        Expr::Pow(a, k) => {
            let base = laurent(a)?;
            if *k >= 0 {
                let mut acc = constant(int(1));
                for _ in 0..*k {
                    acc = laurent_mul(&acc, &base);
                }
                acc
            } else if base.len() == 1 {
                let (e, c) = base.into_iter().next()?;
                Laurent::from([(e * k, c.powi(*k).ok()?)])
            } else {
                return None;
            }
        }
        Expr::Pi | Expr::RationalPow(..) | Expr::Apply(..) => return None,
    })
}

fn antiderivative_period(poly: &Laurent, t0: &Rational, t1: &Rational) -> Option<(f64, Option<Rational>)> {
    let mut exact = Rational::zero();
    let mut log_coeff = Rational::zero();
    for (e, c) in poly {
        if *e == -1 {
            log_coeff = c.clone();
            continue;
        }
        let k = e + 1;
        let term = (t1.powi(k).ok()? - t0.powi(k).ok()?) * c / int(k);
        exact += term;
    }
    if log_coeff.is_zero() {
        return Some((exact.to_f64(), Some(exact)));
    }
    let ratio = (t1 / t0).to_f64();
    let value = exact.to_f64() + log_coeff.to_f64() * ratio.ln();
    Some((value, None))
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth >= MAX_DEPTH || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
        + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
}

/// Adaptive Simpson quadrature of a smooth `f` on `[a, b]`, to absolute
/// tolerance `tol`. The interval is pre-split into 8 panels so oscillating
/// integrands are not accepted on a coincidental first estimate.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    const PANELS: usize = 8;
    let mut total = 0.0;
    for k in 0..PANELS {
        let lo = a + (b - a) * k as f64 / PANELS as f64;
        let hi = a + (b - a) * (k + 1) as f64 / PANELS as f64;
        let (flo, fmid, fhi) = (f(lo), f(0.5 * (lo + hi)), f(hi));
        let whole = simpson(lo, hi, flo, fmid, fhi);
        total += adaptive(f, lo, hi, flo, fmid, fhi, whole, tol / PANELS as f64, 0);
    }
    total
}

/// `∫_{t0}^{t1} χ dt`, exactly for Laurent polynomials and by adaptive
/// Simpson otherwise, split at kinks. Poles in the segment are errors.
pub fn integrate(chi: &Expr, t0: &Rational, t1: &Rational) -> Result<(f64, Option<Rational>, PeriodMethod), SymmetryError> {
    let (lo, hi) = if t0 <= t1 { (t0.to_f64(), t1.to_f64()) } else { (t1.to_f64(), t0.to_f64()) };
    let sign = if t0 <= t1 { 1.0 } else { -1.0 };
    let singular = chi.singularities_in(lo, hi, 2048);
    if let Some(s) = singular.iter().find(|s| s.kind == SingularityKind::Pole) {
        return Err(SymmetryError::SingularSegment(s.t));
    }
    if let Some(poly) = laurent(chi) {
        if let Some((value, exact)) = antiderivative_period(&poly, t0, t1) {
            return Ok((value, exact, PeriodMethod::Antiderivative));
        }
    }
    let f = |t: f64| chi.eval::<f64>(&t).unwrap_or(f64::NAN);
    let mut cuts = vec![lo];
    cuts.extend(singular.iter().map(|s| s.t).filter(|&t| t > lo && t < hi));
    cuts.push(hi);
    let mut total = 0.0;
    let pieces = (cuts.len() - 1) as f64;
    for w in cuts.windows(2) {
        total += adaptive_simpson(&f, w[0], w[1], QUADRATURE_TOL / pieces);
    }
    if !total.is_finite() {
        return Err(SymmetryError::SingularSegment(f64::NAN));
    }
    Ok((sign * total, None, PeriodMethod::AdaptiveSimpson))
}

/// Period of `χ dt` over the fundamental segment `[t0, q·t0 + p]`.
pub fn period_integral(
    chi: &Expr,
    q: &Rational,
    p: &Rational,
    t0: &Rational,
    interval: &Interval,
) -> Result<Period, SymmetryError> {
    let t1 = q * t0 + p;
    for t in [t0, &t1] {
        if !interval.contains(t) {
            return Err(SymmetryError::ImageOutside(format!("segment endpoint {t} is not in {interval}")));
        }
    }
    let (value, exact, method) = integrate(chi, t0, &t1)?;
    Ok(Period {
        value,
        exact: exact.map(|e| e.to_string()),
        method,
        lower: t0.to_f64(),
        upper: t1.to_f64(),
    })
}

/// Invariant primitive `μ(t) = ∫_{t0}^t χ` of a function with zero period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantPrimitive {
    pub period: Period,
    /// Orbit samples `(t, μ(t), μ(γ t))`.
    pub samples: Vec<(f64, f64, f64)>,
    /// Max of `|μ(γ t) − μ(t)|` over the samples.
    pub invariance_residual: f64,
    /// Two sample points with distinct `μ`, when found.
    pub nonconstancy_witness: Option<(f64, f64)>,
    pub constant: bool,
}

/// Number of orbit samples used for the invariance residual.
pub const ORBIT_SAMPLES: usize = 50;

pub fn construct_invariant_primitive(
    chi: &Expr,
    q: &Rational,
    p: &Rational,
    t0: &Rational,
    interval: &Interval,
) -> Result<InvariantPrimitive, SymmetryError> {
    let period = period_integral(chi, q, p, t0, interval)?;
    if !period.is_trivial() {
        return Err(SymmetryError::NonzeroPeriod(period.value));
    }
    let t1 = q * t0 + p;
    let mut samples = Vec::with_capacity(ORBIT_SAMPLES);
    for k in 0..ORBIT_SAMPLES {
        // Points spread over the fundamental segment.
        let t = t0 + (t1.clone() - t0) * Rational::new(k.into(), ORBIT_SAMPLES.into());
        let image = q * &t + p;
        if !interval.contains(&image) {
            return Err(SymmetryError::ImageOutside(format!("orbit point {image} is not in {interval}")));
        }
        let mu = integrate(chi, t0, &t)?.0;
        let mu_image = integrate(chi, t0, &image)?.0;
        samples.push((t.to_f64(), mu, mu_image));
    }
    let invariance_residual = samples.iter().map(|(_, a, b)| (a - b).abs()).fold(0.0, f64::max);
    let nonconstancy_witness = samples
        .iter()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .filter(|s| s.1.abs() > PERIOD_TOL * 100.0)
        .map(|s| (t0.to_f64(), s.0));
    let constant = nonconstancy_witness.is_none();
    Ok(InvariantPrimitive {
        period,
        samples,
        invariance_residual,
        nonconstancy_witness,
        constant,
    })
}

/// `μ` evaluated at one point.
pub fn primitive_at(chi: &Expr, t0: &Rational, t: f64) -> Result<f64, SymmetryError> {
    let r = Rational::from_float(t).ok_or(SymmetryError::SingularSegment(t))?;
    Ok(integrate(chi, t0, &r)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_f;

    const LOG_PERIODIC: &str = "t^-1 * cos(2*pi*ln(t)/ln(2))";

    #[test]
    fn reciprocal_has_log_period() {
        let p = period_integral(&parse_f("t^-1").unwrap(), &int(2), &int(0), &int(1), &Interval::positive()).unwrap();
        assert!((p.value - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(p.method, PeriodMethod::Antiderivative);
        assert!(!p.is_trivial());
    }

    #[test]
    fn polynomial_period_is_exact() {
        let p = period_integral(&parse_f("3*t^2 - t^-2").unwrap(), &int(1), &int(2), &int(1), &Interval::positive())
            .unwrap();
        // [t^3 + 1/t] from 1 to 3 = 27 + 1/3 - 2.
        assert_eq!(p.exact.as_deref(), Some("76/3"));
    }

    #[test]
    fn log_periodic_cosine_has_zero_period() {
        let chi = parse_f(LOG_PERIODIC).unwrap();
        let p = period_integral(&chi, &int(2), &int(0), &int(1), &Interval::positive()).unwrap();
        assert_eq!(p.method, PeriodMethod::AdaptiveSimpson);
        assert!(p.is_trivial(), "{}", p.value);
        let mu = construct_invariant_primitive(&chi, &int(2), &int(0), &int(1), &Interval::positive()).unwrap();
        assert!(mu.invariance_residual < 1e-9);
        assert!(!mu.constant);
        let c = std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI);
        for (t, m, _) in &mu.samples {
            let closed = c * f64::sin(2.0 * std::f64::consts::PI * f64::ln(*t) / std::f64::consts::LN_2);
            assert!((m - closed).abs() < 1e-9);
        }
    }

    #[test]
    fn primitive_rejects_nonzero_period() {
        let err = construct_invariant_primitive(&parse_f("t^-1").unwrap(), &int(2), &int(0), &int(1), &Interval::positive());
        assert!(matches!(err, Err(SymmetryError::NonzeroPeriod(_))));
    }

    #[test]
    fn zero_integrand_is_constant() {
        let mu = construct_invariant_primitive(&parse_f("0").unwrap(), &int(2), &int(0), &int(1), &Interval::positive())
            .unwrap();
        assert!(mu.constant);
        assert_eq!(mu.period.value, 0.0);
    }

    #[test]
    fn pole_in_segment_is_an_error() {
        let err = integrate(&parse_f("(t-2)^-1").unwrap(), &int(1), &int(3));
        assert!(matches!(err, Err(SymmetryError::SingularSegment(_))));
    }

    #[test]
    fn kinks_are_split() {
        let (v, _, m) = integrate(&parse_f("abs(t - 1/3)").unwrap(), &int(0), &int(1)).unwrap();
        assert_eq!(m, PeriodMethod::AdaptiveSimpson);
        assert!((v - (1.0 / 18.0 + 2.0 / 9.0)).abs() < 1e-12);
    }
}
