//! Local homogeneity of the profile `f`: the test `(|f|^{-1/2})¨ = 0`, the
//! canonical form `ε(t − b)^{-2}`, and explicit dilation witnesses.

use serde::Serialize;
use thiserror::Error;

use crate::model::{Bound, Interval, ModelData};
use crate::pseudo_linear::{conjugacy_solve, Conjugacy, LinearError, Obstruction};
use crate::scalar::{int, Expr, Rational, Scalar, ScalarError};
use crate::symmetry::{IsometryWitness, SymmetryError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomogeneityError {
    #[error("f vanishes at every sample point")]
    AllSamplesZero,
    #[error("no sample points")]
    NoSamples,
    #[error("sample t = {0} is not in the interval")]
    SampleOutside(String),
    #[error("f is not in canonical form ε(t − b)^-2 on a half-line ending at b: {0}")]
    NonCanonical(String),
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

/// `f = ε(t − b)^{-2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    #[serde(serialize_with = "as_string")]
    pub epsilon: Rational,
    #[serde(serialize_with = "as_string")]
    pub b: Rational,
}

fn as_string<Ser: serde::Serializer>(r: &Rational, s: Ser) -> Result<Ser::Ok, Ser::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomogeneityVerdict {
    /// Sample points where `f = 0`.
    pub f_vanishes: Vec<String>,
    /// `f ≠ 0` on the interval and `(|f|^{-1/2})¨ = 0`.
    pub criterion_ii: bool,
    /// `(|f|^{-1/2})¨ = 0` wherever `f ≠ 0`.
    pub criterion_iii: bool,
    pub canonical: Option<CanonicalForm>,
    /// Max of `|(|f|^{-1/2})¨|` over the nonzero samples.
    pub second_derivative_residual: f64,
    /// Max of `|3ḟ² − 2ff̈| / 4` over the nonzero samples.
    pub numerator_residual: f64,
    /// No zero of `f` found on the interval.
    pub zero_free: bool,
}

/// `(|f|^{-1/2})¨ = |f|^{-5/2} (3ḟ² − 2ff̈) / 4`; returns the value and the
/// numerator `(3ḟ² − 2ff̈) / 4`.
pub fn inverse_sqrt_second_derivative<S: Scalar>(f: &Expr, t: &S) -> Result<(f64, S), ScalarError> {
    let j = f.eval_jet(t)?;
    let (v, d1, d2) = (j.value().clone(), j.derivative(1).clone(), j.derivative(2).clone());
    let numerator = (d1.clone() * &d1 * S::from_i64(3) - v.clone() * &d2 * S::from_i64(2)).div_i64(4);
    let value = v.to_f64().abs().powf(-2.5) * numerator.to_f64();
    Ok((value, numerator))
}

/// Evaluates the homogeneity test on the samples.
pub fn homogeneity_criterion<S: Scalar>(
    f: &Expr,
    interval: &Interval,
    samples: &[S],
) -> Result<HomogeneityVerdict, HomogeneityError> {
    if samples.is_empty() {
        return Err(HomogeneityError::NoSamples);
    }
    let mut zeros = Vec::new();
    let mut second = 0.0f64;
    let mut numerator = 0.0f64;
    let mut all_flat = true;
    for t in samples {
        if !interval.contains(t) {
            return Err(HomogeneityError::SampleOutside(t.to_string()));
        }
        if f.eval(t)?.is_negligible() {
            zeros.push(t.to_string());
            continue;
        }
        let (v, num) = inverse_sqrt_second_derivative(f, t)?;
        all_flat &= num.is_negligible();
        second = second.max(v.abs());
        numerator = numerator.max(num.to_f64().abs());
    }
    if zeros.len() == samples.len() {
        return Err(HomogeneityError::AllSamplesZero);
    }
    let canonical = detect_canonical(f).filter(|c| !interval.contains(&c.b));
    let zero_free = zeros.is_empty() && (canonical.is_some() || scan_zero_free(f, interval));
    let criterion_iii = all_flat;
    Ok(HomogeneityVerdict {
        f_vanishes: zeros,
        criterion_ii: criterion_iii && zero_free,
        criterion_iii,
        canonical: canonical.filter(|_| criterion_iii),
        second_derivative_residual: second,
        numerator_residual: numerator,
        zero_free,
    })
}

/// Looks for zeros or sign changes of `f` on a fine grid of the interval.
fn scan_zero_free(f: &Expr, interval: &Interval) -> bool {
    const CELLS: usize = 4096;
    let (lo, hi) = interval.scan_window();
    let mut prev: Option<f64> = None;
    for k in 1..CELLS {
        let t = lo + (hi - lo) * k as f64 / CELLS as f64;
        let Ok(v) = f.eval::<f64>(&t) else { continue };
        if v == 0.0 || prev.is_some_and(|p| p * v < 0.0) {
            return false;
        }
        prev = Some(v);
    }
    true
}

fn constant(e: &Expr) -> Option<Rational> {
    if !e.is_constant_tree() {
        return None;
    }
    e.eval::<Rational>(&int(0)).ok()
}

/// `e = a t + c` with `a ≠ 0`.
fn affine(e: &Expr) -> Option<(Rational, Rational)> {
    let (a, c) = match e {
        Expr::Var => (int(1), int(0)),
        Expr::Neg(x) => {
            let (a, c) = affine(x)?;
            (-a, -c)
        }
        Expr::Add(x, y) | Expr::Sub(x, y) => {
            let sign = if matches!(e, Expr::Sub(..)) { int(-1) } else { int(1) };
            let (a1, c1) = affine(x).or_else(|| constant(x).map(|c| (int(0), c)))?;
            let (a2, c2) = affine(y).or_else(|| constant(y).map(|c| (int(0), c)))?;
            (a1 + sign.clone() * a2, c1 + sign * c2)
        }
        Expr::Mul(x, y) => match (constant(x), constant(y)) {
            (Some(k), None) => {
                let (a, c) = affine(y)?;
                (k.clone() * a, k * c)
            }
            (None, Some(k)) => {
                let (a, c) = affine(x)?;
                (k.clone() * a, k * c)
            }
            _ => return None,
        },
        Expr::Div(x, y) => {
            let k = Scalar::recip(&constant(y)?).ok()?;
            let (a, c) = affine(x)?;
            (k.clone() * a, k * c)
        }
        Expr::Pow(x, 1) => affine(x)?,
        _ => return None,
    };
    (!Scalar::is_zero(&a)).then_some((a, c))
}

/// `e = k (t − b)^{-2}` structurally, as `(k, b)`.
fn structural(e: &Expr) -> Option<(Rational, Rational)> {
    let from_affine = |a: Rational, c: Rational| {
        let eps = Scalar::recip(&(a.clone() * &a)).ok()?;
        Some((eps, -(c / a)))
    };
    match e {
        Expr::Pow(x, -2) => {
            let (a, c) = affine(x)?;
            from_affine(a, c)
        }
        Expr::Neg(x) => structural(x).map(|(k, b)| (-k, b)),
        Expr::Mul(x, y) => match (constant(x), constant(y)) {
            (Some(k), None) => structural(y).map(|(e, b)| (k * e, b)),
            (None, Some(k)) => structural(x).map(|(e, b)| (k * e, b)),
            _ => None,
        },
        Expr::Div(x, y) => {
            if let Some(k) = constant(y) {
                let (e, b) = structural(x)?;
                return Some((e / k, b));
            }
            let k = constant(x)?;
            let Expr::Pow(base, 2) = &**y else { return None };
            let (a, c) = affine(base)?;
            let (e, b) = from_affine(a, c)?;
            Some((k * e, b))
        }
        _ => None,
    }
}

/// Detects `f = ε(t − b)^{-2}` from the expression tree, then confirms the
/// match numerically at five points away from `b`.
pub fn detect_canonical(f: &Expr) -> Option<CanonicalForm> {
    let (epsilon, b) = structural(f)?;
    if Scalar::is_zero(&epsilon) {
        return None;
    }
    for k in [1, 2, 3, 5, 7] {
        for sign in [1, -1] {
            let t = b.clone() + Rational::new(k.into(), 3.into()) * int(sign);
            let expected = epsilon.clone() * Scalar::powi(&(t.clone() - &b), -2).ok()?;
            match f.eval::<Rational>(&t) {
                Ok(v) if v == expected => {}
                Ok(_) => return None,
                Err(_) => {
                    let v = f.eval::<f64>(&t.to_f64()).ok()?;
                    if (v - expected.to_f64()).abs() > 1e-12 * (1.0 + v.abs()) {
                        return None;
                    }
                }
            }
        }
    }
    Some(CanonicalForm { epsilon, b })
}

/// For `f = ε(t − b)^{-2}` on a half-line ending at `b`, the dilation
/// `t ↦ q(t − b) + b`, `s ↦ s/q`, `x ↦ Bx` with `B A B⁻¹ = q² A` is an
/// isometry. Returns it, or the reason there is none.
pub fn build_homogeneous_witness(model: &ModelData, q: &Rational) -> Result<IsometryWitness<Rational>, HomogeneityError> {
    let canonical = detect_canonical(model.f())
        .ok_or_else(|| HomogeneityError::NonCanonical(format!("f = {}", model.f_text())))?;
    let endpoint = Bound::Finite(canonical.b.clone());
    let half_line = match (model.interval().lo(), model.interval().hi()) {
        (lo, Bound::PosInf) => *lo == endpoint,
        (Bound::NegInf, hi) => *hi == endpoint,
        _ => false,
    };
    if !half_line {
        return Err(HomogeneityError::NonCanonical(format!(
            "interval {} is not a half-line ending at b = {}",
            model.interval(),
            canonical.b
        )));
    }
    match conjugacy_solve(model.gram(), model.endomorphism(), q)? {
        Conjugacy::Witness(b) => {
            let p = canonical.b.clone() * (int(1) - q);
            Ok(IsometryWitness::new(model.gram(), q.clone(), p, int(0), b.into_matrix())?)
        }
        Conjugacy::NoSolution(o @ Obstruction::Spectral { .. }) => Err(HomogeneityError::NoWitness(o.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::model::ProbeFlags;
    use crate::scalar::{parse_f, ratio};
    use crate::symmetry::verify_isometry;

    fn samples() -> Vec<Rational> {
        [1, 2, 3, 7, 11].iter().map(|&k| ratio(k, 2)).collect()
    }

    fn nilpotent(f: &str, interval: Interval) -> ModelData {
        let g = Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        let a = Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(0), int(0)]]).unwrap();
        ModelData::new(g, a, f, interval, ProbeFlags::default()).unwrap()
    }

    #[test]
    fn inverse_square_is_homogeneous() {
        let v = homogeneity_criterion(&parse_f("t^-2").unwrap(), &Interval::positive(), &samples()).unwrap();
        assert!(v.criterion_ii && v.criterion_iii);
        assert_eq!(v.canonical, Some(CanonicalForm { epsilon: int(1), b: int(0) }));
        assert_eq!(v.numerator_residual, 0.0);
    }

    #[test]
    fn linear_is_not() {
        let v = homogeneity_criterion(&parse_f("t").unwrap(), &Interval::positive(), &samples()).unwrap();
        assert!(!v.criterion_iii && !v.criterion_ii);
        // (t^{-1/2})¨ = (3/4) t^{-5/2}.
        let (d2, num) = inverse_sqrt_second_derivative(&parse_f("t").unwrap(), &int(1)).unwrap();
        assert_eq!(num, ratio(3, 4));
        assert!((d2 - 0.75).abs() < 1e-15);
    }

    #[test]
    fn shifted_canonical_forms() {
        for (text, eps, b) in [
            ("4*(t-3)^-2", int(4), int(3)),
            ("4/(t-3)^2", int(4), int(3)),
            ("-(2*t+1)^-2", ratio(-1, 4), ratio(-1, 2)),
            ("(t/2 - 1)^-2 / 3", ratio(4, 3), int(2)),
        ] {
            let c = detect_canonical(&parse_f(text).unwrap()).unwrap_or_else(|| panic!("{text}"));
            assert_eq!((c.epsilon, c.b), (eps, b), "{text}");
        }
        assert!(detect_canonical(&parse_f("t^-3").unwrap()).is_none());
        assert!(detect_canonical(&parse_f("t^-2 + 1").unwrap()).is_none());
    }

    #[test]
    fn zeros_are_excluded_from_the_test() {
        let f = parse_f("t").unwrap();
        let v = homogeneity_criterion(&f, &Interval::real_line(), &[int(0), int(1)]).unwrap();
        assert_eq!(v.f_vanishes, vec!["0".to_string()]);
        assert!(!v.criterion_ii);
        assert_eq!(
            homogeneity_criterion(&f, &Interval::real_line(), &[int(0)]),
            Err(HomogeneityError::AllSamplesZero)
        );
    }

    #[test]
    fn witness_for_canonical_model() {
        let m = nilpotent("t^-2", Interval::positive());
        let w = build_homogeneous_witness(&m, &int(2)).unwrap();
        assert_eq!(w.p, int(0));
        assert_eq!(*w.b.matrix(), Matrix::diagonal(&[int(2), ratio(1, 2)]));
        let pts: Vec<_> = samples()
            .into_iter()
            .map(|t| crate::model::ChartPoint::new(t, int(3), vec![int(1), int(-1)]))
            .collect();
        assert_eq!(verify_isometry(&m.view(), &w, &pts).unwrap(), int(0));
        let id = build_homogeneous_witness(&m, &int(1)).unwrap();
        assert_eq!(id, IsometryWitness::identity(2));
    }

    #[test]
    fn witness_with_shifted_pole() {
        let lo = Interval::new(Bound::Finite(int(3)), Bound::PosInf).unwrap();
        let m = nilpotent("4*(t-3)^-2", lo);
        let w = build_homogeneous_witness(&m, &int(3)).unwrap();
        assert_eq!(w.p, int(-6));
        let pts: Vec<_> = [4, 5, 9]
            .iter()
            .map(|&t| crate::model::ChartPoint::new(int(t), int(1), vec![int(2), int(1)]))
            .collect();
        assert_eq!(verify_isometry(&m.view(), &w, &pts).unwrap(), int(0));
    }

    #[test]
    fn definite_diagonal_model_has_no_witness() {
        let g = Matrix::identity(2);
        let a = Matrix::diagonal(&[int(1), int(-1)]);
        let m = ModelData::new(g, a, "t^-2", Interval::positive(), ProbeFlags::default()).unwrap();
        assert!(matches!(build_homogeneous_witness(&m, &int(2)), Err(HomogeneityError::NoWitness(_))));
        let linear = nilpotent("t", Interval::positive());
        assert!(matches!(build_homogeneous_witness(&linear, &int(2)), Err(HomogeneityError::NonCanonical(_))));
    }
}
