//! Scaling laws `χ∘γ = q^a χ` along the `t`-action `t ↦ qt + p`.

use serde::Serialize;

use crate::model::ModelData;
use crate::scalar::{ratio, Expr, Jet, Rational, Scalar, ScalarError};

use super::SymmetryError;

/// Functions of `t` built from `f` whose scaling exponents are predicted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Membership {
    /// `f`, exponent −2.
    F,
    /// `ḟ`, exponent −3.
    FDot,
    /// `|f|^{1/2}`, exponent −1.
    SqrtAbsF,
    /// `|ḟ|^{1/3}`, exponent −1.
    CbrtAbsFDot,
}

impl Membership {
    pub const ALL: [Membership; 4] = [
        Membership::F,
        Membership::FDot,
        Membership::SqrtAbsF,
        Membership::CbrtAbsFDot,
    ];

    pub fn exponent(self) -> i64 {
        match self {
            Membership::F => -2,
            Membership::FDot => -3,
            Membership::SqrtAbsF | Membership::CbrtAbsFDot => -1,
        }
    }

    pub fn law(self) -> &'static str {
        match self {
            Membership::F => "f∘γ = q^-2 f",
            Membership::FDot => "ḟ∘γ = q^-3 ḟ",
            Membership::SqrtAbsF => "|f|^(1/2)∘γ = q^-1 |f|^(1/2)",
            Membership::CbrtAbsFDot => "|ḟ|^(1/3)∘γ = q^-1 |ḟ|^(1/3)",
        }
    }

    /// Jet of the function at `t`.
    pub fn jet<S: Scalar>(self, f: &Expr, t: &S) -> Result<Jet<S>, ScalarError> {
        let fj = f.eval_jet(t)?;
        match self {
            Membership::F => Ok(fj),
            Membership::FDot => Ok(fj.shift()),
            Membership::SqrtAbsF => fj.abs()?.rational_pow(&ratio(1, 2)),
            Membership::CbrtAbsFDot => fj.shift().abs()?.rational_pow(&ratio(1, 3)),
        }
    }
}

/// Residual of one scaling law over the samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawResidual {
    pub law: String,
    pub exponent: i64,
    /// Max of `|χ(qt+p) − q^a χ(t)|`.
    pub residual: f64,
    /// True when every evaluation was exact rational arithmetic.
    pub exact: bool,
    pub samples: usize,
}

/// Max over `t` of `|χ^{(k)}(qt+p) − q^{a−k} χ^{(k)}(t)|`, where `chi` returns
/// the jet of `χ`. Evaluates exactly and falls back to floats where an
/// exact value does not exist (irrational roots, transcendental nodes).
pub fn scaling_residual(
    chi: &dyn Fn(&Rational) -> Result<Jet<Rational>, ScalarError>,
    chi_f64: &dyn Fn(&f64) -> Result<Jet<f64>, ScalarError>,
    q: &Rational,
    p: &Rational,
    a: i64,
    k: usize,
    samples: &[Rational],
) -> Result<(f64, bool), SymmetryError> {
    let mut worst = 0.0f64;
    let mut exact = true;
    let factor = q.powi(a - k as i64)?;
    for t in samples {
        let image = q * t + p;
        let exact_pair = chi(&image).and_then(|u| Ok((u, chi(t)?)));
        match exact_pair {
            Ok((u, v)) => {
                let r = u.derivative(k).clone() - factor.clone() * v.derivative(k);
                worst = worst.max(Scalar::abs(&r).to_f64());
            }
            Err(ScalarError::Irrational { .. }) | Err(ScalarError::Transcendental(_)) => {
                exact = false;
                let (tf, imf) = (t.to_f64(), image.to_f64());
                let u = chi_f64(&imf)?;
                let v = chi_f64(&tf)?;
                let r = u.derivative(k) - factor.to_f64() * v.derivative(k);
                worst = worst.max(r.abs());
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((worst, exact))
}

/// The four scaling laws of `f` under `t ↦ qt + p`.
pub fn check_equivariance(
    model: &ModelData,
    q: &Rational,
    p: &Rational,
    samples: &[Rational],
) -> Result<Vec<LawResidual>, SymmetryError> {
    let f = model.f();
    for t in samples {
        let image = q * t + p;
        if !model.interval().contains(&image) || !model.interval().contains(t) {
            return Err(SymmetryError::ImageOutside(format!("t = {t} or its image {image}")));
        }
    }
    Membership::ALL
        .iter()
        .map(|m| {
            let (residual, exact) = scaling_residual(
                &|t| m.jet(f, t),
                &|t| m.jet(f, t),
                q,
                p,
                m.exponent(),
                0,
                samples,
            )?;
            Ok(LawResidual {
                law: m.law().to_string(),
                exponent: m.exponent(),
                residual,
                exact,
                samples: samples.len(),
            })
        })
        .collect()
}

/// Result of the chain law: `χ∘γ = q^a χ` implies `χ̇∘γ = q^{a−1} χ̇`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainLaw {
    pub exponent: i64,
    pub law_residual: f64,
    pub derivative_residual: f64,
    pub exact: bool,
}

pub fn chain_law(chi: &Expr, q: &Rational, p: &Rational, a: i64, samples: &[Rational]) -> Result<ChainLaw, SymmetryError> {
    let (law_residual, e0) = scaling_residual(&|t| chi.eval_jet(t), &|t| chi.eval_jet(t), q, p, a, 0, samples)?;
    let (derivative_residual, e1) =
        scaling_residual(&|t| chi.eval_jet(t), &|t| chi.eval_jet(t), q, p, a, 1, samples)?;
    Ok(ChainLaw {
        exponent: a,
        law_residual,
        derivative_residual,
        exact: e0 && e1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::model::{Interval, ProbeFlags};
    use crate::scalar::{int, parse_f};

    fn m1() -> ModelData {
        let g = Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        let a = Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(0), int(0)]]).unwrap();
        ModelData::new(g, a, "t^-2", Interval::positive(), ProbeFlags::default()).unwrap()
    }

    #[test]
    fn inverse_square_profile_scales() {
        let samples: Vec<Rational> = [1, 2, 5, 7].iter().map(|&k| ratio(k, 3)).collect();
        for q in [int(2), int(3)] {
            let laws = check_equivariance(&m1(), &q, &int(0), &samples).unwrap();
            for law in &laws {
                let tol = if law.exact { 0.0 } else { 1e-14 };
                assert!(law.residual <= tol, "{law:?}");
            }
            // |ḟ|^(1/3) = 2^(1/3) t^-1 has no rational value.
            assert!(!laws[3].exact);
            assert!(laws[0].exact && laws[2].exact);
        }
        let laws = check_equivariance(&m1(), &int(2), &int(1), &samples).unwrap();
        assert!(laws[0].residual > 0.0);
    }

    #[test]
    fn chain_rule_lowers_exponent() {
        let samples: Vec<Rational> = [1, 2, 3].iter().map(|&k| ratio(k, 2)).collect();
        for (text, a) in [("t", 1), ("t^-1", -1), ("3*t^-2", -2)] {
            let c = chain_law(&parse_f(text).unwrap(), &int(3), &int(0), a, &samples).unwrap();
            assert_eq!(c.law_residual, 0.0);
            assert_eq!(c.derivative_residual, 0.0);
            assert!(c.exact);
        }
    }
}
