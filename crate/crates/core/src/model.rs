//! The Roter metric `g = κ dt² + dt ds + δ` on `I × ℝ × V`, with
//! `κ(t, s, x) = f(t)⟨x,x⟩ + ⟨Ax,x⟩`.
//!
//! Chart coordinates are indexed from zero: slot `0` is `t`, slots
//! `1..=n-2` are the linear coordinates of `V`, and slot `n-1` is
//! `s/2`. In these coordinates `g_00 = κ`, `g_{0,n-1} = 1`, `g_ij = ⟨e_i,e_j⟩`
//! and every other component vanishes.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{Matrix, MatrixError};
use crate::pseudo_linear::{validate_endomorphism, Endomorphism, InnerProduct, LinearError, Signature};
use crate::scalar::{parse_f, rational_to_f64, Expr, Jet, ParseError, Rational, Scalar, ScalarError, SingularityKind};
use crate::series::{mono, univariate, Series, EXACT, MAX_VARS};
use crate::tensor::{Slot, TensorValue};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("dimension n = {0} is not supported (need 4 <= n <= {MAX_VARS})")]
    Dimension(usize),
    #[error("interval ({0}, {1}) is empty")]
    EmptyInterval(String, String),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error("endomorphism A is not {}", .0.join(", "))]
    Inadmissible(Vec<&'static str>),
    #[error("profile function f must be nonconstant on I")]
    ConstantProfile,
    #[error("profile function f is not smooth on I: {kind} near t = {t}")]
    NotSmooth { t: f64, kind: &'static str },
    #[error("cannot parse f: {0}")]
    Parse(#[from] ParseError),
    #[error("point is outside the chart: {0}")]
    OutsideChart(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Endpoint of an open interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::Finite(r) => write!(f, "{r}"),
            Bound::PosInf => write!(f, "inf"),
        }
    }
}

/// Open interval `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Bound,
    hi: Bound,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound) -> Result<Self, ModelError> {
        let ok = match (&lo, &hi) {
            (Bound::PosInf, _) | (_, Bound::NegInf) => false,
            (Bound::Finite(a), Bound::Finite(b)) => a < b,
            _ => true,
        };
        if !ok {
            return Err(ModelError::EmptyInterval(lo.to_string(), hi.to_string()));
        }
        Ok(Self { lo, hi })
    }

    pub fn real_line() -> Self {
        Self {
            lo: Bound::NegInf,
            hi: Bound::PosInf,
        }
    }

    pub fn positive() -> Self {
        Self {
            lo: Bound::Finite(crate::scalar::int(0)),
            hi: Bound::PosInf,
        }
    }

    pub fn lo(&self) -> &Bound {
        &self.lo
    }

    pub fn hi(&self) -> &Bound {
        &self.hi
    }

    /// Strict membership.
    pub fn contains<S: Scalar>(&self, t: &S) -> bool {
        let above = match &self.lo {
            Bound::Finite(a) => crate::linalg::greater(t, &S::from_rational(a)),
            Bound::NegInf => true,
            Bound::PosInf => false,
        };
        let below = match &self.hi {
            Bound::Finite(b) => crate::linalg::greater(&S::from_rational(b), t),
            Bound::PosInf => true,
            Bound::NegInf => false,
        };
        above && below
    }

    /// True when `t` lies in the closure `[lo, hi]`.
    pub fn closure_contains(&self, t: &Rational) -> bool {
        let above = match &self.lo {
            Bound::Finite(a) => t >= a,
            _ => true,
        };
        let below = match &self.hi {
            Bound::Finite(b) => t <= b,
            _ => true,
        };
        above && below
    }

    /// Finite window used for scans over unbounded intervals.
    pub fn scan_window(&self) -> (f64, f64) {
        const REACH: f64 = 100.0;
        match (&self.lo, &self.hi) {
            (Bound::Finite(a), Bound::Finite(b)) => (rational_to_f64(a), rational_to_f64(b)),
            (Bound::Finite(a), _) => {
                let a = rational_to_f64(a);
                (a, a + REACH * a.abs().max(1.0))
            }
            (_, Bound::Finite(b)) => {
                let b = rational_to_f64(b);
                (b - REACH * b.abs().max(1.0), b)
            }
            _ => (-REACH, REACH),
        }
    }

    /// `count` rational interior points with small denominators, evenly
    /// spread over the scan window.
    pub fn sample_points(&self, count: usize) -> Vec<Rational> {
        let (lo, hi) = self.scan_window();
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let x = lo + (hi - lo) * (k as f64 + 1.0) / (count as f64 + 1.0);
            let mut r = Rational::new(((x * 8.0).round() as i64).into(), 8.into());
            let mut den = 8i64;
            while (!self.contains(&r) || out.contains(&r)) && den < 1 << 40 {
                den *= 2;
                r = Rational::new(((x * den as f64).round() as i64).into(), den.into());
            }
            if self.contains(&r) && !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Relaxations of the model invariants, used only by diagnostic probes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ProbeFlags {
    /// Allow a constant `f` (locally symmetric metric).
    pub locally_symmetric: bool,
    /// Skip the admissibility gate on `A` (allows `A = 0`).
    pub degenerate: bool,
}

/// Validated data `(n, ⟨·,·⟩, A, f, I)` of a Roter metric.
#[derive(Debug, Clone)]
pub struct ModelData {
    n: usize,
    gram: InnerProduct<Rational>,
    a: Endomorphism<Rational>,
    f: Expr,
    f_text: String,
    interval: Interval,
    probe: ProbeFlags,
}

impl ModelData {
    pub fn new(
        gram: Matrix<Rational>,
        a: Matrix<Rational>,
        f_text: &str,
        interval: Interval,
        probe: ProbeFlags,
    ) -> Result<Self, ModelError> {
        let f = parse_f(f_text)?;
        Self::from_expr(gram, a, f, f_text.trim().to_string(), interval, probe)
    }

    pub fn from_expr(
        gram: Matrix<Rational>,
        a: Matrix<Rational>,
        f: Expr,
        f_text: String,
        interval: Interval,
        probe: ProbeFlags,
    ) -> Result<Self, ModelError> {
        let gram = InnerProduct::new(gram)?;
        let n = gram.dim() + 2;
        if !(4..=MAX_VARS).contains(&n) {
            return Err(ModelError::Dimension(n));
        }
        let a = Endomorphism::new(a);
        let report = validate_endomorphism(&gram, &a)?;
        if !probe.degenerate && !report.is_admissible() {
            return Err(ModelError::Inadmissible(report.violations()));
        }
        check_smooth(&f, &interval)?;
        if !probe.locally_symmetric && is_constant_on(&f, &interval) {
            return Err(ModelError::ConstantProfile);
        }
        Ok(Self {
            n,
            gram,
            a,
            f,
            f_text,
            interval,
            probe,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &InnerProduct<Rational> {
        &self.gram
    }

    pub fn endomorphism(&self) -> &Endomorphism<Rational> {
        &self.a
    }

    pub fn f(&self) -> &Expr {
        &self.f
    }

    pub fn f_text(&self) -> &str {
        &self.f_text
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn probe(&self) -> ProbeFlags {
        self.probe
    }

    /// Same data with another profile function. Used to move a model into
    /// canonical form.
    pub fn with_profile(&self, f_text: &str, interval: Interval) -> Result<Self, ModelError> {
        Self::new(
            self.gram.gram().clone(),
            self.a.matrix().clone(),
            f_text,
            interval,
            self.probe,
        )
    }

    /// Expected signature of `g`: that of `⟨·,·⟩` plus one hyperbolic plane.
    pub fn expected_signature(&self) -> Signature {
        let s = self.gram.signature();
        Signature::new(s.plus + 1, s.minus + 1)
    }

    /// Converts the model's matrices into the scalar type of the run.
    pub fn view<S: Scalar>(&self) -> ModelView<'_, S> {
        let g = self.gram.gram().map(S::from_rational);
        let a = self.a.matrix().map(S::from_rational);
        // ⟨Ax,x⟩ = xᵀ (Aᵀ G) x; only the symmetric part of AᵀG matters.
        let atg = a.transpose().mul(&g);
        let quad_a = atg.add(&atg.transpose()).scale(&S::one().div_i64(2));
        ModelView {
            model: self,
            g,
            quad_a,
        }
    }
}

fn check_smooth(f: &Expr, interval: &Interval) -> Result<(), ModelError> {
    let (lo, hi) = interval.scan_window();
    let margin = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
    for s in f.singularities_in(lo, hi, 4096) {
        if s.t > lo + margin && s.t < hi - margin {
            let kind = match s.kind {
                SingularityKind::Kink => "kink",
                SingularityKind::Pole => "pole",
            };
            return Err(ModelError::NotSmooth { t: s.t, kind });
        }
    }
    Ok(())
}

fn is_constant_on(f: &Expr, interval: &Interval) -> bool {
    if f.is_constant_tree() {
        return true;
    }
    let (lo, hi) = interval.scan_window();
    (1..64).all(|k| {
        let t = lo + (hi - lo) * k as f64 / 64.0;
        match f.eval_jet::<f64>(&t) {
            Ok(j) => j.derivative(1).abs() < 1e-12,
            Err(_) => true,
        }
    })
}

/// Point `(t, s, x)` of `I × ℝ × V`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartPoint<S> {
    pub t: S,
    pub s: S,
    pub x: Vec<S>,
}

impl<S: Scalar> ChartPoint<S> {
    pub fn new(t: S, s: S, x: Vec<S>) -> Self {
        Self { t, s, x }
    }

    /// Chart coordinates `(t, x, s/2)`.
    pub fn coordinates(&self) -> Vec<S> {
        let mut c = Vec::with_capacity(self.x.len() + 2);
        c.push(self.t.clone());
        c.extend(self.x.iter().cloned());
        c.push(self.s.div_i64(2));
        c
    }

    /// Inverse of [`ChartPoint::coordinates`].
    pub fn from_coordinates(c: &[S]) -> Self {
        let n = c.len();
        Self {
            t: c[0].clone(),
            s: c[n - 1].clone() + &c[n - 1],
            x: c[1..n - 1].to_vec(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ChartPoint<T> {
        ChartPoint {
            t: f(&self.t),
            s: f(&self.s),
            x: self.x.iter().map(f).collect(),
        }
    }
}

impl<S: Scalar> fmt::Display for ChartPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x: Vec<String> = self.x.iter().map(|v| v.to_string()).collect();
        write!(f, "(t={}, s={}, x=({}))", self.t, self.s, x.join(", "))
    }
}

/// Metric components and their inverse at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricValue<S: Scalar> {
    pub g: Matrix<S>,
    pub inverse: Matrix<S>,
}

/// A model with its matrices converted to one scalar type.
#[derive(Debug, Clone)]
pub struct ModelView<'a, S: Scalar> {
    model: &'a ModelData,
    g: Matrix<S>,
    quad_a: Matrix<S>,
}

impl<S: Scalar> ModelView<'_, S> {
    pub fn model(&self) -> &ModelData {
        self.model
    }

    pub fn gram(&self) -> &Matrix<S> {
        &self.g
    }

    pub fn check_point(&self, p: &ChartPoint<S>) -> Result<(), ModelError> {
        if p.x.len() != self.model.n - 2 {
            return Err(ModelError::OutsideChart(format!(
                "x has {} coordinates, expected {}",
                p.x.len(),
                self.model.n - 2
            )));
        }
        if !self.model.interval.contains(&p.t) {
            return Err(ModelError::OutsideChart(format!(
                "t = {} is not in {}",
                p.t, self.model.interval
            )));
        }
        Ok(())
    }

    pub fn f_jet(&self, t: &S) -> Result<Jet<S>, ModelError> {
        Ok(self.model.f.eval_jet(t)?)
    }

    /// `κ` and its `t`-derivatives at fixed `(s, x)`.
    pub fn kappa(&self, p: &ChartPoint<S>) -> Result<Jet<S>, ModelError> {
        self.check_point(p)?;
        let f = self.f_jet(&p.t)?;
        let xx = self.g.bilinear(&p.x, &p.x);
        let axx = self.quad_a.bilinear(&p.x, &p.x);
        Ok(f.scale(&xx) + Jet::constant(axx))
    }

    /// `∂κ/∂x^i` for the `V` coordinates: `2 f (Gx)_i + 2 (GA x)_i`.
    pub fn kappa_gradient_x(&self, p: &ChartPoint<S>) -> Result<Vec<S>, ModelError> {
        self.check_point(p)?;
        let f = self.model.f.eval(&p.t)?;
        let gx = self.g.mul_vec(&p.x);
        let ax = self.quad_a.mul_vec(&p.x);
        let two = S::from_i64(2);
        Ok(gx
            .iter()
            .zip(&ax)
            .map(|(u, v)| (f.clone() * u + v) * &two)
            .collect())
    }

    /// Components per the closed table; the inverse is computed by
    /// elimination, not by formula.
    pub fn metric_at(&self, p: &ChartPoint<S>) -> Result<MetricValue<S>, ModelError> {
        let kappa = self.kappa(p)?.value().clone();
        let n = self.model.n;
        let mut g = Matrix::zeros(n, n);
        g[(0, 0)] = kappa;
        g[(0, n - 1)] = S::one();
        g[(n - 1, 0)] = S::one();
        for i in 0..n - 2 {
            for j in 0..n - 2 {
                g[(i + 1, j + 1)] = self.g[(i, j)].clone();
            }
        }
        let inverse = g.inverse()?;
        Ok(MetricValue { g, inverse })
    }

    /// The nonzero Christoffel symbols from the closed formulas
    /// `Γⁿ₁₁ = ∂₁κ/2`, `Γⁱ₁₁ = −g^{ij}∂ⱼκ/2`, `Γⁿ₁ᵢ = Γⁿᵢ₁ = ∂ᵢκ/2`,
    /// stored as `Γ[k][i][j]` (upper index first).
    pub fn christoffels_closed(&self, p: &ChartPoint<S>) -> Result<TensorValue<S>, ModelError> {
        let n = self.model.n;
        let last = n - 1;
        let kappa = self.kappa(p)?;
        let grad = self.kappa_gradient_x(p)?;
        let ginv = self.g.inverse()?;
        let half = S::one().div_i64(2);
        let mut gamma = TensorValue::zeros(n, vec![Slot::Upper, Slot::Lower, Slot::Lower]);
        gamma.set(&[last, 0, 0], kappa.derivative(1).clone() * &half);
        for i in 0..n - 2 {
            let mut acc = S::zero();
            for j in 0..n - 2 {
                acc = acc + ginv[(i, j)].clone() * &grad[j];
            }
            gamma.set(&[i + 1, 0, 0], -(acc * &half));
            let v = grad[i].clone() * &half;
            gamma.set(&[last, 0, i + 1], v.clone());
            gamma.set(&[last, i + 1, 0], v);
        }
        Ok(gamma)
    }

    /// Taylor expansion of the metric components around `p`, valid to total
    /// degree `order` in the displacements of the chart coordinates.
    /// Returned row-major, `n × n`.
    pub fn metric_series(&self, p: &ChartPoint<S>, order: u8) -> Result<Vec<Series<S>>, ModelError> {
        self.check_point(p)?;
        let n = self.model.n;
        let f = self.f_jet(&p.t)?;
        let f_series = univariate(0, &f.d, order);
        let quad = |m: &Matrix<S>| -> Series<S> {
            // xᵀMx expanded at x0: x0ᵀMx0 + 2(Mx0)·y + yᵀMy.
            let mx = m.mul_vec(&p.x);
            let mut terms = vec![([0u8; MAX_VARS], m.bilinear(&p.x, &p.x))];
            for i in 0..n - 2 {
                terms.push((mono(i + 1, 1), mx[i].clone() * &S::from_i64(2)));
                for j in 0..n - 2 {
                    let mut mono_ij = [0u8; MAX_VARS];
                    mono_ij[i + 1] += 1;
                    mono_ij[j + 1] += 1;
                    terms.push((mono_ij, m[(i, j)].clone()));
                }
            }
            Series::from_terms(EXACT, terms)
        };
        let kappa = f_series.mul(&quad(&self.g)).add(&quad(&self.quad_a)).truncate(order);
        let mut out = vec![Series::zero(); n * n];
        out[0] = kappa;
        out[n - 1] = Series::constant(S::one());
        out[(n - 1) * n] = Series::constant(S::one());
        for i in 0..n - 2 {
            for j in 0..n - 2 {
                out[(i + 1) * n + j + 1] = Series::constant(self.g[(i, j)].clone());
            }
        }
        Ok(out)
    }
}

/// Signature of a symmetric matrix, by the same completion of squares as
/// for inner products.
pub fn metric_signature<S: Scalar>(g: &Matrix<S>) -> Result<Signature, LinearError> {
    Ok(InnerProduct::new(g.clone())?.signature())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn null_gram() -> Matrix<Rational> {
        Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap()
    }

    fn jordan() -> Matrix<Rational> {
        Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(0), int(0)]]).unwrap()
    }

    fn m2() -> ModelData {
        ModelData::new(null_gram(), jordan(), "t", Interval::real_line(), ProbeFlags::default()).unwrap()
    }

    fn pt(t: i64, s: i64, x: &[i64]) -> ChartPoint<Rational> {
        ChartPoint::new(int(t), int(s), x.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn kappa_hand_values() {
        let m = m2();
        assert_eq!(*m.view::<Rational>().kappa(&pt(2, 0, &[1, 1])).unwrap().value(), int(5));
        let m1 = m.with_profile("t^-2", Interval::positive()).unwrap();
        assert_eq!(*m1.view::<Rational>().kappa(&pt(1, 0, &[1, 1])).unwrap().value(), int(3));
        assert_eq!(*m.view::<Rational>().kappa(&pt(3, 7, &[0, 0])).unwrap().value(), int(0));
    }

    #[test]
    fn metric_components_and_inverse() {
        let m = m2();
        let v = m.view::<Rational>();
        let mv = v.metric_at(&pt(2, 0, &[1, 1])).unwrap();
        assert_eq!(mv.g[(0, 0)], int(5));
        assert_eq!(mv.g[(0, 3)], int(1));
        assert_eq!(mv.g[(1, 2)], int(1));
        assert_eq!(mv.g[(1, 1)], int(0));
        assert_eq!(mv.g.mul(&mv.inverse), Matrix::identity(4));
        assert_eq!(mv.inverse[(3, 3)], int(-5));
        assert_eq!(mv.inverse[(0, 0)], int(0));
    }

    #[test]
    fn closed_christoffels_on_hand_example() {
        let m = m2();
        let gamma = m.view::<Rational>().christoffels_closed(&pt(2, 0, &[1, 1])).unwrap();
        assert_eq!(*gamma.get(&[3, 0, 0]), int(1));
        assert_eq!(*gamma.get(&[3, 0, 1]), int(2));
        assert_eq!(*gamma.get(&[3, 1, 0]), int(2));
    }

    #[test]
    fn lorentzian_signature() {
        let g = Matrix::from_rational_rows(&[vec![int(1), int(0)], vec![int(0), int(1)]]).unwrap();
        let a = Matrix::from_rational_rows(&[vec![int(1), int(0)], vec![int(0), int(-1)]]).unwrap();
        let m3 = ModelData::new(g, a, "t", Interval::real_line(), ProbeFlags::default()).unwrap();
        let mv = m3.view::<Rational>().metric_at(&pt(1, 0, &[1, 2])).unwrap();
        assert_eq!(metric_signature(&mv.g).unwrap(), Signature::new(3, 1));
        assert_eq!(m3.expected_signature(), Signature::new(3, 1));
    }

    #[test]
    fn invariants_are_enforced() {
        let bad_a = Matrix::from_rational_rows(&[vec![int(1), int(0)], vec![int(0), int(1)]]).unwrap();
        let err = ModelData::new(null_gram(), bad_a, "t", Interval::real_line(), ProbeFlags::default());
        assert!(err.unwrap_err().to_string().contains("traceless"));
        assert!(matches!(
            ModelData::new(null_gram(), jordan(), "3", Interval::real_line(), ProbeFlags::default()),
            Err(ModelError::ConstantProfile)
        ));
        assert!(ModelData::new(
            null_gram(),
            jordan(),
            "3",
            Interval::real_line(),
            ProbeFlags { locally_symmetric: true, degenerate: false }
        )
        .is_ok());
        assert!(matches!(
            ModelData::new(null_gram(), jordan(), "(t + abs(t))^2", Interval::real_line(), ProbeFlags::default()),
            Err(ModelError::NotSmooth { .. })
        ));
        assert!(matches!(
            ModelData::new(null_gram(), jordan(), "t^-2", Interval::real_line(), ProbeFlags::default()),
            Err(ModelError::NotSmooth { .. })
        ));
        assert!(m2().view::<Rational>().kappa(&pt(0, 0, &[1])).is_err());
    }

    #[test]
    fn interval_samples_are_interior() {
        let i = Interval::new(Bound::Finite(int(0)), Bound::Finite(ratio(1, 100))).unwrap();
        let pts = i.sample_points(5);
        assert_eq!(pts.len(), 5);
        assert!(pts.iter().all(|p| i.contains(p)));
    }
}
