//! The curvature identities every Roter metric satisfies, evaluated at
//! sample points and aggregated.

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{curvature_at, olszak_from_weyl, CurvatureError, Depth, OlszakReport, RIEMANN_SYMMETRIES};
use crate::linalg::{greater, Matrix};
use crate::model::{metric_signature, ChartPoint, ModelView};
use crate::scalar::Scalar;

use super::report::{scalar_string, Check};

pub const RICCI: &str = "Ric = (2-n) f dt⊗dt";
pub const SCALAR: &str = "scal = 0";
pub const RIEMANN: &str = "R_abcd = -R_bacd = -R_abdc = R_cdab, R_abcd + R_acdb + R_adbc = 0";
pub const PARALLEL_WEYL: &str = "∇W = 0";
pub const METRIC_COMPATIBLE: &str = "∇g = 0";
pub const CHRISTOFFEL: &str = "Γ^n_00 = ∂_0κ/2, Γ^n_0i = ∂_iκ/2 (closed form) = Γ from ∂g";
pub const WEYL_TRACE: &str = "g^ac W_abcd = 0";
pub const SIGNATURE: &str = "sign g = sign⟨·,·⟩ + (1, 1)";
pub const OLSZAK: &str = "D = span ∂_n, D⊥ = Ker dt";

/// Residuals at one point.
#[derive(Debug, Clone)]
pub struct PointIdentities<S: Scalar> {
    pub point: ChartPoint<S>,
    pub ricci: S,
    pub scalar: S,
    pub riemann_symmetries: S,
    pub nabla_weyl: S,
    pub nabla_metric: S,
    pub christoffel: S,
    pub weyl_trace: S,
    pub signature_ok: bool,
    pub olszak: OlszakReport<S>,
}

pub fn point_identities<S: Scalar>(view: &ModelView<'_, S>, p: &ChartPoint<S>) -> Result<PointIdentities<S>, CurvatureError> {
    let curv = curvature_at(view, p, Depth::FirstDerivatives)?;
    let n = curv.dim();
    let f = view.f_jet(&p.t)?.value().clone();
    let ric = curv.ricci.value();
    let expected = f * &S::from_i64(2 - n as i64);
    let mut ricci = S::zero();
    for i in 0..n {
        for j in 0..n {
            let target = if i == 0 && j == 0 { expected.clone() } else { S::zero() };
            let r = (ric.get(&[i, j]).clone() - &target).abs();
            if greater(&r, &ricci) {
                ricci = r;
            }
        }
    }
    let riemann = curv.riemann.value();
    let weyl = curv.weyl.value();
    let mut riemann_symmetries = S::zero();
    for t in [&riemann, &weyl] {
        for sym in RIEMANN_SYMMETRIES {
            let r = t.symmetry_residual(sym)?;
            if greater(&r, &riemann_symmetries) {
                riemann_symmetries = r;
            }
        }
    }
    let christoffel = curv.christoffel_value().sub(&view.christoffels_closed(p)?).max_abs();
    let g = curv.metric.value();
    let gm = Matrix::from_fn(n, n, |i, j| g.get(&[i, j]).clone());
    let signature_ok = metric_signature(&gm).is_ok_and(|s| s == view.model().expected_signature());
    Ok(PointIdentities {
        point: p.clone(),
        ricci,
        scalar: curv.scalar_value().abs(),
        riemann_symmetries,
        nabla_weyl: curv.nabla_weyl().max_abs(),
        nabla_metric: curv.nabla_metric().max_abs(),
        christoffel,
        weyl_trace: curv.weyl_trace_residual(),
        signature_ok,
        olszak: olszak_from_weyl(&gm, &weyl),
    })
}

/// Worst residuals over a set of points.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityTotals {
    pub points: usize,
    pub ricci: String,
    pub scalar: String,
    pub riemann_symmetries: String,
    pub nabla_weyl: String,
    pub nabla_metric: String,
    pub christoffel: String,
    pub weyl_trace: String,
    pub signature_failures: usize,
    /// Points where `D` is a line spanned by `∂ₙ` with `D⊥ = Ker dt`.
    pub olszak_rank_one: usize,
    #[serde(skip)]
    pub checks: Vec<Check>,
}

fn worst<S: Scalar>(items: &[PointIdentities<S>], pick: impl Fn(&PointIdentities<S>) -> &S) -> S {
    items.iter().map(pick).fold(S::zero(), |acc, r| if greater(r, &acc) { r.clone() } else { acc })
}

/// Evaluates every identity at every point (in parallel, results in order).
pub fn evaluate_points<S: Scalar>(
    view: &ModelView<'_, S>,
    points: &[ChartPoint<S>],
) -> Result<Vec<PointIdentities<S>>, CurvatureError> {
    points.par_iter().map(|p| point_identities(view, p)).collect()
}

/// Aggregates point residuals into checks. The Olszak check is included
/// only when requested, since it needs `rank A ≥ 2`.
pub fn totals<S: Scalar>(items: &[PointIdentities<S>], with_olszak: bool) -> IdentityTotals {
    let ricci = worst(items, |p| &p.ricci);
    let scalar = worst(items, |p| &p.scalar);
    let riemann_symmetries = worst(items, |p| &p.riemann_symmetries);
    let nabla_weyl = worst(items, |p| &p.nabla_weyl);
    let nabla_metric = worst(items, |p| &p.nabla_metric);
    let christoffel = worst(items, |p| &p.christoffel);
    let weyl_trace = worst(items, |p| &p.weyl_trace);
    let signature_failures = items.iter().filter(|p| !p.signature_ok).count();
    let olszak_rank_one = items.iter().filter(|p| p.olszak.is_rank_one_certificate()).count();
    let mut checks = vec![
        Check::residual("ricci", RICCI, &ricci),
        Check::residual("scalar-curvature", SCALAR, &scalar),
        Check::residual("riemann-symmetries", RIEMANN, &riemann_symmetries),
        Check::residual("parallel-weyl", PARALLEL_WEYL, &nabla_weyl),
        Check::residual("metric-compatibility", METRIC_COMPATIBLE, &nabla_metric),
        Check::residual("christoffel-cross-check", CHRISTOFFEL, &christoffel),
        Check::residual("weyl-traceless", WEYL_TRACE, &weyl_trace),
        Check::holds("signature", SIGNATURE, signature_failures == 0),
    ];
    if with_olszak {
        checks.push(Check::holds("olszak-rank-one", OLSZAK, olszak_rank_one == items.len()));
    }
    IdentityTotals {
        points: items.len(),
        ricci: scalar_string(&ricci),
        scalar: scalar_string(&scalar),
        riemann_symmetries: scalar_string(&riemann_symmetries),
        nabla_weyl: scalar_string(&nabla_weyl),
        nabla_metric: scalar_string(&nabla_metric),
        christoffel: scalar_string(&christoffel),
        weyl_trace: scalar_string(&weyl_trace),
        signature_failures,
        olszak_rank_one,
        checks,
    }
}
