//! Generic Levi-Civita pipeline: Christoffel symbols, Riemann, Ricci, scalar
//! and Weyl curvature, and covariant derivatives.
//!
//! Every quantity is carried as a truncated Taylor series in the chart
//! displacements around the base point. The metric series comes from the
//! jet of `f` in `t` and the exact quadratic dependence on `x`; each
//! coordinate derivative lowers the truncation order by one, so a metric
//! expanded to order 3 yields the Weyl tensor to order 1 and hence `∇W` at
//! the point.
//!
//! Conventions: `R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce} Γ^e_{db}
//! − Γ^a_{de} Γ^e_{cb}`, `R_{abcd} = g_{ae} R^e_{bcd}`, `Ric_{bd} = R^a_{bad}`,
//! and covariant derivatives append the differentiation slot last.

mod classify;
mod olszak;

pub use classify::{classify_ecs, EcsVerdict, SampleVerdict};
pub use olszak::{olszak_distribution, olszak_from_weyl, OlszakReport, OlszakStatus};

use thiserror::Error;

use crate::linalg::Matrix;
use crate::model::{ChartPoint, ModelError, ModelView};
use crate::scalar::Scalar;
use crate::series::Series;
use crate::tensor::{Slot, Symmetry, TensorError, TensorSeries, TensorValue};

use Slot::{Lower, Upper};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurvatureError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("stencil leaves the chart: {0}")]
    StencilOutside(String),
    #[error("the Weyl tensor needs n >= 4, got n = {0}")]
    Dimension(usize),
}

/// Symmetries every Riemann tensor `R_{abcd}` satisfies.
pub const RIEMANN_SYMMETRIES: [Symmetry; 4] = [
    Symmetry::Antisymmetric(0, 1),
    Symmetry::Antisymmetric(2, 3),
    Symmetry::PairExchange,
    Symmetry::FirstBianchi,
];

/// How many derivatives of the curvature are needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    /// Curvature values only.
    Values,
    /// Curvature values and their first derivatives (for `∇R`, `∇W`).
    FirstDerivatives,
}

impl Depth {
    fn metric_order(self) -> u8 {
        match self {
            Depth::Values => 2,
            Depth::FirstDerivatives => 3,
        }
    }
}

/// All curvature series of a model around one point.
#[derive(Debug, Clone)]
pub struct CurvatureAt<S: Scalar> {
    pub point: ChartPoint<S>,
    pub metric: TensorSeries<S>,
    pub inverse: TensorSeries<S>,
    pub christoffel: TensorSeries<S>,
    /// `R^a_{bcd}`.
    pub riemann_mixed: TensorSeries<S>,
    /// `R_{abcd}`.
    pub riemann: TensorSeries<S>,
    pub ricci: TensorSeries<S>,
    pub scalar: Series<S>,
    pub weyl: TensorSeries<S>,
}

fn matmul<S: Scalar>(n: usize, a: &[Series<S>], b: &[Series<S>]) -> Vec<Series<S>> {
    let mut out = vec![Series::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = &a[i * n + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..n {
                let bkj = &b[k * n + j];
                if bkj.is_zero() {
                    continue;
                }
                out[i * n + j] = out[i * n + j].add(&aik.mul(bkj));
            }
        }
    }
    out
}

/// Inverse of a matrix of series by the Neumann expansion around the value
/// at the base point.
pub fn inverse_series<S: Scalar>(n: usize, g: &[Series<S>]) -> Result<Vec<Series<S>>, ModelError> {
    let g0 = Matrix::from_fn(n, n, |i, j| g[i * n + j].value());
    let g0inv = g0.inverse()?;
    let order = g.iter().map(|s| s.order()).min().unwrap_or(crate::series::EXACT);
    let g0inv_s: Vec<Series<S>> = (0..n * n)
        .map(|k| Series::constant(g0inv[(k / n, k % n)].clone()))
        .collect();
    let h: Vec<Series<S>> = (0..n * n)
        .map(|k| g[k].sub(&Series::constant(g0[(k / n, k % n)].clone())))
        .collect();
    let neg_step: Vec<Series<S>> = matmul(n, &g0inv_s, &h).iter().map(|s| s.neg()).collect();
    let mut term = g0inv_s.clone();
    let mut acc = g0inv_s;
    let terms = if order == crate::series::EXACT { 0 } else { order as usize };
    for _ in 0..terms {
        term = matmul(n, &neg_step, &term);
        if term.iter().all(|s| s.is_zero()) {
            break;
        }
        acc = acc.iter().zip(&term).map(|(a, b)| a.add(b)).collect();
    }
    Ok(acc.into_iter().map(|s| s.truncate(order)).collect())
}

/// `Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij})` as series.
pub fn christoffel_series<S: Scalar>(
    n: usize,
    g: &TensorSeries<S>,
    ginv: &TensorSeries<S>,
) -> TensorSeries<S> {
    let dg: Vec<TensorSeries<S>> = (0..n)
        .map(|l| TensorSeries::from_fn(n, vec![Lower, Lower], |ij| g.get(ij).derivative(l)))
        .collect();
    let half = S::one().div_i64(2);
    let lowered = TensorSeries::from_fn(n, vec![Lower, Lower, Lower], |lij| {
        let (l, i, j) = (lij[0], lij[1], lij[2]);
        dg[i]
            .get(&[j, l])
            .add(dg[j].get(&[i, l]))
            .sub(dg[l].get(&[i, j]))
            .scale(&half)
    });
    TensorSeries::from_fn(n, vec![Upper, Lower, Lower], |kij| {
        let (k, i, j) = (kij[0], kij[1], kij[2]);
        let mut acc = Series::zero();
        for l in 0..n {
            let a = ginv.get(&[k, l]);
            let b = lowered.get(&[l, i, j]);
            if !a.is_zero() && !b.is_zero() {
                acc = acc.add(&a.mul(b));
            }
        }
        acc
    })
}

/// `R^a_{bcd}` from Christoffel series, truncated to `order`.
pub fn riemann_series<S: Scalar>(n: usize, gamma: &TensorSeries<S>, order: u8) -> TensorSeries<S> {
    let dgamma: Vec<TensorSeries<S>> = (0..n)
        .map(|c| {
            TensorSeries::from_fn(n, vec![Upper, Lower, Lower], |idx| {
                gamma.get(idx).derivative(c).truncate(order)
            })
        })
        .collect();
    // For each (a, c): the e with Γ^a_{ce} not identically zero.
    let support: Vec<Vec<usize>> = (0..n * n)
        .map(|ac| {
            (0..n)
                .filter(|&e| !gamma.get(&[ac / n, ac % n, e]).is_zero())
                .collect()
        })
        .collect();
    let quad = |a: usize, c: usize, d: usize, b: usize| -> Series<S> {
        let mut acc = Series::zero();
        for &e in &support[a * n + c] {
            let rhs = gamma.get(&[e, d, b]);
            if !rhs.is_zero() {
                acc = acc.add(&gamma.get(&[a, c, e]).mul(rhs));
            }
        }
        acc
    };
    TensorSeries::from_fn(n, vec![Upper, Lower, Lower, Lower], |idx| {
        let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
        dgamma[c]
            .get(&[a, d, b])
            .sub(dgamma[d].get(&[a, c, b]))
            .add(&quad(a, c, d, b))
            .sub(&quad(a, d, c, b))
            .truncate(order)
    })
}

/// Lowers the first slot: `T_{a...} = g_{ae} T^e_{...}`.
pub fn lower_first<S: Scalar>(n: usize, g: &TensorSeries<S>, t: &TensorSeries<S>) -> TensorSeries<S> {
    let mut variance = t.variance().to_vec();
    variance[0] = Lower;
    TensorSeries::from_fn(n, variance, |idx| {
        let mut acc = Series::zero();
        let mut src = idx.to_vec();
        for e in 0..n {
            let ge = g.get(&[idx[0], e]);
            if ge.is_zero() {
                continue;
            }
            src[0] = e;
            let te = t.get(&src);
            if !te.is_zero() {
                acc = acc.add(&ge.mul(te));
            }
        }
        acc
    })
}

/// Weyl tensor `W = R − (1/(n−2)) Ric ∧ g + scal/((n−1)(n−2)) g ∧ g`.
pub fn weyl_series<S: Scalar>(
    n: usize,
    g: &TensorSeries<S>,
    riemann: &TensorSeries<S>,
    ricci: &TensorSeries<S>,
    scal: &Series<S>,
) -> TensorSeries<S> {
    let c1 = S::one().div_i64(n as i64 - 2);
    let c2 = S::one().div_i64(((n - 1) * (n - 2)) as i64);
    let prod = |a: &Series<S>, b: &Series<S>| -> Series<S> {
        if a.is_zero() || b.is_zero() {
            Series::zero()
        } else {
            a.mul(b)
        }
    };
    let scal_c2 = scal.scale(&c2);
    TensorSeries::from_fn(n, vec![Lower; 4], |idx| {
        let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
        let ricci_part = prod(g.get(&[a, c]), ricci.get(&[b, d]))
            .sub(&prod(g.get(&[a, d]), ricci.get(&[b, c])))
            .add(&prod(g.get(&[b, d]), ricci.get(&[a, c])))
            .sub(&prod(g.get(&[b, c]), ricci.get(&[a, d])));
        let gg = prod(g.get(&[a, c]), g.get(&[b, d])).sub(&prod(g.get(&[a, d]), g.get(&[b, c])));
        riemann
            .get(idx)
            .sub(&ricci_part.scale(&c1))
            .add(&prod(&gg, &scal_c2))
            .truncate(riemann.get(idx).order())
    })
}

/// Computes every curvature series of the model around `p`.
pub fn curvature_at<S: Scalar>(
    view: &ModelView<'_, S>,
    p: &ChartPoint<S>,
    depth: Depth,
) -> Result<CurvatureAt<S>, CurvatureError> {
    let n = view.model().n();
    if n < 4 {
        return Err(CurvatureError::Dimension(n));
    }
    let order = depth.metric_order();
    let g_flat = view.metric_series(p, order)?;
    let ginv_flat = inverse_series(n, &g_flat)?;
    let metric = TensorSeries::from_fn(n, vec![Lower, Lower], |ij| g_flat[ij[0] * n + ij[1]].clone());
    let inverse = TensorSeries::from_fn(n, vec![Upper, Upper], |ij| ginv_flat[ij[0] * n + ij[1]].clone());
    let christoffel = christoffel_series(n, &metric, &inverse);
    let r_order = order - 2;
    let riemann_mixed = riemann_series(n, &christoffel, r_order);
    let riemann = lower_first(n, &metric, &riemann_mixed);
    let ricci = TensorSeries::from_fn(n, vec![Lower, Lower], |bd| {
        let mut acc = Series::zero();
        for a in 0..n {
            acc = acc.add(riemann_mixed.get(&[a, bd[0], a, bd[1]]));
        }
        acc
    });
    let mut scalar = Series::zero();
    for b in 0..n {
        for d in 0..n {
            let (u, r) = (inverse.get(&[b, d]), ricci.get(&[b, d]));
            if !u.is_zero() && !r.is_zero() {
                scalar = scalar.add(&u.mul(r));
            }
        }
    }
    let scalar = scalar.truncate(r_order);
    let weyl = weyl_series(n, &metric, &riemann, &ricci, &scalar);
    Ok(CurvatureAt {
        point: p.clone(),
        metric,
        inverse,
        christoffel,
        riemann_mixed,
        riemann,
        ricci,
        scalar,
        weyl,
    })
}

impl<S: Scalar> CurvatureAt<S> {
    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn christoffel_value(&self) -> TensorValue<S> {
        self.christoffel.value()
    }

    /// `R_{abcd}` at the point, with its symmetries checked.
    pub fn riemann_value(&self) -> Result<TensorValue<S>, CurvatureError> {
        Ok(self.riemann.value().enforce(&RIEMANN_SYMMETRIES)?)
    }

    pub fn ricci_value(&self) -> Result<TensorValue<S>, CurvatureError> {
        Ok(self.ricci.value().enforce(&[Symmetry::Symmetric(0, 1)])?)
    }

    pub fn scalar_value(&self) -> S {
        self.scalar.value()
    }

    pub fn weyl_value(&self) -> Result<TensorValue<S>, CurvatureError> {
        Ok(self.weyl.value().enforce(&RIEMANN_SYMMETRIES)?)
    }

    /// `∇W` at the point. Needs [`Depth::FirstDerivatives`].
    pub fn nabla_weyl(&self) -> TensorValue<S> {
        covariant_derivative(&self.weyl, &self.christoffel_value())
    }

    /// `∇R` (of `R_{abcd}`) at the point. Needs [`Depth::FirstDerivatives`].
    pub fn nabla_riemann(&self) -> TensorValue<S> {
        covariant_derivative(&self.riemann, &self.christoffel_value())
    }

    /// `∇g` at the point; zero for a Levi-Civita connection.
    pub fn nabla_metric(&self) -> TensorValue<S> {
        covariant_derivative(&self.metric, &self.christoffel_value())
    }

    /// Max over all slot pairs of `|g^{ac} W_{a·c·}|`-type traces.
    pub fn weyl_trace_residual(&self) -> S {
        let n = self.dim();
        let w = self.weyl.value();
        let ginv = self.inverse.value();
        let mut worst = S::zero();
        for (p, q) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            let free: Vec<usize> = (0..4).filter(|s| *s != p && *s != q).collect();
            for i in 0..n {
                for j in 0..n {
                    let mut acc = S::zero();
                    for a in 0..n {
                        for c in 0..n {
                            let u = ginv.get(&[a, c]);
                            if u.is_zero() {
                                continue;
                            }
                            let mut idx = [0usize; 4];
                            idx[p] = a;
                            idx[q] = c;
                            idx[free[0]] = i;
                            idx[free[1]] = j;
                            acc = acc + u.clone() * w.get(&idx);
                        }
                    }
                    let acc = acc.abs();
                    if acc.to_f64() > worst.to_f64() {
                        worst = acc;
                    }
                }
            }
        }
        worst
    }
}

/// `∇_e T` for a tensor field given by its series around the point; the
/// derivative slot is appended last.
pub fn covariant_derivative<S: Scalar>(field: &TensorSeries<S>, gamma: &TensorValue<S>) -> TensorValue<S> {
    let partials = field.partials();
    let value = field.value();
    connection_correction(&partials, &value, gamma)
}

/// Adds the Christoffel terms to coordinate partials `∂_e T` (stored with the
/// derivative slot last).
fn connection_correction<S: Scalar>(
    partials: &TensorValue<S>,
    value: &TensorValue<S>,
    gamma: &TensorValue<S>,
) -> TensorValue<S> {
    let n = value.dim();
    let rank = value.rank();
    // Γ^f_{e s} nonzero entries, grouped by (e, s).
    let mut support: Vec<Vec<(usize, S)>> = vec![Vec::new(); n * n];
    for (idx, v) in gamma.nonzero_entries() {
        support[idx[1] * n + idx[2]].push((idx[0], v));
    }
    // Same entries grouped by (f, e), for upper slots: Γ^a_{e f}.
    let mut upper_support: Vec<Vec<(usize, S)>> = vec![Vec::new(); n * n];
    for (idx, v) in gamma.nonzero_entries() {
        upper_support[idx[0] * n + idx[1]].push((idx[2], v));
    }
    let variance = value.variance().to_vec();
    let mut out = partials.clone();
    let mut src = vec![0usize; rank];
    for idx in crate::tensor::multi_indices(n, rank + 1) {
        let e = idx[rank];
        let mut acc = out.get(&idx).clone();
        for slot in 0..rank {
            src.copy_from_slice(&idx[..rank]);
            match variance[slot] {
                Lower => {
                    for (f, v) in &support[e * n + idx[slot]] {
                        src[slot] = *f;
                        acc = acc - v.clone() * value.get(&src);
                    }
                }
                Upper => {
                    for (f, v) in &upper_support[idx[slot] * n + e] {
                        src[slot] = *f;
                        acc = acc + v.clone() * value.get(&src);
                    }
                }
            }
        }
        out.set(&idx, acc);
    }
    out
}

/// `∇T` in float mode from central differences of the field with step `h`
/// in every chart direction. Independent of the series machinery; used as a
/// cross-check.
pub fn covariant_derivative_stencil(
    view: &ModelView<'_, f64>,
    field: impl Fn(&ChartPoint<f64>) -> Result<TensorValue<f64>, CurvatureError>,
    p: &ChartPoint<f64>,
    h: f64,
) -> Result<TensorValue<f64>, CurvatureError> {
    let interval = view.model().interval();
    for t in [p.t - h, p.t + h] {
        if !interval.contains(&t) {
            return Err(CurvatureError::StencilOutside(format!(
                "t = {t} is not in {interval}"
            )));
        }
    }
    let value = field(p)?;
    let n = value.dim();
    let rank = value.rank();
    let coords = p.coordinates();
    let mut shifted = Vec::with_capacity(n);
    for e in 0..n {
        let mut plus = coords.clone();
        let mut minus = coords.clone();
        plus[e] += h;
        minus[e] -= h;
        let fp = field(&ChartPoint::from_coordinates(&plus))?;
        let fm = field(&ChartPoint::from_coordinates(&minus))?;
        shifted.push((fp, fm));
    }
    let mut variance = value.variance().to_vec();
    variance.push(Lower);
    let partials = TensorValue::from_fn(n, variance, |idx| {
        let (fp, fm) = &shifted[idx[rank]];
        (fp.get(&idx[..rank]) - fm.get(&idx[..rank])) / (2.0 * h)
    });
    let gamma = view.christoffels_closed(p)?;
    Ok(connection_correction(&partials, &value, &gamma))
}

/// Generic Christoffel symbols `Γ^k_{ij}` at `p`.
pub fn christoffels_generic<S: Scalar>(
    view: &ModelView<'_, S>,
    p: &ChartPoint<S>,
) -> Result<TensorValue<S>, CurvatureError> {
    let n = view.model().n();
    let g_flat = view.metric_series(p, 1)?;
    let ginv_flat = inverse_series(n, &g_flat)?;
    let metric = TensorSeries::from_fn(n, vec![Lower, Lower], |ij| g_flat[ij[0] * n + ij[1]].clone());
    let inverse = TensorSeries::from_fn(n, vec![Upper, Upper], |ij| ginv_flat[ij[0] * n + ij[1]].clone());
    Ok(christoffel_series(n, &metric, &inverse)
        .value()
        .enforce(&[Symmetry::Symmetric(1, 2)])?)
}

/// `R_{abcd}` at `p`.
pub fn riemann<S: Scalar>(view: &ModelView<'_, S>, p: &ChartPoint<S>) -> Result<TensorValue<S>, CurvatureError> {
    curvature_at(view, p, Depth::Values)?.riemann_value()
}

/// `Ric_{bd}` at `p`.
pub fn ricci<S: Scalar>(view: &ModelView<'_, S>, p: &ChartPoint<S>) -> Result<TensorValue<S>, CurvatureError> {
    curvature_at(view, p, Depth::Values)?.ricci_value()
}

pub fn scalar_curvature<S: Scalar>(view: &ModelView<'_, S>, p: &ChartPoint<S>) -> Result<S, CurvatureError> {
    Ok(curvature_at(view, p, Depth::Values)?.scalar_value())
}

/// `W_{abcd}` at `p`.
pub fn weyl<S: Scalar>(view: &ModelView<'_, S>, p: &ChartPoint<S>) -> Result<TensorValue<S>, CurvatureError> {
    curvature_at(view, p, Depth::Values)?.weyl_value()
}

/// Max-norm of `Ric − (2−n) f dt⊗dt` at the point.
pub fn ricci_identity_residual<S: Scalar>(
    view: &ModelView<'_, S>,
    curv: &CurvatureAt<S>,
) -> Result<S, CurvatureError> {
    let n = curv.dim();
    let f = view.model().f().eval(&curv.point.t).map_err(ModelError::from)?;
    let expected = f * &S::from_i64(2 - n as i64);
    let ric = curv.ricci_value()?;
    let target = TensorValue::from_fn(n, vec![Lower, Lower], |ij| {
        if ij == [0, 0] {
            expected.clone()
        } else {
            S::zero()
        }
    });
    Ok(ric.sub(&target).max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::model::{Interval, ModelData, ProbeFlags};
    use crate::scalar::{int, Rational};

    fn m(f: &str, interval: Interval) -> ModelData {
        let g = Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        let a = Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(0), int(0)]]).unwrap();
        ModelData::new(g, a, f, interval, ProbeFlags::default()).unwrap()
    }

    fn pt(t: i64, x: &[i64]) -> ChartPoint<Rational> {
        ChartPoint::new(int(t), int(0), x.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn generic_christoffels_match_closed_form() {
        let model = m("t", Interval::real_line());
        let v = model.view::<Rational>();
        let p = pt(2, &[1, 1]);
        let generic = christoffels_generic(&v, &p).unwrap();
        assert_eq!(generic, v.christoffels_closed(&p).unwrap());
        assert_eq!(*generic.get(&[3, 0, 0]), int(1));
    }

    #[test]
    fn ricci_and_scalar_on_m2() {
        let model = m("t", Interval::real_line());
        let v = model.view::<Rational>();
        let curv = curvature_at(&v, &pt(2, &[1, 1]), Depth::FirstDerivatives).unwrap();
        let ric = curv.ricci_value().unwrap();
        assert_eq!(*ric.get(&[0, 0]), int(-4));
        assert_eq!(ric.nonzero_entries().len(), 1);
        assert_eq!(curv.scalar_value(), int(0));
        assert!(!curv.weyl_value().unwrap().is_zero());
        assert!(curv.nabla_weyl().is_zero());
        assert!(!curv.nabla_riemann().is_zero());
        assert!(curv.nabla_metric().is_zero());
        assert_eq!(curv.weyl_trace_residual(), int(0));
    }

    #[test]
    fn m1_values() {
        let model = m("t^-2", Interval::positive());
        let v = model.view::<Rational>();
        let p = pt(1, &[1, 1]);
        assert_eq!(*christoffels_generic(&v, &p).unwrap().get(&[3, 0, 0]), int(-2));
        assert_eq!(*ricci(&v, &p).unwrap().get(&[0, 0]), int(-2));
    }

    #[test]
    fn stencil_agrees_with_series() {
        let model = m("t^-2", Interval::positive());
        let vf = model.view::<f64>();
        let p = ChartPoint::new(1.5, 0.25, vec![0.5, -1.0]);
        let exact = curvature_at(&vf, &p, Depth::FirstDerivatives).unwrap().nabla_riemann();
        let fd = covariant_derivative_stencil(
            &vf,
            |q| curvature_at(&vf, q, Depth::Values)?.riemann_value(),
            &p,
            1e-4,
        )
        .unwrap();
        assert!(exact.sub(&fd).max_abs() < 1e-6);
    }
}
