//! Sampled ECS classification: conformal flatness, local symmetry and the
//! parallel-Weyl property, evaluated point by point.

use rayon::prelude::*;

use crate::model::{ChartPoint, ModelError, ModelView};
use crate::scalar::Scalar;

use super::{curvature_at, olszak_from_weyl, CurvatureError, Depth, OlszakStatus};
use crate::linalg::Matrix;

/// Curvature facts at one sample point.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleVerdict<S> {
    pub point: ChartPoint<S>,
    pub weyl_zero: bool,
    /// Max-norm of `∇W`.
    pub nabla_weyl: S,
    /// Max-norm of `∇R`.
    pub nabla_riemann: S,
    /// `ḟ(t)`.
    pub f_dot: S,
    pub olszak_rank: usize,
    pub olszak_status: OlszakStatus,
}

/// Verdict over a finite sample; every quantifier ranges over the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct EcsVerdict<S> {
    /// `W = 0` at every sample.
    pub conformally_flat: bool,
    /// Sampled `t` values where `ḟ = 0`, i.e. where `∇R = 0`.
    pub locally_symmetric_locus: Vec<S>,
    /// `W ≠ 0` somewhere and `ḟ ≠ 0` somewhere on the samples.
    pub is_ecs: bool,
    /// Largest Olszak kernel dimension seen at a sample with `W ≠ 0`
    /// (0 when `W` vanishes at every sample).
    pub olszak_rank: usize,
    /// `∇W = 0` at every sample.
    pub weyl_parallel: bool,
    /// At every sample, `∇R = 0` exactly when `ḟ = 0`.
    pub local_symmetry_matches_f_dot: bool,
    pub samples: Vec<SampleVerdict<S>>,
}

impl<S: Scalar> EcsVerdict<S> {
    pub fn locus_description(&self) -> String {
        if self.locally_symmetric_locus.is_empty() {
            "empty on the sampled set".to_string()
        } else if self.locally_symmetric_locus.len() == self.samples.len() {
            "every sampled point".to_string()
        } else {
            let ts: Vec<String> = self.locally_symmetric_locus.iter().map(|t| t.to_string()).collect();
            format!("f' = 0 at sampled t in {{{}}}", ts.join(", "))
        }
    }
}

fn sample<S: Scalar>(view: &ModelView<'_, S>, p: &ChartPoint<S>) -> Result<SampleVerdict<S>, CurvatureError> {
    let curv = curvature_at(view, p, Depth::FirstDerivatives)?;
    let w = curv.weyl_value()?;
    let n = curv.dim();
    let g = curv.metric.value();
    let gm = Matrix::from_fn(n, n, |i, j| g.get(&[i, j]).clone());
    let olszak = olszak_from_weyl(&gm, &w);
    let f_dot = view.f_jet(&p.t).map_err(CurvatureError::from)?.derivative(1).clone();
    Ok(SampleVerdict {
        point: p.clone(),
        weyl_zero: w.is_zero(),
        nabla_weyl: curv.nabla_weyl().max_abs(),
        nabla_riemann: curv.nabla_riemann().max_abs(),
        f_dot,
        olszak_rank: olszak.rank,
        olszak_status: olszak.status,
    })
}

/// Classifies the model on the given sample points (processed in parallel,
/// results in input order).
pub fn classify_ecs<S: Scalar>(
    view: &ModelView<'_, S>,
    samples: &[ChartPoint<S>],
) -> Result<EcsVerdict<S>, CurvatureError> {
    if samples.is_empty() {
        return Err(CurvatureError::Model(ModelError::OutsideChart(
            "classification needs at least one sample point".into(),
        )));
    }
    let results: Vec<SampleVerdict<S>> = samples
        .par_iter()
        .map(|p| sample(view, p))
        .collect::<Result<_, _>>()?;
    let conformally_flat = results.iter().all(|r| r.weyl_zero);
    let mut locus: Vec<S> = Vec::new();
    for r in &results {
        if r.f_dot.is_negligible() && !locus.contains(&r.point.t) {
            locus.push(r.point.t.clone());
        }
    }
    let f_moves = results.iter().any(|r| !r.f_dot.is_negligible());
    let olszak_rank = results
        .iter()
        .filter(|r| !r.weyl_zero)
        .map(|r| r.olszak_rank)
        .max()
        .unwrap_or(0);
    Ok(EcsVerdict {
        conformally_flat,
        is_ecs: !conformally_flat && f_moves,
        locally_symmetric_locus: locus,
        olszak_rank,
        weyl_parallel: results.iter().all(|r| r.nabla_weyl.is_negligible()),
        local_symmetry_matches_f_dot: results
            .iter()
            .all(|r| r.nabla_riemann.is_negligible() == r.f_dot.is_negligible()),
        samples: results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Interval, ModelData, ProbeFlags};
    use crate::scalar::{int, ratio, Rational};

    fn model(f: &str, probe: ProbeFlags) -> ModelData {
        let g = Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        let a = Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(0), int(0)]]).unwrap();
        ModelData::new(g, a, f, Interval::real_line(), probe).unwrap()
    }

    fn points(ts: &[Rational]) -> Vec<ChartPoint<Rational>> {
        ts.iter()
            .map(|t| ChartPoint::new(t.clone(), int(1), vec![int(1), int(-2)]))
            .collect()
    }

    #[test]
    fn linear_profile_is_ecs() {
        let m = model("t", ProbeFlags::default());
        let v = classify_ecs(&m.view(), &points(&[int(1), int(2), ratio(-1, 2)])).unwrap();
        assert!(v.is_ecs);
        assert!(v.weyl_parallel);
        assert!(v.locally_symmetric_locus.is_empty());
        assert_eq!(v.olszak_rank, 2);
        assert!(v.local_symmetry_matches_f_dot);
    }

    #[test]
    fn constant_profile_is_locally_symmetric() {
        let probe = ProbeFlags {
            locally_symmetric: true,
            degenerate: false,
        };
        let m = model("2", probe);
        let v = classify_ecs(&m.view(), &points(&[int(1), int(3)])).unwrap();
        assert!(!v.is_ecs);
        assert_eq!(v.locally_symmetric_locus.len(), 2);
        assert!(v.samples.iter().all(|s| s.nabla_riemann.is_zero()));
    }

    #[test]
    fn square_profile_has_one_symmetric_point() {
        let m = model("(t-1)^2", ProbeFlags::default());
        let v = classify_ecs(&m.view(), &points(&[ratio(1, 2), int(1), int(2)])).unwrap();
        assert_eq!(v.locally_symmetric_locus, vec![int(1)]);
        assert!(v.local_symmetry_matches_f_dot);
        assert!(v.is_ecs);
    }
}
