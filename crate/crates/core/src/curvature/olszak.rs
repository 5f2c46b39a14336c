//! The Olszak distribution `D`: tangent vectors `v` with
//! `g(v,·) ∧ W(v′,v″,·,·) = 0` for all `v′, v″`.

use serde::Serialize;

use crate::linalg::Matrix;
use crate::model::{ChartPoint, ModelView};
use crate::scalar::Scalar;
use crate::tensor::TensorValue;

use super::{curvature_at, CurvatureError, Depth};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OlszakStatus {
    /// Kernel is a line spanned by a null vector.
    RankOne,
    /// Kernel is a null plane.
    RankTwo,
    /// `W = 0` at the point: the wedge condition is empty.
    Degenerate,
    /// Any other kernel (dimension 0, or a non-null kernel).
    Unexpected,
}

/// Kernel of the wedge condition at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct OlszakReport<S> {
    /// Basis of `D`, as chart components.
    pub basis: Vec<Vec<S>>,
    pub rank: usize,
    pub status: OlszakStatus,
    /// Number of nonzero equations assembled.
    pub equations: usize,
    /// For rank one: true when the basis vector is a multiple of `∂ₙ`.
    pub spans_last_coordinate: bool,
    /// `∂ₙ ∈ D`.
    pub contains_last_coordinate: bool,
    /// For rank one: `max_{k≥1} |ξ_k / ξ_0|` with `ξ = g(v,·)`. Zero means
    /// `D⊥ = Ker ξ = Ker dt`. `None` when `ξ_0 = 0`.
    pub dperp_residual: Option<S>,
}

impl<S: Scalar> OlszakReport<S> {
    /// Rank one, spanned by `∂ₙ`, with `D⊥ = Ker dt`.
    pub fn is_rank_one_certificate(&self) -> bool {
        self.status == OlszakStatus::RankOne
            && self.spans_last_coordinate
            && self.dperp_residual.as_ref().is_some_and(|r| r.is_negligible())
    }
}

/// Assembles the wedge condition from `W_{abcd}` and `g_{ab}` at one point
/// and solves it by exact elimination.
pub fn olszak_from_weyl<S: Scalar>(g: &Matrix<S>, w: &TensorValue<S>) -> OlszakReport<S> {
    let n = g.rows();
    let mut rows: Vec<Vec<S>> = Vec::new();
    // (ξ ∧ ω)_{ade} = ξ_a ω_de + ξ_d ω_ea + ξ_e ω_ad, ω = W(e_b, e_c, ·, ·).
    for b in 0..n {
        for c in b + 1..n {
            for a in 0..n {
                for d in a + 1..n {
                    for e in d + 1..n {
                        let wde = w.get(&[b, c, d, e]);
                        let wea = w.get(&[b, c, e, a]);
                        let wad = w.get(&[b, c, a, d]);
                        if wde.is_zero() && wea.is_zero() && wad.is_zero() {
                            continue;
                        }
                        let row: Vec<S> = (0..n)
                            .map(|k| {
                                g[(a, k)].clone() * wde + g[(d, k)].clone() * wea + g[(e, k)].clone() * wad
                            })
                            .collect();
                        if row.iter().any(|x| !x.is_negligible()) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    let equations = rows.len();
    let degenerate = w.is_zero();
    let basis = if rows.is_empty() {
        (0..n)
            .map(|k| (0..n).map(|j| if j == k { S::one() } else { S::zero() }).collect())
            .collect()
    } else {
        Matrix::from_rows(rows).expect("rows have equal length").kernel()
    };
    let rank = basis.len();
    let null = basis
        .iter()
        .all(|u| basis.iter().all(|v| g.bilinear(u, v).is_negligible()));
    let status = if degenerate {
        OlszakStatus::Degenerate
    } else if rank == 1 && null {
        OlszakStatus::RankOne
    } else if rank == 2 && null {
        OlszakStatus::RankTwo
    } else {
        OlszakStatus::Unexpected
    };
    let contains_last_coordinate = if basis.is_empty() {
        false
    } else {
        let mut cols: Vec<Vec<S>> = basis.clone();
        cols.push((0..n).map(|k| if k == n - 1 { S::one() } else { S::zero() }).collect());
        Matrix::from_columns(&cols).rank() == rank
    };
    let (spans_last_coordinate, dperp_residual) = if rank == 1 {
        let v = &basis[0];
        let spans = v[..n - 1].iter().all(|c| c.is_negligible()) && !v[n - 1].is_negligible();
        let xi = g.mul_vec(v);
        let residual = if xi[0].is_negligible() {
            None
        } else {
            let ratios: Vec<S> = xi[1..]
                .iter()
                .map(|c| c.checked_div(&xi[0]).expect("nonzero pivot"))
                .collect();
            Some(crate::linalg::max_abs(&ratios))
        };
        (spans, residual)
    } else {
        (false, None)
    };
    OlszakReport {
        basis,
        rank,
        status,
        equations,
        spans_last_coordinate,
        contains_last_coordinate,
        dperp_residual,
    }
}

/// Computes `W` at `p` and solves for `D`.
pub fn olszak_distribution<S: Scalar>(
    view: &ModelView<'_, S>,
    p: &ChartPoint<S>,
) -> Result<OlszakReport<S>, CurvatureError> {
    let curv = curvature_at(view, p, Depth::Values)?;
    let g = curv.metric.value();
    let n = curv.dim();
    let gm = Matrix::from_fn(n, n, |i, j| g.get(&[i, j]).clone());
    Ok(olszak_from_weyl(&gm, &curv.weyl_value()?))
}
