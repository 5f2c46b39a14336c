//! Affine-type isometry witnesses `(t, s, x) ↦ (qt + p, q⁻¹s + c, Bx)`.

use crate::linalg::Matrix;
use crate::model::{ChartPoint, ModelView};
use crate::pseudo_linear::{InnerProduct, LinearIsometry};
use crate::scalar::Scalar;

use super::SymmetryError;

#[derive(Debug, Clone, PartialEq)]
pub struct IsometryWitness<S: Scalar> {
    pub q: S,
    pub p: S,
    /// Shift of `s`.
    pub c: S,
    pub b: LinearIsometry<S>,
}

impl<S: Scalar> IsometryWitness<S> {
    /// Checks `q > 0` and `Bᵀ G B = G`.
    pub fn new(gram: &InnerProduct<S>, q: S, p: S, c: S, b: Matrix<S>) -> Result<Self, SymmetryError> {
        if q.sign() <= 0 {
            return Err(SymmetryError::NonPositiveMultiplier(q.to_string()));
        }
        let b = LinearIsometry::new(gram, b)?;
        Ok(Self { q, p, c, b })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            q: S::one(),
            p: S::zero(),
            c: S::zero(),
            b: LinearIsometry::identity(dim),
        }
    }

    /// Image of a point.
    pub fn apply(&self, pt: &ChartPoint<S>) -> ChartPoint<S> {
        let qinv = self.q.recip().expect("q > 0");
        ChartPoint {
            t: self.q.clone() * &pt.t + &self.p,
            s: qinv * &pt.s + &self.c,
            x: self.b.matrix().mul_vec(&pt.x),
        }
    }

    /// The action on `t` alone.
    pub fn apply_t(&self, t: &S) -> S {
        self.q.clone() * t + &self.p
    }

    /// Jacobian in chart coordinates `(t, x, s/2)`: `diag(q, B, q⁻¹)`.
    pub fn jacobian(&self) -> Matrix<S> {
        let dim = self.b.matrix().rows();
        let n = dim + 2;
        let mut j = Matrix::zeros(n, n);
        j[(0, 0)] = self.q.clone();
        for r in 0..dim {
            for c in 0..dim {
                j[(r + 1, c + 1)] = self.b.matrix()[(r, c)].clone();
            }
        }
        j[(n - 1, n - 1)] = self.q.recip().expect("q > 0");
        j
    }

    /// Multiplier `m` with `γ*∂ₙ = (dγ)⁻¹∂ₙ = m ∂ₙ`. The parallel field
    /// spanning the Olszak distribution is a multiple of `∂ₙ`, so this is the
    /// factor by which `γ` pulls it back.
    pub fn pullback_multiplier_of_last_coordinate(&self) -> Result<S, SymmetryError> {
        let jinv = self.jacobian().inverse()?;
        let n = jinv.rows();
        let col = jinv.column(n - 1);
        if col[..n - 1].iter().any(|v| !v.is_negligible()) {
            return Err(SymmetryError::NotAffineType);
        }
        Ok(col[n - 1].clone())
    }

    pub fn map<T: Scalar>(&self, gram: &InnerProduct<T>, f: impl Fn(&S) -> T) -> Result<IsometryWitness<T>, SymmetryError> {
        IsometryWitness::new(gram, f(&self.q), f(&self.p), f(&self.c), self.b.matrix().map(&f))
    }
}

/// Max-norm of `γ*g − g` over the samples: at each point `p` the residual
/// is `Jᵀ g(γp) J − g(p)` with `J` the Jacobian of `γ`.
pub fn verify_isometry<S: Scalar>(
    view: &ModelView<'_, S>,
    witness: &IsometryWitness<S>,
    samples: &[ChartPoint<S>],
) -> Result<S, SymmetryError> {
    let interval = view.model().interval();
    let j = witness.jacobian();
    let jt = j.transpose();
    let mut worst = S::zero();
    for pt in samples {
        let image = witness.apply(pt);
        if !interval.contains(&image.t) {
            return Err(SymmetryError::ImageOutside(format!(
                "t = {} maps to {} outside {}",
                pt.t, image.t, interval
            )));
        }
        let g0 = view.metric_at(pt)?.g;
        let g1 = view.metric_at(&image)?.g;
        let r = jt.mul(&g1).mul(&j).sub(&g0).max_abs();
        if crate::linalg::greater(&r, &worst) {
            worst = r;
        }
    }
    Ok(worst)
}
