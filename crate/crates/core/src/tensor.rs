//! Dense tensor components on the `n`-dimensional chart, at a point or as
//! truncated Taylor series around a point.

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Scalar;
use crate::series::Series;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    Upper,
    Lower,
}

/// Index symmetry that a tensor must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric(usize, usize),
    Antisymmetric(usize, usize),
    /// `T_{abcd} = T_{cdab}`.
    PairExchange,
    /// `T_{abcd} + T_{acdb} + T_{adbc} = 0`.
    FirstBianchi,
}

impl std::fmt::Display for Symmetry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Symmetry::Symmetric(i, j) => write!(f, "symmetric in slots {i},{j}"),
            Symmetry::Antisymmetric(i, j) => write!(f, "antisymmetric in slots {i},{j}"),
            Symmetry::PairExchange => write!(f, "pair exchange"),
            Symmetry::FirstBianchi => write!(f, "first Bianchi identity"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("tensor violates {symmetry} (residual {residual})")]
    SymmetryViolated { symmetry: String, residual: f64 },
    #[error("symmetry {0} does not apply to a rank-{1} tensor")]
    BadSymmetry(String, usize),
}

fn offset(n: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| {
        debug_assert!(i < n);
        acc * n + i
    })
}

/// Iterates all multi-indices of the given rank in row-major order.
pub fn multi_indices(n: usize, rank: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(rank as u32);
    (0..total).map(move |mut k| {
        let mut idx = vec![0; rank];
        for slot in (0..rank).rev() {
            idx[slot] = k % n;
            k /= n;
        }
        idx
    })
}

/// Components of a tensor at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorValue<S> {
    n: usize,
    variance: Vec<Slot>,
    comps: Vec<S>,
}

impl<S: Scalar> TensorValue<S> {
    pub fn zeros(n: usize, variance: Vec<Slot>) -> Self {
        let len = n.pow(variance.len() as u32);
        Self {
            n,
            variance,
            comps: vec![S::zero(); len],
        }
    }

    pub fn from_fn(n: usize, variance: Vec<Slot>, mut f: impl FnMut(&[usize]) -> S) -> Self {
        let comps = multi_indices(n, variance.len()).map(|idx| f(&idx)).collect();
        Self { n, variance, comps }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Slot] {
        &self.variance
    }

    pub fn get(&self, idx: &[usize]) -> &S {
        &self.comps[offset(self.n, idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: S) {
        let o = offset(self.n, idx);
        self.comps[o] = v;
    }

    pub fn components(&self) -> &[S] {
        &self.comps
    }

    pub fn max_abs(&self) -> S {
        crate::linalg::max_abs(&self.comps)
    }

    /// Zero up to the mode's tolerance.
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_negligible())
    }

    /// Multi-indices and values of the entries that are not negligible.
    pub fn nonzero_entries(&self) -> Vec<(Vec<usize>, S)> {
        multi_indices(self.n, self.rank())
            .zip(self.comps.iter())
            .filter(|(_, c)| !c.is_negligible())
            .map(|(i, c)| (i, c.clone()))
            .collect()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self {
            n: self.n,
            variance: self.variance.clone(),
            comps: self
                .comps
                .iter()
                .zip(&rhs.comps)
                .map(|(a, b)| a.clone() - b)
                .collect(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TensorValue<T> {
        TensorValue {
            n: self.n,
            variance: self.variance.clone(),
            comps: self.comps.iter().map(f).collect(),
        }
    }

    /// Max-norm of the defect of one symmetry.
    pub fn symmetry_residual(&self, sym: Symmetry) -> Result<S, TensorError> {
        let rank = self.rank();
        let needs = match sym {
            Symmetry::Symmetric(i, j) | Symmetry::Antisymmetric(i, j) => i.max(j) < rank && i != j,
            Symmetry::PairExchange | Symmetry::FirstBianchi => rank == 4,
        };
        if !needs {
            return Err(TensorError::BadSymmetry(sym.to_string(), rank));
        }
        let mut worst = S::zero();
        for idx in multi_indices(self.n, rank) {
            let v = self.get(&idx).clone();
            let defect = match sym {
                Symmetry::Symmetric(i, j) | Symmetry::Antisymmetric(i, j) => {
                    let mut sw = idx.clone();
                    sw.swap(i, j);
                    let w = self.get(&sw).clone();
                    if matches!(sym, Symmetry::Symmetric(..)) {
                        v - w
                    } else {
                        v + w
                    }
                }
                Symmetry::PairExchange => v - self.get(&[idx[2], idx[3], idx[0], idx[1]]),
                Symmetry::FirstBianchi => {
                    let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
                    v + self.get(&[a, c, d, b]) + self.get(&[a, d, b, c])
                }
            };
            let defect = defect.abs();
            if defect.to_f64() > worst.to_f64() {
                worst = defect;
            }
        }
        Ok(worst)
    }

    /// Checks each listed symmetry, failing on the first violation.
    pub fn enforce(self, symmetries: &[Symmetry]) -> Result<Self, TensorError> {
        for &sym in symmetries {
            let r = self.symmetry_residual(sym)?;
            if !r.is_negligible() {
                return Err(TensorError::SymmetryViolated {
                    symmetry: sym.to_string(),
                    residual: r.to_f64(),
                });
            }
        }
        Ok(self)
    }
}

/// Tensor whose components are truncated Taylor series around a point.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorSeries<S> {
    n: usize,
    variance: Vec<Slot>,
    comps: Vec<Series<S>>,
}

impl<S: Scalar> TensorSeries<S> {
    pub fn zeros(n: usize, variance: Vec<Slot>) -> Self {
        let len = n.pow(variance.len() as u32);
        Self {
            n,
            variance,
            comps: vec![Series::zero(); len],
        }
    }

    pub fn from_fn(n: usize, variance: Vec<Slot>, mut f: impl FnMut(&[usize]) -> Series<S>) -> Self {
        let comps = multi_indices(n, variance.len()).map(|idx| f(&idx)).collect();
        Self { n, variance, comps }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Slot] {
        &self.variance
    }

    pub fn get(&self, idx: &[usize]) -> &Series<S> {
        &self.comps[offset(self.n, idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Series<S>) {
        let o = offset(self.n, idx);
        self.comps[o] = v;
    }

    /// Components at the base point.
    pub fn value(&self) -> TensorValue<S> {
        TensorValue {
            n: self.n,
            variance: self.variance.clone(),
            comps: self.comps.iter().map(|s| s.value()).collect(),
        }
    }

    /// Partial derivatives at the base point, as a tensor with one extra
    /// trailing lower slot: `∂_e T_{...}` is stored at `[..., e]`.
    pub fn partials(&self) -> TensorValue<S> {
        let mut variance = self.variance.clone();
        variance.push(Slot::Lower);
        let derivs: Vec<Vec<S>> = (0..self.n)
            .map(|e| self.comps.iter().map(|s| s.derivative(e).value()).collect())
            .collect();
        let mut out = TensorValue::zeros(self.n, variance);
        for (k, slot) in out.comps.iter_mut().enumerate() {
            *slot = derivs[k % self.n][k / self.n].clone();
        }
        out
    }

    /// Lowest truncation order over the components.
    pub fn order(&self) -> u8 {
        self.comps.iter().map(|s| s.order()).min().unwrap_or(crate::series::EXACT)
    }

    pub fn components(&self) -> &[Series<S>] {
        &self.comps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    #[test]
    fn indexing_is_row_major() {
        let t = TensorValue::<Rational>::from_fn(3, vec![Slot::Lower, Slot::Lower], |i| {
            int((i[0] * 10 + i[1]) as i64)
        });
        assert_eq!(*t.get(&[2, 1]), int(21));
        assert_eq!(t.components()[7], int(21));
        assert_eq!(multi_indices(2, 3).count(), 8);
    }

    #[test]
    fn symmetry_checks() {
        let sym = TensorValue::<Rational>::from_fn(3, vec![Slot::Lower, Slot::Lower], |i| {
            int((i[0] + i[1]) as i64)
        });
        assert!(sym.clone().enforce(&[Symmetry::Symmetric(0, 1)]).is_ok());
        assert!(matches!(
            sym.enforce(&[Symmetry::Antisymmetric(0, 1)]),
            Err(TensorError::SymmetryViolated { .. })
        ));
    }

    #[test]
    fn partials_append_trailing_slot() {
        let mut ts = TensorSeries::<Rational>::zeros(2, vec![Slot::Lower]);
        ts.set(&[1], Series::variable(0, int(5)).mul(&Series::constant(int(3))));
        let p = ts.partials();
        assert_eq!(*p.get(&[1, 0]), int(3));
        assert_eq!(*p.get(&[1, 1]), int(0));
        assert_eq!(*ts.value().get(&[1]), int(15));
    }
}
