//! Finite-dimensional function spaces on a finite set and the construction
//! of a basis with disjoint positivity sets.

use rand::Rng;
use serde::Serialize;

use crate::linalg::Matrix;
use crate::scalar::{int, Rational, Scalar};

use super::SymmetryError;

/// `radicand^(1/index)` with a nonnegative radicand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Radical {
    pub radicand: Rational,
    pub index: u32,
}

impl Radical {
    pub fn exact(v: Rational) -> Self {
        Self { radicand: v, index: 1 }
    }

    pub fn is_zero(&self) -> bool {
        self.radicand.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.radicand.sign() > 0
    }

    pub fn to_f64(&self) -> f64 {
        self.radicand.to_f64().powf(1.0 / self.index as f64)
    }

    /// The exact rational value, when there is one.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.index == 1 {
            return Some(self.radicand.clone());
        }
        self.radicand
            .rational_pow(&Rational::new(1.into(), self.index.into()))
            .ok()
            .or_else(|| self.is_zero().then(Rational::zero))
    }
}

impl std::fmt::Display for Radical {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.to_rational() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "({})^(1/{})", self.radicand, self.index),
        }
    }
}

impl Serialize for Radical {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An `m`-argument operation on nonnegative values whose output vanishes
/// exactly where some argument vanishes.
pub trait Pi {
    fn name(&self) -> &'static str;
    fn apply(&self, args: &[Rational]) -> Radical;
}

/// Geometric mean of absolute values.
#[derive(Debug, Clone, Copy, Default)]
pub struct GeometricMean;

impl Pi for GeometricMean {
    fn name(&self) -> &'static str {
        "geometric-mean"
    }

    fn apply(&self, args: &[Rational]) -> Radical {
        let radicand = args.iter().fold(Rational::one(), |acc, a| acc * a.abs());
        Radical {
            radicand,
            index: args.len().max(1) as u32,
        }
    }
}

/// Product of absolute values.
#[derive(Debug, Clone, Copy, Default)]
pub struct Product;

impl Pi for Product {
    fn name(&self) -> &'static str {
        "product"
    }

    fn apply(&self, args: &[Rational]) -> Radical {
        Radical::exact(args.iter().fold(Rational::one(), |acc, a| acc * a.abs()))
    }
}

/// Span of `basis`, each a vector of values over the labelled set `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunctionSpace {
    pub labels: Vec<String>,
    pub basis: Vec<Vec<Rational>>,
}

impl SampledFunctionSpace {
    pub fn new(labels: Vec<String>, basis: Vec<Vec<Rational>>) -> Result<Self, SymmetryError> {
        if basis.is_empty() {
            return Err(SymmetryError::DegenerateSpace("the space has no generators".into()));
        }
        if let Some(v) = basis.iter().find(|v| v.len() != labels.len()) {
            return Err(SymmetryError::DegenerateSpace(format!(
                "generator has {} values for {} labels",
                v.len(),
                labels.len()
            )));
        }
        let space = Self { labels, basis };
        if space.matrix().rank() < space.basis.len() {
            return Err(SymmetryError::DegenerateSpace("generators are linearly dependent".into()));
        }
        Ok(space)
    }

    /// Labels `1..=size`.
    pub fn numbered(size: usize, basis: Vec<Vec<Rational>>) -> Result<Self, SymmetryError> {
        Self::new((1..=size).map(|k| k.to_string()).collect(), basis)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Generators as rows.
    pub fn matrix(&self) -> Matrix<Rational> {
        Matrix::from_rows(self.basis.clone()).expect("rows have equal length")
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(rows).expect("rows have equal length").rank() == self.dim()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisConstruction {
    pub pi: &'static str,
    /// Indices of the points `x₁ … x_m` with independent evaluations.
    pub points: Vec<usize>,
    /// Indices where every `χⱼ` vanishes.
    pub x0: Vec<usize>,
    /// `Xⱼ`, the positivity set of `χⱼ`.
    pub partition: Vec<Vec<usize>>,
    pub basis: Vec<Vec<Radical>>,
    /// `χⱼ(xᵢ) = δᵢⱼ`.
    pub evaluation_is_identity: bool,
    pub independent: bool,
}

fn abs_vec(v: &[Rational]) -> Vec<Rational> {
    v.iter().map(|x| x.abs()).collect()
}

fn parts(v: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let half = Rational::new(1.into(), 2.into());
    let plus = v.iter().map(|x| (x.abs() + x) * &half).collect();
    let minus = v.iter().map(|x| (x.abs() - x) * &half).collect();
    (plus, minus)
}

/// Builds `χ₁ … χ_m` with `χⱼ > 0` exactly on `Xⱼ`, the `Xⱼ` pairwise
/// disjoint. Requires the space to be closed under `abs`; closure under
/// `pi` is assumed, not checked.
pub fn basis_construct(space: &SampledFunctionSpace, pi: &dyn Pi) -> Result<BasisConstruction, SymmetryError> {
    let m = space.dim();
    let size = space.labels.len();
    let (_, pivots) = space.matrix().rref();
    if pivots.len() < m {
        return Err(SymmetryError::DegenerateSpace("no m points with independent evaluations".into()));
    }
    // E[k][i] = φ_k(x_i); τ_j = Σ_k (E⁻¹)[j][k] φ_k has τ_j(x_i) = δ_ij.
    let e = Matrix::from_fn(m, m, |k, i| space.basis[k][pivots[i]].clone());
    let c = e.inverse()?;
    let tau: Vec<Vec<Rational>> = (0..m)
        .map(|j| {
            (0..size)
                .map(|x| (0..m).fold(Rational::zero(), |acc, k| acc + c[(j, k)].clone() * &space.basis[k][x]))
                .collect()
        })
        .collect();
    let total: Vec<Rational> = (0..size)
        .map(|x| tau.iter().fold(Rational::zero(), |acc, t| acc + &t[x]))
        .collect();
    let sigma: Vec<Vec<Rational>> = tau
        .iter()
        .map(|t| t.iter().zip(&total).map(|(a, s)| a * int(2) - s).collect())
        .collect();
    for v in space.basis.iter().chain(&sigma) {
        if !space.contains(&abs_vec(v)) {
            let shown: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            return Err(SymmetryError::NotClosedUnderAbs(format!("|({})|", shown.join(", "))));
        }
    }
    let split: Vec<(Vec<Rational>, Vec<Rational>)> = sigma.iter().map(|s| parts(s)).collect();
    let basis: Vec<Vec<Radical>> = (0..m)
        .map(|j| {
            (0..size)
                .map(|x| {
                    let args: Vec<Rational> = (0..m)
                        .map(|i| if i == j { split[i].0[x].clone() } else { split[i].1[x].clone() })
                        .collect();
                    let out = pi.apply(&args);
                    debug_assert_eq!(out.is_zero(), args.iter().any(|a| a.is_zero()));
                    out
                })
                .collect()
        })
        .collect();
    let partition: Vec<Vec<usize>> = basis
        .iter()
        .map(|chi| (0..size).filter(|&x| chi[x].is_positive()).collect())
        .collect();
    let x0: Vec<usize> = (0..size).filter(|x| !partition.iter().any(|p| p.contains(x))).collect();
    let disjoint = partition.iter().map(|p| p.len()).sum::<usize>() + x0.len() == size;
    if !disjoint {
        return Err(SymmetryError::DegenerateSpace("positivity sets overlap".into()));
    }
    let evaluation_is_identity = (0..m).all(|j| {
        (0..m).all(|i| {
            let v = &basis[j][pivots[i]];
            if i == j { v.to_rational() == Some(Rational::one()) } else { v.is_zero() }
        })
    });
    Ok(BasisConstruction {
        pi: pi.name(),
        points: pivots,
        x0,
        partition,
        basis,
        evaluation_is_identity,
        independent: evaluation_is_identity,
    })
}

/// Random space closed under `abs`: random invertible combinations of `m`
/// nonnegative functions with disjoint supports on `size` points.
pub fn random_closed_space<R: Rng>(rng: &mut R, m: usize, size: usize) -> SampledFunctionSpace {
    assert!(m >= 1 && m <= size);
    let mut owner: Vec<Option<usize>> = (0..size).map(|x| (x < m).then_some(x)).collect();
    for slot in owner.iter_mut().skip(m) {
        if rng.gen_bool(0.75) {
            *slot = Some(rng.gen_range(0..m));
        }
    }
    let phi: Vec<Vec<Rational>> = (0..m)
        .map(|k| {
            (0..size)
                .map(|x| if owner[x] == Some(k) { int(rng.gen_range(1..=9)) } else { Rational::zero() })
                .collect()
        })
        .collect();
    loop {
        let mix = Matrix::from_fn(m, m, |_, _| int(rng.gen_range(-3..=3)));
        if mix.rank() < m {
            continue;
        }
        let basis = (0..m)
            .map(|r| {
                (0..size)
                    .map(|x| (0..m).fold(Rational::zero(), |acc, k| acc + mix[(r, k)].clone() * &phi[k][x]))
                    .collect()
            })
            .collect();
        return SampledFunctionSpace::numbered(size, basis).expect("invertible mix of independent functions");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn all_functions_on_two_points() {
        let space = SampledFunctionSpace::numbered(2, vec![v(&[1, 1]), v(&[1, -1])]).unwrap();
        let b = basis_construct(&space, &GeometricMean).unwrap();
        assert!(b.x0.is_empty());
        assert_eq!(b.partition, vec![vec![0], vec![1]]);
        assert_eq!(b.basis[0][0].to_rational(), Some(int(1)));
        assert!(b.basis[0][1].is_zero());
        assert!(b.evaluation_is_identity);
    }

    #[test]
    fn positive_line() {
        let space = SampledFunctionSpace::numbered(3, vec![v(&[2, 3, 5])]).unwrap();
        let b = basis_construct(&space, &GeometricMean).unwrap();
        assert!(b.x0.is_empty());
        assert_eq!(b.partition, vec![vec![0, 1, 2]]);
        assert!(b.basis[0].iter().all(|c| c.is_positive()));
    }

    #[test]
    fn abs_closure_failure() {
        let space = SampledFunctionSpace::numbered(3, vec![v(&[1, -1, 0]), v(&[0, -1, 1])]).unwrap();
        assert!(matches!(
            basis_construct(&space, &GeometricMean),
            Err(SymmetryError::NotClosedUnderAbs(_))
        ));
    }

    #[test]
    fn geometric_mean_keeps_radicals() {
        let r = GeometricMean.apply(&[int(2), int(1)]);
        assert_eq!(r.to_rational(), None);
        assert_eq!(r.to_string(), "(2)^(1/2)");
        assert!((r.to_f64() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn random_spaces_split() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m = rng.gen_range(1..=4);
            let size = rng.gen_range(m..=10);
            let space = random_closed_space(&mut rng, m, size);
            for pi in [&GeometricMean as &dyn Pi, &Product] {
                let b = basis_construct(&space, pi).unwrap();
                assert!(b.evaluation_is_identity);
                for (j, set) in b.partition.iter().enumerate() {
                    assert!(!set.is_empty());
                    for x in 0..size {
                        assert_eq!(b.basis[j][x].is_positive(), set.contains(&x));
                    }
                }
            }
        }
    }
}
