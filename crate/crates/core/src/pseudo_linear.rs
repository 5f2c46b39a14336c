//! Pseudo-Euclidean linear algebra on the fibre space `V`: inner products,
//! admissible endomorphisms, linear isometries and the scaling conjugacy
//! `B A B⁻¹ = q² A`.

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{dot, Matrix, MatrixError};
use crate::scalar::{Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinearError {
    #[error("Gram matrix is not square")]
    NotSquare,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("pseudo-Euclidean inner product must be nondegenerate (zero determinant)")]
    Degenerate,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not an isometry of the inner product")]
    NotIsometry,
    #[error("scaling factor q must be positive")]
    NonPositiveMultiplier,
    #[error("endomorphism is not self-adjoint")]
    NotSelfAdjoint,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Counts of positive and negative squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
}

impl Signature {
    pub fn new(plus: usize, minus: usize) -> Self {
        Self { plus, minus }
    }

    pub fn is_definite(&self) -> bool {
        self.plus == 0 || self.minus == 0
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.plus, self.minus)
    }
}

/// Nondegenerate symmetric bilinear form on `V`, given by its Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProduct<S: Scalar> {
    gram: Matrix<S>,
    signature: Signature,
}

impl<S: Scalar> InnerProduct<S> {
    /// Validates the Gram matrix and computes its signature by Lagrange
    /// completion of squares.
    pub fn new(gram: Matrix<S>) -> Result<Self, LinearError> {
        if !gram.is_square() {
            return Err(LinearError::NotSquare);
        }
        if !gram.is_symmetric() {
            return Err(LinearError::NotSymmetric);
        }
        let signature = lagrange_signature(&gram).ok_or(LinearError::Degenerate)?;
        Ok(Self { gram, signature })
    }

    pub fn gram(&self) -> &Matrix<S> {
        &self.gram
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn apply(&self, u: &[S], v: &[S]) -> S {
        self.gram.bilinear(u, v)
    }

    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> InnerProduct<T> {
        InnerProduct {
            gram: self.gram.map(f),
            signature: self.signature,
        }
    }
}

fn lagrange_signature<S: Scalar>(gram: &Matrix<S>) -> Option<Signature> {
    let n = gram.rows();
    let mut m = gram.clone();
    let mut sig = Signature::new(0, 0);
    for k in 0..n {
        if let Some(i) = (k..n).find(|&i| !m[(i, i)].is_negligible()) {
            swap_congruent(&mut m, i, k);
        } else {
            // No usable diagonal entry: e_i ↦ e_i + e_j turns M_ij into 2M_ij on the diagonal.
            let (i, j) = (k..n)
                .flat_map(|i| (k..n).map(move |j| (i, j)))
                .find(|&(i, j)| i != j && !m[(i, j)].is_negligible())?;
            for c in 0..n {
                let v = m[(i, c)].clone() + &m[(j, c)];
                m[(i, c)] = v;
            }
            for r in 0..n {
                let v = m[(r, i)].clone() + &m[(r, j)];
                m[(r, i)] = v;
            }
            swap_congruent(&mut m, i, k);
        }
        let pivot = m[(k, k)].clone();
        if pivot.sign() > 0 {
            sig.plus += 1;
        } else {
            sig.minus += 1;
        }
        for r in k + 1..n {
            if m[(r, k)].is_zero() {
                continue;
            }
            let factor = m[(r, k)].checked_div(&pivot).ok()?;
            for c in k..n {
                let v = m[(r, c)].clone() - factor.clone() * &m[(k, c)];
                m[(r, c)] = v;
            }
            for rr in k..n {
                let v = m[(rr, r)].clone() - factor.clone() * &m[(rr, k)];
                m[(rr, r)] = v;
            }
        }
    }
    Some(sig)
}

fn swap_congruent<S: Scalar>(m: &mut Matrix<S>, i: usize, k: usize) {
    if i == k {
        return;
    }
    let n = m.rows();
    for c in 0..n {
        let tmp = m[(i, c)].clone();
        m[(i, c)] = m[(k, c)].clone();
        m[(k, c)] = tmp;
    }
    for r in 0..n {
        let tmp = m[(r, i)].clone();
        m[(r, i)] = m[(r, k)].clone();
        m[(r, k)] = tmp;
    }
}

/// Linear endomorphism of `V`; column `j` is the image of basis vector `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Endomorphism<S: Scalar> {
    mat: Matrix<S>,
}

/// Which of the admissibility clauses (nonzero, traceless, self-adjoint)
/// an endomorphism satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub nonzero: bool,
    pub traceless: bool,
    pub self_adjoint: bool,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.nonzero && self.traceless && self.self_adjoint
    }

    /// Names of the violated clauses.
    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.nonzero {
            v.push("nonzero");
        }
        if !self.traceless {
            v.push("traceless");
        }
        if !self.self_adjoint {
            v.push("self-adjoint");
        }
        v
    }
}

impl<S: Scalar> Endomorphism<S> {
    pub fn new(mat: Matrix<S>) -> Self {
        Self { mat }
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.mat
    }

    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Endomorphism<T> {
        Endomorphism { mat: self.mat.map(f) }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.mat.nilpotency_index().is_some()
    }
}

/// Checks each admissibility clause separately.
pub fn validate_endomorphism<S: Scalar>(
    g: &InnerProduct<S>,
    a: &Endomorphism<S>,
) -> Result<AdmissibilityReport, LinearError> {
    let m = a.matrix();
    if !m.is_square() || m.rows() != g.dim() {
        return Err(LinearError::Dimension(format!(
            "endomorphism is {}x{}, inner product has dimension {}",
            m.rows(),
            m.cols(),
            g.dim()
        )));
    }
    Ok(AdmissibilityReport {
        nonzero: !m.is_zero(),
        traceless: m.trace().is_negligible(),
        self_adjoint: g.gram().mul(m).is_symmetric(),
    })
}

/// Invertible `B` with `Bᵀ G B = G`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearIsometry<S: Scalar> {
    mat: Matrix<S>,
}

impl<S: Scalar> LinearIsometry<S> {
    pub fn new(g: &InnerProduct<S>, mat: Matrix<S>) -> Result<Self, LinearError> {
        if !mat.is_square() || mat.rows() != g.dim() {
            return Err(LinearError::Dimension("isometry shape".into()));
        }
        if !isometry_defect(g, &mat).is_zero() {
            return Err(LinearError::NotIsometry);
        }
        Ok(Self { mat })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: Matrix::identity(dim),
        }
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix<S> {
        self.mat
    }
}

/// `Bᵀ G B − G`.
pub fn isometry_defect<S: Scalar>(g: &InnerProduct<S>, b: &Matrix<S>) -> Matrix<S> {
    b.transpose().mul(g.gram()).mul(b).sub(g.gram())
}

/// Max-norm of `B A B⁻¹ − q² A`.
pub fn scaling_orbit_check<S: Scalar>(a: &Endomorphism<S>, b: &Matrix<S>, q: &S) -> Result<S, LinearError> {
    let binv = b.inverse()?;
    let lhs = b.mul(a.matrix()).mul(&binv);
    let rhs = a.matrix().scale(&(q.clone() * q));
    Ok(lhs.sub(&rhs).max_abs())
}

/// Why no isometry `B` with `B A B⁻¹ = q² A` exists.
#[derive(Debug, Clone, PartialEq)]
pub enum Obstruction<S> {
    /// The characteristic polynomials of `A` and `q² A` differ, so the
    /// eigenvalue multisets differ; this happens exactly when `q ≠ 1` and
    /// `A` has a nonzero eigenvalue.
    Spectral {
        char_poly: Vec<S>,
        scaled_char_poly: Vec<S>,
    },
}

impl<S: Scalar> std::fmt::Display for Obstruction<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Obstruction::Spectral { char_poly, scaled_char_poly } => {
                let show = |p: &[S]| p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ");
                write!(
                    f,
                    "spectral: char poly of A [{}] differs from that of q²A [{}]",
                    show(char_poly),
                    show(scaled_char_poly)
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Conjugacy<S: Scalar> {
    Witness(LinearIsometry<S>),
    NoSolution(Obstruction<S>),
}

impl<S: Scalar> Conjugacy<S> {
    pub fn witness(&self) -> Option<&LinearIsometry<S>> {
        match self {
            Conjugacy::Witness(b) => Some(b),
            Conjugacy::NoSolution(_) => None,
        }
    }
}

/// Finds a linear isometry `B` of `g` with `B A B⁻¹ = q² A`, or certifies
/// that none exists.
///
/// For `q = 1` the identity is returned. For `q ≠ 1` a witness exists iff `A`
/// is nilpotent: otherwise the characteristic polynomials of `A` and `q²A`
/// differ. A nilpotent self-adjoint `A` splits `V` into mutually orthogonal
/// nondegenerate cyclic blocks, each with a basis `e_1 … e_m`
/// (`A e_1 = 0`, `A e_k = e_(k−1)`) in which only the antidiagonal Gram entries
/// are nonzero; scaling `e_k` by `q^(m+1−2k)` then gives `B`.
pub fn conjugacy_solve<S: Scalar>(
    g: &InnerProduct<S>,
    a: &Endomorphism<S>,
    q: &S,
) -> Result<Conjugacy<S>, LinearError> {
    if q.sign() <= 0 {
        return Err(LinearError::NonPositiveMultiplier);
    }
    let report = validate_endomorphism(g, a)?;
    if !report.self_adjoint {
        return Err(LinearError::NotSelfAdjoint);
    }
    let dim = g.dim();
    if (q.clone() - &S::one()).is_negligible() {
        return Ok(Conjugacy::Witness(LinearIsometry::identity(dim)));
    }
    let char_poly = a.matrix().characteristic_polynomial();
    let q2 = q.clone() * q;
    let scaled_char_poly: Vec<S> = char_poly
        .iter()
        .enumerate()
        .map(|(k, c)| c.clone() * &q2.powi(k as i64).expect("q > 0"))
        .collect();
    let differs = char_poly
        .iter()
        .zip(&scaled_char_poly)
        .any(|(x, y)| !(x.clone() - y).is_negligible());
    if differs {
        return Ok(Conjugacy::NoSolution(Obstruction::Spectral {
            char_poly,
            scaled_char_poly,
        }));
    }

    let blocks = cyclic_blocks(g, a.matrix())?;
    let mut columns = Vec::with_capacity(dim);
    let mut scales = Vec::with_capacity(dim);
    for block in blocks {
        let m = block.len() as i64;
        for (k, e) in block.into_iter().enumerate() {
            scales.push(q.powi(m - 1 - 2 * k as i64)?);
            columns.push(e);
        }
    }
    let p = Matrix::from_columns(&columns);
    let b = p.mul(&Matrix::diagonal(&scales)).mul(&p.inverse()?);
    let witness = LinearIsometry::new(g, b)?;
    debug_assert!(scaling_orbit_check(a, witness.matrix(), q)?.is_negligible());
    Ok(Conjugacy::Witness(witness))
}

/// Orthogonal decomposition of `V` into `A`-cyclic blocks for nilpotent
/// self-adjoint `A`. Each block is returned as `[e_1, …, e_m]` with
/// `A e_1 = 0`, `A e_k = e_(k−1)`, and `⟨e_j, e_k⟩ = 0` unless `j + k = m + 1`.
pub fn cyclic_blocks<S: Scalar>(g: &InnerProduct<S>, a: &Matrix<S>) -> Result<Vec<Vec<Vec<S>>>, LinearError> {
    let dim = g.dim();
    let mut subspace: Vec<Vec<S>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect();
    let mut blocks = Vec::new();
    while !subspace.is_empty() {
        // Nilpotency index of A restricted to the (A-invariant) subspace.
        let mut m = 1;
        let mut images = subspace.clone();
        loop {
            images = images.iter().map(|u| a.mul_vec(u)).collect();
            if images.iter().all(|u| u.iter().all(Scalar::is_negligible)) {
                break;
            }
            m += 1;
            if m > dim {
                return Err(LinearError::Dimension("endomorphism is not nilpotent".into()));
            }
        }
        let a_top = a.pow(m as u32 - 1);
        let form = |v: &Vec<S>| g.apply(&a_top.mul_vec(v), v);
        let mut candidates: Vec<Vec<S>> = subspace.clone();
        for i in 0..subspace.len() {
            for j in i + 1..subspace.len() {
                candidates.push(subspace[i].iter().zip(&subspace[j]).map(|(x, y)| x.clone() + y).collect());
            }
        }
        let v = candidates
            .into_iter()
            .find(|v| !form(v).is_negligible())
            .ok_or(LinearError::Degenerate)?;
        let v = normalize_cyclic(g, a, &v, m);
        let mut chain = vec![v];
        for _ in 1..m {
            let next = a.mul_vec(chain.last().expect("nonempty"));
            chain.push(next);
        }
        // chain = [v, Av, …, A^(m−1)v]; the block basis runs the other way.
        chain.reverse();
        let constraints = Matrix::from_fn(chain.len(), subspace.len(), |k, i| g.apply(&chain[k], &subspace[i]));
        subspace = constraints
            .kernel()
            .into_iter()
            .map(|coeffs| {
                let mut u = vec![S::zero(); dim];
                for (c, basis) in coeffs.iter().zip(&subspace) {
                    for (ui, bi) in u.iter_mut().zip(basis) {
                        *ui = ui.clone() + c.clone() * bi;
                    }
                }
                u
            })
            .collect();
        blocks.push(chain);
    }
    Ok(blocks)
}

/// Replaces `v` by `p(A) v`, `p = 1 + c_1 x + …`, so that `⟨A^r v, v⟩ = 0`
/// for `r < m − 1`.
fn normalize_cyclic<S: Scalar>(g: &InnerProduct<S>, a: &Matrix<S>, v: &[S], m: usize) -> Vec<S> {
    let mut powers = vec![v.to_vec()];
    for _ in 1..m {
        let next = a.mul_vec(powers.last().expect("nonempty"));
        powers.push(next);
    }
    let moments: Vec<S> = powers.iter().map(|p| g.apply(p, v)).collect();
    let top = moments[m - 1].clone();
    let moment = |j: usize| if j < m { moments[j].clone() } else { S::zero() };
    let mut c = vec![S::one()];
    let mut square = vec![S::one()]; // coefficients of p²
    for j in 1..m {
        let cross = (1..j).fold(S::zero(), |acc, i| acc + c[i].clone() * &c[j - i]);
        let known = (0..j).fold(S::zero(), |acc, k| acc + square[k].clone() * &moment(m - 1 - j + k))
            + cross.clone() * &top;
        let cj = -known
            .checked_div(&(S::from_i64(2) * top.clone()))
            .expect("⟨A^(m−1)v, v⟩ ≠ 0");
        square.push(S::from_i64(2) * cj.clone() + cross);
        c.push(cj);
    }
    let mut out = vec![S::zero(); v.len()];
    for (coeff, p) in c.iter().zip(&powers) {
        for (o, x) in out.iter_mut().zip(p) {
            *o = o.clone() + coeff.clone() * x;
        }
    }
    out
}

/// `⟨u, v⟩` for plain vectors.
pub fn inner<S: Scalar>(g: &InnerProduct<S>, u: &[S], v: &[S]) -> S {
    dot(u, &g.gram().mul_vec(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio, Rational};

    fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
    }

    fn null_plane() -> InnerProduct<Rational> {
        InnerProduct::new(mat(&[&[0, 1], &[1, 0]])).unwrap()
    }

    fn jordan() -> Endomorphism<Rational> {
        Endomorphism::new(mat(&[&[0, 1], &[0, 0]]))
    }

    #[test]
    fn signatures() {
        assert_eq!(null_plane().signature(), Signature::new(1, 1));
        assert_eq!(InnerProduct::new(mat(&[&[1, 0], &[0, 1]])).unwrap().signature(), Signature::new(2, 0));
        assert_eq!(InnerProduct::new(mat(&[&[1, 1], &[1, 1]])), Err(LinearError::Degenerate));
        assert_eq!(InnerProduct::new(mat(&[&[1, 2], &[0, 1]])), Err(LinearError::NotSymmetric));
        let g = InnerProduct::new(mat(&[&[0, 0, 1], &[0, -1, 0], &[1, 0, 0]])).unwrap();
        assert_eq!(g.signature(), Signature::new(1, 2));
    }

    #[test]
    fn admissibility_clauses() {
        let r = validate_endomorphism(&null_plane(), &jordan()).unwrap();
        assert!(r.is_admissible());
        let id = InnerProduct::new(Matrix::identity(2)).unwrap();
        let r = validate_endomorphism(&id, &Endomorphism::new(Matrix::diagonal(&[int(1), int(-1)]))).unwrap();
        assert!(r.is_admissible());
        let r = validate_endomorphism(&id, &Endomorphism::new(Matrix::identity(2))).unwrap();
        assert_eq!(r.violations(), vec!["traceless"]);
        let r = validate_endomorphism(&id, &jordan()).unwrap();
        assert!(!r.self_adjoint);
    }

    #[test]
    fn jordan_witness_is_diagonal_scaling() {
        let c = conjugacy_solve(&null_plane(), &jordan(), &int(3)).unwrap();
        let b = c.witness().unwrap().matrix().clone();
        assert_eq!(b, Matrix::diagonal(&[int(3), ratio(1, 3)]));
    }

    #[test]
    fn definite_diagonal_is_spectrally_obstructed() {
        let id = InnerProduct::new(Matrix::identity(2)).unwrap();
        let a = Endomorphism::new(Matrix::diagonal(&[int(1), int(-1)]));
        match conjugacy_solve(&id, &a, &int(2)).unwrap() {
            Conjugacy::NoSolution(Obstruction::Spectral { char_poly, scaled_char_poly }) => {
                assert_eq!(char_poly, vec![int(1), int(0), int(-1)]);
                assert_eq!(scaled_char_poly, vec![int(1), int(0), int(-16)]);
            }
            other => panic!("{other:?}"),
        }
        let c = conjugacy_solve(&id, &a, &int(1)).unwrap();
        assert_eq!(c.witness().unwrap().matrix(), &Matrix::identity(2));
    }

    #[test]
    fn orbit_residuals() {
        let b = Matrix::diagonal(&[int(2), ratio(1, 2)]);
        assert_eq!(scaling_orbit_check(&jordan(), &b, &int(2)).unwrap(), int(0));
        assert_eq!(scaling_orbit_check(&jordan(), &b, &int(3)).unwrap(), int(5));
        assert_eq!(scaling_orbit_check(&jordan(), &Matrix::identity(2), &int(1)).unwrap(), int(0));
        assert!(scaling_orbit_check(&jordan(), &Matrix::zeros(2, 2), &int(1)).is_err());
    }

    #[test]
    fn three_dimensional_single_block() {
        // Gram with null flag; A e3 = e2, A e2 = e1, A e1 = 0 is self-adjoint here.
        let g = InnerProduct::new(mat(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])).unwrap();
        let a = Endomorphism::new(mat(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]));
        assert!(validate_endomorphism(&g, &a).unwrap().is_admissible());
        for q in [ratio(1, 3), int(2), int(5)] {
            let b = conjugacy_solve(&g, &a, &q).unwrap().witness().unwrap().matrix().clone();
            assert!(isometry_defect(&g, &b).is_zero());
            assert_eq!(scaling_orbit_check(&a, &b, &q).unwrap(), int(0));
        }
    }

    #[test]
    fn non_normalized_cyclic_vector() {
        // Same block written in a basis where the cyclic vector has ⟨v, v⟩ ≠ 0.
        let g0 = mat(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        let a0 = mat(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let p = mat(&[&[1, 2, 1], &[0, 1, 3], &[0, 0, 1]]);
        let pinv = p.inverse().unwrap();
        let g = InnerProduct::new(p.transpose().mul(&g0).mul(&p)).unwrap();
        let a = Endomorphism::new(pinv.mul(&a0).mul(&p));
        assert!(validate_endomorphism(&g, &a).unwrap().is_admissible());
        let q = ratio(7, 2);
        let b = conjugacy_solve(&g, &a, &q).unwrap().witness().unwrap().matrix().clone();
        assert!(isometry_defect(&g, &b).is_zero());
        assert_eq!(scaling_orbit_check(&a, &b, &q).unwrap(), int(0));
    }

    #[test]
    fn nilpotent_with_trivial_block() {
        // V = null plane ⊕ negative line, A a Jordan block on the plane.
        let g = InnerProduct::new(mat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1]])).unwrap();
        let a = Endomorphism::new(mat(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]));
        let q = int(10);
        let b = conjugacy_solve(&g, &a, &q).unwrap().witness().unwrap().matrix().clone();
        assert!(isometry_defect(&g, &b).is_zero());
        assert_eq!(scaling_orbit_check(&a, &b, &q).unwrap(), int(0));
    }

    #[test]
    fn rejects_nonpositive_q() {
        assert_eq!(
            conjugacy_solve(&null_plane(), &jordan(), &int(0)),
            Err(LinearError::NonPositiveMultiplier)
        );
    }
}
