//! Seeded generation of admissible models and chart sample points.

use rand::Rng;

use crate::linalg::Matrix;
use crate::model::{Bound, ChartPoint, Interval, ModelData, ProbeFlags};
use crate::scalar::{int, Rational, Scalar};

use super::config::{default_t_window, SampleSpec};

/// Attempts per model before giving up.
pub const RETRY_CAP: usize = 1000;

/// Rational in `[lo, hi]` with denominator at most 8 (times the range's).
pub fn random_rational<R: Rng>(rng: &mut R, lo: &Rational, hi: &Rational) -> Rational {
    let den: i64 = rng.gen_range(1..=8);
    let k: i64 = rng.gen_range(0..=den);
    lo.clone() + (hi.clone() - lo) * Rational::new(k.into(), den.into())
}

/// Chart points with `t` strictly inside the model interval.
pub fn random_points<R: Rng>(rng: &mut R, spec: &SampleSpec, interval: &Interval, dim_x: usize) -> Vec<ChartPoint<Rational>> {
    (0..spec.points)
        .map(|_| {
            let t = loop {
                let t = random_rational(rng, &spec.t.0, &spec.t.1);
                if interval.contains(&t) {
                    break t;
                }
            };
            let s = random_rational(rng, &spec.s.0, &spec.s.1);
            let x = (0..dim_x).map(|_| random_rational(rng, &spec.x.0, &spec.x.1)).collect();
            ChartPoint::new(t, s, x)
        })
        .collect()
}

fn small<R: Rng>(rng: &mut R, range: i64) -> Rational {
    int(rng.gen_range(-range..=range))
}

fn nonzero<R: Rng>(rng: &mut R, range: i64) -> Rational {
    loop {
        let v = small(rng, range);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Unimodular `P = LU` (unit triangular factors with entries in
/// {-1, 0, 1}) and random signs `D`.
fn random_frame<R: Rng>(rng: &mut R, dim: usize) -> (Matrix<Rational>, Vec<Rational>) {
    let l = Matrix::from_fn(dim, dim, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => int(1),
        std::cmp::Ordering::Greater => small(rng, 1),
        std::cmp::Ordering::Less => int(0),
    });
    let u = Matrix::from_fn(dim, dim, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => int(1),
        std::cmp::Ordering::Less => small(rng, 1),
        std::cmp::Ordering::Greater => int(0),
    });
    let d = (0..dim).map(|_| if rng.gen_bool(0.5) { int(1) } else { int(-1) }).collect();
    (l.mul(&u), d)
}

/// Gram matrix `G = Pᵀ D P` and traceless self-adjoint
/// `A = P⁻¹ D S P − (tr(DS)/dim) I` with `S` small symmetric, so that
/// `GA = Pᵀ S P − shift·G` is symmetric and every entry stays moderate.
/// `None` when `rank A < 2`.
fn random_data<R: Rng>(rng: &mut R, dim: usize) -> Option<(Matrix<Rational>, Matrix<Rational>)> {
    let (p, d) = random_frame(rng, dim);
    let d = Matrix::diagonal(&d);
    let g = p.transpose().mul(&d).mul(&p);
    let mut s = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = small(rng, 2);
            s[(i, j)] = v.clone();
            s[(j, i)] = v;
        }
    }
    let ds = d.mul(&s);
    let shift = ds.trace() / int(dim as i64);
    let a = p.inverse().ok()?.mul(&ds).mul(&p).sub(&Matrix::identity(dim).scale(&shift));
    (a.rank() >= 2).then_some((g, a))
}

/// Profile families with `ḟ ≠ 0` on the interval.
fn random_profile<R: Rng>(rng: &mut R) -> (String, Interval) {
    let p = |r: &Rational| format!("({r})");
    match rng.gen_range(0..4) {
        0 => {
            let (a, b) = (nonzero(rng, 3), small(rng, 3));
            (format!("{}*t + {}", p(&a), p(&b)), Interval::real_line())
        }
        1 => {
            let (a, c) = (nonzero(rng, 3), small(rng, 2));
            let interval = Interval::new(Bound::Finite(c.clone()), Bound::PosInf).expect("half-line");
            (format!("{}*(t - {})^-2", p(&a), p(&c)), interval)
        }
        2 => loop {
            let (a, b, c) = (small(rng, 3), small(rng, 3), small(rng, 2));
            if (a.clone() * &c + &b).is_zero() {
                continue;
            }
            let interval = Interval::new(Bound::Finite(c.clone()), Bound::PosInf).expect("half-line");
            break (format!("({}*t + {})/(t - {})", p(&a), p(&b), p(&c)), interval);
        },
        _ => {
            let a = nonzero(rng, 2);
            let b = a.clone() * int(rng.gen_range(1..=3));
            (format!("{}*t^3 + {}*t", p(&a), p(&b)), Interval::real_line())
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("no admissible model of dimension {n} after {attempts} attempts")]
pub struct GenerationError {
    pub n: usize,
    pub attempts: usize,
}

/// Admissible model of dimension `n` whose `A` has rank at least 2.
pub fn random_model<R: Rng>(rng: &mut R, n: usize) -> Result<ModelData, GenerationError> {
    let dim = n.checked_sub(2).ok_or(GenerationError { n, attempts: 0 })?;
    for _ in 0..RETRY_CAP {
        let Some((g, a)) = random_data(rng, dim) else { continue };
        let (f, interval) = random_profile(rng);
        if let Ok(m) = ModelData::new(g, a, &f, interval, ProbeFlags::default()) {
            return Ok(m);
        }
    }
    Err(GenerationError { n, attempts: RETRY_CAP })
}

/// Sample spec for a generated model: the default window of its interval.
pub fn sweep_samples(model: &ModelData, points: usize) -> SampleSpec {
    SampleSpec {
        points,
        t: default_t_window(model.interval()),
        ..SampleSpec::default_for(model.interval())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn models_are_admissible_and_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut again = ChaCha8Rng::seed_from_u64(3);
        for n in 4..=8 {
            let m = random_model(&mut rng, n).unwrap();
            let m2 = random_model(&mut again, n).unwrap();
            assert_eq!(m.f_text(), m2.f_text());
            assert_eq!(m.gram().gram(), m2.gram().gram());
            assert_eq!(m.n(), n);
            assert!(m.endomorphism().matrix().rank() >= 2);
            assert!(m.endomorphism().matrix().trace().is_zero());
            let pts = random_points(&mut rng, &sweep_samples(&m, 5), m.interval(), n - 2);
            let pts2 = random_points(&mut again, &sweep_samples(&m2, 5), m2.interval(), n - 2);
            assert_eq!(pts, pts2);
            assert!(pts.iter().all(|p| m.interval().contains(&p.t)));
        }
    }
}
