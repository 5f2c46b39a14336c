//! Local homogeneity test `(|f|^{-1/2})'' = 0` and the explicit dilation
//! witnessing it.

use ecs_lab::homogeneity::{build_homogeneous_witness, homogeneity_criterion};
use ecs_lab::linalg::Matrix;
use ecs_lab::model::{Bound, ChartPoint, Interval, ModelData, ProbeFlags};
use ecs_lab::scalar::{int, parse_f, ratio, Rational};
use ecs_lab::symmetry::verify_isometry;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let right_of_3 = Interval::new(Bound::Finite(int(3)), Bound::PosInf)?;
    let samples: Vec<Rational> = [ratio(7, 2), int(4), int(5), int(9)].into();
    for f in ["4*(t-3)^-2", "t", "(t-3)^-3"] {
        let v = homogeneity_criterion::<Rational>(&parse_f(f)?, &right_of_3, &samples)?;
        let canonical = v.canonical.map(|c| format!("ε = {}, b = {}", c.epsilon, c.b));
        println!(
            "{f:<12} homogeneous: {:<5} residual {:.3e}  canonical: {}",
            v.criterion_ii,
            v.second_derivative_residual,
            canonical.unwrap_or_else(|| "-".into())
        );
    }

    let g = Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(1), int(0)]])?;
    let a = Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(0), int(0)]])?;
    let model = ModelData::new(g, a, "4*(t-3)^-2", right_of_3, ProbeFlags::default())?;
    let q = int(3);
    let w = build_homogeneous_witness(&model, &q)?;
    println!("witness for q = {q}: t ↦ {} t + {}, B = {}", w.q, w.p, w.b.matrix());
    let pts: Vec<ChartPoint<Rational>> = samples.iter().map(|t| ChartPoint::new(t.clone(), int(1), vec![int(2), int(-1)])).collect();
    println!("pullback residual: {}", verify_isometry(&model.view::<Rational>(), &w, &pts)?);
    Ok(())
}
