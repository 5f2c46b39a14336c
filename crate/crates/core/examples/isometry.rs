//! A deck-type isometry `(t, s, x) ↦ (qt + p, s/q + c, Bx)`: pullback
//! residuals and the scaling laws it forces on `f`.

use ecs_lab::linalg::Matrix;
use ecs_lab::model::{ChartPoint, Interval, ModelData, ProbeFlags};
use ecs_lab::scalar::{int, ratio, Rational};
use ecs_lab::symmetry::{check_equivariance, verify_isometry, IsometryWitness};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(1), int(0)]])?;
    let a = Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(0), int(0)]])?;
    let homogeneous = ModelData::new(g.clone(), a.clone(), "t^-2", Interval::positive(), ProbeFlags::default())?;
    let linear = ModelData::new(g, a, "t", Interval::real_line(), ProbeFlags::default())?;

    let w = IsometryWitness::new(homogeneous.gram(), int(2), int(0), int(0), Matrix::diagonal(&[int(2), ratio(1, 2)]))?;
    let pts: Vec<ChartPoint<Rational>> = (1..=4).map(|k| ChartPoint::new(ratio(k, 2), int(k), vec![int(1), int(-k)])).collect();
    println!("f = t^-2: residual {}", verify_isometry(&homogeneous.view::<Rational>(), &w, &pts)?);
    println!("f = t:    residual {}", verify_isometry(&linear.view::<Rational>(), &w, &pts)?);
    println!("pullback of ∂n: {} ∂n", w.pullback_multiplier_of_last_coordinate()?);

    let ts: Vec<Rational> = (1..=4).map(|k| ratio(k, 2)).collect();
    for law in check_equivariance(&homogeneous, &int(3), &int(0), &ts)? {
        println!("  {:<28} residual {:.1e} ({})", law.law, law.residual, if law.exact { "exact" } else { "float" });
    }
    Ok(())
}
