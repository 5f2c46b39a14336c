//! Sampled classification: where is the metric locally symmetric, is it
//! ECS, and what is the rank of the Olszak distribution.

use ecs_lab::curvature::{classify_ecs, olszak_distribution};
use ecs_lab::linalg::Matrix;
use ecs_lab::model::{ChartPoint, Interval, ModelData, ProbeFlags};
use ecs_lab::scalar::{int, ratio, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Matrix::from_rational_rows(&[vec![int(1), int(0)], vec![int(0), int(1)]])?;
    let a = Matrix::from_rational_rows(&[vec![int(1), int(0)], vec![int(0), int(-1)]])?;
    let model = ModelData::new(g, a, "(t-1)^2", Interval::real_line(), ProbeFlags::default())?;
    let view = model.view::<Rational>();
    let samples: Vec<ChartPoint<Rational>> = [ratio(1, 2), int(1), int(2), int(3)]
        .into_iter()
        .map(|t| ChartPoint::new(t, int(0), vec![int(1), ratio(1, 2)]))
        .collect();

    let v = classify_ecs(&view, &samples)?;
    println!("f = {}", model.f_text());
    println!("conformally flat: {}", v.conformally_flat);
    println!("ECS on the samples: {}", v.is_ecs);
    println!("locally symmetric locus: {}", v.locus_description());
    println!("∇W = 0 everywhere sampled: {}", v.weyl_parallel);
    for s in &v.samples {
        println!("  t = {:>3}: f' = {:>3}, max|∇R| = {}", s.point.t, s.f_dot, s.nabla_riemann);
    }

    let d = olszak_distribution(&view, &samples[2])?;
    println!("Olszak distribution at t = 2: rank {} ({:?}), basis {}", d.rank, d.status, Matrix::from_rows(d.basis.clone())?);
    println!("rank-one certificate (D = span ∂n, D⊥ = Ker dt): {}", d.is_rank_one_certificate());
    Ok(())
}
