//! Curvature of a five-dimensional Roter metric at one chart point, in exact
//! arithmetic: Ricci against `(2-n) f`, scalar curvature and `∇W`.

use ecs_lab::curvature::{curvature_at, Depth};
use ecs_lab::linalg::Matrix;
use ecs_lab::model::{ChartPoint, Interval, ModelData, ProbeFlags};
use ecs_lab::scalar::{int, ratio, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Lorentzian-type inner product on R^3 and a traceless self-adjoint A.
    let g = Matrix::from_rational_rows(&[
        vec![int(1), int(0), int(0)],
        vec![int(0), int(0), int(1)],
        vec![int(0), int(1), int(0)],
    ])?;
    let a = Matrix::from_rational_rows(&[
        vec![int(2), int(0), int(0)],
        vec![int(0), int(-1), int(1)],
        vec![int(0), int(0), int(-1)],
    ])?;
    let model = ModelData::new(g, a, "t^3 - 2*t + 5", Interval::real_line(), ProbeFlags::default())?;
    let view = model.view::<Rational>();
    let p = ChartPoint::new(int(0), ratio(1, 2), vec![int(1), ratio(-2, 3), int(3)]);

    let c = curvature_at(&view, &p, Depth::FirstDerivatives)?;
    let n = model.n();
    println!("n = {n}, f = {}, point t = {}", model.f_text(), p.t);
    println!("f(t) = {}", view.f_jet(&p.t)?.value());
    println!("Ricci nonzero entries:");
    for (idx, v) in c.ricci_value()?.nonzero_entries() {
        println!("  Ric{idx:?} = {v}");
    }
    println!("(2-n) f(t) = {}", view.f_jet(&p.t)?.value() * int(2 - n as i64));
    println!("scalar curvature = {}", c.scalar_value());
    println!("max |∇W| = {}", c.nabla_weyl().max_abs());
    println!("max |∇R| = {}", c.nabla_riemann().max_abs());
    Ok(())
}
