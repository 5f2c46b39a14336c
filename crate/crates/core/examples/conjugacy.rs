//! Solving `B A B⁻¹ = q² A` over linear isometries `B`, or certifying that
//! no solution exists.

use ecs_lab::linalg::Matrix;
use ecs_lab::pseudo_linear::{conjugacy_solve, Conjugacy, Endomorphism, InnerProduct};
use ecs_lab::scalar::{int, ratio};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A 3x3 nilpotent Jordan block, self-adjoint for the antidiagonal form.
    let g = InnerProduct::new(Matrix::from_rational_rows(&[
        vec![int(0), int(0), int(1)],
        vec![int(0), int(1), int(0)],
        vec![int(1), int(0), int(0)],
    ])?)?;
    let a = Endomorphism::new(Matrix::from_rational_rows(&[
        vec![int(0), int(1), int(0)],
        vec![int(0), int(0), int(1)],
        vec![int(0), int(0), int(0)],
    ])?);
    for q in [ratio(1, 2), int(3)] {
        match conjugacy_solve(&g, &a, &q)? {
            Conjugacy::Witness(b) => println!("q = {q}: B = {}", b.matrix()),
            Conjugacy::NoSolution(why) => println!("q = {q}: none ({why})"),
        }
    }

    let definite = InnerProduct::new(Matrix::identity(2))?;
    let diag = Endomorphism::new(Matrix::diagonal(&[int(1), int(-1)]));
    match conjugacy_solve(&definite, &diag, &int(2))? {
        Conjugacy::Witness(b) => println!("unexpected witness {}", b.matrix()),
        Conjugacy::NoSolution(why) => println!("definite inner product, q = 2: {why}"),
    }
    Ok(())
}
