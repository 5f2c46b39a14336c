//! Periods of `χ dt` along a deck loop and the invariant primitive of a
//! log-periodic function.

use ecs_lab::model::Interval;
use ecs_lab::scalar::{int, parse_f};
use ecs_lab::symmetry::{construct_invariant_primitive, period_integral};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let positive = Interval::positive();
    for chi in ["t^-1", "t^2 - t^-3", "exp(-t)"] {
        let p = period_integral(&parse_f(chi)?, &int(2), &int(0), &int(1), &positive)?;
        println!("∫ {chi} over [1, 2] = {:.12} (exact {:?}, {:?})", p.value, p.exact, p.method);
    }
    println!("ln 2 = {:.12}", std::f64::consts::LN_2);

    let chi = parse_f("t^-1 * cos(2*pi*ln(t)/ln(2))")?;
    let mu = construct_invariant_primitive(&chi, &int(2), &int(0), &int(1), &positive)?;
    println!("log-periodic period = {:.3e}", mu.period.value);
    println!("max |μ(2t) - μ(t)| over {} samples = {:.3e}", mu.samples.len(), mu.invariance_residual);
    if let Some((a, b)) = mu.nonconstancy_witness {
        println!("μ takes different values at t = {a:.4} and t = {b:.4}");
    }
    Ok(())
}
