//! Seeded random sweep: every curvature identity on random admissible
//! models, in exact and float arithmetic.

use ecs_lab::lab::random_model_sweep;
use ecs_lab::scalar::Mode;

fn main() {
    for mode in [Mode::Exact, Mode::Float] {
        let report = random_model_sweep(3, &[4, 5], 11, mode, 5);
        print!("{}", report.to_text());
        println!();
    }
}
