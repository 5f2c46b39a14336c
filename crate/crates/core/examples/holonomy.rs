//! Leaf holonomy of affine deck actions on `t`: multipliers of words that
//! fix a leaf, and the trivial/infinite verdict.

use ecs_lab::model::Interval;
use ecs_lab::scalar::{int, ratio};
use ecs_lab::symmetry::{holonomy_group, AffineMap};

fn main() {
    let cases = [
        ("t ↦ 2t on (0, ∞)", vec![AffineMap::new(int(2), int(0))], int(1), Interval::positive()),
        ("translations", vec![AffineMap::new(int(1), int(1)), AffineMap::new(int(1), ratio(1, 2))], int(0), Interval::real_line()),
        ("t ↦ 4t, t ↦ 2t - 1", vec![AffineMap::new(int(4), int(0)), AffineMap::new(int(2), int(-1))], int(1), Interval::real_line()),
        ("t ↦ 2t on R, leaf t = 1", vec![AffineMap::new(int(2), int(0))], int(1), Interval::real_line()),
    ];
    for (name, gens, t0, interval) in cases {
        let r = holonomy_group(&gens, &t0, 5, &interval);
        println!("{name:<26} {:?}  multipliers {:?}", r.classification, r.multipliers);
        if let Some(c) = r.certificate {
            println!("{:<26} certificate: {c}", "");
        }
    }
}
