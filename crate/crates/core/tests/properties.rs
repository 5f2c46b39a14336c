use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ecs_lab::curvature::{curvature_at, Depth, RIEMANN_SYMMETRIES};
use ecs_lab::lab::{random_model, random_points, sweep_samples};
use ecs_lab::linalg::Matrix;
use ecs_lab::model::{Interval, ModelData, ProbeFlags};
use ecs_lab::pseudo_linear::{conjugacy_solve, isometry_defect, scaling_orbit_check};
use ecs_lab::scalar::{int, parse_f, ratio, Jet, Rational, Scalar};
use ecs_lab::symmetry::{holonomy_group, AffineMap, HolonomyClass};

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

fn jet() -> impl Strategy<Value = Jet<Rational>> {
    proptest::array::uniform5(rational()).prop_map(Jet::new)
}

fn central_difference(f: &dyn Fn(f64) -> f64, t: f64) -> f64 {
    let h = 1e-5;
    (f(t + h) - f(t - h)) / (2.0 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_rule_holds_to_fourth_order(u in jet(), v in jet()) {
        let w = u.clone() * v.clone();
        for k in 0..=4usize {
            let mut expected = int(0);
            for j in 0..=k {
                let binom = (1..=j).fold(1i64, |acc, i| acc * (k + 1 - i) as i64 / i as i64);
                expected += u.derivative(j).clone() * v.derivative(k - j) * int(binom);
            }
            prop_assert_eq!(w.derivative(k), &expected);
        }
    }

    #[test]
    fn jet_derivative_matches_finite_difference(a in 1i64..4, b in -3i64..3, t in 0.2f64..3.0) {
        let text = format!("{a}*t^3 - {b}*sin(t) + exp(t/{a}) + 1/(t + 5)");
        let f = parse_f(&text).unwrap();
        let j = f.eval_jet(&t).unwrap();
        let eval = |x: f64| f.eval(&x).unwrap();
        let fd = central_difference(&eval, t);
        prop_assert!((j.derivative(1) - fd).abs() < 1e-6 * (1.0 + fd.abs()), "{} vs {}", j.derivative(1), fd);
        let d1 = |x: f64| *f.eval_jet(&x).unwrap().derivative(1);
        let fd2 = central_difference(&d1, t);
        prop_assert!((j.derivative(2) - fd2).abs() < 1e-6 * (1.0 + fd2.abs()));
    }

    #[test]
    fn chain_rule_for_powers_is_exact(a in rational(), b in rational(), t in rational()) {
        prop_assume!(!a.is_zero());
        let f = parse_f(&format!("({a}*t + {b})^3")).unwrap();
        let j = f.eval_jet(&t).unwrap();
        let inner = a.clone() * &t + &b;
        prop_assert_eq!(j.derivative(1), &(int(3) * &a * &inner * &inner));
        prop_assert_eq!(j.derivative(2), &(int(6) * &a * &a * &inner));
        prop_assert_eq!(j.derivative(3), &(int(6) * &a * &a * &a));
        prop_assert!(j.derivative(4).is_zero());
    }

    #[test]
    fn conjugacy_witness_for_any_positive_multiplier(num in 1i64..40, den in 1i64..12) {
        let q = ratio(num, den);
        let g = Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        let a = Matrix::from_rational_rows(&[vec![int(0), int(1)], vec![int(0), int(0)]]).unwrap();
        let m = ModelData::new(g, a, "t", Interval::real_line(), ProbeFlags::default()).unwrap();
        let sol = conjugacy_solve(m.gram(), m.endomorphism(), &q).unwrap();
        let b = sol.witness().expect("nilpotent A always conjugates");
        prop_assert!(isometry_defect(m.gram(), b.matrix()).is_zero());
        prop_assert!(scaling_orbit_check(m.endomorphism(), b.matrix(), &q).unwrap().is_zero());
    }

    #[test]
    fn holonomy_never_reports_finite_nontrivial(
        gens in proptest::collection::vec((1i64..5, 1i64..5, -4i64..=4), 1..4),
        t0 in -4i64..=4,
    ) {
        let maps: Vec<AffineMap> = gens.iter().map(|&(n, d, p)| AffineMap::new(ratio(n, d), int(p))).collect();
        let r = holonomy_group(&maps, &int(t0), 4, &Interval::real_line());
        let nontrivial = r.multipliers.iter().any(|q| q != "1");
        prop_assert_eq!(nontrivial, r.classification == HolonomyClass::Infinite);
        prop_assert!(r.multipliers.contains(&"1".to_string()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn riemann_and_weyl_symmetries_hold_exactly(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_model(&mut rng, 4).unwrap();
        let pts = random_points(&mut rng, &sweep_samples(&m, 2), m.interval(), 2);
        for p in &pts {
            let c = curvature_at(&m.view::<Rational>(), p, Depth::Values).unwrap();
            for sym in RIEMANN_SYMMETRIES {
                prop_assert!(c.riemann.value().symmetry_residual(sym).unwrap().is_zero());
                prop_assert!(c.weyl.value().symmetry_residual(sym).unwrap().is_zero());
            }
            prop_assert!(c.scalar_value().is_zero());
        }
    }
}
