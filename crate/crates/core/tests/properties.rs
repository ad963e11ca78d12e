//! Randomized invariants.

use biharmlab::blowup::{bubble_fraction, bubble_k, Pchip};
use biharmlab::config::RunConfig;
use biharmlab::green::{green_dirichlet_biharmonic_ball, BallPoint};
use biharmlab::grid::{GridKind, RadialGrid};
use biharmlab::nonlinearity::{Kind, NonlinearitySpec, Potential};
use biharmlab::output::{csv_string, parse_csv};
use biharmlab::radial::{solve, BoundaryCondition, SolverConfig};
use biharmlab::source::Forcing;
use proptest::prelude::*;

fn ball_point() -> impl Strategy<Value = BallPoint> {
    (prop::array::uniform4(-1.0f64..1.0), 0.0f64..0.98).prop_map(|(dir, r)| {
        let n = dir.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-9);
        BallPoint::new(dir.map(|c| c / n * r)).unwrap()
    })
}

fn catalog() -> impl Strategy<Value = NonlinearitySpec> {
    prop_oneof![
        (0.2f64..3.0).prop_map(|gamma| Kind::PureExp { gamma }),
        (0.2f64..3.0, 0.0f64..3.0).prop_map(|(gamma, q)| Kind::ExpPoly { gamma, q }),
        (1.1f64..4.0, 0.0f64..0.95).prop_map(|(p, alpha)| Kind::PowerExp { p, alpha }),
        (0.5f64..2.0, 1.1f64..3.0, 0.1f64..0.95).prop_map(|(theta, p, alpha)| Kind::LogPowerExp { theta, p, alpha }),
    ]
    .prop_map(|k| NonlinearitySpec::new(k, Potential::Constant(1.0)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn biharmonic_kernel_symmetric_and_positive(x in ball_point(), y in ball_point()) {
        prop_assume!(x.dist(&y) > 1e-3);
        let gxy = green_dirichlet_biharmonic_ball(&x, &y).unwrap().value;
        let gyx = green_dirichlet_biharmonic_ball(&y, &x).unwrap().value;
        prop_assert!((gxy - gyx).abs() <= 1e-12 * gxy.abs().max(1.0));
        prop_assert!(gxy > 0.0);
    }

    #[test]
    fn log_value_matches_direct_value(spec in catalog(), t in 0.01f64..30.0) {
        let direct = spec.eval_f(t).value();
        prop_assert!((spec.ln_f(t).exp() / direct - 1.0).abs() < 1e-12);
    }

    #[test]
    fn primitive_differentiates_back(spec in catalog(), t in 0.5f64..20.0) {
        let h = 1e-4 * t.max(1.0);
        let fd = (spec.eval_big_f(t + h).unwrap() - spec.eval_big_f(t - h).unwrap()) / (2.0 * h);
        let f = spec.eval_f(t).value();
        prop_assert!((fd / f - 1.0).abs() < 1e-5, "fd {} vs f {}", fd, f);
    }

    #[test]
    fn fraction_is_monotone_probability(beta in 0.2f64..5.0, a in 0.5f64..30.0, r1 in 0.0f64..20.0, dr in 0.0f64..20.0) {
        let k = bubble_k(beta, a);
        let (f1, f2) = (bubble_fraction(k, r1), bubble_fraction(k, r1 + dr));
        prop_assert!((0.0..=1.0).contains(&f1) && (0.0..=1.0).contains(&f2));
        prop_assert!(f2 >= f1 - 1e-15);
    }

    #[test]
    fn pchip_interpolates_and_preserves_monotonicity(steps in prop::collection::vec(0.01f64..1.0, 3..20), t in 0.0f64..1.0) {
        let x: Vec<f64> = (0..steps.len()).map(|i| i as f64).collect();
        let y: Vec<f64> = steps.iter().scan(0.0, |acc, s| { *acc += s; Some(*acc) }).collect();
        let p = Pchip::new(&x, &y).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            prop_assert!((p.eval(*xi) - yi).abs() < 1e-12);
        }
        let i = (t * (x.len() - 1) as f64).min((x.len() - 2) as f64);
        prop_assert!(p.eval(i) <= p.eval(i + 0.5) + 1e-12);
    }

    #[test]
    fn csv_round_trip(rows in prop::collection::vec(prop::array::uniform3(prop::num::f64::NORMAL | prop::num::f64::ZERO), 0..30)) {
        let text = csv_string(&["a", "b", "c"], &rows);
        let (_, back) = parse_csv(&text).unwrap();
        prop_assert_eq!(back.len(), rows.len());
        for (r, b) in rows.iter().zip(&back) {
            prop_assert_eq!(&r[..], &b[..]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn plate_response_is_linear_in_load(g in 1.0f64..500.0) {
        let grid = RadialGrid::new(129, GridKind::DEFAULT).unwrap();
        let sol = solve(&Forcing::constant(g), 1.0, BoundaryCondition::Dirichlet, &grid, &SolverConfig::default(), None).unwrap();
        for (&r, &u) in grid.nodes.iter().zip(&sol.u) {
            let exact = g / 192.0 * (1.0 - r * r).powi(2);
            prop_assert!((u - exact).abs() <= 1e-8 * g.max(1.0));
        }
    }

    #[test]
    fn config_round_trips_through_toml(lambda in 0.0f64..10.0, nodes in 33usize..2000, seed in 0..=i64::MAX as u64) {
        let mut cfg = RunConfig::default();
        cfg.solver.lambda = lambda;
        cfg.solver.nodes = nodes;
        cfg.green.seed = seed;
        let back = RunConfig::parse(&cfg.to_toml()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
