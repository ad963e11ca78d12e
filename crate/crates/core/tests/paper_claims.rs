//! Qualitative and exact statements of the underlying analysis, checked numerically.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use biharmlab::blowup::bubble_total_energy;
use biharmlab::counterexample::{a_convergence_scale, delta_of, params_for_rho, solve_x0, y0_of, UBeta};
use biharmlab::green::{green_navier_biharmonic_pole, kernel_property_suite, polyharmonic_constants};
use biharmlab::nonlinearity::{Classification, Kind, NonlinearitySpec, Potential};

fn spec(kind: Kind) -> NonlinearitySpec {
    NonlinearitySpec::new(kind, Potential::Constant(1.0)).unwrap()
}

#[test]
fn growth_classes() {
    assert_eq!(spec(Kind::PureExp { gamma: 2.0 }).classify().unwrap(), Classification::Critical(2.0));
    assert_eq!(
        spec(Kind::ExpPoly { gamma: 1.0, q: 1.0 }).classify().unwrap(),
        Classification::Critical(1.0)
    );
    assert_eq!(spec(Kind::PowerExp { p: 2.0, alpha: 0.5 }).classify().unwrap(), Classification::Subcritical);
    assert_eq!(
        spec(Kind::LogPowerExp { theta: 1.0, p: 2.0, alpha: 0.9 }).classify().unwrap(),
        Classification::Subcritical
    );
}

#[test]
fn dirichlet_kernel_is_positive() {
    let suite = kernel_property_suite(10_000, 42).unwrap();
    assert!(suite.all_positive);
    assert!(suite.passed);
}

#[test]
fn navier_pole_kernel_log_bound() {
    let c = (1..200)
        .map(|i| {
            let z = i as f64 / 200.0;
            green_navier_biharmonic_pole(z).unwrap() / (1.0 + (1.0 - z) / (z * z)).ln()
        })
        .fold(0.0, f64::max);
    assert!(c.is_finite() && c > 0.0);
}

#[test]
fn energy_quantum() {
    let c2 = polyharmonic_constants(2).unwrap();
    assert_relative_eq!(c2.gamma_m, 8.0 * PI * PI, max_relative = 1e-13);
    assert_relative_eq!(c2.theta(1.0), 64.0 * PI * PI, max_relative = 1e-13);
    assert_relative_eq!(bubble_total_energy(1.0, 1.0).unwrap(), 64.0 * PI * PI, max_relative = 1e-8);
    for m in 1..=4 {
        let c = polyharmonic_constants(m).unwrap();
        for beta in [0.5, 1.0, 3.0] {
            assert_relative_eq!(beta * c.theta(beta) / c.gamma_m, 4.0 * m as f64, max_relative = 1e-13);
        }
    }
}

#[test]
fn root_lies_left_of_minus_one() {
    for alpha in [1.1, 1.5, 1.9] {
        let x0 = solve_x0(alpha).unwrap();
        assert!(x0 < -1.0, "alpha {alpha}: x0 = {x0}");
    }
    for i in 1..20 {
        let alpha = 1.0 + i as f64 / 20.0;
        let x0 = solve_x0(alpha).unwrap();
        assert!(y0_of(alpha, x0).unwrap() > 0.0, "alpha {alpha}");
    }
}

#[test]
fn beta_scales_like_ell_power() {
    let ratios: Vec<f64> = [1e2, 1e3, 1e4].iter().map(|&l| params_for_rho(1.5, l).unwrap().beta_ratio()).collect();
    let (lo, hi) = ratios.iter().fold((f64::MAX, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(lo > 0.0);
    assert!(hi / lo < 2.0, "ratios {ratios:?}");
}

#[test]
fn bilaplacian_asymptotics_and_sign() {
    let p = params_for_rho(1.5, 1e3).unwrap();
    let ub = UBeta::new(1.5, p.beta).unwrap();
    for ell in [1e3, 1e4, 1e5, 1e6] {
        assert!(ub.bilaplacian(ell).unwrap().scaled > 0.0);
    }
    let scaled = |ell: f64| ub.bilaplacian(ell).unwrap().scaled * ell.powf(2.0 - 1.0 / 1.5);
    let target = 8.0 / 9.0;
    assert!((scaled(1e6) - target).abs() < (scaled(1e4) - target).abs());
    assert!((scaled(1e6) / target - 1.0).abs() < 0.05);
}

#[test]
fn exponent_excess_vanishes() {
    let p = params_for_rho(1.5, 1e3).unwrap();
    let delta = delta_of(1.5);
    let rem = |ell: f64| (p.w_alpha_excess(ell).unwrap() - 4.0 * delta * ell.ln()).abs();
    let seq: Vec<f64> = [1e4, 1e6, 1e8, 1e10].iter().map(|&l| rem(l)).collect();
    assert!(seq.windows(2).all(|w| w[1] < w[0]), "{seq:?}");
}

#[test]
fn potential_approaches_its_limit_slowly() {
    let p = params_for_rho(1.5, 1e3).unwrap();
    let target = p.limit_potential();
    assert!((target - 2.24).abs() < 1e-3);
    let gap = |ell: f64| (p.eval_a(ell).unwrap().0 - target.ln()).abs();
    assert!(gap(1e12) < gap(1e8) && gap(1e8) < gap(1e6));
    let ell = a_convergence_scale(&p, 0.05, 1e30).expect("a reaches its limit on the scan");
    assert!(ell > 1e6);
}
