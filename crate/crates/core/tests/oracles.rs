//! Closed-form and independently computed oracles against the public API.

use std::f64::consts::{E, LN_2, PI};

use approx::assert_relative_eq;
use biharmlab::blowup::{bubble, bubble_fraction, bubble_k, bubble_total_energy};
use biharmlab::counterexample::{implicit_system, params_for_rho, solve_implicit, solve_x0, y0_of};
use biharmlab::green::{
    green_dirichlet_biharmonic_ball, green_laplace_ball, represent, represent_navier_origin, verify_two_sided_estimate,
    BallPoint,
};
use biharmlab::grid::RadialGrid;
use biharmlab::nonlinearity::{fit_exp_bounds, verify_boundary_hypotheses, Kind, NonlinearitySpec, Potential};
use biharmlab::pohozaev::{pohozaev_annulus, pohozaev_ball};
use biharmlab::radial::{
    monotonicity_check, radial_bilaplacian_fn, solution_energy, solve, BoundaryCondition, RadialSolution, SolverConfig,
};
use biharmlab::source::Forcing;

fn plate(bc: BoundaryCondition, n: usize) -> RadialSolution {
    let grid = RadialGrid::new(n, biharmlab::grid::GridKind::DEFAULT).unwrap();
    solve(&Forcing::constant(192.0), 1.0, bc, &grid, &SolverConfig::default(), None).unwrap()
}

/// Bisection for `s^α = 1 + α s` on `s > 1`, returning `x0 = −s`.
fn bisect_x0(alpha: f64) -> f64 {
    let g = |s: f64| s.powf(alpha) - 1.0 - alpha * s;
    let (mut lo, mut hi) = (1.0, 100.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    -0.5 * (lo + hi)
}

#[test]
fn catalog_values_by_hand() {
    let pot = Potential::Constant(1.0);
    let ep = NonlinearitySpec::new(Kind::ExpPoly { gamma: 1.0, q: 2.0 }, pot.clone()).unwrap();
    assert_relative_eq!(ep.eval_f(1.0).value(), E / 4.0, max_relative = 1e-14);
    let pe = NonlinearitySpec::new(Kind::PowerExp { p: 2.0, alpha: 0.5 }, pot).unwrap();
    assert_relative_eq!(pe.eval_f(4.0).value(), 16.0 * E * E, max_relative = 1e-14);
    assert_relative_eq!(pe.eval_f(4.0).value(), 118.2245, max_relative = 1e-4);
}

#[test]
fn polynomial_envelope_dominates_power() {
    let spec = NonlinearitySpec::new(Kind::PowerExp { p: 2.0, alpha: 0.0 }, Potential::Constant(1.0)).unwrap();
    let fit = fit_exp_bounds(&spec, 0.5, 100.0).unwrap();
    for i in 0..10_000 {
        let t = 100.0 * i as f64 / 9999.0;
        assert!(fit.holds_at(&spec, t), "envelope fails at {t}");
        assert!(fit.d_eps * (0.5 * t).exp() + fit.c_eps >= t * t);
    }
}

#[test]
fn boundary_hypotheses_sign_checks() {
    let pure = |cs: Vec<f64>| NonlinearitySpec::new(Kind::PureExp { gamma: 1.0 }, Potential::RadialPolynomial(cs)).unwrap();
    assert!(verify_boundary_hypotheses(&pure(vec![1.0, 0.0, -0.5]), 0.2).unwrap().passed());
    let bad = verify_boundary_hypotheses(&pure(vec![1.0, 0.0, 1.0]), 0.2).unwrap();
    assert!(!bad.passed());
    assert!(bad.violations.iter().all(|v| v.r > 0.8 && v.r <= 1.0));
}

#[test]
fn kernel_point_values() {
    let x = BallPoint::new([0.5, 0.0, 0.0, 0.0]).unwrap();
    let y = BallPoint::new([0.0, 0.5, 0.0, 0.0]).unwrap();
    assert_relative_eq!(biharmlab::green::xy_bracket(&x, &y), 1.0625f64.sqrt(), max_relative = 1e-15);

    let o = BallPoint::new([0.0; 4]).unwrap();
    let h = BallPoint::on_axis(0.5);
    let lap = green_laplace_ball(&o, &h).unwrap().value;
    assert_relative_eq!(lap, 3.0 / (4.0 * PI * PI), max_relative = 1e-14);
    assert_relative_eq!(lap, 0.0759909, max_relative = 1e-6);
    let bih = green_dirichlet_biharmonic_ball(&o, &h).unwrap().value;
    assert_relative_eq!(bih, (LN_2 - 0.375) / (8.0 * PI * PI), max_relative = 1e-13);
    assert_relative_eq!(bih, 0.0040293, max_relative = 1e-4);
}

#[test]
fn representation_of_uniform_load() {
    assert_relative_eq!(represent(|_| 192.0, 0.0).unwrap(), 1.0, max_relative = 1e-8);
    assert_relative_eq!(represent(|_| 192.0, 0.5).unwrap(), 0.5625, max_relative = 1e-8);
    assert_relative_eq!(represent_navier_origin(|_| 192.0).unwrap(), 2.0, max_relative = 1e-6);
}

#[test]
fn two_sided_ratio_is_finite_for_default_seed() {
    let stats = verify_two_sided_estimate(10_000, 42).unwrap();
    assert!(stats.ratio_min > 0.0 && stats.ratio_max.is_finite());
    assert!(stats.passed);
}

#[test]
fn bilaplacian_oracles() {
    let plate_u = |r: f64| (1.0 - r * r).powi(2);
    for r in [0.0, 0.1, 0.5, 0.9] {
        assert_relative_eq!(radial_bilaplacian_fn(&plate_u, r, 1e-2, true).unwrap(), 192.0, max_relative = 1e-6);
    }
    let w = |r: f64| (2.0 / (1.0 + r * r)).ln();
    let at0 = radial_bilaplacian_fn(&w, 0.0, 1e-2, true).unwrap();
    assert_relative_eq!(at0, 96.0, max_relative = 1e-4);
    assert_relative_eq!(at0, 6.0 * (4.0 * LN_2).exp(), max_relative = 1e-4);
}

#[test]
fn clamped_and_hinged_plates() {
    let d = plate(BoundaryCondition::Dirichlet, 513);
    let err = d
        .grid
        .nodes
        .iter()
        .zip(&d.u)
        .map(|(&r, &u)| (u - (1.0 - r * r).powi(2)).abs())
        .fold(0.0, f64::max);
    assert!(err <= 1e-6, "clamped error {err}");
    let n = plate(BoundaryCondition::Navier, 513);
    assert!((n.u[0] - 2.0).abs() <= 1e-6);
    for (&r, &u) in n.grid.nodes.iter().zip(&n.u) {
        assert!((u - (r.powi(4) - 3.0 * r * r + 2.0)).abs() <= 1e-6);
    }
}

#[test]
fn plate_energy_and_monotonicity() {
    let d = plate(BoundaryCondition::Dirichlet, 513);
    let e = solution_energy(&d, &Forcing::constant(192.0));
    assert_relative_eq!(e, 96.0 * PI * PI, max_relative = 1e-6);
    assert!(monotonicity_check(&d).passed);
    for (&r, &du) in d.grid.nodes.iter().zip(&d.du) {
        assert!(du <= 1e-9, "u' = {du} at r = {r}");
    }
}

#[test]
fn small_lambda_gelfand_energy() {
    let grid = RadialGrid::new(257, biharmlab::grid::GridKind::DEFAULT).unwrap();
    let spec = NonlinearitySpec::gelfand();
    for lambda in [1e-3, 1e-2] {
        let sol = solve(&spec, lambda, BoundaryCondition::Dirichlet, &grid, &SolverConfig::default(), None).unwrap();
        let lin = lambda * 2.0 * PI * PI / 4.0;
        let e = solution_energy(&sol, &spec);
        assert!((e / lin - 1.0).abs() < 10.0 * lambda, "lambda {lambda}: {e} vs {lin}");
    }
}

#[test]
fn bubble_closed_forms() {
    assert_relative_eq!(bubble_k(4.0, 24.0), 0.5, max_relative = 1e-15);
    assert_relative_eq!(bubble(4.0, 24.0, 1.0), -(1.5f64.ln()), max_relative = 1e-14);
    assert_relative_eq!(bubble(4.0, 24.0, 1.0), -0.405465, max_relative = 1e-6);
    let e = bubble_total_energy(4.0, 24.0).unwrap();
    assert_relative_eq!(e, 16.0 * PI * PI, max_relative = 1e-8);
    assert_relative_eq!(e, 24.0 * 2.0 * PI * PI / 3.0, max_relative = 1e-8);
}

#[test]
fn canonical_fraction() {
    let k = bubble_k(1.0, 1.0);
    let s: f64 = 12.5;
    let closed = 1.0 - 6.0 * (0.5 / (1.0 + s).powi(2) - 1.0 / (3.0 * (1.0 + s).powi(3)));
    assert_relative_eq!(bubble_fraction(k, 5.0 / (2.0 * k).sqrt()), closed, max_relative = 1e-12);
    assert!((closed - 0.9844).abs() < 5e-4);
}

#[test]
fn manufactured_pohozaev_balance() {
    let d = plate(BoundaryCondition::Dirichlet, 513);
    let src = Forcing::constant(192.0);
    let ball = pohozaev_ball(&d, &src, 0.0).unwrap();
    assert_relative_eq!(ball.lhs(), 64.0 * PI * PI, max_relative = 1e-6);
    assert!(ball.relative_residual <= 1e-6);
    let shifted = pohozaev_ball(&d, &src, 0.3).unwrap();
    assert!((shifted.residual - ball.residual).abs() <= 1e-6 * ball.lhs());

    let interior = pohozaev_annulus(&d, &src, 0.3, 0.4).unwrap();
    assert!(interior.relative_residual <= 1e-5);
    let cap = pohozaev_annulus(&d, &src, 1.0, 0.5).unwrap();
    let t = cap.component("domain_cap").unwrap();
    for v in [t.minus2_un_lap, t.lapn_xgradu, t.un_xgradlap, t.gradlap_gradu_xn] {
        assert!(v.abs() <= 1e-6, "Dirichlet data leaves {v}");
    }
}

#[test]
fn counterexample_root_and_offsets() {
    let x0 = solve_x0(1.5).unwrap();
    assert!((x0 - bisect_x0(1.5)).abs() < 1e-10);
    assert!((x0 + 3.26).abs() < 0.01);
    let near_two = solve_x0(1.999).unwrap();
    assert!((near_two + 1.0 + 2f64.sqrt()).abs() < 0.02);
    let y0 = y0_of(1.5, x0).unwrap();
    assert!((y0 - 0.486).abs() < 1e-3);
}

#[test]
fn implicit_branch_near_zero() {
    let x0 = solve_x0(1.5).unwrap();
    let (x, _) = solve_implicit(1.5, 1e-6).unwrap();
    assert!((x - x0).abs() < 1e-3);
    let (x, y) = solve_implicit(1.5, 0.01).unwrap();
    let (f, _) = implicit_system(1.5, x, y, 0.01).unwrap();
    assert!(f[0].abs() <= 1e-12 && f[1].abs() <= 1e-12);

    let p = params_for_rho(1.5, 100.0).unwrap();
    assert_relative_eq!(p.beta, -1.5 * x * 100f64.powf(2.0 / 3.0), max_relative = 1e-12);
}
