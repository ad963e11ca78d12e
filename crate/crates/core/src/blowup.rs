//! Rescaling of concentrating solutions against the Liouville bubble.
//!
//! Near the maximum a solution with large `M = u(0)` is compared with
//! `v(ρ) = u(μρ) − M`, `μ = (λ a(0) f(M))^{−1/4}`. With this normalization the
//! limit solves `Δ²v = e^{βv}`, whose radial solution with `v(0) = 0` is the
//! bubble with amplitude `a = 1`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::continuation::SolutionBranch;
use crate::error::{Error, Result};
use crate::green::SPHERE3_AREA;
use crate::nonlinearity::NonlinearitySpec;
use crate::quadrature::{adaptive_gk, quadratic_integral};
use crate::radial::RadialSolution;
use crate::source::RadialSource;

/// Default outer radius of the rescaled window.
pub const DEFAULT_R_MAX: f64 = 5.0;
/// Samples of the rescaled profile.
pub const PROFILE_SAMPLES: usize = 501;
/// Canonical bubble mass fraction inside radius 5, `1 − 6[(1+S)^{−2}/2 − (1+S)^{−3}/3]` at `S = 25/2`.
pub const CANONICAL_RADIUS: f64 = 5.0;

/// `k = (aβ/24)^{1/2}/4`, the coefficient in `v = −(4/β) ln(1 + kρ²)`.
pub fn bubble_k(beta: f64, a_inf: f64) -> f64 {
    (a_inf * beta / 24.0).sqrt() / 4.0
}

/// `v(ρ) = −(4/β) ln(1 + (aβ/24)^{1/2} ρ²/4)`.
pub fn bubble(beta: f64, a_inf: f64, rho: f64) -> f64 {
    -(4.0 / beta) * (bubble_k(beta, a_inf) * rho * rho).ln_1p()
}

/// `a ∫_{R^4} e^{βv}` for the bubble, with the tail beyond the truncation
/// radius bounded analytically.
pub fn bubble_total_energy(beta: f64, a_inf: f64) -> Result<f64> {
    if !(beta > 0.0 && a_inf > 0.0) {
        return Err(Error::Precondition("beta and a must be positive".into()));
    }
    let k = bubble_k(beta, a_inf);
    let scale = 1.0 / k.sqrt();
    let rel = 1e-12;
    // ∫_R^∞ ρ³ (kρ²)^{−4} dρ = k^{−4} R^{−4} / 4
    let r_out = scale * 1e4;
    let tail_bound = a_inf * SPHERE3_AREA * 0.25 / (k.powi(4) * r_out.powi(4));
    let mut edges = vec![0.0, scale];
    while *edges.last().unwrap() < r_out {
        let next = edges.last().unwrap() * 10.0;
        edges.push(next.min(r_out));
    }
    let mut core = 0.0;
    for w in edges.windows(2) {
        core += adaptive_gk(|rho| rho.powi(3) * (k * rho * rho).ln_1p().mul_add(-4.0, 0.0).exp(), w[0], w[1], rel)?;
    }
    let total = a_inf * SPHERE3_AREA * core;
    if tail_bound > 1e-10 * total {
        return Err(Error::Quadrature {
            achieved: tail_bound / total,
            requested: 1e-10,
        });
    }
    Ok(total)
}

/// Bubble mass fraction inside `ρ = R`: `1 − 6[(1+S)^{−2}/2 − (1+S)^{−3}/3]`, `S = kR²`.
pub fn bubble_fraction(k: f64, r: f64) -> f64 {
    let s1 = 1.0 + k * r * r;
    1.0 - 6.0 * (0.5 / (s1 * s1) - 1.0 / (3.0 * s1 * s1 * s1))
}

/// Monotone piecewise-cubic interpolant (Fritsch–Carlson).
#[derive(Debug, Clone)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n || x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("pchip needs at least two increasing abscissae".into()));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let del: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = del[0];
            d[1] = del[0];
        } else {
            for k in 1..n - 1 {
                if del[k - 1] * del[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
                }
            }
            d[0] = end_slope(h[0], h[1], del[0], del[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        }
        Ok(Self {
            x: x.to_vec(),
            y: y.to_vec(),
            d,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let t = t.clamp(self.x[0], self.x[n - 1]);
        let k = match self.x.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(i) => return self.y[i],
            Err(i) => i - 1,
        };
        crate::radial::hermite(self.x[k], self.x[k + 1], self.y[k], self.y[k + 1], self.d[k], self.d[k + 1], t).0
    }
}

fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d * del0 <= 0.0 {
        0.0
    } else if del0 * del1 <= 0.0 && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}

/// `2π² ∫_0^{r} t³ g(t) dt` from nodal values of `g`, integrating quadratics in `s = t²`.
fn cumulative_in_s(nodes: &[f64], g: &[f64], r: f64) -> f64 {
    let n = nodes.len();
    let target = r.clamp(0.0, 1.0);
    let s_t = target * target;
    let s: Vec<f64> = nodes.iter().map(|x| x * x).collect();
    let y: Vec<f64> = s.iter().zip(g).map(|(si, gi)| 0.5 * si * gi).collect();
    let mut parts = Vec::new();
    for j in 0..n - 1 {
        if s[j] >= s_t {
            break;
        }
        let k = j.min(n - 3);
        let b = s[j + 1].min(s_t);
        parts.push(quadratic_integral(s[k], s[k + 1], s[k + 2], y[k], y[k + 1], y[k + 2], s[j], b));
    }
    SPHERE3_AREA * crate::quadrature::pairwise_sum(&parts)
}

/// `2π² ∫_0^{Rμ} r³ λ h(r, u) dr` for each `R`, with `μ` the rescaling length.
pub fn local_energy(sol: &RadialSolution, source: &dyn RadialSource, mu: f64, radii: &[f64]) -> Vec<f64> {
    let g: Vec<f64> = sol
        .grid
        .nodes
        .iter()
        .zip(&sol.u)
        .map(|(&r, &u)| sol.lambda * source.h_ext(r, u))
        .collect();
    radii.iter().map(|&rr| cumulative_in_s(&sol.grid.nodes, &g, rr * mu)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BlowupReport {
    #[serde(rename = "M")]
    pub m: f64,
    pub mu: f64,
    pub lambda: f64,
    pub beta: f64,
    /// `λ a(0) f(M) μ⁴`, equal to 1 up to rounding.
    pub amplitude: f64,
    pub r_max: f64,
    /// The window `[0, r_max]` was shortened to stay inside the ball.
    pub truncated: bool,
    pub deviation_sup: f64,
    /// `v <= 0` held at every sample.
    pub nonpositive: bool,
    /// `[R, 2π² ∫_0^{Rμ} r³ λh]`.
    pub local_energy: Vec<[f64; 2]>,
    pub theta_target: f64,
    /// Bubble mass fraction inside `ρ = r_max` for the limit profile.
    pub fraction_expected: f64,
    /// `local_energy(r_max) β / (64π²)`.
    pub fraction_measured: f64,
    /// Radius at which the limit profile reaches `S = kρ² = 25/2`.
    pub canonical_radius: f64,
    pub canonical_fraction_expected: f64,
    pub canonical_fraction_measured: f64,
    #[serde(skip)]
    pub profile: Vec<[f64; 3]>,
}

/// Rescales a concentrating solution and compares it with the bubble.
pub fn rescale(sol: &RadialSolution, spec: &NonlinearitySpec, r_max: f64, radii: &[f64]) -> Result<BlowupReport> {
    let beta = spec.beta();
    if beta == 0.0 {
        return Err(Error::Precondition(
            "rescaling needs a critical nonlinearity; use subcritical_growth_check".into(),
        ));
    }
    if !(sol.lambda > 0.0) {
        return Err(Error::Precondition("rescaling needs lambda > 0".into()));
    }
    if !(r_max > 0.0) {
        return Err(Error::Precondition("r_max must be positive".into()));
    }
    let m = sol.u[0];
    let a0 = spec.potential().eval(0.0);
    let ln_scale = sol.lambda.ln() + a0.ln() + spec.ln_f(m);
    let mu = (-0.25 * ln_scale).exp();
    let amplitude = (ln_scale + 4.0 * mu.ln()).exp();
    let reach = 1.0 / mu;
    let truncated = r_max > reach;
    let r_eff = r_max.min(reach);
    let interp = Pchip::new(&sol.grid.nodes, &sol.u)?;
    let mut profile = Vec::with_capacity(PROFILE_SAMPLES);
    let mut dev: f64 = 0.0;
    let mut nonpositive = true;
    for j in 0..PROFILE_SAMPLES {
        let rho = r_eff * j as f64 / (PROFILE_SAMPLES - 1) as f64;
        let v = interp.eval(mu * rho) - m;
        let vb = bubble(beta, amplitude, rho);
        dev = dev.max((v - vb).abs());
        nonpositive &= v <= 0.0;
        profile.push([rho, v, vb]);
    }
    let k = bubble_k(beta, amplitude);
    let canonical_radius = CANONICAL_RADIUS / (2.0 * k).sqrt();
    let mut all_radii = radii.to_vec();
    all_radii.push(r_eff);
    all_radii.push(canonical_radius);
    let energies = local_energy(sol, spec, mu, &all_radii);
    let theta = 64.0 * PI * PI / beta;
    let canonical_measured = energies[energies.len() - 1] / theta;
    let measured = energies[energies.len() - 2] / theta;
    Ok(BlowupReport {
        m,
        mu,
        lambda: sol.lambda,
        beta,
        amplitude,
        r_max: r_eff,
        truncated,
        deviation_sup: dev,
        nonpositive,
        local_energy: radii.iter().zip(&energies).map(|(&r, &e)| [r, e]).collect(),
        theta_target: theta,
        fraction_expected: bubble_fraction(k, r_eff),
        fraction_measured: measured,
        canonical_radius,
        canonical_fraction_expected: bubble_fraction(0.5, CANONICAL_RADIUS),
        canonical_fraction_measured: canonical_measured,
        profile,
    })
}

/// Which radial quantity stands in for `|∇^i u|`.
pub fn surrogate_name(i: u32) -> &'static str {
    match i {
        1 => "|u'|",
        2 => "|lap u|",
        3 => "|(lap u)'|",
        _ => "none",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GradientLpReport {
    pub order: u32,
    pub p: f64,
    pub surrogate: &'static str,
    /// `[r, 2π² ∫_0^r t³ |D^i u|^p dt]`.
    pub values: Vec<[f64; 2]>,
    /// `max value / r^{4 − ip}`.
    pub constant: f64,
}

/// `L^p` mass of the `i`-th derivative surrogate on balls `B_r`, and the fitted
/// constant of the scaling law `value <= C r^{4 − ip}`.
pub fn gradient_lp_check(sol: &RadialSolution, order: u32, p: f64, radii: &[f64]) -> Result<GradientLpReport> {
    if !(1..=3).contains(&order) {
        return Err(Error::Precondition(format!("derivative order {order} outside 1..=3")));
    }
    if !(p >= 1.0 && p < 4.0 / order as f64) {
        return Err(Error::Precondition(format!("p = {p} outside [1, 4/{order})")));
    }
    let field = match order {
        1 => &sol.du,
        2 => &sol.lap_u,
        _ => &sol.dlap_u,
    };
    let g: Vec<f64> = field.iter().map(|v| v.abs().powf(p)).collect();
    let expo = 4.0 - order as f64 * p;
    let mut values = Vec::with_capacity(radii.len());
    let mut constant: f64 = 0.0;
    for &r in radii {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::Precondition(format!("radius {r} outside (0, 1]")));
        }
        let v = cumulative_in_s(&sol.grid.nodes, &g, r);
        constant = constant.max(v / r.powf(expo));
        values.push([r, v]);
    }
    Ok(GradientLpReport {
        order,
        p,
        surrogate: surrogate_name(order),
        values,
        constant,
    })
}

/// Relative change of the fitted constant between two resolutions.
pub fn gradient_lp_stability(coarse: &GradientLpReport, fine: &GradientLpReport) -> f64 {
    if coarse.constant == fine.constant {
        return 0.0;
    }
    (coarse.constant - fine.constant).abs() / fine.constant.abs().max(coarse.constant.abs())
}

/// Geometric radii from `r0` to 1.
pub fn default_radii(r0: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| r0 * (1.0 / r0).powf(i as f64 / (n - 1) as f64)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SubcriticalReport {
    pub m_values: Vec<f64>,
    pub energies: Vec<f64>,
    /// Energy grows monotonically over the upper half of the branch.
    pub energy_increasing: bool,
    /// `E(M_end) / E(M_mid)`.
    pub growth_ratio: f64,
    pub passed: bool,
}

/// For `β = 0` members: bounded energy with `M → ∞` is impossible, so along a
/// traced branch the energy must keep growing with `M`.
pub fn subcritical_growth_check(branch: &SolutionBranch) -> Result<SubcriticalReport> {
    let n = branch.points.len();
    if n < 4 {
        return Err(Error::Precondition("need at least four branch points".into()));
    }
    let m_values: Vec<f64> = branch.points.iter().map(|p| p.m).collect();
    let energies: Vec<f64> = branch.points.iter().map(|p| p.energy).collect();
    let half = n / 2;
    let energy_increasing = energies[half..].windows(2).all(|w| w[1] > w[0]);
    let growth_ratio = energies[n - 1] / energies[half];
    Ok(SubcriticalReport {
        m_values,
        energies,
        energy_increasing,
        growth_ratio,
        passed: energy_increasing && growth_ratio > 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use crate::radial::{log_radial_bilaplacian_fn, radial_bilaplacian_fn, BoundaryCondition};
    use approx::assert_relative_eq;

    #[test]
    fn bubble_values() {
        assert_eq!(bubble(3.0, 7.0, 0.0), 0.0);
        assert_relative_eq!(bubble(4.0, 24.0, 1.0), -(1.5f64).ln(), max_relative = 1e-15);
        assert_relative_eq!(bubble(4.0, 24.0, 1.0), -0.405465, epsilon = 1e-6);
    }

    #[test]
    fn bubble_solves_liouville_equation() {
        let f = |r: f64| bubble(4.0, 24.0, r);
        let at0 = radial_bilaplacian_fn(&f, 0.0, 1e-2, true).unwrap();
        assert!((at0 - 24.0).abs() < 1e-4);
        for i in 1..=100 {
            let r = 0.1 * i as f64;
            let v = log_radial_bilaplacian_fn(&f, r, 0.05).unwrap();
            let exact = 24.0 * (1.0 + r * r / 2.0).powi(-4);
            assert!(((v - exact) / exact).abs() < 1e-4, "r = {r}");
        }
    }

    #[test]
    fn quantization() {
        for beta in [0.5, 1.0, 2.0, 4.0] {
            for a in [1.0, 24.0, 100.0] {
                let e = bubble_total_energy(beta, a).unwrap();
                assert_relative_eq!(e * beta, 64.0 * PI * PI, max_relative = 1e-8);
            }
        }
        assert_relative_eq!(bubble_total_energy(4.0, 24.0).unwrap(), 24.0 * 2.0 * PI * PI / 3.0, max_relative = 1e-8);
        assert!(bubble_total_energy(0.0, 1.0).is_err());
    }

    #[test]
    fn fraction_closed_form() {
        assert!((bubble_fraction(0.5, 5.0) - 0.9844).abs() < 5e-5);
        assert_eq!(bubble_fraction(0.5, 0.0), 0.0);
        let k = bubble_k(1.0, 1.0);
        let r = 3.0;
        let num = adaptive_gk(|x| x.powi(3) * (1.0 + k * x * x).powi(-4), 0.0, r, 1e-13).unwrap();
        let tot = 1.0 / (12.0 * k * k);
        assert_relative_eq!(bubble_fraction(k, r), num / tot, max_relative = 1e-10);
    }

    #[test]
    fn pchip_is_monotone_and_interpolating() {
        let x = [0.0, 0.1, 0.5, 0.6, 1.0];
        let y = [5.0, 4.9, 1.0, 0.9, 0.0];
        let p = Pchip::new(&x, &y).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert_eq!(p.eval(*xi), *yi);
        }
        let mut last = f64::INFINITY;
        for i in 0..=1000 {
            let v = p.eval(i as f64 / 1000.0);
            assert!(v <= last + 1e-15);
            last = v;
        }
    }

    fn bubble_solution(n: usize) -> RadialSolution {
        // u = bubble(4, 24, r) with λ a f(0) = 1: μ = 1 and M = 0
        let grid = RadialGrid::uniform(n).unwrap();
        let u: Vec<f64> = grid.nodes.iter().map(|&r| bubble(4.0, 24.0, r)).collect();
        let z = vec![0.0; n];
        RadialSolution {
            grid,
            u,
            du: z.clone(),
            lap_u: z.clone(),
            dlap_u: z,
            bc: BoundaryCondition::Dirichlet,
            lambda: 24.0,
            m: 0.0,
            residual_norm: 0.0,
            newton_iters: 0,
        }
    }

    #[test]
    fn exact_bubble_has_no_deviation() {
        let spec = NonlinearitySpec::new(
            crate::nonlinearity::Kind::PureExp { gamma: 4.0 },
            crate::nonlinearity::Potential::Constant(1.0),
        )
        .unwrap();
        let sol = bubble_solution(4097);
        let rep = rescale(&sol, &spec, 5.0, &[0.5, 1.0]).unwrap();
        assert_relative_eq!(rep.mu, 24f64.powf(-0.25), max_relative = 1e-14);
        assert!(rep.truncated);
        assert!(rep.deviation_sup < 1e-9, "{}", rep.deviation_sup);
        assert!(rep.nonpositive);
        assert_eq!(rep.profile[0][1], 0.0);
    }

    #[test]
    fn local_energy_monotone_and_zero_at_origin() {
        let grid = RadialGrid::uniform(129).unwrap();
        let src = crate::source::Forcing::constant(192.0);
        let sol = crate::radial::solve(&src, 1.0, BoundaryCondition::Dirichlet, &grid, &Default::default(), None).unwrap();
        let radii: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
        let e = local_energy(&sol, &src, 1.0, &radii);
        assert_eq!(e[0], 0.0);
        assert!(e.windows(2).all(|w| w[1] >= w[0]));
        let total = crate::radial::solution_energy(&sol, &src);
        assert_relative_eq!(e[20], total, max_relative = 1e-12);
        assert_relative_eq!(e[10], 2.0 * PI * PI * 48.0 * 0.5f64.powi(4), max_relative = 1e-12);
    }

    #[test]
    fn lp_check_on_plate() {
        let grid = RadialGrid::uniform(513).unwrap();
        let src = crate::source::Forcing::constant(192.0);
        let sol = crate::radial::solve(&src, 1.0, BoundaryCondition::Dirichlet, &grid, &Default::default(), None).unwrap();
        let rep = gradient_lp_check(&sol, 2, 1.0, &[1e-3, 1e-2]).unwrap();
        // |Δu| ≈ 16 near 0: 2π² 16 r⁴/4 / r² → 0 as r → 0, bounded by 2π² 16/4
        for [r, v] in &rep.values {
            assert!(v / (r * r) <= 2.0 * PI * PI * 4.0);
        }
        let zero = RadialSolution { u: vec![0.0; 513], du: vec![0.0; 513], lap_u: vec![0.0; 513], dlap_u: vec![0.0; 513], ..sol.clone() };
        assert_eq!(gradient_lp_check(&zero, 2, 1.0, &[0.5]).unwrap().constant, 0.0);
        assert!(gradient_lp_check(&sol, 2, 2.0, &[0.5]).is_err());
        assert!(gradient_lp_check(&sol, 4, 1.0, &[0.5]).is_err());
    }
}
