//! Green kernels of `-Δ` and `Δ²` on the unit ball of `R^4`.
//!
//! Both kernels are evaluated through
//! `z = (1 - |x|²)(1 - |y|²) / [XY]²`, which equals `1 - |x-y|²/[XY]²`
//! without the cancellation of the naive form near the boundary.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_gk, pairwise_sum, GaussLegendre};

/// `|S^3|`.
pub const SPHERE3_AREA: f64 = 2.0 * PI * PI;

/// Default seed for the sampling verifiers.
pub const DEFAULT_SEED: u64 = 42;

/// Pairs closer than this are never sampled.
pub const MIN_PAIR_DISTANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallPoint(pub [f64; 4]);

impl BallPoint {
    pub fn new(coords: [f64; 4]) -> Result<Self> {
        let p = Self(coords);
        if p.norm() > 1.0 + 1e-14 {
            return Err(Error::Precondition(format!("point {coords:?} lies outside the unit ball")));
        }
        Ok(p)
    }

    /// Point `(r, 0, 0, 0)`.
    pub fn on_axis(r: f64) -> Self {
        Self([r, 0.0, 0.0, 0.0])
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dist_sq(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        self.dist_sq(other).sqrt()
    }

    /// Distance to the boundary sphere.
    pub fn boundary_distance(&self) -> f64 {
        1.0 - self.norm()
    }

    fn shifted(&self, axis: usize, h: f64) -> Self {
        let mut c = self.0;
        c[axis] += h;
        Self(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub value: f64,
    pub gradient_x: Option<[f64; 4]>,
}

/// `[XY] = sqrt(|x|²|y|² - 2 x·y + 1)`.
pub fn xy_bracket(x: &BallPoint, y: &BallPoint) -> f64 {
    (x.norm_sq() * y.norm_sq() - 2.0 * x.dot(y) + 1.0).max(0.0).sqrt()
}

fn boundary_ratio(x: &BallPoint, y: &BallPoint) -> f64 {
    let xy2 = x.norm_sq() * y.norm_sq() - 2.0 * x.dot(y) + 1.0;
    ((1.0 - x.norm_sq()) * (1.0 - y.norm_sq()) / xy2).max(0.0)
}

/// Dirichlet Green function of `-Δ`: `(|x-y|^{-2} - [XY]^{-2}) / (4π²)`.
pub fn green_laplace_ball(x: &BallPoint, y: &BallPoint) -> Result<KernelValue> {
    let d2 = x.dist_sq(y);
    if d2 == 0.0 {
        return Err(Error::Singularity);
    }
    let xy2 = x.norm_sq() * y.norm_sq() - 2.0 * x.dot(y) + 1.0;
    let num = (1.0 - x.norm_sq()) * (1.0 - y.norm_sq());
    Ok(KernelValue {
        value: num / (d2 * xy2) / (4.0 * PI * PI),
        gradient_x: None,
    })
}

/// `-ln(1 - z) - z` with `1 - z = d2 / xy2` supplied separately, so that
/// near-diagonal pairs keep full relative accuracy.
fn log_excess(z: f64, d2: f64, xy2: f64) -> f64 {
    if z < 1e-3 {
        let mut term = z * z;
        let mut sum = 0.0;
        for k in 2..12 {
            sum += term / k as f64;
            term *= z;
        }
        sum
    } else {
        -(d2 / xy2).ln() - z
    }
}

/// Clamped-plate Green function of `Δ²` (Boggio):
/// `(log A + (A^{-2} - 1)/2) / (8π²)` with `A = [XY]/|x-y|`, plus its `x`-gradient.
pub fn green_dirichlet_biharmonic_ball(x: &BallPoint, y: &BallPoint) -> Result<KernelValue> {
    let d2 = x.dist_sq(y);
    if d2 == 0.0 {
        return Err(Error::Singularity);
    }
    let c = 1.0 / (8.0 * PI * PI);
    // A^{-2} = 1 - z  =>  log A + (A^{-2} - 1)/2 = (-ln(1-z) - z)/2
    let z = boundary_ratio(x, y);
    let xy2 = x.norm_sq() * y.norm_sq() - 2.0 * x.dot(y) + 1.0;
    let value = 0.5 * c * log_excess(z, d2, xy2);

    let xy = xy2.sqrt();
    let d = d2.sqrt();
    let a = xy / d;
    let dg_da = c * (1.0 / a - a.powi(-3));
    let y2 = y.norm_sq();
    let mut grad = [0.0; 4];
    for k in 0..4 {
        let dxy = (y2 * x.0[k] - y.0[k]) / xy;
        let dd = (x.0[k] - y.0[k]) / d;
        grad[k] = dg_da * (dxy / d - xy * dd / d2);
    }
    Ok(KernelValue {
        value,
        gradient_x: Some(grad),
    })
}

/// Angular reduction: `∫ over S^3 of G(x, s ω) dσ(ω)` written with the polar
/// angle `ψ` between `x` and `y` (`dσ = 4π sin²ψ dψ`).
fn biharmonic_rs(r: f64, s: f64, psi: f64) -> f64 {
    let half = (0.5 * psi).sin();
    let chord = 4.0 * r * s * half * half;
    let d2 = (r - s) * (r - s) + chord;
    let xy2 = (1.0 - r * s) * (1.0 - r * s) + chord;
    if d2 == 0.0 {
        return f64::INFINITY;
    }
    let z = ((1.0 - r * r) * (1.0 - s * s) / xy2).max(0.0);
    0.5 * log_excess(z, d2, xy2) / (8.0 * PI * PI)
}

/// `ψ`-cells graded toward `ψ = 0` (ratio 2, 20 levels).
fn graded_cells(a: f64, b: f64, toward_a: bool, levels: usize) -> Vec<(f64, f64)> {
    let mut cells = Vec::with_capacity(levels + 1);
    let len = b - a;
    let mut edges = vec![0.0];
    for l in (0..levels).rev() {
        edges.push(len / 2f64.powi(l as i32 + 1));
    }
    edges.push(len);
    for w in edges.windows(2) {
        if toward_a {
            cells.push((a + w[0], a + w[1]));
        } else {
            cells.push((b - w[1], b - w[0]));
        }
    }
    if !toward_a {
        cells.reverse();
    }
    cells
}

const GRADED_LEVELS: usize = 20;

struct AngularRule {
    gl: GaussLegendre,
    cells: Vec<(f64, f64)>,
}

impl AngularRule {
    fn new(order: usize) -> Self {
        Self {
            gl: GaussLegendre::new(order),
            cells: graded_cells(0.0, PI, true, GRADED_LEVELS),
        }
    }

    /// `∫_0^π 4π sin²ψ G dψ`.
    fn spherical_mean(&self, r: f64, s: f64) -> f64 {
        let parts: Vec<f64> = self
            .cells
            .iter()
            .map(|&(a, b)| {
                self.gl.integrate(a, b, |psi| {
                    let sp = psi.sin();
                    4.0 * PI * sp * sp * biharmonic_rs(r, s, psi)
                })
            })
            .collect();
        pairwise_sum(&parts)
    }
}

/// Relative tolerance of [`represent`].
pub const REPRESENT_REL_TOL: f64 = 1e-8;

/// `u(x) = ∫ G(x, y) g(|y|) dy` for radial `g`, at `|x| = x_radius`.
pub fn represent<G: Fn(f64) -> f64>(g: G, x_radius: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x_radius) {
        return Err(Error::Precondition("x_radius must lie in [0, 1)".into()));
    }
    if x_radius == 0.0 {
        let c = 1.0 / (8.0 * PI * PI);
        let integrand = |s: f64| {
            if s == 0.0 {
                return 0.0;
            }
            s.powi(3) * c * (-s.ln() + 0.5 * (s * s - 1.0)) * g(s)
        };
        return Ok(SPHERE3_AREA * adaptive_gk(integrand, 0.0, 1.0, 1e-12)?);
    }
    let fine = represent_product(&g, x_radius, 16);
    let coarse = represent_product(&g, x_radius, 10);
    let scale = fine.abs().max(1e-300);
    let achieved = (fine - coarse).abs() / scale;
    if achieved > REPRESENT_REL_TOL && (fine - coarse).abs() > 1e-14 {
        return Err(Error::Quadrature {
            achieved,
            requested: REPRESENT_REL_TOL,
        });
    }
    Ok(fine)
}

fn represent_product<G: Fn(f64) -> f64>(g: &G, r: f64, order: usize) -> f64 {
    let angular = AngularRule::new(order);
    let gl = GaussLegendre::new(order);
    let mut cells = graded_cells(0.0, r, false, GRADED_LEVELS);
    cells.extend(graded_cells(r, 1.0, true, GRADED_LEVELS));
    let parts: Vec<f64> = cells
        .iter()
        .map(|&(a, b)| gl.integrate(a, b, |s| s.powi(3) * g(s) * angular.spherical_mean(r, s)))
        .collect();
    pairwise_sum(&parts)
}

/// Laplace kernel from the origin, `G_{-Δ}(0, y)` at `|y| = s`.
fn laplace_pole(s: f64) -> f64 {
    (1.0 / (s * s) - 1.0) / (4.0 * PI * PI)
}

fn check_pole_radius(z_radius: f64) -> Result<()> {
    if !(z_radius > 0.0 && z_radius < 1.0) {
        return Err(Error::Precondition("z_radius must lie in (0, 1)".into()));
    }
    Ok(())
}

/// Navier kernel `G_NAV(0, z) = ∫ G_{-Δ}(0, y) G_{-Δ}(y, z) dy`, as the 1D
/// composition against the radial Green function `(max(r,s)^{-2} - 1)/(4π²)`
/// of `-Δ` (the spherical mean of `G_{-Δ}`).
pub fn green_navier_biharmonic_pole(z_radius: f64) -> Result<f64> {
    check_pole_radius(z_radius)?;
    let r = z_radius;
    let radial_green = |s: f64| (1.0 / (r.max(s) * r.max(s)) - 1.0) / (4.0 * PI * PI);
    let integrand = |s: f64| SPHERE3_AREA * s.powi(3) * radial_green(s) * laplace_pole(s);
    let inner = adaptive_gk(integrand, 0.0, r, 1e-11)?;
    let outer = adaptive_gk(integrand, r, 1.0, 1e-11)?;
    Ok(inner + outer)
}

/// `∫ G_NAV(0, y) g(|y|) dy` for radial `g`.
pub fn represent_navier_origin<G: Fn(f64) -> f64>(g: G) -> Result<f64> {
    let mut failure = None;
    let integrand = |s: f64| match green_navier_biharmonic_pole(s) {
        Ok(k) => s.powi(3) * k * g(s),
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let v = adaptive_gk(integrand, 0.0, 1.0, 1e-10)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(SPHERE3_AREA * v),
    }
}

/// Same kernel by the nested radial solve of `-Δφ = G_{-Δ}(0, ·)`, `φ(1) = 0`:
/// `φ(r) = ∫_r^1 ρ^{-3} ∫_0^ρ t³ G_{-Δ}(0, t) dt dρ`, both levels by
/// `order`-point Gauss–Legendre.
pub fn green_navier_pole_nested(z_radius: f64, order: usize) -> Result<f64> {
    check_pole_radius(z_radius)?;
    let gl = GaussLegendre::new(order);
    let flux = |rho: f64| gl.integrate(0.0, rho, |t| t.powi(3) * laplace_pole(t));
    // split the outer integral geometrically so the ρ^{-3} weight is resolved
    let mut edges = vec![z_radius];
    while *edges.last().unwrap() < 1.0 {
        let next = (edges.last().unwrap() * 2.0).min(1.0);
        edges.push(next);
    }
    let parts: Vec<f64> = edges
        .windows(2)
        .map(|w| gl.integrate(w[0], w[1], |rho| flux(rho) / rho.powi(3)))
        .collect();
    Ok(pairwise_sum(&parts))
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoSidedStats {
    pub n_samples: usize,
    pub seed: u64,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub passed: bool,
}

/// Bound below which `R_max / R_min` must stay.
pub const TWO_SIDED_SPREAD_LIMIT: f64 = 1e3;

/// Smallest sample that makes the two-sided statistics meaningful.
pub const MIN_TWO_SIDED_SAMPLES: usize = 1000;

/// One interior point: half uniform in the ball, half pushed toward the sphere.
fn sample_point(rng: &mut ChaCha8Rng, near_boundary: bool) -> BallPoint {
    loop {
        let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let p = BallPoint(c);
        let n = p.norm();
        if !(1e-12..1.0).contains(&n) {
            continue;
        }
        if near_boundary {
            let radius = 1.0 - 10f64.powf(-rng.gen_range(1.0..6.0));
            return BallPoint(c.map(|v| v / n * radius));
        }
        return p;
    }
}

/// Sampled pairs `(x, y)` with `|x - y| >= min_dist`, deterministic in `seed`.
pub fn sample_pairs(n: usize, seed: u64, min_dist: f64) -> Vec<(BallPoint, BallPoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let k = out.len();
        let x = sample_point(&mut rng, k % 4 == 1);
        let y = sample_point(&mut rng, k % 4 >= 2);
        if x.dist(&y) >= min_dist {
            out.push((x, y));
        }
    }
    out
}

/// `log(1 + d(x)² d(y)² / |x-y|⁴)`.
pub fn two_sided_comparison(x: &BallPoint, y: &BallPoint) -> f64 {
    let d2 = x.dist_sq(y);
    let q = x.boundary_distance() * y.boundary_distance() / d2;
    (q * q).ln_1p()
}

/// Ratio statistics of `G / log(1 + d(x)²d(y)²/|x-y|⁴)` over random pairs.
pub fn verify_two_sided_estimate(n_samples: usize, seed: u64) -> Result<TwoSidedStats> {
    if n_samples < MIN_TWO_SIDED_SAMPLES {
        return Err(Error::Precondition(format!("n_samples must be at least {MIN_TWO_SIDED_SAMPLES}")));
    }
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for (x, y) in sample_pairs(n_samples, seed, MIN_PAIR_DISTANCE) {
        let g = green_dirichlet_biharmonic_ball(&x, &y)?.value;
        let cmp = two_sided_comparison(&x, &y);
        let ratio = g / cmp;
        if ratio.is_finite() {
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    Ok(TwoSidedStats {
        n_samples,
        seed,
        ratio_min: lo,
        ratio_max: hi,
        passed: lo > 0.0 && hi / lo < TWO_SIDED_SPREAD_LIMIT,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GradientReport {
    pub n_samples: usize,
    pub fd_step: f64,
    pub grad_product_sup: f64,
    pub grad_product_sup_doubled: f64,
    pub log_ratio_sup: f64,
    pub log_ratio_sup_doubled: f64,
    pub passed: bool,
}

/// Relative growth of a sampled supremum allowed when the sample is doubled.
pub const SUP_STABILITY: f64 = 0.1;

/// Centered-difference gradient of the clamped-plate kernel in `x`.
pub fn fd_gradient(x: &BallPoint, y: &BallPoint, h: f64) -> Result<[f64; 4]> {
    let mut g = [0.0; 4];
    for (k, gk) in g.iter_mut().enumerate() {
        let p = green_dirichlet_biharmonic_ball(&x.shifted(k, h), y)?.value;
        let m = green_dirichlet_biharmonic_ball(&x.shifted(k, -h), y)?.value;
        *gk = (p - m) / (2.0 * h);
    }
    Ok(g)
}

fn gradient_sups(pairs: &[(BallPoint, BallPoint)], h: f64) -> Result<(f64, f64)> {
    let mut grad_sup: f64 = 0.0;
    let mut log_sup: f64 = 0.0;
    for (x, y) in pairs {
        let d = x.dist(y);
        let g = fd_gradient(x, y, h)?;
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        grad_sup = grad_sup.max(norm * d);
        let val = green_dirichlet_biharmonic_ball(x, y)?.value;
        log_sup = log_sup.max(val.abs() / (2.0 + 1.0 / d).ln());
    }
    Ok((grad_sup, log_sup))
}

/// Pairs with `|x - y|` log-uniform in `[min_dist, 1]`, a uniformly random
/// direction, and both points at least `margin` inside the ball.
fn multiscale_pairs(n: usize, seed: u64, min_dist: f64, margin: f64) -> Vec<(BallPoint, BallPoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let ln_min = min_dist.ln();
    while out.len() < n {
        let x = sample_point(&mut rng, out.len() % 2 == 1);
        let d = rng.gen_range(ln_min..0.0f64).exp();
        let dir: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(len > 1e-3 && len <= 1.0) {
            continue;
        }
        let y = BallPoint(std::array::from_fn(|k| x.0[k] + d * dir[k] / len));
        if x.boundary_distance() > margin && y.boundary_distance() > margin {
            out.push((x, y));
        }
    }
    out
}

/// Sampled suprema of `|∇G| |x-y|` and `|G| / log(2 + 1/|x-y|)`, checked for
/// stability when the sample is doubled. Distances are log-uniform down to
/// `10 fd_step` so that every scale is represented; both points stay at least
/// `2 fd_step` inside the ball.
pub fn verify_gradient_estimate(n_samples: usize, fd_step: f64, seed: u64) -> Result<GradientReport> {
    if !(fd_step > 0.0 && fd_step <= 1e-3) {
        return Err(Error::Precondition("fd_step must lie in (0, 1e-3]".into()));
    }
    let pairs = multiscale_pairs(2 * n_samples, seed, 10.0 * fd_step, 2.0 * fd_step);
    let (g1, l1) = gradient_sups(&pairs[..n_samples.min(pairs.len())], fd_step)?;
    let (g2, l2) = gradient_sups(&pairs, fd_step)?;
    let stable = |a: f64, b: f64| a.is_finite() && b.is_finite() && b <= a * (1.0 + SUP_STABILITY);
    Ok(GradientReport {
        n_samples,
        fd_step,
        grad_product_sup: g1,
        grad_product_sup_doubled: g2,
        log_ratio_sup: l1,
        log_ratio_sup_doubled: l2,
        passed: stable(g1, g2) && stable(l1, l2),
    })
}

/// Symmetry, boundary and two-sided checks of the clamped-plate kernel.
#[derive(Debug, Clone, Serialize)]
pub struct KernelSuiteReport {
    pub n_pairs: usize,
    pub seed: u64,
    /// `max |G(x,y) − G(y,x)| / max(|G|, 1)`.
    pub symmetry_max: f64,
    pub all_positive: bool,
    /// `max |G(x,y)| + |∂_n G(x,y)|` over `|x| = 1`.
    pub boundary_max: f64,
    pub two_sided: TwoSidedStats,
    pub gradient: GradientReport,
    pub passed: bool,
}

/// Symmetry tolerance of the property suite.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Tolerance on kernel values and normal derivatives on the sphere.
pub const BOUNDARY_TOL: f64 = 1e-12;
/// Smallest sample on which the gradient suprema are compared.
pub const GRADIENT_SAMPLES: usize = 2000;

pub fn kernel_property_suite(n_pairs: usize, seed: u64) -> Result<KernelSuiteReport> {
    let mut symmetry_max: f64 = 0.0;
    let mut all_positive = true;
    let mut boundary_max: f64 = 0.0;
    for (x, y) in sample_pairs(n_pairs, seed, MIN_PAIR_DISTANCE) {
        let gxy = green_dirichlet_biharmonic_ball(&x, &y)?.value;
        let gyx = green_dirichlet_biharmonic_ball(&y, &x)?.value;
        all_positive &= gxy > 0.0;
        symmetry_max = symmetry_max.max((gxy - gyx).abs() / gxy.abs().max(1.0));
        let n = x.norm();
        let xb = BallPoint(x.0.map(|v| v / n));
        if xb.dist(&y) >= MIN_PAIR_DISTANCE {
            let kb = green_dirichlet_biharmonic_ball(&xb, &y)?;
            let grad = kb.gradient_x.unwrap_or([0.0; 4]);
            let normal: f64 = (0..4).map(|k| grad[k] * xb.0[k]).sum();
            boundary_max = boundary_max.max(kb.value.abs() + normal.abs());
        }
    }
    let two_sided = verify_two_sided_estimate(n_pairs, seed)?;
    let gradient = verify_gradient_estimate((n_pairs / 5).max(GRADIENT_SAMPLES), 1e-5, seed)?;
    let passed = symmetry_max <= SYMMETRY_TOL
        && all_positive
        && boundary_max <= BOUNDARY_TOL
        && two_sided.passed
        && gradient.passed;
    Ok(KernelSuiteReport {
        n_pairs,
        seed,
        symmetry_max,
        all_positive,
        boundary_max,
        two_sided,
        gradient,
        passed,
    })
}

/// One row of the `green_samples.csv` dump.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GreenSample {
    pub dist: f64,
    pub g: f64,
    pub bound: f64,
}

pub fn green_samples(n: usize, seed: u64) -> Result<Vec<GreenSample>> {
    sample_pairs(n, seed, MIN_PAIR_DISTANCE)
        .iter()
        .map(|(x, y)| {
            Ok(GreenSample {
                dist: x.dist(y),
                g: green_dirichlet_biharmonic_ball(x, y)?.value,
                bound: two_sided_comparison(x, y),
            })
        })
        .collect()
}

/// Constants of the polyharmonic problem `(-Δ)^m` in `R^{2m}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PolyharmonicConstants {
    pub m: u32,
    /// Leading log coefficient denominator: `|S^{2m-1}| 2^{2m-2} ((m-1)!)²`.
    pub gamma_m: f64,
    pub sphere_area_2m: f64,
    pub sphere_area_2m_minus_1: f64,
}

impl PolyharmonicConstants {
    /// Energy quantum `θ(β) = (2m)! |S^{2m}| / β`.
    pub fn theta(&self, beta: f64) -> f64 {
        factorial(2 * self.m) * self.sphere_area_2m / beta
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn double_factorial(n: u32) -> f64 {
    (1..=n).rev().step_by(2).map(|k| k as f64).product()
}

pub fn polyharmonic_constants(m: u32) -> Result<PolyharmonicConstants> {
    if m == 0 {
        return Err(Error::Precondition("m must be positive".into()));
    }
    let mf = m as i32;
    let pi_m = PI.powi(mf);
    let s_odd = 2.0 * pi_m / factorial(m - 1);
    let s_even = 2f64.powi(mf + 1) * pi_m / double_factorial(2 * m - 1);
    let fm1 = factorial(m - 1);
    Ok(PolyharmonicConstants {
        m,
        gamma_m: s_odd * 2f64.powi(2 * mf - 2) * fm1 * fm1,
        sphere_area_2m: s_even,
        sphere_area_2m_minus_1: s_odd,
    })
}
