//! Radial fourth-order solver on the unit ball of `R^4`.
//!
//! The problem `Δ²u = λ h(r, u)` is split into `Δu = v`, `Δv = λ h(r, u)` and
//! discretized in the variable `s = r²`, where the radial Laplacian becomes
//! `L w = 4 s w_ss + 8 w_s`. Three-point Lagrange stencils in `s` make the
//! scheme exact on polynomials of degree two in `s`, which covers both
//! clamped- and hinged-plate closed forms. At `s = 0` the operator reduces to
//! `8 w_s`, the even-expansion limit `Δw(0) = 4 w''(0)`.

use serde::{Deserialize, Serialize};

use crate::banded::BandMatrix;
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::green::SPHERE3_AREA;
use crate::quadrature::simpson_nonuniform;
use crate::source::RadialSource;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryCondition {
    /// `u = u' = 0` at `r = 1`.
    Dirichlet,
    /// `u = Δu = 0` at `r = 1`.
    Navier,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Damping {
    None,
    LineSearchHalving { max_halvings: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub newton_tol: f64,
    pub max_iters: usize,
    pub damping: Damping,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            newton_tol: 1e-10,
            max_iters: 50,
            damping: Damping::LineSearchHalving { max_halvings: 20 },
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.newton_tol > 0.0) {
            return Err(Error::InvalidParameter("newton_tol must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be positive".into()));
        }
        Ok(())
    }
}

/// Converged radial field with the data needed by every downstream check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSolution {
    pub grid: RadialGrid,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    pub lap_u: Vec<f64>,
    pub dlap_u: Vec<f64>,
    pub bc: BoundaryCondition,
    pub lambda: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub residual_norm: f64,
    pub newton_iters: usize,
}

/// Three consecutive-node weights starting at node `start`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Stencil {
    pub start: usize,
    pub w: [f64; 3],
}

impl Stencil {
    /// `sum_k w_k x[stride (start + k) + offset]`.
    #[inline]
    pub fn apply(&self, x: &[f64], stride: usize, offset: usize) -> f64 {
        (0..3).map(|k| self.w[k] * x[stride * (self.start + k) + offset]).sum()
    }
}

fn lagrange_d1(a: f64, b: f64, c: f64, x: f64) -> [f64; 3] {
    [
        ((x - b) + (x - c)) / ((a - b) * (a - c)),
        ((x - a) + (x - c)) / ((b - a) * (b - c)),
        ((x - a) + (x - b)) / ((c - a) * (c - b)),
    ]
}

fn lagrange_d2(a: f64, b: f64, c: f64) -> [f64; 3] {
    [
        2.0 / ((a - b) * (a - c)),
        2.0 / ((b - a) * (b - c)),
        2.0 / ((c - a) * (c - b)),
    ]
}

/// Stencils of the `s`-variable scheme on a fixed grid.
#[derive(Debug, Clone)]
pub(crate) struct Discretization {
    pub r: Vec<f64>,
    /// Radial Laplacian at nodes `0..n-1` (the last node has no interior row).
    pub lap: Vec<Stencil>,
    /// Row scaling `1 / sum |lap weights|`.
    pub sigma: Vec<f64>,
    /// `d/ds` at every node.
    pub d1: Vec<Stencil>,
}

impl Discretization {
    pub fn new(grid: &RadialGrid) -> Self {
        let r = grid.nodes.clone();
        let s = grid.squares();
        let n = s.len();
        let mut d1 = Vec::with_capacity(n);
        let mut lap = Vec::with_capacity(n - 1);
        let mut sigma = Vec::with_capacity(n - 1);
        for i in 0..n {
            let start = if i == 0 {
                0
            } else if i == n - 1 {
                n - 3
            } else {
                i - 1
            };
            let (a, b, c) = (s[start], s[start + 1], s[start + 2]);
            let w1 = lagrange_d1(a, b, c, s[i]);
            d1.push(Stencil { start, w: w1 });
            if i == n - 1 {
                continue;
            }
            let w = if i == 0 {
                [8.0 * w1[0], 8.0 * w1[1], 8.0 * w1[2]]
            } else {
                let w2 = lagrange_d2(a, b, c);
                let mut w = [0.0; 3];
                for k in 0..3 {
                    w[k] = 4.0 * s[i] * w2[k] + 8.0 * w1[k];
                }
                w
            };
            sigma.push(1.0 / w.iter().map(|x| x.abs()).sum::<f64>());
            lap.push(Stencil { start, w });
        }
        Self { r, lap, sigma, d1 }
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    /// `w'(r) = 2 r w_s` at node `i` for a strided field.
    pub fn radial_derivative(&self, i: usize, x: &[f64], stride: usize, offset: usize) -> f64 {
        2.0 * self.r[i] * self.d1[i].apply(x, stride, offset)
    }
}

pub(crate) fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| if x.is_nan() { f64::INFINITY } else { m.max(x.abs()) })
}

/// A square nonlinear system with a banded Jacobian.
pub(crate) trait NewtonSystem {
    fn residual(&self, x: &[f64]) -> Vec<f64>;
    fn jacobian(&self, x: &[f64]) -> BandMatrix;
}

pub(crate) struct NewtonOutcome {
    pub x: Vec<f64>,
    pub residual: f64,
    pub iters: usize,
}

pub(crate) enum NewtonFailure {
    Singular { row: usize, pivot: f64 },
    Stalled { iters: usize, residual: f64, best: Vec<f64> },
}

/// Newton iteration on the max-norm residual with optional halving line search.
pub(crate) fn newton(
    system: &dyn NewtonSystem,
    x0: Vec<f64>,
    cfg: &SolverConfig,
) -> std::result::Result<NewtonOutcome, NewtonFailure> {
    let mut x = x0;
    let mut r = system.residual(&x);
    let mut res = max_norm(&r);
    let mut best = (x.clone(), res);
    for it in 0..cfg.max_iters {
        if res <= cfg.newton_tol {
            return Ok(NewtonOutcome { x, residual: res, iters: it });
        }
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        let dx = match system.jacobian(&x).solve(&rhs) {
            Ok(dx) => dx,
            Err(Error::SingularJacobian { row, pivot }) => return Err(NewtonFailure::Singular { row, pivot }),
            Err(_) => unreachable!("banded solve only reports singularity"),
        };
        let trial = |t: f64| -> Vec<f64> { x.iter().zip(&dx).map(|(a, d)| a + t * d).collect() };
        match cfg.damping {
            Damping::None => {
                x = trial(1.0);
                r = system.residual(&x);
                res = max_norm(&r);
            }
            Damping::LineSearchHalving { max_halvings } => {
                let mut t = 1.0;
                let mut accepted = None;
                for _ in 0..=max_halvings {
                    let xt = trial(t);
                    let rt = system.residual(&xt);
                    let rn = max_norm(&rt);
                    if rn < res {
                        accepted = Some((xt, rt, rn));
                        break;
                    }
                    t *= 0.5;
                }
                match accepted {
                    Some((xt, rt, rn)) => {
                        x = xt;
                        r = rt;
                        res = rn;
                    }
                    None => {
                        return Err(NewtonFailure::Stalled {
                            iters: it + 1,
                            residual: best.1,
                            best: best.0,
                        })
                    }
                }
            }
        }
        if res < best.1 {
            best = (x.clone(), res);
        }
    }
    if res <= cfg.newton_tol {
        return Ok(NewtonOutcome { x, residual: res, iters: cfg.max_iters });
    }
    Err(NewtonFailure::Stalled {
        iters: cfg.max_iters,
        residual: best.1,
        best: best.0,
    })
}

/// Discrete system in the interleaved unknowns `(U_0, V_0, U_1, V_1, ...)`.
struct FixedLambda<'a> {
    disc: &'a Discretization,
    source: &'a dyn RadialSource,
    lambda: f64,
    bc: BoundaryCondition,
}

impl NewtonSystem for FixedLambda<'_> {
    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let d = self.disc;
        let n = d.n();
        let mut f = vec![0.0; 2 * n];
        for i in 0..n - 1 {
            let st = &d.lap[i];
            let sg = d.sigma[i];
            f[2 * i] = sg * (st.apply(x, 2, 0) - x[2 * i + 1]);
            f[2 * i + 1] = sg * (st.apply(x, 2, 1) - self.lambda * self.source.h_ext(d.r[i], x[2 * i]));
        }
        f[2 * n - 2] = x[2 * n - 2];
        f[2 * n - 1] = boundary_row(d, self.bc, x, 2, 0, 1);
        f
    }

    fn jacobian(&self, x: &[f64]) -> BandMatrix {
        let d = self.disc;
        let n = d.n();
        let mut j = BandMatrix::zeros(2 * n, 5, 4);
        for i in 0..n - 1 {
            let st = &d.lap[i];
            let sg = d.sigma[i];
            for k in 0..3 {
                j.add(2 * i, 2 * (st.start + k), sg * st.w[k]);
                j.add(2 * i + 1, 2 * (st.start + k) + 1, sg * st.w[k]);
            }
            j.add(2 * i, 2 * i + 1, -sg);
            j.add(2 * i + 1, 2 * i, -sg * self.lambda * self.source.h_t_ext(d.r[i], x[2 * i]));
        }
        j.add(2 * n - 2, 2 * n - 2, 1.0);
        add_boundary_row(&mut j, d, self.bc, 2 * n - 1, 2, 0, 1);
        j
    }
}

/// Second boundary condition: `u'(1) = 2 u_s(1)` or `v(1)`.
pub(crate) fn boundary_row(
    d: &Discretization,
    bc: BoundaryCondition,
    x: &[f64],
    stride: usize,
    u_off: usize,
    v_off: usize,
) -> f64 {
    let n = d.n();
    match bc {
        BoundaryCondition::Dirichlet => 2.0 * d.d1[n - 1].apply(x, stride, u_off),
        BoundaryCondition::Navier => x[stride * (n - 1) + v_off],
    }
}

pub(crate) fn add_boundary_row(
    j: &mut BandMatrix,
    d: &Discretization,
    bc: BoundaryCondition,
    row: usize,
    stride: usize,
    u_off: usize,
    v_off: usize,
) {
    let n = d.n();
    match bc {
        BoundaryCondition::Dirichlet => {
            let st = &d.d1[n - 1];
            for k in 0..3 {
                j.add(row, stride * (st.start + k) + u_off, 2.0 * st.w[k]);
            }
        }
        BoundaryCondition::Navier => j.add(row, stride * (n - 1) + v_off, 1.0),
    }
}

/// Builds a [`RadialSolution`] from strided `(U, V)` data, reconstructing the
/// derivatives with the stencils of the residual.
pub(crate) fn assemble_solution(
    grid: &RadialGrid,
    d: &Discretization,
    x: &[f64],
    stride: usize,
    bc: BoundaryCondition,
    lambda: f64,
    residual_norm: f64,
    newton_iters: usize,
) -> RadialSolution {
    let n = d.n();
    let u: Vec<f64> = (0..n).map(|i| x[stride * i]).collect();
    let lap_u: Vec<f64> = (0..n).map(|i| x[stride * i + 1]).collect();
    let du = (0..n).map(|i| d.radial_derivative(i, x, stride, 0)).collect();
    let dlap_u = (0..n).map(|i| d.radial_derivative(i, x, stride, 1)).collect();
    RadialSolution {
        grid: grid.clone(),
        m: u[0],
        u,
        du,
        lap_u,
        dlap_u,
        bc,
        lambda,
        residual_norm,
        newton_iters,
    }
}

/// Solves `Δ²u = λ h(r, u)` with the given boundary conditions.
///
/// `init` seeds Newton and must live on a grid of the same size; the zero
/// field is used otherwise.
pub fn solve(
    source: &dyn RadialSource,
    lambda: f64,
    bc: BoundaryCondition,
    grid: &RadialGrid,
    cfg: &SolverConfig,
    init: Option<&RadialSolution>,
) -> Result<RadialSolution> {
    cfg.validate()?;
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Precondition(format!("lambda must be finite and nonnegative, got {lambda}")));
    }
    let n = grid.len();
    let disc = Discretization::new(grid);
    let mut x0 = vec![0.0; 2 * n];
    if let Some(init) = init {
        if init.u.len() != n {
            return Err(Error::Precondition(format!(
                "initial guess has {} nodes, grid has {n}",
                init.u.len()
            )));
        }
        for i in 0..n {
            x0[2 * i] = init.u[i];
            x0[2 * i + 1] = init.lap_u[i];
        }
    }
    let system = FixedLambda {
        disc: &disc,
        source,
        lambda,
        bc,
    };
    match newton(&system, x0, cfg) {
        Ok(out) => Ok(assemble_solution(grid, &disc, &out.x, 2, bc, lambda, out.residual, out.iters)),
        Err(NewtonFailure::Singular { row, pivot }) => Err(Error::SingularJacobian { row, pivot }),
        Err(NewtonFailure::Stalled { iters, residual, best }) => Err(Error::NoConvergence {
            iterations: iters,
            residual,
            best: Some(Box::new(assemble_solution(grid, &disc, &best, 2, bc, lambda, residual, iters))),
        }),
    }
}

/// `Δ²u = u'''' + 6u'''/r + 3u''/r² - 3u'/r³` from derivative data
/// `[u, u', u'', u''', u'''']` at each radius.
///
/// At `r = 0` the even-expansion limit `8 u''''(0)` is used, which requires
/// `even`.
pub fn radial_bilaplacian(radii: &[f64], derivs: &[[f64; 5]], even: bool) -> Result<Vec<f64>> {
    if radii.len() != derivs.len() {
        return Err(Error::InvalidParameter("radii and derivative data differ in length".into()));
    }
    radii
        .iter()
        .zip(derivs)
        .map(|(&r, d)| bilaplacian_from_jet(r, d, even))
        .collect()
}

fn bilaplacian_from_jet(r: f64, d: &[f64; 5], even: bool) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::InvalidParameter(format!("negative radius {r}")));
    }
    if r == 0.0 {
        if !even {
            return Err(Error::Precondition("r = 0 needs even-parity data".into()));
        }
        return Ok(8.0 * d[4]);
    }
    Ok(d[4] + 6.0 * d[3] / r + 3.0 * d[2] / (r * r) - 3.0 * d[1] / (r * r * r))
}

const FD_D1: [f64; 7] = [-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
const FD_D2: [f64; 7] = [1.0 / 90.0, -3.0 / 20.0, 3.0 / 2.0, -49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0];
const FD_D3: [f64; 9] = [
    -7.0 / 240.0,
    3.0 / 10.0,
    -169.0 / 120.0,
    61.0 / 30.0,
    0.0,
    -61.0 / 30.0,
    169.0 / 120.0,
    -3.0 / 10.0,
    7.0 / 240.0,
];
const FD_D4: [f64; 9] = [
    7.0 / 240.0,
    -2.0 / 5.0,
    169.0 / 60.0,
    -122.0 / 15.0,
    91.0 / 8.0,
    -122.0 / 15.0,
    169.0 / 60.0,
    -2.0 / 5.0,
    7.0 / 240.0,
];

/// Sixth-order central differences of `f` at `r` with step `h`, as `[f, f', ..., f'''']`.
///
/// For `even` functions, samples at negative radii are taken by reflection.
pub fn fd_jet<F: Fn(f64) -> f64>(f: &F, r: f64, h: f64, even: bool) -> Result<[f64; 5]> {
    if !(h > 0.0) {
        return Err(Error::Precondition("finite-difference step must be positive".into()));
    }
    if !even && r < 4.0 * h {
        return Err(Error::Precondition(format!(
            "stencil at r = {r} crosses the origin and no parity is known"
        )));
    }
    let sample = |k: i32| {
        let x = r + k as f64 * h;
        f(if even { x.abs() } else { x })
    };
    let apply = |w: &[f64]| -> f64 {
        let half = (w.len() / 2) as i32;
        w.iter()
            .enumerate()
            .map(|(j, c)| if *c == 0.0 { 0.0 } else { c * sample(j as i32 - half) })
            .sum()
    };
    Ok([
        sample(0),
        apply(&FD_D1) / h,
        apply(&FD_D2) / (h * h),
        apply(&FD_D3) / (h * h * h),
        apply(&FD_D4) / (h * h * h * h),
    ])
}

/// Bilaplacian of a closure by [`fd_jet`] followed by the radial identity.
pub fn radial_bilaplacian_fn<F: Fn(f64) -> f64>(f: &F, r: f64, h: f64, even: bool) -> Result<f64> {
    let jet = fd_jet(f, r, h, even)?;
    bilaplacian_from_jet(r, &jet, even)
}

/// Bilaplacian from differences in `t = ln r`, where `r⁴Δ² = ∂_t⁴ − 4∂_t²`;
/// suited to slowly varying profiles at large radius.
pub fn log_radial_bilaplacian_fn<F: Fn(f64) -> f64>(f: &F, r: f64, h: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Precondition("the logarithmic variable needs r > 0".into()));
    }
    // keep the stencil clear of the origin guard in `fd_jet`
    let t0 = r.ln();
    let shift = t0.abs() + 1.0;
    let jet = fd_jet(&|tau: f64| f((tau - shift).exp()), t0 + shift, h, false)?;
    Ok((jet[4] - 4.0 * jet[2]) / r.powi(4))
}

/// `2π² ∫_0^1 r³ λ h(r, u) dr`, by composite Simpson in `s = r²`.
pub fn solution_energy(sol: &RadialSolution, source: &dyn RadialSource) -> f64 {
    let s = sol.grid.squares();
    let y: Vec<f64> = s
        .iter()
        .zip(&sol.grid.nodes)
        .zip(&sol.u)
        .map(|((&si, &r), &u)| 0.5 * si * sol.lambda * source.h_ext(r, u))
        .collect();
    SPHERE3_AREA * simpson_nonuniform(&s, &y)
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    /// `max u'` over `r in [0.5, 1]`.
    pub max_du_strip: f64,
    /// `max u'` over `(0, 1]`.
    pub max_du_all: f64,
    pub passed: bool,
}

/// Largest allowed `u'` on the outer strip.
pub const MONOTONICITY_TOL: f64 = 1e-8;

/// Checks that `u` is nonincreasing near the boundary.
pub fn monotonicity_check(sol: &RadialSolution) -> MonotonicityReport {
    let mut strip = f64::NEG_INFINITY;
    let mut all = f64::NEG_INFINITY;
    for (&r, &du) in sol.grid.nodes.iter().zip(&sol.du).skip(1) {
        all = all.max(du);
        if r >= 0.5 {
            strip = strip.max(du);
        }
    }
    MonotonicityReport {
        max_du_strip: strip,
        max_du_all: all,
        passed: strip <= MONOTONICITY_TOL,
    }
}

impl RadialSolution {
    pub fn n(&self) -> usize {
        self.u.len()
    }

    /// Rows `r, u, du, lap_u, dlap_u`.
    pub fn rows(&self) -> Vec<[f64; 5]> {
        (0..self.n())
            .map(|i| [self.grid.nodes[i], self.u[i], self.du[i], self.lap_u[i], self.dlap_u[i]])
            .collect()
    }

    /// Cubic Hermite reconstruction of `(u, u', Δu, (Δu)')` at radius `r`.
    pub fn eval(&self, r: f64) -> [f64; 4] {
        let nodes = &self.grid.nodes;
        let r = r.clamp(0.0, 1.0);
        let k = match nodes.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(nodes.len() - 2),
            Err(i) => i.saturating_sub(1).min(nodes.len() - 2),
        };
        let (a, b) = (nodes[k], nodes[k + 1]);
        let (u, du) = hermite(a, b, self.u[k], self.u[k + 1], self.du[k], self.du[k + 1], r);
        let (l, dl) = hermite(a, b, self.lap_u[k], self.lap_u[k + 1], self.dlap_u[k], self.dlap_u[k + 1], r);
        [u, du, l, dl]
    }
}

/// Cubic Hermite value and derivative on `[a, b]`.
pub(crate) fn hermite(a: f64, b: f64, ya: f64, yb: f64, da: f64, db: f64, x: f64) -> (f64, f64) {
    let h = b - a;
    let t = (x - a) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let v = h00 * ya + h10 * h * da + h01 * yb + h11 * h * db;
    let dh00 = 6.0 * t2 - 6.0 * t;
    let dh10 = 3.0 * t2 - 4.0 * t + 1.0;
    let dh01 = -6.0 * t2 + 6.0 * t;
    let dh11 = 3.0 * t2 - 2.0 * t;
    let dv = (dh00 * ya + dh01 * yb) / h + dh10 * da + dh11 * db;
    (v, dv)
}
