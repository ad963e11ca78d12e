//! Max-norm continuation: the branch is parameterized by `M = u(0)` and the
//! scale `λ` is solved for alongside `u`.
//!
//! `λ` is carried as one unknown per node tied together by `λ_i = λ_{i−1}`,
//! which keeps the augmented Jacobian banded. Pinning `u(0)` instead of `λ`
//! makes the system regular at turning points in `λ`.

use serde::Serialize;

use crate::banded::BandMatrix;
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::radial::{
    add_boundary_row, assemble_solution, boundary_row, monotonicity_check, newton, solution_energy,
    BoundaryCondition, Discretization, NewtonFailure, NewtonSystem, RadialSolution, SolverConfig,
};
use crate::source::RadialSource;

/// Smallest step, as a fraction of the requested `dM`, before the branch is truncated.
pub const MIN_STEP_FRACTION: f64 = 1.0 / 16.0;
/// Consecutive successes needed before the step is doubled.
pub const EASY_STREAK: usize = 3;

struct PinnedMax<'a> {
    disc: &'a Discretization,
    source: &'a dyn RadialSource,
    bc: BoundaryCondition,
    m: f64,
}

impl NewtonSystem for PinnedMax<'_> {
    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let d = self.disc;
        let n = d.n();
        let mut f = vec![0.0; 3 * n];
        f[0] = x[0] - self.m;
        for i in 0..n - 1 {
            let (ru, rv) = if i == 0 { (1, 2) } else { (3 * i, 3 * i + 1) };
            let st = &d.lap[i];
            let sg = d.sigma[i];
            f[ru] = sg * (st.apply(x, 3, 0) - x[3 * i + 1]);
            f[rv] = sg * (st.apply(x, 3, 1) - x[3 * i + 2] * self.source.h_ext(d.r[i], x[3 * i]));
            if i > 0 {
                f[3 * i + 2] = x[3 * i + 2] - x[3 * i - 1];
            }
        }
        let last = 3 * (n - 1);
        f[last] = x[last];
        f[last + 1] = boundary_row(d, self.bc, x, 3, 0, 1);
        f[last + 2] = x[last + 2] - x[last - 1];
        f
    }

    fn jacobian(&self, x: &[f64]) -> BandMatrix {
        let d = self.disc;
        let n = d.n();
        let mut j = BandMatrix::zeros(3 * n, 7, 5);
        j.add(0, 0, 1.0);
        for i in 0..n - 1 {
            let (ru, rv) = if i == 0 { (1, 2) } else { (3 * i, 3 * i + 1) };
            let st = &d.lap[i];
            let sg = d.sigma[i];
            for k in 0..3 {
                j.add(ru, 3 * (st.start + k), sg * st.w[k]);
                j.add(rv, 3 * (st.start + k) + 1, sg * st.w[k]);
            }
            j.add(ru, 3 * i + 1, -sg);
            let (r, u, lam) = (d.r[i], x[3 * i], x[3 * i + 2]);
            j.add(rv, 3 * i, -sg * lam * self.source.h_t_ext(r, u));
            j.add(rv, 3 * i + 2, -sg * self.source.h_ext(r, u));
            if i > 0 {
                j.add(3 * i + 2, 3 * i + 2, 1.0);
                j.add(3 * i + 2, 3 * i - 1, -1.0);
            }
        }
        let last = 3 * (n - 1);
        j.add(last, last, 1.0);
        add_boundary_row(&mut j, d, self.bc, last + 1, 3, 0, 1);
        j.add(last + 2, last + 2, 1.0);
        j.add(last + 2, last - 1, -1.0);
        j
    }
}

/// Unknown vector of the augmented system.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedState(Vec<f64>);

impl AugmentedState {
    fn from_solution(sol: &RadialSolution) -> Self {
        let mut x = Vec::with_capacity(3 * sol.n());
        for i in 0..sol.n() {
            x.extend([sol.u[i], sol.lap_u[i], sol.lambda]);
        }
        Self(x)
    }

    /// Small-amplitude guess `u ≈ M φ`, with `φ` the clamped or hinged plate profile.
    fn initial(source: &dyn RadialSource, bc: BoundaryCondition, grid: &RadialGrid, m: f64) -> Self {
        let h = source.h_ext(0.0, 0.5 * m);
        let h = if h > 0.0 && h.is_finite() { h } else { 1.0 };
        type Profile = fn(f64) -> (f64, f64);
        let (lam, profile): (f64, Profile) = match bc {
            BoundaryCondition::Dirichlet => (192.0 * m / h, |s| ((1.0 - s) * (1.0 - s), -16.0 + 24.0 * s)),
            BoundaryCondition::Navier => (96.0 * m / h, |s| (0.5 * (s * s - 3.0 * s + 2.0), 12.0 * (s - 1.0))),
        };
        let mut x = Vec::with_capacity(3 * grid.len());
        for r in &grid.nodes {
            let (u, v) = profile(r * r);
            x.extend([m * u, m * v, lam]);
        }
        Self(x)
    }
}

/// Solves the pinned problem `u(0) = m`, returning the solution with its `λ`.
pub fn solve_at_m(
    source: &dyn RadialSource,
    bc: BoundaryCondition,
    grid: &RadialGrid,
    cfg: &SolverConfig,
    m: f64,
    init: Option<&RadialSolution>,
) -> Result<RadialSolution> {
    cfg.validate()?;
    let disc = Discretization::new(grid);
    let x0 = match init {
        Some(s) if s.n() == grid.len() => AugmentedState::from_solution(s),
        Some(s) => {
            return Err(Error::Precondition(format!(
                "initial guess has {} nodes, grid has {}",
                s.n(),
                grid.len()
            )))
        }
        None => AugmentedState::initial(source, bc, grid, m),
    };
    solve_pinned(source, bc, grid, &disc, cfg, m, x0)
}

fn solve_pinned(
    source: &dyn RadialSource,
    bc: BoundaryCondition,
    grid: &RadialGrid,
    disc: &Discretization,
    cfg: &SolverConfig,
    m: f64,
    x0: AugmentedState,
) -> Result<RadialSolution> {
    let system = PinnedMax { disc, source, bc, m };
    let build = |x: &[f64], res: f64, iters: usize| assemble_solution(grid, disc, x, 3, bc, x[2], res, iters);
    match newton(&system, x0.0, cfg) {
        Ok(out) => Ok(build(&out.x, out.residual, out.iters)),
        Err(NewtonFailure::Singular { row, pivot }) => Err(Error::SingularJacobian { row, pivot }),
        Err(NewtonFailure::Stalled { iters, residual, best }) => Err(Error::NoConvergence {
            iterations: iters,
            residual,
            best: Some(Box::new(build(&best, residual, iters))),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchPoint {
    pub solution: RadialSolution,
    pub lambda: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub energy: f64,
    /// `(λ h(0, M))^{−1/4}`.
    pub mu: f64,
    /// `λ` has a local extremum in `M` here.
    pub fold: bool,
    /// `u' <= 0` held on the outer strip.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionBranch {
    pub bc: BoundaryCondition,
    pub points: Vec<BranchPoint>,
    /// Reason the branch stopped before `M_end`, if it did.
    pub truncated: Option<String>,
}

impl SolutionBranch {
    pub fn fold_count(&self) -> usize {
        self.points.iter().filter(|p| p.fold).count()
    }

    pub fn last(&self) -> Option<&BranchPoint> {
        self.points.last()
    }

    /// Point with `M` closest to `m`.
    pub fn nearest(&self, m: f64) -> Option<&BranchPoint> {
        self.points
            .iter()
            .min_by(|a, b| (a.m - m).abs().partial_cmp(&(b.m - m).abs()).unwrap())
    }

    /// Rows `M, lambda, energy, mu, fold`.
    pub fn rows(&self) -> Vec<[f64; 5]> {
        self.points
            .iter()
            .map(|p| [p.m, p.lambda, p.energy, p.mu, if p.fold { 1.0 } else { 0.0 }])
            .collect()
    }
}

/// `(λ h(0, M))^{−1/4}`, evaluated through logarithms.
pub fn rescaling_length(source: &dyn RadialSource, lambda: f64, m: f64) -> f64 {
    (-0.25 * (lambda.ln() + source.h_ext(0.0, m).ln())).exp()
}

fn make_point(source: &dyn RadialSource, sol: RadialSolution) -> BranchPoint {
    let energy = solution_energy(&sol, source);
    let mu = rescaling_length(source, sol.lambda, sol.m);
    let monotone = monotonicity_check(&sol).passed;
    BranchPoint {
        lambda: sol.lambda,
        m: sol.m,
        energy,
        mu,
        fold: false,
        monotone,
        solution: sol,
    }
}

/// Traces the branch from `m_start` to `m_end` in steps of at most `dm`.
pub fn trace(
    source: &dyn RadialSource,
    bc: BoundaryCondition,
    grid: &RadialGrid,
    cfg: &SolverConfig,
    m_start: f64,
    m_end: f64,
    dm: f64,
) -> Result<SolutionBranch> {
    cfg.validate()?;
    if !(m_start <= m_end) || !m_start.is_finite() || !m_end.is_finite() {
        return Err(Error::Precondition(format!("need M_start <= M_end, got {m_start} > {m_end}")));
    }
    if !(dm > 0.0) {
        return Err(Error::Precondition("dM must be positive".into()));
    }
    if !(m_start > 0.0) {
        return Err(Error::Precondition("M_start must be positive".into()));
    }
    let disc = Discretization::new(grid);
    let first = solve_pinned(source, bc, grid, &disc, cfg, m_start, AugmentedState::initial(source, bc, grid, m_start))?;
    let mut states = vec![AugmentedState::from_solution(&first)];
    let mut points = vec![make_point(source, first)];
    let mut truncated = None;
    let mut step = dm;
    let mut streak = 0;
    let tiny = 1e-12 * m_end.abs().max(1.0);
    while points.last().unwrap().m < m_end - tiny {
        let m_prev = points.last().unwrap().m;
        let mut target = m_prev + step;
        if target > m_end - tiny {
            target = m_end;
        }
        let h = target - m_prev;
        let cur = &states[states.len() - 1].0;
        let guess: Vec<f64> = if states.len() >= 2 {
            let prev = &states[states.len() - 2].0;
            let h_prev = m_prev - points[points.len() - 2].m;
            cur.iter().zip(prev).map(|(c, p)| c + (c - p) * h / h_prev).collect()
        } else {
            let mut g = cur.clone();
            g[0] = target;
            g
        };
        match solve_pinned(source, bc, grid, &disc, cfg, target, AugmentedState(guess)) {
            Ok(sol) => {
                states.push(AugmentedState::from_solution(&sol));
                points.push(make_point(source, sol));
                streak += 1;
                if streak >= EASY_STREAK && step < dm {
                    step = (2.0 * step).min(dm);
                    streak = 0;
                }
            }
            Err(e) => {
                streak = 0;
                step *= 0.5;
                if step < dm * MIN_STEP_FRACTION {
                    truncated = Some(format!("continuation stopped at M = {m_prev}: {e}"));
                    break;
                }
            }
        }
    }
    flag_folds(&mut points);
    Ok(SolutionBranch { bc, points, truncated })
}

fn flag_folds(points: &mut [BranchPoint]) {
    for k in 1..points.len().saturating_sub(1) {
        let a = points[k].lambda - points[k - 1].lambda;
        let b = points[k + 1].lambda - points[k].lambda;
        points[k].fold = a * b < 0.0;
    }
}

/// Per-point energies and their supremum, the empirical energy bound.
pub fn energy_along_branch(branch: &SolutionBranch) -> Result<(Vec<f64>, f64)> {
    if branch.points.is_empty() {
        return Err(Error::Precondition("empty branch".into()));
    }
    let e: Vec<f64> = branch.points.iter().map(|p| p.energy).collect();
    let sup = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok((e, sup))
}
