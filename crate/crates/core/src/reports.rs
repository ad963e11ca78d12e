//! Data payloads of each batch command, as `(file name, contents)` pairs.
//!
//! Payloads are pure functions of the configuration; anything time-dependent
//! belongs in the run manifest instead.

use serde::Serialize;

use crate::blowup::{default_radii, gradient_lp_check, rescale, subcritical_growth_check, BlowupReport, GradientLpReport};
use crate::config::{Format, RunConfig};
use crate::continuation::{energy_along_branch, trace, SolutionBranch};
use crate::counterexample::{a_convergence_scale, certify, ell_grid, params_for_rho, sample_fields, Certificate, CounterexampleParams};
use crate::error::{Error, Result};
use crate::green::{green_samples, kernel_property_suite, polyharmonic_constants, KernelSuiteReport, PolyharmonicConstants};
use crate::output::{csv_string, json_string};
use crate::pohozaev::{pohozaev_annulus, pohozaev_ball, PohozaevReport};
use crate::radial::{monotonicity_check, solution_energy, solve, MonotonicityReport, RadialSolution};

/// Named file contents produced by a command.
pub type Payload = Vec<(String, String)>;

struct Sink<'a> {
    cfg: &'a RunConfig,
    files: Payload,
}

impl<'a> Sink<'a> {
    fn new(cfg: &'a RunConfig) -> Self {
        Self { cfg, files: Vec::new() }
    }

    fn csv<R: AsRef<[f64]>>(&mut self, name: &str, header: &[&str], rows: &[R]) {
        if self.cfg.output.wants(Format::Csv) {
            self.files.push((name.to_string(), csv_string(header, rows)));
        }
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        if self.cfg.output.wants(Format::Json) {
            self.files.push((name.to_string(), json_string(value)?));
        }
        Ok(())
    }
}

/// Column names of `solution.csv`.
pub const SOLUTION_HEADER: [&str; 5] = ["r", "u", "du", "lap_u", "dlap_u"];

#[derive(Serialize)]
struct SolveSummary {
    lambda: f64,
    #[serde(rename = "M")]
    m: f64,
    bc: crate::radial::BoundaryCondition,
    nodes: usize,
    residual_norm: f64,
    newton_iters: usize,
    energy: f64,
    monotonicity: MonotonicityReport,
}

fn solve_configured(cfg: &RunConfig) -> Result<(RadialSolution, Box<dyn crate::source::RadialSource>)> {
    let source = cfg.nonlinearity.source()?;
    let grid = cfg.solver.grid()?;
    let sol = solve(
        source.as_ref(),
        cfg.solver.lambda,
        cfg.solver.bc(),
        &grid,
        &cfg.solver.solver_config()?,
        None,
    )?;
    Ok((sol, source))
}

pub fn solve_payload(cfg: &RunConfig) -> Result<Payload> {
    let (sol, source) = solve_configured(cfg)?;
    let mut sink = Sink::new(cfg);
    sink.csv("solution.csv", &SOLUTION_HEADER, &sol.rows());
    sink.json(
        "solution.json",
        &SolveSummary {
            lambda: sol.lambda,
            m: sol.m,
            bc: sol.bc,
            nodes: sol.n(),
            residual_norm: sol.residual_norm,
            newton_iters: sol.newton_iters,
            energy: solution_energy(&sol, source.as_ref()),
            monotonicity: monotonicity_check(&sol),
        },
    )?;
    Ok(sink.files)
}

/// Traces the configured branch.
pub fn trace_configured(cfg: &RunConfig) -> Result<SolutionBranch> {
    cfg.branch.validate()?;
    let source = cfg.nonlinearity.source()?;
    trace(
        source.as_ref(),
        cfg.solver.bc(),
        &cfg.branch.grid()?,
        &cfg.solver.solver_config()?,
        cfg.branch.m_start,
        cfg.branch.m_end,
        cfg.branch.dm,
    )
}

#[derive(Serialize)]
struct BranchSummary {
    points: usize,
    folds: usize,
    fold_m: Vec<f64>,
    truncated: Option<String>,
    energy_sup: f64,
    monotone_everywhere: bool,
}

pub fn branch_payload(cfg: &RunConfig) -> Result<Payload> {
    let branch = trace_configured(cfg)?;
    let mut sink = Sink::new(cfg);
    sink.csv("branch.csv", &["M", "lambda", "energy", "mu", "fold"], &branch.rows());
    let (_, sup) = energy_along_branch(&branch)?;
    sink.json(
        "branch.json",
        &BranchSummary {
            points: branch.points.len(),
            folds: branch.fold_count(),
            fold_m: branch.points.iter().filter(|p| p.fold).map(|p| p.m).collect(),
            truncated: branch.truncated.clone(),
            energy_sup: sup,
            monotone_everywhere: branch.points.iter().all(|p| p.monotone),
        },
    )?;
    Ok(sink.files)
}

#[derive(Serialize)]
struct BlowupFile<'a> {
    #[serde(flatten)]
    report: &'a BlowupReport,
    gradient_lp: GradientLpReport,
}

/// File label of an amplitude: shortest decimal form.
pub fn m_label(m: f64) -> String {
    format!("{m}")
}

pub fn blowup_payload(cfg: &RunConfig) -> Result<Payload> {
    let spec = cfg.nonlinearity.spec()?;
    let branch = trace_configured(cfg)?;
    let mut sink = Sink::new(cfg);
    if spec.beta() == 0.0 {
        sink.json("blowup_subcritical.json", &subcritical_growth_check(&branch)?)?;
        return Ok(sink.files);
    }
    let b = &cfg.blowup;
    let lp_radii = default_radii(b.lp_r_min, b.lp_radii);
    for &m in &b.m_values {
        let point = branch
            .nearest(m)
            .ok_or_else(|| Error::Precondition("empty branch".into()))?;
        let report = rescale(&point.solution, &spec, b.r_max, &b.radii)?;
        let gradient_lp = gradient_lp_check(&point.solution, b.lp_order, b.lp_p, &lp_radii)?;
        let label = m_label(m);
        sink.json(&format!("blowup_{label}.json"), &BlowupFile { report: &report, gradient_lp })?;
        sink.csv(&format!("blowup_{label}_profile.csv"), &["rho", "v", "v_bubble"], &report.profile);
    }
    Ok(sink.files)
}

#[derive(Serialize)]
struct PohozaevFile {
    ball: PohozaevReport,
    sub_balls: Vec<PohozaevReport>,
}

pub fn pohozaev_payload(cfg: &RunConfig) -> Result<Payload> {
    let (sol, source) = solve_configured(cfg)?;
    let ball = pohozaev_ball(&sol, source.as_ref(), cfg.pohozaev.y)?;
    let sub_balls = cfg
        .pohozaev
        .sub_balls
        .iter()
        .map(|[c, r]| pohozaev_annulus(&sol, source.as_ref(), *c, *r))
        .collect::<Result<_>>()?;
    let mut sink = Sink::new(cfg);
    sink.json("pohozaev.json", &PohozaevFile { ball, sub_balls })?;
    Ok(sink.files)
}

#[derive(Serialize)]
struct GreenFile {
    suite: KernelSuiteReport,
    polyharmonic: Vec<PolyharmonicConstants>,
}

pub fn green_payload(cfg: &RunConfig) -> Result<Payload> {
    let g = &cfg.green;
    let mut sink = Sink::new(cfg);
    let rows: Vec<[f64; 3]> = green_samples(g.samples, g.seed)?
        .iter()
        .map(|s| [s.dist, s.g, s.bound])
        .collect();
    sink.csv("green_samples.csv", &["dist", "g", "bound"], &rows);
    sink.json(
        "green.json",
        &GreenFile {
            suite: kernel_property_suite(g.samples, g.seed)?,
            polyharmonic: (1..=4).map(polyharmonic_constants).collect::<Result<_>>()?,
        },
    )?;
    Ok(sink.files)
}

#[derive(Serialize)]
struct CounterexampleFile {
    params: CounterexampleParams,
    certificate: Certificate,
    limit_potential: f64,
    /// First `ℓ` (scanned to `1e30`) with `a` within 5% of its limit.
    a_convergence_ell: Option<f64>,
}

pub fn counterexample_payload(cfg: &RunConfig) -> Result<Payload> {
    let c = &cfg.counterexample;
    let params = params_for_rho(c.alpha, c.ell_rho)?;
    let grid = ell_grid(c.ell_rho, c.ell_max, c.samples)?;
    let fields = sample_fields(&params, &grid)?;
    let certificate = certify(&params, &grid)?;
    let rows: Vec<[f64; 10]> = fields
        .iter()
        .map(|f| [f.ell, f.u_beta, f.w, f.ln_a, f.a, f.bilap_u, f.h[0], f.h[1], f.h[2], f.h[3]])
        .collect();
    let mut sink = Sink::new(cfg);
    sink.csv(
        "counterexample.csv",
        &["ell", "u_beta", "w", "ln_a", "a", "bilap_u", "h0", "h1", "h2", "h3"],
        &rows,
    );
    sink.json(
        "counterexample.json",
        &CounterexampleFile {
            limit_potential: params.limit_potential(),
            a_convergence_ell: a_convergence_scale(&params, 0.05, 1e30),
            params,
            certificate,
        },
    )?;
    Ok(sink.files)
}
