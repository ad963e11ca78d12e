//! Unbounded distributional solution of `Δ²w = a(x) e^{w^α}` for `α ∈ (1, 2)`.
//!
//! All fields are functions of the log-radial variable `ℓ = ln(1/r)`; the
//! radius itself is never formed, so `ℓ = 10⁶` (far below the smallest
//! representable `r`) is as cheap as `ℓ = 10`. In these coordinates
//! `r⁴ Δ² = ∂_ℓ⁴ − 4 ∂_ℓ²` for radial functions in `R⁴`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Residual target for the root defining `x0` and for the implicit system.
pub const ROOT_TOL: f64 = 1e-12;
/// Tolerance on the directly re-derived parameter system.
pub const PARAMS_TOL: f64 = 1e-8;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (1, 2), got {alpha}")));
    }
    Ok(())
}

/// `γ = (α − 1)/α`.
pub fn gamma_of(alpha: f64) -> f64 {
    (alpha - 1.0) / alpha
}

/// `δ = 1/(4α) − 1/2`.
pub fn delta_of(alpha: f64) -> f64 {
    0.25 / alpha - 0.5
}

/// The root `x0 < −1` of `(−x)^α = 1 − αx`.
pub fn solve_x0(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let g = |s: f64| s.powf(alpha) - alpha * s - 1.0;
    let dg = |s: f64| alpha * s.powf(alpha - 1.0) - alpha;
    // g(1) = -α < 0 and g grows like s^α, so a sign change is bracketed.
    let (mut lo, mut hi) = (1.0, 2.0);
    while g(hi) <= 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-10 {
            break;
        }
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..20 {
        let step = g(s) / dg(s);
        s -= step;
        if step.abs() < 1e-16 * s {
            break;
        }
    }
    let x0 = -s;
    let res = g(s).abs();
    if res > ROOT_TOL * s.powf(alpha) || !(x0 < -1.0) {
        return Err(Error::Inconsistent(format!("x0 root failed: x0 = {x0}, residual {res:e}")));
    }
    Ok(x0)
}

/// `y0 = −(x0 + (−x0)^{2−α})/(2α)`.
pub fn y0_of(alpha: f64, x0: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let y0 = -(x0 + (-x0).powf(2.0 - alpha)) / (2.0 * alpha);
    if !(y0 > 0.0) {
        return Err(Error::Inconsistent(format!("y0 = {y0} is not positive")));
    }
    Ok(y0)
}

fn t_log_t(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * t.ln()
    }
}

/// Components of the implicit system `F(x, y, t)` with its Jacobian in `(x, y)`.
///
/// Fails when `1 − αx − δ t log t` leaves the positive half-line.
pub fn implicit_system(alpha: f64, x: f64, y: f64, t: f64) -> Result<([f64; 2], [[f64; 2]; 2])> {
    let delta = delta_of(alpha);
    let p = 1.0 - alpha * x - delta * t_log_t(t);
    if !(p > 0.0) {
        return Err(Error::Implicit {
            t,
            reason: format!("argument 1 - alpha x - delta t log t = {p} is not positive"),
        });
    }
    let ia = 1.0 / alpha;
    let g = 1.0 - (alpha - 1.0) * x + delta * t;
    let q1 = p.powf(ia - 1.0);
    let f = [x + y * t + p.powf(ia), 2.0 * y - ia * q1 * g];
    let j = [
        [1.0 - q1, t],
        [(ia - 1.0) * p.powf(ia - 2.0) * g + (alpha - 1.0) * ia * q1, 2.0],
    ];
    Ok((f, j))
}

/// Continuation `(x(t), y(t))` of the root `(x0, y0)` of `F(·, ·, 0)`.
pub fn solve_implicit(alpha: f64, t: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    if !(0.0..1.0).contains(&t) {
        return Err(Error::Implicit {
            t,
            reason: "t must lie in [0, 1)".into(),
        });
    }
    let x0 = solve_x0(alpha)?;
    let mut x = x0;
    let mut y = y0_of(alpha, x0)?;
    let norm = |f: [f64; 2]| f[0].abs().max(f[1].abs());
    let (mut f, mut j) = implicit_system(alpha, x, y, t)?;
    for _ in 0..100 {
        if norm(f) <= ROOT_TOL {
            return Ok((x, y));
        }
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::Implicit {
                t,
                reason: "singular Jacobian".into(),
            });
        }
        let dx = -(f[0] * j[1][1] - j[0][1] * f[1]) / det;
        let dy = -(j[0][0] * f[1] - j[1][0] * f[0]) / det;
        let mut step = 1.0;
        let current = norm(f);
        loop {
            match implicit_system(alpha, x + step * dx, y + step * dy, t) {
                Ok((ft, jt)) if norm(ft) < current => {
                    x += step * dx;
                    y += step * dy;
                    f = ft;
                    j = jt;
                    break;
                }
                _ => {
                    step *= 0.5;
                    if step < 1e-10 {
                        if current <= 10.0 * ROOT_TOL {
                            return Ok((x, y));
                        }
                        return Err(Error::Implicit {
                            t,
                            reason: format!("damped Newton stalled at residual {current:e}"),
                        });
                    }
                }
            }
        }
    }
    if norm(f) <= ROOT_TOL {
        Ok((x, y))
    } else {
        Err(Error::Implicit {
            t,
            reason: format!("no convergence, residual {:e}", norm(f)),
        })
    }
}

/// The profile `u_β(ℓ) = f_β(ℓ)^{1/α}` with `f_β(ℓ) = ℓ + β ℓ^γ + δ log ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UBeta {
    pub alpha: f64,
    pub beta: f64,
}

/// Decomposition `r⁴ Δ²u_β = sum_i i! C(1/α, i) u^{1 − iα} h_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BilapParts {
    /// `r⁴ Δ²u_β`.
    pub scaled: f64,
    pub h: [f64; 4],
    /// `(4(α − 1)/α²) ℓ^{1/α − 2}`, the leading behaviour of `scaled`.
    pub leading: f64,
}

impl UBeta {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !beta.is_finite() {
            return Err(Error::InvalidParameter("beta must be finite".into()));
        }
        Ok(Self { alpha, beta })
    }

    /// `[f, f', f'', f''', f'''']` at `ℓ`.
    pub fn f_jet(&self, ell: f64) -> [f64; 5] {
        let g = gamma_of(self.alpha);
        let d = delta_of(self.alpha);
        let b = self.beta;
        let lg = ell.powf(g);
        let c1 = b * g;
        let c2 = c1 * (g - 1.0);
        let c3 = c2 * (g - 2.0);
        let c4 = c3 * (g - 3.0);
        let l2 = ell * ell;
        [
            ell + b * lg + d * ell.ln(),
            1.0 + c1 * lg / ell + d / ell,
            c2 * lg / l2 - d / l2,
            c3 * lg / (l2 * ell) + 2.0 * d / (l2 * ell),
            c4 * lg / (l2 * l2) - 6.0 * d / (l2 * l2),
        ]
    }

    pub fn f(&self, ell: f64) -> f64 {
        self.f_jet(ell)[0]
    }

    pub fn u(&self, ell: f64) -> f64 {
        self.f(ell).powf(1.0 / self.alpha)
    }

    /// `du/dℓ`.
    pub fn du(&self, ell: f64) -> f64 {
        let j = self.f_jet(ell);
        j[0].powf(1.0 / self.alpha - 1.0) * j[1] / self.alpha
    }

    /// `u` as a function of the radius, for moderate `r`.
    pub fn u_of_r(&self, r: f64) -> f64 {
        self.u(-r.ln())
    }

    pub fn bilaplacian(&self, ell: f64) -> Result<BilapParts> {
        let [f, f1, f2, f3, f4] = self.f_jet(ell);
        if !(f > 0.0) {
            return Err(Error::Precondition(format!("u_beta is not positive at ell = {ell}")));
        }
        let h = [
            f4 - 4.0 * f2,
            4.0 * f3 * f1 - 4.0 * f1 * f1 + 3.0 * f2 * f2,
            6.0 * f1 * f1 * f2,
            f1 * f1 * f1 * f1,
        ];
        let a = 1.0 / self.alpha;
        let mut falling = 1.0;
        let mut scaled = 0.0;
        for (i, hi) in h.iter().enumerate() {
            falling *= a - i as f64;
            scaled += falling * f.powf(a - (i + 1) as f64) * hi;
        }
        let leading = 4.0 * (self.alpha - 1.0) / (self.alpha * self.alpha) * ell.powf(a - 2.0);
        Ok(BilapParts { scaled, h, leading })
    }
}

/// Parameters of the construction for `ℓ(ρ) = ell_rho`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleParams {
    pub alpha: f64,
    pub gamma: f64,
    pub delta: f64,
    /// `ℓ(ρ) = ln(1/ρ)`.
    pub ell_rho: f64,
    pub x0: f64,
    pub y0: f64,
    /// `(x, y)` solving the implicit system at `t = 1/ℓ(ρ)`.
    pub x: f64,
    pub y: f64,
    /// `A(ρ)`.
    pub a_coef: f64,
    /// `B(ρ) ρ²`; `B` alone overflows for tiny `ρ`.
    pub b_rho2: f64,
    pub beta: f64,
    /// `|A + Bρ² + u_β(ρ)|` and `|2Bρ² − du_β/dℓ(ρ)|`.
    pub verification: [f64; 2],
}

impl CounterexampleParams {
    pub fn profile(&self) -> UBeta {
        UBeta {
            alpha: self.alpha,
            beta: self.beta,
        }
    }

    /// `4^{1/α+1}(α − 1)/α²`, the limit of `a` at the origin.
    pub fn limit_potential(&self) -> f64 {
        limit_potential(self.alpha)
    }

    /// `β / ℓ(ρ)^{1/α}`.
    pub fn beta_ratio(&self) -> f64 {
        self.beta / self.ell_rho.powf(1.0 / self.alpha)
    }

    fn check_ell(&self, ell: f64) -> Result<()> {
        if !(ell >= self.ell_rho * (1.0 - 1e-15)) {
            return Err(Error::Precondition(format!("ell = {ell} lies outside B_rho (ell_rho = {})", self.ell_rho)));
        }
        Ok(())
    }

    /// `A + Bρ² e^{−2(ℓ − ℓ(ρ))}`, i.e. `A + B r²`.
    fn corrector(&self, ell: f64) -> (f64, f64) {
        let b = self.b_rho2 * (-2.0 * (ell - self.ell_rho)).exp();
        (self.a_coef + b, b)
    }

    /// `w = 4^{1/α}(u_β + A + B r²)`.
    pub fn eval_w(&self, ell: f64) -> Result<f64> {
        self.check_ell(ell)?;
        let (c, _) = self.corrector(ell);
        Ok(4f64.powf(1.0 / self.alpha) * (self.profile().u(ell) + c))
    }

    /// `dw/dℓ = −r dw/dr`.
    pub fn eval_dw_dell(&self, ell: f64) -> Result<f64> {
        self.check_ell(ell)?;
        let (_, b) = self.corrector(ell);
        Ok(4f64.powf(1.0 / self.alpha) * (self.profile().du(ell) - 2.0 * b))
    }

    /// `w^α − 4ℓ`, free of the cancellation between its two large parts.
    pub fn w_alpha_excess(&self, ell: f64) -> Result<f64> {
        self.check_ell(ell)?;
        let alpha = self.alpha;
        let ub = self.profile();
        let f = ub.f(ell);
        let u = f.powf(1.0 / alpha);
        let (c, b) = self.corrector(ell);
        let x = (c / u).max(-1.0);
        let e = if x.abs() < 1e-3 {
            let a = alpha;
            let mut term = a * (a - 1.0) / 2.0 * x * x;
            let mut sum = term;
            for k in 3..=7 {
                term *= (a - (k - 1) as f64) / k as f64 * x;
                sum += term;
            }
            sum
        } else {
            (alpha * x.ln_1p()).exp_m1() - alpha * x
        };
        let lg = ell.powf(self.gamma);
        let q = (self.beta * lg + self.delta * ell.ln()) / ell;
        let lg_minus_u = -lg * (self.gamma * q.ln_1p()).exp_m1();
        let u_am1 = f.powf(self.gamma);
        Ok(4.0 * (f * e + self.beta * lg_minus_u + alpha * b * u_am1 + self.delta * ell.ln()))
    }

    /// `(ln a, a)` with `a = 4^{1/α} e^{−w^α} Δ²u_β`, assembled in log space.
    pub fn eval_a(&self, ell: f64) -> Result<(f64, f64)> {
        let s = self.profile().bilaplacian(ell)?.scaled;
        if !(s > 0.0) {
            return Err(Error::Certificate {
                clause: "bilaplacian positivity",
                ell,
                detail: format!("r^4 bilap u = {s:e}"),
            });
        }
        let ln_a = (1.0 / self.alpha) * 4f64.ln() + s.ln() - self.w_alpha_excess(ell)?;
        Ok((ln_a, ln_a.exp()))
    }

    /// Relative mismatch of `Δ²w = a e^{w^α}` with both sides split as `4ℓ + rest`.
    pub fn identity_residual(&self, ell: f64) -> Result<f64> {
        let s = self.profile().bilaplacian(ell)?.scaled;
        let lhs_rest = (1.0 / self.alpha) * 4f64.ln() + s.ln();
        let (ln_a, _) = self.eval_a(ell)?;
        let rhs_rest = ln_a + self.w_alpha_excess(ell)?;
        Ok((lhs_rest - rhs_rest).abs() / (4.0 * ell + lhs_rest.abs()))
    }
}

/// `4^{1/α+1}(α − 1)/α²`.
pub fn limit_potential(alpha: f64) -> f64 {
    4f64.powf(1.0 / alpha + 1.0) * (alpha - 1.0) / (alpha * alpha)
}

/// Assembles and independently verifies the parameters for `ℓ(ρ) = ell_rho`.
pub fn params_for_rho(alpha: f64, ell_rho: f64) -> Result<CounterexampleParams> {
    check_alpha(alpha)?;
    if !(ell_rho > 1.0) || !ell_rho.is_finite() {
        return Err(Error::InvalidParameter(format!("ell_rho must exceed 1, got {ell_rho}")));
    }
    let x0 = solve_x0(alpha)?;
    let y0 = y0_of(alpha, x0)?;
    let (x, y) = solve_implicit(alpha, 1.0 / ell_rho)?;
    let l1a = ell_rho.powf(1.0 / alpha);
    let a_coef = x * l1a;
    let b_rho2 = y * l1a / ell_rho;
    let beta = -alpha * a_coef;
    let ub = UBeta::new(alpha, beta)?;
    let u = ub.u(ell_rho);
    let verification = [(a_coef + b_rho2 + u).abs(), (2.0 * b_rho2 - ub.du(ell_rho)).abs()];
    let scale = a_coef.abs().max(1.0);
    if verification.iter().any(|v| !(v / scale <= PARAMS_TOL)) {
        return Err(Error::Inconsistent(format!(
            "parameter system residuals {verification:?} exceed {PARAMS_TOL:e}"
        )));
    }
    Ok(CounterexampleParams {
        alpha,
        gamma: gamma_of(alpha),
        delta: delta_of(alpha),
        ell_rho,
        x0,
        y0,
        x,
        y,
        a_coef,
        b_rho2,
        beta,
        verification,
    })
}

/// Geometric grid of `n` points from `ell_rho` to `ell_max`.
pub fn ell_grid(ell_rho: f64, ell_max: f64, n: usize) -> Result<Vec<f64>> {
    if !(ell_max > ell_rho) || n < 2 {
        return Err(Error::InvalidParameter("ell grid needs ell_max > ell_rho and at least 2 points".into()));
    }
    let ratio = (ell_max / ell_rho).ln() / (n - 1) as f64;
    let mut g: Vec<f64> = (0..n).map(|i| ell_rho * (ratio * i as f64).exp()).collect();
    g[0] = ell_rho;
    g[n - 1] = ell_max;
    Ok(g)
}

/// One row of the field dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    pub ell: f64,
    pub u_beta: f64,
    pub w: f64,
    pub ln_a: f64,
    pub a: f64,
    /// `r⁴ Δ²u_β`.
    pub bilap_u: f64,
    pub h: [f64; 4],
}

pub fn sample_fields(params: &CounterexampleParams, grid: &[f64]) -> Result<Vec<FieldSample>> {
    let ub = params.profile();
    grid.iter()
        .map(|&ell| {
            let parts = ub.bilaplacian(ell)?;
            let (ln_a, a) = params.eval_a(ell)?;
            Ok(FieldSample {
                ell,
                u_beta: ub.u(ell),
                w: params.eval_w(ell)?,
                ln_a,
                a,
                bilap_u: parts.scaled,
                h: parts.h,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub passed: bool,
    /// Witness `ℓ` for a failure, or the most adverse grid point.
    pub ell: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub alpha: f64,
    pub ell_rho: f64,
    pub ell_max: f64,
    pub clauses: Vec<Clause>,
    /// First `ℓ` beyond which `w` increases strictly on the grid.
    pub ell_star: f64,
    pub min_ln_a: f64,
    pub max_ln_a: f64,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    /// The first failed clause as an error.
    pub fn into_result(self) -> Result<Self> {
        if let Some(c) = self.clauses.iter().find(|c| !c.passed) {
            return Err(Error::Certificate {
                clause: c.name,
                ell: c.ell,
                detail: c.detail.clone(),
            });
        }
        Ok(self)
    }
}

/// Tolerance of the identity clause.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Tolerance of the boundary clause.
pub const BOUNDARY_TOL: f64 = 1e-8;

/// Pointwise certificate of positivity, unboundedness, boundedness of `a`,
/// boundary data at `ρ` and the defining identity.
pub fn certify(params: &CounterexampleParams, grid: &[f64]) -> Result<Certificate> {
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("ell grid must be strictly increasing".into()));
    }
    let ub = params.profile();
    let mut clauses = Vec::new();

    let mut min_s = (f64::INFINITY, f64::NAN);
    for &ell in grid {
        let s = ub.bilaplacian(ell)?.scaled;
        if s < min_s.0 {
            min_s = (s, ell);
        }
    }
    clauses.push(Clause {
        name: "bilaplacian positive",
        passed: min_s.0 > 0.0,
        ell: min_s.1,
        detail: format!("min r^4 bilap u = {:e}", min_s.0),
    });

    let w: Vec<f64> = grid.iter().map(|&l| params.eval_w(l)).collect::<Result<_>>()?;
    let interior_min = w[1..].iter().cloned().fold(f64::INFINITY, f64::min);
    let mut star = grid.len() - 1;
    while star > 0 && w[star - 1] < w[star] {
        star -= 1;
    }
    let ell_star = grid[star];
    let unbounded = interior_min > 0.0 && star + 1 < grid.len() && w[grid.len() - 1] > w[star];
    clauses.push(Clause {
        name: "w positive and increasing",
        passed: unbounded,
        ell: ell_star,
        detail: format!(
            "min w beyond ell_rho = {interior_min:e}; strictly increasing from ell* = {ell_star:e}; w(ell_max) = {:e}",
            w[grid.len() - 1]
        ),
    });

    let mut min_ln_a = (f64::INFINITY, f64::NAN);
    let mut max_ln_a = (f64::NEG_INFINITY, f64::NAN);
    for &ell in grid {
        let (la, _) = params.eval_a(ell)?;
        if la < min_ln_a.0 {
            min_ln_a = (la, ell);
        }
        if la > max_ln_a.0 {
            max_ln_a = (la, ell);
        }
    }
    clauses.push(Clause {
        name: "a positive and bounded",
        passed: min_ln_a.0.is_finite() && max_ln_a.0.is_finite(),
        ell: max_ln_a.1,
        detail: format!("ln a in [{:e}, {:e}]", min_ln_a.0, max_ln_a.0),
    });

    let w_rho = params.eval_w(params.ell_rho)?;
    let dw_rho = params.eval_dw_dell(params.ell_rho)?;
    clauses.push(Clause {
        name: "boundary data at rho",
        passed: w_rho.abs() <= BOUNDARY_TOL && dw_rho.abs() <= BOUNDARY_TOL,
        ell: params.ell_rho,
        detail: format!("w = {w_rho:e}, rho w'(rho) = {dw_rho:e}"),
    });

    let mut worst = (0.0, params.ell_rho);
    for &ell in grid {
        let r = params.identity_residual(ell)?;
        if r > worst.0 {
            worst = (r, ell);
        }
    }
    clauses.push(Clause {
        name: "identity bilap w = a e^{w^alpha}",
        passed: worst.0 <= IDENTITY_TOL,
        ell: worst.1,
        detail: format!("max relative residual {:e}", worst.0),
    });

    Ok(Certificate {
        alpha: params.alpha,
        ell_rho: params.ell_rho,
        ell_max: grid[grid.len() - 1],
        clauses,
        ell_star,
        min_ln_a: min_ln_a.0,
        max_ln_a: max_ln_a.0,
    })
}

/// `(∂_ℓ⁴ − 4∂_ℓ²) u` by sixth-order differences with step `h`.
pub fn fd_scaled_bilaplacian(ub: &UBeta, ell: f64, h: f64) -> Result<f64> {
    let jet = crate::radial::fd_jet(&|l: f64| ub.u(l), ell, h, false)?;
    Ok(jet[4] - 4.0 * jet[2])
}

/// Smallest `ℓ` on a log scan up to `ell_limit` where `a` is within relative
/// `tol` of its limit, if any.
pub fn a_convergence_scale(params: &CounterexampleParams, tol: f64, ell_limit: f64) -> Option<f64> {
    let target = params.limit_potential().ln();
    let band = (1.0 + tol).ln();
    let mut ell = params.ell_rho;
    while ell <= ell_limit {
        if let Ok((la, _)) = params.eval_a(ell) {
            if (la - target).abs() <= band {
                return Some(ell);
            }
        }
        ell *= 10f64.powf(0.125);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn x0_examples() {
        let x0 = solve_x0(1.5).unwrap();
        assert!((x0 + 3.26).abs() < 0.01);
        // bisection oracle
        let (mut lo, mut hi) = (1.0f64, 10.0f64);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if m.powf(1.5) - 1.5 * m - 1.0 > 0.0 {
                hi = m
            } else {
                lo = m
            }
        }
        assert_relative_eq!(-x0, lo, max_relative = 1e-12);
        for a in [1.1, 1.5, 1.9] {
            assert!(solve_x0(a).unwrap() < -1.0);
        }
        let near2 = solve_x0(1.999_999).unwrap();
        assert!((near2 + 1.0 + 2f64.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn y0_examples() {
        let x0 = solve_x0(1.5).unwrap();
        let y0 = y0_of(1.5, x0).unwrap();
        assert!((y0 - 0.486).abs() < 1e-3, "{y0}");
        for a in [1.05, 1.3, 1.7, 1.95] {
            assert!(y0_of(a, solve_x0(a).unwrap()).unwrap() > 0.0);
        }
        let (f, _) = implicit_system(1.5, x0, y0, 0.0).unwrap();
        assert!(f[0].abs() < 1e-12 && f[1].abs() < 1e-12);
    }

    #[test]
    fn implicit_branch() {
        let x0 = solve_x0(1.5).unwrap();
        let (x, _) = solve_implicit(1.5, 1e-6).unwrap();
        assert!((x - x0).abs() < 1e-3);
        let (x, y) = solve_implicit(1.5, 0.01).unwrap();
        let (f, _) = implicit_system(1.5, x, y, 0.01).unwrap();
        assert!(f[0].abs() <= 1e-12 && f[1].abs() <= 1e-12);
    }

    #[test]
    fn implicit_jacobian_matches_differences() {
        let (x, y, t) = (-3.0, 0.5, 0.02);
        let (_, j) = implicit_system(1.5, x, y, t).unwrap();
        let h = 1e-6;
        let fx = |x: f64, y: f64| implicit_system(1.5, x, y, t).unwrap().0;
        for k in 0..2 {
            let dx = (fx(x + h, y)[k] - fx(x - h, y)[k]) / (2.0 * h);
            let dy = (fx(x, y + h)[k] - fx(x, y - h)[k]) / (2.0 * h);
            assert_relative_eq!(j[k][0], dx, max_relative = 1e-7);
            assert_relative_eq!(j[k][1], dy, max_relative = 1e-7);
        }
    }

    #[test]
    fn domain_guard() {
        assert!(matches!(implicit_system(1.5, 1.0, 0.0, 0.0), Err(Error::Implicit { .. })));
    }

    #[test]
    fn params_examples() {
        let p = params_for_rho(1.5, 100.0).unwrap();
        let (x, _) = solve_implicit(1.5, 0.01).unwrap();
        assert_relative_eq!(p.beta, -1.5 * x * 100f64.powf(2.0 / 3.0), max_relative = 1e-14);
        let ratios: Vec<f64> = [1e2, 1e3, 1e4].iter().map(|&l| params_for_rho(1.5, l).unwrap().beta_ratio()).collect();
        for r in &ratios {
            assert!(*r > 4.0 && *r < 6.0, "{ratios:?}");
        }
        let ub = p.profile();
        assert!((p.a_coef + p.b_rho2 + ub.u(100.0)).abs() < 1e-8);
    }

    #[test]
    fn decomposition_matches_log_radial_differences() {
        let p = params_for_rho(1.5, 1e3).unwrap();
        let ub = p.profile();
        for ell in [1e3, 2e3, 5e3] {
            let parts = ub.bilaplacian(ell).unwrap();
            let fd = fd_scaled_bilaplacian(&ub, ell, 0.02 * ell).unwrap();
            assert_relative_eq!(parts.scaled, fd, max_relative = 1e-6);
        }
    }

    #[test]
    fn decomposition_matches_radial_differences() {
        let ub = UBeta::new(1.5, 2.0).unwrap();
        for ell in [2.0, 3.0, 4.0] {
            let r = f64::exp(-ell);
            let parts = ub.bilaplacian(ell).unwrap();
            let f = |x: f64| ub.u_of_r(x);
            let fd = crate::radial::radial_bilaplacian_fn(&f, r, r / 40.0, false).unwrap();
            assert_relative_eq!(parts.scaled / r.powi(4), fd, max_relative = 1e-5);
        }
    }

    #[test]
    fn boundary_data() {
        let p = params_for_rho(1.5, 1e3).unwrap();
        assert!(p.eval_w(1e3).unwrap().abs() < 1e-8);
        assert!(p.eval_dw_dell(1e3).unwrap().abs() < 1e-8);
        assert!(p.eval_w(999.0).is_err());
    }

    #[test]
    fn excess_matches_direct_evaluation_at_moderate_ell() {
        let p = params_for_rho(1.5, 50.0).unwrap();
        for ell in [55.0, 80.0, 200.0] {
            let w = p.eval_w(ell).unwrap();
            let direct = w.powf(1.5) - 4.0 * ell;
            assert_relative_eq!(p.w_alpha_excess(ell).unwrap(), direct, max_relative = 1e-9, epsilon = 1e-9);
        }
    }

    #[test]
    fn parameter_arithmetic() {
        for a in [1.01, 1.5, 1.99] {
            assert!(delta_of(a) < 0.0);
            let g = gamma_of(a);
            assert!(g > 0.0 && g < 0.5);
        }
        assert_relative_eq!(limit_potential(1.5), 4f64.powf(5.0 / 3.0) * 0.5 / 2.25, max_relative = 1e-15);
        assert!((limit_potential(1.5) - 2.240).abs() < 1e-3);
    }
}
