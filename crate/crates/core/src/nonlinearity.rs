//! Catalog of admissible nonlinearities `h(x, t) = a(|x|) f(t)`.
//!
//! Every member carries its analytic growth rate `beta = lim f'(t)/f(t)`, so
//! the subcritical/critical split is a property of the catalog entry rather
//! than of a numerical fit. The numerical routines here only confirm it.

use serde::Serialize;

use crate::counterexample::CounterexampleParams;
use crate::error::{Error, Result};
use crate::quadrature::adaptive_gk;

/// Above this exponent `eval_f` switches to a log-value representation.
pub const LOG_SPACE_THRESHOLD: f64 = 700.0;

/// Relative tolerance for primitives without a closed form.
pub const PRIMITIVE_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Kind {
    /// `e^{gamma t}`
    PureExp { gamma: f64 },
    /// `e^{gamma t} (1 + t)^{-q}`
    ExpPoly { gamma: f64, q: f64 },
    /// `t^p e^{t^alpha}`; for `alpha = 0` the exponential factor is dropped.
    PowerExp { p: f64, alpha: f64 },
    /// `log^theta(t + 1) t^p e^{t^alpha}`
    LogPowerExp { theta: f64, p: f64, alpha: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Potential {
    Constant(f64),
    /// `a(r) = sum_k c_k r^k`
    RadialPolynomial(Vec<f64>),
    /// The potential of the unbounded-solution construction, continued by its
    /// value at `r = rho` outside `B_rho`.
    Counterexample(Box<CounterexampleParams>),
}

impl Potential {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Potential::Constant(a0) => *a0,
            Potential::RadialPolynomial(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * r + ck),
            Potential::Counterexample(params) => {
                if r <= 0.0 {
                    return params.limit_potential();
                }
                let ell = (-r.ln()).max(params.ell_rho);
                params.eval_a(ell).map(|(log_a, _)| log_a.exp()).unwrap_or(f64::NAN)
            }
        }
    }

    /// `a'(r)`.
    pub fn derivative(&self, r: f64) -> f64 {
        match self {
            Potential::Constant(_) => 0.0,
            Potential::RadialPolynomial(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, &ck)| acc * r + k as f64 * ck),
            Potential::Counterexample(_) => {
                let h = 1e-6 * r.max(1e-3);
                (self.eval(r + h) - self.eval((r - h).max(0.0))) / (r + h - (r - h).max(0.0))
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Potential::Constant(_))
    }

    /// Sampled `(min, max)` over `n` equispaced radii of `[0, 1]`.
    pub fn sampled_bounds(&self, n: usize) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let a = self.eval(i as f64 / (n - 1) as f64);
            lo = lo.min(a);
            hi = hi.max(a);
        }
        (lo, hi)
    }
}

/// Value of `f` that may exceed the floating-point range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Magnitude {
    Value(f64),
    /// Natural logarithm of the value.
    Log(f64),
}

impl Magnitude {
    pub fn ln(self) -> f64 {
        match self {
            Magnitude::Value(v) => v.ln(),
            Magnitude::Log(l) => l,
        }
    }

    /// Plain value; `+inf` for log-represented magnitudes beyond `f64`.
    pub fn value(self) -> f64 {
        match self {
            Magnitude::Value(v) => v,
            Magnitude::Log(l) => l.exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonlinearitySpec {
    kind: Kind,
    scale: f64,
    potential: Potential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Classification {
    Subcritical,
    Critical(f64),
}

impl NonlinearitySpec {
    pub fn new(kind: Kind, potential: Potential) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        match kind {
            Kind::PureExp { gamma } | Kind::ExpPoly { gamma, .. } if !(gamma > 0.0) => {
                return bad("gamma must be positive")
            }
            Kind::ExpPoly { q, .. } if !q.is_finite() => return bad("q must be finite"),
            Kind::PowerExp { p, alpha } | Kind::LogPowerExp { p, alpha, .. } => {
                if !(p > 1.0) {
                    return bad("p must exceed 1");
                }
                if !(0.0..1.0).contains(&alpha) {
                    return bad("alpha must lie in [0, 1)");
                }
                if let Kind::LogPowerExp { theta, .. } = kind {
                    if !(theta >= 0.0) {
                        return bad("theta must be nonnegative");
                    }
                }
            }
            _ => {}
        }
        match &potential {
            Potential::Constant(a0) if !(*a0 > 0.0) => return bad("constant potential must be positive"),
            Potential::RadialPolynomial(c) if c.is_empty() || c.iter().any(|x| !x.is_finite()) => {
                return bad("radial polynomial needs finite coefficients")
            }
            Potential::RadialPolynomial(_) => {
                let (lo, _) = potential.sampled_bounds(257);
                if lo < 0.0 {
                    return bad("radial polynomial potential takes negative values on [0, 1]");
                }
            }
            _ => {}
        }
        Ok(Self {
            kind,
            scale: 1.0,
            potential,
        })
    }

    /// Gelfand member `e^t` with `a = 1`.
    pub fn gelfand() -> Self {
        Self::new(Kind::PureExp { gamma: 1.0 }, Potential::Constant(1.0)).expect("valid")
    }

    /// Multiply `f` by `c > 0`.
    pub fn with_scale(mut self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter("scale must be positive".into()));
        }
        self.scale = c;
        Ok(self)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Analytic `lim f'/f`.
    pub fn beta(&self) -> f64 {
        match self.kind {
            Kind::PureExp { gamma } | Kind::ExpPoly { gamma, .. } => gamma,
            Kind::PowerExp { .. } | Kind::LogPowerExp { .. } => 0.0,
        }
    }

    fn exp_part(alpha: f64, t: f64) -> f64 {
        if alpha == 0.0 {
            0.0
        } else {
            t.powf(alpha)
        }
    }

    /// `ln f(t)`; `-inf` where `f` vanishes (power members at `t = 0`).
    pub fn ln_f(&self, t: f64) -> f64 {
        let core = match self.kind {
            Kind::PureExp { gamma } => gamma * t,
            Kind::ExpPoly { gamma, q } => gamma * t - q * t.ln_1p(),
            Kind::PowerExp { p, alpha } => p * t.ln() + Self::exp_part(alpha, t),
            Kind::LogPowerExp { theta, p, alpha } => {
                let log_term = if theta == 0.0 { 0.0 } else { theta * t.ln_1p().ln() };
                log_term + p * t.ln() + Self::exp_part(alpha, t)
            }
        };
        core + self.scale.ln()
    }

    /// `f(t)`, in log representation once `ln f` exceeds [`LOG_SPACE_THRESHOLD`].
    pub fn eval_f(&self, t: f64) -> Magnitude {
        debug_assert!(t >= 0.0);
        let lf = self.ln_f(t);
        if lf > LOG_SPACE_THRESHOLD {
            return Magnitude::Log(lf);
        }
        let v = match self.kind {
            Kind::PureExp { gamma } => (gamma * t).exp(),
            Kind::ExpPoly { gamma, q } => (gamma * t).exp() * (1.0 + t).powf(-q),
            Kind::PowerExp { p, alpha } => t.powf(p) * Self::exp_part(alpha, t).exp(),
            Kind::LogPowerExp { theta, p, alpha } => {
                t.ln_1p().powf(theta) * t.powf(p) * Self::exp_part(alpha, t).exp()
            }
        };
        Magnitude::Value(self.scale * v)
    }

    /// `f'(t)/f(t)`, analytic.
    pub fn log_derivative(&self, t: f64) -> f64 {
        let exp_rate = |alpha: f64| if alpha == 0.0 { 0.0 } else { alpha * t.powf(alpha - 1.0) };
        match self.kind {
            Kind::PureExp { gamma } => gamma,
            Kind::ExpPoly { gamma, q } => gamma - q / (1.0 + t),
            Kind::PowerExp { p, alpha } => p / t + exp_rate(alpha),
            Kind::LogPowerExp { theta, p, alpha } => {
                let lt = if theta == 0.0 { 0.0 } else { theta / ((1.0 + t) * t.ln_1p()) };
                lt + p / t + exp_rate(alpha)
            }
        }
    }

    /// `f'(t)`.
    pub fn eval_f_prime(&self, t: f64) -> f64 {
        match self.kind {
            Kind::PureExp { gamma } => gamma * self.eval_f(t).value(),
            Kind::ExpPoly { .. } => self.log_derivative(t) * self.eval_f(t).value(),
            Kind::PowerExp { p, alpha } => {
                // product form stays finite at t = 0
                let e = Self::exp_part(alpha, t).exp();
                let rate = if alpha == 0.0 { 0.0 } else { alpha * t.powf(p + alpha - 1.0) };
                self.scale * e * (p * t.powf(p - 1.0) + rate)
            }
            Kind::LogPowerExp { .. } => {
                if t == 0.0 {
                    return 0.0;
                }
                self.log_derivative(t) * self.eval_f(t).value()
            }
        }
    }

    /// `F(t) = int_0^t f`.
    pub fn eval_big_f(&self, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        let closed = match self.kind {
            Kind::PureExp { gamma } => Some((gamma * t).exp_m1() / gamma),
            Kind::ExpPoly { gamma, q } if q <= 0.0 && q.fract() == 0.0 => {
                Some(exp_poly_primitive(gamma, (-q) as u32, t))
            }
            Kind::PowerExp { p, alpha: 0.0 } => Some(t.powf(p + 1.0) / (p + 1.0)),
            _ => None,
        };
        if let Some(v) = closed {
            return Ok(self.scale * v);
        }
        adaptive_gk(|s| self.eval_f(s).value(), 0.0, t, PRIMITIVE_REL_TOL)
    }

    /// `h(x, t)` for a point at radius `r`.
    pub fn eval_h(&self, r: f64, t: f64) -> f64 {
        self.potential.eval(r) * self.eval_f(t).value()
    }

    /// `H(x, t) = a(|x|) F(t)`.
    pub fn eval_big_h(&self, r: f64, t: f64) -> Result<f64> {
        Ok(self.potential.eval(r) * self.eval_big_f(t)?)
    }

    /// `d/dt h(x, t)`.
    pub fn eval_h_t(&self, r: f64, t: f64) -> f64 {
        self.potential.eval(r) * self.eval_f_prime(t)
    }

    /// Radial derivative of `H`: `a'(r) F(t)`.
    pub fn eval_big_h_r(&self, r: f64, t: f64) -> Result<f64> {
        Ok(self.potential.derivative(r) * self.eval_big_f(t)?)
    }

    /// Subcritical iff `beta = 0`, after confirming numerically that `f'/f`
    /// approaches `beta` with nonincreasing deviation.
    pub fn classify(&self) -> Result<Classification> {
        let beta = self.beta();
        let samples = [10.0, 1e2, 1e3, 1e4];
        let dev: Vec<f64> = samples
            .iter()
            .map(|&t| (self.log_derivative(t) - beta).abs())
            .collect();
        for w in dev.windows(2) {
            if w[1] > w[0] * (1.0 + 1e-12) + 1e-15 {
                return Err(Error::Classification(format!(
                    "f'/f deviation from beta = {beta} grows: {dev:?}"
                )));
            }
        }
        if dev[0] > 0.0 && dev[3] >= dev[0] {
            return Err(Error::Classification(format!(
                "f'/f does not approach beta = {beta}: {dev:?}"
            )));
        }
        Ok(if beta == 0.0 {
            Classification::Subcritical
        } else {
            Classification::Critical(beta)
        })
    }
}

/// `int_0^t e^{gamma s} (1 + s)^k ds` by integration by parts.
fn exp_poly_primitive(gamma: f64, k: u32, t: f64) -> f64 {
    let mut acc = (gamma * t).exp_m1() / gamma;
    let et = (gamma * t).exp();
    for j in 1..=k {
        let jf = j as f64;
        acc = (et * (1.0 + t).powi(j as i32) - 1.0) / gamma - jf / gamma * acc;
    }
    acc
}

/// Two-sided exponential envelope of `f`.
#[derive(Debug, Clone, Serialize)]
pub struct ExpBoundFit {
    pub epsilon: f64,
    pub c_eps: f64,
    pub d_eps: f64,
    pub t_eps: f64,
    pub t_range: (f64, f64),
    pub samples: usize,
}

impl ExpBoundFit {
    /// Checks `D e^{(beta-eps)t} - C <= f(t) <= D e^{(beta+eps)t} + C` in log space.
    pub fn holds_at(&self, spec: &NonlinearitySpec, t: f64) -> bool {
        let beta = spec.beta();
        let lf = spec.ln_f(t);
        let ln_d = self.d_eps.ln();
        let upper = log_add(ln_d + (beta + self.epsilon) * t, self.c_eps.ln());
        let lower_arg = ln_d + (beta - self.epsilon) * t;
        let slack = 1e-12;
        let upper_ok = lf <= upper + slack;
        // D e^{..} - C <= f  <=>  D e^{..} <= f + C
        let lower_ok = lower_arg <= log_add(lf, self.c_eps.ln()) + slack;
        upper_ok && lower_ok
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Geometric sample grid of `[0, t_max]`: `0` followed by `n - 1` points from `1e-3`.
pub fn geometric_grid(t_max: f64, n: usize) -> Vec<f64> {
    let t0: f64 = 1e-3_f64.min(t_max);
    let mut g = vec![0.0];
    let ratio = (t_max / t0).powf(1.0 / (n - 2) as f64);
    let mut t = t0;
    for _ in 0..n - 1 {
        g.push(t.min(t_max));
        t *= ratio;
    }
    *g.last_mut().unwrap() = t_max;
    g
}

/// Constants for the two-sided bound `D e^{(beta-eps)t} - C <= f <= D e^{(beta+eps)t} + C`.
///
/// `T_eps` is the first sample after which `|f'/f - beta| < eps` at every later
/// sample; `D = f(T) e^{-(beta+eps)T}` and `C = max f` on `[0, T]`.
pub fn fit_exp_bounds(spec: &NonlinearitySpec, epsilon: f64, t_max: f64) -> Result<ExpBoundFit> {
    if !(epsilon > 0.0) {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    if !(t_max >= 100.0) {
        return Err(Error::Precondition("t_max must be at least 100".into()));
    }
    const SAMPLES: usize = 4096;
    let grid = geometric_grid(t_max, SAMPLES);
    let beta = spec.beta();
    let within: Vec<bool> = grid
        .iter()
        .map(|&t| t > 0.0 && (spec.log_derivative(t) - beta).abs() < epsilon)
        .collect();
    let mut start = None;
    for i in (0..grid.len()).rev() {
        if within[i] {
            start = Some(i);
        } else {
            break;
        }
    }
    let idx = match start {
        Some(i) if i + 1 < grid.len() => i,
        _ => return Err(Error::ThresholdNotReached { t_max }),
    };
    let t_eps = grid[idx];
    let d_eps = (spec.ln_f(t_eps) - (beta + epsilon) * t_eps).exp();
    let c_eps = grid[..=idx]
        .iter()
        .map(|&t| spec.eval_f(t).value())
        .fold(0.0, f64::max);
    let fit = ExpBoundFit {
        epsilon,
        c_eps,
        d_eps,
        t_eps,
        t_range: (0.0, t_max),
        samples: SAMPLES,
    };
    if let Some(&t) = grid.iter().find(|&&t| !fit.holds_at(spec, t)) {
        return Err(Error::Inconsistent(format!("envelope violated at sampled t = {t}")));
    }
    Ok(fit)
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisViolation {
    pub r: f64,
    pub t: f64,
    pub what: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryHypothesisReport {
    pub strip_width: f64,
    pub monotone_in_t: bool,
    pub radially_nonincreasing: bool,
    /// Empirical `sup |a'(r)| F(t) / (F(t) + 1)` over the strip.
    pub empirical_b: f64,
    pub violations: Vec<HypothesisViolation>,
}

impl BoundaryHypothesisReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const STRIP_RADII: usize = 64;
const STRIP_TS: usize = 64;
const STRIP_T_MAX: f64 = 50.0;

/// Sampled certificate of monotonicity in `t`, `a' <= 0` near the boundary, and
/// the growth constant of `|grad_x H|`.
pub fn verify_boundary_hypotheses(
    spec: &NonlinearitySpec,
    strip_width: f64,
) -> Result<BoundaryHypothesisReport> {
    if !(strip_width > 0.0 && strip_width <= 1.0) {
        return Err(Error::Precondition("strip width must lie in (0, 1]".into()));
    }
    let radii: Vec<f64> = (1..=STRIP_RADII)
        .map(|i| 1.0 - strip_width + strip_width * i as f64 / STRIP_RADII as f64)
        .collect();
    let ts = geometric_grid(STRIP_T_MAX, STRIP_TS);
    let mut violations = Vec::new();
    let mut empirical_b: f64 = 0.0;
    let mut monotone = true;
    let mut radial = true;
    for &r in &radii {
        let da = spec.potential().derivative(r);
        if da > 1e-12 {
            radial = false;
            violations.push(HypothesisViolation {
                r,
                t: f64::NAN,
                what: "radial derivative of a is positive",
                value: da,
            });
        }
        for &t in &ts {
            let ht = spec.eval_h_t(r, t);
            if ht < -1e-12 * spec.eval_h(r, t).abs() {
                monotone = false;
                violations.push(HypothesisViolation {
                    r,
                    t,
                    what: "h decreasing in t",
                    value: ht,
                });
            }
            let big_f = spec.eval_big_f(t)?;
            empirical_b = empirical_b.max(da.abs() * big_f / (big_f + 1.0));
        }
    }
    Ok(BoundaryHypothesisReport {
        strip_width,
        monotone_in_t: monotone,
        radially_nonincreasing: radial,
        empirical_b,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pure(gamma: f64) -> NonlinearitySpec {
        NonlinearitySpec::new(Kind::PureExp { gamma }, Potential::Constant(1.0)).unwrap()
    }

    #[test]
    fn catalog_values() {
        assert_eq!(pure(1.0).eval_f(0.0), Magnitude::Value(1.0));
        let ep = NonlinearitySpec::new(Kind::ExpPoly { gamma: 1.0, q: 2.0 }, Potential::Constant(1.0)).unwrap();
        assert_relative_eq!(ep.eval_f(1.0).value(), std::f64::consts::E / 4.0, max_relative = 1e-14);
        assert_relative_eq!(ep.eval_f(1.0).value(), 0.679570, epsilon = 1e-6);
        let pe = NonlinearitySpec::new(Kind::PowerExp { p: 2.0, alpha: 0.5 }, Potential::Constant(1.0)).unwrap();
        assert_relative_eq!(pe.eval_f(4.0).value(), 16.0 * 2f64.exp(), max_relative = 1e-14);
        assert_relative_eq!(pe.eval_f(4.0).value(), 118.2249, epsilon = 1e-4);
    }

    #[test]
    fn log_representation_beyond_threshold() {
        let f = pure(1.0).eval_f(800.0);
        assert_eq!(f, Magnitude::Log(800.0));
        assert_eq!(pure(1.0).eval_f(699.0), Magnitude::Value(699f64.exp()));
    }

    #[test]
    fn primitives() {
        assert_relative_eq!(pure(1.0).eval_big_f(1.0).unwrap(), 1f64.exp() - 1.0, max_relative = 1e-15);
        assert_relative_eq!(pure(1.0).eval_big_f(1.0).unwrap(), 1.718282, epsilon = 1e-6);
        let pw = NonlinearitySpec::new(Kind::PowerExp { p: 2.0, alpha: 0.0 }, Potential::Constant(1.0)).unwrap();
        assert_relative_eq!(pw.eval_big_f(1.0).unwrap(), 1.0 / 3.0, max_relative = 1e-15);
        let any = NonlinearitySpec::new(Kind::LogPowerExp { theta: 1.0, p: 2.0, alpha: 0.3 }, Potential::RadialPolynomial(vec![2.0, 0.0, -1.0])).unwrap();
        assert_eq!(any.eval_big_h(0.3, 0.0).unwrap(), 0.0);
        assert_eq!(pure(2.0).eval_big_h(0.9, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn exp_poly_recursion_matches_quadrature() {
        let spec = NonlinearitySpec::new(Kind::ExpPoly { gamma: 0.7, q: -3.0 }, Potential::Constant(1.0)).unwrap();
        let closed = spec.eval_big_f(2.5).unwrap();
        let quad = adaptive_gk(|s| spec.eval_f(s).value(), 0.0, 2.5, 1e-13).unwrap();
        assert_relative_eq!(closed, quad, max_relative = 1e-12);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(pure(2.0).classify().unwrap(), Classification::Critical(2.0));
        let pe = NonlinearitySpec::new(Kind::PowerExp { p: 2.0, alpha: 0.5 }, Potential::Constant(1.0)).unwrap();
        assert_eq!(pe.classify().unwrap(), Classification::Subcritical);
        let ep0 = NonlinearitySpec::new(Kind::ExpPoly { gamma: 1.0, q: 0.0 }, Potential::Constant(1.0)).unwrap();
        assert_eq!(ep0.classify().unwrap(), Classification::Critical(1.0));
    }

    #[test]
    fn construction_rejects_bad_params() {
        assert!(NonlinearitySpec::new(Kind::PowerExp { p: 2.0, alpha: 1.0 }, Potential::Constant(1.0)).is_err());
        assert!(NonlinearitySpec::new(Kind::PowerExp { p: 1.0, alpha: 0.5 }, Potential::Constant(1.0)).is_err());
        assert!(NonlinearitySpec::new(Kind::PureExp { gamma: 0.0 }, Potential::Constant(1.0)).is_err());
        assert!(NonlinearitySpec::new(Kind::PureExp { gamma: 1.0 }, Potential::Constant(0.0)).is_err());
        assert!(NonlinearitySpec::new(Kind::PureExp { gamma: 1.0 }, Potential::RadialPolynomial(vec![0.5, 0.0, -1.0])).is_err());
    }

    #[test]
    fn exp_bounds_examples() {
        let fit = fit_exp_bounds(&pure(1.0), 0.1, 100.0).unwrap();
        assert_relative_eq!(fit.d_eps * (-0.1 * fit.t_eps).exp().recip(), 1.0, max_relative = 1e-12);
        // D = 1, C = 0 is an admissible envelope for e^t
        let trivial = ExpBoundFit { d_eps: 1.0, c_eps: 0.0, ..fit.clone() };
        for t in [0.0, 1.0, 50.0, 100.0] {
            assert!(trivial.holds_at(&pure(1.0), t));
        }
        let pw = NonlinearitySpec::new(Kind::PowerExp { p: 2.0, alpha: 0.0 }, Potential::Constant(1.0)).unwrap();
        let fit = fit_exp_bounds(&pw, 0.5, 100.0).unwrap();
        for i in 0..=20_000 {
            let t = 100.0 * i as f64 / 20_000.0;
            assert!(t * t <= fit.d_eps * (0.5 * t).exp() + fit.c_eps + 1e-9, "t = {t}");
        }
        assert!(matches!(fit_exp_bounds(&pure(1.0), 0.0, 100.0), Err(Error::Precondition(_))));
        assert!(matches!(fit_exp_bounds(&pure(1.0), 0.1, 10.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn exp_bounds_threshold_not_reached() {
        // f'/f = 2/t + 0.9 t^{-0.1} stays above 0.5 until t ~ 2e3
        let slow = NonlinearitySpec::new(Kind::PowerExp { p: 2.0, alpha: 0.9 }, Potential::Constant(1.0)).unwrap();
        assert!(matches!(fit_exp_bounds(&slow, 0.5, 100.0), Err(Error::ThresholdNotReached { .. })));
    }

    #[test]
    fn boundary_hypotheses() {
        let constant = verify_boundary_hypotheses(&pure(1.0), 0.1).unwrap();
        assert!(constant.passed());
        assert_eq!(constant.empirical_b, 0.0);

        let dec = NonlinearitySpec::new(Kind::PureExp { gamma: 1.0 }, Potential::RadialPolynomial(vec![1.0, 0.0, -0.5])).unwrap();
        let rep = verify_boundary_hypotheses(&dec, 0.1).unwrap();
        assert!(rep.passed());
        assert!(rep.empirical_b > 0.9 && rep.empirical_b <= 1.0);

        let inc = NonlinearitySpec::new(Kind::PureExp { gamma: 1.0 }, Potential::RadialPolynomial(vec![1.0, 0.0, 1.0])).unwrap();
        let rep = verify_boundary_hypotheses(&inc, 0.1).unwrap();
        assert!(!rep.radially_nonincreasing);
        assert!(rep.violations.iter().all(|v| v.r > 0.9));

        // e^t (1+t)^{-3}: decreasing in t for t < 2
        let dip = NonlinearitySpec::new(Kind::ExpPoly { gamma: 1.0, q: 3.0 }, Potential::Constant(1.0)).unwrap();
        let rep = verify_boundary_hypotheses(&dip, 0.1).unwrap();
        assert!(!rep.monotone_in_t);
        assert!(rep.violations.iter().all(|v| v.t < 2.0));
    }
}
