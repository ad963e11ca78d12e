//! Right-hand sides `h(r, t)` accepted by the radial solver.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nonlinearity::NonlinearitySpec;

/// A radially symmetric source term `h(r, t)`.
pub trait RadialSource {
    /// `h(r, t)` for `t >= 0`.
    fn h(&self, r: f64, t: f64) -> f64;
    /// `d h / dt`.
    fn h_t(&self, r: f64, t: f64) -> f64;
    /// `H(r, t) = int_0^t h(r, s) ds`.
    fn big_h(&self, r: f64, t: f64) -> Result<f64>;
    /// `d H / dr`.
    fn big_h_r(&self, r: f64, t: f64) -> Result<f64>;
    /// Amplitude `a(0)` of the potential at the origin.
    fn amplitude_at_origin(&self) -> f64;
    /// `true` when `h` does not depend on `r`.
    fn is_x_independent(&self) -> bool;

    /// `h` continued linearly below `t = 0`, keeping Newton iterates admissible.
    fn h_ext(&self, r: f64, t: f64) -> f64 {
        if t >= 0.0 {
            self.h(r, t)
        } else {
            self.h(r, 0.0) + self.h_t(r, 0.0) * t
        }
    }

    fn h_t_ext(&self, r: f64, t: f64) -> f64 {
        self.h_t(r, t.max(0.0))
    }
}

impl RadialSource for NonlinearitySpec {
    fn h(&self, r: f64, t: f64) -> f64 {
        self.eval_h(r, t)
    }

    fn h_t(&self, r: f64, t: f64) -> f64 {
        self.eval_h_t(r, t)
    }

    fn big_h(&self, r: f64, t: f64) -> Result<f64> {
        self.eval_big_h(r, t.max(0.0))
    }

    fn big_h_r(&self, r: f64, t: f64) -> Result<f64> {
        self.eval_big_h_r(r, t.max(0.0))
    }

    fn amplitude_at_origin(&self) -> f64 {
        self.potential().eval(0.0)
    }

    fn is_x_independent(&self) -> bool {
        self.potential().is_constant()
    }
}

/// Solution-independent forcing `h(r, t) = g(r)` with polynomial `g`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Forcing {
    /// `g(r) = sum_k c_k r^k`.
    pub coeffs: Vec<f64>,
}

impl Forcing {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("forcing needs finite coefficients".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(g: f64) -> Self {
        Self { coeffs: vec![g] }
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, &c)| acc * r + k as f64 * c)
    }
}

impl RadialSource for Forcing {
    fn h(&self, r: f64, _t: f64) -> f64 {
        self.eval(r)
    }

    fn h_t(&self, _r: f64, _t: f64) -> f64 {
        0.0
    }

    fn big_h(&self, r: f64, t: f64) -> Result<f64> {
        Ok(self.eval(r) * t)
    }

    fn big_h_r(&self, r: f64, t: f64) -> Result<f64> {
        Ok(self.derivative(r) * t)
    }

    fn amplitude_at_origin(&self) -> f64 {
        self.eval(0.0)
    }

    fn is_x_independent(&self) -> bool {
        self.coeffs.iter().skip(1).all(|&c| c == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forcing_primitives() {
        let g = Forcing::new(vec![576.0, 0.0, -1152.0]).unwrap();
        assert_eq!(g.eval(0.5), 576.0 - 288.0);
        assert_eq!(g.derivative(0.5), -1152.0);
        assert_eq!(g.big_h(0.5, 2.0).unwrap(), 2.0 * 288.0);
        assert!(!g.is_x_independent());
        assert!(Forcing::constant(192.0).is_x_independent());
    }

    #[test]
    fn linear_extension_is_c1() {
        let spec = NonlinearitySpec::gelfand();
        assert_eq!(spec.h_ext(0.3, -0.5), 0.5);
        assert_eq!(spec.h_t_ext(0.3, -0.5), 1.0);
        assert_eq!(spec.h_ext(0.3, 0.0), 1.0);
    }
}
