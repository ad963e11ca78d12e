//! Quadrature rules shared by the kernel, solver and blow-up modules.

use crate::error::{Error, Result};

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n` started from the Chebyshev guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Integrate `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .collect();
        half * pairwise_sum(&terms)
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn nodes_weights(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Pairwise (cascade) summation; the reduction order depends only on the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = WGK[7] * fc;
    let mut rg = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration with a relative tolerance.
///
/// Intervals are bisected in a fixed order so the result is reproducible.
pub fn adaptive_gk<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut segments = vec![(a, b, gk15(&mut f, a, b))];
    for _ in 0..2000 {
        let total: f64 = pairwise_sum(&segments.iter().map(|s| s.2 .0).collect::<Vec<_>>());
        let err: f64 = segments.iter().map(|s| s.2 .1).sum();
        if err <= rel_tol * total.abs() || err < 1e-300 {
            return Ok(total);
        }
        let (idx, _) = segments
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, s)| if s.2 .1 > acc.1 { (i, s.2 .1) } else { acc });
        let (lo, hi, _) = segments.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let left = gk15(&mut f, lo, mid);
        let right = gk15(&mut f, mid, hi);
        segments.push((lo, mid, left));
        segments.push((mid, hi, right));
        segments.sort_by(|x, y| x.0.total_cmp(&y.0));
    }
    let total: f64 = pairwise_sum(&segments.iter().map(|s| s.2 .0).collect::<Vec<_>>());
    let err: f64 = segments.iter().map(|s| s.2 .1).sum();
    Err(Error::Quadrature {
        achieved: err / total.abs().max(1e-300),
        requested: rel_tol,
    })
}

/// Composite Simpson on an arbitrary increasing grid with an odd number of nodes.
///
/// Each pair of intervals is integrated exactly for quadratics. A trailing
/// single interval (even node count) is closed with the quadratic through the
/// last three nodes.
pub fn simpson_nonuniform(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * (x[1] - x[0]) * (y[0] + y[1]);
    }
    let mut parts = Vec::with_capacity(n / 2 + 1);
    let mut i = 0;
    while i + 2 < n {
        parts.push(simpson_pair(x[i], x[i + 1], x[i + 2], y[i], y[i + 1], y[i + 2]));
        i += 2;
    }
    if i + 1 < n {
        // last interval [x[n-2], x[n-1]] from the quadratic on the last three nodes
        let (x0, x1, x2) = (x[n - 3], x[n - 2], x[n - 1]);
        let (y0, y1, y2) = (y[n - 3], y[n - 2], y[n - 1]);
        parts.push(quadratic_integral(x0, x1, x2, y0, y1, y2, x1, x2));
    }
    pairwise_sum(&parts)
}

fn simpson_pair(x0: f64, x1: f64, x2: f64, y0: f64, y1: f64, y2: f64) -> f64 {
    let h0 = x1 - x0;
    let h1 = x2 - x1;
    let hs = h0 + h1;
    hs / 6.0
        * (y0 * (2.0 - h1 / h0) + y1 * hs * hs / (h0 * h1) + y2 * (2.0 - h0 / h1))
}

/// Integral over `[a, b]` of the interpolating quadratic through three points.
pub fn quadratic_integral(
    x0: f64,
    x1: f64,
    x2: f64,
    y0: f64,
    y1: f64,
    y2: f64,
    a: f64,
    b: f64,
) -> f64 {
    // Lagrange basis antiderivatives.
    let int_basis = |xi: f64, xj: f64, xk: f64| -> f64 {
        // ∫ (t - xj)(t - xk) / ((xi - xj)(xi - xk)) dt
        let denom = (xi - xj) * (xi - xk);
        let anti = |t: f64| t * t * t / 3.0 - (xj + xk) * t * t / 2.0 + xj * xk * t;
        (anti(b) - anti(a)) / denom
    };
    y0 * int_basis(x0, x1, x2) + y1 * int_basis(x1, x0, x2) + y2 * int_basis(x2, x0, x1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let gl = GaussLegendre::new(8);
        let s: f64 = gl.weights.iter().sum();
        assert_relative_eq!(s, 2.0, epsilon = 1e-14);
        // degree 15 is the exactness limit for 8 nodes
        let v = gl.integrate(0.0, 1.0, |x| x.powi(15));
        assert_relative_eq!(v, 1.0 / 16.0, epsilon = 1e-14);
    }

    #[test]
    fn adaptive_gk_handles_log_singularity() {
        let v = adaptive_gk(|x: f64| -x.ln(), 0.0, 1.0, 1e-10).unwrap();
        assert_relative_eq!(v, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn simpson_exact_for_quadratics_on_uneven_grid() {
        let x = [0.0, 0.1, 0.35, 0.4, 0.9, 1.0];
        let y: Vec<f64> = x.iter().map(|t| 3.0 * t * t - t + 2.0).collect();
        assert_relative_eq!(simpson_nonuniform(&x, &y), 1.0 - 0.5 + 2.0, epsilon = 1e-13);
    }

    #[test]
    fn quadratic_integral_subinterval() {
        // y = t^2 through nodes 0,1,2; integral over [0.5, 1.5] = (1.5^3 - 0.5^3)/3
        let v = quadratic_integral(0.0, 1.0, 2.0, 0.0, 1.0, 4.0, 0.5, 1.5);
        assert_relative_eq!(v, (3.375 - 0.125) / 3.0, epsilon = 1e-14);
    }
}
