//! Fixed-order Gauss–Legendre quadrature.
//!
//! Every continuous integral in the crate goes through this module. Callers
//! are expected to hand in integrands that are analytic on the interval (the
//! distribution code removes endpoint square-root singularities with a
//! `sin²` change of variables before integrating), in which case the rule
//! converges geometrically and order 200 is far beyond double precision.

use std::sync::OnceLock;

use num_complex::Complex64;

/// Number of nodes of the default rule.
pub const ORDER: usize = 200;

/// Nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on the three-term Legendre
    /// recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
        &self,
        mut f: F,
        a: f64,
        b: f64,
    ) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The shared order-200 rule.
pub fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(ORDER))
}

/// Integrates over `[a, b]` split into `panels` equal pieces.
pub fn integrate_panels<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + h * k as f64;
            rule().integrate(&mut f, lo, lo + h)
        })
        .sum()
}

pub fn integrate_complex_panels<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
) -> Complex64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + h * k as f64;
            rule().integrate_complex(&mut f, lo, lo + h)
        })
        .sum()
}
