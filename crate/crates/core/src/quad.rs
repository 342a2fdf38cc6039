//! Quadrature rules and the special functions used across solvers.

use std::num::NonZeroUsize;

use gauss_quad::{FiniteAboveNegOneF64, GaussJacobi, GaussLegendre};

/// Nodes and weights on [−1, 1].
#[derive(Clone, Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn legendre(n: usize) -> Self {
        let gl = GaussLegendre::new(NonZeroUsize::new(n).expect("rule order must be positive"));
        let (nodes, weights) = gl.iter().map(|(x, w)| (*x, *w)).unzip();
        Self { nodes, weights }
    }

    /// Gauss–Jacobi rule for the weight (1+x)^β on [−1, 1].
    pub fn jacobi_left(n: usize, beta: f64) -> Self {
        let gj = GaussJacobi::new(
            NonZeroUsize::new(n).expect("rule order must be positive"),
            FiniteAboveNegOneF64::new(0.0).unwrap(),
            FiniteAboveNegOneF64::new(beta).expect("Jacobi exponent must exceed −1"),
        );
        let (nodes, weights) = gj.iter().map(|(x, w)| (*x, *w)).unzip();
        Self { nodes, weights }
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (c + h * x, h * w))
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// ∫_0^h p^{β} f(p) dp with β > −1, using the Jacobi rule built for β.
    pub fn integrate_left_singular(&self, beta: f64, h: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let s = 0.5 * h;
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(s * (1.0 + x)))
            .sum();
        s.powf(beta + 1.0) * sum
    }
}

/// Panels [0, first], then doubling up to `end` (the last panel is clipped).
pub fn geometric_panels(start: f64, end: f64, first: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    if end <= start {
        return out;
    }
    let mut a = start;
    let mut b = if start == 0.0 { first.min(end) } else { (2.0 * start).min(end) };
    loop {
        out.push((a, b));
        if b >= end {
            break;
        }
        a = b;
        b = (2.0 * a).min(end);
    }
    out
}

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Upper incomplete gamma Γ(s, x) (unregularized).
pub fn gamma_upper(s: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return gamma(s);
    }
    statrs::function::gamma::gamma_ur(s, x) * gamma(s)
}

/// Lower incomplete gamma γ(s, x) (unregularized).
pub fn gamma_lower(s: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    statrs::function::gamma::gamma_lr(s, x) * gamma(s)
}
