use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_NEWTON: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadratureKind {
    /// Weight `e^{-x²}` on the real line.
    Hermite,
    /// Weight `e^{-x}` on `[0, ∞)`.
    Laguerre,
}

impl QuadratureKind {
    fn name(self) -> &'static str {
        match self {
            QuadratureKind::Hermite => "hermite",
            QuadratureKind::Laguerre => "laguerre",
        }
    }

    fn max_order(self) -> usize {
        match self {
            QuadratureKind::Hermite => 256,
            // Beyond this the outermost Laguerre weights underflow f64.
            QuadratureKind::Laguerre => 128,
        }
    }
}

/// Gaussian quadrature nodes (ascending) and positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    kind: QuadratureKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn kind(&self) -> QuadratureKind {
        self.kind
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

    /// `Σ w_i f(x_i)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// `E[f(Z)]` for `Z ~ N(0, variance)`; Hermite rules only.
    pub fn gaussian_expectation(&self, variance: f64, f: impl Fn(f64) -> f64) -> f64 {
        debug_assert_eq!(self.kind, QuadratureKind::Hermite);
        let scale = (2.0 * variance).sqrt();
        self.integrate(|x| f(scale * x)) / PI.sqrt()
    }
}

/// Gauss–Hermite or Gauss–Laguerre rule of the given order.
///
/// Roots are bracketed by a sign-change scan fine enough to separate adjacent
/// roots, then polished by Newton iteration on the three-term recurrence.
pub fn gauss_rule(kind: QuadratureKind, order: usize) -> Result<QuadratureRule> {
    if order < 2 || order > kind.max_order() {
        return Err(Error::UnsupportedOrder { kind: kind.name(), order });
    }
    let (nodes, weights) = match kind {
        QuadratureKind::Hermite => hermite(order),
        QuadratureKind::Laguerre => laguerre(order),
    };
    Ok(QuadratureRule { kind, nodes, weights })
}

// Orthonormal Hermite recurrence; returns (p_n(z), p_{n-1}(z)).
fn hermite_eval(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = PI.powf(-0.25);
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, p2)
}

fn hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let positive = n / 2;
    // Positive roots lie below sqrt(2n + 1) and are at least ~pi/sqrt(2n + 1)
    // apart, so a fixed-step scan brackets each one exactly once.
    let step = 0.1 * PI / (2.0 * nf + 1.0).sqrt();
    let mut roots = Vec::with_capacity(positive);
    let mut lo = 0.5 * step;
    let mut p_lo = hermite_eval(n, lo).0;
    while roots.len() < positive {
        let hi = lo + step;
        let p_hi = hermite_eval(n, hi).0;
        if p_lo.signum() != p_hi.signum() {
            roots.push(refine_bracketed(
                |z| {
                    let (p1, p2) = hermite_eval(n, z);
                    (p1, (2.0 * nf).sqrt() * p2)
                },
                lo,
                hi,
                p_lo,
            ));
        }
        lo = hi;
        p_lo = p_hi;
    }
    let weight = |z: f64| {
        let pp = (2.0 * nf).sqrt() * hermite_eval(n, z).1;
        2.0 / (pp * pp)
    };
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for &r in roots.iter().rev() {
        nodes.push(-r);
        weights.push(weight(r));
    }
    if n % 2 == 1 {
        nodes.push(0.0);
        weights.push(weight(0.0));
    }
    for &r in &roots {
        nodes.push(r);
        weights.push(weight(r));
    }
    (nodes, weights)
}

// Newton with bisection fallback inside a sign-change bracket. `eval`
// returns the polynomial value and its derivative.
fn refine_bracketed(eval: impl Fn(f64) -> (f64, f64), mut lo: f64, mut hi: f64, p_lo: f64) -> f64 {
    let lo_sign = p_lo.signum();
    let mut z = 0.5 * (lo + hi);
    for _ in 0..MAX_NEWTON {
        let (p, dp) = eval(z);
        if p == 0.0 {
            return z;
        }
        if p.signum() == lo_sign {
            lo = z;
        } else {
            hi = z;
        }
        let mut next = z - p / dp;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let moved = (next - z).abs();
        z = next;
        if moved <= 4.0 * f64::EPSILON * z.abs() || hi - lo <= f64::EPSILON * z.abs() {
            break;
        }
    }
    z
}

// Laguerre recurrence; returns (L_n(z), L_{n-1}(z)).
fn laguerre_eval(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
    }
    (p1, p2)
}

// Laguerre polynomials are orthonormal under e^{-x}, so the Christoffel
// function gives the weight as 1 / Σ_{k<n} L_k(x)². This is better
// conditioned than the derivative form at high order.
fn christoffel_weight(n: usize, z: f64) -> f64 {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    let mut sum = 1.0;
    for j in 1..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
        sum += p1 * p1;
    }
    1.0 / sum
}

fn laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    // In t = sqrt(x) the roots are spaced at least ~pi / (2 sqrt(n + 1/2)).
    let step = 0.1 * PI / (2.0 * (nf + 0.5).sqrt());
    let derivative = |z: f64, p1: f64, p2: f64| (nf * p1 - nf * p2) / z;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut t_lo = 0.5 * step;
    let mut p_lo = laguerre_eval(n, t_lo * t_lo).0;
    while nodes.len() < n {
        let t_hi = t_lo + step;
        let p_hi = laguerre_eval(n, t_hi * t_hi).0;
        if p_lo.signum() != p_hi.signum() {
            let z = refine_bracketed(
                |z| {
                    let (p1, p2) = laguerre_eval(n, z);
                    (p1, derivative(z, p1, p2))
                },
                t_lo * t_lo,
                t_hi * t_hi,
                p_lo,
            );
            nodes.push(z);
            weights.push(christoffel_weight(n, z));
        }
        t_lo = t_hi;
        p_lo = p_hi;
    }
    (nodes, weights)
}
