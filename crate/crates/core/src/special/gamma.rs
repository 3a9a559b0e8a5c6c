use std::sync::OnceLock;

use crate::error::{domain, Result};

const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-16;

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 170 {
        static TABLE: OnceLock<[f64; 171]> = OnceLock::new();
        let table = TABLE.get_or_init(|| {
            let mut t = [0.0; 171];
            let mut fact = 1.0_f64;
            for (j, slot) in t.iter_mut().enumerate().skip(2) {
                fact *= j as f64;
                *slot = fact.ln();
            }
            t
        });
        return table[n as usize];
    }
    // Stirling series; the first omitted term is below 1e-17 for n > 170.
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// Regularized upper incomplete gamma `Q(n, x) = Γ(n)⁻¹ ∫ₓ^∞ u^{n-1} e^{-u} du`.
pub fn regularized_gamma_upper(n: u64, x: f64) -> Result<f64> {
    gamma_pair(n, x).map(|(_, q)| q)
}

/// Regularized lower incomplete gamma `P(n, x) = 1 - Q(n, x)`; the CDF of a
/// sum of `n` unit-mean exponentials.
pub fn regularized_gamma_lower(n: u64, x: f64) -> Result<f64> {
    gamma_pair(n, x).map(|(p, _)| p)
}

fn gamma_pair(n: u64, x: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return domain("incomplete gamma shape must be >= 1");
    }
    if x.is_nan() || x < 0.0 {
        return domain(format!("incomplete gamma argument {x} must be >= 0"));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x.is_infinite() {
        return Ok((1.0, 0.0));
    }
    let a = n as f64;
    let log_prefactor = -x + a * x.ln() - ln_factorial(n - 1);
    if x < a + 1.0 {
        let p = lower_series(a, x, log_prefactor);
        Ok((p, 1.0 - p))
    } else {
        let q = upper_continued_fraction(a, x, log_prefactor);
        Ok((1.0 - q, q))
    }
}

fn lower_series(a: f64, x: f64, log_prefactor: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum.ln() + log_prefactor).exp().min(1.0)
}

// Modified Lentz evaluation of the Legendre continued fraction.
fn upper_continued_fraction(a: f64, x: f64, log_prefactor: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (h.ln() + log_prefactor).exp().min(1.0)
}
