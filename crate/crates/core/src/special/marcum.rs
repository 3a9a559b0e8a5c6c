use super::gamma::{ln_factorial, regularized_gamma_lower, regularized_gamma_upper};
use crate::error::{domain, Result};

/// Generalized Marcum Q function `Q_m(a, b)` for integer order `m >= 1`.
///
/// Evaluated as the Poisson mixture of regularized upper gamma functions
/// `Σ_k e^{-a²/2} (a²/2)^k / k! · Q(m + k, b²/2)`, summed over a window of
/// `10√λ + 30` terms either side of the Poisson mode (`λ = a²/2`).
pub fn marcum_q(m: u64, a: f64, b: f64) -> Result<f64> {
    check(m, a, b)?;
    if b == 0.0 {
        return Ok(1.0);
    }
    if upper_is_small(m, a, b) {
        poisson_mixture(m, a, b, Tail::Upper).map(|q| q.min(1.0))
    } else {
        poisson_mixture(m, a, b, Tail::Lower).map(|p| (1.0 - p).max(0.0))
    }
}

/// `1 - Q_m(a, b)`.
///
/// Whichever of `Q_m` and its complement is the smaller tail is summed
/// directly, so small values of either keep their relative accuracy.
pub fn marcum_q_complement(m: u64, a: f64, b: f64) -> Result<f64> {
    check(m, a, b)?;
    if b == 0.0 {
        return Ok(0.0);
    }
    if upper_is_small(m, a, b) {
        poisson_mixture(m, a, b, Tail::Upper).map(|q| (1.0 - q).max(0.0))
    } else {
        poisson_mixture(m, a, b, Tail::Lower).map(|p| p.min(1.0))
    }
}

// The tail beyond the noncentral chi-square mean is the smaller side.
fn upper_is_small(m: u64, a: f64, b: f64) -> bool {
    0.5 * b * b >= m as f64 + 0.5 * a * a
}

fn check(m: u64, a: f64, b: f64) -> Result<()> {
    if m == 0 {
        return domain("Marcum Q order must be >= 1");
    }
    if a.is_nan() || b.is_nan() || a < 0.0 || b < 0.0 {
        return domain(format!("Marcum Q arguments must be nonnegative, got a={a}, b={b}"));
    }
    Ok(())
}

// Chernoff bound on ln P(X beyond x) for X = ‖A + Z‖² over m complex
// dimensions with ‖A‖² = λ, whichever side of the mean x lies on. The MGF
// (1−t)^{-m} e^{λt/(1−t)} is minimised at 1/(1−t) = v, the positive root
// of λv² + mv − x = 0.
fn ln_chernoff_bound(m: u64, lambda: f64, x: f64) -> f64 {
    let m = m as f64;
    let v = 2.0 * x / (m + (m * m + 4.0 * lambda * x).sqrt());
    (1.0 / v - 1.0) * x + m * v.ln() + lambda * (v - 1.0)
}

#[derive(Clone, Copy)]
enum Tail {
    Upper,
    Lower,
}

// Σ_k Poisson(k; λ) · G(m + k, x) with G the upper or lower regularized
// gamma. One G is evaluated directly and the rest follow from
// G(a ± 1) = G(a) + x^a e^{-x} / a!, run in the direction that only adds.
fn poisson_mixture(m: u64, a: f64, b: f64, tail: Tail) -> Result<f64> {
    let x = 0.5 * b * b;
    let lambda = 0.5 * a * a;
    if ln_chernoff_bound(m, lambda, x) < -745.0 {
        // the requested tail underflows f64 whatever the window gives
        return Ok(0.0);
    }
    if lambda == 0.0 {
        return match tail {
            Tail::Upper => regularized_gamma_upper(m, x),
            Tail::Lower => regularized_gamma_lower(m, x),
        };
    }
    let mode = lambda.floor() as u64;
    // Chernoff: both Poisson tails beyond the window hold < 1e-17 of the mass.
    let half_width = (10.0 * lambda.sqrt() + 30.0).ceil() as u64;
    let lo = mode.saturating_sub(half_width);
    let hi = mode + half_width;
    let ln_lambda = lambda.ln();
    let ln_x = x.ln();
    let weight = |k: u64| (k as f64 * ln_lambda - lambda - ln_factorial(k)).exp();
    let gamma_step = |n: u64| (n as f64 * ln_x - x - ln_factorial(n)).exp();

    let mut sum = 0.0;
    match tail {
        Tail::Upper => {
            let mut g = regularized_gamma_upper(m + lo, x)?;
            for k in lo..=hi {
                sum += weight(k) * g;
                g += gamma_step(m + k);
            }
        }
        Tail::Lower => {
            let mut g = regularized_gamma_lower(m + hi, x)?;
            for k in (lo..=hi).rev() {
                sum += weight(k) * g;
                if m + k > 1 {
                    g += gamma_step(m + k - 1);
                }
            }
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{adaptive_simpson, bessel_i};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn marcum_by_integration(m: u64, a: f64, b: f64) -> f64 {
        let nu = (m - 1) as i32;
        let f = |x: f64| {
            x * (x / a).powi(nu) * (-(x * x + a * a) / 2.0).exp() * bessel_i(nu as u32, a * x)
        };
        adaptive_simpson(&f, b, b + a + 40.0, 1e-14)
    }

    #[test]
    fn full_support_is_one() {
        for m in 1..8 {
            for &a in &[0.0, 0.5, 3.0, 20.0] {
                assert_eq!(marcum_q(m, a, 0.0).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn central_first_order() {
        for &b in &[0.1, 1.0, 2.0, 5.0] {
            assert_relative_eq!(marcum_q(1, 0.0, b).unwrap(), (-b * b / 2.0).exp(), max_relative = 1e-13);
        }
    }

    #[test]
    fn matches_defining_integral() {
        let q = marcum_q(2, 1.5, 2.0).unwrap();
        assert_abs_diff_eq!(q, marcum_by_integration(2, 1.5, 2.0), epsilon = 1e-9);
        for &(m, a, b) in &[(1, 1.0, 1.0), (3, 2.0, 4.0), (5, 4.0, 3.0), (10, 4.47, 5.5)] {
            assert_abs_diff_eq!(marcum_q(m, a, b).unwrap(), marcum_by_integration(m, a, b), epsilon = 1e-9);
        }
    }

    #[test]
    fn chernoff_bound_dominates_both_tails() {
        for m in [1_u64, 4, 16] {
            for &a in &[0.0, 1.0, 5.0, 12.0] {
                for &b in &[0.3, 1.0, 3.0, 8.0, 15.0, 20.0] {
                    let x = 0.5 * b * b;
                    let tail = if upper_is_small(m, a, b) {
                        marcum_q(m, a, b).unwrap()
                    } else {
                        marcum_q_complement(m, a, b).unwrap()
                    };
                    let bound = ln_chernoff_bound(m, 0.5 * a * a, x);
                    assert!(bound <= 1e-12, "bound {bound} above zero");
                    if tail > 0.0 {
                        assert!(tail.ln() <= bound + 1e-9, "m={m} a={a} b={b}: {} > {bound}", tail.ln());
                    }
                }
            }
        }
    }

    #[test]
    fn far_tails_return_without_summing() {
        // a window of ~10^7 terms would be needed without the cut
        let a = (2.0e12_f64).sqrt();
        assert_eq!(marcum_q_complement(4, a, (2.0e3_f64).sqrt()).unwrap(), 0.0);
        assert_eq!(marcum_q(4, a, (2.0e3_f64).sqrt()).unwrap(), 1.0);
        assert_eq!(marcum_q(1, 1.0, 60.0).unwrap(), 0.0);
    }

    #[test]
    fn complement_sums_to_one() {
        for m in [1_u64, 4, 10] {
            for &a in &[0.0, 1.0, 4.5, 12.0] {
                for &b in &[0.2, 1.0, 3.0, 8.0, 15.0] {
                    let s = marcum_q(m, a, b).unwrap() + marcum_q_complement(m, a, b).unwrap();
                    assert_abs_diff_eq!(s, 1.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn monotone_on_grid() {
        for m in [1_u64, 3, 10] {
            for i in 0..15 {
                let a = 0.5 * i as f64;
                for j in 0..25 {
                    let b = 0.4 * j as f64;
                    let q = marcum_q(m, a, b).unwrap();
                    assert!(marcum_q(m, a, b + 0.4).unwrap() <= q + 1e-15);
                    assert!(marcum_q(m, a + 0.5, b).unwrap() >= q - 1e-15);
                }
            }
        }
    }

    #[test]
    fn negative_arguments_rejected() {
        assert!(marcum_q(1, -1.0, 1.0).is_err());
        assert!(marcum_q(1, 1.0, -1.0).is_err());
        assert!(marcum_q(0, 1.0, 1.0).is_err());
    }
}
