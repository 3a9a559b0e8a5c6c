use std::f64::consts::LN_2;

use crate::error::{domain, Result};

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("binary entropy argument {p} outside [0, 1]"));
    }
    // the smaller tail is exact either way (1 − p is exact for p ≥ 1/2), and
    // ln(1 − q) via ln_1p keeps relative precision as q → 0
    let q = p.min(1.0 - p);
    if q == 0.0 {
        return Ok(0.0);
    }
    Ok((-q * q.ln() - (1.0 - q) * (-q).ln_1p()) / LN_2)
}

/// Inverse of [`binary_entropy`] on the lower branch `[0, 1/2]`.
///
/// Solved by bisection down to an absolute width of `1e-15`.
pub fn binary_entropy_inverse(h: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&h) {
        return domain(format!("binary entropy value {h} outside [0, 1]"));
    }
    if h == 0.0 {
        return Ok(0.0);
    }
    if h == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid)? < h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `log2(1 + e^t)` without overflow for large `t` or flush-to-zero for very
/// negative `t`.
#[inline]
pub fn log1p_exp_scaled(t: f64) -> f64 {
    if t > 0.0 {
        t / LN_2 + (-t).exp().ln_1p() / LN_2
    } else {
        t.exp().ln_1p() / LN_2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn entropy_reference_points() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // -0.1 log2 0.1 - 0.9 log2 0.9
        let direct = 0.1 * (10.0_f64).log2() + 0.9 * (1.0 / 0.9_f64).log2();
        assert_abs_diff_eq!(binary_entropy(0.1).unwrap(), direct, epsilon = 1e-15);
        assert_abs_diff_eq!(binary_entropy(0.1).unwrap(), 0.468996, epsilon = 1e-6);
    }

    #[test]
    fn entropy_rejects_out_of_range() {
        assert!(binary_entropy(-1e-9).is_err());
        assert!(binary_entropy(1.0 + 1e-9).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
        assert!(binary_entropy_inverse(1.5).is_err());
    }

    #[test]
    fn inverse_endpoints_and_round_trip() {
        assert_eq!(binary_entropy_inverse(1.0).unwrap(), 0.5);
        assert_eq!(binary_entropy_inverse(0.0).unwrap(), 0.0);
        let h = binary_entropy(0.2).unwrap();
        assert_abs_diff_eq!(binary_entropy_inverse(h).unwrap(), 0.2, epsilon = 1e-10);
        for &p in &[1e-6, 1e-3, 0.05, 0.3, 0.4999] {
            let h = binary_entropy(p).unwrap();
            let back = binary_entropy_inverse(h).unwrap();
            assert_abs_diff_eq!(binary_entropy(back).unwrap(), h, epsilon = 1e-12);
        }
    }

    #[test]
    fn log1p_exp_asymptotes() {
        assert_eq!(log1p_exp_scaled(0.0), 1.0);
        let tiny = log1p_exp_scaled(-745.0);
        assert!(tiny > 0.0);
        assert!((tiny - (-745.0_f64).exp() / LN_2).abs() <= 1e-323);
        assert_abs_diff_eq!(log1p_exp_scaled(1000.0), 1000.0 / LN_2, epsilon = 1e-9);
        assert!(log1p_exp_scaled(1e6).is_finite());
        assert_abs_diff_eq!(log1p_exp_scaled(-3.0), (1.0 + (-3.0_f64).exp()).log2(), epsilon = 1e-15);
        assert_abs_diff_eq!(log1p_exp_scaled(3.0), (1.0 + 3.0_f64.exp()).log2(), epsilon = 1e-14);
    }
}
