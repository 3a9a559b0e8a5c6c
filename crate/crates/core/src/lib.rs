//! Information-theoretic lower bounds to the ROC of a cooperative
//! spectrum-sensing network.
//!
//! Appending the fusion-center decision to the sensing channel turns the
//! whole system into a binary asymmetric channel whose crossover
//! probabilities are the false-alarm and missed-detection probabilities.
//! The data-processing inequality caps that channel's mutual information by
//! the mutual information between signal presence and the raw sensor
//! samples, which gives an ROC lower bound valid for every detector and
//! fusion rule.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`special`] | entropy, incomplete gamma, Marcum Q, Euler numbers, Gauss rules |
//! | [`channel`] | binary-channel and binary-input Gaussian mutual information |
//! | [`roc`] | ROC lower-bound inversion and equilibrium probabilities |
//! | [`detector`] | analytic energy-detector ROC |
//! | [`montecarlo`] | seeded simulation of the sensing model |

pub mod channel;
pub mod detector;
pub mod error;
pub mod montecarlo;
pub mod roc;
pub mod special;

pub use error::{Error, Result};

/// Converts decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to decibels.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[cfg(test)]
pub(crate) mod test_support {
    /// Adaptive Simpson integration on `[a, b]`.
    pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
            let m = 0.5 * (a + b);
            let fm = f(m);
            (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
        }
        #[allow(clippy::too_many_arguments)]
        fn recurse(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            fa: f64,
            b: f64,
            fb: f64,
            whole: f64,
            m: f64,
            fm: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let (lm, flm, left) = simpson(f, a, fa, m, fm);
            let (rm, frm, right) = simpson(f, m, fm, b, fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * tol || delta.abs() <= 1e-15 * (left + right).abs() {
                return left + right + delta / 15.0;
            }
            recurse(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
                + recurse(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
        }
        let (fa, fb) = (f(a), f(b));
        let (m, fm, whole) = simpson(f, a, fa, b, fb);
        recurse(f, a, fa, b, fb, whole, m, fm, tol, 50)
    }

    /// Modified Bessel function `I_ν(z)` by its power series.
    pub fn bessel_i(nu: u32, z: f64) -> f64 {
        let half = 0.5 * z;
        let mut term = (0..nu).fold(1.0, |acc, j| acc * half / (j + 1) as f64);
        let mut sum = term;
        for j in 1..500 {
            term *= half * half / (j as f64 * (j + nu) as f64);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum
    }
}
