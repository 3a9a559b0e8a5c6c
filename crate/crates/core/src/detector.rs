//! Energy detector on the whitened observation.
//!
//! With unit-variance noise, `‖Z‖²` is a sum of `KN` unit-mean exponentials
//! and `‖A + Z‖²` is its noncentral counterpart with noncentrality equal to
//! the additive SNR. The rule compares the energy with `θ + ln ᾱ` for false
//! alarms and with `θ + ln α` for missed detections.

use serde::{Deserialize, Serialize};

use crate::channel::SnrLaw;
use crate::error::{domain, Error, Result};
use crate::roc::{CurveMeta, CurveSource, OperatingPoint, RocCurve};
use crate::special::{marcum_q_complement, regularized_gamma_upper, QuadratureRule};

pub const DEFAULT_THETA_POINTS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyDetectorConfig {
    /// Number of complex observations `K·N`.
    pub kn: u64,
    /// Additive SNR `‖A‖²`, linear.
    pub snr: f64,
    pub alpha: f64,
    pub theta: f64,
}

impl EnergyDetectorConfig {
    pub fn new(kn: u64, snr: f64, alpha: f64, theta: f64) -> Result<Self> {
        if kn == 0 {
            return domain("KN must be at least 1");
        }
        if !(snr >= 0.0) || !snr.is_finite() {
            return domain(format!("SNR {snr} must be finite and nonnegative"));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return domain(format!("alpha {alpha} outside [0, 1]"));
        }
        if theta.is_nan() {
            return domain("threshold is NaN");
        }
        Ok(Self { kn, snr, alpha, theta })
    }

    /// Energy above which a false alarm is counted, `θ + ln ᾱ`.
    pub fn false_alarm_threshold(&self) -> f64 {
        self.theta + (1.0 - self.alpha).ln()
    }

    /// Energy below which a missed detection is counted, `θ + ln α`.
    pub fn miss_threshold(&self) -> f64 {
        self.theta + self.alpha.ln()
    }
}

/// `P(‖Z‖² > θ + ln ᾱ)`.
pub fn pfa_analytic(cfg: &EnergyDetectorConfig) -> f64 {
    central_tail(cfg.kn, cfg.false_alarm_threshold())
}

/// `P(‖A + Z‖² < θ + ln α)`.
pub fn pmd_analytic(cfg: &EnergyDetectorConfig) -> f64 {
    noncentral_cdf(cfg.kn, cfg.snr, cfg.miss_threshold())
}

fn central_tail(kn: u64, u: f64) -> f64 {
    if u <= 0.0 {
        return 1.0;
    }
    regularized_gamma_upper(kn, u).expect("kn >= 1 and u > 0")
}

fn noncentral_cdf(kn: u64, snr: f64, u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u == f64::INFINITY {
        return 1.0;
    }
    marcum_q_complement(kn, (2.0 * snr).sqrt(), (2.0 * u).sqrt()).expect("arguments validated")
}

/// Decision for one observed energy: `true` declares the band busy.
///
/// The printed rule leaves `(θ + ln α, θ + ln ᾱ)` undecided when `α < ½`
/// and assigns it both ways when `α > ½`; either way that band is declared
/// busy here, which errs toward protecting the primary. At `α = ½` this is
/// the plain threshold rule.
pub fn declares_busy(energy: f64, alpha: f64, theta: f64) -> bool {
    let idle_below = theta + alpha.ln().min((1.0 - alpha).ln());
    !(energy < idle_below)
}

/// `(Pfa, Pmd)` of the rule in [`declares_busy`], which is what a simulated
/// detector achieves. Equal to `(pfa_analytic, pmd_analytic)` at `α = ½`.
///
/// For other priors the printed pair scores the undecided band as correct
/// under both hypotheses, so it describes no actual detector and can fall
/// below the DPI bound.
pub fn decision_rule_point(cfg: &EnergyDetectorConfig) -> OperatingPoint {
    let t = cfg.false_alarm_threshold().min(cfg.miss_threshold());
    OperatingPoint::new(central_tail(cfg.kn, t), noncentral_cdf(cfg.kn, cfg.snr, t)).expect("probabilities")
}

fn curve_from_points(mut pts: Vec<(f64, f64)>, meta: CurveMeta, source: CurveSource) -> Result<RocCurve> {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup_by(|later, earlier| later.0 == earlier.0);
    // pmd may only fall as pfa rises; clip rounding-level wiggles.
    let mut points = Vec::with_capacity(pts.len());
    let mut floor = f64::INFINITY;
    for (pfa, pmd) in pts {
        floor = floor.min(pmd);
        points.push(OperatingPoint::new(pfa, floor)?);
    }
    RocCurve::new(points, source, meta)
}

fn check_theta_grid(theta_grid: &[f64]) -> Result<()> {
    if theta_grid.is_empty() {
        return domain("empty threshold grid");
    }
    if theta_grid.iter().any(|t| t.is_nan()) || theta_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("threshold grid must be strictly ascending");
    }
    Ok(())
}

/// Analytic ROC traced by sweeping `θ`.
pub fn roc_sweep(kn: u64, snr: f64, alpha: f64, theta_grid: &[f64]) -> Result<RocCurve> {
    check_theta_grid(theta_grid)?;
    let pts = theta_grid
        .iter()
        .map(|&theta| {
            let cfg = EnergyDetectorConfig::new(kn, snr, alpha, theta)?;
            Ok((pfa_analytic(&cfg), pmd_analytic(&cfg)))
        })
        .collect::<Result<Vec<_>>>()?;
    let meta = CurveMeta { alpha, snr: Some(snr), mi: None, summary: format!("energy detector, KN={kn}") };
    curve_from_points(pts, meta, CurveSource::EnergyDetectorAnalytic)
}

/// `E_Γ[Pmd]` when the additive SNR is random; `Pfa` does not depend on it.
pub fn pmd_averaged(kn: u64, law: &SnrLaw, alpha: f64, theta: f64, laguerre: &QuadratureRule) -> Result<f64> {
    let cfg = EnergyDetectorConfig::new(kn, law.mean(), alpha, theta)?;
    let u = cfg.miss_threshold();
    let pmd = law.expectation(laguerre, |g| noncentral_cdf(kn, g.max(0.0), u));
    Ok(pmd.clamp(0.0, 1.0))
}

/// [`decision_rule_point`] with the miss probability averaged over `law`.
pub fn decision_rule_point_averaged(
    kn: u64,
    law: &SnrLaw,
    alpha: f64,
    theta: f64,
    laguerre: &QuadratureRule,
) -> Result<OperatingPoint> {
    let cfg = EnergyDetectorConfig::new(kn, law.mean(), alpha, theta)?;
    let t = cfg.false_alarm_threshold().min(cfg.miss_threshold());
    let pmd = law.expectation(laguerre, |g| noncentral_cdf(kn, g.max(0.0), t));
    OperatingPoint::new(central_tail(kn, t), pmd.clamp(0.0, 1.0))
}

/// ROC of the energy detector under a random additive SNR.
pub fn roc_sweep_averaged(
    kn: u64,
    law: &SnrLaw,
    alpha: f64,
    theta_grid: &[f64],
    laguerre: &QuadratureRule,
) -> Result<RocCurve> {
    check_theta_grid(theta_grid)?;
    let pts = theta_grid
        .iter()
        .map(|&theta| {
            let cfg = EnergyDetectorConfig::new(kn, law.mean(), alpha, theta)?;
            Ok((pfa_analytic(&cfg), pmd_averaged(kn, law, alpha, theta, laguerre)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let meta = CurveMeta {
        alpha,
        snr: Some(law.mean()),
        mi: None,
        summary: format!("energy detector, KN={kn}, random SNR"),
    };
    curve_from_points(pts, meta, CurveSource::EnergyDetectorAnalytic)
}

/// `θ` at which the false-alarm probability equals `target_pfa`.
pub fn threshold_for_pfa(kn: u64, alpha: f64, target_pfa: f64) -> Result<f64> {
    if kn == 0 {
        return domain("KN must be at least 1");
    }
    if !(target_pfa > 0.0 && target_pfa < 1.0) {
        return domain(format!("target pfa {target_pfa} must lie in (0, 1)"));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::NoSolution(format!("alpha {alpha} puts the false-alarm threshold at infinity")));
    }
    let mut hi = kn as f64 + 1.0;
    while central_tail(kn, hi) > target_pfa {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoSolution(format!("pfa {target_pfa} unreachable")));
        }
    }
    let mut lo = 0.0;
    while hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if central_tail(kn, mid) > target_pfa {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi) - (1.0 - alpha).ln())
}

/// Missed-detection probability at the threshold giving `pfa`.
pub fn pmd_at_pfa(kn: u64, snr: f64, alpha: f64, pfa: f64) -> Result<f64> {
    let theta = threshold_for_pfa(kn, alpha, pfa)?;
    Ok(pmd_analytic(&EnergyDetectorConfig::new(kn, snr, alpha, theta)?))
}

/// `points` thresholds spreading the false-alarm energy `u = θ + ln ᾱ`
/// over ±8 deviations around `KN + snr`.
pub fn default_theta_grid(kn: u64, snr: f64, alpha: f64, points: usize) -> Vec<f64> {
    let center = kn as f64 + snr;
    let spread = (kn as f64 + 2.0 * snr).sqrt();
    let lo = (center - 8.0 * spread).max(0.0);
    let hi = center + 8.0 * spread;
    let shift = (1.0 - alpha).ln();
    let steps = points.max(2) - 1;
    (0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64 - shift).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{biawgn_mi, GammaMixture, Prior, QuadratureSet};
    use crate::roc::bound_pmd;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    fn cfg(kn: u64, snr: f64, alpha: f64, theta: f64) -> EnergyDetectorConfig {
        EnergyDetectorConfig::new(kn, snr, alpha, theta).unwrap()
    }

    // θ giving effective thresholds u for α = 1/2
    fn theta_for(u: f64) -> f64 {
        u + LN_2
    }

    #[test]
    fn reference_points() {
        assert_abs_diff_eq!(pfa_analytic(&cfg(1, 0.0, 0.5, theta_for(LN_2))), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(pmd_analytic(&cfg(1, 0.0, 0.5, theta_for(LN_2))), 0.5, epsilon = 1e-15);
        assert_eq!(pfa_analytic(&cfg(3, 1.0, 0.5, theta_for(-1.0))), 1.0);
        assert_eq!(pmd_analytic(&cfg(3, 1.0, 0.5, theta_for(0.0))), 0.0);
    }

    #[test]
    fn monotone_in_threshold() {
        for &(kn, snr, alpha) in &[(1, 1.0, 0.5), (10, 10.0, 0.5), (4, 3.0, 0.1)] {
            let grid = default_theta_grid(kn, snr, alpha, 200);
            let mut last = (f64::INFINITY, f64::NEG_INFINITY);
            for &t in &grid {
                let c = cfg(kn, snr, alpha, t);
                let (pfa, pmd) = (pfa_analytic(&c), pmd_analytic(&c));
                assert!(pfa <= last.0 && pmd >= last.1);
                last = (pfa, pmd);
            }
        }
    }

    #[test]
    fn sweep_endpoints() {
        let curve = roc_sweep(4, 2.0, 0.5, &[-1e3, 1.0, 5.0, 10.0, 1e4]).unwrap();
        let pts = curve.points();
        assert_eq!(pts.len(), 5);
        assert_abs_diff_eq!(pts[0].pfa(), 0.0, epsilon = 1e-300);
        assert_abs_diff_eq!(pts[0].pmd(), 1.0, epsilon = 1e-12);
        assert_eq!(pts[4].pfa(), 1.0);
        assert_eq!(pts[4].pmd(), 0.0);
    }

    #[test]
    fn sweep_rejects_unsorted_grid() {
        assert!(roc_sweep(1, 1.0, 0.5, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn uninformative_observation_is_diagonal() {
        for &kn in &[1, 5] {
            for &u in &[0.5, 2.0, 7.0] {
                let c = cfg(kn, 0.0, 0.5, theta_for(u));
                assert_abs_diff_eq!(pfa_analytic(&c) + pmd_analytic(&c), 1.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn threshold_round_trip() {
        assert_abs_diff_eq!(threshold_for_pfa(1, 0.5, 0.5).unwrap(), 2.0 * LN_2, epsilon = 1e-12);
        for &kn in &[1, 4, 10, 64] {
            for &alpha in &[0.5, 0.2] {
                for &p in &[1e-6, 0.01, 0.1, 0.5, 0.9, 0.999] {
                    let theta = threshold_for_pfa(kn, alpha, p).unwrap();
                    assert!((pfa_analytic(&cfg(kn, 1.0, alpha, theta)) - p).abs() <= 1e-10 * p.max(1e-3));
                }
            }
        }
        assert!(threshold_for_pfa(1, 0.5, 0.0).is_err());
        assert!(threshold_for_pfa(1, 1.0, 0.3).is_err());
    }

    #[test]
    fn kn10_threshold_against_gamma_bisection() {
        // bisection written against the lower gamma, independent of the code path
        let target = 0.1;
        let (mut lo, mut hi) = (0.0, 100.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let cdf = crate::special::regularized_gamma_lower(10, mid).unwrap();
            if 1.0 - cdf > target {
                lo = mid
            } else {
                hi = mid
            }
        }
        let theta = threshold_for_pfa(10, 0.5, target).unwrap();
        assert_abs_diff_eq!(theta - LN_2, 0.5 * (lo + hi), epsilon = 1e-9);
    }

    #[test]
    fn tie_break_band() {
        // α = 0.2: idle only below θ + ln 0.2
        let theta = 3.0;
        assert!(!declares_busy(theta + 0.2f64.ln() - 1e-9, 0.2, theta));
        assert!(declares_busy(theta + 0.5 * (0.2f64.ln() + 0.8f64.ln()), 0.2, theta));
        // α = 0.8: idle only below θ + ln 0.2 as well
        assert!(declares_busy(theta + 0.5 * (0.2f64.ln() + 0.8f64.ln()), 0.8, theta));
        assert!(!declares_busy(theta - 5.0, 0.8, theta));
        assert!(!declares_busy(theta + 0.5f64.ln() - 1e-9, 0.5, theta));
        assert!(declares_busy(theta + 0.5f64.ln() + 1e-9, 0.5, theta));
    }

    #[test]
    fn detector_never_beats_the_bound() {
        let rules = QuadratureSet::default();
        for &kn in &[1u64, 4, 10] {
            for &snr in &[0.5, 1.0, 10.0] {
                for &alpha in &[0.5, 0.3, 0.1] {
                    let prior = Prior::new(alpha).unwrap();
                    let mi = biawgn_mi(prior, snr, &rules.hermite).unwrap();
                    for &theta in default_theta_grid(kn, snr, alpha, 60).iter() {
                        let op = decision_rule_point(&cfg(kn, snr, alpha, theta));
                        let floor = bound_pmd(prior, mi, op.pfa()).unwrap();
                        assert!(op.pmd() >= floor - 1e-6, "kn={kn} snr={snr} a={alpha} th={theta}");
                    }
                }
            }
        }
    }

    #[test]
    fn decision_rule_point_matches_printed_pair_at_half() {
        for &theta in &[0.0, 1.0, 4.0, 9.0] {
            let c = cfg(4, 3.0, 0.5, theta);
            let op = decision_rule_point(&c);
            assert_eq!((op.pfa(), op.pmd()), (pfa_analytic(&c), pmd_analytic(&c)));
        }
    }

    #[test]
    fn averaged_rule_point_reduces_to_fixed_snr() {
        let lag = QuadratureSet::default().laguerre;
        for &(alpha, theta) in &[(0.5, 2.0), (0.1, 5.0), (0.8, 3.5)] {
            let fixed = decision_rule_point(&cfg(3, 2.5, alpha, theta));
            let avg = decision_rule_point_averaged(3, &SnrLaw::PointMass(2.5), alpha, theta, &lag).unwrap();
            assert_eq!(fixed, avg);
        }
    }

    #[test]
    fn printed_pair_is_not_a_detector_off_half() {
        // Scoring the undecided band as an error under neither hypothesis
        // lands well below the information bound at α = 0.1.
        let prior = Prior::new(0.1).unwrap();
        let mi = biawgn_mi(prior, 1.0, &QuadratureSet::default().hermite).unwrap();
        let worst = default_theta_grid(1, 1.0, 0.1, 400)
            .iter()
            .map(|&t| {
                let c = cfg(1, 1.0, 0.1, t);
                pmd_analytic(&c) - bound_pmd(prior, mi, pfa_analytic(&c)).unwrap()
            })
            .fold(f64::INFINITY, f64::min);
        assert!(worst < -0.2, "{worst}");
    }

    #[test]
    fn averaged_pmd_point_mass_and_fading() {
        let lag = QuadratureSet::default().laguerre;
        let theta = theta_for(5.0);
        let fixed = pmd_analytic(&cfg(4, 6.0, 0.5, theta));
        let point = pmd_averaged(4, &SnrLaw::PointMass(6.0), 0.5, theta, &lag).unwrap();
        assert_abs_diff_eq!(fixed, point, epsilon = 1e-15);
        // Rayleigh fading at the same mean SNR misses more often at this threshold
        let law = SnrLaw::Exponentials(GammaMixture::exponential(6.0).unwrap());
        assert!(pmd_averaged(4, &law, 0.5, theta, &lag).unwrap() > fixed);
    }

    #[test]
    fn averaged_pmd_matches_direct_integration() {
        use crate::channel::rayleigh_gamma_mixture;
        use crate::test_support::adaptive_simpson;
        let lag = QuadratureSet::default().laguerre;
        let gammas = [5.0, 6.0, 7.0, 8.0].map(|d: f64| 10f64.powf(d / 10.0));
        let mix = rayleigh_gamma_mixture(&gammas, &[(1.0, 1.0)]).unwrap();
        let law = SnrLaw::Exponentials(mix.clone());
        for &kn in &[4u64, 16] {
            for &u in &[3.0, 10.0, 20.0, 35.0] {
                let theta = theta_for(u);
                let f = |g: f64| mix.pdf(g) * noncentral_cdf(kn, g, u);
                let direct: f64 = (0..40).map(|i| adaptive_simpson(&f, 10.0 * i as f64, 10.0 * (i + 1) as f64, 1e-13)).sum();
                let quad = pmd_averaged(kn, &law, 0.5, theta, &lag).unwrap();
                assert_abs_diff_eq!(quad, direct, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn default_grid_shape() {
        let g = default_theta_grid(10, 10.0, 0.5, DEFAULT_THETA_POINTS);
        assert_eq!(g.len(), DEFAULT_THETA_POINTS);
        assert_abs_diff_eq!(g[0], LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(g[399], 20.0 + 8.0 * 30f64.sqrt() + LN_2, epsilon = 1e-12);
    }
}
