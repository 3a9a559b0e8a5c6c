//! WebAssembly front end for the browser demo in `www/`.
//!
//! Every export returns a [`Curve`]; invalid inputs come back to
//! JavaScript as a thrown string.

use std::sync::OnceLock;

use rocbound_core::channel::{averaged_mi, biawgn_mi, GammaMixture, Prior, QuadratureSet, SnrLaw};
use rocbound_core::detector::{decision_rule_point_averaged, default_theta_grid};
use rocbound_core::roc::{equilibrium_asymptotic, equilibrium_vs_snr_curve, roc_lower_bound, MiSource};
use rocbound_core::{db_to_linear, linear_to_db};
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 2000;
const MAX_DETECTOR_SNR_DB: f64 = 60.0;

fn rules() -> &'static QuadratureSet {
    static RULES: OnceLock<QuadratureSet> = OnceLock::new();
    RULES.get_or_init(QuadratureSet::default)
}

#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    x: Vec<f64>,
    y: Vec<f64>,
    reference: Vec<f64>,
    information: f64,
}

#[wasm_bindgen]
impl Curve {
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    pub fn y(&self) -> Vec<f64> {
        self.y.clone()
    }

    /// Companion series on the same `x` (the `e^-snr` curve for
    /// equilibrium plots); empty otherwise.
    pub fn reference(&self) -> Vec<f64> {
        self.reference.clone()
    }

    /// Mutual information in bits behind a bound curve; NaN otherwise.
    pub fn information(&self) -> f64 {
        self.information
    }
}

impl Curve {
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x.iter().copied().zip(self.y.iter().copied())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn check_points(points: usize) -> Result<(), String> {
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(format!("points must be between 2 and {MAX_POINTS}"));
    }
    Ok(())
}

fn law(snr: f64, fading: bool) -> Result<SnrLaw, String> {
    if !fading {
        return Ok(SnrLaw::PointMass(snr));
    }
    Ok(SnrLaw::Exponentials(GammaMixture::exponential(snr).map_err(err)?))
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let mut grid: Vec<f64> = (0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp()).collect();
    grid[0] = lo;
    grid[points - 1] = hi;
    grid
}

/// Lower bound on Pmd over a log-spaced Pfa grid, for one sensor at
/// `snr_db` (mean SNR under Rayleigh fading when `fading`).
#[wasm_bindgen]
pub fn bound_curve(alpha: f64, snr_db: f64, fading: bool, points: usize) -> Result<Curve, String> {
    check_points(points)?;
    let prior = Prior::new(alpha).map_err(err)?;
    let snr = db_to_linear(snr_db);
    let mi = match law(snr, fading)? {
        SnrLaw::PointMass(s) => biawgn_mi(prior, s, &rules().hermite),
        l => averaged_mi(prior, &l, &rules().hermite, &rules().laguerre),
    }
    .map_err(err)?;
    let curve = roc_lower_bound(prior, mi, &log_grid(1e-4, 0.9999, points)).map_err(err)?;
    let (x, y) = curve.points().iter().map(|p| (p.pfa(), p.pmd())).unzip();
    Ok(Curve { x, y, reference: Vec::new(), information: mi })
}

/// Analytic ROC of the energy detector over `kn` samples, swept by
/// threshold.
#[wasm_bindgen]
pub fn detector_curve(alpha: f64, snr_db: f64, kn: u32, fading: bool, points: usize) -> Result<Curve, String> {
    check_points(points)?;
    if kn == 0 {
        return Err("kn must be at least 1".into());
    }
    if !(snr_db <= MAX_DETECTOR_SNR_DB) {
        return Err(format!("detector SNR is limited to {MAX_DETECTOR_SNR_DB} dB"));
    }
    Prior::new(alpha).map_err(err)?;
    let snr_law = law(db_to_linear(snr_db), fading)?;
    let grid = default_theta_grid(kn.into(), snr_law.mean(), alpha, points);
    let mut x = Vec::with_capacity(points);
    let mut y = Vec::with_capacity(points);
    for theta in grid {
        let op = decision_rule_point_averaged(kn.into(), &snr_law, alpha, theta, &rules().laguerre).map_err(err)?;
        x.push(op.pfa());
        y.push(op.pmd());
    }
    Ok(Curve { x, y, reference: Vec::new(), information: f64::NAN })
}

/// Pfa = Pmd point of the bound against SNR in dB, with `e^-snr` as
/// the reference series.
#[wasm_bindgen]
pub fn equilibrium_curve(alpha: f64, from_db: f64, to_db: f64, fading: bool, points: usize) -> Result<Curve, String> {
    check_points(points)?;
    if !(from_db.is_finite() && to_db.is_finite() && from_db < to_db) {
        return Err("SNR range must be finite and increasing".into());
    }
    let prior = Prior::new(alpha).map_err(err)?;
    let snrs: Vec<f64> =
        (0..points).map(|i| db_to_linear(from_db + (to_db - from_db) * i as f64 / (points - 1) as f64)).collect();
    let source = if fading {
        MiSource::Averaged(law(1.0, true)?)
    } else {
        MiSource::KnownGains
    };
    let curve = equilibrium_vs_snr_curve(prior, &snrs, &source, rules()).map_err(err)?;
    Ok(Curve {
        x: curve.iter().map(|&(s, _)| linear_to_db(s)).collect(),
        y: curve.iter().map(|&(_, p)| p).collect(),
        reference: snrs.iter().map(|&s| equilibrium_asymptotic(s)).collect(),
        information: f64::NAN,
    })
}
