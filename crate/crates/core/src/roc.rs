//! ROC lower bound from the data-processing inequality.
//!
//! Any fusion rule turns the sensing channel into a binary asymmetric
//! channel whose MI cannot exceed `I(ξ; Y)`. Inverting that constraint for
//! `Pmd` at each `Pfa` gives the bound; its `Pfa = Pmd` point is the
//! equilibrium probability.

use serde::{Deserialize, Serialize};

use crate::channel::{
    averaged_equivocation, bac_equivocation, bac_mutual_information, biawgn_equivocation, ExpansionOrder, Prior,
    QuadratureSet, SnrLaw,
};
use crate::error::{domain, Error, Result};

const BISECTION_TOL: f64 = 1e-10;
const MONOTONE_SLACK: f64 = 1e-9;

/// A `(Pfa, Pmd)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pfa: f64,
    pmd: f64,
}

impl OperatingPoint {
    pub fn new(pfa: f64, pmd: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&pfa) || !(0.0..=1.0).contains(&pmd) {
            return domain(format!("operating point ({pfa}, {pmd}) outside the unit square"));
        }
        Ok(Self { pfa, pmd })
    }

    pub fn pfa(&self) -> f64 {
        self.pfa
    }

    pub fn pmd(&self) -> f64 {
        self.pmd
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveSource {
    DpiBound,
    EnergyDetectorAnalytic,
    EnergyDetectorMonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CurveMeta {
    pub alpha: f64,
    /// Additive SNR (mean of the law when it is random), linear.
    pub snr: Option<f64>,
    /// MI budget in bits, for bound curves.
    pub mi: Option<f64>,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    points: Vec<OperatingPoint>,
    source: CurveSource,
    meta: CurveMeta,
}

impl RocCurve {
    /// Checks that `pfa` strictly increases and `pmd` does not increase.
    pub fn new(points: Vec<OperatingPoint>, source: CurveSource, meta: CurveMeta) -> Result<Self> {
        for w in points.windows(2) {
            if !(w[1].pfa > w[0].pfa) {
                return domain(format!("pfa not strictly increasing at {} -> {}", w[0].pfa, w[1].pfa));
            }
            if w[1].pmd > w[0].pmd + MONOTONE_SLACK {
                return domain(format!("pmd increases from {} to {} at pfa {}", w[0].pmd, w[1].pmd, w[1].pfa));
            }
        }
        Ok(Self { points, source, meta })
    }

    pub fn points(&self) -> &[OperatingPoint] {
        &self.points
    }

    pub fn source(&self) -> CurveSource {
        self.source
    }

    pub fn meta(&self) -> &CurveMeta {
        &self.meta
    }

    /// Linear interpolation of `pmd` at `pfa`; `None` outside the sampled span.
    pub fn pmd_at(&self, pfa: f64) -> Option<f64> {
        let pts = &self.points;
        let idx = pts.partition_point(|p| p.pfa < pfa);
        if idx < pts.len() && pts[idx].pfa == pfa {
            return Some(pts[idx].pmd);
        }
        if idx == 0 || idx == pts.len() {
            return None;
        }
        let (a, b) = (pts[idx - 1], pts[idx]);
        let t = (pfa - a.pfa) / (b.pfa - a.pfa);
        Some(a.pmd + t * (b.pmd - a.pmd))
    }
}

fn bac(prior: Prior, pfa: f64, pmd: f64) -> f64 {
    bac_mutual_information(prior, OperatingPoint { pfa, pmd }).expect("probabilities in range")
}

/// Smallest `Pmd ∈ [0, 1 − pfa]` whose BAC MI does not exceed `mi`.
pub fn bound_pmd(prior: Prior, mi: f64, pfa: f64) -> Result<f64> {
    if !(mi >= 0.0) {
        return domain(format!("MI budget {mi} must be nonnegative"));
    }
    if !(0.0..=1.0).contains(&pfa) {
        return domain(format!("pfa {pfa} outside [0, 1]"));
    }
    let budget = mi.min(prior.entropy());
    if bac(prior, pfa, 0.0) <= budget {
        return Ok(0.0);
    }
    // MI falls from its value at pmd = 0 to zero at pmd = 1 − pfa.
    let (mut lo, mut hi) = (0.0, 1.0 - pfa);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if bac(prior, pfa, mid) > budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Lower bound to the ROC of any detector whose observation carries at
/// most `mi` bits about `ξ`.
pub fn roc_lower_bound(prior: Prior, mi: f64, pfa_grid: &[f64]) -> Result<RocCurve> {
    if let Some(p) = pfa_grid.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
        return domain(format!("pfa grid value {p} outside (0, 1)"));
    }
    let points = pfa_grid
        .iter()
        .map(|&pfa| Ok(OperatingPoint { pfa, pmd: bound_pmd(prior, mi, pfa)? }))
        .collect::<Result<Vec<_>>>()?;
    let meta = CurveMeta { alpha: prior.alpha(), snr: None, mi: Some(mi), summary: "dpi lower bound".into() };
    RocCurve::new(points, CurveSource::DpiBound, meta)
}

/// `Pfa = Pmd` point of the bound: the `p ∈ [0, 1/2]` with
/// `I_BAC(p, p) = mi`.
pub fn equilibrium_probability(prior: Prior, mi: f64) -> Result<f64> {
    let h = prior.entropy();
    if !(mi >= 0.0) {
        return domain(format!("MI {mi} must be nonnegative"));
    }
    if mi > h * (1.0 + 1e-12) + 1e-15 {
        return Err(Error::NoSolution(format!("MI {mi} exceeds H_b(alpha) = {h}")));
    }
    equilibrium_from_equivocation(prior, (h - mi).max(0.0))
}

/// [`equilibrium_probability`] given the equivocation `H_b(α) − mi`
/// instead of the MI. Bisects on `ln p`, so the result keeps its relative
/// precision down to the smallest normal `p`.
pub fn equilibrium_from_equivocation(prior: Prior, equivocation: f64) -> Result<f64> {
    let h = prior.entropy();
    if !(equivocation >= 0.0) {
        return domain(format!("equivocation {equivocation} must be nonnegative"));
    }
    if equivocation >= h {
        return Ok(0.5);
    }
    let at = |ln_p: f64| {
        let p = ln_p.exp();
        bac_equivocation(prior, OperatingPoint { pfa: p, pmd: p }).expect("probabilities in range")
    };
    let (mut lo, mut hi) = (f64::MIN_POSITIVE.ln(), 0.5f64.ln());
    if at(lo) >= equivocation {
        return Ok(0.0);
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if at(mid) < equivocation {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Small-α expansion of `I_BAC(p, p)` in bits.
///
/// The second-order coefficient is `(1−2p)²/(2p(1−p))` in nats and is
/// converted to bits here like the first-order term; with that reading the
/// expansion tracks the exact value to second order.
pub fn equilibrium_small_alpha_mi(alpha: f64, peq: f64, order: ExpansionOrder) -> Result<f64> {
    Prior::new(alpha)?;
    if !(peq > 0.0 && peq < 0.5) {
        return domain(format!("equilibrium probability {peq} must lie in (0, 1/2)"));
    }
    let d = 1.0 - 2.0 * peq;
    let first = d * ((1.0 - peq) / peq).log2() * alpha;
    Ok(match order {
        ExpansionOrder::First => first,
        ExpansionOrder::Second => first - d * d / (2.0 * peq * (1.0 - peq)) * alpha * alpha / std::f64::consts::LN_2,
    })
}

/// Large-SNR, small-α approximation `Peq ≈ e^{−snr}`.
pub fn equilibrium_asymptotic(snr: f64) -> f64 {
    (-snr).exp()
}

/// Where the MI budget comes from in [`equilibrium_vs_snr_curve`].
#[derive(Debug, Clone, PartialEq)]
pub enum MiSource {
    /// Known gains: the additive SNR is deterministic.
    KnownGains,
    /// Random SNR with this shape, rescaled to each grid mean.
    Averaged(SnrLaw),
}

/// `(snr, Peq)` along an ascending grid of (mean) additive SNRs.
///
/// Solved from the equivocation `H_b(α) − I` rather than the MI, so
/// `Peq` stays accurate after the MI has rounded to `H_b(α)`.
pub fn equilibrium_vs_snr_curve(
    prior: Prior,
    snr_grid: &[f64],
    source: &MiSource,
    rules: &QuadratureSet,
) -> Result<Vec<(f64, f64)>> {
    if snr_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("SNR grid must be strictly ascending");
    }
    snr_grid
        .iter()
        .map(|&snr| {
            let equivocation = match source {
                MiSource::KnownGains => biawgn_equivocation(prior, snr)?,
                MiSource::Averaged(law) => averaged_equivocation(prior, &law.scaled_to_mean(snr)?, &rules.laguerre)?,
            };
            Ok((snr, equilibrium_from_equivocation(prior, equivocation)?))
        })
        .collect()
}
