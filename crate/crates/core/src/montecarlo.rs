//! Seeded simulation of the K-sensor, N-sample model.
//!
//! Work is cut into fixed-size blocks; block `b` of purpose `p` draws from
//! ChaCha8 seeded with the scenario seed on stream `(p << 32) | b`. Blocks
//! are reduced in index order, so results depend only on the seed, never on
//! how many threads ran them.

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::channel::{additive_snr, rayleigh_gamma_mixture, SnrLaw};
use crate::detector::declares_busy;
use crate::error::{domain, Error, Result};
use crate::special::log1p_exp_scaled;

pub const BLOCK_TRIALS: usize = 4096;
const WILSON_Z: f64 = 1.959963984540054;

const PURPOSE_IDLE: u64 = 1;
const PURPOSE_BUSY: u64 = 2;
const PURPOSE_GAMMA: u64 = 3;
const PURPOSE_VECTOR_MI: u64 = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GainModel {
    Fixed(Vec<Complex64>),
    /// Mean squares `E|h_k|²`; gains are redrawn for every observation.
    Rayleigh(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalModel {
    Fixed(Vec<Complex64>),
    /// `(‖s‖², probability)` atoms. A drawn energy `S` is spread evenly,
    /// `s(n) = √(S/N)`; only `‖s‖²` reaches the detector or the MI.
    EnergyPmf(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    k: usize,
    n: usize,
    alpha: f64,
    gains: GainModel,
    signal: SignalModel,
    noise_vars: Vec<f64>,
    seed: u64,
}

impl Scenario {
    pub fn new(
        k: usize,
        n: usize,
        alpha: f64,
        gains: GainModel,
        signal: SignalModel,
        noise_vars: Vec<f64>,
        seed: u64,
    ) -> Result<Self> {
        if k == 0 || n == 0 {
            return domain("need at least one sensor and one sample");
        }
        if !(0.0..=1.0).contains(&alpha) {
            return domain(format!("alpha {alpha} outside [0, 1]"));
        }
        let gain_len = match &gains {
            GainModel::Fixed(h) => h.len(),
            GainModel::Rayleigh(ms) => {
                if let Some(v) = ms.iter().find(|&&v| !(v > 0.0) || !v.is_finite()) {
                    return domain(format!("Rayleigh mean square {v} must be positive"));
                }
                ms.len()
            }
        };
        if gain_len != k || noise_vars.len() != k {
            return Err(Error::LengthMismatch(format!(
                "k = {k} but {gain_len} gains and {} noise variances",
                noise_vars.len()
            )));
        }
        if let Some(v) = noise_vars.iter().find(|&&v| !(v > 0.0) || !v.is_finite()) {
            return domain(format!("noise variance {v} must be positive"));
        }
        match &signal {
            SignalModel::Fixed(s) if s.len() != n => {
                return Err(Error::LengthMismatch(format!("n = {n} but {} signal samples", s.len())));
            }
            SignalModel::EnergyPmf(pmf) => {
                if pmf.is_empty() || pmf.iter().any(|&(e, p)| !(e > 0.0) || !(0.0..=1.0).contains(&p)) {
                    return domain("signal-energy atoms need positive energy and probability in [0, 1]");
                }
                let total: f64 = pmf.iter().map(|(_, p)| p).sum();
                if (total - 1.0).abs() > 1e-10 {
                    return domain(format!("signal-energy probabilities sum to {total}"));
                }
            }
            _ => {}
        }
        Ok(Self { k, n, alpha, gains, signal, noise_vars, seed })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kn(&self) -> u64 {
        (self.k * self.n) as u64
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gains(&self) -> &GainModel {
        &self.gains
    }

    pub fn signal(&self) -> &SignalModel {
        &self.signal
    }

    pub fn noise_vars(&self) -> &[f64] {
        &self.noise_vars
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    /// Law of the additive SNR `Γ = Σ_k |h_k|² ‖s‖² / σ_k²`.
    pub fn snr_law(&self) -> Result<SnrLaw> {
        let energies: Vec<(f64, f64)> = match &self.signal {
            SignalModel::Fixed(s) => vec![(s.iter().map(|x| x.norm_sqr()).sum(), 1.0)],
            SignalModel::EnergyPmf(pmf) => pmf.clone(),
        };
        match &self.gains {
            GainModel::Fixed(h) => {
                let per_unit = additive_snr(h, 1.0, &self.noise_vars)?;
                Ok(match energies.as_slice() {
                    [(e, _)] => SnrLaw::PointMass(per_unit * e),
                    _ => SnrLaw::Discrete(energies.iter().map(|&(e, p)| (per_unit * e, p)).collect()),
                })
            }
            GainModel::Rayleigh(ms) => {
                let gammas: Vec<f64> = ms.iter().zip(&self.noise_vars).map(|(m, v)| m / v).collect();
                if energies.iter().any(|&(e, _)| e == 0.0) {
                    return domain("Rayleigh scenario with zero signal energy has no mixture form");
                }
                Ok(SnrLaw::Exponentials(rayleigh_gamma_mixture(&gammas, &energies)?))
            }
        }
    }
}

/// Seeded generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn block_stream(purpose: u64, block: usize) -> u64 {
    (purpose << 32) | block as u64
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let sd = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(sd * re, sd * im)
}

/// One K×N observation window, sensor-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    k: usize,
    n: usize,
    samples: Vec<Complex64>,
}

impl Observation {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, n: usize) -> Complex64 {
        self.samples[k * self.n + n]
    }

    pub fn row(&self, k: usize) -> &[Complex64] {
        &self.samples[k * self.n..(k + 1) * self.n]
    }

    /// `Σ_k Σ_n |y_k(n)|² / σ_k²`, the energy after whitening.
    pub fn whitened_energy(&self, noise_vars: &[f64]) -> f64 {
        (0..self.k)
            .map(|k| self.row(k).iter().map(|y| y.norm_sqr()).sum::<f64>() / noise_vars[k])
            .sum()
    }
}

fn draw_signal<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Vec<Complex64> {
    match &scenario.signal {
        SignalModel::Fixed(s) => s.clone(),
        SignalModel::EnergyPmf(pmf) => {
            let energy = if pmf.len() == 1 {
                pmf[0].0
            } else {
                let idx = WeightedIndex::new(pmf.iter().map(|&(_, p)| p)).expect("validated pmf");
                pmf[idx.sample(rng)].0
            };
            vec![Complex64::new((energy / scenario.n as f64).sqrt(), 0.0); scenario.n]
        }
    }
}

fn draw_gains<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Vec<Complex64> {
    match &scenario.gains {
        GainModel::Fixed(h) => h.clone(),
        GainModel::Rayleigh(ms) => ms.iter().map(|&m| complex_normal(rng, m)).collect(),
    }
}

/// `Y = ξ h sᴴ + Z`, with fresh gains (if Rayleigh) and signal per window.
pub fn draw_observation<R: Rng + ?Sized>(scenario: &Scenario, xi: bool, rng: &mut R) -> Observation {
    let (k, n) = (scenario.k, scenario.n);
    let mean = if xi {
        let h = draw_gains(scenario, rng);
        let s = draw_signal(scenario, rng);
        Some((h, s))
    } else {
        None
    };
    let mut samples = Vec::with_capacity(k * n);
    for (kk, &var) in scenario.noise_vars.iter().enumerate() {
        for nn in 0..n {
            let z = complex_normal(rng, var);
            samples.push(match &mean {
                Some((h, s)) => h[kk] * s[nn].conj() + z,
                None => z,
            });
        }
    }
    Observation { k, n, samples }
}

/// Binomial proportion with its 95% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithCI {
    pub value: f64,
    pub successes: u64,
    pub trials: u64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl EstimateWithCI {
    pub fn wilson(successes: u64, trials: u64) -> Self {
        assert!(trials > 0 && successes <= trials);
        let nt = trials as f64;
        let p = successes as f64 / nt;
        let z2 = WILSON_Z * WILSON_Z;
        let denom = 1.0 + z2 / nt;
        let center = (p + z2 / (2.0 * nt)) / denom;
        let half = WILSON_Z * (p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)).sqrt() / denom;
        Self {
            value: p,
            successes,
            trials,
            ci_low: (center - half).max(0.0).min(p),
            ci_high: (center + half).min(1.0).max(p),
        }
    }

    pub fn covers(&self, x: f64) -> bool {
        self.ci_low <= x && x <= self.ci_high
    }

    pub fn width(&self) -> f64 {
        self.ci_high - self.ci_low
    }
}

fn blocks(trials: usize) -> Vec<(usize, usize)> {
    (0..trials.div_ceil(BLOCK_TRIALS))
        .map(|b| (b, BLOCK_TRIALS.min(trials - b * BLOCK_TRIALS)))
        .collect()
}

#[cfg(feature = "parallel")]
fn map_blocks<T: Send>(trials: usize, f: impl Fn(usize, usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    blocks(trials).into_par_iter().map(|(b, count)| f(b, count)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_blocks<T>(trials: usize, f: impl Fn(usize, usize) -> T) -> Vec<T> {
    blocks(trials).into_iter().map(|(b, count)| f(b, count)).collect()
}

fn simulate_energies(scenario: &Scenario, xi: bool, trials: usize) -> Vec<f64> {
    let purpose = if xi { PURPOSE_BUSY } else { PURPOSE_IDLE };
    map_blocks(trials, |b, count| {
        let mut rng = stream_rng(scenario.seed, block_stream(purpose, b));
        (0..count)
            .map(|_| draw_observation(scenario, xi, &mut rng).whitened_energy(&scenario.noise_vars))
            .collect::<Vec<_>>()
    })
    .concat()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocEstimate {
    pub theta: f64,
    pub pfa: EstimateWithCI,
    pub pmd: EstimateWithCI,
}

pub const MIN_ROC_TRIALS: usize = 1000;

/// Empirical `(Pfa, Pmd)` of the energy detector at every threshold, from
/// `trials` windows under each hypothesis. The same windows serve all
/// thresholds.
pub fn estimate_detector_roc(scenario: &Scenario, theta_grid: &[f64], trials: usize) -> Result<Vec<RocEstimate>> {
    if trials < MIN_ROC_TRIALS {
        return domain(format!("need at least {MIN_ROC_TRIALS} trials, got {trials}"));
    }
    let idle = simulate_energies(scenario, false, trials);
    let busy = simulate_energies(scenario, true, trials);
    let alpha = scenario.alpha;
    Ok(theta_grid
        .iter()
        .map(|&theta| {
            let false_alarms = idle.iter().filter(|&&e| declares_busy(e, alpha, theta)).count();
            let misses = busy.iter().filter(|&&e| !declares_busy(e, alpha, theta)).count();
            RocEstimate {
                theta,
                pfa: EstimateWithCI::wilson(false_alarms as u64, trials as u64),
                pmd: EstimateWithCI::wilson(misses as u64, trials as u64),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiEstimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: u64,
}

pub const MIN_MI_TRIALS: usize = 10_000;

/// Monte-Carlo `I(X; y)` in bits for `y = X·a + z`, `X = ±1` with
/// `P(X = −1) = α` and `z` standard normal, averaging
/// `log2 p(y|X)/p(y)` over draws.
pub fn estimate_vector_mi(alpha: f64, a: &[f64], trials: usize, seed: u64, stream: u64) -> Result<MiEstimate> {
    if !(0.0..=1.0).contains(&alpha) {
        return domain(format!("alpha {alpha} outside [0, 1]"));
    }
    if trials < MIN_MI_TRIALS {
        return domain(format!("need at least {MIN_MI_TRIALS} trials, got {trials}"));
    }
    if alpha == 0.0 || alpha == 1.0 {
        return Ok(MiEstimate { value: 0.0, std_error: 0.0, trials: trials as u64 });
    }
    let shift = (alpha / (1.0 - alpha)).ln();
    // sum and sum of squares per block, reduced in block order
    let sums = map_blocks(trials, |b, count| {
        let mut rng = stream_rng(seed, block_stream(PURPOSE_VECTOR_MI, b) ^ (stream << 48));
        let mut acc = (0.0, 0.0);
        for _ in 0..count {
            let minus = rng.random::<f64>() < alpha;
            let x = if minus { -1.0 } else { 1.0 };
            let t: f64 = a
                .iter()
                .map(|&ai| {
                    let z: f64 = rng.sample(StandardNormal);
                    ai * (x * ai + z)
                })
                .sum();
            // log2 p(y|x)/p(y) = −log2(P(x) + P(−x)·e^{−2x·t})
            let v = if minus {
                -(alpha.log2() + log1p_exp_scaled(2.0 * t - shift))
            } else {
                -((1.0 - alpha).log2() + log1p_exp_scaled(-2.0 * t + shift))
            };
            acc.0 += v;
            acc.1 += v * v;
        }
        acc
    });
    let (s, s2) = sums.iter().fold((0.0, 0.0), |acc, &(x, y)| (acc.0 + x, acc.1 + y));
    let nt = trials as f64;
    let mean = s / nt;
    let var = (s2 / nt - mean * mean).max(0.0) * nt / (nt - 1.0);
    Ok(MiEstimate { value: mean, std_error: (var / nt).sqrt(), trials: trials as u64 })
}

/// Draws of `Γ = Σ_k |h_k|² ‖s‖² / σ_k²` under Rayleigh gains.
pub fn sample_gamma(scenario: &Scenario, trials: usize) -> Result<Vec<f64>> {
    if !matches!(scenario.gains, GainModel::Rayleigh(_)) {
        return domain("sample_gamma needs Rayleigh gains");
    }
    Ok(map_blocks(trials, |b, count| {
        let mut rng = stream_rng(scenario.seed, block_stream(PURPOSE_GAMMA, b));
        (0..count)
            .map(|_| {
                let h = draw_gains(scenario, &mut rng);
                let energy: f64 = draw_signal(scenario, &mut rng).iter().map(|x| x.norm_sqr()).sum();
                h.iter().zip(&scenario.noise_vars).map(|(h, v)| h.norm_sqr() * energy / v).sum::<f64>()
            })
            .collect::<Vec<_>>()
    })
    .concat())
}

/// Kolmogorov–Smirnov distance between samples and a continuous CDF.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
