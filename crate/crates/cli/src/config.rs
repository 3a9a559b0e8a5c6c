//! Scenario files: JSON schema, defaults and resolution to linear-scale
//! core types.

use num_complex::Complex64;
use rocbound_core::channel::{Prior, SnrLaw, MAX_SERIES_DEPTH};
use rocbound_core::detector::DEFAULT_THETA_POINTS;
use rocbound_core::montecarlo::{GainModel, Scenario, SignalModel, MIN_ROC_TRIALS};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::quantity::{Quantity, Unit};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_TRIALS: usize = 100_000;
pub const DEFAULT_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub prior: PriorSection,
    pub sensors: Sensors,
    pub gains: Gains,
    pub signal: Signal,
    pub sampling: Sampling,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<Simulation>,
    pub sweep: Sweep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorSection {
    /// Probability that the band is idle.
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sensors {
    pub k: usize,
    pub noise_vars: Vec<Quantity>,
}

/// Power gains `|h_k|²` (fixed) or mean powers `E|h_k|²` (Rayleigh).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
pub enum Gains {
    Fixed { values: Vec<Quantity> },
    Rayleigh { values: Vec<Quantity> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
pub enum Signal {
    /// Per-sample powers `|s_n|²`, one per sample.
    Fixed { values: Vec<Quantity> },
    /// Distribution of the window energy `‖s‖²`.
    Pmf { values: Vec<PmfAtom> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmfAtom {
    pub energy: Quantity,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sampling {
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Simulation {
    pub seed: u64,
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbabilityGrid {
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub spacing: Spacing,
}

/// Evenly spaced in the unit both ends are written in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnrGrid {
    pub from: Quantity,
    pub to: Quantity,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layout {
    pub k: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "what", rename_all = "lowercase", deny_unknown_fields)]
pub enum Sweep {
    Roc {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pfa: Option<ProbabilityGrid>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta_points: Option<usize>,
        /// One curve per listed mean additive SNR; the scenario's own
        /// SNR when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        snr: Option<Vec<Quantity>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<Vec<f64>>,
        /// Sensor/sample splits for the energy detector at equal additive SNR.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        layouts: Option<Vec<Layout>>,
    },
    Equilibrium {
        snr: SnrGrid,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<Vec<f64>>,
    },
    Asymptotic {
        snr: SnrGrid,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        depth: Option<usize>,
    },
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub depth: Option<usize>,
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("scenario file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario file serializes")
    }

    /// Applies overrides and writes every default explicitly, so the result
    /// documents the full configuration that will run.
    pub fn with_defaults(mut self, ov: Overrides) -> Result<Self, CliError> {
        let sim = self.simulation.get_or_insert(Simulation { seed: DEFAULT_SEED, trials: DEFAULT_TRIALS });
        if let Some(seed) = ov.seed {
            sim.seed = seed;
        }
        if let Some(trials) = ov.trials {
            sim.trials = trials;
        }
        let own_alpha = self.prior.alpha;
        let own_layout = Layout { k: self.sensors.k, n: self.sampling.n };
        match &mut self.sweep {
            Sweep::Roc { pfa, theta_points, alpha, layouts, .. } => {
                pfa.get_or_insert(ProbabilityGrid { from: 1e-4, to: 0.9999, points: 200, spacing: Spacing::Log });
                theta_points.get_or_insert(DEFAULT_THETA_POINTS);
                alpha.get_or_insert_with(|| vec![own_alpha]);
                layouts.get_or_insert_with(|| vec![own_layout]);
            }
            Sweep::Equilibrium { alpha, .. } => {
                alpha.get_or_insert_with(|| vec![own_alpha]);
            }
            Sweep::Asymptotic { alpha, depth, .. } => {
                alpha.get_or_insert_with(|| vec![own_alpha]);
                if let Some(d) = ov.depth {
                    *depth = Some(d);
                }
                depth.get_or_insert(DEFAULT_DEPTH);
            }
        }
        if ov.depth.is_some() && !matches!(self.sweep, Sweep::Asymptotic { .. }) {
            return Err(CliError::Config("--depth applies only to asymptotic sweeps".into()));
        }
        Ok(self)
    }

    pub fn resolve(&self) -> Result<Config, CliError> {
        let k = self.sensors.k;
        let n = self.sampling.n;
        if k == 0 || n == 0 {
            return config("sensors.k and sampling.n must be at least 1");
        }
        check_alpha(self.prior.alpha, "prior.alpha")?;
        let noise_vars = linear_list(&self.sensors.noise_vars, "sensors.noise_vars", k)?;
        if noise_vars.iter().any(|&v| v <= 0.0) {
            return config("noise variances must be positive");
        }
        let gains = match &self.gains {
            Gains::Fixed { values } => GainModel::Fixed(
                linear_list(values, "gains.values", k)?.iter().map(|p| Complex64::new(p.sqrt(), 0.0)).collect(),
            ),
            Gains::Rayleigh { values } => {
                let ms = linear_list(values, "gains.values", k)?;
                if ms.iter().any(|&m| m <= 0.0) {
                    return config("Rayleigh mean powers must be positive");
                }
                GainModel::Rayleigh(ms)
            }
        };
        let signal = match &self.signal {
            Signal::Fixed { values } => SignalModel::Fixed(
                linear_list(values, "signal.values", n)?.iter().map(|p| Complex64::new(p.sqrt(), 0.0)).collect(),
            ),
            Signal::Pmf { values } => {
                if values.is_empty() {
                    return config("signal pmf needs at least one atom");
                }
                let total: f64 = values.iter().map(|a| a.prob).sum();
                if values.iter().any(|a| !(a.prob >= 0.0)) || (total - 1.0).abs() > 1e-9 {
                    return config(format!("signal pmf probabilities must be nonnegative and sum to 1 (sum {total})"));
                }
                SignalModel::EnergyPmf(values.iter().map(|a| (a.energy.linear(), a.prob)).collect())
            }
        };
        let sim = self.simulation.clone().unwrap_or(Simulation { seed: DEFAULT_SEED, trials: DEFAULT_TRIALS });
        if sim.trials < MIN_ROC_TRIALS {
            return config(format!("simulation.trials must be at least {MIN_ROC_TRIALS}"));
        }
        let scenario = Scenario::new(k, n, self.prior.alpha, gains, signal, noise_vars, sim.seed)
            .map_err(|e| CliError::Config(format!("scenario: {e}")))?;
        let law = scenario.snr_law().map_err(|e| CliError::Config(format!("scenario: {e}")))?;
        let random = !matches!(law, SnrLaw::PointMass(_));

        let sweep = match &self.sweep {
            Sweep::Roc { pfa, theta_points, snr, alpha, layouts } => {
                let pfa = pfa.clone().ok_or_else(|| CliError::Config("sweep.pfa missing".into()))?;
                let theta_points = theta_points.unwrap_or(DEFAULT_THETA_POINTS);
                if theta_points < 2 {
                    return config("sweep.theta_points must be at least 2");
                }
                let snrs = match snr {
                    Some(list) => {
                        if list.is_empty() {
                            return config("sweep.snr must not be empty");
                        }
                        if law.mean() <= 0.0 {
                            return config("sweep.snr rescales the scenario, whose additive SNR is zero");
                        }
                        list.iter().map(Quantity::linear).collect()
                    }
                    None => vec![law.mean()],
                };
                if random && snrs.iter().any(|&s| s <= 0.0) {
                    return config("random-SNR scenarios need positive sweep.snr values");
                }
                let layouts = layouts.clone().unwrap_or_else(|| vec![Layout { k, n }]);
                for l in &layouts {
                    if l.n == 0 || !(l.k == k || l.k == 1) {
                        return config(format!(
                            "layout k={}, n={}: k must be 1 or the scenario's {k}, and n at least 1",
                            l.k, l.n
                        ));
                    }
                }
                ResolvedSweep::Roc {
                    pfa_grid: probability_grid(&pfa)?,
                    theta_points,
                    snrs,
                    alphas: alphas(alpha, self.prior.alpha)?,
                    layouts,
                }
            }
            Sweep::Equilibrium { snr, alpha } => {
                let grid = snr_grid(snr)?;
                if random && grid[0] <= 0.0 {
                    return config("random-SNR scenarios need a positive SNR grid");
                }
                ResolvedSweep::Equilibrium { snr_grid: grid, alphas: alphas(alpha, self.prior.alpha)? }
            }
            Sweep::Asymptotic { snr, alpha, depth } => {
                let depth = depth.unwrap_or(DEFAULT_DEPTH);
                if depth > MAX_SERIES_DEPTH {
                    return config(format!("depth {depth} exceeds {MAX_SERIES_DEPTH}"));
                }
                let grid = snr_grid(snr)?;
                if grid[0] <= 0.0 {
                    return config("the asymptotic series needs a positive SNR grid");
                }
                ResolvedSweep::Asymptotic { snr_grid: grid, alphas: alphas(alpha, self.prior.alpha)?, depth }
            }
        };
        Ok(Config { scenario, law, trials: sim.trials, sweep })
    }
}

/// Everything a command needs, in linear units.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub scenario: Scenario,
    pub law: SnrLaw,
    pub trials: usize,
    pub sweep: ResolvedSweep,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ResolvedSweep {
    Roc { pfa_grid: Vec<f64>, theta_points: usize, snrs: Vec<f64>, alphas: Vec<f64>, layouts: Vec<Layout> },
    Equilibrium { snr_grid: Vec<f64>, alphas: Vec<f64> },
    Asymptotic { snr_grid: Vec<f64>, alphas: Vec<f64>, depth: usize },
}

fn config<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

fn check_alpha(a: f64, what: &str) -> Result<(), CliError> {
    if !(a > 0.0 && a < 1.0) {
        return config(format!("{what} = {a} must lie strictly between 0 and 1"));
    }
    Prior::new(a).map(|_| ()).map_err(|e| CliError::Config(e.to_string()))
}

fn alphas(list: &Option<Vec<f64>>, own: f64) -> Result<Vec<f64>, CliError> {
    let list = list.clone().unwrap_or_else(|| vec![own]);
    if list.is_empty() {
        return config("sweep.alpha must not be empty");
    }
    for &a in &list {
        check_alpha(a, "sweep.alpha")?;
    }
    Ok(list)
}

fn linear_list(values: &[Quantity], what: &str, len: usize) -> Result<Vec<f64>, CliError> {
    if values.len() != len {
        return config(format!("{what} has {} entries, expected {len}", values.len()));
    }
    Ok(values.iter().map(Quantity::linear).collect())
}

fn probability_grid(g: &ProbabilityGrid) -> Result<Vec<f64>, CliError> {
    if !(g.from > 0.0 && g.from < g.to && g.to < 1.0) || g.points < 2 {
        return config("sweep.pfa needs 0 < from < to < 1 and at least 2 points");
    }
    let steps = (g.points - 1) as f64;
    Ok((0..g.points)
        .map(|i| {
            let t = i as f64 / steps;
            if i == 0 {
                return g.from;
            }
            if i + 1 == g.points {
                return g.to;
            }
            match g.spacing {
                Spacing::Linear => g.from + (g.to - g.from) * t,
                Spacing::Log => (g.from.ln() + (g.to.ln() - g.from.ln()) * t).exp(),
            }
        })
        .collect())
}

fn snr_grid(g: &SnrGrid) -> Result<Vec<f64>, CliError> {
    if g.from.unit != g.to.unit {
        return config("sweep.snr from/to must use the same unit");
    }
    if g.points < 2 || !(g.from.value < g.to.value) {
        return config("sweep.snr needs from < to and at least 2 points");
    }
    let steps = (g.points - 1) as f64;
    Ok((0..g.points)
        .map(|i| {
            let v = g.from.value + (g.to.value - g.from.value) * i as f64 / steps;
            match g.from.unit {
                Unit::Db => Quantity::db(v).linear(),
                Unit::Linear => v,
            }
        })
        .collect())
}
