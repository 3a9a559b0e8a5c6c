use num_complex::Complex64;
use rocbound_core::channel::{
    averaged_mi, biawgn_deficit_scaled, biawgn_mi, series_coefficients, Prior, QuadratureSet, SnrLaw,
    MAX_SERIES_DEPTH,
};
use rocbound_core::detector::{decision_rule_point_averaged, default_theta_grid};
use rocbound_core::linear_to_db;
use rocbound_core::montecarlo::{estimate_detector_roc, GainModel, Scenario, SignalModel};
use rocbound_core::roc::{equilibrium_asymptotic, equilibrium_vs_snr_curve, roc_lower_bound, MiSource};

use crate::config::{Config, Layout, ResolvedSweep};
use crate::error::CliError;
use crate::output::{Cell, Table};

/// Largest mean additive SNR (linear) accepted by `energy-roc`; beyond it
/// the Marcum series window grows past ~10⁴ terms per evaluation.
pub const MAX_DETECTOR_SNR: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Bound,
    EnergyRoc,
    Equilibrium,
    Asymptotic,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bound => "bound",
            Command::EnergyRoc => "energy-roc",
            Command::Equilibrium => "equilibrium",
            Command::Asymptotic => "asymptotic",
        }
    }

    fn sweep_kind(&self) -> &'static str {
        match self {
            Command::Bound | Command::EnergyRoc => "roc",
            Command::Equilibrium => "equilibrium",
            Command::Asymptotic => "asymptotic",
        }
    }
}

pub fn run(cmd: Command, cfg: &Config, simulate: bool) -> Result<Table, CliError> {
    let kind = match &cfg.sweep {
        ResolvedSweep::Roc { .. } => "roc",
        ResolvedSweep::Equilibrium { .. } => "equilibrium",
        ResolvedSweep::Asymptotic { .. } => "asymptotic",
    };
    if kind != cmd.sweep_kind() {
        return Err(CliError::Config(format!(
            "`{}` needs a sweep with what = \"{}\", the scenario has \"{kind}\"",
            cmd.name(),
            cmd.sweep_kind()
        )));
    }
    if simulate && cmd != Command::EnergyRoc {
        return Err(CliError::Config("--simulate applies only to energy-roc".into()));
    }
    let rules = QuadratureSet::default();
    match (&cfg.sweep, cmd) {
        (ResolvedSweep::Roc { pfa_grid, snrs, alphas, .. }, Command::Bound) => {
            bound(&cfg.law, pfa_grid, snrs, alphas, &rules)
        }
        (ResolvedSweep::Roc { theta_points, snrs, alphas, layouts, .. }, Command::EnergyRoc) => {
            let sim = simulate.then_some(cfg.trials);
            energy_roc(&cfg.scenario, *theta_points, snrs, alphas, layouts, sim, &rules)
        }
        (ResolvedSweep::Equilibrium { snr_grid, alphas }, _) => equilibrium(&cfg.law, snr_grid, alphas, &rules),
        (ResolvedSweep::Asymptotic { snr_grid, alphas, depth }, _) => asymptotic(snr_grid, alphas, *depth, &rules),
        _ => unreachable!("sweep kind checked above"),
    }
}

fn prior(alpha: f64) -> Result<Prior, CliError> {
    Ok(Prior::new(alpha)?)
}

fn law_mi(prior: Prior, law: &SnrLaw, rules: &QuadratureSet) -> Result<f64, CliError> {
    Ok(match law {
        SnrLaw::PointMass(s) => biawgn_mi(prior, *s, &rules.hermite)?,
        _ => averaged_mi(prior, law, &rules.hermite, &rules.laguerre)?,
    })
}

fn bound(law: &SnrLaw, pfa_grid: &[f64], snrs: &[f64], alphas: &[f64], rules: &QuadratureSet) -> Result<Table, CliError> {
    let mut t = Table::new(&["alpha", "snr_db", "mi_bits", "pfa", "pmd_bound"]);
    for &a in alphas {
        let p = prior(a)?;
        for &snr in snrs {
            let mi = law_mi(p, &law.scaled_to_mean(snr)?, rules)?;
            if mi >= p.entropy() {
                t.notes.push(format!(
                    "warning: alpha={a}, snr={:.4} dB: MI reaches H_b(alpha) = {}, the bound is Pmd = 0",
                    linear_to_db(snr),
                    p.entropy()
                ));
            }
            let curve = roc_lower_bound(p, mi, pfa_grid)?;
            for pt in curve.points() {
                t.rows.push(vec![
                    Cell::Num(a),
                    Cell::Num(linear_to_db(snr)),
                    Cell::Num(mi),
                    Cell::Num(pt.pfa()),
                    Cell::Num(pt.pmd()),
                ]);
            }
        }
    }
    Ok(t)
}

/// The scenario seen through `layout`, rescaled to mean additive SNR
/// `snr`. A single-sensor layout of a multi-sensor scenario combines the
/// whitened gains into one sensor; a new sample count spreads the window
/// energy evenly. Neither changes the additive SNR.
pub fn layout_scenario(base: &Scenario, layout: Layout, alpha: f64, snr: f64) -> Result<Scenario, CliError> {
    let (mut gains, noise) = if layout.k == base.k() {
        (base.gains().clone(), base.noise_vars().to_vec())
    } else {
        let nv = base.noise_vars();
        let combined = match base.gains() {
            GainModel::Fixed(h) => {
                let p: f64 = h.iter().zip(nv).map(|(h, v)| h.norm_sqr() / v).sum();
                GainModel::Fixed(vec![Complex64::new(p.sqrt(), 0.0)])
            }
            GainModel::Rayleigh(ms) => GainModel::Rayleigh(vec![ms.iter().zip(nv).map(|(m, v)| m / v).sum()]),
        };
        (combined, vec![1.0])
    };
    let signal = match base.signal() {
        SignalModel::Fixed(s) if s.len() != layout.n => {
            let energy: f64 = s.iter().map(|x| x.norm_sqr()).sum();
            SignalModel::Fixed(vec![Complex64::new((energy / layout.n as f64).sqrt(), 0.0); layout.n])
        }
        other => other.clone(),
    };
    let current = base.snr_law()?.mean();
    if current > 0.0 {
        let c = snr / current;
        gains = match gains {
            GainModel::Fixed(h) => GainModel::Fixed(h.iter().map(|x| x * c.sqrt()).collect()),
            GainModel::Rayleigh(ms) => GainModel::Rayleigh(ms.iter().map(|m| m * c).collect()),
        };
    }
    Ok(Scenario::new(layout.k, layout.n, alpha, gains, signal, noise, base.seed())?)
}

fn energy_roc(
    base: &Scenario,
    theta_points: usize,
    snrs: &[f64],
    alphas: &[f64],
    layouts: &[Layout],
    trials: Option<usize>,
    rules: &QuadratureSet,
) -> Result<Table, CliError> {
    let mut cols = vec!["alpha", "snr_db", "k", "n", "theta", "pfa", "pmd"];
    if trials.is_some() {
        cols.extend(["pfa_mc", "pfa_ci_low", "pfa_ci_high", "pmd_mc", "pmd_ci_low", "pmd_ci_high"]);
    }
    if let Some(&s) = snrs.iter().find(|&&s| s > MAX_DETECTOR_SNR) {
        return Err(CliError::Config(format!(
            "energy-detector SNR {:.1} dB exceeds the supported {:.0} dB",
            linear_to_db(s),
            linear_to_db(MAX_DETECTOR_SNR)
        )));
    }
    let mut t = Table::new(&cols);
    let mut curve = 0u64;
    for &a in alphas {
        for &snr in snrs {
            for &layout in layouts {
                let sc = layout_scenario(base, layout, a, snr)?.with_seed(base.seed().wrapping_add(curve));
                curve += 1;
                let law = sc.snr_law()?;
                let kn = sc.kn();
                let grid = default_theta_grid(kn, law.mean(), a, theta_points);
                let mc = match trials {
                    Some(n) => Some(estimate_detector_roc(&sc, &grid, n)?),
                    None => None,
                };
                for (i, &theta) in grid.iter().enumerate() {
                    let op = decision_rule_point_averaged(kn, &law, a, theta, &rules.laguerre)?;
                    let mut row = vec![
                        Cell::Num(a),
                        Cell::Num(linear_to_db(snr)),
                        Cell::Int(layout.k as u64),
                        Cell::Int(layout.n as u64),
                        Cell::Num(theta),
                        Cell::Num(op.pfa()),
                        Cell::Num(op.pmd()),
                    ];
                    if let Some(est) = &mc {
                        let e = &est[i];
                        row.extend(
                            [e.pfa.value, e.pfa.ci_low, e.pfa.ci_high, e.pmd.value, e.pmd.ci_low, e.pmd.ci_high]
                                .map(Cell::Num),
                        );
                    }
                    t.rows.push(row);
                }
            }
        }
    }
    if trials.is_some() {
        t.notes.push(format!("simulation: curve i uses seed {} + i", base.seed()));
    }
    Ok(t)
}

fn equilibrium(law: &SnrLaw, snr_grid: &[f64], alphas: &[f64], rules: &QuadratureSet) -> Result<Table, CliError> {
    let mut t = Table::new(&["alpha", "snr_db", "snr", "peq", "peq_asymptotic"]);
    let source = match law {
        SnrLaw::PointMass(_) => MiSource::KnownGains,
        other => MiSource::Averaged(other.clone()),
    };
    for &a in alphas {
        for (snr, peq) in equilibrium_vs_snr_curve(prior(a)?, snr_grid, &source, rules)? {
            t.rows.push(vec![
                Cell::Num(a),
                Cell::Num(linear_to_db(snr)),
                Cell::Num(snr),
                Cell::Num(peq),
                Cell::Num(equilibrium_asymptotic(snr)),
            ]);
        }
    }
    Ok(t)
}

fn asymptotic(snr_grid: &[f64], alphas: &[f64], depth: usize, rules: &QuadratureSet) -> Result<Table, CliError> {
    let mut cols: Vec<String> = ["alpha", "snr_db", "snr", "mi_quadrature", "deficit_scaled"].map(String::from).into();
    cols.extend((0..=depth).map(|d| format!("partial_{d}")));
    cols.push("bracket_ok".into());
    let mut t = Table { columns: cols, ..Table::default() };
    t.notes.push("deficit_scaled = e^(snr/4) (H_b(alpha) - MI); bracket_ok compares it with consecutive scaled partial sums".into());
    // one extra term so that depth 0 still has a pair to check
    let checked = (depth + 1).min(MAX_SERIES_DEPTH);
    for &a in alphas {
        let p = prior(a)?;
        let series = series_coefficients(p, checked)?;
        for &snr in snr_grid {
            let exact = biawgn_deficit_scaled(p, snr)?;
            let scaled = series.deficit_partial_sums_scaled(snr);
            let ok = scaled.windows(2).all(|w| w[0].min(w[1]) <= exact && exact <= w[0].max(w[1]));
            let mut row = vec![
                Cell::Num(a),
                Cell::Num(linear_to_db(snr)),
                Cell::Num(snr),
                Cell::Num(biawgn_mi(p, snr, &rules.hermite)?),
                Cell::Num(exact),
            ];
            row.extend(series.partial_sums(snr).into_iter().take(depth + 1).map(Cell::Num));
            row.push(Cell::Flag(ok));
            t.rows.push(row);
        }
    }
    Ok(t)
}
