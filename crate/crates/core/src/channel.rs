//! Mutual information of the sensing channel.
//!
//! After whitening, the K×N observation is `Y = ξA + Z` and the information
//! it carries about `ξ` depends on `A` only through the additive SNR
//! `‖A‖²`. The channel is then equivalent to a binary-input real Gaussian
//! channel, evaluated here by Gauss–Hermite quadrature, by its small-prior
//! expansion, or by its large-SNR asymptotic series.
//!
//! SNR convention: every public function takes the additive SNR `s = ‖A‖²`.
//! The equivalent real channel `Y = aX + Z₁` has `a² = γ = s/2`, so the
//! log-likelihood exponent `2√γ Z₁ − 2γ` is distributed as `N(−s, 2s)`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::roc::OperatingPoint;
use crate::special::{
    binary_entropy, euler_number, falling_factorial, gauss_rule, log1p_exp_scaled, QuadratureKind,
    QuadratureRule,
};

pub const DEFAULT_HERMITE_ORDER: usize = 256;
pub const DEFAULT_LAGUERRE_ORDER: usize = 128;
/// Deepest supported term of the large-SNR series.
pub const MAX_SERIES_DEPTH: usize = 10;

/// A priori probability that the primary signal is absent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prior {
    alpha: f64,
}

impl Prior {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return domain(format!("prior {alpha} outside [0, 1]"));
        }
        Ok(Self { alpha })
    }

    /// `P(ξ = 0)`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `P(ξ = 1) = 1 − α`.
    pub fn alpha_bar(&self) -> f64 {
        1.0 - self.alpha
    }

    /// `H_b(α)`, the largest information any detector output can carry.
    pub fn entropy(&self) -> f64 {
        binary_entropy(self.alpha).expect("alpha validated at construction")
    }

    pub fn swapped(&self) -> Self {
        Self { alpha: 1.0 - self.alpha }
    }

    fn is_degenerate(&self) -> bool {
        self.alpha == 0.0 || self.alpha == 1.0
    }
}

/// Gauss–Hermite and Gauss–Laguerre rules used by the MI integrals.
#[derive(Debug, Clone)]
pub struct QuadratureSet {
    pub hermite: QuadratureRule,
    pub laguerre: QuadratureRule,
}

impl QuadratureSet {
    pub fn new(hermite_order: usize, laguerre_order: usize) -> Result<Self> {
        Ok(Self {
            hermite: gauss_rule(QuadratureKind::Hermite, hermite_order)?,
            laguerre: gauss_rule(QuadratureKind::Laguerre, laguerre_order)?,
        })
    }
}

impl Default for QuadratureSet {
    fn default() -> Self {
        Self::new(DEFAULT_HERMITE_ORDER, DEFAULT_LAGUERRE_ORDER).expect("default orders are supported")
    }
}

/// `I(ξ; ξ̂)` of the binary asymmetric channel with crossovers `(Pfa, Pmd)`.
///
/// Evaluated as `α·D(P₀‖R) + ᾱ·D(P₁‖R)` with every divergence written as a
/// sum of nonnegative terms, so the value keeps its relative precision as
/// it approaches zero; the entropy-difference form loses it to cancellation
/// near the diagonal, where the ROC bound is inverted.
pub fn bac_mutual_information(prior: Prior, op: OperatingPoint) -> Result<f64> {
    let (a, ab) = (prior.alpha(), prior.alpha_bar());
    let (pfa, pmd) = (op.pfa(), op.pmd());
    // output law R = (P(ξ̂=0), P(ξ̂=1)), each summed directly
    let r0 = a * (1.0 - pfa) + ab * pmd;
    let r1 = a * pfa + ab * (1.0 - pmd);
    let mut nats = 0.0;
    if a > 0.0 {
        nats += a * (divergence_term(1.0 - pfa, r0) + divergence_term(pfa, r1));
    }
    if ab > 0.0 {
        nats += ab * (divergence_term(pmd, r0) + divergence_term(1.0 - pmd, r1));
    }
    Ok((nats / LN_2).clamp(0.0, prior.entropy()))
}

/// `H(ξ | ξ̂) = H_b(α) − I(ξ; ξ̂)` of the binary asymmetric channel, summed
/// directly so that small values keep their relative precision.
pub fn bac_equivocation(prior: Prior, op: OperatingPoint) -> Result<f64> {
    let (a, ab) = (prior.alpha(), prior.alpha_bar());
    let (pfa, pmd) = (op.pfa(), op.pmd());
    let mut bits = 0.0;
    // joint masses (idle, busy) for each decision; the smaller posterior is
    // formed directly rather than as one minus the larger
    for (idle, busy) in [(a * (1.0 - pfa), ab * pmd), (a * pfa, ab * (1.0 - pmd))] {
        let r = idle + busy;
        if r > 0.0 {
            bits += r * binary_entropy((idle.min(busy) / r).min(0.5))?;
        }
    }
    Ok(bits.clamp(0.0, prior.entropy()))
}

// p·ln(p/q) − p + q ≥ 0; summing over an outcome set gives the divergence.
fn divergence_term(p: f64, q: f64) -> f64 {
    if p == 0.0 {
        return q;
    }
    let d = p - q;
    p * (d / q).ln_1p() - d
}

/// Additive SNR `Σ_k |h_k|² ‖s‖² / σ_k²`.
pub fn additive_snr(gains: &[Complex64], signal_energy: f64, noise_vars: &[f64]) -> Result<f64> {
    if gains.len() != noise_vars.len() {
        return Err(Error::LengthMismatch(format!(
            "{} gains but {} noise variances",
            gains.len(),
            noise_vars.len()
        )));
    }
    if !(signal_energy >= 0.0) {
        return domain(format!("signal energy {signal_energy} must be nonnegative"));
    }
    if let Some(v) = noise_vars.iter().find(|&&v| !(v > 0.0)) {
        return domain(format!("noise variance {v} must be positive"));
    }
    Ok(gains
        .iter()
        .zip(noise_vars)
        .map(|(h, &var)| h.norm_sqr() * signal_energy / var)
        .sum())
}

fn check_snr(snr: f64) -> Result<()> {
    if !(snr >= 0.0) || !snr.is_finite() {
        return domain(format!("SNR {snr} must be finite and nonnegative"));
    }
    Ok(())
}

// Integrand of H_b(α) − I: α·log2(1 + (ᾱ/α)e^w) + ᾱ·log2(1 + (α/ᾱ)e^w).
fn deficit_integrand(prior: Prior, w: f64) -> f64 {
    let (a, ab) = (prior.alpha(), prior.alpha_bar());
    let shift = (ab / a).ln();
    a * log1p_exp_scaled(w + shift) + ab * log1p_exp_scaled(w - shift)
}

// E[deficit_integrand(W)] with W ~ N(−snr, 2·snr).
fn deficit(prior: Prior, snr: f64, rule: &QuadratureRule) -> f64 {
    if snr == 0.0 {
        return deficit_integrand(prior, 0.0);
    }
    rule.gaussian_expectation(2.0 * snr, |z| deficit_integrand(prior, z - snr))
}

/// MI between signal presence and the observation for known gains and
/// signal, as a function of the additive SNR.
///
/// Degenerate priors carry no information and return 0.
pub fn biawgn_mi(prior: Prior, snr: f64, rule: &QuadratureRule) -> Result<f64> {
    check_snr(snr)?;
    if prior.is_degenerate() {
        return Ok(0.0);
    }
    let h = prior.entropy();
    Ok((h - deficit(prior, snr, rule)).clamp(0.0, h))
}

/// `e^{snr/4} · (H_b(α) − I)` in bits, for large SNR.
///
/// Shifting the Gaussian weight onto the integrand's `e^{−w/2}` envelope
/// makes the integral O(1) at any SNR, so the deficit keeps full relative
/// precision long after `H_b(α) − I` itself has rounded to zero. Evaluated
/// by the trapezoidal rule, which converges geometrically for this smooth,
/// exponentially decaying integrand.
pub fn biawgn_deficit_scaled(prior: Prior, snr: f64) -> Result<f64> {
    check_snr(snr)?;
    if snr == 0.0 {
        return Ok(prior.entropy());
    }
    if prior.is_degenerate() {
        return Ok(0.0);
    }
    let shift = (prior.alpha_bar() / prior.alpha()).ln().abs();
    let sd = (2.0 * snr).sqrt();
    let half_width = (2.0 * shift + 90.0).min(40.0 * sd);
    let step = (sd / 20.0).min(0.05);
    let count = (half_width / step).ceil() as i64;
    let norm = 1.0 / (4.0 * PI * snr).sqrt();
    let sum: f64 = (-count..=count)
        .map(|i| {
            let w = i as f64 * step;
            deficit_integrand(prior, w) * (-0.5 * w - w * w / (4.0 * snr)).exp()
        })
        .sum();
    Ok(sum * step * norm)
}

/// `H_b(α) − I` for known gains, via [`biawgn_deficit_scaled`]; keeps full
/// relative precision where the MI itself has rounded to `H_b(α)`.
pub fn biawgn_equivocation(prior: Prior, snr: f64) -> Result<f64> {
    Ok(biawgn_deficit_scaled(prior, snr)? * (-0.25 * snr).exp())
}

/// Truncation order of the small-prior expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpansionOrder {
    First,
    Second,
}

/// Small-α expansion of [`biawgn_mi`]: first order overestimates, second
/// order underestimates.
pub fn biawgn_mi_small_alpha(alpha: f64, snr: f64, order: ExpansionOrder) -> Result<f64> {
    Prior::new(alpha)?;
    check_snr(snr)?;
    let log2e = 1.0 / LN_2;
    Ok(match order {
        ExpansionOrder::First => snr * alpha * log2e,
        ExpansionOrder::Second => (snr * alpha - 0.5 * (2.0 * snr).exp_m1() * alpha * alpha) * log2e,
    })
}

/// How the series coefficients are paired with powers of the SNR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesScaling {
    /// `k_n / (4ⁿ s^{n+1/2})`, from integrating the expansion term by term
    /// with `γ = s/2`. Agrees with quadrature.
    #[default]
    Derived,
    /// `k_n / γ^{n+1/2}` with `γ = s/2`, the form stated alongside the
    /// coefficient formula. Kept for comparison; it does not bracket the
    /// quadrature value.
    AsPrinted,
}

/// Large-SNR series `I ≈ H_b(α) − e^{−s/4} Σ (−1)ⁿ k_n(α) / d_n(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesExpansion {
    pub h_b_alpha: f64,
    pub coefficients: Vec<f64>,
    pub scaling: SeriesScaling,
}

impl SeriesExpansion {
    pub fn depth(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Signed term `n` without the `e^{−s/4}` factor.
    pub fn term_scaled(&self, n: usize, snr: f64) -> f64 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let p = n as f64 + 0.5;
        let denom = match self.scaling {
            SeriesScaling::Derived => 4f64.powi(n as i32) * snr.powf(p),
            SeriesScaling::AsPrinted => (0.5 * snr).powf(p),
        };
        sign * self.coefficients[n] / denom
    }

    /// Partial sums of the deficit `H_b(α) − I`, scaled by `e^{s/4}`, for
    /// depths `0..=depth`.
    pub fn deficit_partial_sums_scaled(&self, snr: f64) -> Vec<f64> {
        (0..self.coefficients.len())
            .scan(0.0, |acc, n| {
                *acc += self.term_scaled(n, snr);
                Some(*acc)
            })
            .collect()
    }

    /// Partial sums of the MI itself, in bits.
    pub fn partial_sums(&self, snr: f64) -> Vec<f64> {
        let decay = (-0.25 * snr).exp();
        self.deficit_partial_sums_scaled(snr)
            .into_iter()
            .map(|d| self.h_b_alpha - decay * d)
            .collect()
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, j| acc * j as f64)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

fn abs_euler(n: usize) -> f64 {
    euler_number(n as u32).expect("index bounded by MAX_SERIES_DEPTH").unsigned_abs() as f64
}

fn falling(n: usize, m: usize) -> f64 {
    falling_factorial(n as u64, m as u64).expect("m <= n <= 2·MAX_SERIES_DEPTH") as f64
}

/// `c_n(ρ) = (2π)⁻¹ ∫ ln(1 + ρ e^z) z^{2n}/n! e^{−z/2} dz`, in closed form.
pub fn series_c(n: usize, rho: f64) -> Result<f64> {
    if n > MAX_SERIES_DEPTH {
        return domain(format!("series index {n} exceeds {MAX_SERIES_DEPTH}"));
    }
    if !(rho > 0.0) || !rho.is_finite() {
        return domain(format!("c_n needs a positive finite rho, got {rho}"));
    }
    let l = rho.ln();
    let mut sum = 0.0;
    for k in 0..=n {
        let inner: f64 = (0..=2 * k)
            .map(|m| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                sign * 2f64.powi(m as i32) * falling(2 * k, m) * l.powi((2 * k - m) as i32)
            })
            .sum();
        sum += binomial(2 * n, 2 * k) * PI.powi(2 * (n - k) as i32) * abs_euler(2 * (n - k)) * inner;
    }
    Ok(rho.sqrt() * sum / factorial(n))
}

// k_n(α) from the even-power closed form.
fn k_direct(prior: Prior, n: usize) -> f64 {
    let (a, ab) = (prior.alpha(), prior.alpha_bar());
    let l2 = (a / ab).ln().powi(2);
    let mut sum = 0.0;
    for k in 0..=n {
        let inner: f64 = (0..=k)
            .map(|m| 4f64.powi(m as i32) * falling(2 * k, 2 * m) * l2.powi((k - m) as i32))
            .sum();
        sum += binomial(2 * n, 2 * k) * PI.powi(2 * (n - k) as i32) * abs_euler(2 * (n - k)) * inner;
    }
    2.0 * (PI * a * ab).sqrt() / (factorial(n) * LN_2) * sum
}

// k_n(α) assembled from c_n at ρ = ᾱ/α and ρ = α/ᾱ.
fn k_via_c(prior: Prior, n: usize) -> Result<f64> {
    let (a, ab) = (prior.alpha(), prior.alpha_bar());
    Ok(PI.sqrt() / LN_2 * (a * series_c(n, ab / a)? + ab * series_c(n, a / ab)?))
}

/// Coefficients `k_0..=k_depth` of the large-SNR series.
///
/// Every coefficient is computed twice, from the even-power closed form
/// and from `c_n(ρ)` at `ρ = ᾱ/α, α/ᾱ`; the two must agree to `1e-9`
/// relative.
pub fn series_coefficients(prior: Prior, depth: usize) -> Result<SeriesExpansion> {
    if depth > MAX_SERIES_DEPTH {
        return domain(format!("series depth {depth} exceeds {MAX_SERIES_DEPTH}"));
    }
    if prior.is_degenerate() {
        return domain("series coefficients need 0 < alpha < 1");
    }
    let mut coefficients = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let direct = k_direct(prior, n);
        let via_c = k_via_c(prior, n)?;
        if (direct - via_c).abs() > 1e-9 * direct.abs().max(via_c.abs()) {
            return Err(Error::PathDisagreement { n, direct, via_c });
        }
        coefficients.push(direct);
    }
    Ok(SeriesExpansion { h_b_alpha: prior.entropy(), coefficients, scaling: SeriesScaling::Derived })
}

/// Partial sum at `depth` plus the bracket formed with the next partial sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticMi {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Large-SNR approximation of [`biawgn_mi`].
///
/// The series is asymptotic, not convergent: for fixed SNR the terms
/// eventually grow, but consecutive partial sums always bracket the true
/// value.
pub fn biawgn_mi_asymptotic(prior: Prior, snr: f64, depth: usize) -> Result<AsymptoticMi> {
    if !(snr > 0.0) {
        return domain(format!("asymptotic series needs a positive SNR, got {snr}"));
    }
    let depth_next = depth + 1;
    let series = series_coefficients(prior, depth_next.min(MAX_SERIES_DEPTH))?;
    let sums = series.partial_sums(snr);
    let value = sums[depth];
    let next = sums.get(depth_next).copied().unwrap_or(value);
    Ok(AsymptoticMi { value, lower: value.min(next), upper: value.max(next) })
}

/// One exponential component `weight · (1/mean) e^{−G/mean}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialComponent {
    pub weight: f64,
    pub mean: f64,
}

/// Distribution of a random additive SNR `Γ` as a signed mixture of
/// exponentials (the partial-fraction form of a hypoexponential law).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaMixture {
    components: Vec<ExponentialComponent>,
}

impl GammaMixture {
    pub fn new(components: Vec<ExponentialComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidMixture("no components".into()));
        }
        if let Some(c) = components.iter().find(|c| !(c.mean > 0.0) || !c.mean.is_finite() || !c.weight.is_finite()) {
            return Err(Error::InvalidMixture(format!("bad component {c:?}")));
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidMixture(format!("weights sum to {total}")));
        }
        let mixture = Self { components };
        let scale: f64 = mixture.components.iter().map(|c| c.weight.abs() / c.mean).sum();
        let top = 50.0 * mixture.max_mean();
        for i in 0..=2000 {
            let g = top * i as f64 / 2000.0;
            let p = mixture.pdf(g);
            if p < -1e-12 * scale {
                return Err(Error::InvalidMixture(format!("negative density {p} at {g}")));
            }
        }
        Ok(mixture)
    }

    pub fn exponential(mean: f64) -> Result<Self> {
        Self::new(vec![ExponentialComponent { weight: 1.0, mean }])
    }

    pub fn components(&self) -> &[ExponentialComponent] {
        &self.components
    }

    fn max_mean(&self) -> f64 {
        self.components.iter().map(|c| c.mean).fold(0.0, f64::max)
    }

    pub fn pdf(&self, g: f64) -> f64 {
        if g < 0.0 {
            return 0.0;
        }
        self.components.iter().map(|c| c.weight / c.mean * (-g / c.mean).exp()).sum()
    }

    pub fn cdf(&self, g: f64) -> f64 {
        if g <= 0.0 {
            return 0.0;
        }
        self.components.iter().map(|c| -c.weight * (-g / c.mean).exp_m1()).sum()
    }

    /// `E[Γ]`, the additive SNR.
    pub fn mean(&self) -> f64 {
        self.components.iter().map(|c| c.weight * c.mean).sum()
    }

    /// `E[f(Γ)]`, one Gauss–Laguerre rule per component after `G = mean·t`.
    pub fn expectation(&self, laguerre: &QuadratureRule, f: impl Fn(f64) -> f64) -> f64 {
        debug_assert_eq!(laguerre.kind(), QuadratureKind::Laguerre);
        self.components
            .iter()
            .map(|c| c.weight * laguerre.integrate(|t| f(c.mean * t)))
            .sum()
    }

    /// Same shape, every mean multiplied so that `E[Γ] = target`.
    pub fn scaled_to_mean(&self, target: f64) -> Result<Self> {
        if !(target > 0.0) {
            return domain(format!("target mean {target} must be positive"));
        }
        let factor = target / self.mean();
        Ok(Self {
            components: self
                .components
                .iter()
                .map(|c| ExponentialComponent { weight: c.weight, mean: c.mean * factor })
                .collect(),
        })
    }
}

/// Law of the additive SNR seen by the fusion center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrLaw {
    PointMass(f64),
    /// `(snr, probability)` atoms.
    Discrete(Vec<(f64, f64)>),
    Exponentials(GammaMixture),
}

impl SnrLaw {
    pub fn mean(&self) -> f64 {
        match self {
            SnrLaw::PointMass(s) => *s,
            SnrLaw::Discrete(atoms) => atoms.iter().map(|(s, p)| s * p).sum(),
            SnrLaw::Exponentials(m) => m.mean(),
        }
    }

    pub fn expectation(&self, laguerre: &QuadratureRule, f: impl Fn(f64) -> f64) -> f64 {
        match self {
            SnrLaw::PointMass(s) => f(*s),
            SnrLaw::Discrete(atoms) => atoms.iter().map(|&(s, p)| p * f(s)).sum(),
            SnrLaw::Exponentials(m) => m.expectation(laguerre, f),
        }
    }

    /// Same shape with mean `target`.
    pub fn scaled_to_mean(&self, target: f64) -> Result<Self> {
        check_snr(target)?;
        Ok(match self {
            SnrLaw::PointMass(_) => SnrLaw::PointMass(target),
            SnrLaw::Discrete(atoms) => {
                let mean = self.mean();
                if mean == 0.0 {
                    return domain("cannot rescale an all-zero SNR law");
                }
                SnrLaw::Discrete(atoms.iter().map(|&(s, p)| (s * target / mean, p)).collect())
            }
            SnrLaw::Exponentials(m) => {
                if target == 0.0 {
                    SnrLaw::PointMass(0.0)
                } else {
                    SnrLaw::Exponentials(m.scaled_to_mean(target)?)
                }
            }
        })
    }
}

impl From<GammaMixture> for SnrLaw {
    fn from(m: GammaMixture) -> Self {
        SnrLaw::Exponentials(m)
    }
}

/// Law of `Γ = Σ_k |h_k|² ‖s‖²/σ_k²` for independent Rayleigh gains with
/// per-sensor mean SNRs `γ_k` and a discrete signal-energy law
/// `P(‖s‖² = S_m) = p_m`.
pub fn rayleigh_gamma_mixture(linear_mean_snrs: &[f64], signal_pmf: &[(f64, f64)]) -> Result<GammaMixture> {
    if linear_mean_snrs.is_empty() || signal_pmf.is_empty() {
        return domain("need at least one sensor and one signal-energy atom");
    }
    if let Some(g) = linear_mean_snrs.iter().find(|&&g| !(g > 0.0) || !g.is_finite()) {
        return domain(format!("mean SNR {g} must be positive"));
    }
    if let Some(&(s, p)) = signal_pmf.iter().find(|&&(s, p)| !(s > 0.0) || !(0.0..=1.0).contains(&p)) {
        return domain(format!("bad signal-energy atom ({s}, {p})"));
    }
    let total: f64 = signal_pmf.iter().map(|(_, p)| p).sum();
    if (total - 1.0).abs() > 1e-10 {
        return domain(format!("signal-energy probabilities sum to {total}"));
    }
    for (i, &gi) in linear_mean_snrs.iter().enumerate() {
        for &gj in &linear_mean_snrs[i + 1..] {
            if (gi - gj).abs() <= 1e-9 * gi.max(gj) {
                return Err(Error::DuplicateRate(gi, gj));
            }
        }
    }
    let mut components = Vec::with_capacity(linear_mean_snrs.len() * signal_pmf.len());
    for &(energy, p) in signal_pmf {
        for (k, &gk) in linear_mean_snrs.iter().enumerate() {
            let product: f64 = linear_mean_snrs
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .map(|(_, &gl)| 1.0 / (1.0 - gl / gk))
                .product();
            components.push(ExponentialComponent { weight: p * product, mean: gk * energy });
        }
    }
    GammaMixture::new(components)
}

/// MI with gains and signal known only in distribution: the binary-input
/// Gaussian MI averaged over the law of `Γ`.
pub fn averaged_mi(prior: Prior, law: &SnrLaw, hermite: &QuadratureRule, laguerre: &QuadratureRule) -> Result<f64> {
    if prior.is_degenerate() {
        return Ok(0.0);
    }
    match law {
        SnrLaw::PointMass(s) => check_snr(*s)?,
        SnrLaw::Discrete(atoms) => {
            for &(s, _) in atoms {
                check_snr(s)?;
            }
        }
        SnrLaw::Exponentials(_) => {}
    }
    let h = prior.entropy();
    let d = law.expectation(laguerre, |g| deficit(prior, g.max(0.0), hermite));
    Ok((h - d).clamp(0.0, h))
}

/// [`biawgn_equivocation`] averaged over a random SNR.
pub fn averaged_equivocation(prior: Prior, law: &SnrLaw, laguerre: &QuadratureRule) -> Result<f64> {
    check_snr(law.mean())?;
    if let SnrLaw::Discrete(atoms) = law {
        for &(s, _) in atoms {
            check_snr(s)?;
        }
    }
    let v = law.expectation(laguerre, |g| biawgn_equivocation(prior, g.max(0.0)).expect("finite SNR"));
    Ok(v.clamp(0.0, prior.entropy()))
}
