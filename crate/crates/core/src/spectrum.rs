//! Asymptotic spectral symbol `η(z)` and its Toeplitz origin.

use std::f64::consts::TAU;

use crate::channel::{ChannelKind, ChannelParams, Threshold};
use crate::error::{Error, Result};
use crate::memory_model::{check_uses, finite_spectrum};
use crate::numerics::{integrate, Matrix, DEFAULT_QUAD_TOL};

/// Direction in which `η(z)` moves as `z` runs over `[0, 2π]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotone {
    /// Attenuators: `η` rises from `η(0)` towards `η(2π)`.
    Increasing,
    /// Amplifiers.
    Decreasing,
    /// Identity channel, `η ≡ 1`.
    Constant,
}

/// The symbol `η(z) = (κ + μ − 2√(κμ) cos(z/2)) / (1 + κμ − 2√(κμ) cos(z/2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticSpectrum {
    params: ChannelParams,
    /// `(√κ − √μ)²`
    num0: f64,
    /// `(1 − √(κμ))²`
    den0: f64,
    /// `4√(κμ)`
    weight: f64,
}

impl AsymptoticSpectrum {
    pub fn new(params: &ChannelParams) -> Self {
        let sk = params.kappa().sqrt();
        let sm = params.mu().sqrt();
        let r = (params.kappa() * params.mu()).sqrt();
        AsymptoticSpectrum {
            params: *params,
            num0: (sk - sm) * (sk - sm),
            den0: (1.0 - r) * (1.0 - r),
            weight: 4.0 * r,
        }
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    pub fn direction(&self) -> Monotone {
        match self.params.regime().kind {
            ChannelKind::Attenuator => Monotone::Increasing,
            ChannelKind::Amplifier => Monotone::Decreasing,
            ChannelKind::Identity => Monotone::Constant,
        }
    }

    /// `η(z)` with the range and singularity checks.
    pub fn eval(&self, z: f64) -> Result<f64> {
        if !(0.0..=TAU).contains(&z) {
            return Err(Error::domain(format!("phase z must lie in [0, 2π], got {z}")));
        }
        let v = self.eta(z);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Singular { z })
        }
    }

    /// `η(z)` without checks. Uses `1 − cos(z/2) = 2 sin²(z/4)` so that
    /// `η(0)` vanishes exactly when `κ = μ`.
    pub(crate) fn eta(&self, z: f64) -> f64 {
        let s = (0.25 * z).sin();
        let bump = self.weight * s * s;
        (self.num0 + bump) / (self.den0 + bump)
    }
}

/// Evaluates the symbol at phase `z ∈ [0, 2π]`.
pub fn eta_of_z(params: &ChannelParams, z: f64) -> Result<f64> {
    AsymptoticSpectrum::new(params).eval(z)
}

/// Parameters with the same symbol: `(κ, μ) → (μ, κ)` for attenuators and
/// `(κ, μ) → (1/μ, 1/κ)` for amplifiers (which swaps the threshold side).
pub fn dual_params(params: &ChannelParams) -> Result<ChannelParams> {
    let (kappa, mu) = (params.kappa(), params.mu());
    if kappa <= 1.0 {
        ChannelParams::new(mu, kappa, params.nbar())
    } else {
        if mu == 0.0 {
            return Err(Error::domain("amplifier dual needs mu > 0"));
        }
        ChannelParams::new(1.0 / mu, 1.0 / kappa, params.nbar())
    }
}

/// Result of comparing the finite-`n` spectral mean with its limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SzegoReport {
    /// Mean of `f` over the eigenvalues (divergent one excluded).
    pub discrete_mean: f64,
    /// `∫₀^{2π} f(η(z)) dz / 2π`.
    pub integral: f64,
    pub gap: f64,
}

/// Compares `(1/n) Σ f(η_j⁽ⁿ⁾)` with `∫ f(η(z)) dz/2π`.
pub fn szego_check<F: Fn(f64) -> f64>(params: &ChannelParams, f: F, n: usize) -> Result<SzegoReport> {
    params.ensure_off_threshold()?;
    let spec = finite_spectrum(params, n)?;
    let bulk = spec.bulk();
    if bulk.is_empty() {
        return Err(Error::domain("no non-divergent eigenvalues at n = 1 above threshold"));
    }
    let discrete_mean = bulk.iter().map(|&x| f(x)).sum::<f64>() / bulk.len() as f64;
    let symbol = AsymptoticSpectrum::new(params);
    let quad = integrate(|z| f(symbol.eta(z)), 0.0, TAU, DEFAULT_QUAD_TOL)?;
    let integral = quad.value / TAU;
    Ok(SzegoReport {
        discrete_mean,
        integral,
        gap: (discrete_mean - integral).abs(),
    })
}

/// `n × n` truncation of the Toeplitz matrix whose symbol is `η(z)`:
/// `M⁽∞⁾` below threshold, `ΔM⁽∞⁾` above.
pub fn toeplitz_truncation(params: &ChannelParams, n: usize) -> Result<Matrix> {
    check_uses(n)?;
    let (kappa, mu) = (params.kappa(), params.mu());
    let product = params.memory_product();
    let (coef, ratio) = match params.regime().threshold {
        Threshold::At => {
            return Err(Error::AtThreshold { kappa, mu });
        }
        Threshold::Below => (-(1.0 - mu) * (1.0 - kappa) / (1.0 - product), product.sqrt()),
        Threshold::Above => ((1.0 - mu) * (kappa - 1.0) / (product - 1.0), 1.0 / product.sqrt()),
    };
    Ok(Matrix::from_fn(n, n, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta + coef * ratio.powi(i.abs_diff(j) as i32)
    }))
}

/// Largest distance between the sorted `eigenvalues` and the symbol sampled
/// at the midpoint quantiles `z_j = 2π(j − ½)/n`, also sorted.
pub fn quantile_max_gap(params: &ChannelParams, eigenvalues: &[f64]) -> f64 {
    let n = eigenvalues.len();
    let symbol = AsymptoticSpectrum::new(params);
    let mut samples: Vec<f64> = (0..n).map(|j| symbol.eta(TAU * (j as f64 + 0.5) / n as f64)).collect();
    samples.sort_by(f64::total_cmp);
    let mut sorted = eigenvalues.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.iter().zip(&samples).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}
