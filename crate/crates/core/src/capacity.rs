//! Asymptotic classical capacity, its trivial cases, finite-`P` bounds and
//! the additive-noise limit.

use std::f64::consts::TAU;

use crate::channel::{mode_capacity, ChannelKind, ChannelParams};
use crate::error::{Error, Result};
use crate::memory_model::finite_spectrum;
use crate::numerics::{g, g_nonneg, integrate, DEFAULT_QUAD_TOL};
use crate::waterfill::{mode_photons, optimal_distribution, solve_multiplier, EnergyDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CapacityMethod {
    Integral,
    SpecialCase,
    AdditiveLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult {
    pub nats_per_use: f64,
    pub quadrature_error: f64,
    pub method: CapacityMethod,
    pub distribution: Option<EnergyDistribution>,
}

fn check_energy(energy: f64) -> Result<()> {
    if energy.is_finite() && energy >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("energy must be finite and >= 0, got {energy}")))
    }
}

/// Closed forms for `κ = 1`, `μ = 1`, `μ = 0` and `κ = 0` (exact equality).
pub fn special_case_capacity(params: &ChannelParams, energy: f64) -> Option<f64> {
    if check_energy(energy).is_err() {
        return None;
    }
    let (kappa, mu, nbar) = (params.kappa(), params.mu(), params.nbar());
    if kappa == 1.0 || mu == 1.0 {
        Some(g_nonneg(energy))
    } else if mu == 0.0 {
        Some(mode_capacity(kappa, nbar, energy))
    } else if kappa == 0.0 {
        Some(mode_capacity(mu, nbar, energy))
    } else {
        None
    }
}

/// Limit `κ → ∞` at fixed `μ > 0`, where `η(z) → 1/μ` for every `z`.
pub fn amplifier_limit(mu: f64, nbar: f64, energy: f64) -> Result<f64> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::domain(format!("mu must lie in (0, 1], got {mu}")));
    }
    if !(nbar.is_finite() && nbar >= 0.0) {
        return Err(Error::domain(format!("nbar must be finite and >= 0, got {nbar}")));
    }
    check_energy(energy)?;
    let floor = (1.0 - mu) / mu * (nbar + 1.0);
    Ok((g_nonneg(energy / mu + floor) - g_nonneg(floor)).max(0.0))
}

/// Capacity as the quadrature `∫ C(η(z), N(z)) dz/2π`, with no special-case
/// shortcut.
pub fn integral_capacity(params: &ChannelParams, energy: f64) -> Result<CapacityResult> {
    integral_capacity_with_tol(params, energy, DEFAULT_QUAD_TOL)
}

/// [`integral_capacity`] with an explicit absolute quadrature tolerance.
pub fn integral_capacity_with_tol(params: &ChannelParams, energy: f64, tol: f64) -> Result<CapacityResult> {
    params.ensure_off_threshold()?;
    check_energy(energy)?;
    if energy == 0.0 {
        return Ok(CapacityResult {
            nats_per_use: 0.0,
            quadrature_error: 0.0,
            method: CapacityMethod::Integral,
            distribution: None,
        });
    }
    let dist = optimal_distribution(params, energy)?;
    let nbar = params.nbar();
    let (value, error) = if dist.z0 >= TAU {
        (0.0, 0.0)
    } else {
        let q = integrate(
            |z| mode_capacity(dist.eta(z), nbar, dist.n_of_z(z)),
            dist.z0,
            TAU,
            tol * TAU,
        )?;
        (q.value / TAU, q.error_estimate / TAU)
    };
    Ok(CapacityResult {
        nats_per_use: value.clamp(0.0, g_nonneg(energy)),
        quadrature_error: error,
        method: CapacityMethod::Integral,
        distribution: Some(dist),
    })
}

/// Asymptotic capacity in nats per use, using a closed form when one applies.
pub fn asymptotic_capacity(params: &ChannelParams, energy: f64) -> Result<CapacityResult> {
    asymptotic_capacity_with_tol(params, energy, DEFAULT_QUAD_TOL)
}

/// [`asymptotic_capacity`] with an explicit absolute quadrature tolerance.
pub fn asymptotic_capacity_with_tol(params: &ChannelParams, energy: f64, tol: f64) -> Result<CapacityResult> {
    check_energy(energy)?;
    if let Some(c) = special_case_capacity(params, energy) {
        return Ok(CapacityResult {
            nats_per_use: c,
            quadrature_error: 0.0,
            method: CapacityMethod::SpecialCase,
            distribution: None,
        });
    }
    integral_capacity_with_tol(params, energy, tol)
}

/// Empirical lower and upper capacity bounds from `P` spectral groups.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsPair {
    pub lower: f64,
    pub upper: f64,
    pub p_modes: usize,
    pub ell_list: Vec<usize>,
}

impl BoundsPair {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Water-filled mean capacity of `P` modes with transmissivities `etas`.
pub(crate) fn discrete_capacity(etas: &[f64], nbar: f64, energy: f64) -> Result<f64> {
    if energy == 0.0 || etas.iter().all(|&e| e == 0.0) {
        return Ok(0.0);
    }
    let count = etas.len() as f64;
    let spent = |lambda: f64| {
        etas.iter()
            .map(|&e| mode_photons(e, nbar, lambda).max(0.0))
            .sum::<f64>()
            / count
    };
    let lambda = solve_multiplier(|l| Ok(spent(l)), energy)?;
    Ok(etas
        .iter()
        .map(|&e| mode_capacity(e, nbar, mode_photons(e, nbar, lambda).max(0.0)))
        .sum::<f64>()
        / count)
}

/// Sandwich bounds: for each `ℓ`, the bulk spectrum at `n = ℓP` is sorted
/// and cut into `P` consecutive groups of `ℓ`; per group the smallest and
/// largest eigenvalue over all `ℓ` feed two discrete water-filling problems.
///
/// Above threshold the divergent eigenvalue is dropped, so the last group has
/// `ℓ − 1` members.
pub fn finite_p_bounds(params: &ChannelParams, energy: f64, p_modes: usize, ell_list: &[usize]) -> Result<BoundsPair> {
    params.ensure_off_threshold()?;
    check_energy(energy)?;
    if p_modes == 0 {
        return Err(Error::domain("P must be at least 1"));
    }
    if ell_list.is_empty() || ell_list.contains(&0) {
        return Err(Error::domain("ell_list must be non-empty with entries >= 1"));
    }
    let mut group_min = vec![f64::INFINITY; p_modes];
    let mut group_max = vec![f64::NEG_INFINITY; p_modes];
    for &ell in ell_list {
        let n = ell.checked_mul(p_modes).ok_or(Error::Resource {
            requested: usize::MAX,
            cap: crate::memory_model::max_uses(),
        })?;
        let spec = finite_spectrum(params, n)?;
        for (p, group) in spec.bulk().chunks(ell).enumerate() {
            for &x in group {
                group_min[p] = group_min[p].min(x);
                group_max[p] = group_max[p].max(x);
            }
        }
    }
    if group_min.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain(
            "some group received no eigenvalues; use ell >= 2 above threshold",
        ));
    }
    let nbar = params.nbar();
    let with_min = discrete_capacity(&group_min, nbar, energy)?;
    let with_max = discrete_capacity(&group_max, nbar, energy)?;
    let (lower, upper) = match params.regime().kind {
        ChannelKind::Amplifier => (with_max, with_min),
        _ => (with_min, with_max),
    };
    Ok(BoundsPair {
        lower,
        upper,
        p_modes,
        ell_list: ell_list.to_vec(),
    })
}

/// Spectral density `(1 − μ)/(1 + μ − 2√μ cos(z/2))` of correlated additive
/// noise; it integrates to 1 over `dz/2π`.
pub fn additive_noise_density(mu: f64, z: f64) -> f64 {
    let r = mu.sqrt();
    let s = (0.25 * z).sin();
    (1.0 - mu) / ((1.0 - r) * (1.0 - r) + 4.0 * r * s * s)
}

/// Smallest energy for which the water-filled additive-noise solution needs
/// no clipping: `2 N_C √μ / (1 − √μ)`.
pub fn additive_energy_threshold(mu: f64, n_c: f64) -> f64 {
    2.0 * n_c * mu.sqrt() / (1.0 - mu.sqrt())
}

/// Capacity of the additive correlated-noise channel with noise `N_C` and
/// correlation `μ`, valid when no mode needs clipping.
pub fn additive_capacity(mu: f64, n_c: f64, energy: f64) -> Result<CapacityResult> {
    if !(0.0..1.0).contains(&mu) {
        return Err(Error::domain(format!("mu must lie in [0, 1), got {mu}")));
    }
    if !(n_c.is_finite() && n_c >= 0.0) {
        return Err(Error::domain(format!("noise N_C must be finite and >= 0, got {n_c}")));
    }
    check_energy(energy)?;
    let threshold = additive_energy_threshold(mu, n_c);
    if energy < threshold {
        return Err(Error::UnsupportedRegime(format!(
            "energy {energy} is below {threshold}, where the additive-noise solution needs clipping"
        )));
    }
    let q = integrate(
        |z| g_nonneg(n_c * additive_noise_density(mu, z)),
        0.0,
        TAU,
        DEFAULT_QUAD_TOL * TAU,
    )?;
    Ok(CapacityResult {
        nats_per_use: (g_nonneg(energy + n_c) - q.value / TAU).max(0.0),
        quadrature_error: q.error_estimate / TAU,
        method: CapacityMethod::AdditiveLimit,
        distribution: None,
    })
}

/// Multiplier of the additive-noise solution: `1/(e^λ − 1) = N_C + E`.
pub fn additive_lambda(n_c: f64, energy: f64) -> Result<f64> {
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::domain(format!("energy must be finite and > 0, got {energy}")));
    }
    if !(n_c.is_finite() && n_c >= 0.0) {
        return Err(Error::domain(format!("noise N_C must be finite and >= 0, got {n_c}")));
    }
    Ok((1.0 / (n_c + energy)).ln_1p())
}

/// `g(E)`, the identity-channel capacity that bounds every other.
pub fn identity_capacity(energy: f64) -> Result<f64> {
    g(energy)
}
