//! Optimal input energy distribution over the normal modes.
//!
//! For a multiplier `λ` the stationary photon number of a mode with
//! transmissivity (or gain) `η` is
//! `Ñ = (1/η)(1/(e^{λ/η} − 1) − floor(η))`, and the optimal distribution is
//! its positive part. `Ñ` is increasing in `z` for both attenuators and
//! amplifiers, so the modes switched off form an interval `[0, z0)`.

use std::f64::consts::TAU;

use crate::channel::{noise_floor, ChannelKind, ChannelParams};
use crate::error::{Error, Result};
use crate::numerics::{find_root, integrate, Bracket};
use crate::spectrum::AsymptoticSpectrum;

/// Width below which the cutoff bisection stops (radians).
pub const Z0_TOL: f64 = 1e-12;

/// Relative energy residual accepted from [`solve_lambda`].
pub const ENERGY_REL_TOL: f64 = 1e-8;

/// Tolerance on the critical temperature (photons).
pub const N_CRIT_TOL: f64 = 1e-6;

/// Above this `λ/η` the Bose term `1/(e^{λ/η} − 1)` is taken as 0.
const EXP_CUTOFF: f64 = 700.0;

const BISECTION_STEPS: usize = 400;

/// Stationary photon number of one mode; `−∞` for a mode with `η = 0`.
pub(crate) fn mode_photons(eta: f64, nbar: f64, lambda: f64) -> f64 {
    if eta == 0.0 {
        return f64::NEG_INFINITY;
    }
    let x = lambda / eta;
    let bose = if x > EXP_CUTOFF { 0.0 } else { 1.0 / x.exp_m1() };
    (bose - noise_floor(eta, nbar)) / eta
}

/// `Ñ(z)` at multiplier `lambda`, before clipping.
pub fn unconstrained_n(params: &ChannelParams, z: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!(
            "multiplier must be finite and > 0, got {lambda}"
        )));
    }
    let eta = AsymptoticSpectrum::new(params).eval(z)?;
    Ok(mode_photons(eta, params.nbar(), lambda))
}

/// Smallest `z` with `Ñ(z) > 0`, up to [`Z0_TOL`]; `2π` if there is none.
fn cutoff(symbol: &AsymptoticSpectrum, nbar: f64, lambda: f64) -> f64 {
    let positive = |z: f64| mode_photons(symbol.eta(z), nbar, lambda) > 0.0;
    if positive(0.0) {
        return 0.0;
    }
    if !positive(TAU) {
        return TAU;
    }
    let (mut lo, mut hi) = (0.0, TAU);
    while hi - lo > Z0_TOL {
        let mid = 0.5 * (lo + hi);
        if positive(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `∫_{z0}^{2π} max(Ñ, 0) dz / 2π` with its quadrature error.
fn clipped_energy(symbol: &AsymptoticSpectrum, nbar: f64, lambda: f64, z0: f64, tol: f64) -> Result<(f64, f64)> {
    if z0 >= TAU {
        return Ok((0.0, 0.0));
    }
    let q = integrate(
        |z| mode_photons(symbol.eta(z), nbar, lambda).max(0.0),
        z0,
        TAU,
        tol * TAU,
    )?;
    Ok((q.value / TAU, q.error_estimate / TAU))
}

/// Integral to a relative tolerance: a coarse pass fixes the scale.
fn clipped_energy_rel(symbol: &AsymptoticSpectrum, nbar: f64, lambda: f64, z0: f64, rel: f64) -> Result<(f64, f64)> {
    let (rough, _) = clipped_energy(symbol, nbar, lambda, z0, 1e-6)?;
    if rough == 0.0 {
        return Ok((0.0, 0.0));
    }
    clipped_energy(symbol, nbar, lambda, z0, rel * rough)
}

/// Mean photon number spent by the clipped distribution at multiplier `lambda`.
///
/// Strictly decreasing in `lambda` wherever it is positive.
pub fn constrained_energy(params: &ChannelParams, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!(
            "multiplier must be finite and > 0, got {lambda}"
        )));
    }
    params.ensure_off_threshold()?;
    let symbol = AsymptoticSpectrum::new(params);
    let z0 = cutoff(&symbol, params.nbar(), lambda);
    Ok(clipped_energy_rel(&symbol, params.nbar(), lambda, z0, 1e-12)?.0)
}

/// Finds `λ` with `energy_at(λ) = target` for a decreasing `energy_at`.
///
/// The bracket grows geometrically from 1 in both directions; the search
/// then bisects in `ln λ` while the bracket spans more than a factor 4, and
/// runs until the bracket cannot shrink further.
pub(crate) fn solve_multiplier<F>(mut energy_at: F, target: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(target > 0.0 && target.is_finite()) {
        return Err(Error::domain(format!("energy must be finite and > 0, got {target}")));
    }
    let mut lo = 1.0;
    let mut e_lo = energy_at(lo)?;
    while e_lo <= target {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::Solver(format!(
                "no multiplier reaches energy {target}: energy({lo}) = {e_lo}"
            )));
        }
        e_lo = energy_at(lo)?;
    }
    let mut hi = lo.max(1.0);
    let mut e_hi = energy_at(hi)?;
    while e_hi >= target {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Solver(format!(
                "energy stays above {target} for all multipliers: energy({hi}) = {e_hi}"
            )));
        }
        e_hi = energy_at(hi)?;
    }

    let mut best = if e_lo - target < target - e_hi {
        (lo, e_lo)
    } else {
        (hi, e_hi)
    };
    for _ in 0..BISECTION_STEPS {
        let mid = if hi > 4.0 * lo {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        let e = energy_at(mid)?;
        if (e - target).abs() < (best.1 - target).abs() {
            best = (mid, e);
        }
        if e == target {
            break;
        }
        if e > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let residual = (best.1 - target).abs() / target;
    if residual > ENERGY_REL_TOL {
        return Err(Error::Solver(format!(
            "multiplier search stalled at λ = {} with relative energy residual {residual:e} (bracket [{lo}, {hi}])",
            best.0
        )));
    }
    Ok(best.0)
}

/// Multiplier `λ` meeting the mean energy constraint `E`.
pub fn solve_lambda(params: &ChannelParams, energy: f64) -> Result<f64> {
    Ok(optimal_distribution(params, energy)?.lambda)
}

/// Water-filled distribution `N(z) = max(Ñ(z), 0)` with mean energy `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyDistribution {
    pub lambda: f64,
    /// Start of the used band; 0 when every mode carries photons.
    pub z0: f64,
    /// Achieved `∫ N(z) dz/2π`.
    pub energy: f64,
    pub params: ChannelParams,
    /// Quadrature error of `energy`.
    pub quadrature_error: f64,
    symbol: AsymptoticSpectrum,
}

impl EnergyDistribution {
    /// `N(z)`, never negative.
    pub fn n_of_z(&self, z: f64) -> f64 {
        self.unconstrained(z).max(0.0)
    }

    /// `Ñ(z)` at the solved multiplier.
    pub fn unconstrained(&self, z: f64) -> f64 {
        mode_photons(self.symbol.eta(z), self.params.nbar(), self.lambda)
    }

    /// `η(z)` of the underlying channel.
    pub fn eta(&self, z: f64) -> f64 {
        self.symbol.eta(z)
    }

    /// `z0 / 2π`, the fraction of modes left empty.
    pub fn z0_fraction(&self) -> f64 {
        self.z0 / TAU
    }
}

/// Solves the water-filling problem for mean energy `E > 0`.
pub fn optimal_distribution(params: &ChannelParams, energy: f64) -> Result<EnergyDistribution> {
    params.ensure_off_threshold()?;
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::domain(format!("energy must be finite and > 0, got {energy}")));
    }
    let symbol = AsymptoticSpectrum::new(params);
    let nbar = params.nbar();
    let tol = 1e-12 * energy;
    let lambda = solve_multiplier(
        |lambda| {
            let z0 = cutoff(&symbol, nbar, lambda);
            Ok(clipped_energy(&symbol, nbar, lambda, z0, tol)?.0)
        },
        energy,
    )?;
    let z0 = cutoff(&symbol, nbar, lambda);
    let (achieved, quadrature_error) = clipped_energy(&symbol, nbar, lambda, z0, tol)?;
    if z0 > 0.0 && nbar == 0.0 && params.regime().kind == ChannelKind::Amplifier {
        log::debug!(
            "positive part active at zero temperature: kappa = {}, mu = {}, E = {energy}, z0 = {z0}",
            params.kappa(),
            params.mu()
        );
    }
    Ok(EnergyDistribution {
        lambda,
        z0,
        energy: achieved,
        params: *params,
        quadrature_error,
        symbol,
    })
}

/// Smallest mean energy for which every mode carries photons (`z0 = 0`).
///
/// Infinite when `κ = μ` and `N > 0`, since then `η(0) = 0` can never be
/// filled.
pub fn critical_energy(params: &ChannelParams) -> Result<f64> {
    params.ensure_off_threshold()?;
    let symbol = AsymptoticSpectrum::new(params);
    let nbar = params.nbar();
    let eta0 = symbol.eta(0.0);
    if eta0 == 0.0 {
        return Ok(if nbar > 0.0 { f64::INFINITY } else { 0.0 });
    }
    let floor0 = noise_floor(eta0, nbar);
    if floor0 == 0.0 {
        return Ok(0.0);
    }
    let lambda = eta0 * (1.0 / floor0).ln_1p();
    Ok(clipped_energy_rel(&symbol, nbar, lambda, 0.0, 1e-11)?.0)
}

/// Temperature `N` at which the band `[0, z0)` starts to open for mean
/// energy `E`: below it `z0 = 0`, above it `z0 > 0`.
///
/// Returns 0 when `κ = μ` or when an amplifier already clips at `N = 0`, and
/// `+∞` when the spectrum is flat (`κ ∈ {0, 1}` or `μ ∈ {0, 1}`).
pub fn critical_temperature(kappa: f64, mu: f64, energy: f64) -> Result<f64> {
    let base = ChannelParams::new(kappa, mu, 0.0)?;
    base.ensure_off_threshold()?;
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::domain(format!("energy must be finite and > 0, got {energy}")));
    }
    if kappa == mu {
        return Ok(0.0);
    }
    if kappa == 0.0 || kappa == 1.0 || mu == 0.0 || mu == 1.0 {
        return Ok(f64::INFINITY);
    }
    let excess = |nbar: f64| -> Result<f64> { Ok(critical_energy(&base.with_nbar(nbar)?)? - energy) };
    if excess(0.0)? >= 0.0 {
        log::info!("kappa = {kappa}, mu = {mu}: positive part already active at N = 0 for E = {energy}");
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while excess(hi)? < 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Solver(format!(
                "critical energy stays below {energy} up to N = {hi}"
            )));
        }
    }
    find_root(
        |nbar| excess(nbar).unwrap_or(f64::NAN),
        Bracket::new(0.0, hi)?,
        N_CRIT_TOL,
    )
}
