use crate::error::{Error, Result};

/// Below this the series `x (1 - ln x)` replaces the closed form.
const SERIES_CUTOFF: f64 = 1e-12;

/// Entropy in nats of a thermal state with mean photon number `x`:
/// `g(x) = (x + 1) ln(x + 1) - x ln x`, with `g(0) = 0`.
pub fn g(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!(
            "g requires a finite, non-negative photon number, got {x}"
        )));
    }
    Ok(g_nonneg(x))
}

/// `g` for arguments already known to be non-negative up to rounding.
///
/// Capacity integrands produce arguments like `(1 - η) N` that may come out
/// as `-1e-17`; those are clamped to zero. Infinity maps to infinity.
pub(crate) fn g_nonneg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < SERIES_CUTOFF {
        x * (1.0 - x.ln())
    } else if x.is_infinite() {
        f64::INFINITY
    } else {
        // (x+1) ln(x+1) - x ln x = ln(1+x) + x ln(1 + 1/x)
        x.ln_1p() + x * (1.0 / x).ln_1p()
    }
}
