//! Memoryless phase-insensitive channels and the parameter triple of the
//! memory channel.

use crate::error::{Error, Result};
use crate::numerics::g_nonneg;

/// Gain/transmissivity `κ`, memory transmissivity `μ` and environment mean
/// photon number `N` of a thermal memory channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    kappa: f64,
    mu: f64,
    nbar: f64,
}

impl ChannelParams {
    pub fn new(kappa: f64, mu: f64, nbar: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::domain(format!("kappa must be finite and >= 0, got {kappa}")));
        }
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::domain(format!("mu must lie in [0, 1], got {mu}")));
        }
        if !(nbar.is_finite() && nbar >= 0.0) {
            return Err(Error::domain(format!("nbar must be finite and >= 0, got {nbar}")));
        }
        Ok(ChannelParams { kappa, mu, nbar })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        ChannelParams::new(kappa, self.mu, self.nbar)
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        ChannelParams::new(self.kappa, mu, self.nbar)
    }

    pub fn with_nbar(&self, nbar: f64) -> Result<Self> {
        ChannelParams::new(self.kappa, self.mu, nbar)
    }

    /// `μκ`, whose position relative to 1 decides the threshold class.
    pub fn memory_product(&self) -> f64 {
        self.mu * self.kappa
    }

    pub fn regime(&self) -> Regime {
        classify(self)
    }

    pub(crate) fn ensure_off_threshold(&self) -> Result<()> {
        if self.regime().threshold == Threshold::At {
            Err(Error::AtThreshold {
                kappa: self.kappa,
                mu: self.mu,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Attenuator,
    Amplifier,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Threshold {
    Below,
    At,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Regime {
    pub kind: ChannelKind,
    pub threshold: Threshold,
}

/// Exact comparisons: `κ = 1` is the identity, `μκ = 1` the threshold.
pub fn classify(params: &ChannelParams) -> Regime {
    let kind = if params.kappa == 1.0 {
        ChannelKind::Identity
    } else if params.kappa < 1.0 {
        ChannelKind::Attenuator
    } else {
        ChannelKind::Amplifier
    };
    let product = params.memory_product();
    let threshold = if product < 1.0 {
        Threshold::Below
    } else if product == 1.0 {
        Threshold::At
    } else {
        Threshold::Above
    };
    Regime { kind, threshold }
}

/// Noise photons injected by a single-mode channel of transmissivity or
/// gain `eta` in an environment with `nbar` thermal photons.
pub(crate) fn noise_floor(eta: f64, nbar: f64) -> f64 {
    if eta <= 1.0 {
        (1.0 - eta) * nbar
    } else {
        (eta - 1.0) * (nbar + 1.0)
    }
}

/// `g[η n + floor] - g[floor]` without argument checks.
pub(crate) fn mode_capacity(eta: f64, nbar: f64, photons: f64) -> f64 {
    if eta == 1.0 {
        return g_nonneg(photons);
    }
    let floor = noise_floor(eta, nbar);
    (g_nonneg(eta * photons + floor) - g_nonneg(floor)).max(0.0)
}

/// Energy-constrained classical capacity (nats per use) of a memoryless
/// thermal attenuator (`eta ≤ 1`) or amplifier (`eta > 1`).
pub fn memoryless_capacity(eta: f64, nbar: f64, energy: f64) -> Result<f64> {
    for (name, v) in [("eta", eta), ("nbar", nbar), ("energy", energy)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::domain(format!("{name} must be finite and >= 0, got {v}")));
        }
    }
    Ok(mode_capacity(eta, nbar, energy))
}

/// Transmissivity of two channels in series sharing one thermal environment.
pub fn compose(eta1: f64, eta2: f64) -> Result<f64> {
    if !(eta1.is_finite() && eta1 >= 0.0 && eta2.is_finite() && eta2 >= 0.0) {
        return Err(Error::domain(format!(
            "transmissivities must be finite and >= 0, got {eta1} and {eta2}"
        )));
    }
    Ok(eta1 * eta2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::g;

    #[test]
    fn params_validation() {
        assert!(ChannelParams::new(-0.1, 0.5, 0.0).is_err());
        assert!(ChannelParams::new(0.5, 1.1, 0.0).is_err());
        assert!(ChannelParams::new(0.5, 0.5, -1.0).is_err());
        assert!(ChannelParams::new(f64::INFINITY, 0.5, 0.0).is_err());
        assert!(ChannelParams::new(0.5, f64::NAN, 0.0).is_err());
        let p = ChannelParams::new(3.0, 1.0, 2.0).unwrap();
        assert_eq!((p.kappa(), p.mu(), p.nbar()), (3.0, 1.0, 2.0));
    }

    #[test]
    fn classification() {
        let r = classify(&ChannelParams::new(0.9, 0.8, 0.0).unwrap());
        assert_eq!(
            r,
            Regime {
                kind: ChannelKind::Attenuator,
                threshold: Threshold::Below
            }
        );
        let r = classify(&ChannelParams::new(4.0, 0.5, 0.0).unwrap());
        assert_eq!(
            r,
            Regime {
                kind: ChannelKind::Amplifier,
                threshold: Threshold::Above
            }
        );
        let r = classify(&ChannelParams::new(2.0, 0.5, 0.0).unwrap());
        assert_eq!(
            r,
            Regime {
                kind: ChannelKind::Amplifier,
                threshold: Threshold::At
            }
        );
        let r = classify(&ChannelParams::new(1.0, 0.3, 0.0).unwrap());
        assert_eq!(r.kind, ChannelKind::Identity);
        assert_eq!(r.threshold, Threshold::Below);
        let r = classify(&ChannelParams::new(1.0, 1.0, 0.0).unwrap());
        assert_eq!(r.threshold, Threshold::At);
    }

    #[test]
    fn memoryless_examples() {
        let g8 = g(8.0).unwrap();
        for nbar in [0.0, 1.0, 7.5] {
            assert_eq!(memoryless_capacity(1.0, nbar, 8.0).unwrap(), g8);
        }
        let c = memoryless_capacity(0.5, 1.0, 8.0).unwrap();
        let oracle = g(4.5).unwrap() - g(0.5).unwrap();
        assert!((c - oracle).abs() < 1e-14);
        assert!((c - 1.652995).abs() < 1e-6);
        assert_eq!(memoryless_capacity(0.5, 0.0, 0.0).unwrap(), 0.0);
        let amp = memoryless_capacity(2.0, 0.5, 4.0).unwrap();
        assert!((amp - (g(9.5).unwrap() - g(1.5).unwrap())).abs() < 1e-14);
    }

    #[test]
    fn memoryless_rejects_negative() {
        assert!(memoryless_capacity(-0.1, 0.0, 1.0).is_err());
        assert!(memoryless_capacity(0.5, -1.0, 1.0).is_err());
        assert!(memoryless_capacity(0.5, 0.0, -1.0).is_err());
    }

    #[test]
    fn continuous_at_unit_eta() {
        let below = memoryless_capacity(1.0 - 1e-12, 3.0, 8.0).unwrap();
        let above = memoryless_capacity(1.0 + 1e-12, 3.0, 8.0).unwrap();
        let at = memoryless_capacity(1.0, 3.0, 8.0).unwrap();
        assert!((below - at).abs() < 1e-9 && (above - at).abs() < 1e-9);
    }

    #[test]
    fn composition() {
        assert_eq!(compose(0.5, 0.5).unwrap(), 0.25);
        assert_eq!(compose(1.0, 0.37).unwrap(), 0.37);
        assert_eq!(compose(2.0, 3.0).unwrap(), 6.0);
        assert!(compose(-1.0, 1.0).is_err());
    }

    #[test]
    fn monotone_in_nbar_and_energy() {
        for eta in [0.0, 0.2, 0.7, 1.0, 1.5, 4.0] {
            let mut prev = f64::INFINITY;
            for k in 0..40 {
                let c = memoryless_capacity(eta, 0.25 * k as f64, 8.0).unwrap();
                assert!(c <= prev + 1e-14, "eta={eta}");
                prev = c;
            }
            let mut prev = -1.0;
            for k in 0..40 {
                let c = memoryless_capacity(eta, 1.0, 0.5 * k as f64).unwrap();
                assert!(c >= prev - 1e-14, "eta={eta}");
                prev = c;
            }
        }
    }

    #[test]
    fn composition_never_helps_attenuators() {
        let grid = [0.0, 0.1, 0.3, 0.5, 0.8, 0.95, 1.0];
        for &a in &grid {
            for &b in &grid {
                for nbar in [0.0, 0.5, 2.0] {
                    let ab = compose(a, b).unwrap();
                    let cab = memoryless_capacity(ab, nbar, 8.0).unwrap();
                    let ca = memoryless_capacity(a, nbar, 8.0).unwrap();
                    let cb = memoryless_capacity(b, nbar, 8.0).unwrap();
                    assert!(cab <= ca.min(cb) + 1e-13, "a={a} b={b} N={nbar}");
                }
            }
        }
    }
}
