//! Finite-`n` description of the memory channel.
//!
//! Each use mixes the memory mode with a fresh environment mode on a beam
//! splitter of transmissivity `μ`, then feeds that mixture as the environment
//! of a thermal attenuator (`κ ≤ 1`) or amplifier (`κ > 1`); the second
//! output port becomes the next memory. Tracking the coefficients of every
//! input and environment mode through this recursion gives the matrices
//! `A` (inputs → outputs) and `E` (environment → outputs).
//!
//! The input part of the recursion is a causal filter with transfer function
//! `(√κ − √μ x) / (1 − √(κμ) x)`, so `A = D B⁻¹` with lower bidiagonal
//! `D = T(√κ − √μ x)` and `B = T(1 − √(κμ) x)`. The transmissivities
//! `η_j⁽ⁿ⁾`, the eigenvalues of `M = A Aᵀ`, are then the generalized
//! eigenvalues of the tridiagonal pencil `(DᵀD, BᵀB)`. This avoids forming
//! `M`, whose entries grow like `(μκ)ⁿ` above threshold.

use crate::channel::{classify, ChannelKind, ChannelParams, Regime, Threshold};
use crate::error::{Error, Result};
use crate::numerics::{pencil_eigenvalues, Matrix, SymTridiagonal};

/// Matrix-size cap when `GAUSSMEM_MAX_N` is unset.
pub const DEFAULT_MAX_USES: usize = 4096;

/// Largest number of channel uses accepted by the finite-`n` routines.
///
/// Read from `GAUSSMEM_MAX_N` on every call; falls back to
/// [`DEFAULT_MAX_USES`] when the variable is unset or unparsable.
pub fn max_uses() -> usize {
    std::env::var("GAUSSMEM_MAX_N")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_MAX_USES)
}

pub(crate) fn check_uses(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("number of channel uses must be at least 1"));
    }
    let cap = max_uses();
    if n > cap {
        return Err(Error::Resource { requested: n, cap });
    }
    Ok(())
}

/// Residual of a matrix identity, both raw and scaled entrywise by
/// `max(1, magnitude)` of the terms involved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub absolute: f64,
    pub scaled: f64,
}

impl Residual {
    /// Compares `x` against `reference`, scaling by `max(1, |scale_ij|)`.
    pub fn between(x: &Matrix, reference: &Matrix, scale: &Matrix) -> Residual {
        assert_eq!((x.rows(), x.cols()), (reference.rows(), reference.cols()));
        let mut absolute: f64 = 0.0;
        let mut scaled: f64 = 0.0;
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                let d = (x[(i, j)] - reference[(i, j)]).abs();
                absolute = absolute.max(d);
                scaled = scaled.max(d / scale[(i, j)].abs().max(1.0));
            }
        }
        Residual { absolute, scaled }
    }
}

/// Output coefficients of `n` uses: `a'_j = Σ_h A_jh a_h ∓ Σ_h E_jh a^E_h`
/// (attenuator) or `+ Σ_h E_jh a^E†_h` (amplifier), with `h = 0` the
/// initial memory.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTransform {
    a: Matrix,
    e: Matrix,
    regime: Regime,
}

impl ModeTransform {
    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// `n × n`, lower triangular.
    pub fn a_matrix(&self) -> &Matrix {
        &self.a
    }

    /// `n × (n + 1)`; column 0 is the initial memory mode.
    pub fn e_matrix(&self) -> &Matrix {
        &self.e
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// `A Aᵀ`.
    pub fn output_gram(&self) -> Matrix {
        self.a.mul_transpose(&self.a)
    }

    /// `E Eᵀ`.
    pub fn noise_gram(&self) -> Matrix {
        self.e.mul_transpose(&self.e)
    }

    /// Residual of `A Aᵀ ± E Eᵀ = 1` (plus for attenuators, minus for amplifiers).
    pub fn bogoliubov_residual(&self) -> Residual {
        let aa = self.output_gram();
        let ee = self.noise_gram();
        let sign = if self.regime.kind == ChannelKind::Amplifier {
            -1.0
        } else {
            1.0
        };
        let n = self.n();
        let lhs = Matrix::from_fn(n, n, |i, j| aa[(i, j)] + sign * ee[(i, j)]);
        let abs_a = self.a.abs();
        let abs_e = self.e.abs();
        let aa_abs = abs_a.mul_transpose(&abs_a);
        let ee_abs = abs_e.mul_transpose(&abs_e);
        let scale = Matrix::from_fn(n, n, |i, j| aa_abs[(i, j)] + ee_abs[(i, j)]);
        Residual::between(&lhs, &Matrix::identity(n), &scale)
    }

    /// Residual of `A Aᵀ` against a reference such as [`closed_form_m`].
    pub fn gram_residual(&self, reference: &Matrix) -> Residual {
        Residual::between(&self.output_gram(), reference, reference)
    }
}

/// Propagates the mode coefficients through `n` uses of the channel.
pub fn build_mode_transform(params: &ChannelParams, n: usize) -> Result<ModeTransform> {
    check_uses(n)?;
    let kappa = params.kappa();
    let mu = params.mu();
    let (sqrt_mu, sqrt_mu_c) = (mu.sqrt(), (1.0 - mu).sqrt());
    let sqrt_k = kappa.sqrt();
    let amplifier = kappa > 1.0;
    let coupling = (kappa - 1.0).abs().sqrt();

    let mut a = Matrix::zeros(n, n);
    let mut e = Matrix::zeros(n, n + 1);
    // Memory coefficients: `p` over inputs (annihilation for attenuators,
    // creation for amplifiers), `q` over environment annihilation operators.
    let mut p = vec![0.0; n];
    let mut q = vec![0.0; n + 1];
    q[0] = 1.0;

    for j in 0..n {
        // memory meets fresh environment mode j + 1
        p[..j].iter_mut().for_each(|x| *x *= sqrt_mu);
        q[..=j].iter_mut().for_each(|x| *x *= sqrt_mu);
        q[j + 1] = sqrt_mu_c;

        let out_sign = if amplifier { 1.0 } else { -1.0 };
        let a_row = a.row_mut(j);
        for h in 0..j {
            a_row[h] = out_sign * coupling * p[h];
        }
        a_row[j] = sqrt_k;
        let e_row = e.row_mut(j);
        for h in 0..=j + 1 {
            e_row[h] = coupling * q[h];
        }

        // second port becomes the memory
        p[..j].iter_mut().for_each(|x| *x *= sqrt_k);
        p[j] = coupling;
        q[..=j + 1].iter_mut().for_each(|x| *x *= sqrt_k);
    }

    Ok(ModeTransform {
        a,
        e,
        regime: classify(params),
    })
}

/// `M⁽ⁿ⁾_jj' = δ_jj' + (κ_jj' − 1) √(μκ)^|j−j'|` with
/// `κ_jj' = κ + μ(κ−1)² Σ_{h=0}^{min(j,j')−2} (μκ)^h`; at `μκ = 1` the
/// equivalent form `δ_jj' + (1−μ) + (1−μ)²/μ · min(j,j')`.
pub fn closed_form_m(params: &ChannelParams, n: usize) -> Result<Matrix> {
    check_uses(n)?;
    let kappa = params.kappa();
    let mu = params.mu();
    let product = params.memory_product();

    if product == 1.0 {
        let c = (1.0 - mu) * (1.0 - mu) / mu;
        return Ok(Matrix::from_fn(n, n, |i, j| {
            let delta = if i == j { 1.0 } else { 0.0 };
            delta + (1.0 - mu) + c * (i.min(j) + 1) as f64
        }));
    }

    // kappa_diag[m - 1] = κ_{m,·} for min index m (1-based)
    let mut kappa_diag = Vec::with_capacity(n);
    let step = mu * (kappa - 1.0) * (kappa - 1.0);
    let mut acc = kappa;
    let mut power = 1.0;
    for m in 0..n {
        if m > 0 {
            acc += step * power;
            power *= product;
        }
        kappa_diag.push(acc);
    }
    let r = product.sqrt();
    Ok(Matrix::from_fn(n, n, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        let d = i.abs_diff(j) as i32;
        delta + (kappa_diag[i.min(j)] - 1.0) * r.powi(d)
    }))
}

/// The divergent eigenvalue above threshold, kept in log form because it
/// grows like `(μκ)ⁿ` and overflows `f64` for large `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Divergent {
    pub ln_value: f64,
    /// Position in the ascending eigenvalue list (always the last).
    pub index: usize,
}

impl Divergent {
    /// `exp(ln_value)`; may be `+∞`.
    pub fn value(&self) -> f64 {
        self.ln_value.exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpectrum {
    eigenvalues: Vec<f64>,
    divergent: Option<Divergent>,
}

impl FiniteSpectrum {
    /// All `n` eigenvalues, ascending; a divergent one appears last.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvalues with the divergent one removed.
    pub fn bulk(&self) -> &[f64] {
        match self.divergent {
            Some(d) => &self.eigenvalues[..d.index],
            None => &self.eigenvalues,
        }
    }

    pub fn divergent(&self) -> Option<Divergent> {
        self.divergent
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// `(DᵀD, BᵀB)` for `D = T(√κ − √μ x)`, `B = T(1 − √(κμ) x)`.
fn spectral_pencil(params: &ChannelParams, n: usize) -> (SymTridiagonal, SymTridiagonal) {
    let kappa = params.kappa();
    let mu = params.mu();
    let r2 = params.memory_product();
    let cross = -(kappa * mu).sqrt();

    let mut dd = vec![kappa + mu; n];
    dd[n - 1] = kappa;
    let mut bb = vec![1.0 + r2; n];
    bb[n - 1] = 1.0;
    let dd_off = vec![cross; n - 1];
    let bb_off = vec![-r2.sqrt(); n - 1];
    (
        SymTridiagonal { diag: dd, off: dd_off },
        SymTridiagonal { diag: bb, off: bb_off },
    )
}

/// Eigenvalues `η_j⁽ⁿ⁾` of `M⁽ⁿ⁾`, ascending. Above threshold the largest
/// is flagged divergent and obtained from `det M⁽ⁿ⁾ = κⁿ`.
pub fn finite_spectrum(params: &ChannelParams, n: usize) -> Result<FiniteSpectrum> {
    check_uses(n)?;
    let (dd, bb) = spectral_pencil(params, n);
    let above = params.regime().threshold == Threshold::Above;
    let wanted = if above { n - 1 } else { n };

    let mut eigenvalues = pencil_eigenvalues(&dd, &bb, wanted)?;
    for x in eigenvalues.iter_mut() {
        *x = x.max(0.0);
    }
    let divergent = if above {
        let ln_bulk: f64 = eigenvalues.iter().map(|x| x.ln()).sum();
        let ln_value = n as f64 * params.kappa().ln() - ln_bulk;
        eigenvalues.push(ln_value.exp());
        Some(Divergent { ln_value, index: n - 1 })
    } else {
        None
    };
    Ok(FiniteSpectrum { eigenvalues, divergent })
}

/// Covariance `N_C μ^{|i−j|/2}` of the noise added by the memory channel in
/// the additive-noise limit.
pub fn additive_noise_covariance(mu: f64, n_c: f64, n: usize) -> Result<Matrix> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::domain(format!("mu must lie in [0, 1], got {mu}")));
    }
    if !(n_c.is_finite() && n_c >= 0.0) {
        return Err(Error::domain(format!("added noise must be finite and >= 0, got {n_c}")));
    }
    check_uses(n)?;
    let s = mu.sqrt();
    Ok(Matrix::from_fn(n, n, |i, j| n_c * s.powi(i.abs_diff(j) as i32)))
}

/// Parameters `(κ, μ, N)` with `κ = 1 − N_C/(N + ½)`, the path along which
/// the attenuator approaches the additive-noise channel as `N → ∞`.
pub fn additive_limit_params(mu: f64, n_c: f64, nbar: f64) -> Result<ChannelParams> {
    if !(n_c.is_finite() && n_c >= 0.0) {
        return Err(Error::domain(format!("added noise must be finite and >= 0, got {n_c}")));
    }
    let kappa = 1.0 - n_c / (nbar + 0.5);
    if kappa < 0.0 {
        return Err(Error::domain(format!(
            "N_C = {n_c} exceeds N + 1/2 = {}; no attenuator reaches it",
            nbar + 0.5
        )));
    }
    ChannelParams::new(kappa, mu, nbar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::sym_eigenvalues;

    fn p(kappa: f64, mu: f64) -> ChannelParams {
        ChannelParams::new(kappa, mu, 0.0).unwrap()
    }

    #[test]
    fn identity_channel_passes_inputs() {
        let t = build_mode_transform(&p(1.0, 0.6), 3).unwrap();
        assert_eq!(t.a_matrix(), &Matrix::identity(3));
        assert_eq!(t.e_matrix().max_abs(), 0.0);
        assert_eq!(closed_form_m(&p(1.0, 0.3), 4).unwrap(), Matrix::identity(4));
    }

    #[test]
    fn hand_evaluated_small_cases() {
        let m = closed_form_m(&p(0.5, 0.5), 2).unwrap();
        let want = Matrix::from_rows(&[vec![0.5, -0.25], vec![-0.25, 0.625]]);
        assert!(m.max_abs_diff(&want) < 1e-15);
        let aa = build_mode_transform(&p(0.5, 0.5), 2).unwrap().output_gram();
        assert!(aa.max_abs_diff(&want) < 1e-15);

        let m = closed_form_m(&p(2.0, 0.5), 2).unwrap();
        let want = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.5]]);
        assert!(m.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn zero_kappa_shifts_inputs_into_memory() {
        let mu = 0.7;
        let t = build_mode_transform(&p(0.0, mu), 2).unwrap();
        let aa = t.output_gram();
        let want = Matrix::from_rows(&[vec![0.0, 0.0], vec![0.0, mu]]);
        assert!(aa.max_abs_diff(&want) < 1e-15);
        assert!((t.a_matrix()[(1, 0)].abs() - mu.sqrt()).abs() < 1e-15);
        assert!(closed_form_m(&p(0.0, mu), 2).unwrap().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn threshold_form_agrees_with_general_form() {
        // μκ = 1 through the dedicated formula vs. a hair off threshold
        let at = closed_form_m(&p(2.0, 0.5), 6).unwrap();
        let near = closed_form_m(&p(2.0 * (1.0 + 1e-12), 0.5), 6).unwrap();
        assert!(at.max_abs_diff(&near) < 1e-9);
        let sim = build_mode_transform(&p(2.0, 0.5), 6).unwrap();
        assert!(sim.gram_residual(&at).scaled < 1e-12);
    }

    #[test]
    fn simulator_matches_closed_form_and_bogoliubov() {
        for &kappa in &[0.0, 0.3, 0.9, 1.0, 1.5, 4.0] {
            for &mu in &[0.0, 0.2, 0.8, 1.0] {
                for n in [1, 3, 10] {
                    let params = p(kappa, mu);
                    let t = build_mode_transform(&params, n).unwrap();
                    let m = closed_form_m(&params, n).unwrap();
                    let r = t.gram_residual(&m);
                    assert!(r.scaled < 1e-12, "κ={kappa} μ={mu} n={n}: {r:?}");
                    let b = t.bogoliubov_residual();
                    assert!(b.scaled < 1e-12, "κ={kappa} μ={mu} n={n}: {b:?}");
                }
            }
        }
    }

    #[test]
    fn spectrum_matches_dense_jacobi() {
        for &(kappa, mu) in &[(0.5, 0.5), (0.9, 0.8), (0.2, 0.9), (0.0, 0.6), (1.5, 0.3), (1.1, 0.8)] {
            let params = p(kappa, mu);
            for n in [1, 2, 7, 24] {
                let fast = finite_spectrum(&params, n).unwrap();
                let dense = sym_eigenvalues(&closed_form_m(&params, n).unwrap()).unwrap();
                assert!(fast.divergent().is_none());
                for (a, b) in fast.eigenvalues().iter().zip(&dense) {
                    assert!((a - b).abs() < 1e-11, "κ={kappa} μ={mu} n={n}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn above_threshold_small_n_matches_dense() {
        let params = p(4.0, 0.5);
        for n in [1, 2, 5, 10] {
            let fast = finite_spectrum(&params, n).unwrap();
            let m = closed_form_m(&params, n).unwrap();
            let dense = sym_eigenvalues(&m).unwrap();
            let div = fast.divergent().expect("above threshold");
            assert_eq!(div.index, n - 1);
            let top = dense[n - 1];
            assert!((div.value() - top).abs() <= 1e-9 * top, "n={n}");
            // dense bulk accuracy is limited by ε‖M‖
            let tol = 1e-12 * m.max_abs();
            for (a, b) in fast.bulk().iter().zip(&dense) {
                assert!((a - b).abs() < tol.max(1e-12), "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn spectrum_examples() {
        let s = finite_spectrum(&p(1.0, 0.4), 5).unwrap();
        assert!(s.eigenvalues().iter().all(|&x| (x - 1.0).abs() < 1e-15));
        assert!(s.divergent().is_none());

        let s = finite_spectrum(&p(0.5, 0.5), 2).unwrap();
        assert!((s.eigenvalues()[0] - 0.304806).abs() < 1e-6);
        assert!((s.eigenvalues()[1] - 0.820194).abs() < 1e-6);

        let s32 = finite_spectrum(&p(4.0, 0.5), 32).unwrap();
        let s64 = finite_spectrum(&p(4.0, 0.5), 64).unwrap();
        let (d32, d64) = (s32.divergent().unwrap(), s64.divergent().unwrap());
        assert!(d64.ln_value > d32.ln_value);
    }

    #[test]
    fn regime_bounds_on_spectra() {
        for &(kappa, mu) in &[(0.3, 0.2), (0.7, 0.8), (0.9, 0.5), (0.8, 0.8)] {
            let s = finite_spectrum(&p(kappa, mu), 200).unwrap();
            assert!(s.eigenvalues().iter().all(|&x| (0.0..=1.0 + 1e-10).contains(&x)));
        }
        for &(kappa, mu) in &[(1.5, 0.2), (4.0, 0.5), (1.5, 0.8)] {
            let s = finite_spectrum(&p(kappa, mu), 200).unwrap();
            assert!(s.eigenvalues().iter().all(|&x| x >= 1.0 - 1e-10));
        }
    }

    #[test]
    fn additive_covariance_examples() {
        let c = additive_noise_covariance(0.25, 2.0, 2).unwrap();
        assert_eq!(c.to_rows(), vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert_eq!(additive_noise_covariance(0.0, 3.0, 3).unwrap().to_rows(), {
            let mut m = Matrix::identity(3);
            for i in 0..3 {
                m[(i, i)] = 3.0;
            }
            m.to_rows()
        });
        let ones = additive_noise_covariance(1.0, 1.0, 3).unwrap();
        assert!(ones.to_rows().iter().flatten().all(|&x| x == 1.0));
        assert!(additive_noise_covariance(1.5, 1.0, 3).is_err());
    }

    #[test]
    fn size_checks() {
        assert!(matches!(build_mode_transform(&p(0.5, 0.5), 0), Err(Error::Domain(_))));
        assert!(matches!(
            finite_spectrum(&p(0.5, 0.5), DEFAULT_MAX_USES.max(max_uses()) + 1),
            Err(Error::Resource { .. })
        ));
    }
}
