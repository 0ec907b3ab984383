//! Adaptive composite Simpson quadrature.
//!
//! Each panel is bisected until the two-halves estimate agrees with the
//! whole-panel estimate; accepted panels carry the Richardson correction
//! `(S2 - S1) / 15`, which makes the rule exact for quintics. Integrands with
//! a kink are handled by passing the kink as a split point.

use crate::error::{Error, Result};

/// Evaluation budget shared by all panels of one call.
pub const MAX_EVALUATIONS: usize = 4_000_000;

const MAX_DEPTH: u32 = 50;
const INITIAL_PANELS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Sum of the per-panel error estimates; never negative.
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

struct Evaluator<F> {
    f: F,
    evaluations: usize,
}

impl<F: Fn(f64) -> f64> Evaluator<F> {
    fn eval(&mut self, x: f64) -> Result<f64> {
        self.evaluations += 1;
        let y = (self.f)(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::domain(format!("integrand is not finite at x = {x} (got {y})")))
        }
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    integrate_split(f, a, b, &[], tol)
}

/// Like [`integrate`], but never places a panel across any of `splits`.
///
/// Split points outside the open interval `(a, b)` are ignored.
pub fn integrate_split<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, splits: &[f64], tol: f64) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::domain(format!("integration interval [{a}, {b}] is invalid")));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::domain(format!(
            "quadrature tolerance must be positive, got {tol}"
        )));
    }

    let mut breaks = vec![a];
    let mut inner: Vec<f64> = splits.iter().copied().filter(|&s| s > a && s < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    breaks.extend(inner);
    breaks.push(b);

    let mut ev = Evaluator { f, evaluations: 0 };
    let width = b - a;
    let mut stack = Vec::with_capacity(64);
    for seg in breaks.windows(2) {
        let h = (seg[1] - seg[0]) / INITIAL_PANELS as f64;
        let mut fa = ev.eval(seg[0])?;
        for i in 0..INITIAL_PANELS {
            let pa = seg[0] + h * i as f64;
            let pb = if i + 1 == INITIAL_PANELS { seg[1] } else { pa + h };
            let fm = ev.eval(0.5 * (pa + pb))?;
            let fb = ev.eval(pb)?;
            stack.push(Panel {
                a: pa,
                b: pb,
                fa,
                fm,
                fb,
                whole: simpson(pa, pb, fa, fm, fb),
                tol: tol * (pb - pa) / width,
                depth: 0,
            });
            fa = fb;
        }
    }

    let mut value = 0.0;
    let mut error_estimate = 0.0;
    while let Some(p) = stack.pop() {
        if ev.evaluations >= MAX_EVALUATIONS {
            let pending: f64 = stack.iter().map(|q| q.whole).sum::<f64>() + p.whole;
            return Err(Error::Quadrature {
                estimate: value + pending,
                error_estimate: error_estimate + (p.whole).abs(),
                evaluations: ev.evaluations,
            });
        }
        let m = 0.5 * (p.a + p.b);
        let fl = ev.eval(0.5 * (p.a + m))?;
        let fr = ev.eval(0.5 * (m + p.b))?;
        let left = simpson(p.a, m, p.fa, fl, p.fm);
        let right = simpson(m, p.b, p.fm, fr, p.fb);
        let delta = left + right - p.whole;
        let roundoff = 64.0 * f64::EPSILON * (left.abs() + right.abs());
        let converged = delta.abs() <= 15.0 * p.tol || delta.abs() <= roundoff;
        if converged || p.depth >= MAX_DEPTH || m <= p.a || m >= p.b {
            value += left + right + delta / 15.0;
            error_estimate += if converged { delta.abs() / 15.0 } else { delta.abs() };
        } else {
            stack.push(Panel {
                a: p.a,
                b: m,
                fa: p.fa,
                fm: fl,
                fb: p.fm,
                whole: left,
                tol: 0.5 * p.tol,
                depth: p.depth + 1,
            });
            stack.push(Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: fr,
                fb: p.fb,
                whole: right,
                tol: 0.5 * p.tol,
                depth: p.depth + 1,
            });
        }
    }

    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations: ev.evaluations,
    })
}
