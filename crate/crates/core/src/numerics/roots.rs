use crate::error::{Error, Result};

/// Default bracket-width tolerance for [`find_root`].
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

const MAX_BISECTIONS: usize = 2_000;

/// A search interval `lo < hi`; the sign condition is checked by [`find_root`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    lo: f64,
    hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Bracket { lo, hi })
        } else {
            Err(Error::domain(format!("invalid bracket [{lo}, {hi}]")))
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// Bisection for a sign change of `f` inside `bracket`.
///
/// Stops once the bracket is narrower than `tol`, `f` hits zero exactly, or
/// the bracket can no longer be split in floating point.
pub fn find_root<F: Fn(f64) -> f64>(f: F, bracket: Bracket, tol: f64) -> Result<f64> {
    let (lo, hi) = find_root_bracket(f, bracket, tol)?;
    Ok(if lo == hi { lo } else { 0.5 * (lo + hi) })
}

/// Bisection that returns the final bracket instead of its midpoint.
///
/// `lo` keeps the sign of `f(bracket.lo)`; callers that need a point on a
/// specific side of the root pick the matching end.
pub fn find_root_bracket<F: Fn(f64) -> f64>(f: F, bracket: Bracket, tol: f64) -> Result<(f64, f64)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain(format!("root tolerance must be positive, got {tol}")));
    }
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let flo = f(lo);
    let fhi = f(hi);
    if flo.is_nan() || fhi.is_nan() {
        return Err(Error::domain("function is NaN at a bracket end"));
    }
    if flo == 0.0 {
        return Ok((lo, lo));
    }
    if fhi == 0.0 {
        return Ok((hi, hi));
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::domain(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}"
        )));
    }
    let lo_negative = flo < 0.0;
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm.is_nan() {
            return Err(Error::Solver(format!("function is NaN at {mid}")));
        }
        if fm == 0.0 {
            return Ok((mid, mid));
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}
