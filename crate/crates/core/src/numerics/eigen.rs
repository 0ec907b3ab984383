//! Symmetric eigenvalue solvers.
//!
//! [`sym_eigenvalues`] runs cyclic Jacobi rotations on a dense matrix.
//! [`pencil_eigenvalues`] handles the generalized problem `A x = λ B x` for
//! symmetric tridiagonal `A` and positive definite tridiagonal `B` by
//! bisection on Sturm counts, in `O(n)` per count and without forming
//! `B⁻¹A`.

use super::matrix::Matrix;
use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const JACOBI_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn sym_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::domain(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_symmetric(SYMMETRY_TOL) {
        return Err(Error::domain("matrix is not symmetric"));
    }
    let n = m.rows();
    let mut a = m.clone();
    let norm = a.frobenius_norm();
    let off_norm = |a: &Matrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..i {
                s += 2.0 * a[(i, j)] * a[(i, j)];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) >= JACOBI_TOL * norm && norm > 0.0 {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Solver(format!("Jacobi did not converge in {MAX_SWEEPS} sweeps")));
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
        sweeps += 1;
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Annihilates `a[p][q]` with one plane rotation.
fn rotate(a: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta.is_infinite() { 0.5 / theta } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for r in 0..a.rows() {
        if r == p || r == q {
            continue;
        }
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        let new_rp = c * arp - s * arq;
        let new_rq = s * arp + c * arq;
        a[(r, p)] = new_rp;
        a[(p, r)] = new_rp;
        a[(r, q)] = new_rq;
        a[(q, r)] = new_rq;
    }
}

/// Symmetric tridiagonal matrix: `diag` has `n` entries, `off` has `n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::domain(format!(
                "tridiagonal needs n diagonal and n-1 off-diagonal entries, got {} and {}",
                diag.len(),
                off.len()
            )));
        }
        Ok(SymTridiagonal { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn to_dense(&self) -> Matrix {
        let n = self.len();
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                self.diag[i]
            } else if i == j + 1 {
                self.off[j]
            } else if j == i + 1 {
                self.off[i]
            } else {
                0.0
            }
        })
    }

    fn max_abs(&self) -> f64 {
        self.diag.iter().chain(&self.off).fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Number of eigenvalues of the pencil `(a, b)` strictly below `sigma`.
///
/// Counts the negative pivots of the LDLᵀ factorization of `a - sigma·b`,
/// which by Sylvester's law of inertia equals the eigenvalue count when
/// `b` is positive definite.
pub fn pencil_count_below(a: &SymTridiagonal, b: &SymTridiagonal, sigma: f64) -> usize {
    let pivmin = f64::MIN_POSITIVE * (a.max_abs() + sigma.abs() * b.max_abs()).max(1.0);
    let mut count = 0;
    let mut d = a.diag[0] - sigma * b.diag[0];
    for i in 0.. {
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
        if i + 1 == a.len() {
            break;
        }
        let e = a.off[i] - sigma * b.off[i];
        d = (a.diag[i + 1] - sigma * b.diag[i + 1]) - e * e / d;
    }
    count
}

/// The `count` smallest generalized eigenvalues of `(a, b)`, ascending.
///
/// `b` must be positive definite. Eigenvalues are resolved to about four
/// ulps relative, or `1e-300` absolute near zero.
pub fn pencil_eigenvalues(a: &SymTridiagonal, b: &SymTridiagonal, count: usize) -> Result<Vec<f64>> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::domain("pencil operands differ in size"));
    }
    if count > n {
        return Err(Error::domain(format!("asked for {count} of {n} eigenvalues")));
    }
    if count == 0 {
        return Ok(Vec::new());
    }

    // Bracket [lo, hi] holding the wanted eigenvalues.
    let mut lo = -1.0;
    while pencil_count_below(a, b, lo) > 0 {
        lo *= 2.0;
        if !lo.is_finite() {
            return Err(Error::Solver("no finite lower bound for the pencil spectrum".into()));
        }
    }
    let mut hi = 1.0;
    while pencil_count_below(a, b, hi) < count {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Solver("no finite upper bound for the pencil spectrum".into()));
        }
    }

    let mut out = vec![f64::NAN; count];
    // (lo, hi, count(lo), count(hi))
    let mut stack = vec![(lo, hi, 0usize, pencil_count_below(a, b, hi))];
    while let Some((lo, hi, clo, chi)) = stack.pop() {
        if clo >= count || chi == clo {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let resolved = hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) + 1e-300;
        if resolved || mid <= lo || mid >= hi {
            for slot in out.iter_mut().take(chi.min(count)).skip(clo) {
                *slot = mid;
            }
            continue;
        }
        let cmid = pencil_count_below(a, b, mid);
        stack.push((mid, hi, cmid, chi));
        stack.push((lo, mid, clo, cmid));
    }
    debug_assert!(out.iter().all(|x| x.is_finite()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det_lu(m: &Matrix) -> f64 {
        let n = m.rows();
        let mut a = m.clone();
        let mut det = 1.0;
        for k in 0..n {
            let piv = (k..n)
                .max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs()))
                .unwrap();
            if a[(piv, k)] == 0.0 {
                return 0.0;
            }
            if piv != k {
                for c in 0..n {
                    let t = a[(k, c)];
                    a[(k, c)] = a[(piv, c)];
                    a[(piv, c)] = t;
                }
                det = -det;
            }
            det *= a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / a[(k, k)];
                for c in k..n {
                    let v = a[(k, c)];
                    a[(i, c)] -= f * v;
                }
            }
        }
        det
    }

    fn lcg_symmetric(n: usize, seed: u64) -> Matrix {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = next();
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(sym_eigenvalues(&Matrix::identity(3)).unwrap(), vec![1.0, 1.0, 1.0]);
        let d = Matrix::from_rows(&[vec![3.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 2.0]]);
        assert_eq!(sym_eigenvalues(&d).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let m = Matrix::from_rows(&[vec![0.5, -0.25], vec![-0.25, 0.625]]);
        let ev = sym_eigenvalues(&m).unwrap();
        // (tr ± sqrt(tr² - 4 det)) / 2
        let (tr, det) = (1.125f64, 0.5 * 0.625 - 0.0625);
        let disc = (tr * tr - 4.0 * det).sqrt();
        assert!((ev[0] - 0.5 * (tr - disc)).abs() < 1e-14);
        assert!((ev[1] - 0.5 * (tr + disc)).abs() < 1e-14);
        assert!((ev[0] - 0.304806).abs() < 1e-6 && (ev[1] - 0.820194).abs() < 1e-6);
    }

    #[test]
    fn rejects_nonsymmetric_and_nonsquare() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]);
        assert!(matches!(sym_eigenvalues(&m), Err(Error::Domain(_))));
        assert!(sym_eigenvalues(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn trace_and_determinant_identities() {
        for (n, seed) in [(1, 1), (5, 2), (17, 3), (40, 4), (64, 5)] {
            let m = lcg_symmetric(n, seed);
            let ev = sym_eigenvalues(&m).unwrap();
            assert!(ev.windows(2).all(|w| w[0] <= w[1]));
            let tr = m.trace();
            let sum: f64 = ev.iter().sum();
            assert!((sum - tr).abs() <= 1e-10 * tr.abs().max(m.max_abs()), "n={n}");
            let det = det_lu(&m);
            let prod: f64 = ev.iter().product();
            assert!((prod - det).abs() <= 1e-8 * det.abs(), "n={n}: {prod} vs {det}");
        }
    }

    #[test]
    fn pencil_matches_dense_reduction() {
        // B = LLᵀ with L bidiagonal, so B⁻¹A is similar to L⁻¹AL⁻ᵀ.
        let n = 12;
        let a = SymTridiagonal::new(
            (0..n).map(|i| 2.0 + 0.3 * i as f64).collect(),
            (0..n - 1).map(|i| -0.7 + 0.05 * i as f64).collect(),
        )
        .unwrap();
        let b = SymTridiagonal::new(vec![1.25; n], vec![-0.5; n - 1]).unwrap();
        let ev = pencil_eigenvalues(&a, &b, n).unwrap();

        // Dense oracle: Cholesky of B, then C = L⁻¹ A L⁻ᵀ.
        let bd = b.to_dense();
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let s: f64 = (0..j).map(|k| l[(j, k)] * l[(j, k)]).sum();
            l[(j, j)] = (bd[(j, j)] - s).sqrt();
            for i in j + 1..n {
                let s: f64 = (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum();
                l[(i, j)] = (bd[(i, j)] - s) / l[(j, j)];
            }
        }
        let solve_lower = |rhs: Vec<f64>| {
            let mut x = vec![0.0; n];
            for i in 0..n {
                let s: f64 = (0..i).map(|k| l[(i, k)] * x[k]).sum();
                x[i] = (rhs[i] - s) / l[(i, i)];
            }
            x
        };
        let ad = a.to_dense();
        // Y = L⁻¹ A (column by column), then C = L⁻¹ Yᵀ
        let mut y = Matrix::zeros(n, n);
        for c in 0..n {
            let col = solve_lower((0..n).map(|r| ad[(r, c)]).collect());
            for r in 0..n {
                y[(r, c)] = col[r];
            }
        }
        let mut cm = Matrix::zeros(n, n);
        for c in 0..n {
            let col = solve_lower((0..n).map(|r| y[(c, r)]).collect());
            for r in 0..n {
                cm[(r, c)] = col[r];
            }
        }
        let sym = Matrix::from_fn(n, n, |i, j| 0.5 * (cm[(i, j)] + cm[(j, i)]));
        let dense = sym_eigenvalues(&sym).unwrap();
        for (p, d) in ev.iter().zip(&dense) {
            assert!((p - d).abs() < 1e-12, "{p} vs {d}");
        }
    }

    #[test]
    fn pencil_partial_and_singular() {
        // a = diag(0, 1, 2), b = I
        let a = SymTridiagonal::new(vec![0.0, 1.0, 2.0], vec![0.0, 0.0]).unwrap();
        let b = SymTridiagonal::new(vec![1.0; 3], vec![0.0; 2]).unwrap();
        let ev = pencil_eigenvalues(&a, &b, 2).unwrap();
        assert_eq!(ev.len(), 2);
        assert!(ev[0].abs() < 1e-290);
        assert!((ev[1] - 1.0).abs() < 1e-15);
        assert_eq!(pencil_count_below(&a, &b, 1.5), 2);
        assert!(pencil_eigenvalues(&a, &b, 4).is_err());
    }
}
