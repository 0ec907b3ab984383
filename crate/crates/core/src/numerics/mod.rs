//! Numerical kernel: thermal entropy, adaptive quadrature, bisection and
//! symmetric eigensolvers.

mod eigen;
mod entropy;
mod matrix;
mod quadrature;
mod roots;

pub use eigen::{pencil_count_below, pencil_eigenvalues, sym_eigenvalues, SymTridiagonal};
pub use entropy::g;
pub(crate) use entropy::g_nonneg;
pub use matrix::Matrix;
pub use quadrature::{integrate, integrate_split, QuadratureResult, MAX_EVALUATIONS};
pub use roots::{find_root, find_root_bracket, Bracket, DEFAULT_ROOT_TOL};

/// Default absolute tolerance for capacity-scale integrals.
pub const DEFAULT_QUAD_TOL: f64 = 1e-12;
