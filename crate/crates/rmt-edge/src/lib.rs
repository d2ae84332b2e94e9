//! Characteristic-polynomial averages for unitary ensembles and their universal
//! edge limits.
//!
//! The crate is organised bottom-up:
//!
//! * [`specialfn`]: Airy, Bessel/Hankel and the contour functions `f_nu`, `g_nu`.
//! * [`orthopoly`]: recurrence tables, Cauchy transforms, the matrix `Y_n` and
//!   Christoffel-Darboux kernels.
//! * [`equilibrium`]: one-cut equilibrium measures, effective potential and zoom maps.
//! * [`correlators`]: finite-n averages and their scaled edge versions.
//! * [`parametrix`]: Airy and Bessel model matrices and the limit determinants.
//! * [`kontsevich`]: the determinant formulas for the Kontsevich and matrix-Bessel integrals.
//! * [`oracles`]: brute-force quadratures used to cross-check all of the above.

pub mod correlators;
pub mod equilibrium;
pub mod error;
pub mod kontsevich;
pub mod linalg;
pub mod oracles;
pub mod orthopoly;
pub mod parametrix;
pub mod poly;
pub mod quad;
pub mod specialfn;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
