//! Exact arithmetic over the Gaussian integers ℤ[i] and parametric solutions
//! of four ternary quadratic Diophantine families.
//!
//! Module map:
//!
//! - [`gaussian`]: the [`GaussianInt`] ring type, Euclidean division, text form.
//! - [`parity`]: the even/odd classes `E0, EI, O0, OI` and associate
//!   normalization into the fundamental domain and into `O^I`.
//! - [`factorization`]: primality, canonical factorization, gcds, the G-set.
//! - [`mordell`]: solutions of `XY = kV²` with coprime `X, Y`.
//! - [`families`]: the equations `X²+Y²+Z²=0`, `X²+iY²+Z²=0`,
//!   `X²+(1±i)Y²+Z²=0`, `X²+iY²+(1+i)Z²=0`, their canonical forms and
//!   parametrizations.
//! - [`oracle`]: brute-force enumeration of primitive solutions in a box.
//! - [`cli`]: the `gauss-dioph` command-line surface.

pub mod cli;
pub mod error;
pub mod factorization;
pub mod families;
pub mod gaussian;
pub mod mordell;
pub mod oracle;
pub mod parity;

pub use error::{Error, Result};
pub use gaussian::{GaussianInt, UnitPower};
