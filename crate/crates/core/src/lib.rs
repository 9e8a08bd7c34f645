//! Approximation of operator semigroups e^{-tA} by powers of completely monotone
//! functions gₙ(tA) = gⁿ(tA/n): representing measures, scalar functionals,
//! a bounded operator calculus and numerical verification of convergence rates.

pub mod cli;
pub mod cm;
pub mod error;
pub mod functionals;
pub mod numeric;
pub mod opcalc;
pub mod quad;
pub mod rates;
pub mod special;

pub use error::{Error, Result};
