//! Operator side: generators, matrix exponential, fractional powers and the calculus.

pub mod calculus;
pub mod constants;
pub mod expm;
pub mod matrix;

pub use calculus::{frac_power, hp_apply, hp_apply_path, matrix_power, principal_power, scheme_apply, semigroup_at, HpPath};
pub use constants::{m_beta, semigroup_constants, ConstantsMethod, SemigroupConstants};
pub use expm::{expm, norm2};
pub use matrix::{
    advection_periodic, diag_imag, diag_positive, laplacian_dirichlet_1d, parse_generator, random_diagonalizable,
    GeneratorMatrix, SpectrumLocation, Structure,
};
