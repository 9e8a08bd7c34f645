//! Convergence-rate experiments: bound checks, order fits and sharpness.

pub mod bounds;
pub mod holo;
pub mod optimality;
pub mod report;
pub mod sharpness;
pub mod suite;
pub mod vectors;

pub use bounds::{first_order_bounds, non_b2_bounds, non_b2_envelope, second_order_bounds};
pub use holo::{fit_constants, holomorphic_bounds, holomorphic_second_order, scaled_c_alpha, FittedConstants};
pub use optimality::{optimality_lower, OptimalityReport, OptimalityRow, SpectrumKind};
pub use report::{fit_order, BoundReport, Ctx, OrderFit, OrderRow, Policy};
pub use sharpness::{euler_scalar_sharpness, euler_sup, shift_integrals, shift_second_order_sharpness, SharpnessRow};
pub use suite::{run_suite, ExperimentConfig, SuiteKind, SuiteOutput};
pub use vectors::{test_vectors, TestVector, DEFAULT_SEED};
