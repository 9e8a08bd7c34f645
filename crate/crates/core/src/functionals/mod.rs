//! Rate functionals of completely monotone functions.

pub mod checks;
pub mod density;
pub mod euler;
pub mod values;

pub use checks::{asymptotic_c_check, check_polynomial_rate};
pub use density::{g0_density, g_density, GDensity};
pub use euler::{euler_c_alpha_exact, euler_rate_constant};
pub use values::*;
