//! Completely monotone functions, their representing measures and builtins.

pub mod bspline;
pub mod builtins;
pub mod function;
pub mod measure;

pub use builtins::{parse_function, Family};
pub use function::{ClosedForm, CmClass, CmFunction};
pub use measure::{Atom, Density, PositiveMeasure, Segment};
