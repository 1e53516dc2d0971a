//! Exact linear algebra over Z/m and Z.

pub mod howell;
pub mod layout;
pub mod matrix;
pub mod smith;
pub mod zn;

pub use howell::{howell_form, left_kernel, solve_left, solve_linear, span_product, LinearSolution, SpanBasis};
pub use layout::{CyclicBasis, Layout, LayoutMap, QuotientLayout};
pub use matrix::{IntMatrix, ResMatrix};
pub use smith::{smith_form, solve_integer, IntegerSolution, SmithForm};
