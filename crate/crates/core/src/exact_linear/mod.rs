//! Exact linear algebra over `ℤ_(p)` and its quadratic extensions.

pub mod matrix;
pub mod normal_form;
pub mod scalar;

pub use matrix::{dot, Matrix, Vector};
pub use normal_form::{
    cokernel_structure, hermite_form, saturate, smith_form, FiniteAbelianPGroup, Lattice, SmithForm,
};
pub use scalar::{parse_scalar, Extension, Scalar, Valuation};
