//! Numerical invariants of `R = S/p` and ideal tests in `R`.

pub mod codim;
pub mod hilbert;
mod variety;

pub use codim::{
    analytic_spread, dim_from_leading, fiber_kernel, grade_at_least_2, krull_dim,
    principal_class_test, quotient_dim, tau_floor, tau_matrix, tau_surjective, tau_sweep,
    TauMatrix, TauSweep,
};
pub use hilbert::HilbertData;
pub use variety::VarietyPresentation;
