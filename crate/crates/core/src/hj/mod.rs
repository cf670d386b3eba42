//! Hamilton-Jacobi general integral: saddle equation, complex action and
//! branch continuation.

pub mod action;
pub mod branches;
pub mod saddle;

pub use action::{action, ComplexAction};
pub use branches::{branch_family, log_psi, trace_branch, BranchCurve, BranchLabel, BranchSample, ContinuationOptions};
pub use saddle::{eval_saddle, solve_saddle, NewtonOptions, SaddleEval, SaddlePoint, Sheet};
