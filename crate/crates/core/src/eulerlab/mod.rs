//! CM points on X1(N), Hecke fibers, distribution checks, modularity checks
//! and algebraic recognition.

mod checks;
mod distribution;
mod fiber;
mod minpoly;
mod point;
mod report;

pub use checks::{algebraicity_evidence, algebraicity_with_escalation, gamma1_invariance_check, in_gamma1, mobius};
pub use distribution::{
    base_degree_bound, conjugate_lattice, eval_on_lattice, pseudo_random_value, verify_distribution,
    DistributionOptions, DivisorMode,
};
pub use fiber::{tp_fiber, DistributionInstance, Fiber};
pub use minpoly::{lll_reduce, min_poly_guess, IntPoly};
pub use point::{
    eval_at_index, eval_exact, eval_point, eval_tau, raw_form_residual, tate_parameters, CMPointSpec,
    EvaluatedPoint, PointSource,
};
pub use report::{match_points, CheckRecord, Matching, VerificationReport, Verdict};
