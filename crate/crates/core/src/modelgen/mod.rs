//! Exact polynomial algebra over Q: the Tate normal form group law and
//! defining equations of X1(N).

mod gcd;
mod poly;
mod ratfunc;
mod rawform;
mod tate;

pub use gcd::poly_gcd;
pub use poly::{rational_string, BivariatePolyQ, Monomial};
pub use ratfunc::RatFuncQ;
pub use rawform::{
    default_split, eval_curve_equation, optimized_curve, optimized_model_check, optimized_model_check_for, raw_form,
    raw_form_with, OptimizedModelReport, RawFormConfig,
};
pub use tate::{curve_residual, tate_add, tate_multiple, tate_multiples, TatePoint};
