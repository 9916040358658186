//! Imaginary quadratic fields, binary quadratic forms, prime splitting,
//! conductor-raising cosets and exact p-adic lattice comparisons.

mod cosets;
mod field;
mod forms;
mod padic;
mod ramification;

pub use cosets::{conductor_raise_cosets, cosets_distinct_check};
pub use field::{is_prime, is_squarefree, prime_splitting, reduce_mod, valuation, ImagQuadField, KElement, Splitting};
pub use forms::{class_number, enumerate_by_c, reduced_forms, QuadFormClass};
pub use padic::{
    check_case, lattice_equal_at_p, sj_lattice_report, sj_lattice_report_with, sj_multiplier, verify_sj_lattices,
    CaseTag, PadicLatticeBasis, RatMatrix, SjEntry, SjReport,
};
pub use ramification::ramification_profile;

/// Field data from `D`.
pub fn field_data(d: i64) -> crate::Result<ImagQuadField> {
    ImagQuadField::new(d)
}
