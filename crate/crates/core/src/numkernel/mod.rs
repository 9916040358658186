//! Arbitrary-precision complex arithmetic with error radii, lattice
//! reduction and q-series evaluation of elliptic functions.

mod bigcomplex;
mod lattice;
mod weierstrass;

pub use bigcomplex::BigComplex;
pub use lattice::{int_matrix_det, int_matrix_mul, lattice_reduce, IntMatrix, LatticeBasis, ReducedLattice};
pub use weierstrass::{
    eisenstein_invariants, j_invariant, lattice_invariants, target_err_log2, wp, wp_pair, wp_prime,
};
