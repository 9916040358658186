//! Galois action on singular values through W-matrices acting on torsion
//! indices, and the action of K-elements on the marked torsion point.

mod action;
mod orbit;
mod wgroup;

pub use action::{point_under_matrix, vienna_act, BetaQData, BetaQEntry, GaloisElement, LocalMatrix};
pub use orbit::{galois_orbit, orbit_report, Orbit};
pub use wgroup::{act_index, w_group, FrickeIndex, Mat2, WMatrix};
