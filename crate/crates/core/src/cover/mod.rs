//! The bidegree (2,2,2,2) cover (P^1)^4 → P(1^8,2^8), its lifted group and F_q point counts.

pub mod checks;
pub mod enumerate;
pub mod points;
pub mod projaut;
pub mod sigma;
pub mod z2;

pub use checks::{
    certify_free_and_smooth, draw_generic_nu, singular_points, verify_branch_structure, verify_enumeration, verify_hplane_decomposition,
    verify_orbit_closure, verify_sigma, RejectedNu,
};
pub use enumerate::{CoverPoint, SurfaceEquations};
pub use projaut::{build_lifts_and_certify, FiniteProjGroup, ProjAut};
pub use z2::{build_z2, verify_z2};
