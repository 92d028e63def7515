//! Exact verification toolkit for the parallel-unprojection surfaces T in
//! P(1^8,2^8), their universal cover in (P^1)^4, and the bicanonical cubic.

pub mod bicanon;
pub mod checks;
pub mod cli;
pub mod cover;
pub mod exactalg;
pub mod grouprep;
pub mod invariants;
pub mod report;
pub mod unproj;

pub use report::{CheckReport, Status};
