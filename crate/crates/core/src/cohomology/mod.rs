//! Galois groups of cyclotomic extensions, cocycles with values in PGL_2,
//! and their trivialization.

mod cocycle;
mod group;
mod matrix;
mod trivialize;
mod twococycle;

pub use cocycle::{enumerate_cocycles, Cocycle};
pub use group::{galois_group, GalGroup};
pub use matrix::{galois_matrix, hilbert90, MatrixCocycle};
pub use twococycle::{group_norm, lift_and_mu, preu_f, preu_target, solve_norm_equation, TwoCocycle};
pub use trivialize::{trivialize_cocycle, Obstruction, Route, RouteUsed, Trivialization};
