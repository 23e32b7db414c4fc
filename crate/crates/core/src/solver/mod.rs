//! Roots, fibers and the functional equation `target = source o g`.

mod aut;
mod ff;
mod fiber;
mod mobius_eq;
mod roots;

pub use aut::{aut_group, level_bound, LevelBound};
pub use fiber::{fiber, FiberPoint};
pub use mobius_eq::{interpolate, probe_sequence, solve_mobius_equation};
pub use roots::{rational_roots, supported_conductor};
