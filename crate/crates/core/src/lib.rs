//! Exact computation and verification of twists of genus-0 modular curves.
//!
//! A curve is supplied as a covering map `pi: X -> P^1` (the j-line) with
//! coefficients in a cyclotomic field. The crate enumerates the Galois
//! cocycles compatible with `pi`, decides which ones are coboundaries, and
//! produces the twisted maps `pi o A^-1` over the subfield of interest.
//!
//! Everything is exact: coefficients live in `Q(zeta_N)` with arbitrary
//! precision rationals, and every returned object is re-verified before it
//! leaves the function that built it.

pub mod arith;
pub mod cohomology;
pub mod conic;
pub mod cyclotomic;
pub mod error;
pub mod linalg;
pub mod pipeline;
pub mod ratfunc;
pub mod solver;

pub use cyclotomic::{CycloElem, CycloField, GaloisAut, SubfieldSpec};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use ratfunc::{LaurentSeries, Mobius, PointP1, Poly, RatFunc};
