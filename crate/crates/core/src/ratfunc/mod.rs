//! Polynomials, rational functions and truncated Laurent series over `K_N`,
//! and the action of `PGL_2` by substitution.

mod mobius;
mod poly;
mod rational;
mod series;

pub use mobius::{mobius_group_ops, Mobius, MobiusOp, MobiusOpResult};
pub use poly::Poly;
pub use rational::{
    coefficients_in, compose_mobius, evaluate, galois_apply_ratfunc, PointP1, RatFunc, RatFuncJson,
};
pub use series::{j_invariant, series_compose, LaurentSeries, SeriesJson};
