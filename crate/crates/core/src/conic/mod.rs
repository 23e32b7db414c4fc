//! The conic attached to a cocycle and the search for its rational points.

mod form;
mod qpoint;
mod search;
mod transfer;
mod trivializer;

pub use form::{conic_from_cocycle, diagonalize, ConicForm, ConicPoint};
pub use qpoint::{has_point_over_q, hilbert_symbol, Place, QSolvability};
pub use transfer::{phi, standard_gram, veronese};
pub use search::{search_point_over_k, sqrt_in};
pub use trivializer::{conic_route, trivializer_from_point, ConicOutcome};
