//! Fixture ingest, the subfield sweep that produces twist records, and the
//! independent record verifier.

mod fixture;
mod record;
mod search;
mod selftest;
mod verify;

pub use fixture::{check_j_expansion, ingest_fixture, parse_fixture, CurveFixture, DEFAULT_PRECISION};
pub use record::{records_from_json, Status, TwistRecord};
pub use search::{ambient_data, k_isomorphic, search, sweep_level, sweep_subfields, AmbientData, SearchConfig, SearchReport, EQUIVALENCE};
pub use verify::{cocycle_orientation, verify, CheckResult, Orientation, RowReport, VerifyReport, ADMISSIBLE_CONDUCTORS};
pub use selftest::{random_elem, random_mobius, selftest};
