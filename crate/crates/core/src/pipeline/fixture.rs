use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::cyclotomic::CycloField;
use crate::error::{Error, Result};
use crate::ratfunc::{j_invariant, series_compose, LaurentSeries, RatFunc, RatFuncJson, SeriesJson};

/// Default depth of the j-expansion check: `q^-1` through `q^(k-1)`.
pub const DEFAULT_PRECISION: i64 = 3;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FixtureFile {
    label: String,
    p: u64,
    n: u32,
    pi_gamma: RatFuncJson,
    #[serde(default)]
    hauptmodul: Option<SeriesJson>,
    #[serde(default)]
    provenance: String,
}

/// A genus-0 curve of prime-power level with its map to the j-line.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveFixture {
    pub label: String,
    pub p: u64,
    pub n: u32,
    pub pi_gamma: RatFunc,
    pub hauptmodul: Option<LaurentSeries>,
    pub provenance: String,
}

impl CurveFixture {
    pub fn level(&self) -> u64 {
        self.p.pow(self.n)
    }
}

fn check_coordinates(which: &str, coeffs: &[Vec<serde_json::Value>], conductor: u64) -> Result<()> {
    let degree = CycloField::get(conductor).degree();
    for (i, c) in coeffs.iter().enumerate() {
        if c.len() != degree {
            return Err(Error::InvariantViolation(format!(
                "coefficient {which}[{i}] has {} coordinates, K_{conductor} needs {degree}",
                c.len()
            )));
        }
    }
    Ok(())
}

/// Parse and check a fixture; the j-expansion is compared up to `precision`
/// when a hauptmodul is present.
pub fn parse_fixture(value: &serde_json::Value, precision: i64) -> Result<CurveFixture> {
    let file: FixtureFile = serde_json::from_value(value.clone())?;
    if !is_prime(file.p) || file.n == 0 {
        return Err(Error::Schema(format!("level {}^{} is not a prime power", file.p, file.n)));
    }
    let level = file
        .p
        .checked_pow(file.n)
        .ok_or_else(|| Error::Schema("level overflows".into()))?;
    let pj = &file.pi_gamma;
    if pj.conductor == 0 || level % pj.conductor != 0 {
        return Err(Error::InvariantViolation(format!(
            "pi_gamma conductor {} does not divide the level {level}",
            pj.conductor
        )));
    }
    check_coordinates("num", &pj.num, pj.conductor)?;
    check_coordinates("den", &pj.den, pj.conductor)?;
    let pi_gamma = RatFunc::from_json(pj)?.embed(level)?;
    if pi_gamma.degree() < 2 {
        return Err(Error::InvariantViolation("pi_gamma must have degree at least 2".into()));
    }
    let hauptmodul = match &file.hauptmodul {
        Some(h) => {
            if h.conductor == 0 || level % h.conductor != 0 {
                return Err(Error::InvariantViolation(format!(
                    "hauptmodul conductor {} does not divide the level {level}",
                    h.conductor
                )));
            }
            check_coordinates("hauptmodul", &h.coeffs, h.conductor)?;
            Some(LaurentSeries::from_json(h)?.embed(level)?)
        }
        None => None,
    };
    let fixture = CurveFixture {
        label: file.label,
        p: file.p,
        n: file.n,
        pi_gamma,
        hauptmodul,
        provenance: file.provenance,
    };
    check_j_expansion(&fixture, precision)?;
    Ok(fixture)
}

pub fn ingest_fixture(path: &Path, precision: i64) -> Result<CurveFixture> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    parse_fixture(&value, precision)
}

/// `pi_gamma(h) = j` through `q^(precision - 1)`; the first failing exponent
/// is named in the error.
pub fn check_j_expansion(fixture: &CurveFixture, precision: i64) -> Result<()> {
    let Some(h) = &fixture.hauptmodul else {
        return Ok(());
    };
    let composed = series_compose(&fixture.pi_gamma, h)?;
    let j = j_invariant(precision).embed(fixture.level())?;
    match j.first_difference(&composed, precision)? {
        None => Ok(()),
        Some(e) => {
            let w = num_integer::lcm(composed.width(), j.width()) as i64;
            let exponent = if e % w == 0 { format!("{}", e / w) } else { format!("{e}/{w}") };
            Err(Error::InvariantViolation(format!(
                "j-expansion mismatch at exponent {exponent} (q^{exponent})"
            )))
        }
    }
}
