use std::cmp::Ordering;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::fixture::CurveFixture;
use super::record::{Status, TwistRecord};
use crate::cohomology::{enumerate_cocycles, trivialize_cocycle, Cocycle, Route, Trivialization};
use crate::cyclotomic::{enumerate_subgroups, CycloField, SubfieldSpec};
use crate::error::{Error, Result};
use crate::ratfunc::{Mobius, RatFunc};
use crate::solver::{aut_group, level_bound, solve_mobius_equation};

/// How twists are identified in search output.
pub const EQUIVALENCE: &str = "K-isomorphism of covers (pi_G o g = pi_G' for some g in PGL_2(K))";

/// Maximum number of times the ambient conductor is enlarged while the
/// automorphism group keeps growing.
const MAX_BOUND_ROUNDS: usize = 4;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub route: Route,
    pub budget: usize,
    /// Restrict the sweep to one subfield (given at any conductor dividing
    /// the sweep level).
    pub subfield: Option<SubfieldSpec>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { route: Route::Auto, budget: 300, subfield: None }
    }
}

/// The ambient field for a fixture and the automorphism data that fixed it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbientData {
    /// Level used for the subfield sweep.
    pub level: u64,
    /// `b * level`.
    pub ambient: u64,
    pub bound: u64,
    /// `|Aut|` over `K_level` and over `K_ambient`.
    pub aut_at_level: usize,
    pub aut_at_ambient: usize,
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub fixture: String,
    pub data: AmbientData,
    pub records: Vec<TwistRecord>,
}

impl SearchReport {
    pub fn to_json(&self) -> Value {
        json!({
            "fixture": self.fixture,
            "level": self.data.level,
            "ambient": self.data.ambient,
            "bound": self.data.bound,
            "aut_order_at_level": self.data.aut_at_level,
            "aut_order_at_ambient": self.data.aut_at_ambient,
            "equivalence": EQUIVALENCE,
            "records": self.records.iter().map(TwistRecord::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Levels 2 and 4 are raised to 8 for `p = 2`.
pub fn sweep_level(fixture: &CurveFixture) -> u64 {
    let level = fixture.level();
    if fixture.p == 2 && level < 8 {
        8
    } else {
        level
    }
}

/// `b * level` with `b` the `p`-part of the automorphism exponent, enlarged
/// until the automorphism group over the ambient field stops growing.
pub fn ambient_data(fixture: &CurveFixture) -> Result<AmbientData> {
    let level = sweep_level(fixture);
    let aut_level = aut_group(&fixture.pi_gamma.embed(level)?, &CycloField::get(level))?;
    let mut bound = level_bound(&aut_level, fixture.p).b;
    let mut aut_ambient = aut_level.len();
    for _ in 0..MAX_BOUND_ROUNDS {
        let m = bound * level;
        let aut = aut_group(&fixture.pi_gamma.embed(m)?, &CycloField::get(m))?;
        aut_ambient = aut.len();
        let next = level_bound(&aut, fixture.p).b.max(bound);
        if next == bound {
            break;
        }
        bound = next;
    }
    Ok(AmbientData {
        level,
        ambient: bound * level,
        bound,
        aut_at_level: aut_level.len(),
        aut_at_ambient: aut_ambient,
    })
}

/// Subfields `K != Q` of `K_level`, in a fixed order.
pub fn sweep_subfields(level: u64) -> Vec<SubfieldSpec> {
    let mut out: Vec<SubfieldSpec> = enumerate_subgroups(level)
        .into_iter()
        .filter(|k| !k.is_rationals())
        .collect();
    out.sort_by_key(subfield_key);
    out
}

fn subfield_key(k: &SubfieldSpec) -> (usize, Vec<u64>) {
    (k.degree(), k.subgroup().to_vec())
}

struct Candidate {
    cocycle: Cocycle,
    outcome: Trivialization,
}

fn record_key(r: &TwistRecord) -> (Status, String) {
    let body = match (&r.matrix, &r.conic, &r.cocycle) {
        (Some(m), _, _) => m.to_json().to_string(),
        (None, Some(c), _) => c.to_json().to_string(),
        (None, None, Some(z)) => z.to_json().to_string(),
        _ => String::new(),
    };
    (r.status, body)
}

fn letters(mut i: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'A' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).expect("ascii")
}

/// True when some `g` over `K` has `f o g = h`.
pub fn k_isomorphic(f: &RatFunc, h: &RatFunc, k: &SubfieldSpec) -> Result<bool> {
    let field = f.field().clone();
    Ok(solve_mobius_equation(f, h, &field)?
        .iter()
        .any(|g| g.entries_in(k)))
}

fn records_for_subfield(
    fixture: &CurveFixture,
    data: &AmbientData,
    k: &SubfieldSpec,
    config: &SearchConfig,
) -> Result<Vec<TwistRecord>> {
    let m = data.ambient;
    let pi = fixture.pi_gamma.embed(m)?;
    let k_m = k.lift_to(m)?;
    let cocycles = enumerate_cocycles(&pi, k, m)?;
    let candidates: Vec<Candidate> = cocycles
        .into_par_iter()
        .map(|cocycle| {
            let outcome = trivialize_cocycle(&cocycle, config.route, config.budget)?;
            Ok(Candidate { cocycle, outcome })
        })
        .collect::<Result<_>>()?;
    let mut split: Vec<(Mobius, RatFunc, TwistRecord)> = Vec::new();
    let mut other = Vec::new();
    for c in candidates {
        let base = TwistRecord {
            label: String::new(),
            fixture: fixture.label.clone(),
            field: k.clone(),
            ambient: m,
            matrix: None,
            twisted: None,
            conic: None,
            route: None,
            cocycle: Some(c.cocycle.clone()),
            obstruction: None,
            status: Status::Inconclusive,
        };
        match c.outcome {
            Trivialization::Coboundary { a, route } => {
                let table = a.inverse();
                let twisted = pi.compose(&table);
                if !twisted.coefficients_in(&k_m) {
                    return Err(Error::InvariantViolation(format!(
                        "{}: twisted map is not defined over {k:?}",
                        fixture.label
                    )));
                }
                split.push((
                    table.clone(),
                    twisted.clone(),
                    TwistRecord {
                        matrix: Some(table),
                        twisted: Some(twisted),
                        route: Some(route),
                        status: Status::Verified,
                        ..base
                    },
                ));
            }
            Trivialization::Obstructed(o) => {
                let status = if o.is_proof() { Status::Found } else { Status::Inconclusive };
                let conic = o.form().cloned();
                other.push(TwistRecord {
                    conic,
                    obstruction: Some(o.to_json()),
                    status,
                    ..base
                });
            }
        }
    }
    // keep the canonically smallest representative of each K-isomorphism
    // class; pi o T o g = pi o T' iff T g T'^-1 lies in Aut(pi)
    split.sort_by_key(|a| record_key(&a.2));
    let aut = if split.len() > 1 { aut_group(&pi, &CycloField::get(m))? } else { Vec::new() };
    let mut kept: Vec<(Mobius, RatFunc, TwistRecord)> = Vec::new();
    for item in split {
        let duplicate = kept.iter().any(|seen| {
            let from = seen.0.inverse();
            aut.iter().any(|alpha| from.mul(alpha).mul(&item.0).entries_in(&k_m))
        });
        if !duplicate {
            kept.push(item);
        }
    }
    let mut out: Vec<TwistRecord> = kept.into_iter().map(|(_, _, r)| r).collect();
    out.extend(other);
    Ok(out)
}

/// Sweep subfields of the fixture's level, enumerate compatible cocycles over
/// `K_{b * level}` and trivialize them. Output order is canonical.
pub fn search(fixture: &CurveFixture, config: &SearchConfig) -> Result<SearchReport> {
    let data = ambient_data(fixture)?;
    let subfields = match &config.subfield {
        Some(k) => {
            if k.is_rationals() {
                return Err(Error::Schema("the subfield must differ from Q".into()));
            }
            if !k.contained_in_cyclotomic(data.level) {
                return Err(Error::NotASubfield { sub: k.conductor(), ambient: data.level });
            }
            vec![k.clone()]
        }
        None => sweep_subfields(data.level),
    };
    let per_field: Vec<Vec<TwistRecord>> = subfields
        .par_iter()
        .map(|k| records_for_subfield(fixture, &data, k, config))
        .collect::<Result<_>>()?;
    let mut records: Vec<TwistRecord> = per_field.into_iter().flatten().collect();
    records.sort_by(|a, b| match subfield_key(&a.field).cmp(&subfield_key(&b.field)) {
        Ordering::Equal => record_key(a).cmp(&record_key(b)),
        o => o,
    });
    for (i, r) in records.iter_mut().enumerate() {
        r.label = format!("{}-{}{}", fixture.label, data.ambient, letters(i));
    }
    Ok(SearchReport { fixture: fixture.label.clone(), data, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letter_labels() {
        assert_eq!(letters(0), "A");
        assert_eq!(letters(25), "Z");
        assert_eq!(letters(26), "AA");
        assert_eq!(letters(27), "AB");
    }

    #[test]
    fn sweep_excludes_rationals() {
        let fields = sweep_subfields(9);
        assert_eq!(fields.len(), 3);
        assert!(fields.iter().all(|k| !k.is_rationals()));
        assert_eq!(sweep_subfields(8).len(), 4);
    }
}
