use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use super::fixture::CurveFixture;
use super::record::TwistRecord;
use crate::cohomology::{galois_group, Cocycle};
use crate::cyclotomic::SubfieldSpec;
use crate::ratfunc::{Mobius, RatFunc};

/// Conductors `m` whose subfields `K != Q` carry the classified twists.
pub const ADMISSIBLE_CONDUCTORS: [u64; 11] = [3, 5, 7, 9, 8, 11, 13, 16, 25, 27, 32];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub label: String,
    pub checks: Vec<CheckResult>,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub rows: Vec<RowReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(RowReport::passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            for c in &row.checks {
                let mark = if c.pass { "PASS" } else { "FAIL" };
                out.push_str(&format!("{mark} {} {}: {}\n", row.label, c.name, c.detail));
            }
        }
        let failed = self.rows.iter().filter(|r| !r.passed()).count();
        out.push_str(&format!("{} rows, {} failed\n", self.rows.len(), failed));
        out
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable report")
    }
}

/// Which way a table matrix turns into a cocycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `sigma -> A sigma(A)^-1`
    Left,
    /// `sigma -> A^-1 sigma(A)`
    Right,
}

impl Orientation {
    pub fn describe(self) -> &'static str {
        match self {
            Orientation::Left => "A sigma(A)^-1",
            Orientation::Right => "A^-1 sigma(A)",
        }
    }
}

/// The orientation in which `A` yields a cocycle compatible with `pi` over
/// `Gal(K_M / K)`, if any.
pub fn cocycle_orientation(pi: &RatFunc, a: &Mobius, k: &SubfieldSpec, ambient: u64) -> Option<Orientation> {
    let group = galois_group(ambient, k).ok()?;
    [Orientation::Left, Orientation::Right].into_iter().find(|&o| {
        let values = group
            .elements()
            .iter()
            .map(|&d| {
                let v = match o {
                    Orientation::Left => a.mul(&a.galois(d).inverse()),
                    Orientation::Right => a.inverse().mul(&a.galois(d)),
                };
                (d, v)
            })
            .collect();
        match Cocycle::new(group.clone(), values) {
            Ok(z) => z.compatible_with(pi).unwrap_or(false),
            Err(_) => false,
        }
    })
}

fn field_check(k: &SubfieldSpec) -> CheckResult {
    if k.is_rationals() {
        return CheckResult::new("field", false, "K = Q is out of scope");
    }
    match ADMISSIBLE_CONDUCTORS.iter().find(|&&m| k.contained_in_cyclotomic(m)) {
        Some(m) => CheckResult::new("field", true, format!("K is contained in K_{m}")),
        None => CheckResult::new("field", false, format!("{k:?} lies in none of the admissible K_m")),
    }
}

fn verify_row(r: &TwistRecord, fixtures: &BTreeMap<String, CurveFixture>) -> RowReport {
    let mut checks = Vec::new();
    let Some(fixture) = fixtures.get(&r.fixture) else {
        checks.push(CheckResult::new("fixture", false, format!("unknown fixture {}", r.fixture)));
        return RowReport { label: r.label.clone(), checks };
    };
    let k_m = match r.field.lift_to(r.ambient) {
        Ok(k) => k,
        Err(e) => {
            checks.push(CheckResult::new("field", false, format!("K does not embed in K_{}: {e}", r.ambient)));
            return RowReport { label: r.label.clone(), checks };
        }
    };
    let pi = match fixture.pi_gamma.embed(r.ambient) {
        Ok(p) => p,
        Err(e) => {
            checks.push(CheckResult::new("fixture", false, format!("{e}")));
            return RowReport { label: r.label.clone(), checks };
        }
    };
    if let Some(a) = &r.matrix {
        let twisted = pi.compose(a);
        let rational = twisted.coefficients_in(&k_m);
        checks.push(CheckResult::new(
            "rational",
            rational,
            if rational { "pi_Gamma(A(t)) has coefficients in K" } else { "pi_Gamma(A(t)) is not defined over K" },
        ));
        if let Some(t) = &r.twisted {
            let same = t.embed(r.ambient).map(|t| t == twisted).unwrap_or(false);
            checks.push(CheckResult::new("twisted", same, if same { "stored map matches" } else { "stored map differs" }));
        }
        match cocycle_orientation(&pi, a, &r.field, r.ambient) {
            Some(o) => checks.push(CheckResult::new("cocycle", true, format!("compatible cocycle {}", o.describe()))),
            None => checks.push(CheckResult::new("cocycle", false, "neither orientation gives a compatible cocycle")),
        }
    }
    if let Some(form) = &r.conic {
        let in_k = form.gram().entries().iter().all(|x| k_m.contains(&x.embed(r.ambient).unwrap_or_else(|_| x.clone())));
        let nondegenerate = !form.gram().det().is_zero();
        checks.push(CheckResult::new(
            "conic",
            in_k && nondegenerate,
            format!("coefficients in K: {in_k}, nondegenerate: {nondegenerate}"),
        ));
    }
    if r.matrix.is_none() && r.conic.is_none() {
        checks.push(CheckResult::new("data", true, format!("{:?} row carries no matrix or conic", r.status)));
    }
    checks.push(field_check(&r.field));
    RowReport { label: r.label.clone(), checks }
}

/// Check every record independently against its fixture.
pub fn verify(records: &[TwistRecord], fixtures: &BTreeMap<String, CurveFixture>) -> VerifyReport {
    VerifyReport { rows: records.iter().map(|r| verify_row(r, fixtures)).collect() }
}
