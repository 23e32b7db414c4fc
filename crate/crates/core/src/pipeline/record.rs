use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cohomology::{Cocycle, RouteUsed};
use crate::conic::ConicForm;
use crate::cyclotomic::{CycloField, SubfieldJson, SubfieldSpec};
use crate::error::{Error, Result};
use crate::ratfunc::{Mobius, RatFunc, RatFuncJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// A matrix was found and re-verified.
    Verified,
    /// A twist described by a conic (no `K`-point exists or none was needed).
    Found,
    /// No trivializer and no proof of obstruction within budget.
    Inconclusive,
}

/// One twist of a fixture over a subfield `K`.
///
/// `matrix` is the table matrix `A` with `pi_G = pi_Gamma(A(t))`; it lives over
/// `K_ambient`, while `pi_G` has coefficients in `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistRecord {
    pub label: String,
    pub fixture: String,
    pub field: SubfieldSpec,
    pub ambient: u64,
    pub matrix: Option<Mobius>,
    pub twisted: Option<RatFunc>,
    pub conic: Option<ConicForm>,
    pub route: Option<RouteUsed>,
    pub cocycle: Option<Cocycle>,
    pub obstruction: Option<Value>,
    pub status: Status,
}

impl TwistRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label,
            "fixture": self.fixture,
            "field": self.field.to_json(),
            "ambient": self.ambient,
            "matrix": self.matrix.as_ref().map(Mobius::to_json),
            "twisted": self.twisted.as_ref().map(RatFunc::to_json),
            "conic": self.conic.as_ref().map(ConicForm::to_json),
            "route": self.route,
            "cocycle": self.cocycle.as_ref().map(Cocycle::to_json),
            "obstruction": self.obstruction,
            "status": self.status,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Schema(format!("record: {what}"));
        let label = v["label"].as_str().ok_or_else(|| bad("missing label"))?.to_string();
        let fixture = v["fixture"].as_str().ok_or_else(|| bad("missing fixture"))?.to_string();
        let field: SubfieldJson = serde_json::from_value(v["field"].clone())?;
        let field = SubfieldSpec::from_json(&field)?;
        let ambient = v["ambient"].as_u64().filter(|&m| m > 0).ok_or_else(|| bad("missing ambient"))?;
        let amb_field = CycloField::get(ambient);
        let matrix = match &v["matrix"] {
            Value::Null => None,
            m => Some(Mobius::from_json(&amb_field, m)?),
        };
        let twisted = match &v["twisted"] {
            Value::Null => None,
            t => Some(RatFunc::from_json(&serde_json::from_value::<RatFuncJson>(t.clone())?)?),
        };
        let conic = match &v["conic"] {
            Value::Null => None,
            c => Some(ConicForm::from_json(c)?),
        };
        let route = match &v["route"] {
            Value::Null => None,
            r => Some(serde_json::from_value(r.clone())?),
        };
        let cocycle = match &v["cocycle"] {
            Value::Null => None,
            c => Some(Cocycle::from_json(c)?),
        };
        let obstruction = match &v["obstruction"] {
            Value::Null => None,
            o => Some(o.clone()),
        };
        let status = serde_json::from_value(v["status"].clone())?;
        Ok(TwistRecord { label, fixture, field, ambient, matrix, twisted, conic, route, cocycle, obstruction, status })
    }
}

/// Records from a file holding either a list of records, a search report
/// (`{"records": [...]}`), or a list of search reports.
pub fn records_from_json(v: &Value) -> Result<Vec<TwistRecord>> {
    match v {
        Value::Array(items) => {
            let mut out = Vec::new();
            for item in items {
                if item.get("records").is_some() {
                    out.extend(records_from_json(item)?);
                } else {
                    out.push(TwistRecord::from_json(item)?);
                }
            }
            Ok(out)
        }
        Value::Object(map) => match map.get("records") {
            Some(r) => records_from_json(r),
            None => Ok(vec![TwistRecord::from_json(v)?]),
        },
        _ => Err(Error::Schema("records file must be a list or an object".into())),
    }
}
