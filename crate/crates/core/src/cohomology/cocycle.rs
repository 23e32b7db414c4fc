use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::group::{galois_group, GalGroup};
use crate::cyclotomic::{CycloField, SubfieldSpec};
use crate::error::{Error, Result};
use crate::ratfunc::{Mobius, RatFunc};
use crate::solver::solve_mobius_equation;

/// A map `sigma -> zeta(sigma)` on a Galois group with values in `PGL_2(K_M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    group: GalGroup,
    values: BTreeMap<u64, Mobius>,
}

impl Cocycle {
    /// Wrap a full value table; the cocycle law is checked.
    pub fn new(group: GalGroup, values: BTreeMap<u64, Mobius>) -> Result<Self> {
        let c = Cocycle { group, values };
        c.check()?;
        Ok(c)
    }

    pub fn trivial(group: GalGroup) -> Self {
        let field = CycloField::get(group.conductor());
        let values = group
            .elements()
            .iter()
            .map(|&d| (d, Mobius::identity(&field)))
            .collect();
        Cocycle { group, values }
    }

    /// The coboundary `sigma -> A^-1 sigma(A)`.
    pub fn coboundary(group: GalGroup, a: &Mobius) -> Self {
        let inv = a.inverse();
        let values = group
            .elements()
            .iter()
            .map(|&d| (d, inv.mul(&a.galois(d))))
            .collect();
        Cocycle { group, values }
    }

    pub fn group(&self) -> &GalGroup {
        &self.group
    }

    pub fn field(&self) -> Arc<CycloField> {
        CycloField::get(self.group.conductor())
    }

    pub fn value(&self, d: u64) -> &Mobius {
        &self.values[&self.group.rep(d)]
    }

    pub fn values(&self) -> &BTreeMap<u64, Mobius> {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.values().all(Mobius::is_identity)
    }

    /// `zeta(st) = zeta(s) s(zeta(t))` on every pair, and `zeta(1) = 1`.
    pub fn check(&self) -> Result<()> {
        let g = &self.group;
        if self.values.len() != g.order() || !g.elements().iter().all(|d| self.values.contains_key(d)) {
            return Err(Error::InvalidCocycle("value table does not cover the group".into()));
        }
        if !self.value(1).is_identity() {
            return Err(Error::InvalidCocycle("value at the identity is not 1".into()));
        }
        for &s in g.elements() {
            for &t in g.elements() {
                let lhs = self.value(g.mul(s, t));
                let rhs = self.value(s).mul(&self.value(t).galois(s));
                if *lhs != rhs {
                    return Err(Error::InvalidCocycle(format!(
                        "cocycle law fails at ({s}, {t})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The compatibility `sigma(pi) = pi o zeta(sigma)` on every element.
    pub fn compatible_with(&self, pi: &RatFunc) -> Result<bool> {
        let pi = pi.embed(self.group.conductor())?;
        Ok(self
            .group
            .elements()
            .iter()
            .all(|&d| pi.galois(d) == pi.compose(self.value(d))))
    }

    pub fn to_json(&self) -> Value {
        let mut values = Map::new();
        for (d, g) in &self.values {
            values.insert(d.to_string(), g.to_json());
        }
        json!({
            "conductor": self.group.conductor(),
            "fixed_subgroup": self.group.fixing(),
            "values": values,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Schema(format!("cocycle: {what}"));
        let m = v["conductor"].as_u64().ok_or_else(|| bad("missing conductor"))?;
        if m == 0 {
            return Err(bad("conductor must be positive"));
        }
        let fixing: Vec<u64> = v["fixed_subgroup"]
            .as_array()
            .ok_or_else(|| bad("missing fixed_subgroup"))?
            .iter()
            .map(|x| x.as_u64().ok_or_else(|| bad("non-integer unit")))
            .collect::<Result<_>>()?;
        let group = GalGroup::new(m, &fixing, &[1])?;
        let field = CycloField::get(m);
        let table = v["values"].as_object().ok_or_else(|| bad("missing values"))?;
        let mut values = BTreeMap::new();
        for (k, g) in table {
            let d: u64 = k.parse().map_err(|_| bad("bad unit label"))?;
            values.insert(group.rep(d), Mobius::from_json(&field, g)?);
        }
        Cocycle::new(group, values)
    }
}

/// Extend generator values to the whole group; `None` on an inconsistent relation.
pub(crate) fn extend_from_generators(group: &GalGroup, gen_values: &[Mobius]) -> Option<BTreeMap<u64, Mobius>> {
    let field = CycloField::get(group.conductor());
    let mut values: BTreeMap<u64, Mobius> = BTreeMap::new();
    values.insert(1, Mobius::identity(&field));
    let mut frontier = vec![1u64];
    while let Some(x) = frontier.pop() {
        let zx = values[&x].clone();
        for (&(g, _), zg) in group.generators().iter().zip(gen_values) {
            let y = group.mul(g, x);
            let zy = zg.mul(&zx.galois(g));
            match values.get(&y) {
                Some(existing) if *existing != zy => return None,
                Some(_) => {}
                None => {
                    values.insert(y, zy);
                    frontier.push(y);
                }
            }
        }
    }
    Some(values)
}

/// Every cocycle `Gal(K_M/K) -> PGL_2(K_M)` compatible with `pi`.
pub fn enumerate_cocycles(pi: &RatFunc, k: &SubfieldSpec, ambient: u64) -> Result<Vec<Cocycle>> {
    let group = galois_group(ambient, k)?;
    let field = CycloField::get(ambient);
    let pi_m = pi.embed(ambient)?;
    let mut choices: Vec<Vec<Mobius>> = Vec::new();
    for &(g, _) in group.generators() {
        let sols = solve_mobius_equation(&pi_m, &pi_m.galois(g), &field)?;
        if sols.is_empty() {
            return Ok(Vec::new());
        }
        choices.push(sols);
    }
    let total: usize = choices.iter().map(Vec::len).product();
    let mut found: Vec<Cocycle> = (0..total)
        .into_par_iter()
        .filter_map(|mut idx| {
            let pick: Vec<Mobius> = choices
                .iter()
                .map(|c| {
                    let v = c[idx % c.len()].clone();
                    idx /= c.len();
                    v
                })
                .collect();
            let values = extend_from_generators(&group, &pick)?;
            let c = Cocycle::new(group.clone(), values).ok()?;
            c.compatible_with(&pi_m).ok()?.then_some(c)
        })
        .collect();
    found.sort_by_key(|c| format!("{:?}", c.values));
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycloElem;
    use crate::ratfunc::Poly;

    #[test]
    fn rational_map_with_trivial_aut() {
        let k5 = CycloField::get(5);
        // t^2 (t - 1): no nontrivial symmetries
        let pi = RatFunc::from_poly(Poly::from_ints(&k5, &[0, 0, -1, 1]));
        let cocycles = enumerate_cocycles(&pi, &SubfieldSpec::rationals(5), 5).unwrap();
        assert_eq!(cocycles.len(), 1);
        assert!(cocycles[0].is_trivial());
    }

    #[test]
    fn cube_map_over_quadratic_group() {
        // t^3 over K_3 with K = Q
        let k3 = CycloField::get(3);
        let pi = RatFunc::from_poly(Poly::from_ints(&k3, &[0, 0, 0, 1]));
        let cocycles = enumerate_cocycles(&pi, &SubfieldSpec::rationals(3), 3).unwrap();
        // brute force: any value in Aut = mu_3 works at sigma_2 iff z * sigma(z) = 1,
        // which holds for every cube root of unity
        let aut: Vec<Mobius> = [0, 1, 2]
            .iter()
            .map(|&k| Mobius::scaling(CycloElem::zeta_pow(&k3, k)).unwrap())
            .collect();
        let group = galois_group(3, &SubfieldSpec::rationals(3)).unwrap();
        let mut brute = 0;
        for a in &aut {
            let values = BTreeMap::from([(1, Mobius::identity(&k3)), (2, a.clone())]);
            if let Ok(c) = Cocycle::new(group.clone(), values) {
                if c.compatible_with(&pi).unwrap() {
                    brute += 1;
                }
            }
        }
        assert_eq!(cocycles.len(), brute);
        assert_eq!(brute, 3);
        for c in &cocycles {
            assert_eq!(Cocycle::from_json(&c.to_json()).unwrap(), *c);
        }
    }
}
