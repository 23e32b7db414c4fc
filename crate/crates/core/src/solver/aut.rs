use std::sync::Arc;

use crate::arith::lcm;
use crate::cyclotomic::CycloField;
use crate::error::{Error, Result};
use crate::ratfunc::{Mobius, RatFunc};

use super::mobius_eq::solve_mobius_equation;

/// `b`: the lcm of the `p`-power parts of element orders in an automorphism group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelBound {
    pub b: u64,
    pub p: u64,
}

/// Automorphisms `g` of `P^1` over `ambient` with `pi o g = pi`, identity first.
pub fn aut_group(pi: &RatFunc, ambient: &Arc<CycloField>) -> Result<Vec<Mobius>> {
    match pi.degree() {
        0 => return Err(Error::ConstantMap),
        1 => return Err(Error::NonconstantDegreeOne),
        _ => {}
    }
    let mut group = solve_mobius_equation(pi, pi, ambient)?;
    let id = Mobius::identity(ambient);
    let pos = group
        .iter()
        .position(|g| *g == id)
        .ok_or_else(|| Error::InvariantViolation("identity missing from automorphisms".into()))?;
    let id = group.remove(pos);
    group.insert(0, id);
    for g in &group {
        if !group.contains(&g.inverse()) {
            return Err(Error::InvariantViolation("automorphisms not closed under inverse".into()));
        }
        for h in &group {
            if !group.contains(&g.mul(h)) {
                return Err(Error::InvariantViolation("automorphisms not closed under composition".into()));
            }
        }
    }
    Ok(group)
}

/// The `p`-part of the exponent of a finite group of Mobius maps.
pub fn level_bound(aut: &[Mobius], p: u64) -> LevelBound {
    let limit = aut.len().max(1);
    let mut b = 1;
    for g in aut {
        let mut ord = g.order(limit).expect("element of a finite group") as u64;
        let mut part = 1;
        while ord.is_multiple_of(p) {
            ord /= p;
            part *= p;
        }
        b = lcm(b, part);
    }
    LevelBound { b, p }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycloElem;
    use crate::ratfunc::Poly;

    #[test]
    fn cube_map() {
        let k9 = CycloField::get(9);
        let t3 = RatFunc::from_poly(Poly::from_ints(&k9, &[0, 0, 0, 1]));
        let aut = aut_group(&t3, &k9).unwrap();
        assert_eq!(aut.len(), 3);
        assert!(aut[0].is_identity());
        assert_eq!(level_bound(&aut, 3), LevelBound { b: 3, p: 3 });
        assert_eq!(level_bound(&aut, 2).b, 1);
    }

    #[test]
    fn joukowski() {
        let q = CycloField::get(1);
        let f = RatFunc::new(Poly::from_ints(&q, &[1, 0, 1]), Poly::from_ints(&q, &[0, 1])).unwrap();
        let aut = aut_group(&f, &q).unwrap();
        assert_eq!(aut.len(), 2);
        assert_eq!(level_bound(&aut, 3).b, 1);
        assert_eq!(level_bound(&aut, 2).b, 2);
        assert_eq!(level_bound(&aut[..1], 5).b, 1);
    }

    #[test]
    fn degenerate_maps() {
        let k5 = CycloField::get(5);
        assert_eq!(aut_group(&RatFunc::t(&k5), &k5), Err(Error::NonconstantDegreeOne));
        let c = RatFunc::from_poly(Poly::constant(CycloElem::from_int(&k5, 4)));
        assert_eq!(aut_group(&c, &k5), Err(Error::ConstantMap));
    }
}
