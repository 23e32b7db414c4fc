use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::cocycle::Cocycle;
use super::group::GalGroup;
use super::matrix::{hilbert90, MatrixCocycle};
use super::twococycle::{lift_and_mu, preu_f, preu_target, solve_norm_equation};
use crate::conic::{conic_route, ConicForm, ConicOutcome, Place};
use crate::cyclotomic::CycloElem;
use crate::error::{Error, Result};
use crate::ratfunc::Mobius;

/// Which trivialization strategy to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Conic,
    Norm,
    Auto,
}

/// The strategy that produced a trivializer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteUsed {
    Norm,
    Tower,
    Conic,
}

/// Why no trivializer was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// The conic has no point over `Q`; a proof that the class is nontrivial.
    ConicNoPoint { form: ConicForm, place: Place },
    /// The bounded conic search over `K != Q` found nothing.
    ConicInconclusive { form: ConicForm, budget: usize },
    /// The norm equation search found nothing within budget.
    NormEquationUnsolved { target: CycloElem },
    /// The group is not cyclic and no cyclic tower step succeeded.
    NoCyclicTower,
}

impl Obstruction {
    /// True when the obstruction proves the cocycle is not a coboundary.
    pub fn is_proof(&self) -> bool {
        matches!(self, Obstruction::ConicNoPoint { .. })
    }

    pub fn form(&self) -> Option<&ConicForm> {
        match self {
            Obstruction::ConicNoPoint { form, .. } | Obstruction::ConicInconclusive { form, .. } => Some(form),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Obstruction::ConicNoPoint { form, place } => {
                json!({ "kind": "conic_no_point", "conic": form.to_json(), "place": place.to_string() })
            }
            Obstruction::ConicInconclusive { form, budget } => {
                json!({ "kind": "conic_inconclusive", "conic": form.to_json(), "budget": budget })
            }
            Obstruction::NormEquationUnsolved { target } => {
                json!({ "kind": "norm_equation_unsolved", "target": target.to_strings() })
            }
            Obstruction::NoCyclicTower => json!({ "kind": "no_cyclic_tower" }),
        }
    }
}

/// Outcome of [`trivialize_cocycle`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trivialization {
    Coboundary { a: Mobius, route: RouteUsed },
    Obstructed(Obstruction),
}

fn splits(zeta: &Cocycle, a: &Mobius) -> bool {
    let inv = a.inverse();
    zeta.group()
        .elements()
        .iter()
        .all(|&d| inv.mul(&a.galois(d)) == *zeta.value(d))
}

/// Cyclic groups: Preu's formula followed by Hilbert 90 on `f^-1 lift`.
fn cyclic_norm(zeta: &Cocycle, budget: usize) -> Result<std::result::Result<Mobius, Obstruction>> {
    let group = zeta.group().clone();
    if zeta.is_trivial() {
        return Ok(Ok(Mobius::identity(&zeta.field())));
    }
    let (lift, mu) = lift_and_mu(zeta)?;
    let target = preu_target(&mu)?;
    let Some(a) = solve_norm_equation(&target, &group, budget)? else {
        return Ok(Err(Obstruction::NormEquationUnsolved { target }));
    };
    let f = preu_f(&mu, &a)?;
    let values = group
        .elements()
        .iter()
        .map(|&d| Ok((d, lift[&d].scale(&f[&d].inv()?))))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let psi = MatrixCocycle::new(group, values)?;
    Ok(Ok(Mobius::from_matrix(&hilbert90(&psi)?)?))
}

fn restrict(zeta: &Cocycle, sub: &GalGroup) -> Result<Cocycle> {
    let values = sub.elements().iter().map(|&d| (d, zeta.value(d).clone())).collect();
    Cocycle::new(sub.clone(), values)
}

/// Norm route, descending through a cyclic tower when `G` is not cyclic:
/// split on a cyclic `H` with `G/H` cyclic, then on the quotient.
fn norm_route(zeta: &Cocycle, budget: usize) -> Result<std::result::Result<(Mobius, RouteUsed), Obstruction>> {
    let group = zeta.group();
    if group.is_cyclic() {
        return Ok(cyclic_norm(zeta, budget)?.map(|a| (a, RouteUsed::Norm)));
    }
    let mut last = Obstruction::NoCyclicTower;
    for e in group.cyclic_steps() {
        let sub = group.subgroup(&[e])?;
        let a1 = match cyclic_norm(&restrict(zeta, &sub)?, budget)? {
            Ok(a) => a,
            Err(o) => {
                last = o;
                continue;
            }
        };
        // A1 zeta(s) s(A1)^-1 is trivial on H, so it lives on G/H
        let quotient = group.with_kernel(sub.elements())?;
        let values = quotient
            .elements()
            .iter()
            .map(|&d| (d, a1.mul(zeta.value(d)).mul(&a1.galois(d).inverse())))
            .collect();
        let reduced = Cocycle::new(quotient, values)?;
        match norm_route(&reduced, budget)? {
            Ok((a2, _)) => {
                let a = a2.mul(&a1);
                if splits(zeta, &a) {
                    return Ok(Ok((a, RouteUsed::Tower)));
                }
                return Err(Error::InvariantViolation("tower trivializer fails verification".into()));
            }
            Err(o) => last = o,
        }
    }
    Ok(Err(last))
}

fn conic(zeta: &Cocycle, budget: usize) -> Result<std::result::Result<(Mobius, RouteUsed), Obstruction>> {
    Ok(match conic_route(zeta, budget)? {
        ConicOutcome::Split { a, .. } => Ok((a, RouteUsed::Conic)),
        ConicOutcome::NoPoint { form, place } => Err(Obstruction::ConicNoPoint { form, place }),
        ConicOutcome::Inconclusive { form, budget } => Err(Obstruction::ConicInconclusive { form, budget }),
    })
}

/// Find `A` with `zeta(sigma) = A^-1 sigma(A)` for every `sigma`, or report
/// why none was found. `Auto` tries the norm route (through a cyclic tower if
/// needed) and falls back to the conic.
pub fn trivialize_cocycle(zeta: &Cocycle, route: Route, budget: usize) -> Result<Trivialization> {
    zeta.check()?;
    let outcome = match route {
        Route::Norm => norm_route(zeta, budget)?,
        Route::Conic => conic(zeta, budget)?,
        Route::Auto => match norm_route(zeta, budget)? {
            Ok(found) => Ok(found),
            Err(norm_obstruction) => match conic(zeta, budget)? {
                Ok(found) => Ok(found),
                Err(o) if o.is_proof() => Err(o),
                Err(o) if zeta.group().is_cyclic() => Err(norm_obstruction).or(Err(o)),
                Err(o) => Err(o),
            },
        },
    };
    match outcome {
        Ok((a, route)) => {
            if !splits(zeta, &a) {
                return Err(Error::InvariantViolation("trivializer fails verification".into()));
            }
            Ok(Trivialization::Coboundary { a, route })
        }
        Err(o) => Ok(Trivialization::Obstructed(o)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::galois_group;
    use crate::cyclotomic::{CycloField, SubfieldSpec};

    fn planted(n: u64, k: &SubfieldSpec, seed: i64) -> (Cocycle, Mobius) {
        let f = CycloField::get(n);
        let g = galois_group(n, k).unwrap();
        let z = CycloElem::zeta(&f);
        let a0 = Mobius::new(
            &z + &CycloElem::from_int(&f, seed),
            CycloElem::from_int(&f, 1),
            z.pow(2),
            CycloElem::from_int(&f, 2 - seed),
        )
        .unwrap();
        (Cocycle::coboundary(g, &a0), a0)
    }

    #[test]
    fn trivial_cocycle_splits_by_identity() {
        let g = galois_group(9, &SubfieldSpec::rationals(9)).unwrap();
        let zeta = Cocycle::trivial(g);
        for route in [Route::Norm, Route::Conic, Route::Auto] {
            assert!(matches!(trivialize_cocycle(&zeta, route, 50).unwrap(), Trivialization::Coboundary { .. }));
        }
    }

    #[test]
    fn planted_coboundaries_all_routes() {
        let cases = [
            (5, SubfieldSpec::rationals(5)),
            (9, SubfieldSpec::new(9, &[4]).unwrap()),
            (8, SubfieldSpec::new(8, &[7]).unwrap()),
            (16, SubfieldSpec::new(16, &[7]).unwrap()),
            (16, SubfieldSpec::new(16, &[5]).unwrap()),
        ];
        for (n, k) in cases {
            for seed in 0..3 {
                let (zeta, _) = planted(n, &k, seed);
                for route in [Route::Norm, Route::Conic] {
                    match trivialize_cocycle(&zeta, route, 400).unwrap() {
                        Trivialization::Coboundary { a, .. } => assert!(splits(&zeta, &a)),
                        Trivialization::Obstructed(o) => panic!("K_{n} {k:?} seed {seed} {route:?}: {o:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn swap_cocycle_with_nonsplit_quaternions() {
        // sigma_{-1} acting on K_4 by t -> -1/t gives the conic x^2 + y^2 + z^2
        let k4 = CycloField::get(4);
        let g = galois_group(4, &SubfieldSpec::rationals(4)).unwrap();
        let w = Mobius::from_ints(&k4, 0, -1, 1, 0).unwrap();
        let zeta = Cocycle::new(g, BTreeMap::from([(1, Mobius::identity(&k4)), (3, w)])).unwrap();
        match trivialize_cocycle(&zeta, Route::Conic, 50).unwrap() {
            Trivialization::Obstructed(o) => assert!(o.is_proof(), "{o:?}"),
            other => panic!("{other:?}"),
        }
        match trivialize_cocycle(&zeta, Route::Norm, 200).unwrap() {
            Trivialization::Obstructed(Obstruction::NormEquationUnsolved { .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_cocycle_rejected() {
        let k4 = CycloField::get(4);
        let g = galois_group(4, &SubfieldSpec::rationals(4)).unwrap();
        let bad = Cocycle::coboundary(g.clone(), &Mobius::identity(&k4));
        let mut values = bad.values().clone();
        values.insert(3, Mobius::from_ints(&k4, 2, 0, 0, 1).unwrap());
        assert!(matches!(Cocycle::new(g, values), Err(Error::InvalidCocycle(_))));
    }

    use proptest::prelude::*;

    use crate::cohomology::{lift_and_mu, preu_f, preu_target, TwoCocycle};

    /// `(conductor, generators of the fixing group)`; the first three are `K = Q`.
    const EXTENSIONS: [(u64, &[u64]); 7] =
        [(4, &[3]), (5, &[2]), (8, &[3, 7]), (5, &[4]), (8, &[7]), (8, &[5]), (9, &[4])];

    fn random_coboundary(which: usize, e: &[Vec<i64>]) -> Option<(Cocycle, Mobius, SubfieldSpec)> {
        let (n, gens) = EXTENSIONS[which];
        let f = CycloField::get(n);
        let k = SubfieldSpec::new(n, gens).unwrap();
        let x: Vec<CycloElem> = e.iter().map(|c| CycloElem::from_int_coeffs(&f, &c[..f.degree()])).collect();
        let a0 = Mobius::new(x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone()).ok()?;
        Some((Cocycle::coboundary(galois_group(n, &k).unwrap(), &a0), a0, k))
    }

    fn entries() -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-1i64..=1, 6), 4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(25))]

        #[test]
        fn lift_defect_is_a_two_cocycle(which in 0..EXTENSIONS.len(), e in entries()) {
            let Some((zeta, _, _)) = random_coboundary(which, &e) else { return Ok(()) };
            let (_, mu) = lift_and_mu(&zeta).unwrap();
            prop_assert!(mu.check().is_ok());
        }

        #[test]
        fn preu_f_trivializes_constructed_coboundaries(
            which in 0..2usize,
            a in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 6),
        ) {
            let n = [5u64, 9][which];
            let f = CycloField::get(n);
            let g = galois_group(n, &SubfieldSpec::rationals(n)).unwrap();
            let values: std::collections::BTreeMap<u64, CycloElem> = g
                .elements()
                .iter()
                .zip(a.iter().cycle())
                .map(|(&d, c)| (d, CycloElem::from_int_coeffs(&f, &c[..f.degree()])))
                .collect();
            if values.values().any(CycloElem::is_zero) {
                return Ok(());
            }
            let mu = TwoCocycle::coboundary(g.clone(), &values).unwrap();
            let (s, _) = g.generators()[0];
            let a_prime = values[&s].inv().unwrap();
            prop_assert_eq!(crate::cohomology::group_norm(&a_prime, &g), preu_target(&mu).unwrap());
            let f = preu_f(&mu, &a_prime).unwrap();
            prop_assert!(mu.is_coboundary_of(&f));
        }

        #[test]
        fn trivializers_reproduce_the_cocycle(which in 0..EXTENSIONS.len(), e in entries()) {
            let Some((zeta, _, k)) = random_coboundary(which, &e) else { return Ok(()) };
            let mut split = Vec::new();
            for route in [Route::Norm, Route::Conic] {
                match trivialize_cocycle(&zeta, route, 100).unwrap() {
                    Trivialization::Coboundary { a, .. } => {
                        for (&d, z) in zeta.values() {
                            prop_assert_eq!(&a.inverse().mul(&a.galois(d)), z);
                        }
                        split.push(a);
                    }
                    // a coboundary never carries a proof of non-splitting
                    Trivialization::Obstructed(o) => prop_assert!(!o.is_proof()),
                }
            }
            // over Q the conic route decides, so it always splits
            if k.is_rationals() {
                prop_assert!(!split.is_empty());
            }
            // two trivializers differ by a K-rational map
            if let [a, b] = &split[..] {
                let k_m = k.lift_to(zeta.group().conductor()).unwrap();
                prop_assert!(a.mul(&b.inverse()).entries_in(&k_m));
            }
        }
    }
}
