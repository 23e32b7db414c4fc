use num_rational::BigRational;

use super::form::{conic_from_cocycle, diagonalize, ConicForm, ConicPoint};
use super::qpoint::{has_point_over_q, Place, QSolvability};
use super::search::search_point_over_k;
use crate::cohomology::Cocycle;
use crate::cyclotomic::CycloElem;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ratfunc::{Mobius, Poly, RatFunc};

/// Result of the conic route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConicOutcome {
    /// `zeta(sigma) = A^-1 sigma(A)`, with the point that produced `A`.
    Split { a: Mobius, form: ConicForm, point: ConicPoint },
    /// No `K`-point: the local obstruction at `place` (only decided over `Q`).
    NoPoint { form: ConicForm, place: Place },
    /// Bounded search over `K != Q` found nothing.
    Inconclusive { form: ConicForm, budget: usize },
}

fn splits(zeta: &Cocycle, a: &Mobius) -> bool {
    let inv = a.inverse();
    zeta.group()
        .elements()
        .iter()
        .all(|&d| inv.mul(&a.galois(d)) == *zeta.value(d))
}

/// `A` with `zeta(sigma) = A^-1 sigma(A)` from a `K`-point `p` of the conic
/// `Q_0(M^-1 v) = 0`, where `M` splits `phi o zeta`.
///
/// Lines through `p` parametrize the conic over `K`; pulling that
/// parametrization back through `M` and the Veronese map gives a Mobius map
/// `B` from the parameter line to `P^1`, and `A = B^-1`.
pub fn trivializer_from_point(
    zeta: &Cocycle,
    m: &Matrix<CycloElem>,
    form: &ConicForm,
    p: &ConicPoint,
) -> Result<Mobius> {
    if !form.contains(p) {
        return Err(Error::InvariantViolation("point is not on the conic".into()));
    }
    let field = zeta.field();
    let zero = CycloElem::zero(&field);
    let one = CycloElem::one(&field);
    let pivot = (0..3).find(|&i| !p.coords[i].is_zero()).expect("nonzero point");
    let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    let unit = |i: usize| {
        let mut v = vec![zero.clone(); 3];
        v[i] = one.clone();
        v
    };
    let (e1, e2) = (unit(others[0]), unit(others[1]));
    let pv = p.coords.to_vec();
    // F(t) = Q(D) P - 2 B(P, D) D with D = t e1 + e2
    let q_d = Poly::new(&field, vec![form.evaluate(&e2), &form.bilinear(&e1, &e2) * &CycloElem::from_int(&field, 2), form.evaluate(&e1)]);
    let b_pd = Poly::new(&field, vec![form.bilinear(&pv, &e2), form.bilinear(&pv, &e1)]);
    let two_b = b_pd.scale(&CycloElem::from_int(&field, 2));
    let d_poly: Vec<Poly> = (0..3).map(|i| Poly::new(&field, vec![e2[i].clone(), e1[i].clone()])).collect();
    let f: Vec<Poly> = (0..3)
        .map(|i| q_d.scale(&pv[i]).sub(&two_b.mul(&d_poly[i])))
        .collect();
    let minv = m.inverse()?;
    let w: Vec<Poly> = (0..3)
        .map(|r| (0..3).fold(Poly::zero(&field), |acc, c| acc.add(&f[c].scale(minv.get(r, c)))))
        .collect();
    // w is proportional to (u0^2, u0 u1, u1^2) with u0 / u1 = B(t)
    let ratio = if w[1].is_zero() {
        RatFunc::new(w[1].clone(), w[2].clone())?
    } else {
        RatFunc::new(w[0].clone(), w[1].clone())?
    };
    if ratio.degree() != 1 {
        return Err(Error::InvariantViolation(format!(
            "conic parametrization has degree {}",
            ratio.degree()
        )));
    }
    let (num, den) = (ratio.num(), ratio.den());
    let b = Mobius::new(num.coeff(1), num.coeff(0), den.coeff(1), den.coeff(0))?;
    let a = b.inverse();
    if splits(zeta, &a) {
        return Ok(a);
    }
    if splits(zeta, &b) {
        return Ok(b);
    }
    Err(Error::ConventionMismatch)
}

/// Trivialize `zeta` through its conic: decided over `Q`, bounded search
/// over larger `K`.
pub fn conic_route(zeta: &Cocycle, budget: usize) -> Result<ConicOutcome> {
    let (form, m) = conic_from_cocycle(zeta)?;
    let point = if form.field().is_rationals() {
        let (d, t) = diagonalize(&form);
        let diag: Vec<BigRational> = d
            .iter()
            .map(|x| x.to_rational().expect("rational conic"))
            .collect();
        match has_point_over_q(&[diag[0].clone(), diag[1].clone(), diag[2].clone()])? {
            QSolvability::Point(w) => {
                let field = zeta.field();
                let w: Vec<CycloElem> = w.iter().map(|c| CycloElem::from_rational(&field, c)).collect();
                let v = t.mul_vec(&w);
                ConicPoint { coords: [v[0].clone(), v[1].clone(), v[2].clone()] }
            }
            QSolvability::NoPoint { place } => return Ok(ConicOutcome::NoPoint { form, place }),
        }
    } else {
        match search_point_over_k(&form, budget)? {
            Some(p) => p,
            None => return Ok(ConicOutcome::Inconclusive { form, budget }),
        }
    };
    let a = trivializer_from_point(zeta, &m, &form, &point)?;
    Ok(ConicOutcome::Split { a, form, point })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::galois_group;
    use crate::cyclotomic::{CycloField, SubfieldSpec};

    #[test]
    fn trivial_cocycle_gives_rational_trivializer() {
        let g = galois_group(5, &SubfieldSpec::rationals(5)).unwrap();
        let zeta = Cocycle::trivial(g);
        match conic_route(&zeta, 10).unwrap() {
            ConicOutcome::Split { a, .. } => assert!(splits(&zeta, &a)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn planted_coboundaries_round_trip() {
        for (n, k) in [(4, SubfieldSpec::rationals(4)), (5, SubfieldSpec::rationals(5)), (8, SubfieldSpec::new(8, &[7]).unwrap()), (5, SubfieldSpec::new(5, &[4]).unwrap())] {
            let f = CycloField::get(n);
            let g = galois_group(n, &k).unwrap();
            let z = CycloElem::zeta(&f);
            let a0 = Mobius::new(&z + &CycloElem::from_int(&f, 1), CycloElem::from_int(&f, 2), z.pow(3), CycloElem::from_int(&f, -1)).unwrap();
            let zeta = Cocycle::coboundary(g, &a0);
            match conic_route(&zeta, 200).unwrap() {
                ConicOutcome::Split { a, form, point } => {
                    assert!(splits(&zeta, &a));
                    assert!(form.contains(&point));
                }
                other => panic!("K_{n}: {other:?}"),
            }
        }
    }
}
