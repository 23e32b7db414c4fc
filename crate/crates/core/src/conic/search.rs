use num_rational::BigRational;
use num_traits::Signed;

use super::form::{diagonalize, ConicForm, ConicPoint};
use crate::arith::exact_sqrt;
use crate::cyclotomic::{CycloElem, SubfieldSpec};
use crate::error::Result;
use crate::ratfunc::Poly;
use crate::solver::{rational_roots, supported_conductor};

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    Some(BigRational::new(exact_sqrt(q.numer())?, exact_sqrt(q.denom())?))
}

/// A square root of `r` lying in `k`, if one exists (and roots over the
/// ambient field are computable).
pub fn sqrt_in(r: &CycloElem, k: &SubfieldSpec) -> Result<Option<CycloElem>> {
    if r.is_zero() {
        return Ok(Some(r.clone()));
    }
    if let Some(q) = r.to_rational() {
        if let Some(s) = rational_sqrt(&q) {
            return Ok(Some(CycloElem::from_rational(r.field(), &s)));
        }
    }
    // a square has a square absolute norm
    if rational_sqrt(&r.absolute_norm()).is_none() || !supported_conductor(r.conductor()) {
        return Ok(None);
    }
    let field = r.field();
    let poly = Poly::new(field, vec![-r, CycloElem::zero(field), CycloElem::one(field)]);
    Ok(rational_roots(&poly)?.into_iter().find(|s| k.contains(s)))
}

/// Elements of `k` with basis coordinates in `[-h, h]`, maximum exactly `h`,
/// in a fixed order.
fn height_shell(k: &SubfieldSpec, h: i64) -> Vec<CycloElem> {
    let basis = k.basis();
    let width = (2 * h + 1) as usize;
    let total = width.pow(basis.len() as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rest = idx;
        let mut coords = Vec::with_capacity(basis.len());
        for _ in basis {
            coords.push((rest % width) as i64 - h);
            rest /= width;
        }
        if coords.iter().map(|c| c.abs()).max() != Some(h) {
            continue;
        }
        let q: Vec<BigRational> = coords.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        out.push(k.from_coordinates(&q));
    }
    out
}

/// Bounded search for a `K`-point. `None` is inconclusive: it does not
/// prove the conic has no point.
pub fn search_point_over_k(form: &ConicForm, budget: usize) -> Result<Option<ConicPoint>> {
    let k = form.field();
    let field = k.field();
    let zero = CycloElem::zero(field);
    let one = CycloElem::one(field);
    let unit = |i: usize| {
        let mut c = [zero.clone(), zero.clone(), zero.clone()];
        c[i] = one.clone();
        ConicPoint { coords: c }
    };
    for i in 0..3 {
        if form.gram().get(i, i).is_zero() {
            return Ok(Some(unit(i)));
        }
    }
    let (d, t) = diagonalize(form);
    let lift = |w: [CycloElem; 3]| {
        let v = t.mul_vec(&w);
        ConicPoint { coords: [v[0].clone(), v[1].clone(), v[2].clone()] }
    };
    // d_i + d_j s^2 = 0
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let r = -&d[i].checked_div(&d[j])?;
        if let Some(s) = sqrt_in(&r, k)? {
            let mut w = [zero.clone(), zero.clone(), zero.clone()];
            w[i] = one.clone();
            w[j] = s;
            return Ok(Some(lift(w)));
        }
    }
    // w = (1, y, z) with z^2 = -(d0 + d1 y^2) / d2
    let mut tried = 0;
    let mut h = 1;
    while tried < budget {
        let shell = height_shell(k, h);
        if shell.is_empty() {
            break;
        }
        for num in shell {
            for den in 1..=h {
                if tried >= budget {
                    break;
                }
                tried += 1;
                let y = num.scale(&BigRational::new(1.into(), den.into()));
                let r = -&(&d[0] + &(&d[1] * &(&y * &y))).checked_div(&d[2])?;
                if let Some(z) = sqrt_in(&r, k)? {
                    let p = lift([one.clone(), y, z]);
                    debug_assert!(form.contains(&p));
                    return Ok(Some(p));
                }
            }
        }
        h += 1;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conic::transfer::standard_gram;
    use crate::cyclotomic::CycloField;
    use crate::linalg::Matrix;

    #[test]
    fn obvious_points() {
        let k5 = CycloField::get(5);
        let k = SubfieldSpec::new(5, &[4]).unwrap();
        let form = ConicForm::new(standard_gram(&CycloElem::one(&k5)), k).unwrap();
        let p = search_point_over_k(&form, 10).unwrap().unwrap();
        assert!(form.contains(&p));
        assert!(p.coords[0].is_one() && p.coords[1].is_zero() && p.coords[2].is_zero());
    }

    #[test]
    fn finds_point_over_real_quadratic_field() {
        // x^2 + y^2 - 5 z^2 has the point (1, 2, 1)
        let k5 = CycloField::get(5);
        let k = SubfieldSpec::new(5, &[4]).unwrap();
        let e = |x| CycloElem::from_int(&k5, x);
        let g = Matrix::from_rows(vec![vec![e(1), e(0), e(0)], vec![e(0), e(1), e(0)], vec![e(0), e(0), e(-5)]]);
        let form = ConicForm::new(g, k.clone()).unwrap();
        let p = search_point_over_k(&form, 50).unwrap().unwrap();
        assert!(form.contains(&p));
        // x^2 + 3 y^2 - 5 z^2 has (sqrt 5, 0, 1)
        let g = Matrix::from_rows(vec![vec![e(1), e(0), e(0)], vec![e(0), e(3), e(0)], vec![e(0), e(0), e(-5)]]);
        let form = ConicForm::new(g, k).unwrap();
        let p = search_point_over_k(&form, 50).unwrap().unwrap();
        assert!(form.contains(&p));
        assert!(p.coords[1].is_zero());
    }

    #[test]
    fn square_roots_in_subfields() {
        let k8 = CycloField::get(8);
        let real = SubfieldSpec::new(8, &[7]).unwrap();
        let gauss = SubfieldSpec::new(8, &[5]).unwrap();
        let two = CycloElem::from_int(&k8, 2);
        assert!(sqrt_in(&two, &real).unwrap().is_some());
        assert!(sqrt_in(&two, &gauss).unwrap().is_none());
        assert!(sqrt_in(&-&CycloElem::one(&k8), &gauss).unwrap().is_some());
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn found_points_lie_on_the_conic(
            which in 0..3usize,
            diag in prop::collection::vec(prop::collection::vec(-5i64..=5, 2), 3),
        ) {
            let (n, gen) = [(5u64, 4u64), (8, 7), (8, 3)][which];
            let k = SubfieldSpec::new(n, &[gen]).unwrap();
            let f = CycloField::get(n);
            let coords = |c: &[i64]| k.from_coordinates(&c.iter().map(|&x| BigRational::from_integer(x.into())).collect::<Vec<_>>());
            let d: Vec<CycloElem> = diag.iter().map(|c| coords(c)).collect();
            if d.iter().any(CycloElem::is_zero) {
                return Ok(());
            }
            let z = CycloElem::zero(&f);
            let g = Matrix::from_rows(vec![
                vec![d[0].clone(), z.clone(), z.clone()],
                vec![z.clone(), d[1].clone(), z.clone()],
                vec![z.clone(), z.clone(), d[2].clone()],
            ]);
            let form = ConicForm::new(g, k).unwrap();
            if let Some(p) = search_point_over_k(&form, 40).unwrap() {
                prop_assert!(form.contains(&p));
                prop_assert!(p.coords.iter().any(|c| !c.is_zero()));
            }
        }
    }
}
