use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::cyclotomic::{CycloElem, CycloField};
use crate::error::{Error, Result};
use crate::ratfunc::{Mobius, PointP1, RatFunc};

use super::fiber::fiber;

/// Probes beyond the three interpolation points used to discard candidates early.
const FILTER_PROBES: usize = 2;
const MAX_PROBES: usize = 64;

/// Deterministic probe points: 1, 2, 3, -1, 1/2, then rationals of growing height.
pub fn probe_sequence() -> impl Iterator<Item = BigRational> {
    let head = [(1, 1), (2, 1), (3, 1), (-1, 1), (1, 2)];
    let head_iter = head.into_iter();
    let tail = (2i64..).flat_map(|h| {
        let mut v = Vec::new();
        for q in 1..=h {
            for p in -h..=h {
                if p == 0 || (p.abs() != h && q != h) || num_integer::gcd(p, q) != 1 {
                    continue;
                }
                v.push((p, q));
            }
        }
        v
    });
    head_iter
        .chain(tail.filter(move |pq| !head.contains(pq)))
        .map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
}

fn homogeneous(p: &PointP1, field: &Arc<CycloField>) -> [CycloElem; 2] {
    match p {
        PointP1::Finite(x) => [x.clone(), CycloElem::one(field)],
        PointP1::Infinity => [CycloElem::one(field), CycloElem::zero(field)],
    }
}

/// The matrix sending `(1:0), (0:1), (1:1)` to three distinct points.
fn frame(points: [&PointP1; 3], field: &Arc<CycloField>) -> Option<[CycloElem; 4]> {
    let [v1, v2, v3] = points.map(|p| homogeneous(p, field));
    let det = &(&v1[0] * &v2[1]) - &(&v2[0] * &v1[1]);
    if det.is_zero() {
        return None;
    }
    let l1 = (&(&v3[0] * &v2[1]) - &(&v2[0] * &v3[1])).checked_div(&det).ok()?;
    let l2 = (&(&v1[0] * &v3[1]) - &(&v3[0] * &v1[1])).checked_div(&det).ok()?;
    if l1.is_zero() || l2.is_zero() {
        return None;
    }
    Some([&l1 * &v1[0], &l2 * &v2[0], &l1 * &v1[1], &l2 * &v2[1]])
}

/// The unique Mobius map with `g(src_i) = dst_i`, if the points are distinct.
pub fn interpolate(src: [&PointP1; 3], dst: [&PointP1; 3], field: &Arc<CycloField>) -> Option<Mobius> {
    let [a, b, c, d] = frame(src, field)?;
    let from = Mobius::new(a, b, c, d).ok()?;
    let [a, b, c, d] = frame(dst, field)?;
    let to = Mobius::new(a, b, c, d).ok()?;
    Some(to.mul(&from.inverse()))
}

/// All `g` in `PGL_2(ambient)` with `target = source o g`.
pub fn solve_mobius_equation(source: &RatFunc, target: &RatFunc, ambient: &Arc<CycloField>) -> Result<Vec<Mobius>> {
    if source.is_constant() || target.is_constant() {
        return Err(Error::ConstantMap);
    }
    if source.degree() != target.degree() {
        return Ok(Vec::new());
    }
    let m = ambient.conductor();
    let source = source.embed(m)?;
    let target = target.embed(m)?;

    let needed = 3 + FILTER_PROBES;
    let mut probes: Vec<PointP1> = Vec::with_capacity(needed);
    let mut fibers: Vec<Vec<PointP1>> = Vec::with_capacity(needed);
    for tau in probe_sequence().take(MAX_PROBES) {
        if probes.len() == needed {
            break;
        }
        let tau = PointP1::Finite(CycloElem::from_rational(ambient, &tau));
        let y = target.evaluate(&tau)?;
        let fib: Vec<PointP1> = fiber(&source, &y)?.into_iter().map(|p| p.value).collect();
        if fib.is_empty() {
            return Ok(Vec::new());
        }
        probes.push(tau);
        fibers.push(fib);
    }
    if probes.len() < needed {
        return Err(Error::DegenerateProbes);
    }
    // interpolate through the smallest fibers, filter with the rest
    let mut order: Vec<usize> = (0..needed).collect();
    order.sort_by_key(|&i| (fibers[i].len(), i));
    let (basis, checks) = order.split_at(3);
    let check_sets: Vec<(PointP1, HashSet<PointP1>)> = checks
        .iter()
        .map(|&i| (probes[i].clone(), fibers[i].iter().cloned().collect()))
        .collect();

    let mut triples = Vec::new();
    for s1 in &fibers[basis[0]] {
        for s2 in &fibers[basis[1]] {
            for s3 in &fibers[basis[2]] {
                if s1 != s2 && s2 != s3 && s1 != s3 {
                    triples.push([s1, s2, s3]);
                }
            }
        }
    }
    let src_pts = [&probes[basis[0]], &probes[basis[1]], &probes[basis[2]]];
    let mut found: Vec<Mobius> = triples
        .par_iter()
        .filter_map(|dst| {
            let g = interpolate(src_pts, *dst, ambient)?;
            let passes = check_sets.iter().all(|(tau, set)| set.contains(&g.apply(tau)));
            (passes && source.compose(&g) == target).then_some(g)
        })
        .collect();
    found.sort_by_key(|g| format!("{g:?}"));
    found.dedup();
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::Poly;

    #[test]
    fn probe_prefix() {
        let v: Vec<String> = probe_sequence().take(8).map(|q| q.to_string()).collect();
        assert_eq!(&v[..5], &["1", "2", "3", "-1", "1/2"]);
        let mut dedup = v.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), v.len());
    }

    #[test]
    fn cube_map_symmetries() {
        let k9 = CycloField::get(9);
        let t3 = RatFunc::from_poly(Poly::from_ints(&k9, &[0, 0, 0, 1]));
        let sols = solve_mobius_equation(&t3, &t3, &k9).unwrap();
        assert_eq!(sols.len(), 3);
        for k in [0, 3, 6] {
            let g = Mobius::scaling(CycloElem::zeta_pow(&k9, k)).unwrap();
            assert!(sols.contains(&g));
            assert_eq!(t3.compose(&g), t3);
        }
    }

    #[test]
    fn joukowski_symmetries() {
        let q = CycloField::get(1);
        let f = RatFunc::new(Poly::from_ints(&q, &[1, 0, 1]), Poly::from_ints(&q, &[0, 1])).unwrap();
        let sols = solve_mobius_equation(&f, &f, &q).unwrap();
        let id = Mobius::identity(&q);
        let w = Mobius::from_ints(&q, 0, 1, 1, 0).unwrap();
        assert_eq!(sols.len(), 2);
        assert!(sols.contains(&id) && sols.contains(&w));
        let neg = Mobius::from_ints(&q, -1, 0, 0, 1).unwrap();
        assert_ne!(f.compose(&neg), f);
    }

    #[test]
    fn no_solution() {
        let q = CycloField::get(1);
        let t2 = RatFunc::from_poly(Poly::from_ints(&q, &[0, 0, 1]));
        let t2p1 = RatFunc::from_poly(Poly::from_ints(&q, &[1, 0, 1]));
        assert!(solve_mobius_equation(&t2, &t2p1, &q).unwrap().is_empty());
    }

    use proptest::prelude::*;

    fn elem(field: &Arc<CycloField>, c: &[i64]) -> CycloElem {
        CycloElem::from_int_coeffs(field, &c[..field.degree()])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn solutions_are_exact_and_include_the_planted_map(
            which in 0..3usize,
            num in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 3..5),
            den in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..3),
            g in prop::collection::vec(prop::collection::vec(-2i64..=2, 4), 4),
        ) {
            let field = CycloField::get([3u64, 4, 5][which]);
            let num = Poly::new(&field, num.iter().map(|c| elem(&field, c)).collect());
            let den = Poly::new(&field, den.iter().map(|c| elem(&field, c)).collect());
            if den.is_zero() {
                return Ok(());
            }
            let Ok(pi) = RatFunc::new(num, den) else { return Ok(()) };
            if pi.degree() < 2 {
                return Ok(());
            }
            let Ok(g) = Mobius::new(elem(&field, &g[0]), elem(&field, &g[1]), elem(&field, &g[2]), elem(&field, &g[3])) else {
                return Ok(());
            };
            let target = pi.compose(&g);
            let sols = solve_mobius_equation(&pi, &target, &field).unwrap();
            for h in &sols {
                prop_assert_eq!(&pi.compose(h), &target);
            }
            prop_assert!(sols.contains(&g));
        }
    }
}
