use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fixture::ingest_fixture;
use super::record::Status;
use super::search::{search, SearchConfig};
use super::verify::{verify, CheckResult};
use crate::arith::divisors;
use crate::cohomology::{galois_group, hilbert90, trivialize_cocycle, Cocycle, MatrixCocycle, Route, Trivialization};
use crate::conic::{has_point_over_q, QSolvability};
use crate::cyclotomic::{cyclotomic_polynomial, CycloElem, CycloField, SubfieldSpec};
use crate::linalg::Matrix;
use crate::ratfunc::{Mobius, Poly, RatFunc};
use crate::solver::solve_mobius_equation;

fn check(name: &str, pass: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult { name: name.into(), pass, detail: detail.into() }
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// A random element with small integer coordinates.
pub fn random_elem(field: &std::sync::Arc<CycloField>, rng: &mut ChaCha8Rng, h: i64) -> CycloElem {
    let coeffs: Vec<i64> = (0..field.degree()).map(|_| rng.gen_range(-h..=h)).collect();
    CycloElem::from_int_coeffs(field, &coeffs)
}

/// A random invertible Mobius map with small entries.
pub fn random_mobius(field: &std::sync::Arc<CycloField>, rng: &mut ChaCha8Rng, h: i64) -> Mobius {
    loop {
        let e: Vec<CycloElem> = (0..4).map(|_| random_elem(field, rng, h)).collect();
        if let Ok(g) = Mobius::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()) {
            return g;
        }
    }
}

fn cyclotomic_product() -> CheckResult {
    for n in 1..=60u64 {
        let prod = divisors(n)
            .into_iter()
            .fold(vec![BigInt::one()], |acc, d| int_poly_mul(&acc, &cyclotomic_polynomial(d)));
        let mut want = vec![BigInt::zero(); n as usize + 1];
        want[0] = -BigInt::one();
        want[n as usize] = BigInt::one();
        if prod != want {
            return check("cyclotomic product", false, format!("fails at N = {n}"));
        }
    }
    check("cyclotomic product", true, "prod Phi_d = x^N - 1 for N <= 60")
}

fn galois_laws(rng: &mut ChaCha8Rng) -> CheckResult {
    for n in [7u64, 9, 16] {
        let f = CycloField::get(n);
        let units = crate::arith::units(n);
        for _ in 0..20 {
            let (a, b) = (random_elem(&f, rng, 5), random_elem(&f, rng, 5));
            let d = units[rng.gen_range(0..units.len())];
            let e = units[rng.gen_range(0..units.len())];
            let hom = (&a * &b).galois_unchecked(d) == &a.galois_unchecked(d) * &b.galois_unchecked(d);
            let comp = a.galois_unchecked(e).galois_unchecked(d) == a.galois_unchecked(d * e % n);
            if !hom || !comp {
                return check("galois laws", false, format!("K_{n}, sigma_{d}, sigma_{e}"));
            }
        }
    }
    check("galois laws", true, "homomorphism and composition on 60 random elements")
}

fn hilbert90_round_trip(rng: &mut ChaCha8Rng) -> CheckResult {
    for n in [4u64, 5, 8] {
        let f = CycloField::get(n);
        let g = galois_group(n, &SubfieldSpec::rationals(n)).expect("group");
        for _ in 0..3 {
            let a = loop {
                let m = Matrix::from_fn(2, 2, |_, _| random_elem(&f, rng, 3));
                if !m.det().is_zero() {
                    break m;
                }
            };
            let ok = MatrixCocycle::coboundary(g.clone(), &a)
                .and_then(|psi| hilbert90(&psi).map(|b| psi.is_split_by(&b)))
                .unwrap_or(false);
            if !ok {
                return check("hilbert 90", false, format!("round trip fails over K_{n}"));
            }
        }
    }
    check("hilbert 90", true, "9 random coboundaries over K_4, K_5, K_8")
}

fn mobius_solver() -> CheckResult {
    let k9 = CycloField::get(9);
    let t3 = RatFunc::from_poly(Poly::from_ints(&k9, &[0, 0, 0, 1]));
    let n = solve_mobius_equation(&t3, &t3, &k9).map(|s| s.len()).unwrap_or(0);
    check("mobius solver", n == 3, format!("t^3 over K_9 has {n} symmetries"))
}

fn conic_decisions() -> CheckResult {
    let q = |x: i64| BigRational::from_integer(x.into());
    let pyth = matches!(has_point_over_q(&[q(1), q(1), q(-1)]), Ok(QSolvability::Point(_)));
    let definite = matches!(has_point_over_q(&[q(1), q(1), q(1)]), Ok(QSolvability::NoPoint { .. }));
    let three = matches!(has_point_over_q(&[q(1), q(1), q(-3)]), Ok(QSolvability::NoPoint { .. }));
    check("conic over Q", pyth && definite && three, "x^2+y^2-z^2, x^2+y^2+z^2, x^2+y^2-3z^2")
}

fn trivialize_round_trip(rng: &mut ChaCha8Rng) -> CheckResult {
    // over Q the conic route is a decision procedure, so every planted
    // coboundary must split
    for (n, gen) in [(4u64, 3u64), (5, 2), (8, 3)] {
        let f = CycloField::get(n);
        let k = SubfieldSpec::new(n, &[gen, n - 1]).expect("subfield");
        let g = galois_group(n, &k).expect("group");
        for _ in 0..3 {
            let zeta = Cocycle::coboundary(g.clone(), &random_mobius(&f, rng, 2));
            if !matches!(trivialize_cocycle(&zeta, Route::Conic, 300), Ok(Trivialization::Coboundary { .. })) {
                return check("trivialize", false, format!("conic route fails over K_{n}/Q"));
            }
        }
    }
    check("trivialize", true, "planted coboundaries over K_4, K_5, K_8 split by the conic route")
}

fn fixture_checks(dir: &Path, precision: i64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut entries: Vec<_> = match std::fs::read_dir(dir) {
        Ok(rd) => rd.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|e| e == "json")).collect(),
        Err(e) => return vec![check("fixtures", false, format!("{}: {e}", dir.display()))],
    };
    entries.sort();
    let mut fixtures = BTreeMap::new();
    for path in entries {
        match ingest_fixture(&path, precision) {
            Ok(f) => {
                out.push(check(&format!("fixture {}", f.label), true, "schema and j-expansion"));
                fixtures.insert(f.label.clone(), f);
            }
            Err(e) => out.push(check(&format!("fixture {}", path.display()), false, e.to_string())),
        }
    }
    if let Some(f) = fixtures.get("3D0") {
        for route in [Route::Norm, Route::Conic] {
            let name = format!("search/verify 3D0 ({route:?} route)");
            let config = SearchConfig { route, subfield: SubfieldSpec::new(3, &[1]).ok(), ..SearchConfig::default() };
            out.push(match search(f, &config) {
                Ok(r) => {
                    let report = verify(&r.records, &fixtures);
                    let split = r.records.iter().all(|rec| rec.status == Status::Verified);
                    check(&name, report.passed() && split, format!("{} rows", report.rows.len()))
                }
                Err(e) => check(&name, false, e.to_string()),
            });
        }
    }
    out
}

/// Quick internal consistency checks; `seed` drives the random instances.
pub fn selftest(fixtures_dir: &Path, precision: i64, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        cyclotomic_product(),
        galois_laws(&mut rng),
        hilbert90_round_trip(&mut rng),
        mobius_solver(),
        conic_decisions(),
        trivialize_round_trip(&mut rng),
    ];
    out.extend(fixture_checks(fixtures_dir, precision));
    out
}
