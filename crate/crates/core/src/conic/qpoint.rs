use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factorize_big, sqrt_mod_prime, squarefree_decompose};
use crate::error::{Error, Result};

/// Trial-division limit for the integers met in the Legendre reduction.
const FACTOR_LIMIT: u64 = 1 << 22;

/// A place of `Q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Prime(BigInt),
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Real => write!(f, "oo"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Outcome of the Legendre decision procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QSolvability {
    Point([BigRational; 3]),
    NoPoint { place: Place },
}

fn factor(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    factorize_big(n, FACTOR_LIMIT)
        .ok_or_else(|| Error::InvariantViolation(format!("could not factor {n}")))
}

fn squarefree(n: &BigInt) -> Result<(BigInt, BigInt)> {
    squarefree_decompose(n, FACTOR_LIMIT)
        .ok_or_else(|| Error::InvariantViolation(format!("could not factor {n}")))
}

/// `(x / p)` for an odd prime `p` not dividing `x`.
fn legendre(x: &BigInt, p: &BigInt) -> i32 {
    let e = (p - 1u32) / 2u32;
    let r = x.mod_floor(p).modpow(&e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// `v_p(x)` and the unit part.
fn split_valuation(x: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut u = x.clone();
    let mut v = 0;
    while (&u % p).is_zero() {
        u /= p;
        v += 1;
    }
    (v, u)
}

/// The Hilbert symbol `(a, b)_v` for nonzero integers.
pub fn hilbert_symbol(a: &BigInt, b: &BigInt, place: &Place) -> i32 {
    match place {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) if *p == BigInt::from(2) => {
            let (alpha, u) = split_valuation(a, p);
            let (beta, v) = split_valuation(b, p);
            let eps = |x: &BigInt| ((x - 1u32).mod_floor(&BigInt::from(4)) / 2u32).to_u32().unwrap_or(0);
            let omega = |x: &BigInt| {
                let r = x.mod_floor(&BigInt::from(8));
                u32::from(r == BigInt::from(3) || r == BigInt::from(5))
            };
            let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = split_valuation(a, p);
            let (beta, v) = split_valuation(b, p);
            let eps_p = ((p - 1u32) / 2u32).is_odd();
            let mut s = if eps_p && (alpha * beta) % 2 == 1 { -1 } else { 1 };
            if beta % 2 == 1 {
                s *= legendre(&u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre(&v, p);
            }
            s
        }
    }
}

/// Clear denominators of a diagonal form, keeping the solution set.
fn integral_diagonal(diag: &[BigRational; 3]) -> [BigInt; 3] {
    let l = diag.iter().fold(BigInt::one(), |acc, d| acc.lcm(d.denom()));
    let ints = diag.clone().map(|d| (d * BigRational::from_integer(l.clone())).to_integer());
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.map(|x| x / &g)
}

/// `t` with `t^2 = a mod |b|`, `|t| <= |b|/2`, for squarefree `b`.
fn sqrt_mod_squarefree(a: &BigInt, b: &BigInt) -> Result<BigInt> {
    let m = b.abs();
    let mut t = BigInt::zero();
    let mut modulus = BigInt::one();
    for (p, _) in factor(&m)? {
        let r = if (a % &p).is_zero() {
            BigInt::zero()
        } else if p == BigInt::from(2) {
            a.mod_floor(&p)
        } else {
            let pu = p
                .to_u64()
                .ok_or_else(|| Error::InvariantViolation(format!("prime {p} too large")))?;
            let au = a.mod_floor(&p).to_u64().expect("reduced mod p");
            BigInt::from(sqrt_mod_prime(au, pu).ok_or_else(|| {
                Error::InvariantViolation(format!("{a} is not a square mod {p}"))
            })?)
        };
        // CRT step
        let inv = modulus
            .extended_gcd(&p)
            .x
            .mod_floor(&p);
        let k = ((&r - &t) * inv).mod_floor(&p);
        t += &modulus * k;
        modulus *= &p;
    }
    let t = t.mod_floor(&m);
    Ok(if &t * 2 > m { t - m } else { t })
}

/// A nontrivial solution of `z^2 = a x^2 + b y^2` for squarefree `a`, `b`
/// known to be solvable, by Legendre descent.
fn legendre_descent(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    let one = BigInt::one();
    let zero = BigInt::zero();
    if a.is_one() {
        return Ok((one.clone(), zero.clone(), one));
    }
    if b.is_one() {
        return Ok((zero.clone(), one.clone(), one));
    }
    if a.abs() > b.abs() {
        let (y, x, z) = legendre_descent(b, a)?;
        return Ok((x, y, z));
    }
    if b.abs() <= one {
        return Err(Error::InvariantViolation(format!("z^2 = {a} x^2 + {b} y^2 is not solvable")));
    }
    let t = sqrt_mod_squarefree(a, b)?;
    let q = (&t * &t - a) / b;
    let (k, m) = squarefree(&q)?;
    let (x1, y1, z1) = legendre_descent(a, &k)?;
    let x = &z1 + &x1 * &t;
    let y = &k * &y1 * &m;
    let z = &z1 * &t + a * &x1;
    Ok((x, y, z))
}

/// Decide whether `d0 x^2 + d1 y^2 + d2 z^2 = 0` has a rational point and
/// produce one when it does.
pub fn has_point_over_q(diag: &[BigRational; 3]) -> Result<QSolvability> {
    if diag.iter().any(Zero::is_zero) {
        return Err(Error::InvariantViolation("degenerate diagonal form".into()));
    }
    let [d0, d1, d2] = integral_diagonal(diag);
    // z'^2 = A x^2 + B y^2 with z' = d2 z
    let big_a = -(&d0 * &d2);
    let big_b = -(&d1 * &d2);
    let (sa, ra) = squarefree(&big_a)?;
    let (sb, rb) = squarefree(&big_b)?;
    let mut places = BTreeSet::from([Place::Real, Place::Prime(BigInt::from(2))]);
    for n in [&sa, &sb] {
        for (p, _) in factor(n)? {
            places.insert(Place::Prime(p));
        }
    }
    for place in places {
        if hilbert_symbol(&sa, &sb, &place) == -1 {
            return Ok(QSolvability::NoPoint { place });
        }
    }
    let (x, y, z) = legendre_descent(&sa, &sb)?;
    // undo x' = ra x, y' = rb y, z' = d2 z, keeping integers
    let point = [
        BigRational::new(x * &rb * &d2, one_big()),
        BigRational::new(y * &ra * &d2, one_big()),
        BigRational::new(z * &ra * &rb, one_big()),
    ];
    let value = diag
        .iter()
        .zip(&point)
        .fold(BigRational::zero(), |acc, (d, c)| acc + d * c * c);
    if !value.is_zero() || point.iter().all(Zero::is_zero) {
        return Err(Error::InvariantViolation("Legendre descent produced a non-point".into()));
    }
    let g = point.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
    Ok(QSolvability::Point(point.map(|c| c / BigRational::from_integer(g.clone()))))
}

fn one_big() -> BigInt {
    BigInt::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn on_form(d: &[BigRational; 3], p: &[BigRational; 3]) -> bool {
        d.iter().zip(p).fold(BigRational::zero(), |acc, (a, c)| acc + a * c * c).is_zero()
            && p.iter().any(|c| !c.is_zero())
    }

    fn brute_force(d: [i64; 3], h: i64) -> bool {
        for x in 0..=h {
            for y in -h..=h {
                for z in -h..=h {
                    if (x, y, z) != (0, 0, 0) && d[0] * x * x + d[1] * y * y + d[2] * z * z == 0 {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn textbook_examples() {
        let pyth = [q(1), q(1), q(-1)];
        match has_point_over_q(&pyth).unwrap() {
            QSolvability::Point(p) => assert!(on_form(&pyth, &p)),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            has_point_over_q(&[q(1), q(1), q(1)]).unwrap(),
            QSolvability::NoPoint { place: Place::Real }
        );
        assert!(matches!(has_point_over_q(&[q(1), q(1), q(-3)]).unwrap(), QSolvability::NoPoint { .. }));
    }

    #[test]
    fn hilbert_symbol_values() {
        let b = |x: i64| BigInt::from(x);
        let two = Place::Prime(b(2));
        assert_eq!(hilbert_symbol(&b(-1), &b(-1), &two), -1);
        assert_eq!(hilbert_symbol(&b(2), &b(3), &two), -1);
        assert_eq!(hilbert_symbol(&b(2), &b(7), &two), 1);
        assert_eq!(hilbert_symbol(&b(3), &b(-1), &Place::Prime(b(3))), -1);
        assert_eq!(hilbert_symbol(&b(5), &b(-1), &Place::Prime(b(5))), 1);
    }

    #[test]
    fn rational_and_scaled_coefficients() {
        let d = [BigRational::new(1.into(), 4.into()), q(-18), q(7)];
        match has_point_over_q(&d).unwrap() {
            QSolvability::Point(p) => assert!(on_form(&d, &p)),
            QSolvability::NoPoint { place } => {
                assert!(!brute_force([1, -72, 28], 40), "claimed obstruction at {place}")
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]
        #[test]
        fn agrees_with_exhaustive_search(a in -20i64..=20, b in -20i64..=20, c in -20i64..=20) {
            prop_assume!(a != 0 && b != 0 && c != 0);
            let d = [q(a), q(b), q(c)];
            let decided = has_point_over_q(&d).unwrap();
            match decided {
                QSolvability::Point(ref p) => {
                    prop_assert!(on_form(&d, p));
                    prop_assert!(brute_force([a, b, c], 25));
                }
                QSolvability::NoPoint { .. } => prop_assert!(!brute_force([a, b, c], 25)),
            }
        }
    }
}
