//! Elementary number theory on machine integers and a few `BigInt` helpers.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd_i128(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn ext_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd_i128(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(1, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// Number of divisors of `n`.
pub fn num_divisors(n: u64) -> u64 {
    factorize(n).into_iter().map(|(_, e)| e as u64 + 1).product()
}

/// Multiplicative order of `a` modulo `n`; `None` if `a` is not a unit.
pub fn multiplicative_order(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    if n == 2 {
        return (a % 2 == 1).then_some(1);
    }
    if gcd(a % n, n) != 1 {
        return None;
    }
    let phi = euler_phi(n);
    let mut order = phi;
    for (p, _) in factorize(phi) {
        while order.is_multiple_of(p) && pow_mod(a, order / p, n) == 1 {
            order /= p;
        }
    }
    Some(order)
}

/// Units modulo `n` in ascending order. For `n = 1` the trivial group is
/// labelled by `1` so that every conductor has an identity element `1`.
pub fn units(n: u64) -> Vec<u64> {
    if n <= 2 {
        return vec![1];
    }
    (1..n).filter(|&d| gcd(d, n) == 1).collect()
}

/// Square root of `a` modulo an odd prime `p` (Tonelli-Shanks).
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Factorization of a nonzero `BigInt` by trial division. Returns `None` when a
/// cofactor above `limit`² remains unsplit.
pub fn factorize_big(n: &BigInt, limit: u64) -> Option<Vec<(BigInt, u32)>> {
    let mut m = n.abs();
    let mut out = Vec::new();
    if m.is_zero() {
        return None;
    }
    if let Some(small) = m.to_u64() {
        return Some(
            factorize(small)
                .into_iter()
                .map(|(p, e)| (BigInt::from(p), e))
                .collect(),
        );
    }
    let mut p = 2u64;
    while p <= limit {
        let bp = BigInt::from(p);
        if (&bp * &bp) > m {
            break;
        }
        if (&m % &bp).is_zero() {
            let mut e = 0;
            while (&m % &bp).is_zero() {
                m /= &bp;
                e += 1;
            }
            out.push((bp, e));
            if let Some(small) = m.to_u64() {
                for (q, f) in factorize(small) {
                    out.push((BigInt::from(q), f));
                }
                return Some(out);
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m.is_one() {
        return Some(out);
    }
    let lim = BigInt::from(limit);
    if m <= &lim * &lim || m.to_u64().map(is_prime).unwrap_or(false) {
        out.push((m, 1));
        return Some(out);
    }
    None
}

/// Exact integer square root of a nonnegative `BigInt`.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact integer k-th root (sign-aware for odd k).
pub fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if k == 0 {
        return None;
    }
    if n.is_negative() && k.is_multiple_of(2) {
        return None;
    }
    let r = if n.is_negative() {
        -((-n).nth_root(k))
    } else {
        n.nth_root(k)
    };
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Symmetric residue of `a` modulo `m` in (-m/2, m/2].
pub fn symmetric_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Inverse of `a` modulo `m` for big integers.
pub fn inv_mod_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

pub fn big_pow(base: u64, exp: u32) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// Squarefree part of a nonzero integer together with the square factor:
/// `n = sign * core * square^2`.
pub fn squarefree_decompose(n: &BigInt, limit: u64) -> Option<(BigInt, BigInt)> {
    let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    let fac = factorize_big(n, limit)?;
    let mut core = BigInt::from(sign);
    let mut square = BigInt::one();
    for (p, e) in fac {
        if e % 2 == 1 {
            core *= &p;
        }
        square *= num_traits::pow(p, (e / 2) as usize);
    }
    Some((core, square))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_number_theory() {
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(16), 8);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(multiplicative_order(2, 9), Some(6));
        assert_eq!(multiplicative_order(3, 9), None);
        assert_eq!(inv_mod(4, 9), Some(7));
        assert_eq!(num_divisors(6), 4);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn tonelli_shanks_matches_brute_force() {
        for p in [3u64, 5, 7, 13, 17, 41, 97] {
            for a in 0..p {
                let brute = (0..p).any(|x| x * x % p == a);
                match sqrt_mod_prime(a, p) {
                    Some(r) => assert_eq!(r * r % p, a),
                    None => assert!(!brute, "missed sqrt of {a} mod {p}"),
                }
            }
        }
    }

    #[test]
    fn squarefree_parts() {
        let (core, sq) = squarefree_decompose(&BigInt::from(-72), 1000).unwrap();
        assert_eq!(core, BigInt::from(-2));
        assert_eq!(sq, BigInt::from(6));
        assert_eq!(exact_root(&BigInt::from(-27), 3), Some(BigInt::from(-3)));
        assert_eq!(exact_sqrt(&BigInt::from(50)), None);
    }
}
