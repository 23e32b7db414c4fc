//! Finite fields `F_p[x]/(m)` and root finding in them.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{mul_mod, pow_mod};

pub type Fq = Vec<u64>;

/// `F_q = F_p[x]/(m)` with `m` monic irreducible.
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u64,
    modulus: Vec<u64>,
}

impl FiniteField {
    pub fn new(p: u64, modulus: Vec<u64>) -> Self {
        assert_eq!(*modulus.last().expect("nonempty"), 1, "modulus must be monic");
        FiniteField { p, modulus }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn order(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.p), self.degree())
    }

    pub fn zero(&self) -> Fq {
        vec![0; self.degree()]
    }

    pub fn one(&self) -> Fq {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    pub fn is_zero(&self, a: &Fq) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Fq, b: &Fq) -> Fq {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    pub fn neg(&self, a: &Fq) -> Fq {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        let d = self.degree();
        let p = self.p as u128;
        let mut prod = vec![0u128; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p;
            }
        }
        for i in (d..prod.len()).rev() {
            let top = prod[i];
            if top == 0 {
                continue;
            }
            for j in 0..d {
                let m = self.modulus[j] as u128;
                prod[i - d + j] = (prod[i - d + j] + (p - top) * m % p) % p;
            }
        }
        prod.truncate(d);
        prod.into_iter().map(|c| c as u64).collect()
    }

    pub fn pow(&self, a: &Fq, e: &BigUint) -> Fq {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn inv(&self, a: &Fq) -> Fq {
        assert!(!self.is_zero(a), "inverse of zero in F_q");
        let e = self.order() - BigUint::from(2u32);
        self.pow(a, &e)
    }

    pub fn constant(&self, c: u64) -> Fq {
        let mut v = self.zero();
        v[0] = c % self.p;
        v
    }

    pub fn random(&self, rng: &mut ChaCha8Rng) -> Fq {
        (0..self.degree()).map(|_| rng.gen_range(0..self.p)).collect()
    }

    // ---- polynomials over F_q, ascending, trimmed ----

    fn trim(&self, mut f: Vec<Fq>) -> Vec<Fq> {
        while f.last().is_some_and(|c| self.is_zero(c)) {
            f.pop();
        }
        f
    }

    pub fn poly_monic(&self, f: &[Fq]) -> Vec<Fq> {
        let lead = f.last().expect("nonzero polynomial");
        let inv = self.inv(lead);
        f.iter().map(|c| self.mul(c, &inv)).collect()
    }

    pub fn poly_rem(&self, f: &[Fq], g: &[Fq]) -> Vec<Fq> {
        let mut r = f.to_vec();
        let dg = g.len() - 1;
        let inv = self.inv(&g[dg]);
        while r.len() > dg {
            let top = r.len() - 1;
            let c = self.mul(&r[top], &inv);
            if !self.is_zero(&c) {
                for (j, gj) in g.iter().enumerate() {
                    let t = self.mul(&c, gj);
                    r[top - dg + j] = self.sub(&r[top - dg + j], &t);
                }
            }
            r.pop();
            r = self.trim(r);
        }
        self.trim(r)
    }

    pub fn poly_div(&self, f: &[Fq], g: &[Fq]) -> Vec<Fq> {
        let dg = g.len() - 1;
        if f.len() <= dg {
            return Vec::new();
        }
        let inv = self.inv(&g[dg]);
        let mut r = f.to_vec();
        let mut q = vec![self.zero(); f.len() - dg];
        for i in (0..q.len()).rev() {
            let c = self.mul(&r[i + dg], &inv);
            for (j, gj) in g.iter().enumerate() {
                let t = self.mul(&c, gj);
                r[i + j] = self.sub(&r[i + j], &t);
            }
            q[i] = c;
        }
        self.trim(q)
    }

    pub fn poly_mul(&self, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let t = self.mul(x, y);
                out[i + j] = self.add(&out[i + j], &t);
            }
        }
        self.trim(out)
    }

    pub fn poly_gcd(&self, f: &[Fq], g: &[Fq]) -> Vec<Fq> {
        let mut a = self.trim(f.to_vec());
        let mut b = self.trim(g.to_vec());
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            self.poly_monic(&a)
        }
    }

    pub fn poly_derivative(&self, f: &[Fq]) -> Vec<Fq> {
        let out = f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.mul(c, &self.constant(i as u64)))
            .collect();
        self.trim(out)
    }

    fn poly_powmod(&self, base: &[Fq], e: &BigUint, modulus: &[Fq]) -> Vec<Fq> {
        let mut acc = vec![self.one()];
        let base = self.poly_rem(base, modulus);
        for i in (0..e.bits()).rev() {
            acc = self.poly_rem(&self.poly_mul(&acc, &acc), modulus);
            if e.bit(i) {
                acc = self.poly_rem(&self.poly_mul(&acc, &base), modulus);
            }
        }
        acc
    }

    #[cfg(test)]
    pub fn poly_eval(&self, f: &[Fq], x: &Fq) -> Fq {
        let mut acc = self.zero();
        for c in f.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    /// All roots in `F_q` of a nonzero polynomial.
    pub fn roots(&self, f: &[Fq], rng: &mut ChaCha8Rng) -> Vec<Fq> {
        let f = self.trim(f.to_vec());
        if f.len() <= 1 {
            return Vec::new();
        }
        let f = self.poly_monic(&f);
        let x = vec![self.zero(), self.one()];
        let xq = self.poly_powmod(&x, &self.order(), &f);
        let mut diff = xq;
        while diff.len() < 2 {
            diff.push(self.zero());
        }
        diff[1] = self.sub(&diff[1], &self.one());
        let diff = self.trim(diff);
        let split = self.poly_gcd(&f, &diff);
        let mut out = Vec::new();
        self.split_linear(&split, rng, &mut out);
        out.sort();
        out
    }

    /// Split a monic product of distinct linear factors (odd `q`).
    fn split_linear(&self, h: &[Fq], rng: &mut ChaCha8Rng, out: &mut Vec<Fq>) {
        let deg = h.len().saturating_sub(1);
        if deg == 0 {
            return;
        }
        if deg == 1 {
            out.push(self.neg(&h[0]));
            return;
        }
        let half = (self.order() - BigUint::one()) >> 1;
        loop {
            let a = self.random(rng);
            let base = vec![a, self.one()];
            let mut w = self.poly_powmod(&base, &half, h);
            if w.is_empty() {
                continue;
            }
            w[0] = self.sub(&w[0], &self.one());
            let w = self.trim(w);
            let g = self.poly_gcd(h, &w);
            let dg = g.len().saturating_sub(1);
            if dg > 0 && dg < deg {
                let rest = self.poly_div(h, &g);
                self.split_linear(&g, rng, out);
                self.split_linear(&self.poly_monic(&rest), rng, out);
                return;
            }
        }
    }
}

/// Find an integer `x` with `x^2 = -1 mod p` (`p = 1 mod 4`).
pub fn sqrt_minus_one(p: u64) -> u64 {
    for a in 2..p {
        if pow_mod(a, (p - 1) / 2, p) == p - 1 {
            let r = pow_mod(a, (p - 1) / 4, p);
            debug_assert_eq!(mul_mod(r, r, p), p - 1);
            return r;
        }
    }
    unreachable!("p = 1 mod 4 has a quadratic non-residue")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn roots_over_prime_field() {
        let f = FiniteField::new(13, vec![0, 1]);
        let c = |x| f.constant(x);
        // (s - 2)(s - 5)(s^2 + 2) over F_13; -2 is a non-residue mod 13
        let poly = f.poly_mul(
            &f.poly_mul(&[c(11), c(1)], &[c(8), c(1)]),
            &[c(2), c(0), c(1)],
        );
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(f.roots(&poly, &mut rng), vec![c(2), c(5)]);
    }

    #[test]
    fn roots_over_extension() {
        // F_9 = F_3[x]/(x^2 + 1); s^2 + 1 splits there
        let f = FiniteField::new(3, vec![1, 0, 1]);
        let poly = vec![f.one(), f.zero(), f.one()];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let roots = f.roots(&poly, &mut rng);
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!(f.is_zero(&f.poly_eval(&poly, &r)));
        }
        let x = vec![0, 1];
        assert_eq!(f.mul(&x, &f.inv(&x)), f.one());
    }

    #[test]
    fn minus_one_roots() {
        for p in [5u64, 13, 29, 37, 101] {
            let r = sqrt_minus_one(p);
            assert_eq!(r * r % p, p - 1);
        }
    }
}
