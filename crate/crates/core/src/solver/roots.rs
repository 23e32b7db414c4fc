//! Roots in `K_N` of polynomials over `K_N`.
//!
//! The polynomial is reduced modulo a prime `l` that stays inert (or splits
//! into two halves for `N = 2^m`) in `Z[zeta_N]`, its roots are found in the
//! residue field, lifted `l`-adically, and read back as integer coordinates
//! under an a-priori height bound. Every survivor is checked exactly.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ff::{sqrt_minus_one, FiniteField, Fq};
use crate::arith::{self, inv_mod_big, symmetric_mod};
use crate::cyclotomic::{CycloElem, CycloField};
use crate::error::{Error, Result};
use crate::ratfunc::Poly;

const MAX_PRIME_TRIES: usize = 200;
const MAX_LIFT_EXPONENT: u32 = 1 << 14;

/// How `Z[zeta_N] / l` decomposes for the chosen prime.
#[derive(Debug, Clone)]
enum Splitting {
    /// `Phi_N` stays irreducible mod `l`.
    Inert,
    /// `N = 2^m`, `Phi_N = (x^h - i)(x^h + i)` with `i^2 = -1` mod `l^k`.
    TwoHalves { half: usize, i: BigInt },
}

/// Arithmetic in `(Z / l^k)[x] / (c)` for a monic `c`.
struct LiftRing {
    modulus: Vec<BigInt>,
    pk: BigInt,
}

impl LiftRing {
    fn dim(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let e = self.dim();
        for i in (e..v.len()).rev() {
            let top = std::mem::take(&mut v[i]);
            if top.is_zero() {
                continue;
            }
            for j in 0..e {
                v[i - e + j] -= &top * &self.modulus[j];
            }
        }
        v.resize(e, BigInt::zero());
        v.into_iter().map(|c| c.mod_floor(&self.pk)).collect()
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.reduce(out)
    }

    fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| (x - y).mod_floor(&self.pk)).collect()
    }

    fn eval(&self, poly: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); self.dim()];
        for c in poly.iter().rev() {
            let prod = self.mul(&acc, x);
            acc = prod.iter().zip(c).map(|(p, q)| (p + q).mod_floor(&self.pk)).collect();
        }
        acc
    }
}

/// Everything attached to one prime.
struct Reduction {
    ell: u64,
    splitting: Splitting,
    components: Vec<LiftRing>,
    residue_fields: Vec<FiniteField>,
}

fn to_fq(v: &[BigInt], ell: u64) -> Fq {
    let l = BigInt::from(ell);
    v.iter()
        .map(|c| c.mod_floor(&l).to_u64().expect("residue fits"))
        .collect()
}

fn from_fq(v: &Fq) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lift a root of `x^2 + 1` from mod `l` to mod `pk`.
fn lift_sqrt_minus_one(ell: u64, pk: &BigInt) -> BigInt {
    let mut x = BigInt::from(sqrt_minus_one(ell));
    let mut prec = BigInt::from(ell);
    while &prec < pk {
        prec = (&prec * &prec).min(pk.clone());
        let f: BigInt = &x * &x + 1;
        let inv = inv_mod_big(&(&x * 2), &prec).expect("2x is a unit");
        x = (&x - f * inv).mod_floor(&prec);
    }
    x.mod_floor(pk)
}

impl Reduction {
    /// Set up the decomposition of `Z[zeta_N] / l^k`; `None` if `l` is unsuitable.
    fn new(field: &CycloField, ell: u64, pk: &BigInt) -> Result<Option<Reduction>> {
        let n = field.conductor();
        let d = field.degree();
        let order = arith::multiplicative_order(ell, n);
        let cyclic_ok = order == Some(d as u64);
        if cyclic_ok {
            let modulus: Vec<BigInt> = field.modulus().to_vec();
            let m_ell = to_fq(&modulus, ell);
            return Ok(Some(Reduction {
                ell,
                splitting: Splitting::Inert,
                components: vec![LiftRing { modulus, pk: pk.clone() }],
                residue_fields: vec![FiniteField::new(ell, m_ell)],
            }));
        }
        if n.is_power_of_two() && n >= 8 {
            if ell % 8 != 5 {
                return Ok(None);
            }
            let half = d / 2;
            let i = lift_sqrt_minus_one(ell, pk);
            let mut components = Vec::new();
            let mut residue_fields = Vec::new();
            for sign in [1i32, -1] {
                let mut modulus = vec![BigInt::zero(); half + 1];
                modulus[0] = (-(&i) * sign).mod_floor(pk);
                modulus[half] = BigInt::one();
                residue_fields.push(FiniteField::new(ell, to_fq(&modulus, ell)));
                components.push(LiftRing { modulus, pk: pk.clone() });
            }
            return Ok(Some(Reduction {
                ell,
                splitting: Splitting::TwoHalves { half, i },
                components,
                residue_fields,
            }));
        }
        Ok(None)
    }

    /// Image of an integer coordinate vector in each component.
    fn project(&self, y: &[BigInt]) -> Vec<Vec<BigInt>> {
        match &self.splitting {
            Splitting::Inert => {
                let pk = &self.components[0].pk;
                vec![y.iter().map(|c| c.mod_floor(pk)).collect()]
            }
            Splitting::TwoHalves { half, i } => {
                let pk = &self.components[0].pk;
                let (lo, hi) = y.split_at(*half);
                [BigInt::one(), BigInt::from(-1)]
                    .iter()
                    .map(|s| {
                        lo.iter()
                            .zip(hi)
                            .map(|(a, b)| (a + s * i * b).mod_floor(pk))
                            .collect()
                    })
                    .collect()
            }
        }
    }

    /// Recombine component values into coordinates mod `l^k`.
    fn combine(&self, parts: &[&Vec<BigInt>]) -> Vec<BigInt> {
        match &self.splitting {
            Splitting::Inert => parts[0].clone(),
            Splitting::TwoHalves { i, .. } => {
                let pk = &self.components[0].pk;
                let inv2 = inv_mod_big(&BigInt::from(2), pk).expect("odd modulus");
                let inv2i = inv_mod_big(&(i * 2), pk).expect("2i is a unit");
                let (a1, a2) = (parts[0], parts[1]);
                let lo = a1.iter().zip(a2).map(|(x, y)| ((x + y) * &inv2).mod_floor(pk));
                let hi = a1.iter().zip(a2).map(|(x, y)| ((x - y) * &inv2i).mod_floor(pk));
                lo.chain(hi).collect()
            }
        }
    }
}

/// Whether [`rational_roots`] handles conductor `n`: those with cyclic
/// `(Z/N)^*`, plus powers of two.
pub fn supported_conductor(n: u64) -> bool {
    if n.is_power_of_two() {
        return true;
    }
    let m = if n.is_multiple_of(2) { n / 2 } else { n };
    m % 2 == 1 && arith::factorize(m).len() == 1
}

/// Integer scaling data for a monic polynomial.
struct Scaled {
    /// Lcm of all coordinate denominators.
    denom: BigInt,
    /// Bound on the coordinates of `denom * r` for any root `r`.
    bound: BigInt,
}

fn scaling_data(g: &Poly) -> Scaled {
    let field = g.field();
    let mut denom = BigInt::one();
    let mut max_l1 = BigRational::zero();
    for c in g.coeffs() {
        denom = denom.lcm(c.denominator());
        let l1 = c.l1_norm();
        if l1 > max_l1 {
            max_l1 = l1;
        }
    }
    let root_abs = BigRational::one() + max_l1;
    let b = root_abs * field.coordinate_factor() * BigRational::from_integer(denom.clone());
    Scaled {
        denom,
        bound: b.ceil().to_integer(),
    }
}

/// Reduce a coefficient of `g` into each component mod `l^k`.
fn reduce_coeff(red: &Reduction, c: &CycloElem) -> Option<Vec<Vec<BigInt>>> {
    let pk = &red.components[0].pk;
    let inv = inv_mod_big(c.denominator(), pk)?;
    let y: Vec<BigInt> = c.numerators().iter().map(|x| x * &inv).collect();
    Some(red.project(&y))
}

/// Newton-lift a simple root `r0` of `g` in one component.
fn lift_root(ring: &LiftRing, ff: &FiniteField, g: &[Vec<BigInt>], dg: &[Vec<BigInt>], r0: &Fq, k: u32) -> Vec<BigInt> {
    let steps = 64 - (k as u64).leading_zeros() + 1;
    let mut r = from_fq(r0);
    r.resize(ring.dim(), BigInt::zero());
    let ell = ff.characteristic();
    for _ in 0..steps {
        let val = ring.eval(g, &r);
        let der = ring.eval(dg, &r);
        let inv = lift_inverse(ring, ff, &der, ell, steps);
        r = ring.sub(&r, &ring.mul(&val, &inv));
    }
    r
}

fn lift_inverse(ring: &LiftRing, ff: &FiniteField, a: &[BigInt], ell: u64, steps: u32) -> Vec<BigInt> {
    let a0 = to_fq(a, ell);
    let mut u = from_fq(&ff.inv(&a0));
    u.resize(ring.dim(), BigInt::zero());
    let mut two = vec![BigInt::zero(); ring.dim()];
    two[0] = BigInt::from(2);
    for _ in 0..steps {
        let au = ring.mul(a, &u);
        u = ring.mul(&u, &ring.sub(&two, &au));
    }
    u
}

/// Every root of `f` lying in its coefficient field `K_N`, each listed once.
pub fn rational_roots(f: &Poly) -> Result<Vec<CycloElem>> {
    if f.is_zero() {
        return Err(Error::InvariantViolation(
            "root finding needs a nonzero polynomial".into(),
        ));
    }
    if f.deg() == 0 {
        return Ok(Vec::new());
    }
    let field = f.field().clone();
    if !supported_conductor(field.conductor()) {
        return Err(Error::UnsupportedConductor(field.conductor()));
    }
    let g = f.squarefree_part();
    if g.deg() == 1 {
        return Ok(vec![-&g.coeff(0)]);
    }
    let scaled = scaling_data(&g);
    let twice = &scaled.bound * 2 + 1;
    let mut tried = 0;
    let mut ell = 2u64;
    while tried < MAX_PRIME_TRIES {
        ell += 1;
        if !arith::is_prime(ell) || field.conductor().is_multiple_of(ell) {
            continue;
        }
        if (&scaled.denom % ell).is_zero() {
            continue;
        }
        // pick the exponent from the height bound
        let mut k = 1u32;
        let mut pk = BigInt::from(ell);
        while pk <= twice {
            pk *= ell;
            k += 1;
            if k > MAX_LIFT_EXPONENT {
                return Err(Error::PrecisionExhausted);
            }
        }
        let red = match Reduction::new(&field, ell, &pk)? {
            Some(r) => r,
            None => continue,
        };
        tried += 1;
        match roots_at_prime(&field, &g, &scaled, &red, k) {
            Ok(roots) => return Ok(roots),
            Err(Error::BadPrime(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::PrecisionExhausted)
}

fn roots_at_prime(field: &Arc<CycloField>, g: &Poly, scaled: &Scaled, red: &Reduction, k: u32) -> Result<Vec<CycloElem>> {
    let ell = red.ell;
    let ncomp = red.components.len();
    // coefficients of g in each component
    let mut comp_coeffs: Vec<Vec<Vec<BigInt>>> = vec![Vec::new(); ncomp];
    for c in g.coeffs() {
        let parts = reduce_coeff(red, c).ok_or(Error::BadPrime(ell))?;
        for (j, p) in parts.into_iter().enumerate() {
            comp_coeffs[j].push(p);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ ell);
    let mut lifted: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(ncomp);
    for (j, coeffs) in comp_coeffs.iter().enumerate() {
        let ff = &red.residue_fields[j];
        let ring = &red.components[j];
        let gbar: Vec<Fq> = coeffs.iter().map(|c| to_fq(c, ell)).collect();
        let dgbar = ff.poly_derivative(&gbar);
        if ff.poly_gcd(&gbar, &dgbar).len() != 1 {
            return Err(Error::BadPrime(ell));
        }
        let dcoeffs: Vec<Vec<BigInt>> = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.iter().map(|x| (x * i).mod_floor(&ring.pk)).collect())
            .collect();
        let roots = ff.roots(&gbar, &mut rng);
        let mut comp_roots = Vec::with_capacity(roots.len());
        for r0 in &roots {
            let r = lift_root(ring, ff, coeffs, &dcoeffs, r0, k);
            // scale by the denominator so the target is integral
            comp_roots.push(r.iter().map(|x| (x * &scaled.denom).mod_floor(&ring.pk)).collect());
        }
        lifted.push(comp_roots);
    }
    let pk = &red.components[0].pk;
    let mut out: Vec<CycloElem> = Vec::new();
    let mut consider = |parts: &[&Vec<BigInt>]| {
        let y: Vec<BigInt> = red.combine(parts).iter().map(|c| symmetric_mod(c, pk)).collect();
        if y.iter().any(|c| c.abs() > scaled.bound) {
            return;
        }
        let r = CycloElem::from_scaled(field, y, scaled.denom.clone());
        if g.eval(&r).is_zero() && !out.contains(&r) {
            out.push(r);
        }
    };
    match ncomp {
        1 => {
            for r in &lifted[0] {
                consider(&[r]);
            }
        }
        _ => {
            for r1 in &lifted[0] {
                for r2 in &lifted[1] {
                    consider(&[r1, r2]);
                }
            }
        }
    }
    out.sort_by_key(|r| r.to_strings());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots_set(f: &Poly) -> Vec<CycloElem> {
        rational_roots(f).unwrap()
    }

    #[test]
    fn gaussian_units() {
        let k4 = CycloField::get(4);
        let f = Poly::from_ints(&k4, &[1, 0, 1]);
        let i = CycloElem::zeta(&k4);
        let r = roots_set(&f);
        assert_eq!(r.len(), 2);
        assert!(r.contains(&i) && r.contains(&-&i));
    }

    #[test]
    fn golden_periods() {
        let k5 = CycloField::get(5);
        let z = |k| CycloElem::zeta_pow(&k5, k);
        let p1 = &z(1) + &z(4);
        let p2 = &z(2) + &z(3);
        // oracle: the product of the linear factors equals s^2 + s - 1
        let prod = Poly::linear(CycloElem::one(&k5), -&p1).mul(&Poly::linear(CycloElem::one(&k5), -&p2));
        assert_eq!(prod, Poly::from_ints(&k5, &[-1, 1, 1]));
        let r = roots_set(&Poly::from_ints(&k5, &[-1, 1, 1]));
        assert_eq!(r.len(), 2);
        assert!(r.contains(&p1) && r.contains(&p2));
    }

    #[test]
    fn no_sqrt_two_in_k5() {
        let k5 = CycloField::get(5);
        assert!(roots_set(&Poly::from_ints(&k5, &[-2, 0, 1])).is_empty());
    }

    #[test]
    fn two_power_conductor() {
        let k8 = CycloField::get(8);
        // s^2 - 2 splits in K_8 as sqrt 2 = zeta + zeta^7
        let r = roots_set(&Poly::from_ints(&k8, &[-2, 0, 1]));
        let s2 = &CycloElem::zeta_pow(&k8, 1) + &CycloElem::zeta_pow(&k8, 7);
        assert_eq!(r.len(), 2);
        assert!(r.contains(&s2));
        // s^8 - 1 has all eight roots of unity
        let r = roots_set(&Poly::from_ints(&k8, &[-1, 0, 0, 0, 0, 0, 0, 0, 1]));
        assert_eq!(r.len(), 8);
        let k16 = CycloField::get(16);
        let r = roots_set(&Poly::from_ints(&k16, &[-1, 0, 0, 0, 0, 0, 0, 0, 1]));
        assert_eq!(r.len(), 8);
    }

    #[test]
    fn repeated_and_fractional_roots() {
        let k3 = CycloField::get(3);
        let half = CycloElem::from_ratio(&k3, 1, 2);
        let w = CycloElem::zeta(&k3);
        let a = Poly::linear(CycloElem::from_int(&k3, 2), -&CycloElem::one(&k3));
        let b = Poly::linear(CycloElem::from_int(&k3, 3), -&(&w * &CycloElem::from_int(&k3, 7)));
        let f = a.pow(3).mul(&b);
        let r = roots_set(&f);
        let expected = (&w * &CycloElem::from_int(&k3, 7)).checked_div(&CycloElem::from_int(&k3, 3)).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.contains(&half) && r.contains(&expected));
    }

    #[test]
    fn unsupported_conductor() {
        let k12 = CycloField::get(12);
        assert_eq!(
            rational_roots(&Poly::from_ints(&k12, &[1, 0, 1])),
            Err(Error::UnsupportedConductor(12))
        );
    }

    use proptest::prelude::*;

    const CONDUCTORS: [u64; 5] = [3, 4, 5, 8, 9];

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn planted_roots_are_recovered_exactly(
            which in 0..CONDUCTORS.len(),
            roots in prop::collection::vec(prop::collection::vec(-6i64..=6, 6), 1..4),
            den in 1i64..4,
        ) {
            let field = CycloField::get(CONDUCTORS[which]);
            let planted: Vec<CycloElem> = roots
                .iter()
                .map(|c| CycloElem::from_int_coeffs(&field, &c[..field.degree()]).scale(&BigRational::new(1.into(), den.into())))
                .collect();
            // s^2 - 3 has no root in any of these fields
            let mut f = Poly::from_ints(&field, &[-3, 0, 1]);
            for r in &planted {
                f = f.mul(&Poly::linear(CycloElem::one(&field), -r));
            }
            let found = rational_roots(&f).unwrap();
            for r in &found {
                prop_assert!(f.eval(r).is_zero());
            }
            let mut want = planted.clone();
            want.sort_by_key(|r| r.to_strings());
            want.dedup();
            prop_assert_eq!(found.len(), want.len());
            for r in &want {
                prop_assert!(found.contains(r));
            }
        }
    }
}
