use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::CycloField;
use super::galois::normalize_unit;
use crate::error::{Error, Result};
use crate::linalg::Scalar;

/// An element of `K_N` in the power basis `1, zeta, ..., zeta^{phi(N)-1}`.
///
/// Stored as an integer numerator vector over one positive common
/// denominator, kept in lowest terms, so derived equality and hashing are
/// canonical.
#[derive(Clone)]
pub struct CycloElem {
    field: Arc<CycloField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor() == other.field.conductor()
            && self.den == other.den
            && self.num == other.num
    }
}

impl Eq for CycloElem {}

impl Hash for CycloElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor().hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

/// Arithmetic operation selector for [`elem_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic: rejects mixed fields and division by zero.
pub fn elem_arith(a: &CycloElem, b: &CycloElem, op: ArithOp) -> Result<CycloElem> {
    if a.conductor() != b.conductor() {
        return Err(Error::FieldMismatch {
            left: a.conductor(),
            right: b.conductor(),
        });
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl CycloElem {
    fn from_parts(field: Arc<CycloField>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut e = CycloElem { field, num, den };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn zero(field: &Arc<CycloField>) -> Self {
        CycloElem {
            field: field.clone(),
            num: vec![BigInt::zero(); field.degree()],
            den: BigInt::one(),
        }
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<CycloField>, n: i64) -> Self {
        Self::from_bigint(field, BigInt::from(n))
    }

    pub fn from_bigint(field: &Arc<CycloField>, n: BigInt) -> Self {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = n;
        CycloElem {
            field: field.clone(),
            num,
            den: BigInt::one(),
        }
    }

    pub fn from_rational(field: &Arc<CycloField>, q: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = q.numer().clone();
        Self::from_parts(field.clone(), num, q.denom().clone())
    }

    pub fn from_ratio(field: &Arc<CycloField>, p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Self::from_rational(field, &BigRational::new(p.into(), q.into()))
    }

    /// `zeta_N^k` for any integer `k`.
    pub fn zeta_pow(field: &Arc<CycloField>, k: i64) -> Self {
        let n = field.conductor() as i64;
        let e = k.rem_euclid(n) as u64;
        CycloElem {
            field: field.clone(),
            num: field.zeta_power(e).to_vec(),
            den: BigInt::one(),
        }
    }

    pub fn zeta(field: &Arc<CycloField>) -> Self {
        Self::zeta_pow(field, 1)
    }

    /// Build from integer coordinates of any length (reduced mod `Phi_N`).
    pub fn from_int_coeffs(field: &Arc<CycloField>, coeffs: &[i64]) -> Self {
        let mut num: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        if num.len() < field.degree() {
            num.resize(field.degree(), BigInt::zero());
        }
        let num = field.reduce(num);
        Self::from_parts(field.clone(), num, BigInt::one())
    }

    /// Build from rational coordinates of any length (reduced mod `Phi_N`).
    pub fn from_rational_coeffs(field: &Arc<CycloField>, coeffs: &[BigRational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        if num.len() < field.degree() {
            num.resize(field.degree(), BigInt::zero());
        }
        let num = field.reduce(num);
        Self::from_parts(field.clone(), num, den)
    }

    /// Build from a power-basis integer numerator vector and a common denominator.
    pub(crate) fn from_scaled(field: &Arc<CycloField>, num: Vec<BigInt>, den: BigInt) -> Self {
        let num = if num.len() == field.degree() {
            num
        } else {
            let mut n = num;
            if n.len() < field.degree() {
                n.resize(field.degree(), BigInt::zero());
            }
            field.reduce(n)
        };
        Self::from_parts(field.clone(), num, den)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor()
    }

    /// Integer numerators of the coordinates (over [`Self::denominator`]).
    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.num.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.num[0] == self.den
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeff(0))
    }

    /// Sum of absolute values of the coordinates.
    pub fn l1_norm(&self) -> BigRational {
        let s = self.num.iter().fold(BigInt::zero(), |acc, c| acc + c.abs());
        BigRational::new(s, self.den.clone())
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(
            self.conductor(),
            other.conductor(),
            "mixed cyclotomic fields K_{} and K_{}",
            self.conductor(),
            other.conductor()
        );
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        self.same_field(other);
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let l = self.den.lcm(&other.den);
        let fa = &l / &self.den;
        let fb = &l / &other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                let tb = b * &fb;
                if negate {
                    a * &fa - tb
                } else {
                    a * &fa + tb
                }
            })
            .collect();
        Self::from_parts(self.field.clone(), num, l)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return CycloElem::zero(&self.field);
        }
        if other.is_rational() {
            return self.scale_parts(&other.num[0], &other.den);
        }
        if self.is_rational() {
            return other.scale_parts(&self.num[0], &self.den);
        }
        let d = self.num.len();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let num = self.field.reduce(prod);
        Self::from_parts(self.field.clone(), num, &self.den * &other.den)
    }

    fn scale_parts(&self, p: &BigInt, q: &BigInt) -> Self {
        let num = self.num.iter().map(|c| c * p).collect();
        Self::from_parts(self.field.clone(), num, &self.den * q)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        self.scale_parts(q.numer(), q.denom())
    }

    /// `sigma_d(self)`; `d` must be a unit (checked by [`super::GaloisAut`]).
    pub(crate) fn galois_unchecked(&self, d: u64) -> Self {
        let n = self.conductor();
        let d = normalize_unit(d, n);
        if d == 1 || self.is_rational() {
            return self.clone();
        }
        let deg = self.num.len();
        let mut out = vec![BigInt::zero(); deg];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = self.field.zeta_power((i as u64 * d) % n);
            for (o, z) in out.iter_mut().zip(img) {
                if !z.is_zero() {
                    *o += c * z;
                }
            }
        }
        CycloElem {
            field: self.field.clone(),
            num: out,
            den: self.den.clone(),
        }
    }

    /// Apply `sigma_d`, rejecting non-units.
    pub fn apply_aut(&self, d: u64) -> Result<Self> {
        let n = self.conductor();
        if n > 2 && arith_gcd(d % n, n) != 1 {
            return Err(Error::NotAUnit { d, modulus: n });
        }
        Ok(self.galois_unchecked(d))
    }

    /// `N_{K_N/Q}(self)` as a rational number.
    pub fn absolute_norm(&self) -> BigRational {
        if let Some(q) = self.to_rational() {
            return num_traits::pow(q, self.field.degree());
        }
        let prod = self.conjugate_product();
        (self * &prod)
            .to_rational()
            .expect("norm of a cyclotomic element is rational")
    }

    /// Product of the nontrivial conjugates.
    fn conjugate_product(&self) -> Self {
        let mut prod = CycloElem::one(&self.field);
        for &u in self.field.units() {
            if u != 1 {
                prod = &prod * &self.galois_unchecked(u);
            }
        }
        prod
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            let mut num = vec![BigInt::zero(); self.num.len()];
            num[0] = self.den.clone();
            return Ok(Self::from_parts(self.field.clone(), num, self.num[0].clone()));
        }
        let conj = self.conjugate_product();
        let norm = (self * &conj)
            .to_rational()
            .expect("norm of a cyclotomic element is rational");
        Ok(conj.scale(&norm.recip()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CycloElem::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Image under `zeta_N -> zeta_M^{M/N}`.
    pub fn embed(&self, m: u64) -> Result<Self> {
        let n = self.conductor();
        if m == 0 || !m.is_multiple_of(n) {
            return Err(Error::NotADivisor { small: n, large: m });
        }
        let target = CycloField::get(m);
        if m == n {
            return Ok(self.clone());
        }
        let step = m / n;
        let mut out = vec![BigInt::zero(); target.degree()];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = target.zeta_power(i as u64 * step);
            for (o, z) in out.iter_mut().zip(img) {
                if !z.is_zero() {
                    *o += c * z;
                }
            }
        }
        Ok(Self::from_parts(target, out, self.den.clone()))
    }

    /// Coordinates as `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs()
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect()
    }

    /// Parse coordinates given as `"p/q"` or integer strings or JSON integers.
    pub fn from_json_coeffs(field: &Arc<CycloField>, values: &[serde_json::Value]) -> Result<Self> {
        if values.len() != field.degree() {
            return Err(Error::Schema(format!(
                "expected {} coordinates for K_{}, found {}",
                field.degree(),
                field.conductor(),
                values.len()
            )));
        }
        let coeffs = values
            .iter()
            .map(parse_rational_json)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_rational_coeffs(field, &coeffs))
    }
}

fn arith_gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Parse a rational from a JSON string `"p/q"`, `"p"` or an integer.
pub fn parse_rational_json(v: &serde_json::Value) -> Result<BigRational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(BigInt::from(i)))
            .ok_or_else(|| Error::Schema(format!("non-integer number {n}"))),
        other => Err(Error::Schema(format!("expected rational, found {other}"))),
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Schema(format!("malformed rational {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "z")?
                    } else {
                        write!(f, "z^{i}")?
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_K{}", self, self.conductor())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a CycloElem> for &'a CycloElem {
            type Output = CycloElem;
            fn $method(self, rhs: &'a CycloElem) -> CycloElem {
                let f: fn(&CycloElem, &CycloElem) -> CycloElem = $body;
                f(self, rhs)
            }
        }
        impl $trait<CycloElem> for CycloElem {
            type Output = CycloElem;
            fn $method(self, rhs: CycloElem) -> CycloElem {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a CycloElem> for CycloElem {
            type Output = CycloElem;
            fn $method(self, rhs: &'a CycloElem) -> CycloElem {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add_impl(b, false));
binop!(Sub, sub, |a, b| a.add_impl(b, true));
binop!(Mul, mul, |a, b| a.mul_impl(b));

impl Neg for &CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        CycloElem {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        -&self
    }
}

impl Scalar for CycloElem {
    fn zero_like(&self) -> Self {
        CycloElem::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        CycloElem::one(&self.field)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn inv_elem(&self) -> Option<Self> {
        self.inv().ok()
    }
}
