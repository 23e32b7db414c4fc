use std::fmt;
use std::sync::Arc;

use crate::cyclotomic::{CycloElem, CycloField};
use crate::error::{Error, Result};

/// A univariate polynomial over `K_N`, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Arc<CycloField>,
    coeffs: Vec<CycloElem>,
}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(field: &Arc<CycloField>, coeffs: Vec<CycloElem>) -> Self {
        for c in &coeffs {
            assert_eq!(c.conductor(), field.conductor(), "coefficient field mismatch");
        }
        let mut p = Poly {
            field: field.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(CycloElem::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn zero(field: &Arc<CycloField>) -> Self {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: CycloElem) -> Self {
        let field = c.field().clone();
        Poly::new(&field, vec![c])
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Poly::constant(CycloElem::one(field))
    }

    /// The monomial `t`.
    pub fn t(field: &Arc<CycloField>) -> Self {
        Poly::new(field, vec![CycloElem::zero(field), CycloElem::one(field)])
    }

    /// `a*t + b`.
    pub fn linear(a: CycloElem, b: CycloElem) -> Self {
        let field = a.field().clone();
        Poly::new(&field, vec![b, a])
    }

    /// Integer coefficients, ascending.
    pub fn from_ints(field: &Arc<CycloField>, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| CycloElem::from_int(field, c)).collect())
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[CycloElem] {
        &self.coeffs
    }

    /// Coefficient of `t^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> CycloElem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| CycloElem::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&CycloElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(CycloElem::is_one)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Poly::new(&self.field, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Poly::new(&self.field, coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![CycloElem::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Poly::new(&self.field, out)
    }

    pub fn scale(&self, c: &CycloElem) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![CycloElem::zero(&self.field); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::new(&self.field, coeffs)
    }

    /// Euclidean division; errors on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let lead = divisor.leading().ok_or(Error::DivisionByZero)?;
        let inv = lead.inv()?;
        let dd = divisor.deg();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(&self.field), self.clone()));
        }
        let mut quot = vec![CycloElem::zero(&self.field); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.coeffs.iter().enumerate() {
                if !dj.is_zero() {
                    rem[i + j] = &rem[i + j] - &(&c * dj);
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(&self.field, quot), Poly::new(&self.field, rem)))
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InvariantViolation(
                "inexact polynomial division".into(),
            ));
        }
        Ok(q)
    }

    /// Scale to leading coefficient 1 (the zero polynomial is returned as is).
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &CycloElem::from_int(&self.field, i as i64))
            .collect();
        Poly::new(&self.field, coeffs)
    }

    /// Squarefree part `f / gcd(f, f')`, monic.
    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.monic().div_exact(&g).expect("gcd divides f")
    }

    pub fn eval(&self, x: &CycloElem) -> CycloElem {
        let mut acc = CycloElem::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Multiplicity of the root `x` (0 if not a root).
    pub fn root_multiplicity(&self, x: &CycloElem) -> usize {
        let mut p = self.clone();
        let mut m = 0;
        let lin = Poly::linear(CycloElem::one(&self.field), -x);
        while !p.is_zero() && p.eval(x).is_zero() {
            p = p.div_exact(&lin).expect("root gives exact linear factor");
            m += 1;
        }
        m
    }

    pub fn galois(&self, d: u64) -> Poly {
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.galois_unchecked(d)).collect(),
        }
    }

    pub fn embed(&self, m: u64) -> Result<Poly> {
        let field = CycloField::get(m);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.embed(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(&field, coeffs))
    }

    /// Homogenized substitution `sum c_i u^i v^(n-i)` for polynomials `u`, `v`.
    pub fn homogeneous_substitute(&self, n: usize, u: &Poly, v: &Poly) -> Poly {
        let mut upow = vec![Poly::one(&self.field)];
        let mut vpow = vec![Poly::one(&self.field)];
        for i in 1..=n {
            upow.push(upow[i - 1].mul(u));
            vpow.push(vpow[i - 1].mul(v));
        }
        let mut acc = Poly::zero(&self.field);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&upow[i].mul(&vpow[n - i]).scale(c));
        }
        acc
    }

    pub fn coeff_strings(&self) -> Vec<Vec<String>> {
        self.coeffs.iter().map(CycloElem::to_strings).collect()
    }

    pub fn from_json(field: &Arc<CycloField>, values: &[Vec<serde_json::Value>]) -> Result<Poly> {
        let coeffs = values
            .iter()
            .map(|v| CycloElem::from_json_coeffs(field, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(field, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let q = CycloField::get(1);
        // (t-1)(t+2) and (t-1)(t-3)
        let a = Poly::from_ints(&q, &[-2, 1, 1]);
        let b = Poly::from_ints(&q, &[3, -4, 1]);
        assert_eq!(a.gcd(&b), Poly::from_ints(&q, &[-1, 1]));
        let (quot, rem) = a.div_rem(&Poly::from_ints(&q, &[-1, 1])).unwrap();
        assert_eq!(quot, Poly::from_ints(&q, &[2, 1]));
        assert!(rem.is_zero());
    }

    #[test]
    fn squarefree_and_multiplicity() {
        let k4 = CycloField::get(4);
        let i = CycloElem::zeta(&k4);
        let lin = Poly::linear(CycloElem::one(&k4), -&i);
        let f = lin.pow(3).mul(&Poly::from_ints(&k4, &[1, 1]));
        assert_eq!(f.root_multiplicity(&i), 3);
        assert_eq!(f.squarefree_part(), lin.mul(&Poly::from_ints(&k4, &[1, 1])));
    }
}
