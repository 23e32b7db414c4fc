use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::rational::RatFunc;
use crate::cyclotomic::{CycloElem, CycloField};
use crate::error::{Error, Result};

/// Precision marker for series known exactly (finite sums).
const EXACT: i64 = 1 << 60;

/// A truncated Laurent series `sum c_k q^{k/w} + O(q^{precision/w})`.
///
/// `coeffs[i]` is the coefficient of `q^{(valuation + i)/w}`; listed
/// coefficients end at or before `precision` and anything between the end of
/// the list and `precision` is known to vanish.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Arc<CycloField>,
    width: u32,
    valuation: i64,
    coeffs: Vec<CycloElem>,
    precision: i64,
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, "({c})q^({}/{}) + ", self.valuation + i as i64, self.width)?;
            }
        }
        if self.is_exact() {
            write!(f, "[exact]")
        } else {
            write!(f, "O(q^({}/{}))", self.precision, self.width)
        }
    }
}

/// Wire form of a series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub conductor: u64,
    pub width: u32,
    pub valuation: i64,
    pub coeffs: Vec<Vec<serde_json::Value>>,
    pub precision: i64,
}

impl LaurentSeries {
    pub fn new(
        field: &Arc<CycloField>,
        width: u32,
        valuation: i64,
        coeffs: Vec<CycloElem>,
        precision: i64,
    ) -> Result<Self> {
        if width == 0 {
            return Err(Error::Schema("series width must be positive".into()));
        }
        if valuation + coeffs.len() as i64 > precision {
            return Err(Error::Schema(format!(
                "series lists coefficients up to exponent {} beyond its precision {}",
                valuation + coeffs.len() as i64 - 1,
                precision
            )));
        }
        Ok(Self::normalized(field.clone(), width, valuation, coeffs, precision))
    }

    fn normalized(
        field: Arc<CycloField>,
        width: u32,
        mut valuation: i64,
        mut coeffs: Vec<CycloElem>,
        precision: i64,
    ) -> Self {
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                coeffs.clear();
                valuation = precision;
            }
            Some(k) => {
                coeffs.drain(..k);
                valuation += k as i64;
                while coeffs.last().is_some_and(CycloElem::is_zero) {
                    coeffs.pop();
                }
            }
        }
        LaurentSeries {
            field,
            width,
            valuation,
            coeffs,
            precision,
        }
    }

    /// The constant `c`, known exactly.
    pub fn constant(c: CycloElem, width: u32) -> Self {
        let field = c.field().clone();
        Self::normalized(field, width, 0, vec![c], EXACT)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Exponent (in units of `1/w`) of the first nonzero coefficient; equals
    /// the precision when nothing nonzero is known.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision >= EXACT / 2
    }

    fn end(&self) -> i64 {
        self.valuation + self.coeffs.len() as i64
    }

    /// Coefficient of `q^{e/w}`, `None` beyond the known precision.
    pub fn coeff(&self, e: i64) -> Option<CycloElem> {
        if e >= self.precision {
            return None;
        }
        if e < self.valuation || e >= self.end() {
            return Some(CycloElem::zero(&self.field));
        }
        Some(self.coeffs[(e - self.valuation) as usize].clone())
    }

    fn coeff_known(&self, e: i64) -> CycloElem {
        self.coeff(e).unwrap_or_else(|| CycloElem::zero(&self.field))
    }

    /// The same series written in powers of `q^{1/(k w)}`.
    pub fn rescale(&self, k: u32) -> Self {
        let k64 = k as i64;
        let mut coeffs = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                coeffs.extend(std::iter::repeat_with(|| CycloElem::zero(&self.field)).take(k as usize - 1));
            }
            coeffs.push(c.clone());
        }
        let precision = if self.is_exact() { EXACT } else { self.precision * k64 };
        Self::normalized(self.field.clone(), self.width * k, self.valuation * k64, coeffs, precision)
    }

    fn unify(&self, other: &Self) -> (Self, Self) {
        assert_eq!(self.field.conductor(), other.field.conductor(), "series field mismatch");
        if self.width == other.width {
            return (self.clone(), other.clone());
        }
        let l = self.width.lcm(&other.width);
        (self.rescale(l / self.width), other.rescale(l / other.width))
    }

    pub fn truncate(&self, precision: i64) -> Self {
        if precision >= self.precision {
            return self.clone();
        }
        let keep = (precision - self.valuation).clamp(0, self.coeffs.len() as i64) as usize;
        Self::normalized(
            self.field.clone(),
            self.width,
            self.valuation.min(precision),
            self.coeffs[..keep].to_vec(),
            precision,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        let precision = a.precision.min(b.precision);
        let start = a.valuation.min(b.valuation).min(precision);
        let stop = a.end().max(b.end()).min(precision);
        let coeffs = (start..stop.max(start))
            .map(|e| &a.coeff_known(e) + &b.coeff_known(e))
            .collect();
        Self::normalized(a.field.clone(), a.width, start, coeffs, precision)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|c| -c).collect();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CycloElem) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Self::normalized(self.field.clone(), self.width, self.valuation, coeffs, self.precision)
    }

    pub fn add_scalar(&self, c: &CycloElem) -> Self {
        self.add(&LaurentSeries::constant(c.clone(), self.width))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        let precision = a
            .precision
            .saturating_add(b.valuation)
            .min(b.precision.saturating_add(a.valuation))
            .min(EXACT);
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return Self::normalized(a.field.clone(), a.width, precision, Vec::new(), precision);
        }
        let start = a.valuation + b.valuation;
        let full = a.coeffs.len() + b.coeffs.len() - 1;
        let len = (full as i64).min(precision - start).max(0) as usize;
        let mut coeffs = vec![CycloElem::zero(&a.field); len];
        for (i, x) in a.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !y.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(x * y);
                }
            }
        }
        Self::normalized(a.field.clone(), a.width, start, coeffs, precision)
    }

    /// Multiplicative inverse to the precision supported by the input.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::InsufficientPrecision(
                "cannot invert a series with no known nonzero coefficient".into(),
            ));
        }
        let v = self.valuation;
        if self.is_exact() {
            if self.coeffs.len() == 1 {
                let c = self.coeffs[0].inv()?;
                return Ok(Self::normalized(self.field.clone(), self.width, -v, vec![c], EXACT));
            }
            return Err(Error::InsufficientPrecision(
                "inverse of an exact non-monomial series needs a precision bound".into(),
            ));
        }
        let rel = (self.precision - v) as usize;
        let c0inv = self.coeffs[0].inv()?;
        let mut out: Vec<CycloElem> = Vec::with_capacity(rel);
        out.push(c0inv.clone());
        for k in 1..rel {
            let mut s = CycloElem::zero(&self.field);
            for i in 1..=k.min(self.coeffs.len() - 1) {
                s = &s + &(&self.coeffs[i] * &out[k - i]);
            }
            out.push(-&(&s * &c0inv));
        }
        Ok(Self::normalized(self.field.clone(), self.width, -v, out, -v + rel as i64))
    }

    /// First exponent below `limit` where two series differ, if any; errors
    /// when either side is not known up to `limit`.
    pub fn first_difference(&self, other: &Self, limit: i64) -> Result<Option<i64>> {
        let (a, b) = self.unify(other);
        let scale = (a.width / self.width) as i64;
        let limit = limit * scale;
        if a.precision < limit || b.precision < limit {
            return Err(Error::InsufficientPrecision(format!(
                "need exponent {limit}/{}, have {}/{} and {}/{}",
                a.width, a.precision, a.width, b.precision, b.width
            )));
        }
        let start = a.valuation.min(b.valuation).min(limit);
        Ok((start..limit).find(|&e| a.coeff_known(e) != b.coeff_known(e)))
    }

    pub fn embed(&self, m: u64) -> Result<Self> {
        let field = CycloField::get(m);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.embed(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::normalized(field, self.width, self.valuation, coeffs, self.precision))
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            conductor: self.field.conductor(),
            width: self.width,
            valuation: self.valuation,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.to_strings().into_iter().map(serde_json::Value::String).collect())
                .collect(),
            precision: self.precision,
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        if j.conductor == 0 {
            return Err(Error::Schema("conductor must be positive".into()));
        }
        let field = CycloField::get(j.conductor);
        let coeffs = j
            .coeffs
            .iter()
            .map(|c| CycloElem::from_json_coeffs(&field, c))
            .collect::<Result<Vec<_>>>()?;
        LaurentSeries::new(&field, j.width, j.valuation, coeffs, j.precision)
    }

    fn eval_poly(p: &Poly, h: &LaurentSeries) -> LaurentSeries {
        let mut acc = LaurentSeries::constant(p.leading().cloned().unwrap_or_else(|| CycloElem::zero(p.field())), h.width);
        for c in p.coeffs().iter().rev().skip(1) {
            acc = acc.mul(h).add_scalar(c);
        }
        acc
    }
}

/// `pi(h)` as a series, to the precision the input supports.
pub fn series_compose(pi: &RatFunc, h: &LaurentSeries) -> Result<LaurentSeries> {
    if pi.conductor() != h.field.conductor() {
        return Err(Error::FieldMismatch {
            left: pi.conductor(),
            right: h.field.conductor(),
        });
    }
    let num = LaurentSeries::eval_poly(pi.num(), h);
    let den = LaurentSeries::eval_poly(pi.den(), h);
    let inv = den.inverse()?;
    let out = num.mul(&inv);
    if out.is_exact() && !(num.is_exact() && den.is_exact()) {
        return Err(Error::InsufficientPrecision("composition lost all precision".into()));
    }
    Ok(out)
}

/// `j = E_4^3 / Delta = q^-1 + 744 + 196884 q + ...` over `Q`, known up to
/// (excluding) `q^precision`.
pub fn j_invariant(precision: i64) -> LaurentSeries {
    assert!(precision >= 0, "precision must be nonnegative");
    let len = (precision + 1) as usize;
    // E4 = 1 + 240 sum sigma_3(n) q^n
    let mut e4 = vec![BigInt::zero(); len];
    e4[0] = BigInt::one();
    for (n, slot) in e4.iter_mut().enumerate().skip(1) {
        let s: u64 = (1..=n as u64).filter(|d| (n as u64).is_multiple_of(*d)).map(|d| d * d * d).sum();
        *slot = BigInt::from(240u64) * BigInt::from(s);
    }
    // Delta / q = prod (1 - q^n)^24
    let mut eta = vec![BigInt::zero(); len];
    eta[0] = BigInt::one();
    for n in 1..len {
        for _ in 0..24 {
            for i in (n..len).rev() {
                let t = eta[i - n].clone();
                eta[i] -= t;
            }
        }
    }
    let mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        let mut c = vec![BigInt::zero(); len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(len - i) {
                c[i + j] += x * y;
            }
        }
        c
    };
    let e4_cubed = mul(&mul(&e4, &e4), &e4);
    // eta has constant term 1, so its inverse is integral
    let mut inv = vec![BigInt::zero(); len];
    inv[0] = BigInt::one();
    for k in 1..len {
        let mut s = BigInt::zero();
        for i in 1..=k {
            s += &eta[i] * &inv[k - i];
        }
        inv[k] = -s;
    }
    let j = mul(&e4_cubed, &inv);
    let q = CycloField::get(1);
    let coeffs = j.into_iter().map(|c| CycloElem::from_bigint(&q, c)).collect();
    LaurentSeries::normalized(q, 1, -1, coeffs, precision)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_leading_coefficients() {
        let j = j_invariant(4);
        let q = CycloField::get(1);
        let expect = [1i64, 744, 196884, 21493760, 864299970];
        for (k, &c) in expect.iter().enumerate() {
            assert_eq!(j.coeff(k as i64 - 1).unwrap(), CycloElem::from_int(&q, c));
        }
        assert_eq!(j.coeff(4), None);
    }

    #[test]
    fn compose_square() {
        let q = CycloField::get(1);
        let one = CycloElem::one(&q);
        let h = LaurentSeries::new(&q, 1, -1, vec![one.clone(), CycloElem::zero(&q), one.clone()], 5).unwrap();
        let t2 = RatFunc::from_poly(Poly::from_ints(&q, &[0, 0, 1]));
        let s = series_compose(&t2, &h).unwrap();
        assert_eq!(s.coeff(-2).unwrap(), one);
        assert_eq!(s.coeff(0).unwrap(), CycloElem::from_int(&q, 2));
        assert_eq!(s.coeff(2).unwrap(), one);
        assert_eq!(s.precision(), 4);
        let id = RatFunc::t(&q);
        assert_eq!(series_compose(&id, &h).unwrap(), h);
    }

    #[test]
    fn rescaling_spreads_exponents() {
        let q = CycloField::get(1);
        let h = LaurentSeries::new(&q, 1, 0, vec![CycloElem::one(&q), CycloElem::from_int(&q, 3)], 3).unwrap();
        let r = h.rescale(2);
        assert_eq!(r.width(), 2);
        assert_eq!(r.coeff(2).unwrap(), CycloElem::from_int(&q, 3));
        assert_eq!(r.coeff(1).unwrap(), CycloElem::zero(&q));
        assert_eq!(r.precision(), 6);
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn composition_respects_truncation(
            num in prop::collection::vec(-5i64..=5, 1..4),
            den in prop::collection::vec(-5i64..=5, 1..3),
            tail in prop::collection::vec(-20i64..=20, 6),
            low in 1i64..5,
        ) {
            let q = CycloField::get(1);
            let den = Poly::from_ints(&q, &den);
            if den.is_zero() {
                return Ok(());
            }
            let Ok(pi) = RatFunc::new(Poly::from_ints(&q, &num), den) else { return Ok(()) };
            // h = q^-1 + c0 + c1 q + ..., known below q^6
            let mut coeffs = vec![CycloElem::one(&q)];
            coeffs.extend(tail.iter().map(|&c| CycloElem::from_int(&q, c)));
            let h = LaurentSeries::new(&q, 1, -1, coeffs, 6).unwrap();
            let (Ok(full), Ok(part)) = (series_compose(&pi, &h), series_compose(&pi, &h.truncate(low))) else {
                return Ok(());
            };
            prop_assert!(part.precision() <= full.precision());
            prop_assert_eq!(full.truncate(part.precision()), part);
        }
    }
}
