use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::mobius::Mobius;
use super::poly::Poly;
use crate::cyclotomic::{CycloElem, CycloField, GaloisAut, SubfieldSpec};
use crate::error::{Error, Result};

/// A point of `P^1(K_N)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum PointP1 {
    Finite(CycloElem),
    Infinity,
}

impl PointP1 {
    pub fn is_infinity(&self) -> bool {
        matches!(self, PointP1::Infinity)
    }

    pub fn finite(&self) -> Option<&CycloElem> {
        match self {
            PointP1::Finite(x) => Some(x),
            PointP1::Infinity => None,
        }
    }

    pub fn galois(&self, d: u64) -> PointP1 {
        match self {
            PointP1::Finite(x) => PointP1::Finite(x.galois_unchecked(d)),
            PointP1::Infinity => PointP1::Infinity,
        }
    }
}

impl fmt::Display for PointP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointP1::Finite(x) => write!(f, "{x}"),
            PointP1::Infinity => write!(f, "oo"),
        }
    }
}

/// A rational function `num / den` over `K_N` with `gcd(num, den) = 1` and
/// `den` monic. The representation is unique, so derived equality is
/// equality of functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Wire form `{"conductor": N, "num": [...], "den": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatFuncJson {
    pub conductor: u64,
    pub num: Vec<Vec<serde_json::Value>>,
    pub den: Vec<Vec<serde_json::Value>>,
}

impl RatFunc {
    /// Reduce `num / den` to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.deg() > 0 {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        } else {
            (num, den)
        };
        Ok(Self::normalize_monic(num, den))
    }

    /// Scale so the denominator is monic; assumes coprimality.
    fn normalize_monic(num: Poly, den: Poly) -> Self {
        let lead = den.leading().expect("nonzero denominator").clone();
        if lead.is_one() {
            return RatFunc { num, den };
        }
        let inv = lead.inv().expect("nonzero leading coefficient");
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.field());
        RatFunc { num: p, den: one }
    }

    /// The identity function `t`.
    pub fn t(field: &Arc<CycloField>) -> Self {
        Self::from_poly(Poly::t(field))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.num.field()
    }

    pub fn conductor(&self) -> u64 {
        self.field().conductor()
    }

    /// `max(deg num, deg den)`, the degree of the map `P^1 -> P^1`.
    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn galois(&self, d: u64) -> RatFunc {
        RatFunc {
            num: self.num.galois(d),
            den: self.den.galois(d),
        }
    }

    pub fn embed(&self, m: u64) -> Result<RatFunc> {
        Ok(RatFunc {
            num: self.num.embed(m)?,
            den: self.den.embed(m)?,
        })
    }

    /// `self o g`, substituting `t -> (a t + b) / (c t + d)`.
    pub fn compose(&self, g: &Mobius) -> RatFunc {
        let n = self.degree();
        let u = Poly::linear(g.a().clone(), g.b().clone());
        let v = Poly::linear(g.c().clone(), g.d().clone());
        let num = self.num.homogeneous_substitute(n, &u, &v);
        let den = self.den.homogeneous_substitute(n, &u, &v);
        // an invertible substitution keeps the homogenized pair coprime
        Self::normalize_monic(num, den)
    }

    pub fn coefficients_in(&self, k: &SubfieldSpec) -> bool {
        self.num
            .coeffs()
            .iter()
            .chain(self.den.coeffs())
            .all(|c| k.contains(c))
    }

    pub fn evaluate(&self, x: &PointP1) -> Result<PointP1> {
        match x {
            PointP1::Finite(x) => {
                let n = self.num.eval(x);
                let d = self.den.eval(x);
                match (n.is_zero(), d.is_zero()) {
                    (_, false) => Ok(PointP1::Finite(n.checked_div(&d)?)),
                    (false, true) => Ok(PointP1::Infinity),
                    (true, true) => Err(Error::Indeterminate),
                }
            }
            PointP1::Infinity => {
                let dn = self.num.degree();
                let dd = self.den.deg();
                match dn {
                    None => Ok(PointP1::Finite(CycloElem::zero(self.field()))),
                    Some(dn) if dn > dd => Ok(PointP1::Infinity),
                    Some(dn) if dn < dd => Ok(PointP1::Finite(CycloElem::zero(self.field()))),
                    Some(_) => Ok(PointP1::Finite(
                        self.num.leading().expect("nonzero").checked_div(self.den.leading().expect("nonzero"))?,
                    )),
                }
            }
        }
    }

    pub fn to_json(&self) -> RatFuncJson {
        let conv = |p: &Poly| {
            p.coeff_strings()
                .into_iter()
                .map(|c| c.into_iter().map(serde_json::Value::String).collect())
                .collect()
        };
        RatFuncJson {
            conductor: self.conductor(),
            num: conv(&self.num),
            den: conv(&self.den),
        }
    }

    pub fn from_json(j: &RatFuncJson) -> Result<RatFunc> {
        if j.conductor == 0 {
            return Err(Error::Schema("conductor must be positive".into()));
        }
        let field = CycloField::get(j.conductor);
        let num = Poly::from_json(&field, &j.num)?;
        let den = Poly::from_json(&field, &j.den)?;
        RatFunc::new(num, den)
    }
}

pub fn compose_mobius(pi: &RatFunc, g: &Mobius) -> Result<RatFunc> {
    if g.field().conductor() != pi.conductor() {
        return Err(Error::FieldMismatch {
            left: pi.conductor(),
            right: g.field().conductor(),
        });
    }
    Ok(pi.compose(g))
}

pub fn galois_apply_ratfunc(sigma: &GaloisAut, pi: &RatFunc) -> Result<RatFunc> {
    if sigma.modulus() != pi.conductor() {
        return Err(Error::FieldMismatch {
            left: sigma.modulus(),
            right: pi.conductor(),
        });
    }
    Ok(pi.galois(sigma.label()))
}

pub fn coefficients_in(pi: &RatFunc, k: &SubfieldSpec) -> bool {
    pi.coefficients_in(k)
}

pub fn evaluate(pi: &RatFunc, x: &PointP1) -> Result<PointP1> {
    pi.evaluate(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Arc<CycloField> {
        CycloField::get(1)
    }

    #[test]
    fn composition_examples() {
        let f = q();
        let t2 = RatFunc::from_poly(Poly::from_ints(&f, &[0, 0, 1]));
        let g = Mobius::from_ints(&f, 1, 1, 0, 1).unwrap();
        assert_eq!(t2.compose(&g), RatFunc::from_poly(Poly::from_ints(&f, &[1, 2, 1])));
        assert_eq!(t2.compose(&Mobius::identity(&f)), t2);
        let t3 = RatFunc::from_poly(Poly::from_ints(&f, &[0, 0, 0, 1]));
        let w = Mobius::from_ints(&f, 0, 1, 1, 0).unwrap();
        let inv_t3 = RatFunc::new(Poly::one(&f), Poly::from_ints(&f, &[0, 0, 0, 1])).unwrap();
        assert_eq!(t3.compose(&w), inv_t3);
    }

    #[test]
    fn evaluation_examples() {
        let f = q();
        let recip = RatFunc::new(Poly::one(&f), Poly::t(&f)).unwrap();
        let zero = PointP1::Finite(CycloElem::zero(&f));
        assert_eq!(recip.evaluate(&zero).unwrap(), PointP1::Infinity);
        let r = RatFunc::new(Poly::from_ints(&f, &[1, 0, 1]), Poly::from_ints(&f, &[-1, 1])).unwrap();
        let two = PointP1::Finite(CycloElem::from_int(&f, 2));
        assert_eq!(r.evaluate(&two).unwrap(), PointP1::Finite(CycloElem::from_int(&f, 5)));
        let t3 = RatFunc::from_poly(Poly::from_ints(&f, &[0, 0, 0, 1]));
        assert_eq!(t3.evaluate(&PointP1::Infinity).unwrap(), PointP1::Infinity);
    }

    #[test]
    fn canonical_form_cancels() {
        let f = q();
        // (t^2 - 1) / (2t - 2) = (t + 1) / 2
        let r = RatFunc::new(Poly::from_ints(&f, &[-1, 0, 1]), Poly::from_ints(&f, &[-2, 2])).unwrap();
        assert_eq!(r.den(), &Poly::one(&f));
        assert_eq!(r.num(), &Poly::new(&f, vec![CycloElem::from_ratio(&f, 1, 2), CycloElem::from_ratio(&f, 1, 2)]));
    }

    #[test]
    fn coefficient_membership() {
        let k5 = CycloField::get(5);
        let h = SubfieldSpec::new(5, &[4]).unwrap();
        let z = CycloElem::zeta(&k5);
        let zt = RatFunc::from_poly(Poly::linear(z.clone(), CycloElem::zero(&k5)));
        assert!(!zt.coefficients_in(&h));
        let period = &z + &CycloElem::zeta_pow(&k5, 4);
        let pt = RatFunc::from_poly(Poly::linear(period, CycloElem::zero(&k5)));
        assert!(pt.coefficients_in(&h));
        let cubic = RatFunc::from_poly(Poly::from_ints(&k5, &[2, 0, 0, 1]));
        assert!(cubic.coefficients_in(&h));
    }

    #[test]
    fn galois_on_ratfunc() {
        let k3 = CycloField::get(3);
        let z = CycloElem::zeta(&k3);
        let zt = RatFunc::from_poly(Poly::linear(z.clone(), CycloElem::zero(&k3)));
        let sigma = GaloisAut::new(2, 3).unwrap();
        let expected = RatFunc::from_poly(Poly::linear(z.pow(2), CycloElem::zero(&k3)));
        assert_eq!(galois_apply_ratfunc(&sigma, &zt).unwrap(), expected);
    }

    use proptest::prelude::*;

    const CONDUCTORS: [u64; 5] = [1, 3, 4, 5, 8];

    fn elem(field: &Arc<CycloField>, coeffs: &[i64]) -> CycloElem {
        CycloElem::from_int_coeffs(field, &coeffs[..field.degree()])
    }

    fn poly(field: &Arc<CycloField>, coeffs: &[Vec<i64>]) -> Poly {
        Poly::new(field, coeffs.iter().map(|c| elem(field, c)).collect())
    }

    fn coeff_vecs(len: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-4i64..=4, 4), len)
    }

    fn ratfunc(field: &Arc<CycloField>, num: &[Vec<i64>], den: &[Vec<i64>]) -> Option<RatFunc> {
        let den = poly(field, den);
        if den.is_zero() {
            return None;
        }
        RatFunc::new(poly(field, num), den).ok()
    }

    fn mobius(field: &Arc<CycloField>, e: &[Vec<i64>]) -> Option<Mobius> {
        Mobius::new(elem(field, &e[0]), elem(field, &e[1]), elem(field, &e[2]), elem(field, &e[3])).ok()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn composition_is_a_right_action(
            which in 0..CONDUCTORS.len(),
            num in coeff_vecs(4), den in coeff_vecs(3), g in coeff_vecs(4), h in coeff_vecs(4),
        ) {
            let field = CycloField::get(CONDUCTORS[which]);
            let (Some(pi), Some(g), Some(h)) = (ratfunc(&field, &num, &den), mobius(&field, &g), mobius(&field, &h)) else {
                return Ok(());
            };
            prop_assert_eq!(pi.compose(&g).compose(&h), pi.compose(&g.mul(&h)));
        }

        #[test]
        fn galois_is_equivariant(
            which in 0..CONDUCTORS.len(),
            num in coeff_vecs(4), den in coeff_vecs(3), g in coeff_vecs(4), pick in 0usize..8,
        ) {
            let field = CycloField::get(CONDUCTORS[which]);
            let (Some(pi), Some(g)) = (ratfunc(&field, &num, &den), mobius(&field, &g)) else {
                return Ok(());
            };
            let d = field.units()[pick % field.units().len()];
            let sigma = GaloisAut::new(d, field.conductor()).unwrap();
            prop_assert_eq!(
                galois_apply_ratfunc(&sigma, &pi.compose(&g)).unwrap(),
                galois_apply_ratfunc(&sigma, &pi).unwrap().compose(&g.galois(d))
            );
        }

        #[test]
        fn evaluation_commutes_with_composition(
            which in 0..CONDUCTORS.len(),
            num in coeff_vecs(4), den in coeff_vecs(3), g in coeff_vecs(4),
            tau in prop::collection::vec(-6i64..=6, 4),
        ) {
            let field = CycloField::get(CONDUCTORS[which]);
            let (Some(pi), Some(g)) = (ratfunc(&field, &num, &den), mobius(&field, &g)) else {
                return Ok(());
            };
            let tau = PointP1::Finite(elem(&field, &tau));
            prop_assert_eq!(pi.compose(&g).evaluate(&tau).unwrap(), pi.evaluate(&g.apply(&tau)).unwrap());
        }

        #[test]
        fn membership_ignores_common_scaling(
            which in 0..CONDUCTORS.len(),
            num in coeff_vecs(3), den in coeff_vecs(3),
            c in prop::collection::vec(-4i64..=4, 4),
        ) {
            let field = CycloField::get(CONDUCTORS[which]);
            let c = elem(&field, &c);
            let Some(pi) = ratfunc(&field, &num, &den) else { return Ok(()) };
            if c.is_zero() {
                return Ok(());
            }
            let scaled = RatFunc::new(pi.num().scale(&c), pi.den().scale(&c)).unwrap();
            prop_assert_eq!(&scaled, &pi);
            for k in crate::cyclotomic::enumerate_subgroups(field.conductor()) {
                prop_assert_eq!(scaled.coefficients_in(&k), pi.coefficients_in(&k));
            }
        }
    }
}
