use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use super::rational::PointP1;
use crate::cyclotomic::{CycloElem, CycloField, SubfieldSpec};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// An element of `PGL_2(K_N)` acting by `t -> (a t + b) / (c t + d)`.
///
/// Stored in canonical form: the first nonzero entry of `(a, b, c, d)` is 1,
/// so derived equality is projective equality. The matrix product `g * h`
/// corresponds to the composition `g o h`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mobius {
    entries: [CycloElem; 4],
}

impl fmt::Debug for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Mobius {
    pub fn new(a: CycloElem, b: CycloElem, c: CycloElem, d: CycloElem) -> Result<Self> {
        let det = &(&a * &d) - &(&b * &c);
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let mut entries = [a, b, c, d];
        let pivot = entries
            .iter()
            .find(|e| !e.is_zero())
            .expect("invertible matrix has a nonzero entry")
            .clone();
        if !pivot.is_one() {
            let inv = pivot.inv()?;
            for e in entries.iter_mut() {
                *e = &*e * &inv;
            }
        }
        Ok(Mobius { entries })
    }

    pub fn from_ints(field: &Arc<CycloField>, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let e = |x| CycloElem::from_int(field, x);
        Mobius::new(e(a), e(b), e(c), e(d))
    }

    pub fn identity(field: &Arc<CycloField>) -> Self {
        Mobius::from_ints(field, 1, 0, 0, 1).expect("identity is invertible")
    }

    /// `t -> s * t`.
    pub fn scaling(s: CycloElem) -> Result<Self> {
        let f = s.field().clone();
        Mobius::new(s, CycloElem::zero(&f), CycloElem::zero(&f), CycloElem::one(&f))
    }

    pub fn from_matrix(m: &Matrix<CycloElem>) -> Result<Self> {
        assert_eq!((m.rows(), m.cols()), (2, 2));
        Mobius::new(
            m.get(0, 0).clone(),
            m.get(0, 1).clone(),
            m.get(1, 0).clone(),
            m.get(1, 1).clone(),
        )
    }

    /// The canonical `GL_2` representative.
    pub fn to_matrix(&self) -> Matrix<CycloElem> {
        let [a, b, c, d] = self.entries.clone();
        Matrix::from_rows(vec![vec![a, b], vec![c, d]])
    }

    pub fn entries(&self) -> &[CycloElem; 4] {
        &self.entries
    }

    pub fn a(&self) -> &CycloElem {
        &self.entries[0]
    }
    pub fn b(&self) -> &CycloElem {
        &self.entries[1]
    }
    pub fn c(&self) -> &CycloElem {
        &self.entries[2]
    }
    pub fn d(&self) -> &CycloElem {
        &self.entries[3]
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.entries[0].field()
    }

    pub fn det(&self) -> CycloElem {
        &(self.a() * self.d()) - &(self.b() * self.c())
    }

    pub fn is_identity(&self) -> bool {
        self.b().is_zero() && self.c().is_zero() && self.a() == self.d()
    }

    /// Matrix product, i.e. the composition `self o other`.
    pub fn mul(&self, other: &Mobius) -> Mobius {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &other.entries;
        Mobius::new(
            &(a * e) + &(b * g),
            &(a * f) + &(b * h),
            &(c * e) + &(d * g),
            &(c * f) + &(d * h),
        )
        .expect("product of invertible matrices is invertible")
    }

    pub fn inverse(&self) -> Mobius {
        let [a, b, c, d] = self.entries.clone();
        Mobius::new(d, -b, -c, a).expect("adjugate of an invertible matrix is invertible")
    }

    /// Entrywise Galois action.
    pub fn galois(&self, d: u64) -> Mobius {
        Mobius {
            entries: self.entries.clone().map(|e| e.galois_unchecked(d)),
        }
    }

    pub fn embed(&self, m: u64) -> Result<Mobius> {
        let [a, b, c, d] = &self.entries;
        Mobius::new(a.embed(m)?, b.embed(m)?, c.embed(m)?, d.embed(m)?)
    }

    pub fn entries_in(&self, k: &SubfieldSpec) -> bool {
        self.entries.iter().all(|e| k.contains(e))
    }

    /// `g(x)` on the projective line.
    pub fn apply(&self, x: &PointP1) -> PointP1 {
        let [a, b, c, d] = &self.entries;
        match x {
            PointP1::Infinity => {
                if c.is_zero() {
                    PointP1::Infinity
                } else {
                    PointP1::Finite(a.checked_div(c).expect("nonzero"))
                }
            }
            PointP1::Finite(x) => {
                let den = &(c * x) + d;
                let num = &(a * x) + b;
                if den.is_zero() {
                    PointP1::Infinity
                } else {
                    PointP1::Finite(num.checked_div(&den).expect("nonzero"))
                }
            }
        }
    }

    /// Order in `PGL_2`, searched up to `limit`.
    pub fn order(&self, limit: usize) -> Option<usize> {
        let mut p = self.clone();
        for k in 1..=limit {
            if p.is_identity() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }

    /// Wire form `[[a, b], [c, d]]`, each entry a coordinate string list.
    pub fn to_json(&self) -> Value {
        let s: Vec<Vec<String>> = self.entries.iter().map(CycloElem::to_strings).collect();
        json!([[s[0], s[1]], [s[2], s[3]]])
    }

    pub fn from_json(field: &Arc<CycloField>, v: &Value) -> Result<Mobius> {
        let bad = || Error::Schema(format!("malformed Mobius matrix {v}"));
        let rows = v.as_array().ok_or_else(bad)?;
        if rows.len() != 2 {
            return Err(bad());
        }
        let mut entries = Vec::with_capacity(4);
        for row in rows {
            let row = row.as_array().ok_or_else(bad)?;
            if row.len() != 2 {
                return Err(bad());
            }
            for e in row {
                let coeffs = e.as_array().ok_or_else(bad)?;
                entries.push(CycloElem::from_json_coeffs(field, coeffs)?);
            }
        }
        let mut it = entries.into_iter();
        Mobius::new(
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MobiusOp {
    Mul,
    Inv,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MobiusOpResult {
    Element(Mobius),
    Bool(bool),
}

/// Group operations on `PGL_2`: product, inverse of `g`, projective equality.
pub fn mobius_group_ops(g: &Mobius, h: &Mobius, op: MobiusOp) -> MobiusOpResult {
    match op {
        MobiusOp::Mul => MobiusOpResult::Element(g.mul(h)),
        MobiusOp::Inv => MobiusOpResult::Element(g.inverse()),
        MobiusOp::Eq => MobiusOpResult::Bool(g == h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_group_laws() {
        let k5 = CycloField::get(5);
        let z = CycloElem::zeta(&k5);
        let g = Mobius::new(z.clone(), CycloElem::one(&k5), CycloElem::from_int(&k5, 2), z.clone()).unwrap();
        assert!(g.mul(&g.inverse()).is_identity());
        let id = Mobius::identity(&k5);
        assert_eq!(Mobius::from_ints(&k5, 2, 0, 0, 2).unwrap(), id);
        let w = Mobius::from_ints(&k5, 0, 1, 1, 0).unwrap();
        assert_eq!(mobius_group_ops(&w.mul(&w), &id, MobiusOp::Eq), MobiusOpResult::Bool(true));
        assert_eq!(Mobius::from_ints(&k5, 1, 2, 2, 4), Err(Error::SingularMatrix));
        assert_eq!(w.order(10), Some(2));
    }

    #[test]
    fn json_round_trip() {
        let k8 = CycloField::get(8);
        let z = CycloElem::zeta(&k8);
        let g = Mobius::new(CycloElem::from_int(&k8, 3), z.clone(), -&z, CycloElem::one(&k8)).unwrap();
        assert_eq!(Mobius::from_json(&k8, &g.to_json()).unwrap(), g);
    }
}
