use crate::cyclotomic::CycloElem;
use crate::error::{Error, Result};
use crate::ratfunc::{PointP1, Poly, RatFunc};

use super::roots::rational_roots;

/// A rational point in a fiber of a map `P^1 -> P^1`, with its ramification.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiberPoint {
    pub value: PointP1,
    pub multiplicity: usize,
}

/// The `K_N`-rational points `s` with `pi(s) = y`.
pub fn fiber(pi: &RatFunc, y: &PointP1) -> Result<Vec<FiberPoint>> {
    if pi.is_constant() {
        return Err(Error::ConstantMap);
    }
    let deg = pi.degree();
    let h: Poly = match y {
        PointP1::Infinity => pi.den().clone(),
        PointP1::Finite(y) => {
            if y.conductor() != pi.conductor() {
                return Err(Error::FieldMismatch {
                    left: pi.conductor(),
                    right: y.conductor(),
                });
            }
            pi.num().sub(&pi.den().scale(y))
        }
    };
    let mut out: Vec<FiberPoint> = rational_roots(&h)?
        .into_iter()
        .map(|r: CycloElem| FiberPoint {
            multiplicity: h.root_multiplicity(&r),
            value: PointP1::Finite(r),
        })
        .collect();
    let at_infinity = deg - h.deg();
    if at_infinity > 0 {
        out.push(FiberPoint {
            value: PointP1::Infinity,
            multiplicity: at_infinity,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycloField;

    #[test]
    fn cube_roots_of_unity() {
        let k9 = CycloField::get(9);
        let t3 = RatFunc::from_poly(Poly::from_ints(&k9, &[0, 0, 0, 1]));
        let f = fiber(&t3, &PointP1::Finite(CycloElem::one(&k9))).unwrap();
        assert_eq!(f.len(), 3);
        for k in [0, 3, 6] {
            let w = PointP1::Finite(CycloElem::zeta_pow(&k9, k));
            assert!(f.iter().any(|p| p.value == w && p.multiplicity == 1));
        }
    }

    #[test]
    fn poles() {
        let q = CycloField::get(1);
        let t2 = RatFunc::from_poly(Poly::from_ints(&q, &[0, 0, 1]));
        assert_eq!(
            fiber(&t2, &PointP1::Infinity).unwrap(),
            vec![FiberPoint { value: PointP1::Infinity, multiplicity: 2 }]
        );
        let k4 = CycloField::get(4);
        let r = RatFunc::new(Poly::from_ints(&k4, &[1, 0, 1]), Poly::from_ints(&k4, &[-1, 1])).unwrap();
        let f = fiber(&r, &PointP1::Infinity).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.contains(&FiberPoint { value: PointP1::Finite(CycloElem::one(&k4)), multiplicity: 1 }));
        assert!(f.contains(&FiberPoint { value: PointP1::Infinity, multiplicity: 1 }));
    }
}
