use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::transfer::{phi, standard_gram};
use crate::cohomology::{hilbert90, Cocycle, MatrixCocycle};
use crate::cyclotomic::{CycloElem, CycloField, SubfieldJson, SubfieldSpec};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// A nondegenerate ternary quadratic form `v^T G v` with coefficients in `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicForm {
    gram: Matrix<CycloElem>,
    field: SubfieldSpec,
}

/// A point `[x : y : z]` on a conic, coordinates in `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicPoint {
    pub coords: [CycloElem; 3],
}

impl ConicForm {
    /// Checks symmetry, `K`-rationality and nondegeneracy.
    pub fn new(gram: Matrix<CycloElem>, field: SubfieldSpec) -> Result<Self> {
        if gram.rows() != 3 || gram.cols() != 3 || gram.transpose() != gram {
            return Err(Error::InvariantViolation("conic Gram matrix must be symmetric 3x3".into()));
        }
        if let Some(bad) = gram.entries().iter().find(|x| !field.contains(x)) {
            return Err(Error::InvariantViolation(format!(
                "conic coefficient {bad} is not in {field:?}"
            )));
        }
        if gram.det().is_zero() {
            return Err(Error::InvariantViolation("degenerate conic".into()));
        }
        Ok(ConicForm { gram, field })
    }

    pub fn gram(&self) -> &Matrix<CycloElem> {
        &self.gram
    }

    pub fn field(&self) -> &SubfieldSpec {
        &self.field
    }

    pub fn evaluate(&self, v: &[CycloElem]) -> CycloElem {
        let gv = self.gram.mul_vec(v);
        v.iter()
            .zip(&gv)
            .fold(CycloElem::zero(self.field.field()), |acc, (a, b)| &acc + &(a * b))
    }

    /// `B(u, v) = u^T G v`.
    pub fn bilinear(&self, u: &[CycloElem], v: &[CycloElem]) -> CycloElem {
        let gv = self.gram.mul_vec(v);
        u.iter()
            .zip(&gv)
            .fold(CycloElem::zero(self.field.field()), |acc, (a, b)| &acc + &(a * b))
    }

    pub fn contains(&self, p: &ConicPoint) -> bool {
        p.coords.iter().any(|c| !c.is_zero())
            && p.coords.iter().all(|c| self.field.contains(c))
            && self.evaluate(&p.coords).is_zero()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<Vec<String>>> = (0..3)
            .map(|i| (0..3).map(|j| self.gram.get(i, j).to_strings()).collect())
            .collect();
        json!({ "gram": rows, "field": self.field.to_json() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field: SubfieldJson = serde_json::from_value(v["field"].clone())?;
        let field = SubfieldSpec::from_json(&field)?;
        let f = field.field().clone();
        let rows = v["gram"]
            .as_array()
            .filter(|r| r.len() == 3)
            .ok_or_else(|| Error::Schema("conic gram must have 3 rows".into()))?;
        let mut out = Vec::with_capacity(3);
        for row in rows {
            let row = row
                .as_array()
                .filter(|r| r.len() == 3)
                .ok_or_else(|| Error::Schema("conic gram rows must have 3 entries".into()))?;
            let parsed = row
                .iter()
                .map(|e| {
                    let coeffs = e.as_array().ok_or_else(|| Error::Schema("bad conic entry".into()))?;
                    CycloElem::from_json_coeffs(&f, coeffs)
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(parsed);
        }
        ConicForm::new(Matrix::from_rows(out), field)
    }
}

/// The conic attached to `zeta`, together with the matrix `M` splitting
/// `phi o zeta`; the form is `Q_0(M^-1 v)`.
pub fn conic_from_cocycle(zeta: &Cocycle) -> Result<(ConicForm, Matrix<CycloElem>)> {
    let group = zeta.group().clone();
    let values = group
        .elements()
        .iter()
        .map(|&d| Ok((d, phi(zeta.value(d))?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let psi = MatrixCocycle::new(group.clone(), values)?;
    let m = hilbert90(&psi)?;
    let minv = m.inverse()?;
    let field = CycloField::get(group.conductor());
    let g0 = standard_gram(&CycloElem::one(&field));
    let gram = minv.transpose().mul(&g0).mul(&minv);
    let form = ConicForm::new(gram, group.base_field())?;
    Ok((form, m))
}

/// A `K`-congruence `T^T G T = diag(d)`.
pub fn diagonalize(form: &ConicForm) -> (Vec<CycloElem>, Matrix<CycloElem>) {
    let one = CycloElem::one(form.field().field());
    let mut g = form.gram().clone();
    let mut t = Matrix::identity(3, &one);
    let n = 3;
    // column operations mirrored on rows keep g = T^T G T
    let add_col = |g: &mut Matrix<CycloElem>, t: &mut Matrix<CycloElem>, dst: usize, src: usize, c: &CycloElem| {
        for r in 0..n {
            let v = g.get(r, dst) + &(g.get(r, src) * c);
            g.set(r, dst, v);
        }
        for k in 0..n {
            let v = g.get(dst, k) + &(g.get(src, k) * c);
            g.set(dst, k, v);
        }
        for r in 0..n {
            let v = t.get(r, dst) + &(t.get(r, src) * c);
            t.set(r, dst, v);
        }
    };
    let swap = |g: &mut Matrix<CycloElem>, t: &mut Matrix<CycloElem>, i: usize, j: usize| {
        for r in 0..n {
            let (a, b) = (g.get(r, i).clone(), g.get(r, j).clone());
            g.set(r, i, b);
            g.set(r, j, a);
        }
        for k in 0..n {
            let (a, b) = (g.get(i, k).clone(), g.get(j, k).clone());
            g.set(i, k, b);
            g.set(j, k, a);
        }
        for r in 0..n {
            let (a, b) = (t.get(r, i).clone(), t.get(r, j).clone());
            t.set(r, i, b);
            t.set(r, j, a);
        }
    };
    for i in 0..n {
        if g.get(i, i).is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !g.get(j, j).is_zero()) {
                swap(&mut g, &mut t, i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !g.get(i, j).is_zero()) {
                add_col(&mut g, &mut t, i, j, &one);
            } else {
                continue;
            }
        }
        let pivot = g.get(i, i).clone();
        for j in i + 1..n {
            if g.get(i, j).is_zero() {
                continue;
            }
            let c = -&g.get(i, j).checked_div(&pivot).expect("nonzero pivot");
            add_col(&mut g, &mut t, j, i, &c);
        }
    }
    let diag = (0..n).map(|i| g.get(i, i).clone()).collect();
    (diag, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::galois_group;
    use crate::ratfunc::Mobius;

    #[test]
    fn standard_conic_diagonalizes() {
        let q = CycloField::get(1);
        let form = ConicForm::new(standard_gram(&CycloElem::one(&q)), SubfieldSpec::rationals(1)).unwrap();
        let (d, t) = diagonalize(&form);
        let back = t.transpose().mul(form.gram()).mul(&t);
        assert_eq!(back, Matrix::from_fn(3, 3, |i, j| if i == j { d[i].clone() } else { CycloElem::zero(&q) }));
        let negatives = d.iter().filter(|x| x.to_rational().unwrap() < num_rational::BigRational::from_integer(0.into())).count();
        assert_eq!(negatives, 1);
        let p = ConicPoint { coords: [CycloElem::one(&q), CycloElem::zero(&q), CycloElem::zero(&q)] };
        assert!(form.contains(&p));
    }

    #[test]
    fn diagonal_input_unchanged() {
        let q = CycloField::get(1);
        let e = |x| CycloElem::from_int(&q, x);
        let g = Matrix::from_rows(vec![vec![e(1), e(0), e(0)], vec![e(0), e(2), e(0)], vec![e(0), e(0), e(-3)]]);
        let form = ConicForm::new(g, SubfieldSpec::rationals(1)).unwrap();
        let (d, t) = diagonalize(&form);
        assert_eq!(d, vec![e(1), e(2), e(-3)]);
        assert_eq!(t, Matrix::identity(3, &e(1)));
    }

    #[test]
    fn conic_of_coboundary_is_rational() {
        let k5 = CycloField::get(5);
        let g = galois_group(5, &SubfieldSpec::rationals(5)).unwrap();
        let z = CycloElem::zeta(&k5);
        let a0 = Mobius::new(z.clone(), CycloElem::one(&k5), CycloElem::from_int(&k5, 3), z.pow(2)).unwrap();
        let zeta = Cocycle::coboundary(g.clone(), &a0);
        let (form, _) = conic_from_cocycle(&zeta).unwrap();
        for &d in g.elements() {
            assert_eq!(form.gram().map(|x| x.galois_unchecked(d)), *form.gram());
        }
        assert_eq!(ConicForm::from_json(&form.to_json()).unwrap(), form);
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn conic_of_a_coboundary_is_k_rational(
            which in 0..4usize,
            e in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 4),
        ) {
            let (n, gens): (u64, &[u64]) = [(5, &[4u64][..]), (8, &[7][..]), (8, &[3][..]), (9, &[4][..])][which];
            let f = CycloField::get(n);
            let k = SubfieldSpec::new(n, gens).unwrap();
            let x: Vec<CycloElem> = e.iter().map(|c| CycloElem::from_int_coeffs(&f, &c[..f.degree()])).collect();
            let Ok(a0) = Mobius::new(x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone()) else {
                return Ok(());
            };
            let zeta = Cocycle::coboundary(galois_group(n, &k).unwrap(), &a0);
            let (form, _) = conic_from_cocycle(&zeta).unwrap();
            for entry in form.gram().entries() {
                prop_assert!(k.contains(entry));
            }
            let (d, t) = diagonalize(&form);
            prop_assert!(d.iter().all(|x| k.contains(x)));
            prop_assert!(t.entries().iter().all(|x| k.contains(x)));
        }
    }
}
