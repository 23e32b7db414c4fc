use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::elem::CycloElem;
use super::field::CycloField;
use super::galois::{all_subgroups, closure, independent_generators, normalize_unit};
use crate::arith;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// The fixed field `K_N^H` of a subgroup `H <= (Z/N)^x`, with a Q-basis of
/// Gauss periods.
#[derive(Clone)]
pub struct SubfieldSpec {
    field: Arc<CycloField>,
    subgroup: Vec<u64>,
    generators: Vec<u64>,
    basis: Vec<CycloElem>,
}

impl PartialEq for SubfieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.conductor() == other.conductor() && self.subgroup == other.subgroup
    }
}

impl Eq for SubfieldSpec {}

impl fmt::Debug for SubfieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K_{}^<{:?}>", self.conductor(), self.generators)
    }
}

/// Wire form: `{"conductor": N, "subgroup_generators": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubfieldJson {
    pub conductor: u64,
    pub subgroup_generators: Vec<u64>,
}

impl SubfieldSpec {
    /// The fixed field of the subgroup generated by `gens`.
    pub fn new(n: u64, gens: &[u64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Schema("conductor must be positive".into()));
        }
        for &g in gens {
            if n > 2 && arith::gcd(g % n, n) != 1 {
                return Err(Error::NotAUnit { d: g, modulus: n });
            }
        }
        let subgroup = closure(gens, n);
        Ok(Self::from_subgroup(n, subgroup))
    }

    fn from_subgroup(n: u64, subgroup: Vec<u64>) -> Self {
        let field = CycloField::get(n);
        let mut generators: Vec<u64> = independent_generators(&subgroup, n)
            .into_iter()
            .map(|g| g.0)
            .collect();
        generators.sort_unstable();
        let basis = fixed_field_basis_of(&field, &subgroup);
        SubfieldSpec {
            field,
            subgroup,
            generators,
            basis,
        }
    }

    /// `K_N` itself (trivial subgroup).
    pub fn whole(n: u64) -> Self {
        Self::from_subgroup(n, vec![1])
    }

    /// `Q` inside `K_N` (full subgroup).
    pub fn rationals(n: u64) -> Self {
        Self::from_subgroup(n, arith::units(n))
    }

    pub fn from_json(j: &SubfieldJson) -> Result<Self> {
        Self::new(j.conductor, &j.subgroup_generators)
    }

    pub fn to_json(&self) -> SubfieldJson {
        SubfieldJson {
            conductor: self.conductor(),
            subgroup_generators: self.generators.clone(),
        }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor()
    }

    /// Elements of `H`, ascending.
    pub fn subgroup(&self) -> &[u64] {
        &self.subgroup
    }

    /// Canonical independent generators of `H`, ascending.
    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Gauss-period basis of `K_N^H` over `Q`.
    pub fn basis(&self) -> &[CycloElem] {
        &self.basis
    }

    /// `[K : Q] = phi(N) / |H|`.
    pub fn degree(&self) -> usize {
        self.basis.len()
    }

    pub fn is_rationals(&self) -> bool {
        self.basis.len() == 1
    }

    /// Membership test: fixed by every generator of `H`.
    pub fn contains(&self, a: &CycloElem) -> bool {
        if a.conductor() != self.conductor() {
            return false;
        }
        a.is_rational()
            || self
                .generators
                .iter()
                .all(|&g| a.galois_unchecked(g) == *a)
    }

    /// The same field viewed inside `K_M` for a multiple `M` of `N`: the
    /// preimage of `H` under reduction `(Z/M)^x -> (Z/N)^x`.
    pub fn lift_to(&self, m: u64) -> Result<Self> {
        let n = self.conductor();
        if !m.is_multiple_of(n) {
            return Err(Error::NotASubfield { sub: n, ambient: m });
        }
        if m == n {
            return Ok(self.clone());
        }
        let pre: Vec<u64> = arith::units(m)
            .into_iter()
            .filter(|&u| self.subgroup.contains(&normalize_unit(u, n)))
            .collect();
        Ok(Self::from_subgroup(m, pre))
    }

    /// True if this field is contained in `K_m` (tested inside `K_N` as
    /// `K ⊆ K_gcd(N, m)`).
    pub fn contained_in_cyclotomic(&self, m: u64) -> bool {
        let n = self.conductor();
        let g = arith::gcd(n, m);
        arith::units(n)
            .into_iter()
            .filter(|&u| normalize_unit(u, g) == 1)
            .all(|u| self.subgroup.contains(&u))
    }

    /// Coordinates of `a` in the Gauss-period basis, if `a` lies in this field.
    pub fn coordinates(&self, a: &CycloElem) -> Option<Vec<BigRational>> {
        if !self.contains(a) {
            return None;
        }
        let d = self.field.degree();
        let m = Matrix::from_fn(d, self.basis.len(), |i, j| self.basis[j].coeff(i));
        m.solve(&a.coeffs())
    }

    /// The element with the given coordinates in the Gauss-period basis.
    pub fn from_coordinates(&self, coords: &[BigRational]) -> CycloElem {
        coords
            .iter()
            .zip(&self.basis)
            .fold(CycloElem::zero(&self.field), |acc, (c, b)| acc + b.scale(c))
    }
}

/// `K_N^H` membership for a raw subgroup.
pub fn is_in_subfield(a: &CycloElem, h: &SubfieldSpec) -> bool {
    h.contains(a)
}

/// Gauss-period basis of the fixed field of `subgroup`.
pub fn fixed_field_basis(h: &SubfieldSpec) -> Vec<CycloElem> {
    h.basis().to_vec()
}

fn fixed_field_basis_of(field: &Arc<CycloField>, subgroup: &[u64]) -> Vec<CycloElem> {
    let n = field.conductor();
    let d = field.degree();
    let target = d / subgroup.len();
    let mut basis: Vec<CycloElem> = Vec::with_capacity(target);
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for k in 0..n {
        if basis.len() == target {
            break;
        }
        // orbit representative: skip k already covered by an earlier orbit
        let orbit: Vec<u64> = subgroup.iter().map(|&h| (k * h) % n.max(1)).collect();
        let rep = *orbit.iter().min().expect("nonempty orbit");
        if !seen.insert(rep) {
            continue;
        }
        let period = orbit
            .iter()
            .fold(CycloElem::zero(field), |acc, &e| acc + CycloElem::zeta_pow(field, e as i64));
        if period.is_zero() {
            continue;
        }
        let mut candidate = rows.clone();
        candidate.push(period.coeffs());
        if Matrix::from_rows(candidate.clone()).rank() == candidate.len() {
            rows = candidate;
            basis.push(period);
        }
    }
    assert_eq!(basis.len(), target, "Gauss periods must span the fixed field");
    basis
}

/// All subfields of `K_N`, one per subgroup of `(Z/N)^x`, ordered by
/// increasing subgroup size (so `K_N` first and `Q` last).
pub fn enumerate_subgroups(n: u64) -> Vec<SubfieldSpec> {
    all_subgroups(n)
        .into_iter()
        .map(|h| SubfieldSpec::from_subgroup(n, h))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_quadratic_subfield_of_k5() {
        let h = SubfieldSpec::new(5, &[4]).unwrap();
        assert_eq!(h.degree(), 2);
        let k5 = CycloField::get(5);
        let z = CycloElem::zeta(&k5);
        let period = &z + &CycloElem::zeta_pow(&k5, 4);
        // the period satisfies x^2 + x - 1 = 0
        assert!((&(&period * &period) + &period - CycloElem::one(&k5)).is_zero());
        assert!(h.basis().contains(&period));
        assert!(h.contains(&period));
        assert!(!h.contains(&z));
        assert!(h.contains(&CycloElem::from_ratio(&k5, 3, 2)));
    }

    #[test]
    fn extreme_subgroups() {
        let q = SubfieldSpec::rationals(9);
        assert_eq!(q.basis().len(), 1);
        assert!(q.basis()[0].is_rational());
        let whole = SubfieldSpec::whole(9);
        assert_eq!(whole.degree(), 6);
    }

    #[test]
    fn lattice_sizes() {
        assert_eq!(enumerate_subgroups(9).len(), 4);
        assert_eq!(enumerate_subgroups(8).len(), 5);
        assert_eq!(enumerate_subgroups(3).len(), 2);
        for h in enumerate_subgroups(16) {
            assert_eq!(h.degree() * h.subgroup().len(), 8);
            for b in h.basis() {
                assert!(h.contains(b));
            }
        }
    }

    #[test]
    fn lifting_and_containment() {
        let k3 = SubfieldSpec::whole(3);
        let lifted = k3.lift_to(9).unwrap();
        assert_eq!(lifted.subgroup(), &[1, 4, 7]);
        assert_eq!(lifted.degree(), 2);
        assert!(lifted.contained_in_cyclotomic(3));
        assert!(!SubfieldSpec::whole(9).contained_in_cyclotomic(3));
        let qi = SubfieldSpec::new(16, &[5]).unwrap();
        assert!(qi.contained_in_cyclotomic(8));
    }

    #[test]
    fn coordinates_round_trip() {
        let h = SubfieldSpec::new(5, &[4]).unwrap();
        let a = h.from_coordinates(&[BigRational::from_integer(2.into()), BigRational::new(1.into(), 3.into())]);
        assert_eq!(h.coordinates(&a).unwrap().len(), 2);
        assert_eq!(h.from_coordinates(&h.coordinates(&a).unwrap()), a);
    }
}
