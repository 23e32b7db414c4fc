use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::cocycle::Cocycle;
use super::group::GalGroup;
use super::matrix::galois_matrix;
use crate::arith::exact_root;
use crate::cyclotomic::{CycloElem, CycloField};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ratfunc::Poly;
use crate::solver::rational_roots;

/// A scalar 2-cocycle `mu: G x G -> L^x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCocycle {
    group: GalGroup,
    table: BTreeMap<(u64, u64), CycloElem>,
}

impl TwoCocycle {
    pub fn new(group: GalGroup, table: BTreeMap<(u64, u64), CycloElem>) -> Result<Self> {
        let mu = TwoCocycle { group, table };
        mu.check()?;
        Ok(mu)
    }

    /// The coboundary `(s, t) -> a(s) s(a(t)) a(st)^-1` of a function `a`.
    pub fn coboundary(group: GalGroup, a: &BTreeMap<u64, CycloElem>) -> Result<Self> {
        let mut table = BTreeMap::new();
        for &s in group.elements() {
            for &t in group.elements() {
                let st = group.mul(s, t);
                let v = &(&a[&s] * &a[&t].galois_unchecked(s)) * &a[&st].inv()?;
                table.insert((s, t), v);
            }
        }
        Ok(TwoCocycle { group, table })
    }

    pub fn group(&self) -> &GalGroup {
        &self.group
    }

    pub fn value(&self, s: u64, t: u64) -> &CycloElem {
        &self.table[&(self.group.rep(s), self.group.rep(t))]
    }

    /// `s1(mu(s2,s3)) mu(s1,s2s3) = mu(s1s2,s3) mu(s1,s2)` on all triples.
    pub fn check(&self) -> Result<()> {
        let g = &self.group;
        for &a in g.elements() {
            for &b in g.elements() {
                let v = self
                    .table
                    .get(&(a, b))
                    .ok_or_else(|| Error::InvalidCocycle("2-cocycle table incomplete".into()))?;
                if v.is_zero() {
                    return Err(Error::InvalidCocycle("2-cocycle value is zero".into()));
                }
            }
        }
        for &a in g.elements() {
            for &b in g.elements() {
                for &c in g.elements() {
                    let lhs = &self.value(b, c).galois_unchecked(a) * self.value(a, g.mul(b, c));
                    let rhs = self.value(g.mul(a, b), c) * self.value(a, b);
                    if lhs != rhs {
                        return Err(Error::InvalidCocycle(format!(
                            "2-cocycle identity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// True if `mu` is the coboundary of `f`.
    pub fn is_coboundary_of(&self, f: &BTreeMap<u64, CycloElem>) -> bool {
        match TwoCocycle::coboundary(self.group.clone(), f) {
            Ok(c) => c.table == self.table,
            Err(_) => false,
        }
    }
}

/// Canonical `GL_2` lifts of a `PGL_2` cocycle (first nonzero entry 1, so the
/// identity lifts to `I`) and the resulting 2-cocycle.
pub fn lift_and_mu(zeta: &Cocycle) -> Result<(BTreeMap<u64, Matrix<CycloElem>>, TwoCocycle)> {
    let group = zeta.group().clone();
    let lift: BTreeMap<u64, Matrix<CycloElem>> = group
        .elements()
        .iter()
        .map(|&d| (d, zeta.value(d).to_matrix()))
        .collect();
    let mut table = BTreeMap::new();
    for &s in group.elements() {
        for &t in group.elements() {
            let st = group.mul(s, t);
            let prod = lift[&s]
                .mul(&galois_matrix(&lift[&t], s))
                .mul(&lift[&st].inverse()?);
            let c = prod.get(0, 0).clone();
            let scalar = prod.get(0, 1).is_zero() && prod.get(1, 0).is_zero() && *prod.get(1, 1) == c;
            if !scalar || c.is_zero() {
                return Err(Error::InvalidCocycle(format!(
                    "lift defect at ({s}, {t}) is not scalar"
                )));
            }
            table.insert((s, t), c);
        }
    }
    Ok((lift, TwoCocycle::new(group, table)?))
}

/// `prod_{g in G} g(a)` over the coset representatives.
pub fn group_norm(a: &CycloElem, group: &GalGroup) -> CycloElem {
    group
        .elements()
        .iter()
        .fold(CycloElem::one(a.field()), |acc, &d| &acc * &a.galois_unchecked(d))
}

/// An `n`-th root of `r` lying in `group`'s base field, if any.
fn root_in_base(r: &CycloElem, n: usize, group: &GalGroup) -> Result<Option<CycloElem>> {
    if n == 1 {
        return Ok(Some(r.clone()));
    }
    if let Some(q) = r.to_rational() {
        if let Some(c) = rational_root(&q, n as u32) {
            return Ok(Some(CycloElem::from_rational(r.field(), &c)));
        }
    }
    // the absolute norm of an n-th power is an n-th power
    if rational_root(&r.absolute_norm(), n as u32).is_none() {
        return Ok(None);
    }
    let field = r.field();
    let mut coeffs = vec![CycloElem::zero(field); n + 1];
    coeffs[0] = -r;
    coeffs[n] = CycloElem::one(field);
    let base = group.base_field();
    Ok(rational_roots(&Poly::new(field, coeffs))?
        .into_iter()
        .find(|c| base.contains(c)))
}

fn rational_root(q: &BigRational, n: u32) -> Option<BigRational> {
    if q.is_zero() {
        return Some(q.clone());
    }
    if q.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let sign = if q.is_negative() { -BigRational::one() } else { BigRational::one() };
    let num = exact_root(&q.numer().abs(), n)?;
    let den = exact_root(q.denom(), n)?;
    Some(sign * BigRational::new(num, den))
}

/// Candidate factors for the norm search, in a fixed order.
fn norm_candidates(field: &std::sync::Arc<CycloField>, top_basis: &[CycloElem], budget: usize) -> Vec<CycloElem> {
    let m = field.conductor() as i64;
    let one = CycloElem::one(field);
    let mut out = vec![one.clone()];
    let mut small: Vec<CycloElem> = Vec::new();
    for i in 1..m.max(2) {
        small.push(&one - &CycloElem::zeta_pow(field, i));
    }
    for i in 1..m.max(2) {
        small.push(CycloElem::zeta_pow(field, i));
    }
    for p in [2i64, 3, 5, 7] {
        small.push(CycloElem::from_int(field, p));
    }
    out.extend(small.iter().cloned());
    // low-height vectors in the top field
    let k = top_basis.len();
    'height: for h in 1..=2i64 {
        let width = (2 * h + 1) as usize;
        let total = width.checked_pow(k as u32).unwrap_or(usize::MAX);
        for idx in 0..total {
            if out.len() >= budget {
                break 'height;
            }
            let mut rest = idx;
            let mut acc = CycloElem::zero(field);
            let mut max = 0;
            for b in top_basis {
                let c = (rest % width) as i64 - h;
                rest /= width;
                max = max.max(c.abs());
                if c != 0 {
                    acc = &acc + &b.scale(&BigRational::from_integer(c.into()));
                }
            }
            if max == h && !acc.is_zero() {
                out.push(acc);
            }
        }
    }
    // pairwise products of the structured factors
    'pairs: for (i, a) in small.iter().enumerate() {
        for b in &small[i..] {
            if out.len() >= budget {
                break 'pairs;
            }
            out.push(a * b);
        }
    }
    out.truncate(budget.max(1));
    out
}

/// Search for `a'` in the top field with `N(a') = target`.
///
/// Each candidate `y` is first pushed into the top field by the norm over the
/// kernel; then `target / N(y)` is tested for being an `n`-th power `c^n` in
/// the base field, in which case `a' = c y` works. `None` means the budget was
/// exhausted, not that no solution exists.
pub fn solve_norm_equation(target: &CycloElem, group: &GalGroup, budget: usize) -> Result<Option<CycloElem>> {
    if target.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let field = target.field().clone();
    let n = group.order();
    let kernel: Vec<u64> = group.kernel().to_vec();
    let top = group.top_field();
    for y in norm_candidates(&field, top.basis(), budget) {
        let y = kernel
            .iter()
            .fold(CycloElem::one(&field), |acc, &k| &acc * &y.galois_unchecked(k));
        if y.is_zero() {
            continue;
        }
        let ny = group_norm(&y, group);
        let r = target.checked_div(&ny)?;
        if let Some(c) = root_in_base(&r, n, group)? {
            let a = &c * &y;
            if group_norm(&a, group) == *target {
                return Ok(Some(a));
            }
        }
    }
    Ok(None)
}

/// The target norm `(prod_j mu(s^j, s))^-1` for a cyclic group with generator `s`.
pub fn preu_target(mu: &TwoCocycle) -> Result<CycloElem> {
    let group = mu.group();
    let field = CycloField::get(group.conductor());
    let Some(&(s, n)) = group.generators().first() else {
        return Ok(CycloElem::one(&field));
    };
    let mut prod = CycloElem::one(&field);
    for j in 0..n {
        prod = &prod * mu.value(group.pow(s, j), s);
    }
    prod.inv()
}

/// The function `f` with `mu(s,t) = f(s) s(f(t)) f(st)^-1` on a cyclic group,
/// from an element `a'` of norm [`preu_target`].
pub fn preu_f(mu: &TwoCocycle, a: &CycloElem) -> Result<BTreeMap<u64, CycloElem>> {
    let group = mu.group();
    if !group.is_cyclic() {
        return Err(Error::NotCyclic);
    }
    let field = CycloField::get(group.conductor());
    let mut f = BTreeMap::new();
    let Some(&(s, n)) = group.generators().first() else {
        f.insert(1, CycloElem::one(&field));
        return Ok(f);
    };
    if group_norm(a, group) != preu_target(mu)? {
        return Err(Error::NormMismatch);
    }
    let mut partial = CycloElem::one(&field);
    for i in 1..=n {
        let prev = group.pow(s, i - 1);
        let step = mu.value(prev, s) * &a.galois_unchecked(prev);
        partial = partial.checked_div(&step)?;
        let si = group.pow(s, i);
        f.insert(si, mu.value(si, group.pow(s, n)) * &partial);
    }
    if !mu.is_coboundary_of(&f) {
        return Err(Error::InvariantViolation("trivializing function fails verification".into()));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::group::galois_group;
    use crate::cyclotomic::SubfieldSpec;
    use crate::ratfunc::Mobius;

    #[test]
    fn norm_equation_examples() {
        let k5 = CycloField::get(5);
        let g = galois_group(5, &SubfieldSpec::rationals(5)).unwrap();
        let one = CycloElem::one(&k5);
        assert_eq!(solve_norm_equation(&one, &g, 100).unwrap(), Some(one.clone()));
        let five = CycloElem::from_int(&k5, 5);
        let a = solve_norm_equation(&five, &g, 100).unwrap().unwrap();
        assert_eq!(group_norm(&a, &g), five);
        assert_eq!(group_norm(&(&one - &CycloElem::zeta(&k5)), &g), five);
        let sixteen = CycloElem::from_int(&k5, 16);
        let a = solve_norm_equation(&sixteen, &g, 100).unwrap().unwrap();
        assert_eq!(group_norm(&a, &g), sixteen);
    }

    #[test]
    fn trivial_lift_gives_trivial_mu() {
        let g = galois_group(9, &SubfieldSpec::rationals(9)).unwrap();
        let zeta = Cocycle::trivial(g.clone());
        let (lift, mu) = lift_and_mu(&zeta).unwrap();
        assert!(lift.values().all(|m| *m == Matrix::identity(2, &CycloElem::one(&CycloField::get(9)))));
        for &s in g.elements() {
            for &t in g.elements() {
                assert!(mu.value(s, t).is_one());
            }
        }
        let f = preu_f(&mu, &CycloElem::one(&CycloField::get(9))).unwrap();
        assert!(f.values().all(CycloElem::is_one));
    }

    #[test]
    fn coboundary_cocycle_is_split() {
        let k5 = CycloField::get(5);
        let g = galois_group(5, &SubfieldSpec::rationals(5)).unwrap();
        let z = CycloElem::zeta(&k5);
        let a0 = Mobius::new(z.clone(), CycloElem::from_int(&k5, 2), CycloElem::one(&k5), z.pow(2)).unwrap();
        let zeta = Cocycle::coboundary(g.clone(), &a0);
        zeta.check().unwrap();
        let (_, mu) = lift_and_mu(&zeta).unwrap();
        for &t in g.elements() {
            assert!(mu.value(1, t).is_one());
            assert!(mu.value(t, 1).is_one());
        }
        let target = preu_target(&mu).unwrap();
        let a = solve_norm_equation(&target, &g, 400).unwrap().expect("split class has a norm solution");
        let f = preu_f(&mu, &a).unwrap();
        assert!(mu.is_coboundary_of(&f));
        // the last factor in the formula lands on the identity
        assert!(f[&1].is_one());
        let bad = &a * &CycloElem::from_int(&k5, 2);
        assert_eq!(preu_f(&mu, &bad), Err(Error::NormMismatch));
    }
}
