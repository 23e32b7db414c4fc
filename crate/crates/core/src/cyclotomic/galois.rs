use std::collections::{BTreeSet, HashMap};

use super::elem::CycloElem;
use crate::arith;
use crate::error::{Error, Result};

/// Canonical residue of a unit label modulo `n`; conductors 1 and 2 have the
/// trivial group labelled by `1`.
pub fn normalize_unit(d: u64, n: u64) -> u64 {
    if n <= 2 {
        1
    } else {
        d % n
    }
}

/// The automorphism `sigma_d: zeta_N -> zeta_N^d` of `K_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaloisAut {
    d: u64,
    modulus: u64,
}

impl GaloisAut {
    pub fn new(d: u64, modulus: u64) -> Result<Self> {
        let r = normalize_unit(d, modulus);
        if modulus > 2 && arith::gcd(r, modulus) != 1 {
            return Err(Error::NotAUnit { d, modulus });
        }
        Ok(GaloisAut { d: r, modulus })
    }

    pub fn label(&self) -> u64 {
        self.d
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn compose(&self, other: &GaloisAut) -> GaloisAut {
        assert_eq!(self.modulus, other.modulus);
        GaloisAut {
            d: normalize_unit(self.d * other.d, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn apply(&self, a: &CycloElem) -> Result<CycloElem> {
        if a.conductor() != self.modulus {
            return Err(Error::FieldMismatch {
                left: self.modulus,
                right: a.conductor(),
            });
        }
        Ok(a.galois_unchecked(self.d))
    }
}

/// Apply `sigma_d` to `a`; errors if `d` is not a unit.
pub fn apply_aut(sigma: &GaloisAut, a: &CycloElem) -> Result<CycloElem> {
    sigma.apply(a)
}

/// The subgroup of `(Z/n)^x` generated by `gens`, ascending.
pub fn closure(gens: &[u64], n: u64) -> Vec<u64> {
    let mut set = BTreeSet::new();
    set.insert(1u64);
    let mut frontier = vec![1u64];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = normalize_unit(x * normalize_unit(g, n), n);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

fn element_order(a: u64, n: u64) -> u64 {
    if n <= 2 {
        1
    } else {
        arith::multiplicative_order(a, n).expect("unit")
    }
}

/// Independent generators of a finite subgroup of `(Z/n)^x` with their
/// orders: the group is the internal direct product of the cyclic groups
/// they generate. Greedy by maximal order, ties broken by smallest label.
pub fn independent_generators(elements: &[u64], n: u64) -> Vec<(u64, u64)> {
    let total = elements.len() as u64;
    let mut by_order: Vec<(u64, u64)> = elements
        .iter()
        .map(|&e| (element_order(e, n), e))
        .filter(|&(o, _)| o > 1)
        .collect();
    by_order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut chosen: Vec<(u64, u64)> = Vec::new();
    let mut span: Vec<u64> = vec![1];
    for &(order, e) in &by_order {
        if span.len() as u64 == total {
            break;
        }
        let cyc = closure(&[e], n);
        let meets_trivially = cyc.iter().all(|x| *x == 1 || !span.contains(x));
        if meets_trivially {
            chosen.push((e, order));
            let gens: Vec<u64> = chosen.iter().map(|c| c.0).collect();
            span = closure(&gens, n);
        }
    }
    assert_eq!(
        span.len() as u64,
        total,
        "greedy decomposition failed for a subgroup of (Z/{n})^x"
    );
    chosen
}

/// Independent generators of `(Z/N)^x` with orders multiplying to `phi(N)`.
///
/// Odd prime powers get the smallest primitive root; `2^m` with `m >= 3` gets
/// `(-1, 2)` and `(5, 2^{m-2})`; other conductors use the greedy
/// decomposition.
pub fn unit_group_structure(n: u64) -> Vec<(u64, u64)> {
    if n <= 2 {
        return Vec::new();
    }
    let phi = arith::euler_phi(n);
    let fac = arith::factorize(n);
    if fac.len() == 1 {
        let (p, m) = fac[0];
        if p == 2 {
            return match m {
                2 => vec![(3, 2)],
                _ => vec![(n - 1, 2), (5, 1 << (m - 2))],
            };
        }
        let g = (2..n)
            .find(|&g| arith::multiplicative_order(g, n) == Some(phi))
            .expect("odd prime powers have primitive roots");
        return vec![(g, phi)];
    }
    independent_generators(&arith::units(n), n)
}

/// Every subgroup of `(Z/N)^x`, each as its ascending element list, sorted by
/// size then lexicographically.
pub fn all_subgroups(n: u64) -> Vec<Vec<u64>> {
    let units = arith::units(n);
    let mut found: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut frontier = vec![vec![1u64]];
    found.insert(vec![1]);
    while let Some(h) = frontier.pop() {
        for &u in &units {
            if h.contains(&u) {
                continue;
            }
            let mut gens = h.clone();
            gens.push(u);
            let bigger = closure(&gens, n);
            if found.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let mut out: Vec<Vec<u64>> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// Express every element of a group in terms of independent generators:
/// `element -> exponent vector`.
pub fn normal_forms(gens: &[(u64, u64)], n: u64) -> HashMap<u64, Vec<u64>> {
    let mut out = HashMap::new();
    out.insert(1u64, vec![0; gens.len()]);
    let mut frontier = vec![(1u64, vec![0u64; gens.len()])];
    while let Some((x, exps)) = frontier.pop() {
        for (j, &(g, order)) in gens.iter().enumerate() {
            if exps[j] + 1 >= order {
                continue;
            }
            let y = normalize_unit(x * g, n);
            if let std::collections::hash_map::Entry::Vacant(slot) = out.entry(y) {
                let mut e = exps.clone();
                e[j] += 1;
                slot.insert(e.clone());
                frontier.push((y, e));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(a: u64, n: u64) -> u64 {
        let mut x = a % n;
        let mut k = 1;
        while x != 1 {
            x = x * a % n;
            k += 1;
        }
        k
    }

    #[test]
    fn structure_examples() {
        assert_eq!(unit_group_structure(9), vec![(2, 6)]);
        assert_eq!(unit_group_structure(8), vec![(7, 2), (5, 2)]);
        assert_eq!(unit_group_structure(5), vec![(2, 4)]);
        assert_eq!(brute_order(2, 9), 6);
        assert_eq!(brute_order(5, 8), 2);
    }

    #[test]
    fn structure_orders_multiply_to_phi() {
        for n in 3..=64u64 {
            let s = unit_group_structure(n);
            let prod: u64 = s.iter().map(|g| g.1).product();
            assert_eq!(prod, arith::euler_phi(n), "n = {n}");
            for &(g, o) in &s {
                assert_eq!(brute_order(g, n), o);
            }
            let gens: Vec<u64> = s.iter().map(|g| g.0).collect();
            assert_eq!(closure(&gens, n), arith::units(n));
        }
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(all_subgroups(9).len(), 4);
        assert_eq!(all_subgroups(8).len(), 5);
        assert_eq!(all_subgroups(3).len(), 2);
        // cyclic groups have one subgroup per divisor of the order
        for n in [5u64, 7, 25, 27, 49, 11, 13] {
            assert_eq!(
                all_subgroups(n).len() as u64,
                arith::num_divisors(arith::euler_phi(n)),
                "n = {n}"
            );
        }
    }

    #[test]
    fn normal_forms_cover_group() {
        let gens = unit_group_structure(16);
        let nf = normal_forms(&gens, 16);
        assert_eq!(nf.len(), 8);
    }
}
