use std::collections::{BTreeSet, HashMap};

use crate::arith::{self, gcd};
use crate::cyclotomic::{normalize_unit, SubfieldSpec};
use crate::error::{Error, Result};

/// `Gal(L/K)` for `K ⊆ L ⊆ K_M`, as units mod `M`.
///
/// `fixing` is the subgroup of `(Z/M)^x` fixing `K`; `kernel ⊆ fixing` is
/// the subgroup fixing `L`. Elements are the minimal representatives of
/// the cosets `fixing / kernel`. With a trivial kernel this is simply
/// `Gal(K_M/K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GalGroup {
    conductor: u64,
    fixing: Vec<u64>,
    kernel: Vec<u64>,
    elements: Vec<u64>,
    generators: Vec<(u64, u64)>,
    forms: HashMap<u64, Vec<u64>>,
}

impl GalGroup {
    /// Build from explicit subgroups of `(Z/M)^x`; `kernel` must lie in `fixing`.
    pub fn new(conductor: u64, fixing: &[u64], kernel: &[u64]) -> Result<Self> {
        let fixing = arith_closure(fixing, conductor);
        let kernel = arith_closure(kernel, conductor);
        if !kernel.iter().all(|k| fixing.contains(k)) {
            return Err(Error::InvariantViolation(
                "kernel is not contained in the group".into(),
            ));
        }
        let mut g = GalGroup {
            conductor,
            fixing: fixing.clone(),
            kernel,
            elements: Vec::new(),
            generators: Vec::new(),
            forms: HashMap::new(),
        };
        let reps: BTreeSet<u64> = fixing.iter().map(|&d| g.rep(d)).collect();
        g.elements = reps.into_iter().collect();
        g.generators = g.independent_generators();
        g.forms = g.normal_forms();
        Ok(g)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Units fixing the base field.
    pub fn fixing(&self) -> &[u64] {
        &self.fixing
    }

    /// Units fixing the top field.
    pub fn kernel(&self) -> &[u64] {
        &self.kernel
    }

    /// Coset representatives, ascending (the identity `1` first).
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Independent generators with their orders.
    pub fn generators(&self) -> &[(u64, u64)] {
        &self.generators
    }

    pub fn is_cyclic(&self) -> bool {
        self.generators.len() <= 1
    }

    /// Exponents of `d` over [`Self::generators`].
    pub fn normal_form(&self, d: u64) -> Option<&Vec<u64>> {
        self.forms.get(&self.rep(d))
    }

    /// The base field `K`.
    pub fn base_field(&self) -> SubfieldSpec {
        SubfieldSpec::new(self.conductor, &self.fixing).expect("units")
    }

    /// The top field `L`.
    pub fn top_field(&self) -> SubfieldSpec {
        SubfieldSpec::new(self.conductor, &self.kernel).expect("units")
    }

    /// Minimal representative of the coset `d * kernel`.
    pub fn rep(&self, d: u64) -> u64 {
        let d = normalize_unit(d, self.conductor);
        self.kernel
            .iter()
            .map(|&k| normalize_unit(d * k, self.conductor))
            .min()
            .unwrap_or(d)
    }

    pub fn contains(&self, d: u64) -> bool {
        self.fixing.contains(&normalize_unit(d, self.conductor))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.rep(normalize_unit(a, self.conductor) * normalize_unit(b, self.conductor))
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    pub fn inverse(&self, a: u64) -> u64 {
        let a = self.rep(a);
        *self
            .elements
            .iter()
            .find(|&&b| self.mul(a, b) == 1)
            .expect("finite group element has an inverse")
    }

    pub fn element_order(&self, a: u64) -> u64 {
        let mut x = self.rep(a);
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    fn span(&self, gens: &[u64]) -> BTreeSet<u64> {
        let mut set = BTreeSet::from([1u64]);
        let mut frontier = vec![1u64];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    fn independent_generators(&self) -> Vec<(u64, u64)> {
        let mut by_order: Vec<(u64, u64)> = self
            .elements
            .iter()
            .map(|&e| (self.element_order(e), e))
            .filter(|&(o, _)| o > 1)
            .collect();
        by_order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut chosen: Vec<(u64, u64)> = Vec::new();
        let mut span = BTreeSet::from([1u64]);
        for &(order, e) in &by_order {
            if span.len() == self.elements.len() {
                break;
            }
            let cyc = self.span(&[e]);
            if cyc.iter().all(|x| *x == 1 || !span.contains(x)) {
                chosen.push((e, order));
                let gens: Vec<u64> = chosen.iter().map(|c| c.0).collect();
                span = self.span(&gens);
            }
        }
        assert_eq!(span.len(), self.elements.len(), "greedy decomposition failed");
        chosen
    }

    fn normal_forms(&self) -> HashMap<u64, Vec<u64>> {
        let k = self.generators.len();
        let mut out = HashMap::from([(1u64, vec![0u64; k])]);
        let mut frontier = vec![(1u64, vec![0u64; k])];
        while let Some((x, exps)) = frontier.pop() {
            for (j, &(g, order)) in self.generators.iter().enumerate() {
                if exps[j] + 1 >= order {
                    continue;
                }
                let y = self.mul(x, g);
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

    /// The same base field with `L` cut down to the fixed field of `kernel`.
    pub fn with_kernel(&self, kernel: &[u64]) -> Result<GalGroup> {
        let mut k = self.kernel.clone();
        k.extend_from_slice(kernel);
        GalGroup::new(self.conductor, &self.fixing, &k)
    }

    /// `Gal(L / L^H)` for a subgroup `H` given by generators.
    pub fn subgroup(&self, gens: &[u64]) -> Result<GalGroup> {
        let mut f = self.kernel.clone();
        f.extend_from_slice(gens);
        GalGroup::new(self.conductor, &f, &self.kernel)
    }

    /// The cyclic subgroups `H` with `G / H` cyclic, smallest generator first.
    pub fn cyclic_steps(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for &e in &self.elements {
            if e == 1 {
                continue;
            }
            let h: Vec<u64> = self.span(&[e]).into_iter().collect();
            if !seen.insert(h.clone()) {
                continue;
            }
            let quotient = self.with_kernel(&h).expect("subgroup");
            if quotient.is_cyclic() {
                out.push(e);
            }
        }
        out
    }
}

fn arith_closure(gens: &[u64], n: u64) -> Vec<u64> {
    crate::cyclotomic::closure(gens, n)
}

/// `Gal(K_M / K)`: the units mod `M` fixing `K` pointwise.
pub fn galois_group(m: u64, k: &SubfieldSpec) -> Result<GalGroup> {
    let n = k.conductor();
    if !k.contained_in_cyclotomic(m) {
        return Err(Error::NotASubfield { sub: n, ambient: m });
    }
    let big = arith::lcm(n, m);
    let fixing: Vec<u64> = arith::units(m)
        .into_iter()
        .filter(|&d| {
            // any lift of d to (Z/lcm)^x restricts to the same automorphism of K
            let lift = (0..big / m.max(1))
                .map(|j| d + j * m)
                .find(|&x| gcd(x, big) == 1)
                .expect("units lift along reduction");
            k.subgroup().contains(&normalize_unit(lift, n))
        })
        .collect();
    GalGroup::new(m, &fixing, &[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_over_k5() {
        let g = galois_group(5, &SubfieldSpec::rationals(5)).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.generators(), &[(2, 4)]);
        let real = SubfieldSpec::new(5, &[4]).unwrap();
        let g = galois_group(5, &real).unwrap();
        assert_eq!(g.elements(), &[1, 4]);
        let g = galois_group(9, &SubfieldSpec::whole(9)).unwrap();
        assert_eq!(g.order(), 1);
        assert!(galois_group(5, &SubfieldSpec::whole(9)).is_err());
    }

    #[test]
    fn lifted_base_field() {
        // Q(i) inside K_16
        let qi = SubfieldSpec::whole(4);
        let g = galois_group(16, &qi).unwrap();
        assert_eq!(g.elements(), &[1, 5, 9, 13]);
        assert!(g.is_cyclic());
        let qsqrt2 = SubfieldSpec::new(8, &[7]).unwrap();
        let g = galois_group(16, &qsqrt2).unwrap();
        assert_eq!(g.elements(), &[1, 7, 9, 15]);
        assert!(!g.is_cyclic());
        let q = g.with_kernel(&[7]).unwrap();
        assert_eq!(q.order(), 2);
        assert!(g.cyclic_steps().len() == 3);
        let order: usize = g.generators().iter().map(|&(_, o)| o as usize).product();
        assert_eq!(order, g.order());
    }
}
