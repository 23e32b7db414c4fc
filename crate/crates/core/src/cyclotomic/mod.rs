//! Cyclotomic fields `K_N = Q(zeta_N)`, their Galois groups `(Z/N)^x`, and
//! the lattice of fixed subfields.

mod elem;
mod field;
mod galois;
mod subfield;

pub use elem::{elem_arith, parse_rational, parse_rational_json, ArithOp, CycloElem};
pub use field::{cyclotomic_polynomial, CycloField};
pub use galois::{
    all_subgroups, apply_aut, closure, independent_generators, normal_forms, normalize_unit,
    unit_group_structure, GaloisAut,
};
pub use subfield::{
    enumerate_subgroups, fixed_field_basis, is_in_subfield, SubfieldJson, SubfieldSpec,
};

use crate::error::Result;

/// `prod_{sigma in G} sigma(a)`.
pub fn relative_norm(a: &CycloElem, group: &[GaloisAut]) -> Result<CycloElem> {
    let mut acc = CycloElem::one(a.field());
    for sigma in group {
        acc = &acc * &sigma.apply(a)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_norm_examples() {
        let k5 = CycloField::get(5);
        let g: Vec<GaloisAut> = [1u64, 2, 3, 4]
            .iter()
            .map(|&d| GaloisAut::new(d, 5).unwrap())
            .collect();
        let one = CycloElem::one(&k5);
        assert_eq!(relative_norm(&one, &g).unwrap(), one);
        let a = &one - &CycloElem::zeta(&k5);
        assert_eq!(relative_norm(&a, &g).unwrap(), CycloElem::from_int(&k5, 5));
        assert_eq!(relative_norm(&CycloElem::zeta(&k5), &g).unwrap(), one);
    }

    use proptest::prelude::*;

    const CONDUCTORS: [u64; 9] = [3, 4, 5, 7, 8, 9, 16, 25, 27];

    fn elem(field: &std::sync::Arc<CycloField>, coeffs: &[i64]) -> CycloElem {
        CycloElem::from_int_coeffs(field, &coeffs[..field.degree()])
    }

    fn unit(field: &CycloField, pick: usize) -> u64 {
        field.units()[pick % field.units().len()]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn galois_action_is_a_ring_homomorphism(
            which in 0..CONDUCTORS.len(),
            a in prop::collection::vec(-9i64..=9, 20),
            b in prop::collection::vec(-9i64..=9, 20),
            pick in 0usize..64,
        ) {
            let field = CycloField::get(CONDUCTORS[which]);
            let (a, b) = (elem(&field, &a), elem(&field, &b));
            let s = GaloisAut::new(unit(&field, pick), field.conductor()).unwrap();
            prop_assert_eq!(s.apply(&(&a + &b)).unwrap(), &s.apply(&a).unwrap() + &s.apply(&b).unwrap());
            prop_assert_eq!(s.apply(&(&a * &b)).unwrap(), &s.apply(&a).unwrap() * &s.apply(&b).unwrap());
        }

        #[test]
        fn galois_composition_law(
            which in 0..CONDUCTORS.len(),
            a in prop::collection::vec(-9i64..=9, 20),
            p1 in 0usize..64,
            p2 in 0usize..64,
        ) {
            let field = CycloField::get(CONDUCTORS[which]);
            let n = field.conductor();
            let a = elem(&field, &a);
            let (d, e) = (unit(&field, p1), unit(&field, p2));
            let sd = GaloisAut::new(d, n).unwrap();
            let se = GaloisAut::new(e, n).unwrap();
            let composed = GaloisAut::new(d * e % n, n).unwrap();
            prop_assert_eq!(sd.apply(&se.apply(&a).unwrap()).unwrap(), composed.apply(&a).unwrap());
            // d and d + N name the same automorphism
            prop_assert_eq!(GaloisAut::new(d + n, n).unwrap().apply(&a).unwrap(), sd.apply(&a).unwrap());
        }

        #[test]
        fn relative_norm_is_fixed(
            which in 0..CONDUCTORS.len(),
            a in prop::collection::vec(-5i64..=5, 20),
            pick in 0usize..64,
        ) {
            let field = CycloField::get(CONDUCTORS[which]);
            let n = field.conductor();
            let subgroups = enumerate_subgroups(n);
            let h = &subgroups[pick % subgroups.len()];
            let group: Vec<GaloisAut> = h.subgroup().iter().map(|&d| GaloisAut::new(d, n).unwrap()).collect();
            let norm = relative_norm(&elem(&field, &a), &group).unwrap();
            prop_assert!(is_in_subfield(&norm, h));
        }

        #[test]
        fn fixed_basis_is_fixed_and_spans_periods(which in 0..CONDUCTORS.len(), pick in 0usize..64) {
            let n = CONDUCTORS[which];
            let field = CycloField::get(n);
            let subgroups = enumerate_subgroups(n);
            let h = &subgroups[pick % subgroups.len()];
            let basis = fixed_field_basis(h);
            prop_assert_eq!(basis.len() * h.subgroup().len(), field.degree());
            for b in &basis {
                for &g in h.generators() {
                    prop_assert_eq!(&b.apply_aut(g).unwrap(), b);
                }
            }
            // every Gauss period sum_{g in H} zeta^{kg} lies in the span
            for k in 0..n {
                let period = h.subgroup().iter().fold(CycloElem::zero(&field), |acc, &g| {
                    &acc + &CycloElem::zeta_pow(&field, (k * g % n) as i64)
                });
                let coords = h.coordinates(&period);
                prop_assert!(coords.is_some());
                prop_assert_eq!(h.from_coordinates(&coords.unwrap()), period);
            }
        }

        #[test]
        fn embedding_is_injective_and_multiplicative(
            which in 0..CONDUCTORS.len(),
            a in prop::collection::vec(-9i64..=9, 20),
            b in prop::collection::vec(-9i64..=9, 20),
            factor in 2u64..4,
        ) {
            let field = CycloField::get(CONDUCTORS[which]);
            let m = field.conductor() * factor;
            let (a, b) = (elem(&field, &a), elem(&field, &b));
            let (ea, eb) = (a.embed(m).unwrap(), b.embed(m).unwrap());
            prop_assert_eq!((&a * &b).embed(m).unwrap(), &ea * &eb);
            prop_assert_eq!(a == b, ea == eb);
        }
    }
}
