use std::collections::BTreeMap;

use super::group::GalGroup;
use crate::cyclotomic::{CycloElem, CycloField};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Entrywise `sigma_d`.
pub fn galois_matrix(m: &Matrix<CycloElem>, d: u64) -> Matrix<CycloElem> {
    m.map(|x| x.galois_unchecked(d))
}

/// A cocycle `G -> GL_n(L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixCocycle {
    group: GalGroup,
    values: BTreeMap<u64, Matrix<CycloElem>>,
}

impl MatrixCocycle {
    pub fn new(group: GalGroup, values: BTreeMap<u64, Matrix<CycloElem>>) -> Result<Self> {
        let c = MatrixCocycle { group, values };
        c.check()?;
        Ok(c)
    }

    /// The coboundary `sigma -> A^-1 sigma(A)`.
    pub fn coboundary(group: GalGroup, a: &Matrix<CycloElem>) -> Result<Self> {
        let inv = a.inverse()?;
        let values = group
            .elements()
            .iter()
            .map(|&d| (d, inv.mul(&galois_matrix(a, d))))
            .collect();
        Ok(MatrixCocycle { group, values })
    }

    pub fn group(&self) -> &GalGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.values[&1].rows()
    }

    pub fn value(&self, d: u64) -> &Matrix<CycloElem> {
        &self.values[&self.group.rep(d)]
    }

    pub fn check(&self) -> Result<()> {
        let g = &self.group;
        if !g.elements().iter().all(|d| self.values.contains_key(d)) {
            return Err(Error::InvalidCocycle("matrix table does not cover the group".into()));
        }
        for &s in g.elements() {
            for &t in g.elements() {
                let lhs = self.value(g.mul(s, t));
                let rhs = self.value(s).mul(&galois_matrix(self.value(t), s));
                if *lhs != rhs {
                    return Err(Error::InvalidCocycle(format!(
                        "matrix cocycle law fails at ({s}, {t})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// True if `psi(sigma) = A^-1 sigma(A)` for every `sigma`.
    pub fn is_split_by(&self, a: &Matrix<CycloElem>) -> bool {
        let Ok(inv) = a.inverse() else {
            return false;
        };
        self.group
            .elements()
            .iter()
            .all(|&d| inv.mul(&galois_matrix(a, d)) == *self.value(d))
    }
}

/// A matrix `A` over the top field with `psi(sigma) = A^-1 sigma(A)`.
///
/// Vectors `beta e_i` are pushed through `v -> sum_g psi(g) g(v)`, which lands
/// in the subspace fixed by the twisted action, until `n` independent images
/// are found; they are the columns of `A^-1`.
pub fn hilbert90(psi: &MatrixCocycle) -> Result<Matrix<CycloElem>> {
    let group = psi.group();
    let n = psi.dim();
    let field = CycloField::get(group.conductor());
    let zero = CycloElem::zero(&field);
    let basis = group.top_field().basis().to_vec();
    let mut columns: Vec<Vec<CycloElem>> = Vec::with_capacity(n);
    'sweep: for beta in &basis {
        for i in 0..n {
            let mut avg = vec![zero.clone(); n];
            for &g in group.elements() {
                let b = beta.galois_unchecked(g);
                // psi(g) g(beta e_i) is the i-th column of psi(g) scaled by g(beta)
                for (r, slot) in avg.iter_mut().enumerate() {
                    *slot = &*slot + &(psi.value(g).get(r, i) * &b);
                }
            }
            if avg.iter().all(CycloElem::is_zero) {
                continue;
            }
            let mut trial = columns.clone();
            trial.push(avg);
            let m = Matrix::from_fn(n, trial.len(), |r, c| trial[c][r].clone());
            if m.rank() == trial.len() {
                columns = trial;
                if columns.len() == n {
                    break 'sweep;
                }
            }
        }
    }
    if columns.len() < n {
        return Err(Error::ProjectionRankDeficient);
    }
    let b = Matrix::from_fn(n, n, |r, c| columns[c][r].clone());
    let a = b.inverse()?;
    if !psi.is_split_by(&a) {
        return Err(Error::InvariantViolation("Hilbert 90 matrix fails verification".into()));
    }
    Ok(a)
}
