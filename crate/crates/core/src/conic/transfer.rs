use crate::cyclotomic::CycloElem;
use crate::error::Result;
use crate::linalg::Matrix;
use crate::ratfunc::Mobius;

/// The symmetric-square representation `PGL_2 -> SL_3`, normalized by the
/// determinant so it does not depend on the representative.
///
/// It satisfies `phi(g) ver(u, v) = ver(g(u, v)) / det(g)` for the Veronese
/// embedding `ver(u, v) = (u^2, uv, v^2)`.
pub fn phi(g: &Mobius) -> Result<Matrix<CycloElem>> {
    let [a, b, c, d] = g.entries();
    let field = a.field();
    let two = CycloElem::from_int(field, 2);
    let inv = g.det().inv()?;
    let rows = vec![
        vec![a * a, &two * &(a * b), b * b],
        vec![a * c, &(a * d) + &(b * c), b * d],
        vec![c * c, &two * &(c * d), d * d],
    ];
    Ok(Matrix::from_rows(rows).scale(&inv))
}

/// `(u^2, uv, v^2)`.
pub fn veronese(u: &CycloElem, v: &CycloElem) -> Vec<CycloElem> {
    vec![u * u, u * v, v * v]
}

/// Gram matrix of `Q_0 = y^2 - xz`.
pub fn standard_gram(template: &CycloElem) -> Matrix<CycloElem> {
    let f = template.field();
    let z = CycloElem::zero(f);
    let h = CycloElem::from_ratio(f, -1, 2);
    Matrix::from_rows(vec![
        vec![z.clone(), z.clone(), h.clone()],
        vec![z.clone(), CycloElem::one(f), z.clone()],
        vec![h, z.clone(), z],
    ])
}
