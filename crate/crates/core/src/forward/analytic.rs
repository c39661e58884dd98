use std::f64::consts::PI;

use super::{FptSet, GptSet, Material, Provenance};
use crate::conformal::{faber_matrix, grunsky_tables, scaling_matrices, ConformalMap, GrunskyTables};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::C64;

/// Extra orders carried by the finite-section inverse before truncation.
pub const ANALYTIC_BUFFER: usize = 10;

fn check_order(ord: usize, mat: &Material) -> Result<()> {
    if ord < 1 {
        return Err(Error::InvalidInput("GPT order must be at least 1".into()));
    }
    if mat.lambda().abs() < 0.5 {
        return Err(Error::InvalidInput(format!("|lambda| < 1/2: {}", mat.lambda())));
    }
    Ok(())
}

/// `(4λ²I − B)⁻¹` scaled by `1 − 4λ²`; exactly zero at `λ = ±1/2`.
fn resolvent_term(b: &CMatrix, lambda: f64) -> Result<CMatrix> {
    let four_l2 = 4.0 * lambda * lambda;
    let n = b.nrows();
    if four_l2 == 1.0 {
        return Ok(CMatrix::zeros(n, n));
    }
    let a = linalg::identity(n) * C64::new(four_l2, 0.0) - b;
    let inv = linalg::inverse(&a, "4 lambda^2 I - conj(G) G (is ||G|| >= 1?)")?;
    Ok(inv * C64::new(1.0 - four_l2, 0.0))
}

/// GPTs from the conformal map with the default working-order buffer.
pub fn gpt_analytic(map: &ConformalMap, mat: &Material, ord: usize) -> Result<GptSet> {
    gpt_analytic_with_buffer(map, mat, ord, ANALYTIC_BUFFER)
}

/// `N⁽¹⁾ = 4π P⁻¹ D G X D P⁻ᵀ`, `N⁽²⁾ = 8πλ P̄⁻¹ D X D P⁻ᵀ` with `D = γᴺN^{1/2}` and
/// `X = I + (1 − 4λ²)(4λ²I − ḠG)⁻¹`, formed at order `ord + buffer` and truncated.
pub fn gpt_analytic_with_buffer(
    map: &ConformalMap,
    mat: &Material,
    ord: usize,
    buffer: usize,
) -> Result<GptSet> {
    check_order(ord, mat)?;
    let m = ord + buffer;
    let lambda = mat.lambda();
    let tables = grunsky_tables(map, m)?;
    let s = scaling_matrices(map.gamma(), m)?;
    let g = tables.g();
    let x = linalg::identity(m) + resolvent_term(&(g.map(|z| z.conj()) * g), lambda)?;
    let d = s.gamma_n() * s.n_half();
    let p_inv = linalg::lower_triangular_inverse(&faber_matrix(map, m)?.matrix())?;
    let p_inv_t = p_inv.transpose();
    let dxd = &d * &x * &d;
    let n1 = &p_inv * &d * g * &x * &d * &p_inv_t * C64::new(4.0 * PI, 0.0);
    let n2 = p_inv.map(|z| z.conj()) * dxd * &p_inv_t * C64::new(8.0 * PI * lambda, 0.0);
    GptSet::new(linalg::leading(&n1, ord), linalg::leading(&n2, ord), Provenance::Analytic)
}

/// FPTs entrywise from the Grunsky coefficients:
///
/// `F⁽¹⁾_mn = 4πn c_mn + 4πn(1 − 4λ²)[C Y⁻¹]_mn`,
/// `F⁽²⁾_mn = 8πnλγ^{2m}(δ_mn + (1 − 4λ²)[Y⁻¹]_mn)`,
/// with `Y = 4λ²I − γ^{−2N} C̄ γ^{−2N} C` at the order of `tables`.
pub fn fpt_analytic(tables: &GrunskyTables, mat: &Material, ord: usize) -> Result<FptSet> {
    check_order(ord, mat)?;
    let m = tables.order();
    if ord > m {
        return Err(Error::InvalidInput(format!(
            "FPT order {ord} exceeds the Grunsky table order {m}"
        )));
    }
    let lambda = mat.lambda();
    let gamma = tables.gamma();
    let c = tables.c();
    let s = scaling_matrices(gamma, m)?;
    let b = s.gamma_neg_2n() * c.map(|z| z.conj()) * s.gamma_neg_2n() * c;
    let r = resolvent_term(&b, lambda)?;
    let cr = c * &r;
    let f1 = CMatrix::from_fn(ord, ord, |i, j| {
        let n = (j + 1) as f64;
        (c[(i, j)] + cr[(i, j)]) * (4.0 * PI * n)
    });
    let f2 = CMatrix::from_fn(ord, ord, |i, j| {
        let n = (j + 1) as f64;
        let delta = if i == j { 1.0 } else { 0.0 };
        (r[(i, j)] + delta) * (8.0 * PI * n * lambda * gamma.powi(2 * (i as i32 + 1)))
    });
    FptSet::new(f1, f2)
}
