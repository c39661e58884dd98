//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

pub type CMatrix = DMatrix<C64>;

/// Systems whose 2-norm condition number exceeds this are reported as singular.
pub const SINGULAR_COND: f64 = 1e15;

pub fn diag(values: impl IntoIterator<Item = f64>) -> CMatrix {
    let v: Vec<C64> = values.into_iter().map(|x| C64::new(x, 0.0)).collect();
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(v))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn condition_number(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Inverse through LU with partial pivoting; fails on exact or numerical singularity.
pub fn inverse(m: &CMatrix, what: &str) -> Result<CMatrix> {
    let cond = condition_number(m);
    if !cond.is_finite() || cond > SINGULAR_COND {
        return Err(Error::Singular(format!("{what} (condition number {cond:.3e})")));
    }
    m.clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Singular(what.to_string()))
}

/// Inverse of an invertible lower-triangular matrix.
pub fn lower_triangular_inverse(l: &CMatrix) -> Result<CMatrix> {
    let n = l.nrows();
    l.solve_lower_triangular(&identity(n))
        .ok_or_else(|| Error::Singular("lower-triangular matrix has a zero diagonal".into()))
}

/// max |A - Aᵀ| relative to max |A|.
pub fn symmetry_residual(a: &CMatrix) -> f64 {
    relative_residual(a, &a.transpose())
}

/// max |A - Aᴴ| relative to max |A|.
pub fn hermitian_residual(a: &CMatrix) -> f64 {
    relative_residual(a, &a.adjoint())
}

fn relative_residual(a: &CMatrix, b: &CMatrix) -> f64 {
    let scale = max_abs(a);
    if scale == 0.0 {
        return 0.0;
    }
    max_abs(&(a - b)) / scale
}

/// Leading `k x k` block.
pub fn leading(m: &CMatrix, k: usize) -> CMatrix {
    m.view((0, 0), (k, k)).into_owned()
}
