use crate::conformal::ConformalMap;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::C64;

/// Truncated Grunsky matrix `C = (c_mn)` and its symmetrisation
/// `g_mn = √(n/m)·c_mn/γ^{m+n}`, for `m, n = 1..M`.
#[derive(Debug, Clone)]
pub struct GrunskyTables {
    order: usize,
    gamma: f64,
    c: CMatrix,
    g: CMatrix,
}

/// Grunsky coefficients from
/// `c_{1m} = a_m`, `c_{m1} = m·a_m`,
/// `c_{m(n+1)} = c_{(m+1)n} − a_{m+n} + Σ_{s<m} a_{m−s} c_{sn} − Σ_{s<n} a_{n−s} c_{ms}`.
///
/// The table is filled up to index `2M` so every `a_{m+n}` the recursion needs is present.
pub fn grunsky_tables(map: &ConformalMap, order: usize) -> Result<GrunskyTables> {
    if order < 1 {
        return Err(Error::InvalidInput("Grunsky order must be at least 1".into()));
    }
    let l = 2 * order;
    let a = |n: usize| map.coeff(n);
    // 1-based (l+1)x(l+1) table
    let mut c = vec![vec![C64::default(); l + 2]; l + 2];
    for m in 1..=l {
        c[1][m] = a(m);
        c[m][1] = a(m) * m as f64;
    }
    for n in 1..l {
        for m in 2..=l - n {
            let mut v = c[m + 1][n] - a(m + n);
            for s in 1..m {
                v += a(m - s) * c[s][n];
            }
            for s in 1..n {
                v -= a(n - s) * c[m][s];
            }
            c[m][n + 1] = v;
        }
    }

    let gamma = map.gamma();
    let c_mat = CMatrix::from_fn(order, order, |i, j| c[i + 1][j + 1]);
    let g = CMatrix::from_fn(order, order, |i, j| {
        let (m, n) = ((i + 1) as f64, (j + 1) as f64);
        c_mat[(i, j)] * ((n / m).sqrt() / gamma.powi((i + j + 2) as i32))
    });
    Ok(GrunskyTables { order, gamma, c: c_mat, g })
}

impl GrunskyTables {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn c(&self) -> &CMatrix {
        &self.c
    }

    pub fn g(&self) -> &CMatrix {
        &self.g
    }

    /// Largest singular value of the finite section of `G`. It is monotone in the
    /// order and bounds the operator norm from below.
    pub fn g_norm(&self) -> f64 {
        linalg::spectral_norm(&self.g)
    }

    /// `max |n·c_mn − m·c_nm|` relative to `max |n·c_mn|`.
    pub fn symmetry_residual(&self) -> f64 {
        let nc = CMatrix::from_fn(self.order, self.order, |i, j| self.c[(i, j)] * (j + 1) as f64);
        let scale = linalg::max_abs(&nc);
        if scale == 0.0 {
            return 0.0;
        }
        linalg::max_abs(&(&nc - nc.transpose())) / scale
    }
}
