use std::f64::consts::{PI, TAU};

use log::warn;
use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{GptSet, Material, Provenance};
use crate::error::{Error, Result};
use crate::geometry::BoundaryCurve;
use crate::linalg::CMatrix;
use crate::C64;

/// Nyström matrix of the adjoint Neumann-Poincaré operator `K*` on a curve:
/// `K[i][j] = ⟨x_i − y_j, ν_i⟩ / (2π|x_i − y_j|²) · w_j`, `K[i][i] = κ_i w_i / (4π)`.
#[derive(Debug, Clone)]
pub struct NpSystem<'a> {
    curve: &'a BoundaryCurve,
    k: DMatrix<f64>,
}

pub fn assemble_np(curve: &BoundaryCurve) -> Result<NpSystem<'_>> {
    let n = curve.len();
    let (z, nu, kappa, w) = (curve.nodes(), curve.normals(), curve.curvature(), curve.weights());
    let tiny = f64::EPSILON * curve.max_radius().max(1.0);
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        return Ok(kappa[i] * w[i] / (4.0 * PI));
                    }
                    let d = z[i] - z[j];
                    let r2 = d.norm_sqr();
                    if r2.sqrt() <= tiny {
                        return Err(Error::CoincidentNodes { i, j });
                    }
                    Ok((d * nu[i].conj()).re / (TAU * r2) * w[j])
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let k = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    Ok(NpSystem { curve, k })
}

impl<'a> NpSystem<'a> {
    pub fn curve(&self) -> &'a BoundaryCurve {
        self.curve
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.k
    }

    pub fn apply(&self, density: &[f64]) -> Vec<f64> {
        let v = nalgebra::DVector::from_column_slice(density);
        (&self.k * v).iter().copied().collect()
    }

    /// Solves `(λI − K*)φ = f` for each column of `rhs` (complex data, real operator).
    ///
    /// At `λ = 1/2` the operator has the equilibrium density in its kernel; the
    /// system is bordered with `1·wᵀ`, which selects the mean-free solution for
    /// mean-free data.
    pub fn solve(&self, lambda: f64, rhs: &CMatrix) -> Result<CMatrix> {
        let n = self.k.nrows();
        let w = self.curve.weights();
        let mut a = -self.k.clone();
        for i in 0..n {
            a[(i, i)] += lambda;
        }
        if lambda == 0.5 {
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] += w[j];
                }
            }
        }
        let cols = rhs.ncols();
        let b = DMatrix::from_fn(n, 2 * cols, |i, c| {
            let z = rhs[(i, c / 2)];
            if c % 2 == 0 {
                z.re
            } else {
                z.im
            }
        });
        let singular = || {
            Error::Singular(format!(
                "lambda I - K* with lambda = {lambda} on a {n}-node curve"
            ))
        };
        let x = a.lu().solve(&b).ok_or_else(singular)?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(singular());
        }
        Ok(CMatrix::from_fn(n, cols, |i, c| C64::new(x[(i, 2 * c)], x[(i, 2 * c + 1)])))
    }
}

/// `∂P_m/∂ν = m z^{m−1} ν` at every node, one column per `m = 1..ord`.
fn normal_derivatives(curve: &BoundaryCurve, ord: usize) -> CMatrix {
    CMatrix::from_fn(curve.len(), ord, |i, c| {
        let m = c + 1;
        curve.nodes()[i].powu(m as u32 - 1) * curve.normals()[i] * m as f64
    })
}

/// Moments `Σ_j z_j^n φ_j(m) w_j`, rows indexed by `m`, columns by `n`.
fn moments(curve: &BoundaryCurve, phi: &CMatrix, ord: usize, conj: bool) -> CMatrix {
    let (z, w) = (curve.nodes(), curve.weights());
    CMatrix::from_fn(ord, ord, |mi, ni| {
        (0..curve.len())
            .map(|j| {
                let p = if conj { phi[(j, mi)].conj() } else { phi[(j, mi)] };
                z[j].powu(ni as u32 + 1) * p * w[j]
            })
            .sum()
    })
}

/// Contracted GPTs by Nyström discretization of `(λI − K*)φ = ∂P_m/∂ν`.
///
/// The operator is real, so the densities for `conj(P_m)` are the conjugates of
/// those for `P_m` and one solve per order serves both matrices.
pub fn gpt_nystrom(curve: &BoundaryCurve, mat: &Material, ord: usize) -> Result<GptSet> {
    if ord < 2 {
        return Err(Error::InvalidInput(format!("GPT order must be at least 2, got {ord}")));
    }
    if ord > curve.len() / 8 {
        warn!(
            "order {ord} is large for {} nodes; high-order GPTs may be under-resolved",
            curve.len()
        );
    }
    let np = assemble_np(curve)?;
    let phi = np.solve(mat.lambda(), &normal_derivatives(curve, ord))?;
    let n1 = moments(curve, &phi, ord, false);
    let n2 = moments(curve, &phi, ord, true);
    GptSet::new(n1, n2, Provenance::Nystrom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicPart {
    /// `H = Re zᵐ`
    Re,
    /// `H = Im zᵐ`
    Im,
}

/// `u − H` at the evaluation points by two routes.
#[derive(Debug, Clone)]
pub struct ScatteredField {
    /// Single-layer potential of the density on the boundary.
    pub layer: Vec<f64>,
    /// Multipole sum from GPTs of the given order.
    pub multipole: Vec<f64>,
}

/// Perturbation of the background field `H = Re zᵐ` or `Im zᵐ`.
///
/// Route (i) evaluates `S[φ](x) = ∫ ln|x − y| φ(y) dσ / 2π` with
/// `φ = (λI − K*)⁻¹[∂H/∂ν]`. Route (ii) sums
/// `−(1/2π) Σ_{n ≤ ord} Re[x⁻ⁿ/n · ∫ yⁿ φ]`, where `∫ yⁿ φ` comes from the
/// GPTs: `(N⁽¹⁾_mn + N⁽²⁾_mn)/2` for the real part, `(N⁽¹⁾_mn − N⁽²⁾_mn)/2i` for the imaginary part.
pub fn scattered_field(
    curve: &BoundaryCurve,
    mat: &Material,
    degree: usize,
    part: HarmonicPart,
    ord: usize,
    eval_points: &[C64],
) -> Result<ScatteredField> {
    if degree < 1 || ord < degree.max(2) {
        return Err(Error::InvalidInput(format!(
            "need 1 <= degree <= ord and ord >= 2 (got degree {degree}, ord {ord})"
        )));
    }
    let radius = curve.max_radius();
    if let Some(x) = eval_points.iter().find(|x| x.norm() <= radius) {
        return Err(Error::InsideMultipoleBound { x: (x.re, x.im), radius });
    }
    let np = assemble_np(curve)?;
    let densities = np.solve(mat.lambda(), &normal_derivatives(curve, ord))?;
    // a real operator maps Re/Im of the data to Re/Im of the density
    let phi: Vec<f64> = densities
        .column(degree - 1)
        .iter()
        .map(|p| match part {
            HarmonicPart::Re => p.re,
            HarmonicPart::Im => p.im,
        })
        .collect();

    let (z, w) = (curve.nodes(), curve.weights());
    let layer = eval_points
        .iter()
        .map(|x| {
            (0..curve.len()).map(|j| (x - z[j]).norm().ln() * phi[j] * w[j]).sum::<f64>() / TAU
        })
        .collect();

    let (n1, n2) = (moments(curve, &densities, ord, false), moments(curve, &densities, ord, true));
    let m = degree - 1;
    let moment = |n: usize| match part {
        HarmonicPart::Re => (n1[(m, n)] + n2[(m, n)]) / 2.0,
        HarmonicPart::Im => (n1[(m, n)] - n2[(m, n)]) / C64::new(0.0, 2.0),
    };
    let multipole = eval_points
        .iter()
        .map(|x| {
            -(0..ord)
                .map(|n| (x.powi(-(n as i32 + 1)) / (n + 1) as f64 * moment(n)).re)
                .sum::<f64>()
                / TAU
        })
        .collect();
    Ok(ScatteredField { layer, multipole })
}
