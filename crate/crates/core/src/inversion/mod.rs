//! Recovery of the contrast `λ` and the exterior conformal map from GPT data.

mod lambda;
mod modified;

pub use lambda::{solve_lambda, LambdaSolution};
pub use modified::{modified_gpts, HalfGpts, ModifiedGpts};

use std::f64::consts::PI;

use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::conformal::{faber_from_coeffs, ConformalMap};
use crate::error::{Error, Result};
use crate::forward::GptSet;
use crate::linalg::CMatrix;
use crate::C64;

/// Default cap on the (Jacobi-scaled) condition number of `N⁽²⁾`.
pub const DEFAULT_CONDITION_CAP: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReconstructionOptions {
    /// Relative step `|λ_{k+1} − λ_k| / |λ_k|` at which the iteration stops.
    pub tol: f64,
    pub max_iter: usize,
    /// Background conductivity used to convert `λ` into `σc`.
    pub sigma_m: f64,
    pub condition_cap: f64,
    /// Largest relative imaginary part tolerated on quantities that must be real;
    /// raised to `16ε·cond(N⁽²⁾)` when the data are that ill-conditioned.
    pub imag_tol: f64,
}

impl Default for ReconstructionOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 200, sigma_m: 1.0, condition_cap: DEFAULT_CONDITION_CAP, imag_tol: 1e-8 }
    }
}

impl ReconstructionOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.max_iter > 0 && self.sigma_m > 0.0 && self.condition_cap > 1.0 && self.imag_tol > 0.0)
        {
            return Err(Error::InvalidInput(format!("invalid reconstruction options {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    pub ord: usize,
    pub lambda_rec: f64,
    /// `None` for a perfect conductor (`λ = 1/2`).
    pub sigma_rec: Option<f64>,
    pub map_rec: ConformalMap,
    pub lambda0: f64,
    pub iterations: usize,
    pub residual_trace: Vec<f64>,
    pub converged: bool,
    pub damped: bool,
    /// Some iterate fell inside `(−1/2, 1/2)`.
    pub visited_inner_interval: bool,
    pub n2_condition: f64,
    /// Condition number within two decades of the cap.
    pub n2_ill_conditioned: bool,
}

/// Coefficients from modified GPTs at the contrast `lambda`:
/// `γ² = (λ/2π) Ñ⁽²⁾₁₁`, `a₀ = Ñ⁽²⁾₁₂ / (2Ñ⁽²⁾₁₁)`,
/// `a_m = (λ²/πm) Σ_{n≤m} p_mn Ñ⁽¹⁾_n1` with row `m` of `P` built from `a₀..a_{m−1}`.
fn map_from_tilde(t1: &CMatrix, t2: &CMatrix, lambda: f64, imag_tol: f64) -> Result<ConformalMap> {
    let ord = t2.nrows();
    if ord < 2 {
        return Err(Error::InvalidInput("map recovery needs GPTs of order at least 2".into()));
    }
    let t11 = t2[(0, 0)];
    if t11.norm() == 0.0 {
        return Err(Error::Singular("modified N2_11 vanishes".into()));
    }
    let gamma2 = t11 * (lambda / (2.0 * PI));
    let gamma2 = real_part("gamma^2", gamma2, imag_tol)?;
    if !(gamma2 > 0.0) {
        return Err(Error::NonPositiveGamma(gamma2));
    }
    let mut a = vec![t2[(0, 1)] / (t11 * 2.0)];
    for m in 1..=ord {
        let faber = faber_from_coeffs(|n| a.get(n).copied().unwrap_or_default(), m)?;
        let sum: C64 = (1..=m).map(|n| faber.p(m, n) * t1[(n - 1, 0)]).sum();
        a.push(sum * (lambda * lambda / (PI * m as f64)));
    }
    ConformalMap::new(gamma2.sqrt(), a[0], a[1..].to_vec())
}

/// Roundoff in `N⁽²⁾⁻¹` alone puts imaginary parts of order `ε·cond` on quantities
/// that must be real, so the residue tolerance never drops below this multiple of it.
const ROUNDOFF_FACTOR: f64 = 16.0;

/// `imag_tol`, widened to the residue that the conditioning of `N⁽²⁾` explains.
pub(crate) fn residue_tolerance(imag_tol: f64, n2_condition: f64) -> f64 {
    imag_tol.max(ROUNDOFF_FACTOR * f64::EPSILON * n2_condition)
}

/// Real part of a quantity that must be real; small imaginary residue is dropped with a log line.
pub(crate) fn real_part(quantity: &'static str, value: C64, imag_tol: f64) -> Result<f64> {
    if value.im.abs() > imag_tol * value.norm() {
        return Err(Error::ImaginaryResidue { quantity, value });
    }
    if value.im != 0.0 {
        log::debug!("discarding imaginary residue {:.3e} of {quantity}", value.im);
    }
    Ok(value.re)
}

/// Conformal map of the inclusion from GPTs at a known contrast.
pub fn recover_map(gpts: &GptSet, lambda: f64) -> Result<ConformalMap> {
    recover_map_with(gpts, lambda, &ReconstructionOptions::default())
}

fn recover_map_with(gpts: &GptSet, lambda: f64, opts: &ReconstructionOptions) -> Result<ConformalMap> {
    if lambda.abs() < 0.5 {
        return Err(Error::InvalidInput(format!("|lambda| < 1/2: {lambda}")));
    }
    let base = HalfGpts::new(gpts, opts.condition_cap)?;
    let modified = base.at(lambda)?;
    let imag_tol = residue_tolerance(opts.imag_tol, base.n2_condition());
    map_from_tilde(modified.tilde1(), modified.tilde2(), lambda, imag_tol)
}

/// Extreme conductivity (`λ = ±1/2`): the unmodified GPTs determine the map.
pub fn recover_extreme(gpts: &GptSet, lambda: f64) -> Result<ConformalMap> {
    if lambda.abs() != 0.5 {
        return Err(Error::InvalidInput(format!(
            "extreme recovery needs lambda = +-1/2, got {lambda}"
        )));
    }
    map_from_tilde(gpts.n1(), gpts.n2(), lambda, ReconstructionOptions::default().imag_tol)
}

/// Two-step reconstruction: fixed-point solve for `λ`, then the explicit map formulas.
pub fn reconstruct(gpts: &GptSet, opts: &ReconstructionOptions) -> Result<ReconstructionResult> {
    opts.validate()?;
    let base = HalfGpts::new(gpts, opts.condition_cap)?;
    let sol = lambda::solve_prepared(&base, opts)?;
    let modified = base.at(sol.lambda)?;
    let imag_tol = residue_tolerance(opts.imag_tol, base.n2_condition());
    let map_rec = map_from_tilde(modified.tilde1(), modified.tilde2(), sol.lambda, imag_tol)?;
    let sigma_rec = if sol.lambda == 0.5 {
        None
    } else {
        Some(opts.sigma_m * (2.0 * sol.lambda + 1.0) / (2.0 * sol.lambda - 1.0))
    };
    let n2_condition = base.n2_condition();
    let n2_ill_conditioned = n2_condition > opts.condition_cap / 100.0;
    if n2_ill_conditioned {
        warn!("N2 condition number {n2_condition:.3e} is close to the cap {:.1e}", opts.condition_cap);
    }
    info!(
        "ord {}: lambda = {:.10} after {} iterations, gamma = {:.6}",
        gpts.ord(),
        sol.lambda,
        sol.iterations,
        map_rec.gamma()
    );
    Ok(ReconstructionResult {
        ord: gpts.ord(),
        lambda_rec: sol.lambda,
        sigma_rec,
        map_rec,
        lambda0: sol.lambda0,
        iterations: sol.iterations,
        residual_trace: sol.trace,
        converged: true,
        damped: sol.damped,
        visited_inner_interval: sol.visited_inner_interval,
        n2_condition,
        n2_ill_conditioned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::{gpt_analytic, Material};

    fn mat(lambda: f64) -> Material {
        Material::from_lambda(lambda, 1.0).unwrap()
    }

    #[test]
    fn disk_at_origin() {
        let g = gpt_analytic(&ConformalMap::disk(C64::default(), 2.0).unwrap(), &mat(1.0), 4).unwrap();
        let m = recover_map(&g, 1.0).unwrap();
        assert!((m.gamma() - 2.0).abs() < 1e-12);
        assert!(m.a0().norm() < 1e-12);
        assert!(m.coeffs().iter().all(|a| a.norm() < 1e-10));
    }

    #[test]
    fn translated_disk_center() {
        let c0 = C64::new(1.0, 0.5);
        let g = gpt_analytic(&ConformalMap::disk(c0, 1.0).unwrap(), &mat(1.0), 2).unwrap();
        let m = recover_map(&g, 1.0).unwrap();
        assert!((m.a0() - c0).norm() < 1e-12);
        // N2 = 2π P̄⁻¹ diag(1, 2) P⁻ᵀ with P = [[1, 0], [−2c0, 1]]
        let n2 = g.n2();
        let two_pi = 2.0 * PI;
        assert!((n2[(0, 0)] - two_pi).norm() < 1e-12);
        assert!((n2[(0, 1)] - c0 * 2.0 * two_pi).norm() < 1e-12);
        assert!((n2[(1, 0)] - c0.conj() * 2.0 * two_pi).norm() < 1e-12);
        assert!((n2[(1, 1)] - (c0.norm_sqr() * 4.0 + 2.0) * two_pi).norm() < 1e-11);
    }

    #[test]
    fn joukowski_roundtrip() {
        let map = ConformalMap::joukowski(1.0, C64::new(0.5, 0.0)).unwrap();
        for ord in [4, 6] {
            let g = gpt_analytic(&map, &mat(1.0), ord).unwrap();
            let m = recover_map(&g, 1.0).unwrap();
            assert!((m.coeff(1) - C64::new(0.5, 0.0)).norm() < 1e-8);
            assert!((m.gamma() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn extreme_recovery_matches_general_formula() {
        let map = ConformalMap::joukowski(1.0, C64::new(0.3, 0.2)).unwrap();
        for lambda in [0.5, -0.5] {
            let g = gpt_analytic(&map, &mat(lambda), 6).unwrap();
            let e = recover_extreme(&g, lambda).unwrap();
            assert_eq!(e, recover_map(&g, lambda).unwrap());
            assert!((e.coeff(1) - C64::new(0.3, 0.2)).norm() < 1e-12);
        }
        let disk = gpt_analytic(&ConformalMap::disk(C64::default(), 1.5).unwrap(), &mat(0.5), 3).unwrap();
        let e = recover_extreme(&disk, 0.5).unwrap();
        assert!((e.gamma().powi(2) - disk.n2()[(0, 0)].re / (4.0 * PI)).abs() < 1e-12);
        assert!(recover_extreme(&disk, 1.0).is_err());
    }

    #[test]
    fn reconstruct_disk() {
        let g = gpt_analytic(&ConformalMap::disk(C64::new(0.3, -0.2), 1.2).unwrap(), &mat(-2.0), 5).unwrap();
        let r = reconstruct(&g, &ReconstructionOptions::default()).unwrap();
        assert!((r.lambda_rec + 2.0).abs() < 1e-12);
        assert!((r.sigma_rec.unwrap() - mat(-2.0).sigma_c()).abs() < 1e-12);
        assert!((r.map_rec.gamma() - 1.2).abs() < 1e-12);
        assert_eq!(r.iterations, 1);
        let json = serde_json::to_string(&r).unwrap();
        let back: ReconstructionResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn residue_tolerance_follows_conditioning() {
        assert_eq!(residue_tolerance(1e-8, 10.0), 1e-8);
        let wide = residue_tolerance(1e-8, 1e10);
        assert!(wide > 1e-6 && wide < 1e-4);
        assert!(matches!(
            real_part("x", C64::new(1.0, 1e-7), residue_tolerance(1e-8, 10.0)),
            Err(Error::ImaginaryResidue { .. })
        ));
        assert_eq!(real_part("x", C64::new(1.0, 1e-7), wide).unwrap(), 1.0);
    }

    #[test]
    fn wrong_sign_lambda_is_rejected() {
        let g = gpt_analytic(&ConformalMap::disk(C64::default(), 1.0).unwrap(), &mat(1.0), 3).unwrap();
        assert!(matches!(recover_map(&g, -1.0), Err(Error::NonPositiveGamma(_))));
    }
}
