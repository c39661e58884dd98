use std::f64::consts::PI;

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use super::modified::HalfGpts;
use super::{real_part, residue_tolerance, ReconstructionOptions};
use crate::error::{Error, Result};
use crate::forward::GptSet;
use crate::linalg::CMatrix;

/// Fixed points with `|λ|` below `1/2` by more than this relative margin are rejected.
const EXTREME_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSolution {
    pub lambda: f64,
    pub lambda0: f64,
    pub iterations: usize,
    /// `|λ_{k+1} − λ_k| / |λ_k|` per iteration.
    pub trace: Vec<f64>,
    pub damped: bool,
    pub visited_inner_interval: bool,
}

/// `π(Ñ₁₁Ñ₂₂ − Ñ₁₂Ñ₂₁)/Ñ₁₁³` of a (modified) `N⁽²⁾`.
fn lambda_functional(t2: &CMatrix, imag_tol: f64) -> Result<f64> {
    let (a, b, c, d) = (t2[(0, 0)], t2[(0, 1)], t2[(1, 0)], t2[(1, 1)]);
    if a.norm() == 0.0 {
        return Err(Error::Singular("modified N2_11 vanishes".into()));
    }
    let f = (a * d - b * c) / (a * a * a) * PI;
    real_part("lambda iterate", f, imag_tol)
}

/// Fixed-point iteration `λ_{k+1} = f(λ_k)` started from `f` of the unmodified `N⁽²⁾`.
pub fn solve_lambda(gpts: &GptSet, tol: f64, max_iter: usize) -> Result<LambdaSolution> {
    let opts = ReconstructionOptions { tol, max_iter, ..Default::default() };
    opts.validate()?;
    solve_prepared(&HalfGpts::new(gpts, opts.condition_cap)?, &opts)
}

/// After two sign changes between successive increments the iteration switches to
/// `λ ← (λ + f(λ))/2`, which keeps every fixed point.
pub(crate) fn solve_prepared(base: &HalfGpts, opts: &ReconstructionOptions) -> Result<LambdaSolution> {
    if base.ord() < 2 {
        return Err(Error::InvalidInput("solving for lambda needs GPTs of order at least 2".into()));
    }
    let imag_tol = residue_tolerance(opts.imag_tol, base.n2_condition());
    let lambda0 = lambda_functional(base.at(0.5)?.tilde2(), imag_tol)?;
    let mut lambda = lambda0;
    let mut trace = Vec::new();
    let mut visited_inner_interval = lambda.abs() < 0.5;
    let mut damped = false;
    let mut sign_changes = 0;
    let mut previous: Option<f64> = None;
    for k in 1..=opts.max_iter {
        let f = lambda_functional(base.at(lambda)?.tilde2(), imag_tol)?;
        let next = if damped { 0.5 * (lambda + f) } else { f };
        let increment = next - lambda;
        let step = increment.abs() / lambda.abs();
        trace.push(step);
        debug!("iteration {k}: lambda = {next:.12}, relative step {step:.3e}");
        if let Some(p) = previous {
            if p * increment < 0.0 {
                sign_changes += 1;
                if sign_changes >= 2 && !damped {
                    warn!("lambda iteration oscillates; switching to averaged steps");
                    damped = true;
                }
            }
        }
        previous = Some(increment);
        lambda = next;
        visited_inner_interval |= lambda.abs() < 0.5;
        if step < opts.tol {
            if lambda.abs() < 0.5 * (1.0 - EXTREME_SLACK) {
                return Err(Error::SuspectLambda { lambda });
            }
            if visited_inner_interval {
                warn!("lambda iterates visited (-1/2, 1/2)");
            }
            return Ok(LambdaSolution { lambda, lambda0, iterations: k, trace, damped, visited_inner_interval });
        }
    }
    Err(Error::NoConvergence { iterations: opts.max_iter, last_step: trace.last().copied().unwrap_or(f64::NAN) })
}
