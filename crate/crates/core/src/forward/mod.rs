//! Contracted GPTs and FPTs by boundary-integral Nyström discretization and by
//! the Grunsky factorization, plus the multipole oracle and the monotone
//! combinations of FPTs.

mod analytic;
mod gpts;
mod nystrom;

pub use analytic::{fpt_analytic, gpt_analytic, gpt_analytic_with_buffer, ANALYTIC_BUFFER};
pub use gpts::{FptSet, GptSet, Provenance};
pub use nystrom::{assemble_np, gpt_nystrom, scattered_field, HarmonicPart, NpSystem, ScatteredField};

use crate::error::{Error, Result};

/// Inclusion/background conductivities and the contrast
/// `λ = (σc + σm) / (2(σc − σm))`.
///
/// `σc` may be `0` (insulating, `λ = −1/2`) or `∞` (perfectly conducting, `λ = 1/2`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    sigma_c: f64,
    sigma_m: f64,
    lambda: f64,
}

impl Material {
    pub fn new(sigma_c: f64, sigma_m: f64) -> Result<Self> {
        if !(sigma_m.is_finite() && sigma_m > 0.0) {
            return Err(Error::InvalidInput(format!(
                "background conductivity must be positive and finite, got {sigma_m}"
            )));
        }
        if sigma_c.is_nan() || sigma_c < 0.0 {
            return Err(Error::InvalidInput(format!(
                "inclusion conductivity must be in [0, inf], got {sigma_c}"
            )));
        }
        if sigma_c == sigma_m {
            return Err(Error::InvalidInput(
                "inclusion and background conductivities coincide; there is no contrast".into(),
            ));
        }
        let lambda = if sigma_c.is_infinite() {
            0.5
        } else {
            (sigma_c + sigma_m) / (2.0 * (sigma_c - sigma_m))
        };
        Ok(Self { sigma_c, sigma_m, lambda })
    }

    /// Inverts the contrast formula: `σc = σm(2λ + 1)/(2λ − 1)`.
    pub fn from_lambda(lambda: f64, sigma_m: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda.abs() < 0.5 {
            return Err(Error::InvalidInput(format!(
                "contrast must satisfy |lambda| >= 1/2, got {lambda}"
            )));
        }
        let sigma_c = if lambda == 0.5 {
            f64::INFINITY
        } else {
            sigma_m * (2.0 * lambda + 1.0) / (2.0 * lambda - 1.0)
        };
        let mut m = Self::new(sigma_c, sigma_m)?;
        m.lambda = lambda;
        Ok(m)
    }

    pub fn perfect_conductor(sigma_m: f64) -> Result<Self> {
        Self::new(f64::INFINITY, sigma_m)
    }

    pub fn insulator(sigma_m: f64) -> Result<Self> {
        Self::new(0.0, sigma_m)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn sigma_c(&self) -> f64 {
        self.sigma_c
    }

    pub fn sigma_m(&self) -> f64 {
        self.sigma_m
    }

    pub fn is_extreme(&self) -> bool {
        self.lambda.abs() == 0.5
    }
}

/// The eight FPT combinations `A^{(±k)}_mn`, `k = 1..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combination {
    Plus1,
    Minus1,
    Plus2,
    Minus2,
    Plus3,
    Minus3,
    Plus4,
    Minus4,
}

impl Combination {
    pub const ALL: [Combination; 8] = [
        Self::Plus1,
        Self::Minus1,
        Self::Plus2,
        Self::Minus2,
        Self::Plus3,
        Self::Minus3,
        Self::Plus4,
        Self::Minus4,
    ];

    /// `±1..±4`.
    pub fn from_index(k: i8) -> Result<Self> {
        Ok(match k {
            1 => Self::Plus1,
            -1 => Self::Minus1,
            2 => Self::Plus2,
            -2 => Self::Minus2,
            3 => Self::Plus3,
            -3 => Self::Minus3,
            4 => Self::Plus4,
            -4 => Self::Minus4,
            _ => return Err(Error::InvalidInput(format!("no combination with index {k}"))),
        })
    }

    fn evaluate(self, f: &FptSet, m: usize, n: usize) -> f64 {
        let (f1, f2) = (f.f1(), f.f2());
        let (i, j) = (m - 1, n - 1);
        let (a, b, c, d) = (f1[(i, i)], f1[(j, j)], f2[(i, i)], f2[(j, j)]);
        let (p, q) = (f1[(i, j)], f2[(i, j)]);
        match self {
            Self::Plus1 => (a + b + c + d).re + 2.0 * (p + q).re,
            Self::Minus1 => (a + b + c + d).re - 2.0 * (p + q).re,
            Self::Plus2 => (-a - b + c + d).re - 2.0 * (p - q).re,
            Self::Minus2 => (-a - b + c + d).re + 2.0 * (p - q).re,
            Self::Plus3 => (a - b + c + d).re - 2.0 * (p + q).im,
            Self::Minus3 => (a - b + c + d).re + 2.0 * (p + q).im,
            Self::Plus4 => (-a + b + c + d).re + 2.0 * (p - q).im,
            Self::Minus4 => (-a + b + c + d).re - 2.0 * (p - q).im,
        }
    }
}

/// `A^{(variant)}_mn` for both sets (indices are 1-based).
pub fn monotone_combination(
    f: &FptSet,
    g: &FptSet,
    m: usize,
    n: usize,
    variant: Combination,
) -> Result<(f64, f64)> {
    let ord = f.ord().min(g.ord());
    if m < 1 || n < 1 || m > ord || n > ord {
        return Err(Error::InvalidInput(format!(
            "indices ({m}, {n}) outside 1..={ord}"
        )));
    }
    Ok((variant.evaluate(f, m, n), variant.evaluate(g, m, n)))
}
