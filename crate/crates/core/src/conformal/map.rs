use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::C64;

/// Exterior conformal map `Ψ(w) = w + a₀ + a₁/w + a₂/w² + …` from `|w| > γ`
/// onto the exterior of the inclusion.
///
/// Coefficients beyond the stored list are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalMap {
    gamma: f64,
    a0: C64,
    coeffs: Vec<C64>,
}

impl ConformalMap {
    pub fn new(gamma: f64, a0: C64, coeffs: Vec<C64>) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidInput(format!(
                "conformal radius must be positive, got {gamma}"
            )));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput(
                "a conformal map needs at least one coefficient a_1".into(),
            ));
        }
        if !a0.is_finite() || coeffs.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidInput("non-finite map coefficient".into()));
        }
        Ok(Self { gamma, a0, coeffs })
    }

    /// `Ψ(w) = w + center`, the map of the disk of the given radius.
    pub fn disk(center: C64, radius: f64) -> Result<Self> {
        Self::new(radius, center, vec![C64::new(0.0, 0.0)])
    }

    /// `Ψ(w) = w + a₁/w`: an ellipse centred at the origin with semi-axes `γ ± |a₁|/γ`.
    pub fn joukowski(gamma: f64, a1: C64) -> Result<Self> {
        Self::new(gamma, C64::new(0.0, 0.0), vec![a1])
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn a0(&self) -> C64 {
        self.a0
    }

    /// Stored coefficients `a₁..a_M`.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Number of stored coefficients `M`.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_n`, zero beyond the stored list.
    pub fn coeff(&self, n: usize) -> C64 {
        match n {
            0 => self.a0,
            n => self.coeffs.get(n - 1).copied().unwrap_or_default(),
        }
    }

    /// Map keeping only `a₁..a_k`.
    pub fn truncated(&self, k: usize) -> Self {
        let mut coeffs: Vec<C64> = self.coeffs.iter().take(k.max(1)).copied().collect();
        coeffs.resize(k.max(1), C64::default());
        Self { gamma: self.gamma, a0: self.a0, coeffs }
    }

    /// Same coefficients on a different conformal radius (swelling `γ → γ(1+ε)`).
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(gamma, self.a0, self.coeffs.clone())
    }

    /// Map of the translated domain `Ω + v`.
    pub fn translated(&self, v: C64) -> Self {
        Self { a0: self.a0 + v, ..self.clone() }
    }

    /// Map of the domain scaled by `s` about its centre `a₀`:
    /// `γ → sγ`, `a_n → s^{n+1} a_n`.
    pub fn scaled_about_center(&self, s: f64) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * s.powi(i as i32 + 2))
            .collect();
        Self::new(s * self.gamma, self.a0, coeffs)
    }

    pub fn eval(&self, w: C64) -> C64 {
        let inv = w.inv();
        // Horner in 1/w over a_M..a_1
        let tail = self
            .coeffs
            .iter()
            .rev()
            .fold(C64::default(), |acc, a| (acc + a) * inv);
        w + self.a0 + tail
    }

    pub fn derivative(&self, w: C64) -> C64 {
        let inv = w.inv();
        let mut d = C64::new(1.0, 0.0);
        let mut p = inv * inv;
        for (i, a) in self.coeffs.iter().enumerate() {
            d -= a * (i as f64 + 1.0) * p;
            p *= inv;
        }
        d
    }

    pub fn second_derivative(&self, w: C64) -> C64 {
        let inv = w.inv();
        let mut d = C64::default();
        let mut p = inv * inv * inv;
        for (i, a) in self.coeffs.iter().enumerate() {
            let n = i as f64 + 1.0;
            d += a * n * (n + 1.0) * p;
            p *= inv;
        }
        d
    }
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    gamma: f64,
    a0: [f64; 2],
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for ConformalMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapRepr {
            gamma: self.gamma,
            a0: [self.a0.re, self.a0.im],
            coeffs: self.coeffs.iter().map(|a| [a.re, a.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConformalMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MapRepr::deserialize(d)?;
        ConformalMap::new(
            r.gamma,
            C64::new(r.a0[0], r.a0[1]),
            r.coeffs.iter().map(|c| C64::new(c[0], c[1])).collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}
