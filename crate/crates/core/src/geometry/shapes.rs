use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2, TAU};

use log::warn;
use serde::{Deserialize, Serialize};

use super::mesh::{self, PANEL_ORDER};
use super::{BoundaryCurve, Smoothness};
use crate::conformal::ConformalMap;
use crate::error::{Error, Result};
use crate::C64;

/// Dyadic grading levels toward each corner unless `ShapeSpec::refinement` is set.
pub const DEFAULT_REFINEMENT: u32 = 12;

const MIN_NODES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum ShapeKind {
    Kite,
    Starfish,
    Cap,
    PerturbedEllipse,
    Disk { center: [f64; 2], radius: f64 },
    FromConformal { map: ConformalMap },
}

/// JSON form: `{"shape": "kite", "nodes": 512}`; corner shapes accept `"refinement"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeSpec {
    #[serde(flatten)]
    pub kind: ShapeKind,
    pub nodes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refinement: Option<u32>,
}

impl ShapeSpec {
    pub fn new(kind: ShapeKind, nodes: usize) -> Self {
        Self { kind, nodes, refinement: None }
    }

    pub fn with_refinement(mut self, depth: u32) -> Self {
        self.refinement = Some(depth);
        self
    }
}

impl ShapeKind {
    /// Names of the parameter-free built-ins.
    pub const BUILTIN: [&'static str; 4] = ["kite", "starfish", "cap", "perturbed_ellipse"];

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "kite" => Ok(Self::Kite),
            "starfish" => Ok(Self::Starfish),
            "cap" => Ok(Self::Cap),
            "perturbed_ellipse" => Ok(Self::PerturbedEllipse),
            "disk" => Ok(Self::Disk { center: [0.0, 0.0], radius: 1.0 }),
            other => Err(Error::UnknownShape(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Kite => "kite",
            Self::Starfish => "starfish",
            Self::Cap => "cap",
            Self::PerturbedEllipse => "perturbed_ellipse",
            Self::Disk { .. } => "disk",
            Self::FromConformal { .. } => "from_conformal",
        }
    }

    /// Corner parameters in `[0, 2π)`; empty for smooth shapes.
    pub fn corners(&self) -> Vec<f64> {
        match self {
            Self::Cap => {
                let k = CapConstants::get();
                vec![0.0, TAU * k.t1, TAU * k.t2]
            }
            Self::PerturbedEllipse => {
                let k = EllipseConstants::get();
                vec![0.0, k.t0, TAU - k.t0]
            }
            _ => Vec::new(),
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.corners().is_empty()
    }

    /// `(z, z', z'')` at parameter `t ∈ [0, 2π)`; one-sided from the right at corners.
    pub fn sample(&self, t: f64) -> (C64, C64, C64) {
        let t = t.rem_euclid(TAU);
        match self {
            Self::Kite => {
                let (s, c) = t.sin_cos();
                let (s2, c2) = (2.0 * t).sin_cos();
                (
                    C64::new(c + 0.65 * c2, 1.5 * s),
                    C64::new(-s - 1.3 * s2, 1.5 * c),
                    C64::new(-c - 2.6 * c2, -1.5 * s),
                )
            }
            Self::Starfish => {
                let (s5, c5) = (5.0 * t).sin_cos();
                let (r, dr, ddr) = (1.0 + 0.25 * c5, -1.25 * s5, -6.25 * c5);
                let e = C64::from_polar(1.0, t);
                (
                    e * r,
                    e * C64::new(dr, r),
                    e * C64::new(ddr - r, 2.0 * dr),
                )
            }
            Self::Cap => cap(t),
            Self::PerturbedEllipse => perturbed_ellipse(t),
            Self::Disk { center, radius } => {
                let e = C64::from_polar(*radius, t);
                (C64::new(center[0], center[1]) + e, C64::i() * e, -e)
            }
            Self::FromConformal { map } => {
                let w = C64::from_polar(map.gamma(), t);
                let iw = C64::i() * w;
                let d1 = map.derivative(w);
                (map.eval(w), d1 * iw, map.second_derivative(w) * iw * iw - d1 * w)
            }
        }
    }

    /// `n` boundary points at equispaced parameters, for plotting.
    pub fn outline(&self, n: usize) -> Vec<C64> {
        (0..n).map(|j| self.sample(TAU * j as f64 / n as f64).0).collect()
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Disk { center, radius } => {
                if !(radius.is_finite() && *radius > 0.0) || !center.iter().all(|c| c.is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "disk needs a finite center and positive radius, got {center:?}, {radius}"
                    )));
                }
            }
            Self::FromConformal { map } => {
                // re-run the constructor checks on deserialised data
                ConformalMap::new(map.gamma(), map.a0(), map.coeffs().to_vec())?;
            }
            _ => {}
        }
        Ok(())
    }
}

/// Samples the shape. Smooth shapes use the trapezoidal rule at exactly
/// `nodes` points (a power of two); corner shapes use 16-point Gauss-Legendre
/// panels, `nodes / 16` base panels graded toward each corner.
pub fn make_curve(spec: &ShapeSpec) -> Result<BoundaryCurve> {
    spec.kind.validate()?;
    if spec.nodes < MIN_NODES {
        return Err(Error::InvalidInput(format!(
            "node count {} is below the minimum {MIN_NODES}",
            spec.nodes
        )));
    }
    let corners = spec.kind.corners();
    let (grid, smoothness) = if corners.is_empty() {
        if !spec.nodes.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "smooth shapes need a power-of-two node count, got {}",
                spec.nodes
            )));
        }
        if spec.refinement.is_some() {
            warn!("corner refinement ignored for smooth shape `{}`", spec.kind.name());
        }
        (mesh::trapezoid(spec.nodes), Smoothness::Analytic)
    } else {
        let depth = spec.refinement.unwrap_or(DEFAULT_REFINEMENT);
        let base = (spec.nodes / PANEL_ORDER).max(corners.len());
        (mesh::graded_panels(&corners, base, depth), Smoothness::Corners(corners))
    };
    let samples = grid.params.iter().map(|&t| spec.kind.sample(t)).collect();
    BoundaryCurve::from_samples(grid.params, samples, grid.weights, smoothness)
}

/// Constants of the cap on its native parameter interval `[0, 1)`.
#[derive(Debug, Clone, Copy)]
pub struct CapConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub t1: f64,
    pub t2: f64,
}

impl CapConstants {
    pub fn get() -> Self {
        let a = 0.5 - 0.5f64.sinh().asin() / TAU;
        let b = a - 1.0 / (4.0 * PI) - SQRT_2 / 8.0
            + SQRT_2 / TAU * (FRAC_1_SQRT_2 * (TAU * a).cos()).asin();
        let c = 9.0 / 8.0 - b;
        let t1 = 1.0 / (8.0 * c);
        let t2 = t1 + (a - b) / c;
        Self { a, b, c, t1, t2 }
    }
}

/// Three-piece cap; `t ∈ [0, 2π)` maps affinely onto `[0, 1)`.
fn cap(t: f64) -> (C64, C64, C64) {
    let k = CapConstants::get();
    let s = t / TAU;
    let (z, d1, d2) = if s < k.t1 {
        let q = 4.0 * PI * k.c;
        let (sn, cs) = (q * s).sin_cos();
        (
            C64::new(-0.5 * sn - SQRT_2 * PI / 4.0, -0.5 + 0.5 * cs),
            C64::new(-0.5 * q * cs, -0.5 * q * sn),
            C64::new(0.5 * q * q * sn, -0.5 * q * q * cs),
        )
    } else if s < k.t2 {
        let x0 = SQRT_2 * (FRAC_1_SQRT_2 * (TAU * k.a).cos()).asin();
        (
            C64::new(TAU * k.c * (s - k.t2) - x0, -0.5),
            C64::new(TAU * k.c, 0.0),
            C64::default(),
        )
    } else {
        let w = TAU * k.c;
        let arg = w * (s - k.t2) + TAU * k.a;
        let (sn, cs) = arg.sin_cos();
        let u = FRAC_1_SQRT_2 * cs;
        let (du, ddu) = (-FRAC_1_SQRT_2 * sn * w, -FRAC_1_SQRT_2 * cs * w * w);
        let one_u = 1.0 - u * u;
        let (v, dv, ddv) = (sn, cs * w, -sn * w * w);
        let one_v = 1.0 + v * v;
        (
            C64::new(-SQRT_2 * u.asin(), -v.asinh()),
            C64::new(-SQRT_2 * du / one_u.sqrt(), -dv / one_v.sqrt()),
            C64::new(
                -SQRT_2 * (ddu / one_u.sqrt() + du * du * u / one_u.powf(1.5)),
                -(ddv / one_v.sqrt() - dv * dv * v / one_v.powf(1.5)),
            ),
        )
    };
    (z, d1 / TAU, d2 / (TAU * TAU))
}

#[derive(Debug, Clone, Copy)]
pub struct EllipseConstants {
    pub a: f64,
    pub b: f64,
    pub t0: f64,
    pub c0: f64,
}

impl EllipseConstants {
    pub fn get() -> Self {
        let (a, b) = (1.0, 7.0 / 3.0);
        let t0 = (1.0 / (4.0 * b * SQRT_2)).asin();
        let c0 = (1.0 - 1.0 / (32.0 * b * b)).sqrt() + 1.0 / (4.0 * SQRT_2);
        Self { a, b, t0, c0 }
    }
}

/// Ellipse `(cos t, 7/3 sin t)` with the arc `|t| < t₀` replaced by two
/// segments meeting at the tip `(c₀, 0)`.
fn perturbed_ellipse(t: f64) -> (C64, C64, C64) {
    let EllipseConstants { a, b, t0, c0 } = EllipseConstants::get();
    if t < t0 {
        let d = C64::new((a * t0.cos() - c0) / t0, b * t0.sin() / t0);
        (C64::new(c0, 0.0) + d * t, d, C64::default())
    } else if t < TAU - t0 {
        let (s, c) = t.sin_cos();
        (C64::new(a * c, b * s), C64::new(-a * s, b * c), C64::new(-a * c, -b * s))
    } else {
        let e = TAU - t0;
        let d = C64::new((a * e.cos() - c0) / t0, b * e.sin() / t0);
        (C64::new(c0, 0.0) + d * (TAU - t), -d, C64::default())
    }
}
