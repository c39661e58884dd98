//! Discretized boundary curves and the built-in test shapes.

pub mod mesh;
mod shapes;

pub use shapes::{make_curve, CapConstants, EllipseConstants, ShapeKind, ShapeSpec, DEFAULT_REFINEMENT};

use std::f64::consts::TAU;
use std::io::Write;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothness {
    Analytic,
    /// Piecewise smooth with corners at these parameters in `[0, 2π)`.
    Corners(Vec<f64>),
}

/// Counterclockwise closed curve sampled at quadrature nodes.
///
/// `weights` are arclength weights (parameter weight times `|z'|`); derivatives
/// are taken with respect to the curve parameter on `[0, 2π)`.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    params: Vec<f64>,
    nodes: Vec<C64>,
    derivatives: Vec<C64>,
    second_derivatives: Vec<C64>,
    normals: Vec<C64>,
    curvature: Vec<f64>,
    param_weights: Vec<f64>,
    weights: Vec<f64>,
    smoothness: Smoothness,
}

impl BoundaryCurve {
    /// Builds a curve from `(z, z', z'')` samples. A clockwise curve is reversed with a warning.
    pub fn from_samples(
        params: Vec<f64>,
        samples: Vec<(C64, C64, C64)>,
        param_weights: Vec<f64>,
        smoothness: Smoothness,
    ) -> Result<Self> {
        let n = samples.len();
        if n < 3 || params.len() != n || param_weights.len() != n {
            return Err(Error::InvalidInput(format!(
                "curve needs at least 3 consistent samples (got {n} samples, {} params, {} weights)",
                params.len(),
                param_weights.len()
            )));
        }
        for (j, (z, d1, d2)) in samples.iter().enumerate() {
            if !(z.is_finite() && d1.is_finite() && d2.is_finite()) || d1.norm() == 0.0 {
                return Err(Error::InvalidInput(format!(
                    "degenerate curve sample at node {j} (t = {})",
                    params[j]
                )));
            }
        }
        let mut curve = Self::assemble(params, samples, param_weights, smoothness);
        if curve.signed_area() < 0.0 {
            warn!("curve is clockwise; reversing orientation");
            curve = curve.reversed();
        }
        Ok(curve)
    }

    fn assemble(
        params: Vec<f64>,
        samples: Vec<(C64, C64, C64)>,
        param_weights: Vec<f64>,
        smoothness: Smoothness,
    ) -> Self {
        let nodes: Vec<C64> = samples.iter().map(|s| s.0).collect();
        let derivatives: Vec<C64> = samples.iter().map(|s| s.1).collect();
        let second_derivatives: Vec<C64> = samples.iter().map(|s| s.2).collect();
        let normals = derivatives.iter().map(|d| -C64::i() * d / d.norm()).collect();
        let curvature = derivatives
            .iter()
            .zip(&second_derivatives)
            .map(|(d1, d2)| (d1.conj() * d2).im / d1.norm().powi(3))
            .collect();
        let weights = param_weights
            .iter()
            .zip(&derivatives)
            .map(|(w, d)| w * d.norm())
            .collect();
        Self {
            params,
            nodes,
            derivatives,
            second_derivatives,
            normals,
            curvature,
            param_weights,
            weights,
            smoothness,
        }
    }

    /// Same point set traversed the other way: `t → 2π − t`.
    fn reversed(&self) -> Self {
        let flip = |t: f64| (TAU - t).rem_euclid(TAU);
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&i, &j| flip(self.params[i]).total_cmp(&flip(self.params[j])));
        let smoothness = match &self.smoothness {
            Smoothness::Analytic => Smoothness::Analytic,
            Smoothness::Corners(c) => {
                let mut c: Vec<f64> = c.iter().map(|&t| flip(t)).collect();
                c.sort_by(f64::total_cmp);
                Smoothness::Corners(c)
            }
        };
        Self::assemble(
            idx.iter().map(|&i| flip(self.params[i])).collect(),
            idx.iter()
                .map(|&i| (self.nodes[i], -self.derivatives[i], self.second_derivatives[i]))
                .collect(),
            idx.iter().map(|&i| self.param_weights[i]).collect(),
            smoothness,
        )
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn derivatives(&self) -> &[C64] {
        &self.derivatives
    }

    pub fn second_derivatives(&self) -> &[C64] {
        &self.second_derivatives
    }

    /// Outward unit normals as complex numbers.
    pub fn normals(&self) -> &[C64] {
        &self.normals
    }

    pub fn curvature(&self) -> &[f64] {
        &self.curvature
    }

    /// Arclength quadrature weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn param_weights(&self) -> &[f64] {
        &self.param_weights
    }

    pub fn smoothness(&self) -> &Smoothness {
        &self.smoothness
    }

    pub fn length(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `½∮ Im(z̄ dz)`; positive for counterclockwise curves.
    pub fn signed_area(&self) -> f64 {
        0.5 * self
            .nodes
            .iter()
            .zip(&self.derivatives)
            .zip(&self.param_weights)
            .map(|((z, d), w)| (z.conj() * d).im * w)
            .sum::<f64>()
    }

    /// `max |z|` over the nodes.
    pub fn max_radius(&self) -> f64 {
        self.nodes.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest node-to-node distance.
    pub fn diameter(&self) -> f64 {
        self.nodes
            .iter()
            .flat_map(|a| self.nodes.iter().map(move |b| (a - b).norm()))
            .fold(0.0, f64::max)
    }

    /// Winding number of the node polygon about `p`.
    pub fn winding_number(&self, p: C64) -> f64 {
        self.arg_increments(p).iter().sum::<f64>() / TAU
    }

    fn arg_increments(&self, p: C64) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|j| ((self.nodes[(j + 1) % n] - p) / (self.nodes[j] - p)).arg())
            .collect()
    }

    /// CSV with columns `t, x, y, nx, ny, weight` (arclength weight).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "x", "y", "nx", "ny", "weight"])?;
        for j in 0..self.len() {
            let (z, nu) = (self.nodes[j], self.normals[j]);
            w.write_record(
                [self.params[j], z.re, z.im, nu.re, nu.im, self.weights[j]].map(|v| v.to_string()),
            )?;
        }
        w.flush()?;
        Ok(())
    }
}

/// True iff `arg(z(t) − s0)` is strictly increasing along the nodes.
///
/// Fails when `s0` is on or outside the curve.
pub fn is_star_shaped(curve: &BoundaryCurve, s0: C64) -> Result<bool> {
    let scale = curve.diameter().max(f64::MIN_POSITIVE);
    let on_curve = curve.nodes().iter().any(|z| (z - s0).norm() <= 1e-12 * scale);
    if on_curve || (curve.winding_number(s0) - 1.0).abs() > 0.5 {
        return Err(Error::PointNotInside { x: (s0.re, s0.im) });
    }
    Ok(curve.arg_increments(s0).iter().all(|&d| d > 0.0))
}

/// Symmetric discrete Hausdorff distance between the node sets.
pub fn shape_distance(a: &BoundaryCurve, b: &BoundaryCurve) -> f64 {
    directed_hausdorff(a.nodes(), b.nodes()).max(directed_hausdorff(b.nodes(), a.nodes()))
}

pub(crate) fn directed_hausdorff(from: &[C64], to: &[C64]) -> f64 {
    from.iter()
        .map(|p| to.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(center: C64, r: f64, n: usize) -> BoundaryCurve {
        let spec = ShapeSpec::new(ShapeKind::Disk { center: [center.re, center.im], radius: r }, n);
        make_curve(&spec).unwrap()
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let n = 32;
        let h = TAU / n as f64;
        let params: Vec<f64> = (0..n).map(|j| j as f64 * h).collect();
        let samples = params
            .iter()
            .map(|&t| {
                let e = C64::from_polar(1.0, -t);
                (e, -C64::i() * e, -e)
            })
            .collect();
        let c = BoundaryCurve::from_samples(params, samples, vec![h; n], Smoothness::Analytic).unwrap();
        assert!(c.signed_area() > 0.0);
        assert!(c.params().windows(2).all(|w| w[0] < w[1]));
        for (z, nu) in c.nodes().iter().zip(c.normals()) {
            assert!((z - nu).norm() < 1e-14, "outward normal of the unit circle is z");
        }
        assert!(c.curvature().iter().all(|k| (k - 1.0).abs() < 1e-12));
    }

    #[test]
    fn star_shape_checks() {
        let d = circle(C64::default(), 1.0, 64);
        assert!(is_star_shaped(&d, C64::default()).unwrap());
        assert!(matches!(
            is_star_shaped(&d, C64::new(3.0, 0.0)),
            Err(Error::PointNotInside { .. })
        ));
        assert!(is_star_shaped(&d, d.nodes()[0]).is_err());
    }

    #[test]
    fn hausdorff_of_concentric_circles() {
        let a = circle(C64::default(), 1.0, 256);
        let b = circle(C64::default(), 1.1, 256);
        assert!((shape_distance(&a, &b) - 0.1).abs() < 1e-12);
        assert_eq!(shape_distance(&a, &a), 0.0);
        let t = circle(C64::new(0.2, 0.0), 1.0, 256);
        assert!(shape_distance(&a, &t) <= 0.2 + 1e-12);
    }

    #[test]
    fn csv_export_has_header_and_rows() {
        let c = circle(C64::default(), 2.0, 16);
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,x,y,nx,ny,weight"));
        assert_eq!(lines.count(), 16);
    }
}
