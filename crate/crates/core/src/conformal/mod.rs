//! Exterior conformal maps and the quantities generated from them by
//! recursion: Faber polynomials, Grunsky coefficients and diagonal scalings.

mod faber;
mod grunsky;
mod map;

pub use faber::{faber_matrix, FaberMatrix};
pub(crate) use faber::faber_from_coeffs;
pub use grunsky::{grunsky_tables, GrunskyTables};
pub use map::ConformalMap;

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryCurve, Smoothness};
use crate::linalg::{self, CMatrix};
use crate::C64;

/// Diagonal matrices indexed by `n = 1..M`.
#[derive(Debug, Clone, Copy)]
pub struct Scaling {
    gamma: f64,
    order: usize,
}

pub fn scaling_matrices(gamma: f64, order: usize) -> Result<Scaling> {
    if !(gamma.is_finite() && gamma > 0.0) || order < 1 {
        return Err(Error::InvalidInput(format!(
            "scaling needs gamma > 0 and order >= 1 (got {gamma}, {order})"
        )));
    }
    Ok(Scaling { gamma, order })
}

impl Scaling {
    fn build(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        linalg::diag((1..=self.order).map(|n| f(n as f64)))
    }

    /// `diag(γ^{k·n})`.
    pub fn gamma_pow(&self, k: i32) -> CMatrix {
        let g = self.gamma;
        self.build(|n| g.powf(k as f64 * n))
    }

    /// `diag(n^p)`.
    pub fn n_pow(&self, p: f64) -> CMatrix {
        self.build(|n| n.powf(p))
    }

    pub fn gamma_n(&self) -> CMatrix {
        self.gamma_pow(1)
    }

    pub fn gamma_neg_n(&self) -> CMatrix {
        self.gamma_pow(-1)
    }

    pub fn gamma_2n(&self) -> CMatrix {
        self.gamma_pow(2)
    }

    pub fn gamma_neg_2n(&self) -> CMatrix {
        self.gamma_pow(-2)
    }

    pub fn n_half(&self) -> CMatrix {
        self.n_pow(0.5)
    }

    pub fn n_neg_half(&self) -> CMatrix {
        self.n_pow(-0.5)
    }

    pub fn n(&self) -> CMatrix {
        self.n_pow(1.0)
    }

    pub fn n_inv(&self) -> CMatrix {
        self.n_pow(-1.0)
    }
}

/// Image of `n_points` equispaced points of `|w| = γ` under `Ψ` truncated after `a_truncation`.
pub fn map_boundary(map: &ConformalMap, n_points: usize, truncation: usize) -> Result<BoundaryCurve> {
    if n_points < 3 {
        return Err(Error::InvalidInput(format!(
            "map_boundary needs at least 3 points, got {n_points}"
        )));
    }
    if truncation > map.order() {
        return Err(Error::InvalidInput(format!(
            "truncation {truncation} exceeds the {} stored coefficients",
            map.order()
        )));
    }
    let psi = map.truncated(truncation);
    let h = TAU / n_points as f64;
    let mut params = Vec::with_capacity(n_points);
    let mut samples = Vec::with_capacity(n_points);
    for j in 0..n_points {
        let t = j as f64 * h;
        let w = C64::from_polar(map.gamma(), t);
        let iw = C64::i() * w;
        let d1 = psi.derivative(w);
        samples.push((psi.eval(w), d1 * iw, psi.second_derivative(w) * iw * iw - d1 * w));
        params.push(t);
    }
    BoundaryCurve::from_samples(params, samples, vec![h; n_points], Smoothness::Analytic)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_diagonals() {
        let s = scaling_matrices(2.0, 3).unwrap();
        assert_eq!(s.gamma_n(), linalg::diag([2.0, 4.0, 8.0]));
        assert_eq!(s.gamma_neg_2n(), linalg::diag([0.25, 1.0 / 16.0, 1.0 / 64.0]));
        assert_eq!(s.n(), linalg::diag([1.0, 2.0, 3.0]));
        let unit = scaling_matrices(1.0, 5).unwrap();
        assert_eq!(unit.gamma_n(), CMatrix::identity(5, 5));
        assert!(scaling_matrices(0.0, 3).is_err());
        assert!(scaling_matrices(1.0, 0).is_err());
    }

    #[test]
    fn g_is_conjugated_c() {
        let map = ConformalMap::new(
            1.4,
            C64::new(-0.3, 0.2),
            vec![C64::new(0.3, -0.2), C64::new(0.1, 0.1), C64::new(0.0, -0.05)],
        )
        .unwrap();
        let t = grunsky_tables(&map, 7).unwrap();
        let s = scaling_matrices(map.gamma(), 7).unwrap();
        let g = s.n_neg_half() * s.gamma_neg_n() * t.c() * s.gamma_neg_n() * s.n_half();
        assert!(linalg::max_abs(&(g - t.g())) < 1e-14);
    }

    #[test]
    fn unit_disk_boundary_points() {
        let d = ConformalMap::disk(C64::default(), 1.0).unwrap();
        let c = map_boundary(&d, 4, 1).unwrap();
        let expected = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)];
        for (z, e) in c.nodes().iter().zip(expected) {
            assert!((z - e).norm() < 1e-15);
        }
        assert!(map_boundary(&d, 2, 1).is_err());
        assert!(map_boundary(&d, 8, 2).is_err());
    }

    #[test]
    fn translated_disk_boundary() {
        let d = ConformalMap::disk(C64::new(2.0, 0.0), 1.0).unwrap();
        let c = map_boundary(&d, 16, 1).unwrap();
        assert!(c.nodes().iter().all(|z| ((z - 2.0).norm() - 1.0).abs() < 1e-14));
    }

    #[test]
    fn joukowski_boundary_is_an_ellipse() {
        let j = ConformalMap::joukowski(1.0, C64::new(0.5, 0.0)).unwrap();
        let c = map_boundary(&j, 64, 1).unwrap();
        for (z, t) in c.nodes().iter().zip(c.params()) {
            let w = C64::from_polar(1.0, *t);
            assert!((z - (w + 0.5 / w)).norm() < 1e-14);
            assert!(((z.re / 1.5).powi(2) + (z.im / 0.5).powi(2) - 1.0).abs() < 1e-13);
        }
    }
}
