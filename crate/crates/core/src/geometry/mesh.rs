//! Parameter-space quadrature: trapezoidal rule for smooth closed curves and
//! composite Gauss-Legendre panels, dyadically graded toward corners.

use std::f64::consts::TAU;

use gauss_quad::GaussLegendre;

/// Gauss-Legendre nodes per panel.
pub const PANEL_ORDER: usize = 16;

#[derive(Debug, Clone)]
pub struct Mesh {
    /// Parameter values in `[0, 2π)`, increasing.
    pub params: Vec<f64>,
    /// Parameter-measure weights.
    pub weights: Vec<f64>,
}

pub fn trapezoid(n: usize) -> Mesh {
    let h = TAU / n as f64;
    Mesh {
        params: (0..n).map(|j| j as f64 * h).collect(),
        weights: vec![h; n],
    }
}

fn gauss_legendre() -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(PANEL_ORDER).expect("panel order >= 2");
    let mut pairs = rule.as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Panel edges for one smooth piece `[lo, hi]`, split into `panels` equal panels
/// with the two end panels subdivided `depth` times toward the endpoints.
fn piece_edges(lo: f64, hi: f64, panels: usize, depth: u32) -> Vec<f64> {
    let h = (hi - lo) / panels as f64;
    let mut edges: Vec<f64> = (0..=panels).map(|k| lo + k as f64 * h).collect();
    edges[panels] = hi;
    for k in 1..=depth {
        let s = h * 0.5f64.powi(k as i32);
        edges.push(lo + s);
        edges.push(hi - s);
    }
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * (hi - lo));
    edges
}

/// Composite panel rule on `[0, 2π)` with corners at the given parameters.
///
/// `base_panels` is split among the smooth pieces in proportion to their
/// parameter length (at least one panel each); corner nodes are never
/// quadrature nodes.
pub fn graded_panels(corners: &[f64], base_panels: usize, depth: u32) -> Mesh {
    let rule = gauss_legendre();
    let mut breaks: Vec<f64> = corners.iter().map(|c| c.rem_euclid(TAU)).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    if breaks.is_empty() {
        breaks.push(0.0);
    }
    let first = breaks[0];
    breaks.push(first + TAU);

    let mut params = Vec::new();
    let mut weights = Vec::new();
    for piece in breaks.windows(2) {
        let (lo, hi) = (piece[0], piece[1]);
        let share = ((hi - lo) / TAU * base_panels as f64).round() as usize;
        let edges = piece_edges(lo, hi, share.max(1), depth);
        for panel in edges.windows(2) {
            let (a, b) = (panel[0], panel[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for &(x, w) in &rule {
                params.push((mid + half * x).rem_euclid(TAU));
                weights.push(half * w);
            }
        }
    }
    // Keep parameter order when the first corner is not at 0.
    let mut order: Vec<usize> = (0..params.len()).collect();
    order.sort_by(|&i, &j| params[i].total_cmp(&params[j]));
    Mesh {
        params: order.iter().map(|&i| params[i]).collect(),
        weights: order.iter().map(|&i| weights[i]).collect(),
    }
}
