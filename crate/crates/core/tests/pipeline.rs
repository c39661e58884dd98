//! End-to-end behaviour on the built-in shapes: discretization, forward solves and reconstruction.

use gptinv::conformal::{map_boundary, ConformalMap};
use gptinv::forward::{assemble_np, gpt_analytic, gpt_nystrom, Material};
use gptinv::geometry::{is_star_shaped, make_curve, shape_distance, BoundaryCurve, ShapeKind, ShapeSpec};
use gptinv::inversion::{reconstruct, ReconstructionOptions, ReconstructionResult};
use gptinv::{linalg, C64};

fn curve(kind: ShapeKind, nodes: usize) -> BoundaryCurve {
    make_curve(&ShapeSpec::new(kind, nodes)).unwrap()
}

fn reference_shapes() -> [(ShapeKind, f64, Vec<usize>); 4] {
    [
        (ShapeKind::Kite, 3.0, vec![2, 5, 10]),
        (ShapeKind::Starfish, 0.8, vec![2, 5, 10, 25]),
        (ShapeKind::Cap, 0.5, vec![2, 5, 10, 20]),
        (ShapeKind::PerturbedEllipse, 3.0, vec![2, 5, 10, 25]),
    ]
}

fn sweep(kind: &ShapeKind, sigma_c: f64, ords: &[usize]) -> Vec<ReconstructionResult> {
    let c = curve(kind.clone(), 1024);
    let g = gpt_nystrom(&c, &Material::new(sigma_c, 1.0).unwrap(), *ords.last().unwrap()).unwrap();
    ords.iter().map(|&k| reconstruct(&g.leading(k).unwrap(), &ReconstructionOptions::default()).unwrap()).collect()
}

#[test]
fn arclength_converges_under_doubling() {
    for kind in [ShapeKind::Kite, ShapeKind::Starfish] {
        let (a, b) = (curve(kind.clone(), 256).length(), curve(kind, 512).length());
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
    for kind in [ShapeKind::Cap, ShapeKind::PerturbedEllipse] {
        let (a, b) = (curve(kind.clone(), 512).length(), curve(kind, 1024).length());
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}

#[test]
fn nystrom_operator_converges_under_doubling() {
    let (coarse, fine) = (curve(ShapeKind::Kite, 256), curve(ShapeKind::Kite, 512));
    let f = |z: C64| (z * z).re + z.im;
    let apply = |c: &BoundaryCurve| assemble_np(c).unwrap().apply(&c.nodes().iter().map(|&z| f(z)).collect::<Vec<_>>());
    let (a, b) = (apply(&coarse), apply(&fine));
    // node j of the coarse grid is node 2j of the fine one
    let worst = a.iter().enumerate().map(|(j, v)| (v - b[2 * j]).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn perturbed_ellipse_is_star_shaped_about_its_recovered_center() {
    let r = &sweep(&ShapeKind::PerturbedEllipse, 3.0, &[10])[0];
    assert!(is_star_shaped(&curve(ShapeKind::PerturbedEllipse, 1024), r.map_rec.a0()).unwrap());
}

/// The cap's first piece leaves the corner at `(−√2π/4, 0)` horizontally, so the curve is
/// star-shaped only about centres on or below that tangent line. The recovered `a₀` lies
/// slightly above it; the failure is confined to a short arc next to the corner.
#[test]
fn cap_star_shape_fails_only_at_its_tangential_corner() {
    let r = &sweep(&ShapeKind::Cap, 0.5, &[10])[0];
    let a0 = r.map_rec.a0();
    let cap = curve(ShapeKind::Cap, 1024);
    assert!(a0.im > 0.0);
    assert!(!is_star_shaped(&cap, a0).unwrap());
    let n = cap.len();
    let z = cap.nodes();
    for j in 0..n {
        if ((z[(j + 1) % n] - a0) / (z[j] - a0)).arg() <= 0.0 {
            assert!((z[j] - C64::new(-std::f64::consts::SQRT_2 * std::f64::consts::PI / 4.0, 0.0)).norm() < 0.05);
        }
    }
    assert!(is_star_shaped(&cap, C64::new(a0.re, 0.0)).unwrap());
}

#[test]
fn reconstruction_error_does_not_grow_with_order() {
    for (kind, sigma_c, ords) in reference_shapes() {
        let truth = curve(kind.clone(), 4096);
        let distances: Vec<f64> = sweep(&kind, sigma_c, &ords)
            .iter()
            .map(|r| shape_distance(&truth, &map_boundary(&r.map_rec, 4096, r.ord).unwrap()))
            .collect();
        assert!(distances.windows(2).all(|w| w[1] <= w[0]), "{}: {distances:?}", kind.name());
    }
}

#[test]
fn conformal_radius_does_not_depend_on_the_sign_of_the_contrast() {
    let c = curve(ShapeKind::Kite, 512);
    let gamma = |lambda: f64| {
        let g = gpt_nystrom(&c, &Material::from_lambda(lambda, 1.0).unwrap(), 10).unwrap();
        reconstruct(&g, &ReconstructionOptions::default()).unwrap().map_rec.gamma()
    };
    let (a, b) = (gamma(2.0), gamma(-2.0));
    assert!((a - b).abs() < 1e-3 * a, "{a} vs {b}");
}

#[test]
fn swelling_converges_linearly() {
    let map = ConformalMap::joukowski(1.0, C64::new(0.4, 0.1)).unwrap();
    let mat = Material::from_lambda(1.5, 1.0).unwrap();
    let base = gpt_analytic(&map, &mat, 6).unwrap();
    let errors: Vec<f64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|eps| {
            let g = gpt_analytic(&map.with_gamma(1.0 + eps).unwrap(), &mat, 6).unwrap();
            linalg::max_abs(&(g.n2() - base.n2())).max(linalg::max_abs(&(g.n1() - base.n1())))
        })
        .collect();
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((5.0..20.0).contains(&ratio), "{errors:?}");
    }
}
