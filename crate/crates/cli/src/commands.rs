//! The four subcommands. Outputs are written under the configured directory
//! and depend only on the configuration, never on timing or thread count.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use gptinv::conformal::map_boundary;
use gptinv::forward::{gpt_analytic, gpt_nystrom, GptSet, Material};
use gptinv::geometry::{make_curve, shape_distance, ShapeKind, ShapeSpec};
use gptinv::inversion::{reconstruct, HalfGpts, ReconstructionResult, DEFAULT_CONDITION_CAP};
use gptinv::C64;
use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{known_map, ExperimentConfig, Route};
use crate::svg::{self, Curve};

/// Sampling of the true boundary when measuring reconstruction error.
const DISTANCE_NODES: usize = 4096;

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))
}

fn write(path: PathBuf, contents: impl AsRef<[u8]>) -> Result<PathBuf> {
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn forward_gpts(cfg: &ExperimentConfig, kind: &ShapeKind, mat: &Material, ord: usize) -> Result<GptSet> {
    Ok(match cfg.route {
        Route::Nystrom => {
            let curve = make_curve(&cfg.shape_spec(kind.clone()))?;
            info!("{}: {} quadrature nodes", kind.name(), curve.len());
            gpt_nystrom(&curve, mat, ord)?
        }
        Route::Analytic => {
            let map = known_map(kind).ok_or_else(|| {
                gptinv::Error::InvalidInput(format!(
                    "the analytic route needs a shape with a known conformal map (disk, random or from_conformal), not `{}`",
                    kind.name()
                ))
            })?;
            gpt_analytic(&map, mat, ord)?
        }
    })
}

fn write_gpts(dir: &Path, gpts: &GptSet) -> Result<(PathBuf, PathBuf)> {
    let json = write(dir.join("gpts.json"), gpts.to_json()?)?;
    let mut csv = Vec::new();
    gpts.write_csv(&mut csv)?;
    Ok((json, write(dir.join("gpts.csv"), csv)?))
}

pub fn forward(cfg: &ExperimentConfig) -> Result<()> {
    let kind = cfg.require_shape()?;
    let mat = cfg.material()?;
    let ord = *cfg.orders()?.last().expect("orders are nonempty");
    let gpts = forward_gpts(cfg, &kind, &mat, ord)?;
    match HalfGpts::new(&gpts, DEFAULT_CONDITION_CAP) {
        Ok(h) => info!("scaled N2 condition number {:.3e}", h.n2_condition()),
        Err(e) => warn!("{e}"),
    }
    info!(
        "N1 symmetry residual {:.2e}, N2 Hermitian residual {:.2e}",
        gpts.n1_symmetry_residual(),
        gpts.n2_hermitian_residual()
    );
    create_dir(&cfg.out)?;
    let (json, csv) = write_gpts(&cfg.out, &gpts)?;
    let n11 = gpts.n2()[(0, 0)];
    println!("{} ord {ord} lambda {}: N2_11 = {:.10} {:+.3e}i", kind.name(), mat.lambda(), n11.re, n11.im);
    println!(
        "N1 symmetry residual {:.2e}, N2 Hermitian residual {:.2e}",
        gpts.n1_symmetry_residual(),
        gpts.n2_hermitian_residual()
    );
    println!("wrote {} and {}", json.display(), csv.display());
    Ok(())
}

fn read_gpts(path: &Path) -> Result<GptSet> {
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let file = || fs::File::open(path).with_context(|| format!("opening {}", path.display()));
    let gpts = if is_csv {
        GptSet::read_csv(file()?)
    } else {
        let text = std::io::read_to_string(file()?).with_context(|| format!("reading {}", path.display()))?;
        GptSet::from_json(&text)
    };
    gpts.with_context(|| format!("loading GPTs from {}", path.display()))
}

/// Result JSON, λ trace CSV and SVG overlay for one order.
fn write_reconstruction(
    dir: &Path,
    result: &ReconstructionResult,
    truth: Option<&[C64]>,
    svg_points: usize,
) -> Result<()> {
    let k = result.ord;
    write(dir.join(format!("result_ord{k}.json")), serde_json::to_string_pretty(result)?)?;
    let mut trace = csv::Writer::from_writer(Vec::new());
    trace.write_record(["iteration", "relative_step"])?;
    for (i, step) in result.residual_trace.iter().enumerate() {
        trace.write_record([(i + 1).to_string(), step.to_string()])?;
    }
    write(dir.join(format!("lambda_trace_ord{k}.csv")), trace.into_inner()?)?;

    let recovered = map_boundary(&result.map_rec, svg_points, k)?;
    let mut curves = Vec::new();
    if let Some(points) = truth {
        curves.push(Curve { label: "target", points, stroke: "black", dashed: false });
    }
    curves.push(Curve { label: "recovered", points: recovered.nodes(), stroke: "red", dashed: true });
    let title = format!("Ord = {k}, lambda_rec = {:.4}", result.lambda_rec);
    write(dir.join(format!("overlay_ord{k}.svg")), svg::overlay(&title, &curves))?;
    Ok(())
}

pub fn invert(file: &Path, cfg: &ExperimentConfig) -> Result<()> {
    let gpts = read_gpts(file)?;
    let orders = if cfg.ord.is_empty() { vec![gpts.ord()] } else { cfg.orders()? };
    let truth = cfg.shape_kind()?.map(|k| k.outline(cfg.svg_points));
    let opts = cfg.reconstruction_options();
    create_dir(&cfg.out)?;
    for k in orders {
        let result = reconstruct(&gpts.leading(k)?, &opts)?;
        write_reconstruction(&cfg.out, &result, truth.as_deref(), cfg.svg_points)?;
        println!(
            "ord {k}: lambda_rec = {:.6}, sigma_rec = {}, gamma = {:.6}, a0 = {:.6}, iterations = {}",
            result.lambda_rec,
            result.sigma_rec.map_or("inf".to_string(), |s| format!("{s:.6}")),
            result.map_rec.gamma(),
            result.map_rec.a0(),
            result.iterations
        );
    }
    println!("wrote results to {}", cfg.out.display());
    Ok(())
}

#[derive(Serialize)]
struct RoundtripRow {
    ord: usize,
    lambda_true: f64,
    lambda_rec: f64,
    abs_error: f64,
    gamma_rec: f64,
    shape_distance: f64,
    iterations: usize,
    damped: bool,
}

pub fn roundtrip(cfg: &ExperimentConfig) -> Result<()> {
    let kind = cfg.require_shape()?;
    let mat = cfg.material()?;
    let orders = cfg.orders()?;
    let top = *orders.last().expect("orders are nonempty");
    create_dir(&cfg.out)?;

    let start = Instant::now();
    let gpts = forward_gpts(cfg, &kind, &mat, top)?;
    let forward_secs = start.elapsed().as_secs_f64();
    write_gpts(&cfg.out, &gpts)?;
    let truth = make_curve(&ShapeSpec::new(kind.clone(), DISTANCE_NODES))?;
    let outline = kind.outline(cfg.svg_points);
    let opts = cfg.reconstruction_options();

    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build()?;
    let rows: Vec<(RoundtripRow, f64)> = pool.install(|| {
        orders
            .par_iter()
            .map(|&k| -> Result<(RoundtripRow, f64)> {
                let t = Instant::now();
                let result = reconstruct(&gpts.leading(k)?, &opts)?;
                let recovered = map_boundary(&result.map_rec, DISTANCE_NODES, k)?;
                let distance = shape_distance(&truth, &recovered);
                write_reconstruction(&cfg.out, &result, Some(&outline), cfg.svg_points)?;
                let row = RoundtripRow {
                    ord: k,
                    lambda_true: mat.lambda(),
                    lambda_rec: result.lambda_rec,
                    abs_error: (result.lambda_rec - mat.lambda()).abs(),
                    gamma_rec: result.map_rec.gamma(),
                    shape_distance: distance,
                    iterations: result.iterations,
                    damped: result.damped,
                };
                Ok((row, t.elapsed().as_secs_f64()))
            })
            .collect::<Result<_>>()
    })?;

    let mut table = csv::Writer::from_writer(Vec::new());
    for (row, _) in &rows {
        table.serialize(row)?;
    }
    let path = write(cfg.out.join("roundtrip.csv"), table.into_inner()?)?;

    println!("{} lambda {} ({:?} forward, {forward_secs:.2}s)", kind.name(), mat.lambda(), cfg.route);
    println!("{:>4} {:>12} {:>10} {:>10} {:>6} {:>9}", "ord", "lambda_rec", "|error|", "distance", "iters", "time[s]");
    for (r, secs) in &rows {
        println!(
            "{:>4} {:>12.6} {:>10.2e} {:>10.2e} {:>6} {:>9.3}",
            r.ord, r.lambda_rec, r.abs_error, r.shape_distance, r.iterations, secs
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

pub fn shapes(out: Option<&Path>, nodes: usize) -> Result<()> {
    for name in ShapeKind::BUILTIN {
        let kind = ShapeKind::from_name(name)?;
        let corners = kind.corners();
        let note = if corners.is_empty() {
            "smooth; node count must be a power of two".to_string()
        } else {
            format!("piecewise smooth, {} pieces; panels graded toward each junction", corners.len())
        };
        println!("{name:<18} {note}");
        if let Some(dir) = out {
            create_dir(dir)?;
            let curve = make_curve(&ShapeSpec::new(kind.clone(), nodes))?;
            let mut buf = Vec::new();
            curve.write_csv(&mut buf)?;
            write(dir.join(format!("{name}.csv")), buf)?;
            let outline = kind.outline(crate::config::DEFAULT_SVG_POINTS);
            let svg = svg::overlay(name, &[Curve { label: name, points: &outline, stroke: "black", dashed: false }]);
            write(dir.join(format!("{name}.svg")), svg)?;
        }
    }
    println!("{:<18} seeded random conformal map (--seed)", "random");
    println!("{:<18} disk of radius 1 at the origin; other disks via a config shape object", "disk");
    Ok(())
}
