//! Experiment configuration: a JSON file overlaid by command-line flags.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use gptinv::conformal::ConformalMap;
use gptinv::forward::Material;
use gptinv::geometry::{ShapeKind, ShapeSpec};
use gptinv::inversion::ReconstructionOptions;
use gptinv::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_SVG_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    #[default]
    Nystrom,
    Analytic,
}

/// A built-in name, `random` (a seeded random conformal map), or a full shape object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShapeChoice {
    Name(String),
    Kind(ShapeKind),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub shape: Option<ShapeChoice>,
    pub nodes: usize,
    /// Grading depth toward corners.
    pub refinement: Option<u32>,
    pub sigma_c: Option<f64>,
    pub sigma_m: f64,
    pub ord: Vec<usize>,
    pub route: Route,
    pub tol: f64,
    pub max_iter: usize,
    pub out: PathBuf,
    pub seed: u64,
    /// Worker threads for sweeps; 0 uses every core.
    pub jobs: usize,
    pub svg_points: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let opts = ReconstructionOptions::default();
        Self {
            shape: None,
            nodes: 1024,
            refinement: None,
            sigma_c: None,
            sigma_m: opts.sigma_m,
            ord: Vec::new(),
            route: Route::default(),
            tol: opts.tol,
            max_iter: opts.max_iter,
            out: PathBuf::from("out"),
            seed: 0,
            jobs: 0,
            svg_points: DEFAULT_SVG_POINTS,
        }
    }
}

/// Flags shared by the subcommands; each one overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// JSON experiment config; flags override its values
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// kite, starfish, cap, perturbed_ellipse, disk or random
    #[arg(long)]
    pub shape: Option<String>,
    /// Inclusion conductivity (`inf` for a perfect conductor, 0 for an insulator)
    #[arg(long)]
    pub sigma_c: Option<f64>,
    /// Background conductivity
    #[arg(long)]
    pub sigma_m: Option<f64>,
    /// Truncation orders, comma separated
    #[arg(long, value_delimiter = ',')]
    pub ord: Option<Vec<usize>>,
    /// Boundary nodes (a power of two for smooth shapes)
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Grading depth toward corners
    #[arg(long)]
    pub refinement: Option<u32>,
    #[arg(long, value_enum)]
    pub route: Option<Route>,
    /// Relative step at which the lambda iteration stops
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps (0 = all cores)
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Seed for the random-map shape
    #[arg(long)]
    pub seed: Option<u64>,
    /// Points per SVG polyline
    #[arg(long)]
    pub svg_points: Option<usize>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = &self.shape {
            cfg.shape = Some(ShapeChoice::Name(s.clone()));
        }
        macro_rules! overlay {
            ($($field:ident),*) => { $( if let Some(v) = &self.$field { cfg.$field = v.clone(); } )* };
        }
        overlay!(sigma_m, ord, nodes, route, tol, max_iter, out, jobs, seed, svg_points);
        if self.sigma_c.is_some() {
            cfg.sigma_c = self.sigma_c;
        }
        if self.refinement.is_some() {
            cfg.refinement = self.refinement;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn load(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| gptinv::Error::Parse(format!("config {}: {e}", path.display())).into())
}

fn invalid(msg: String) -> anyhow::Error {
    gptinv::Error::InvalidInput(msg).into()
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if let Some(&k) = self.ord.iter().find(|&&k| k < 2) {
            return Err(invalid(format!("every order must be at least 2, got {k}")));
        }
        if !(self.tol > 0.0) || self.max_iter == 0 || !(self.sigma_m > 0.0) {
            return Err(invalid("tol, max_iter and sigma_m must be positive".into()));
        }
        if self.svg_points < 3 {
            return Err(invalid(format!("svg_points must be at least 3, got {}", self.svg_points)));
        }
        Ok(())
    }

    pub fn orders(&self) -> Result<Vec<usize>> {
        if self.ord.is_empty() {
            return Err(invalid("no truncation order given (--ord)".into()));
        }
        let mut ords = self.ord.clone();
        ords.sort_unstable();
        ords.dedup();
        Ok(ords)
    }

    pub fn material(&self) -> Result<Material> {
        let sigma_c = self.sigma_c.ok_or_else(|| invalid("no inclusion conductivity given (--sigma-c)".into()))?;
        Ok(Material::new(sigma_c, self.sigma_m)?)
    }

    pub fn reconstruction_options(&self) -> ReconstructionOptions {
        ReconstructionOptions { tol: self.tol, max_iter: self.max_iter, sigma_m: self.sigma_m, ..Default::default() }
    }

    pub fn shape_kind(&self) -> Result<Option<ShapeKind>> {
        Ok(match &self.shape {
            None => None,
            Some(ShapeChoice::Kind(k)) => Some(k.clone()),
            Some(ShapeChoice::Name(n)) if n == "random" => Some(ShapeKind::FromConformal { map: random_map(self.seed) }),
            Some(ShapeChoice::Name(n)) => Some(ShapeKind::from_name(n)?),
        })
    }

    pub fn require_shape(&self) -> Result<ShapeKind> {
        self.shape_kind()?.ok_or_else(|| invalid("no shape given (--shape)".into()))
    }

    pub fn shape_spec(&self, kind: ShapeKind) -> ShapeSpec {
        ShapeSpec { kind, nodes: self.nodes, refinement: self.refinement }
    }
}

/// Conformal map of a shape when it is known in closed form.
pub fn known_map(kind: &ShapeKind) -> Option<ConformalMap> {
    match kind {
        ShapeKind::Disk { center, radius } => ConformalMap::disk(C64::new(center[0], center[1]), *radius).ok(),
        ShapeKind::FromConformal { map } => Some(map.clone()),
        _ => None,
    }
}

/// Three coefficients with `|a_n| ≤ 0.3γ^{n+1}/(n+1)²`, `γ ∈ [0.5, 1.5]`, `|a₀| ≤ 0.5`:
/// maps whose finite sections make analytic roundtrips exact to roundoff.
pub fn random_map(seed: u64) -> ConformalMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma: f64 = rng.random_range(0.5..1.5);
    let a0 = C64::from_polar(rng.random_range(0.0..0.5), rng.random_range(0.0..TAU));
    let coeffs = (1..=3)
        .map(|n| {
            let bound = 0.3 * gamma.powi(n + 1) / f64::from((n + 1) * (n + 1));
            C64::from_polar(rng.random_range(0.0..bound), rng.random_range(0.0..TAU))
        })
        .collect();
    ConformalMap::new(gamma, a0, coeffs).expect("gamma is positive and coefficients finite")
}
