//! Command implementations. Each command parses its flags, delegates to
//! one library operation, and renders one CSV report (header row first,
//! `#`-prefixed summary lines last). Identical command, config and seed
//! produce byte-identical output.

use crate::files::{RunConfig, SurfaceFile};
use engel::algebra::StructureCoefficients;
use engel::density::{
    box_ball_lambda, divergence_probe, federer_density, gamma_expansion, spherical_factor,
    HomogeneousPlane,
};
use engel::error::EngelError;
use engel::metric::{sampled_diameter, triangle_defect_sampler};
use engel::quad::{stokes_check, QuadratureSpec};
use engel::surface::SurfaceChart;
use std::collections::BTreeMap;

/// Which library operation each command drives; the acceptance suite
/// checks the mapping stays one-to-one.
pub const COMMAND_OPERATIONS: &[(&str, &[&str])] = &[
    ("degree", &["surface_degree"]),
    ("beta", &["spherical_factor"]),
    ("density", &["federer_density"]),
    ("stokes", &["stokes_check"]),
    ("blowup", &["gamma_expansion"]),
    ("diverge", &["divergence_probe"]),
    (
        "residuals",
        &["degree_constraint_residuals", "horizontality_residual"],
    ),
    (
        "check-distance",
        &["triangle_defect_sampler", "box_ball_lambda"],
    ),
];

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<EngelError> for CliError {
    fn from(e: EngelError) -> Self {
        let code = match e {
            EngelError::NewtonDiverged { .. } | EngelError::QuadratureNonconvergent { .. } => 3,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// `--key value` flags after the subcommand name.
pub struct Flags {
    values: BTreeMap<String, String>,
}

impl Flags {
    pub fn parse(args: &[String]) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            let key = arg
                .strip_prefix("--")
                .ok_or_else(|| CliError::validation(format!("expected a --flag, got `{arg}`")))?;
            let value = it
                .next()
                .ok_or_else(|| CliError::validation(format!("flag --{key} needs a value")))?;
            values.insert(key.to_string(), value.clone());
        }
        Ok(Flags { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn number<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(text) => text
                .parse::<T>()
                .map_err(|_| CliError::validation(format!("bad value for --{key}: `{text}`"))),
        }
    }

    pub fn point(&self, key: &str, default: [f64; 2]) -> Result<[f64; 2], CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(text) => {
                let parts: Vec<&str> = text.split(',').collect();
                if parts.len() != 2 {
                    return Err(CliError::validation(format!(
                        "--{key} expects `a,b`, got `{text}`"
                    )));
                }
                let a = parts[0].trim().parse().map_err(|_| {
                    CliError::validation(format!("bad coordinate in --{key}: `{text}`"))
                })?;
                let b = parts[1].trim().parse().map_err(|_| {
                    CliError::validation(format!("bad coordinate in --{key}: `{text}`"))
                })?;
                Ok([a, b])
            }
        }
    }

    pub fn list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(text) => text
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::validation(format!("bad entry in --{key}: `{s}`")))
                })
                .collect(),
        }
    }

    fn known(&self, allowed: &[&str]) -> Result<(), CliError> {
        for key in self.values.keys() {
            if !allowed.contains(&key.as_str()) && !GLOBAL_FLAGS.contains(&key.as_str()) {
                return Err(CliError::validation(format!("unknown flag --{key}")));
            }
        }
        Ok(())
    }
}

const GLOBAL_FLAGS: &[&str] = &[
    "config", "seed", "out", "kappa3", "kappa4", "tol", "mesh", "levels",
];

/// Builds the effective config: defaults, then `--config`, then the
/// `ENGEL_SEED` environment variable, then explicit flags.
pub fn effective_config(flags: &Flags) -> Result<RunConfig, CliError> {
    let mut cfg = match flags.get("config") {
        Some(path) => RunConfig::load(path).map_err(CliError::validation)?,
        None => RunConfig::default(),
    };
    if flags.get("seed").is_none() {
        if let Ok(env_seed) = std::env::var("ENGEL_SEED") {
            cfg.seed = env_seed
                .parse()
                .map_err(|_| CliError::validation("ENGEL_SEED must be an integer"))?;
        }
    }
    cfg.seed = flags.number("seed", cfg.seed)?;
    cfg.kappa3 = flags.number("kappa3", cfg.kappa3)?;
    cfg.kappa4 = flags.number("kappa4", cfg.kappa4)?;
    cfg.zero_tol = flags.number("tol", cfg.zero_tol)?;
    cfg.base_mesh = flags.number("mesh", cfg.base_mesh)?;
    cfg.levels = flags.number("levels", cfg.levels)?;
    if let Some(out) = flags.get("out") {
        cfg.out = Some(out.to_string());
    }
    cfg.validate().map_err(CliError::validation)?;
    Ok(cfg)
}

fn load_chart(flags: &Flags, cfg: &RunConfig) -> Result<(SurfaceFile, SurfaceChart), CliError> {
    let path = flags
        .get("surface")
        .ok_or_else(|| CliError::validation("missing --surface <file.json>"))?;
    let file = SurfaceFile::load(path).map_err(CliError::validation)?;
    let chart = file.chart(cfg.zero_tol).map_err(CliError::validation)?;
    Ok((file, chart))
}

fn fmt(x: f64) -> String {
    // shortest round-trip formatting keeps reports stable across runs
    format!("{x}")
}

pub fn cmd_degree(flags: &Flags) -> Result<String, CliError> {
    flags.known(&["surface", "grid"])?;
    let cfg = effective_config(flags)?;
    let (_, chart) = load_chart(flags, &cfg)?;
    let grid: usize = flags.number("grid", 33)?;
    let report = chart.surface_degree(grid)?;
    let mut out = String::from("u1,u2,degree\n");
    for u in chart.domain.grid(grid) {
        // re-deriving per point keeps the row order grid-major
        let d = if chart.is_poly() {
            let ur = [
                engel::scalar::Rational::from_float(u[0]).unwrap(),
                engel::scalar::Rational::from_float(u[1]).unwrap(),
            ];
            chart.pointwise_degree_exact(&ur)?
        } else {
            chart.pointwise_degree_f64(u)?
        };
        out.push_str(&format!("{},{},{}\n", fmt(u[0]), fmt(u[1]), d));
    }
    out.push_str(&format!(
        "# degree={} singular_count={}\n",
        report.degree,
        report.singular.len()
    ));
    Ok(out)
}

pub fn cmd_beta(flags: &Flags) -> Result<String, CliError> {
    flags.known(&["plane", "refine", "xi12", "xi13", "xi23"])?;
    let cfg = effective_config(flags)?;
    let plane_text = flags.get("plane").unwrap_or("e2,e3");
    let plane = HomogeneousPlane::parse(plane_text)?;
    let refine: u32 = flags.number("refine", 3)?;
    if refine == 0 || refine > 8 {
        return Err(CliError::validation("--refine must be in 1..=8"));
    }
    let norm = cfg.norm().map_err(CliError::validation)?;
    let xi = StructureCoefficients::new(
        flags.number("xi12", 1.0)?,
        flags.number("xi13", 1.0)?,
        flags.number("xi23", 0.0)?,
    )?;
    let spec = QuadratureSpec::default()
        .with_mesh(16usize << refine, 2)
        .with_seed(cfg.seed);
    let beta = spherical_factor(&norm, &xi, plane, &spec);
    let mut out =
        String::from("plane,beta,center1,center2,center3,center4,refinement_delta,grid_value\n");
    out.push_str(&format!(
        "e{}e{},{},{},{},{},{},{},{}\n",
        plane.i + 1,
        plane.j + 1,
        fmt(beta.value),
        fmt(beta.center[0]),
        fmt(beta.center[1]),
        fmt(beta.center[2]),
        fmt(beta.center[3]),
        fmt(beta.refinement_delta),
        fmt(beta.grid_value),
    ));
    Ok(out)
}

pub fn cmd_density(flags: &Flags) -> Result<String, CliError> {
    flags.known(&["surface", "point", "degree", "radii"])?;
    let cfg = effective_config(flags)?;
    let (file, chart) = load_chart(flags, &cfg)?;
    let default_point = file.points.first().copied().unwrap_or([0.0, 0.0]);
    let point = flags.point("point", default_point)?;
    let degree: u32 = match flags.get("degree") {
        Some(_) => flags.number("degree", 0)?,
        None => chart.pointwise_degree_f64(point)?,
    };
    let radii = flags.list("radii", &[0.2, 0.15, 0.1, 0.075, 0.05])?;
    let norm = cfg.norm().map_err(CliError::validation)?;
    let est = federer_density(&chart, &norm, point, degree, &radii, &cfg.quadrature())?;
    let mut out = String::from("radius,centered,maximized,argmax1,argmax2,argmax3,argmax4\n");
    for q in &est.per_radius {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt(q.r),
            fmt(q.centered),
            fmt(q.maximized),
            fmt(q.argmax[0]),
            fmt(q.argmax[1]),
            fmt(q.argmax[2]),
            fmt(q.argmax[3]),
        ));
    }
    out.push_str(&format!(
        "# limit={} error={} degree={}\n",
        fmt(est.limit),
        fmt(est.error),
        degree
    ));
    Ok(out)
}

pub fn cmd_stokes(flags: &Flags) -> Result<String, CliError> {
    flags.known(&["surface", "radius", "radii", "center"])?;
    let cfg = effective_config(flags)?;
    let (_, chart) = load_chart(flags, &cfg)?;
    let center = flags.point("center", [0.0, 0.0])?;
    let radii = match flags.get("radii") {
        Some(_) => flags.list("radii", &[])?,
        None => vec![flags.number("radius", 0.25)?],
    };
    let spec = cfg.quadrature();
    let mut out = String::from(
        "radius,line,line_error,surface,surface_error,defect,combined_error,normalized_ratio\n",
    );
    for &r in &radii {
        let rep = stokes_check(&chart, center, r, &spec)?;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt(rep.radius),
            fmt(rep.line),
            fmt(rep.line_error),
            fmt(rep.surface),
            fmt(rep.surface_error),
            fmt(rep.defect),
            fmt(rep.combined_error),
            fmt(rep.normalized_ratio),
        ));
    }
    Ok(out)
}

pub fn cmd_blowup(flags: &Flags) -> Result<String, CliError> {
    flags.known(&["surface", "point", "lambdas", "directions", "scale"])?;
    let cfg = effective_config(flags)?;
    let (file, chart) = load_chart(flags, &cfg)?;
    let default_point = file.points.first().copied().unwrap_or([0.0, 0.0]);
    let point = flags.point("point", default_point)?;
    let lambdas: usize = flags.number("lambdas", 8)?;
    let directions: usize = flags.number("directions", 8)?;
    let scale: f64 = flags.number("scale", 0.4)?;
    let fits = gamma_expansion(&chart, point, lambdas, directions, scale)?;
    let mut out = String::from(
        "component,required_degree,is_graph,exponent,fit_residual,graph_error,exact_zero\n",
    );
    for f in &fits {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            f.component + 1,
            f.required_degree,
            f.is_graph,
            fmt(f.exponent),
            fmt(f.fit_residual),
            fmt(f.graph_error),
            f.exact_zero,
        ));
    }
    Ok(out)
}

pub fn cmd_diverge(flags: &Flags) -> Result<String, CliError> {
    flags.known(&["surface", "point", "beta", "radii"])?;
    let cfg = effective_config(flags)?;
    let (file, chart) = load_chart(flags, &cfg)?;
    let default_point = file.points.first().copied().unwrap_or([0.0, 0.0]);
    let point = flags.point("point", default_point)?;
    let beta: f64 = flags.number("beta", f64::NAN).and_then(|b: f64| {
        if b.is_nan() {
            Err(CliError::validation("missing --beta <exponent>"))
        } else {
            Ok(b)
        }
    })?;
    let radii = flags.list(
        "radii",
        &(3..=9).map(|k| 0.5f64.powi(k)).collect::<Vec<_>>(),
    )?;
    let norm = cfg.norm().map_err(CliError::validation)?;
    let rep = divergence_probe(&chart, &norm, point, beta, &radii, &cfg.quadrature())?;
    let mut out = String::from("radius,mu\n");
    for &(r, mu) in &rep.per_radius {
        out.push_str(&format!("{},{}\n", fmt(r), fmt(mu)));
    }
    out.push_str(&format!(
        "# area_slope={} ratio_slope={} beta={}\n",
        fmt(rep.area_slope),
        fmt(rep.ratio_slope),
        fmt(beta)
    ));
    Ok(out)
}

pub fn cmd_residuals(flags: &Flags) -> Result<String, CliError> {
    flags.known(&["surface", "grid"])?;
    let cfg = effective_config(flags)?;
    let (_, chart) = load_chart(flags, &cfg)?;
    let grid: usize = flags.number("grid", 33)?;
    let res = chart.degree_constraint_residuals(grid)?;
    let hor = chart.horizontality_residual(grid)?;
    let mut out = String::from("c14,c24,c34,c13,c23,horizontality\n");
    out.push_str(&format!(
        "{},{},{},{},{},{}\n",
        fmt(res.c14),
        fmt(res.c24),
        fmt(res.c34),
        fmt(res.c13),
        fmt(res.c23),
        fmt(hor),
    ));
    Ok(out)
}

pub fn cmd_check_distance(flags: &Flags) -> Result<String, CliError> {
    flags.known(&["samples", "xi12", "xi13", "xi23"])?;
    let cfg = effective_config(flags)?;
    let samples: usize = flags.number("samples", 1_000_000)?;
    let norm = cfg.norm().map_err(CliError::validation)?;
    let xi = StructureCoefficients::new(
        flags.number("xi12", 1.0)?,
        flags.number("xi13", 1.0)?,
        flags.number("xi23", 0.0)?,
    )?;
    let defect = triangle_defect_sampler(&norm, &xi, samples, cfg.seed);
    let lambda = box_ball_lambda(&norm, &xi, (samples / 10).max(1_000), cfg.seed);
    let diameter = sampled_diameter(&norm, &xi, 1.0, (samples / 10).max(1_000), cfg.seed);
    let mut out = String::from("kappa3,kappa4,samples,defect,lambda,diameter\n");
    out.push_str(&format!(
        "{},{},{},{},{},{}\n",
        fmt(cfg.kappa3),
        fmt(cfg.kappa4),
        samples,
        fmt(defect),
        fmt(lambda),
        fmt(diameter),
    ));
    Ok(out)
}

pub fn dispatch(command: &str, rest: &[String]) -> Result<(String, Option<String>), CliError> {
    let flags = Flags::parse(rest)?;
    let cfg = effective_config(&flags)?;
    let out_path = cfg.out.clone();
    let csv = match command {
        "degree" => cmd_degree(&flags)?,
        "beta" => cmd_beta(&flags)?,
        "density" => cmd_density(&flags)?,
        "stokes" => cmd_stokes(&flags)?,
        "blowup" => cmd_blowup(&flags)?,
        "diverge" => cmd_diverge(&flags)?,
        "residuals" => cmd_residuals(&flags)?,
        "check-distance" => cmd_check_distance(&flags)?,
        other => {
            return Err(CliError::validation(format!(
                "unknown command `{other}`; see --help"
            )))
        }
    };
    Ok((csv, out_path))
}
