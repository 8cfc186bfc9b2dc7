//! Surface files and run configuration.
//!
//! Surfaces are JSON documents holding four expression strings in `u1`,
//! `u2`, a domain rectangle, the structure coefficients as exact rational
//! strings, and optional marked points for the pointwise probes.

use crate::expr::parse_expression;
use engel::algebra::StructureCoefficients;
use engel::metric::QuasiNorm;
use engel::quad::QuadratureSpec;
use engel::scalar::{parse_rational, Rational};
use engel::surface::{Rect, SurfaceChart, DEFAULT_ZERO_TOL};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    pub name: String,
    /// Four expressions in `u1`, `u2`.
    pub components: [String; 4],
    /// `[[u1_min, u1_max], [u2_min, u2_max]]`.
    pub domain: [[f64; 2]; 2],
    /// Structure coefficients as rational strings, default `1, 1, 0`.
    #[serde(default = "default_xi")]
    pub xi: [String; 3],
    /// Marked parameter points, e.g. probe locations.
    #[serde(default)]
    pub points: Vec<[f64; 2]>,
}

fn default_xi() -> [String; 3] {
    ["1".into(), "1".into(), "0".into()]
}

impl SurfaceFile {
    pub fn load(path: &str) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read surface file {path}: {e}"))?;
        serde_json::from_str(&text).map_err(|e| format!("bad surface file {path}: {e}"))
    }

    pub fn chart(&self, zero_tol: f64) -> Result<SurfaceChart, String> {
        let comps = {
            let mut out = Vec::new();
            for (k, text) in self.components.iter().enumerate() {
                let poly =
                    parse_expression(text).map_err(|e| format!("component {}: {e}", k + 1))?;
                out.push(poly);
            }
            let arr: [engel::poly::MultiPoly; 4] = out.try_into().expect("four components");
            arr
        };
        let xi = self.parse_xi()?;
        let domain = Rect::new(
            [self.domain[0][0], self.domain[1][0]],
            [self.domain[0][1], self.domain[1][1]],
        )
        .map_err(|e| e.to_string())?;
        Ok(SurfaceChart::poly(comps, domain, xi).with_zero_tol(zero_tol))
    }

    fn parse_xi(&self) -> Result<StructureCoefficients<Rational>, String> {
        let mut vals = Vec::new();
        for (name, text) in ["xi12", "xi13", "xi23"].iter().zip(self.xi.iter()) {
            let r = parse_rational(text)
                .ok_or_else(|| format!("{name}: bad rational literal `{text}`"))?;
            vals.push(r);
        }
        StructureCoefficients::new(vals[0].clone(), vals[1].clone(), vals[2].clone())
            .map_err(|e| e.to_string())
    }
}

/// Numeric knobs shared by every command; flags override file values.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub kappa3: f64,
    pub kappa4: f64,
    pub zero_tol: f64,
    pub base_mesh: usize,
    pub levels: u32,
    pub mc_samples: usize,
    pub monte_carlo: bool,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub seed: u64,
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            kappa3: engel::metric::DEFAULT_KAPPA3,
            kappa4: engel::metric::DEFAULT_KAPPA4,
            zero_tol: DEFAULT_ZERO_TOL,
            base_mesh: 64,
            levels: 3,
            mc_samples: 200_000,
            monte_carlo: false,
            abs_tol: 1e-9,
            rel_tol: 2e-2,
            seed: 0,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &str) -> Result<Self, String> {
        let text =
            std::fs::read_to_string(path).map_err(|e| format!("cannot read config {path}: {e}"))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| format!("bad config {path}: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.kappa3 > 0.0 && self.kappa4 > 0.0) {
            return Err("kappa constants must be positive".into());
        }
        if !(self.zero_tol > 0.0) {
            return Err("zero tolerance must be positive".into());
        }
        if self.base_mesh < 8 {
            return Err("base mesh must be at least 8".into());
        }
        if self.levels == 0 {
            return Err("need at least one refinement level".into());
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err("quadrature tolerances must be positive".into());
        }
        Ok(())
    }

    pub fn norm(&self) -> Result<QuasiNorm, String> {
        QuasiNorm::new(self.kappa3, self.kappa4).map_err(|e| e.to_string())
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        let mut spec = QuadratureSpec::default()
            .with_mesh(self.base_mesh, self.levels)
            .with_seed(self.seed);
        spec.mc_samples = self.mc_samples;
        spec.monte_carlo = self.monte_carlo;
        spec.abs_tol = self.abs_tol;
        spec.rel_tol = self.rel_tol;
        spec
    }
}
