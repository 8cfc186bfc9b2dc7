//! Spherical factors, Federer densities, blow-up exponents and
//! singular-set divergence probes.
//!
//! The spherical factor of a homogeneous plane maximizes the area of the
//! plane's intersection with a translated unit ball over admissible
//! centers. The Federer density of the intrinsic measure at a surface
//! point maximizes the normalized ball measure over centers whose ball
//! still contains the point, along a decreasing radius schedule; on flat
//! homogeneous planes the two agree exactly by dilation self-similarity,
//! which is the desk-scale form of the area-formula density equality.

use crate::algebra::{bch_product, AlgebraElement, StructureCoefficients, DEGREE_WEIGHTS};
use crate::error::EngelError;
use crate::metric::{seeded_rng, Ball, BoxRegion, QuasiNorm};
use crate::quad::{intrinsic_measure, riemannian_area_in_ball, Estimate, QuadratureSpec};
use crate::simplex::{maximize, SimplexOptions};
use crate::surface::SurfaceChart;
use rand::Rng;

/// A homogeneous 2-plane spanned by two graded basis directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomogeneousPlane {
    pub i: usize,
    pub j: usize,
}

impl HomogeneousPlane {
    pub fn new(i: usize, j: usize) -> Result<Self, EngelError> {
        if i >= j || j > 3 {
            return Err(EngelError::InvalidIndex { i: i + 1, j: j + 1 });
        }
        Ok(HomogeneousPlane { i, j })
    }

    /// Parses names like `e2,e3`.
    pub fn parse(text: &str) -> Result<Self, EngelError> {
        let mut idx = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            let d = part
                .strip_prefix('e')
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| {
                    EngelError::Validation(format!("bad plane direction `{part}`; use e1..e4"))
                })?;
            if !(1..=4).contains(&d) {
                return Err(EngelError::Validation(format!(
                    "direction {d} out of range"
                )));
            }
            idx.push(d - 1);
        }
        if idx.len() != 2 {
            return Err(EngelError::Validation(
                "a plane needs exactly two directions".into(),
            ));
        }
        Self::new(idx[0].min(idx[1]), idx[0].max(idx[1]))
    }

    pub fn embed(&self, v: [f64; 2]) -> AlgebraElement<f64> {
        let mut p = AlgebraElement::zero();
        p.c[self.i] = v[0];
        p.c[self.j] = v[1];
        p
    }

    /// Homogeneous dimension: sum of the two coordinate weights.
    pub fn homogeneous_dimension(&self) -> u32 {
        DEGREE_WEIGHTS[self.i] + DEGREE_WEIGHTS[self.j]
    }
}

/// Lebesgue area (graded scalar product) of the slice
/// `{v in V : d(u, v) <= r}` by midpoint counting at mesh `n`, with the
/// cells at membership transitions refined by subsampling so the boundary
/// error stays well below a grid cell.
pub fn slice_area_mesh(
    norm: &QuasiNorm,
    xi: &StructureCoefficients<f64>,
    plane: HomogeneousPlane,
    center: &AlgebraElement<f64>,
    r: f64,
    n: usize,
) -> f64 {
    // the slice is contained in the coordinate box of B(0, |u| + r)
    let s = norm.value(center) + r;
    let bb = norm.ball_box(s);
    let (bi, bj) = (bb[plane.i], bb[plane.j]);
    let neg = center.neg();
    let window = crate::surface::Rect {
        lo: [-bi, -bj],
        hi: [bi, bj],
    };
    crate::quad::antialiased_indicator_2d(
        window,
        n,
        |v| norm.value(&bch_product(&neg, &plane.embed(v), xi)) <= r,
        |_| 1.0,
    )
}

/// Slice area with one dyadic refinement for an error estimate.
pub fn slice_area(
    norm: &QuasiNorm,
    xi: &StructureCoefficients<f64>,
    plane: HomogeneousPlane,
    center: &AlgebraElement<f64>,
    r: f64,
    spec: &QuadratureSpec,
) -> Estimate {
    let n = spec.base_mesh.max(32);
    let coarse = slice_area_mesh(norm, xi, plane, center, r, n);
    let fine = slice_area_mesh(norm, xi, plane, center, r, 2 * n);
    Estimate {
        value: fine,
        error: (fine - coarse).abs(),
    }
}

/// Spherical factor search report.
#[derive(Clone, Debug)]
pub struct BetaReport {
    pub value: f64,
    pub center: [f64; 4],
    /// Change between the two finest slice meshes at the maximizer.
    pub refinement_delta: f64,
    /// Best value seen on the coarse center grid, before local search.
    pub grid_value: f64,
}

/// Spherical factor `beta_d(V)`: max over unit-ball centers of the slice
/// area, by a coarse center grid followed by simplex refinement around the
/// top cells. Deterministic for a fixed spec.
pub fn spherical_factor(
    norm: &QuasiNorm,
    xi: &StructureCoefficients<f64>,
    plane: HomogeneousPlane,
    spec: &QuadratureSpec,
) -> BetaReport {
    let bb = norm.ball_box(1.0);
    let lo: Vec<f64> = bb.iter().map(|b| -b).collect();
    let hi: Vec<f64> = bb.to_vec();
    let mesh = spec.base_mesh.max(32);
    let eval_at = |c: &[f64], n: usize| {
        let center = AlgebraElement::new(c[0], c[1], c[2], c[3]);
        slice_area_mesh(norm, xi, plane, &center, 1.0, n)
    };

    // coarse center grid, odd count so the origin is a node
    let g = 5usize;
    let mut cells: Vec<(f64, [f64; 4])> = Vec::new();
    let coord = |k: usize, lo: f64, hi: f64| lo + (hi - lo) * k as f64 / (g - 1) as f64;
    for a in 0..g {
        for b in 0..g {
            for c in 0..g {
                for d in 0..g {
                    let u = [
                        coord(a, lo[0], hi[0]),
                        coord(b, lo[1], hi[1]),
                        coord(c, lo[2], hi[2]),
                        coord(d, lo[3], hi[3]),
                    ];
                    let v = eval_at(&u, mesh / 2);
                    cells.push((v, u));
                }
            }
        }
    }
    cells.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
    let grid_value = cells[0].0;

    // simplex multistart from the top grid cells; all candidates are then
    // re-evaluated at the fine mesh so ranking noise cannot leak into the
    // reported value
    let opts = SimplexOptions {
        max_iter: 120,
        tol: 1e-9,
        step_frac: 0.05,
    };
    let mut candidates: Vec<Vec<f64>> = cells.iter().take(4).map(|c| c.1.to_vec()).collect();
    for (_, start) in cells.iter().take(4) {
        let (p, _) = maximize(|c| eval_at(c, mesh), start, &lo, &hi, &opts);
        candidates.push(p);
    }
    let mut best_pt = candidates[0].clone();
    let mut best_fine = f64::NEG_INFINITY;
    for cand in &candidates {
        let v = eval_at(cand, 2 * mesh);
        if v > best_fine {
            best_fine = v;
            best_pt = cand.clone();
        }
    }
    let coarse_at_best = eval_at(&best_pt, mesh);
    BetaReport {
        value: best_fine,
        center: [best_pt[0], best_pt[1], best_pt[2], best_pt[3]],
        refinement_delta: (best_fine - coarse_at_best).abs(),
        grid_value,
    }
}

/// Quotients of one radius entry of a Federer density probe.
#[derive(Clone, Debug)]
pub struct RadiusQuotient {
    pub r: f64,
    /// `2^N mu(B(p,r)) / (2r)^N` with the ball centered at the point.
    pub centered: f64,
    /// Same quotient maximized over centers `q` with `d(q, p) <= r`.
    pub maximized: f64,
    pub argmax: [f64; 4],
}

/// Federer density estimate over a radius schedule.
#[derive(Clone, Debug)]
pub struct DensityEstimate {
    pub per_radius: Vec<RadiusQuotient>,
    /// Extrapolated limit of the maximized quotients (Richardson/Aitken on
    /// the last three when monotone, else the last value).
    pub limit: f64,
    pub error: f64,
}

/// Spherical Federer density of the intrinsic measure at `Phi(u0)`:
/// for each `r` maximize `2^N mu(B(q,r)) / diam^N` over centers whose ball
/// contains the point, with `diam = 2r` for the symmetric box norm.
pub fn federer_density(
    chart: &SurfaceChart,
    norm: &QuasiNorm,
    u0: [f64; 2],
    degree: u32,
    radii: &[f64],
    spec: &QuadratureSpec,
) -> Result<DensityEstimate, EngelError> {
    chart.check_domain(u0)?;
    let xi = chart.xi.to_f64();
    let p = AlgebraElement {
        c: chart.value_f64(u0),
    };
    let n_exp = degree as i32;
    let mut per_radius = Vec::new();
    for &r in radii {
        if !(r > 0.0) {
            return Err(EngelError::ScheduleOutsideDomain(r));
        }
        let mu = |q: &AlgebraElement<f64>| {
            let ball = Ball::new(q.clone(), r, *norm);
            intrinsic_measure(chart, &ball, degree, spec).value
        };
        let quotient = |q: &AlgebraElement<f64>| mu(q) / r.powi(n_exp);
        let centered = quotient(&p);
        // search q = p * w over the ball box of radius r, which is
        // exactly the admissible set d(q, p) <= r
        let bb = norm.ball_box(r);
        let lo: Vec<f64> = bb.iter().map(|b| -b).collect();
        let hi: Vec<f64> = bb.to_vec();
        let eval_w = |w: &[f64]| {
            let q = bch_product(&p, &AlgebraElement::new(w[0], w[1], w[2], w[3]), &xi);
            quotient(&q)
        };
        // coarse grid (3 per axis) + simplex from the best cells
        let mut cells: Vec<(f64, [f64; 4])> = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        let w = [
                            lo[0] + (hi[0] - lo[0]) * a as f64 / 2.0,
                            lo[1] + (hi[1] - lo[1]) * b as f64 / 2.0,
                            lo[2] + (hi[2] - lo[2]) * c as f64 / 2.0,
                            lo[3] + (hi[3] - lo[3]) * d as f64 / 2.0,
                        ];
                        cells.push((eval_w(&w), w));
                    }
                }
            }
        }
        cells.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
        let opts = SimplexOptions {
            max_iter: 60,
            tol: 1e-8,
            step_frac: 0.1,
        };
        let mut best_val = centered;
        let mut best_w = [0.0f64; 4];
        for (_, start) in cells.iter().take(2) {
            let (w, v) = maximize(eval_w, start, &lo, &hi, &opts);
            if v > best_val {
                best_val = v;
                best_w = [w[0], w[1], w[2], w[3]];
            }
        }
        let argmax = bch_product(
            &p,
            &AlgebraElement::new(best_w[0], best_w[1], best_w[2], best_w[3]),
            &xi,
        );
        per_radius.push(RadiusQuotient {
            r,
            centered,
            maximized: best_val,
            argmax: argmax.c,
        });
    }

    let vals: Vec<f64> = per_radius.iter().map(|q| q.maximized).collect();
    let (limit, error) = extrapolate(&vals);
    Ok(DensityEstimate {
        per_radius,
        limit,
        error,
    })
}

/// Aitken extrapolation on the last three entries when the tail is
/// monotone; otherwise the last value with the recent spread as error.
fn extrapolate(vals: &[f64]) -> (f64, f64) {
    if vals.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let last = *vals.last().unwrap();
    if vals.len() < 3 {
        return (last, f64::INFINITY);
    }
    let v = &vals[vals.len() - 3..];
    let monotone = (v[1] - v[0]).signum() == (v[2] - v[1]).signum();
    let spread = v.iter().map(|x| (x - last).abs()).fold(0.0f64, f64::max);
    if monotone {
        let d1 = v[1] - v[0];
        let d2 = v[2] - v[1];
        if (d2 - d1).abs() > 1e-15 * (1.0 + last.abs()) {
            let aitken = v[2] - d2 * d2 / (d2 - d1);
            // refuse wild extrapolations
            if (aitken - last).abs() <= 2.0 * spread + 1e-12 {
                return (aitken, (aitken - last).abs());
            }
        }
        (last, d2.abs())
    } else {
        (last, spread)
    }
}

/// The blow-up homeomorphism of the parameter plane: component `i` maps to
/// `|t_i|^{b_i} sgn(t_i) / b_i` with the induced degrees `b`.
pub fn eta_map(t: [f64; 2], b: [u32; 2]) -> [f64; 2] {
    std::array::from_fn(|k| t[k].abs().powi(b[k] as i32) * t[k].signum() / b[k] as f64)
}

/// Per-component result of a blow-up exponent fit.
#[derive(Clone, Debug)]
pub struct ComponentFit {
    /// Ambient coordinate index, zero-based.
    pub component: usize,
    /// Weight `d_s` the expansion requires: graph components must equal
    /// `|t|^{d_s} sgn(t) / d_s`, the rest must decay strictly faster.
    pub required_degree: u32,
    pub is_graph: bool,
    /// Fitted slope of `log2 |Gamma_s|` against `log2 lambda` (worst
    /// direction); infinite when the component vanishes identically.
    pub exponent: f64,
    /// Max deviation from the fitted line.
    pub fit_residual: f64,
    /// For graph components: max |Gamma_s - eta| over the samples.
    pub graph_error: f64,
    pub exact_zero: bool,
}

/// Exponent fits of the blow-up map `Gamma = phi o eta` at a max-degree
/// point: builds the adapted graph chart, composes with `eta`, and fits
/// the decay of every non-graph component along scaled rays.
pub fn gamma_expansion(
    chart: &SurfaceChart,
    u0: [f64; 2],
    n_lambdas: usize,
    n_directions: usize,
    spec_scale: f64,
) -> Result<Vec<ComponentFit>, EngelError> {
    let n_lambdas = n_lambdas.max(6);
    let adapted = crate::adapted::adapted_frame(chart, u0)?;
    let b = adapted.report.induced_degrees;
    let [r1, r2] = adapted.report.graph_rows;
    let scale = spec_scale.min(0.5).max(1e-3);

    // collect |Gamma_s| along dyadic rays for each direction
    let mut fits = Vec::new();
    let mut samples: Vec<Vec<Vec<(f64, [f64; 4], [f64; 2])>>> = Vec::new(); // dir -> lambda -> (lambda, point, t)
    for k in 0..n_directions.max(1) {
        let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / n_directions.max(1) as f64;
        let t0 = [scale * ang.cos(), scale * ang.sin()];
        let mut ray = Vec::new();
        for j in 0..n_lambdas {
            let lambda = 0.5f64.powi(j as i32);
            let t = [lambda * t0[0], lambda * t0[1]];
            let y = adapted.graph_value(eta_map(t, b))?;
            ray.push((lambda, y, t));
        }
        samples.push(vec![ray]);
    }

    for s in 0..4 {
        let is_graph = s == r1 || s == r2;
        let required = DEGREE_WEIGHTS[s];
        let mut worst_slope = f64::INFINITY;
        let mut worst_residual = 0.0f64;
        let mut graph_error = 0.0f64;
        let mut any_fit = false;
        let mut all_zero = true;
        for dir in &samples {
            for ray in dir {
                if is_graph {
                    for &(_, y, t) in ray {
                        let e = eta_map(t, b);
                        let expect = if s == r1 { e[0] } else { e[1] };
                        graph_error = graph_error.max((y[s] - expect).abs());
                    }
                    continue;
                }
                // least-squares slope over the nonzero samples
                let pts: Vec<(f64, f64)> = ray
                    .iter()
                    .filter(|&&(_, y, _)| y[s].abs() > 1e-13 * (1.0 + scale))
                    .map(|&(l, y, _)| (l.log2(), y[s].abs().log2()))
                    .collect();
                if pts.len() < 3 {
                    continue;
                }
                all_zero = false;
                any_fit = true;
                let n = pts.len() as f64;
                let sx: f64 = pts.iter().map(|p| p.0).sum();
                let sy: f64 = pts.iter().map(|p| p.1).sum();
                let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
                let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
                let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
                let icept = (sy - slope * sx) / n;
                let res = pts
                    .iter()
                    .map(|p| (p.1 - (icept + slope * p.0)).abs())
                    .fold(0.0f64, f64::max);
                if slope < worst_slope {
                    worst_slope = slope;
                    worst_residual = res;
                }
            }
        }
        let exact_zero = !is_graph && all_zero;
        fits.push(ComponentFit {
            component: s,
            required_degree: required,
            is_graph,
            exponent: if is_graph {
                required as f64
            } else if exact_zero || !any_fit {
                f64::INFINITY
            } else {
                worst_slope
            },
            fit_residual: worst_residual,
            graph_error,
            exact_zero,
        });
    }
    Ok(fits)
}

/// Largest grid-searched `lambda` with the sampled sandwich
/// `Box(0, lambda) in B(0,1)` and `B(0,1) in Box(0, 1/lambda)`.
pub fn box_ball_lambda(
    norm: &QuasiNorm,
    xi: &StructureCoefficients<f64>,
    samples: usize,
    seed: u64,
) -> f64 {
    let _ = xi; // membership at the origin needs no product
    let grid = 64usize;
    let bb = norm.ball_box(1.0);
    'outer: for k in (1..=grid).rev() {
        let lambda = k as f64 / grid as f64;
        let mut rng = seeded_rng(seed, k as u64);
        let inner = BoxRegion { r: lambda };
        let outer = BoxRegion { r: 1.0 / lambda };
        for _ in 0..samples {
            // Box(0, lambda) sample must stay inside the unit ball
            let p = AlgebraElement::new(
                rng.gen_range(-inner.r..=inner.r),
                rng.gen_range(-inner.r..=inner.r),
                rng.gen_range(-(inner.r * inner.r)..=inner.r * inner.r),
                rng.gen_range(-(inner.r.powi(3))..=inner.r.powi(3)),
            );
            if norm.value(&p) > 1.0 + 1e-12 {
                continue 'outer;
            }
            // unit ball sample must stay inside Box(0, 1/lambda)
            let q = AlgebraElement::new(
                rng.gen_range(-bb[0]..=bb[0]),
                rng.gen_range(-bb[1]..=bb[1]),
                rng.gen_range(-bb[2]..=bb[2]),
                rng.gen_range(-bb[3]..=bb[3]),
            );
            if norm.value(&q) <= 1.0 && !outer.contains(&q) {
                continue 'outer;
            }
        }
        return lambda;
    }
    1.0 / grid as f64
}

/// Log-log slopes of the localized Riemannian measure at a surface point.
#[derive(Clone, Debug)]
pub struct DivergenceReport {
    pub per_radius: Vec<(f64, f64)>,
    /// Least-squares slope of `log2 mu_2(Sigma cap B(p,r))` vs `log2 r`.
    pub area_slope: f64,
    /// Slope of `log2 (mu_2 / r^beta)` vs `log2 r`; negative slope
    /// certifies divergence of the ratio as `r -> 0`.
    pub ratio_slope: f64,
}

/// Probes the divergence rate `mu_2(Sigma cap B(p, r)) / r^beta` along a
/// decreasing radius schedule.
pub fn divergence_probe(
    chart: &SurfaceChart,
    norm: &QuasiNorm,
    u0: [f64; 2],
    beta: f64,
    radii: &[f64],
    spec: &QuadratureSpec,
) -> Result<DivergenceReport, EngelError> {
    chart.check_domain(u0)?;
    let p = AlgebraElement {
        c: chart.value_f64(u0),
    };
    let mut per_radius = Vec::new();
    for &r in radii {
        if !(r > 0.0) {
            return Err(EngelError::ScheduleOutsideDomain(r));
        }
        let ball = Ball::new(p.clone(), r, *norm);
        let est = riemannian_area_in_ball(chart, &ball, spec);
        est.check_against(spec)?;
        if !(est.value > 0.0) {
            return Err(EngelError::ScheduleOutsideDomain(r));
        }
        per_radius.push((r, est.value));
    }
    let slope = |pts: &[(f64, f64)]| {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    };
    let area_pts: Vec<(f64, f64)> = per_radius
        .iter()
        .map(|&(r, m)| (r.log2(), m.log2()))
        .collect();
    let ratio_pts: Vec<(f64, f64)> = per_radius
        .iter()
        .map(|&(r, m)| (r.log2(), (m / r.powf(beta)).log2()))
        .collect();
    Ok(DivergenceReport {
        per_radius,
        area_slope: slope(&area_pts),
        ratio_slope: slope(&ratio_pts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::dilate;
    use crate::scalar::Rational;
    use crate::surface::{planes, Rect};

    fn std_xi_f() -> StructureCoefficients<f64> {
        StructureCoefficients::standard()
    }

    fn std_xi() -> StructureCoefficients<Rational> {
        StructureCoefficients::standard()
    }

    #[test]
    fn plane_parsing() {
        let p = HomogeneousPlane::parse("e2,e3").unwrap();
        assert_eq!((p.i, p.j), (1, 2));
        assert_eq!(p.homogeneous_dimension(), 3);
        assert!(HomogeneousPlane::parse("e5,e1").is_err());
        assert!(HomogeneousPlane::parse("e1").is_err());
        assert_eq!(
            HomogeneousPlane::parse("e4,e1").unwrap(),
            HomogeneousPlane::new(0, 3).unwrap()
        );
    }

    #[test]
    fn centered_slices_are_exact_rectangles() {
        let norm = QuasiNorm::default();
        let xi = std_xi_f();
        let spec = QuadratureSpec::default();
        // V = span{e2,e3}: rectangle |v1| <= 1, |v2| <= k3, area 4 k3
        let v23 = HomogeneousPlane::new(1, 2).unwrap();
        let est = slice_area(&norm, &xi, v23, &AlgebraElement::zero(), 1.0, &spec);
        assert!((est.value - 4.0 * norm.kappa3).abs() < 1e-12);
        // V = span{e3,e4}: area 4 k3 k4
        let v34 = HomogeneousPlane::new(2, 3).unwrap();
        let est = slice_area(&norm, &xi, v34, &AlgebraElement::zero(), 1.0, &spec);
        assert!((est.value - 4.0 * norm.kappa3 * norm.kappa4).abs() < 1e-9);
    }

    #[test]
    fn far_centers_give_empty_slices() {
        let norm = QuasiNorm::default();
        let v23 = HomogeneousPlane::new(1, 2).unwrap();
        let far = AlgebraElement::new(10.0, 0.0, 0.0, 0.0);
        let est = slice_area(
            &norm,
            &std_xi_f(),
            v23,
            &far,
            1.0,
            &QuadratureSpec::default(),
        );
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn slice_dilation_covariance() {
        // slice_area(delta_rho u, V, rho r) = rho^(w_i+w_j) slice_area(u, V, r)
        let norm = QuasiNorm::default();
        let xi = std_xi_f();
        let v23 = HomogeneousPlane::new(1, 2).unwrap();
        let u = AlgebraElement::new(0.3, -0.2, 1.5, -2.0);
        let spec = QuadratureSpec::default().with_mesh(192, 1);
        let base = slice_area(&norm, &xi, v23, &u, 0.8, &spec).value;
        for rho in [0.5f64, 0.25, 0.125] {
            let scaled_u = dilate(&rho, &u).unwrap();
            let scaled = slice_area(&norm, &xi, v23, &scaled_u, rho * 0.8, &spec).value;
            let predicted = rho.powi(3) * base;
            assert!(
                (scaled - predicted).abs() <= 0.01 * predicted.abs().max(1e-12),
                "rho {rho}: {scaled} vs {predicted}"
            );
        }
    }

    #[test]
    fn slice_dilation_covariance_degree5_plane() {
        // V = span{e3,e4} has homogeneous dimension 5
        let norm = QuasiNorm::default();
        let xi = std_xi_f();
        let v34 = HomogeneousPlane::new(2, 3).unwrap();
        let u = AlgebraElement::new(0.2, -0.1, 0.8, -1.0);
        let spec = QuadratureSpec::default().with_mesh(160, 1);
        let base = slice_area(&norm, &xi, v34, &u, 0.8, &spec).value;
        for rho in [0.5f64, 0.25] {
            let scaled_u = dilate(&rho, &u).unwrap();
            let scaled = slice_area(&norm, &xi, v34, &scaled_u, rho * 0.8, &spec).value;
            let predicted = rho.powi(5) * base;
            assert!(
                (scaled - predicted).abs() <= 0.01 * predicted.abs().max(1e-12),
                "rho {rho}: {scaled} vs {predicted}"
            );
        }
    }

    #[test]
    fn divergence_probe_transversal_plane_no_divergence() {
        // plane (0,0,u1,u2) at the origin with beta = 5: a max-degree
        // point, so the normalized ratio stays bounded (slope ~ 0)
        let p = planes::plane34(Rect::symmetric(1.0, 1.0), std_xi());
        let norm = QuasiNorm::default();
        let radii: Vec<f64> = (3..=7).map(|k| 0.5f64.powi(k)).collect();
        let spec = QuadratureSpec::default().with_mesh(64, 3);
        let rep = divergence_probe(&p, &norm, [0.0, 0.0], 5.0, &radii, &spec).unwrap();
        assert!(
            rep.ratio_slope.abs() < 0.05,
            "ratio slope {}",
            rep.ratio_slope
        );
    }

    #[test]
    fn spherical_factor_flat_planes() {
        let norm = QuasiNorm::default();
        let xi = std_xi_f();
        let spec = QuadratureSpec::default().with_mesh(48, 2);
        // the maximum is attained at the centered rectangle slice; counting
        // noise at sheared off-center slices stays within a percent
        let beta23 = spherical_factor(&norm, &xi, HomogeneousPlane::new(1, 2).unwrap(), &spec);
        let expect = 4.0 * norm.kappa3;
        assert!(
            (beta23.value - expect).abs() < 0.01 * expect,
            "{}",
            beta23.value
        );
        let beta14 = spherical_factor(&norm, &xi, HomogeneousPlane::new(0, 3).unwrap(), &spec);
        let expect = 4.0 * norm.kappa4;
        assert!(
            (beta14.value - expect).abs() < 0.01 * expect,
            "{}",
            beta14.value
        );
        let beta34 = spherical_factor(&norm, &xi, HomogeneousPlane::new(2, 3).unwrap(), &spec);
        let expect = 4.0 * norm.kappa3 * norm.kappa4;
        assert!(
            (beta34.value - expect).abs() < 0.01 * expect,
            "{}",
            beta34.value
        );
    }

    #[test]
    fn eta_map_values() {
        assert_eq!(eta_map([0.0, 0.0], [1, 2]), [0.0, 0.0]);
        let e = eta_map([0.5, -0.5], [1, 2]);
        assert!((e[0] - 0.5).abs() < 1e-15);
        assert!((e[1] + 0.125).abs() < 1e-15);
        let e = eta_map([2.0, -2.0], [1, 3]);
        assert!((e[0] - 2.0).abs() < 1e-15);
        assert!((e[1] + 8.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn box_ball_lambda_values() {
        // kappa = 1: the unit ball is the unit box, lambda = 1
        let unit = QuasiNorm::new(1.0, 1.0).unwrap();
        let l = box_ball_lambda(&unit, &std_xi_f(), 2_000, 3);
        assert!((l - 1.0).abs() < 1e-12);
        // default kappa = 16: lambda = 1/4 from the second inclusion
        let l = box_ball_lambda(&QuasiNorm::default(), &std_xi_f(), 5_000, 3);
        assert!((l - 0.25).abs() < 1e-12);
        assert!(l > 0.0 && l <= 1.0);
    }

    #[test]
    fn gamma_expansion_flat_vertical_plane() {
        let v = planes::vertical(Rect::symmetric(1.0, 1.0), std_xi());
        let fits = gamma_expansion(&v, [0.0, 0.0], 8, 8, 0.4).unwrap();
        for fit in &fits {
            if fit.is_graph {
                assert!(fit.graph_error < 1e-10, "graph error {}", fit.graph_error);
            } else {
                assert!(
                    fit.exact_zero,
                    "component {} not exactly zero",
                    fit.component
                );
                assert!(fit.exponent.is_infinite());
            }
        }
    }

    #[test]
    fn divergence_probe_flat_homogeneous_plane() {
        // vertical plane at the origin: mu(B(0,r)) = c r^3 exactly
        let v = planes::vertical(Rect::symmetric(1.0, 1.0), std_xi());
        let norm = QuasiNorm::default();
        let radii: Vec<f64> = (3..=7).map(|k| 0.5f64.powi(k)).collect();
        let spec = QuadratureSpec::default().with_mesh(64, 3);
        let rep = divergence_probe(&v, &norm, [0.0, 0.0], 3.0, &radii, &spec).unwrap();
        assert!(
            (rep.area_slope - 3.0).abs() < 0.05,
            "slope {}",
            rep.area_slope
        );
        assert!(
            rep.ratio_slope.abs() < 0.05,
            "ratio slope {}",
            rep.ratio_slope
        );
    }
}
