//! Quadrature: Riemannian and intrinsic surface measures over metric
//! balls, line integrals of 1-forms, surface integrals of 2-forms, and the
//! Stokes checker.
//!
//! The workhorse is a tensor midpoint rule with dyadic refinement; the
//! reported error is the difference of the last two refinements. Cell sums
//! are accumulated pairwise in a fixed order, so a given spec reproduces
//! bit-identical values. Ball indicators break the polynomial order of the
//! midpoint rule; a seeded Monte Carlo fallback with a reported standard
//! error is available for those integrands.

use crate::algebra::FrameTwoVector;
use crate::error::EngelError;
use crate::frame::{PolyOneForm, PolyTwoForm};
use crate::metric::{seeded_rng, Ball};
use crate::surface::{Rect, SurfaceChart};
use rand::Rng;

/// Mesh, refinement and sampling parameters shared by every quadrature.
#[derive(Clone, Debug)]
pub struct QuadratureSpec {
    /// Cells per axis at the coarsest level.
    pub base_mesh: usize,
    /// Number of dyadic refinement levels (>= 2 for an error estimate).
    pub levels: u32,
    /// Sample count of the Monte Carlo fallback.
    pub mc_samples: usize,
    pub seed: u64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Use Monte Carlo instead of the midpoint rule for indicator
    /// integrands.
    pub monte_carlo: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            base_mesh: 64,
            levels: 3,
            mc_samples: 200_000,
            seed: 0,
            abs_tol: 1e-9,
            rel_tol: 2e-2,
            monte_carlo: false,
        }
    }
}

impl QuadratureSpec {
    pub fn with_mesh(mut self, base_mesh: usize, levels: u32) -> Self {
        self.base_mesh = base_mesh;
        self.levels = levels;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn mesh_at(&self, level: u32) -> usize {
        self.base_mesh << level
    }
}

/// A value with its refinement (or standard) error estimate.
#[derive(Clone, Copy, Debug)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn exact_zero() -> Self {
        Estimate {
            value: 0.0,
            error: 0.0,
        }
    }

    /// Flags a refinement whose error estimate exceeds the spec
    /// tolerances.
    pub fn check_against(&self, spec: &QuadratureSpec) -> Result<(), EngelError> {
        let tolerance = spec.abs_tol + spec.rel_tol * self.value.abs();
        if self.error > tolerance {
            return Err(EngelError::QuadratureNonconvergent {
                estimate: self.error,
                tolerance,
            });
        }
        Ok(())
    }
}

/// Deterministic pairwise (tree) summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => {
            let m = n / 2;
            pairwise_sum(&xs[..m]) + pairwise_sum(&xs[m..])
        }
    }
}

/// Midpoint rule over a rectangle with `n` cells per axis.
pub fn midpoint_2d(rect: Rect, n: usize, mut f: impl FnMut([f64; 2]) -> f64) -> f64 {
    let hx = (rect.hi[0] - rect.lo[0]) / n as f64;
    let hy = (rect.hi[1] - rect.lo[1]) / n as f64;
    let mut rows = Vec::with_capacity(n);
    let mut row = vec![0.0f64; n];
    for i in 0..n {
        let x = rect.lo[0] + (i as f64 + 0.5) * hx;
        for (j, slot) in row.iter_mut().enumerate() {
            let y = rect.lo[1] + (j as f64 + 0.5) * hy;
            *slot = f([x, y]);
        }
        rows.push(pairwise_sum(&row));
    }
    pairwise_sum(&rows) * hx * hy
}

/// Midpoint refinement ladder; value = finest level, error = last delta.
pub fn refine_2d(
    rect: Rect,
    spec: &QuadratureSpec,
    mut f: impl FnMut([f64; 2]) -> f64,
) -> Estimate {
    let mut prev = None;
    let mut value = 0.0;
    for level in 0..spec.levels.max(1) {
        value = midpoint_2d(rect, spec.mesh_at(level), &mut f);
        if level + 1 == spec.levels.max(1) {
            return Estimate {
                value,
                error: prev.map_or(f64::INFINITY, |p: f64| (value - p).abs()),
            };
        }
        prev = Some(value);
    }
    Estimate { value, error: 0.0 }
}

/// Seeded Monte Carlo integral over a rectangle, with standard error.
pub fn monte_carlo_2d(
    rect: Rect,
    n: usize,
    seed: u64,
    mut f: impl FnMut([f64; 2]) -> f64,
) -> Estimate {
    let mut rng = seeded_rng(seed, 0x3c);
    let area = (rect.hi[0] - rect.lo[0]) * (rect.hi[1] - rect.lo[1]);
    let mut vals = Vec::with_capacity(n);
    for _ in 0..n {
        let u = [
            rng.gen_range(rect.lo[0]..rect.hi[0]),
            rng.gen_range(rect.lo[1]..rect.hi[1]),
        ];
        vals.push(f(u));
    }
    let mean = pairwise_sum(&vals) / n as f64;
    let var: Vec<f64> = vals.iter().map(|v| (v - mean) * (v - mean)).collect();
    let std_err = (pairwise_sum(&var) / (n as f64 * (n - 1).max(1) as f64)).sqrt();
    Estimate {
        value: mean * area,
        error: std_err * area,
    }
}

fn two_vector_unchecked(chart: &SurfaceChart, u: [f64; 2]) -> FrameTwoVector<f64> {
    let phi = chart.value_f64(u);
    let j = chart.jacobian_f64(u);
    let m: [f64; 6] = std::array::from_fn(|k| {
        let (a, b) = crate::algebra::PAIRS[k];
        j[a][0] * j[b][1] - j[b][0] * j[a][1]
    });
    crate::surface::two_vector_from_parts(&phi, &m, &chart.xi.to_f64())
}

/// Riemannian area of the chart over `window` clipped by `region`;
/// the Jacobian is the graded norm of the frame 2-vector.
pub fn riemannian_area_region(
    chart: &SurfaceChart,
    window: Rect,
    region: impl Fn([f64; 2]) -> bool,
    spec: &QuadratureSpec,
) -> Estimate {
    let integrand = |u: [f64; 2]| {
        if region(u) {
            two_vector_unchecked(chart, u).norm()
        } else {
            0.0
        }
    };
    if spec.monte_carlo {
        monte_carlo_2d(window, spec.mc_samples, spec.seed, integrand)
    } else {
        refine_2d(window, spec, integrand)
    }
}

/// Riemannian area over the whole chart domain.
pub fn riemannian_area(chart: &SurfaceChart, spec: &QuadratureSpec) -> Estimate {
    riemannian_area_region(chart, chart.domain, |_| true, spec)
}

/// Shrinks the integration window to the part of the domain that can meet
/// the ball: iterated coarse scans with safety margins, so small balls are
/// still resolved. `None` when no scan node is active.
fn ball_window(chart: &SurfaceChart, ball: &Ball, coarse: usize) -> Option<Rect> {
    let xi = chart.xi.to_f64();
    let mut rect = chart.domain;
    for _pass in 0..6 {
        let hx = (rect.hi[0] - rect.lo[0]) / coarse as f64;
        let hy = (rect.hi[1] - rect.lo[1]) / coarse as f64;
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        let mut any = false;
        for i in 0..=coarse {
            for j in 0..=coarse {
                let u = [rect.lo[0] + i as f64 * hx, rect.lo[1] + j as f64 * hy];
                let p = crate::algebra::AlgebraElement {
                    c: chart.value_f64(u),
                };
                if ball.norm.distance(&xi, &ball.center, &p) <= ball.radius * 1.05 {
                    any = true;
                    lo[0] = lo[0].min(u[0]);
                    lo[1] = lo[1].min(u[1]);
                    hi[0] = hi[0].max(u[0]);
                    hi[1] = hi[1].max(u[1]);
                }
            }
        }
        if !any {
            return None;
        }
        // two scan cells of margin, clipped to the domain
        let next = Rect {
            lo: [
                (lo[0] - 2.0 * hx).max(chart.domain.lo[0]),
                (lo[1] - 2.0 * hy).max(chart.domain.lo[1]),
            ],
            hi: [
                (hi[0] + 2.0 * hx).min(chart.domain.hi[0]),
                (hi[1] + 2.0 * hy).min(chart.domain.hi[1]),
            ],
        };
        let old_area = (rect.hi[0] - rect.lo[0]) * (rect.hi[1] - rect.lo[1]);
        let new_area = (next.hi[0] - next.lo[0]) * (next.hi[1] - next.lo[1]);
        rect = next;
        if new_area > 0.5 * old_area {
            break;
        }
    }
    Some(rect)
}

/// Midpoint rule for `weight * indicator` with the cells at membership
/// transitions resolved by 8x8 subsampling; cuts the O(h) boundary error
/// of a raw indicator mesh by an order of magnitude.
pub fn antialiased_indicator_2d(
    window: Rect,
    n: usize,
    member: impl Fn([f64; 2]) -> bool,
    weight: impl Fn([f64; 2]) -> f64,
) -> f64 {
    let hx = (window.hi[0] - window.lo[0]) / n as f64;
    let hy = (window.hi[1] - window.lo[1]) / n as f64;
    let center = |i: usize, j: usize| {
        [
            window.lo[0] + (i as f64 + 0.5) * hx,
            window.lo[1] + (j as f64 + 0.5) * hy,
        ]
    };
    let mut flags = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            flags[i * n + j] = member(center(i, j));
        }
    }
    const SUB: usize = 8;
    let mut rows = Vec::with_capacity(n);
    let mut row = vec![0.0f64; n];
    for i in 0..n {
        for (j, slot) in row.iter_mut().enumerate() {
            let me = flags[i * n + j];
            let boundary = (i > 0 && flags[(i - 1) * n + j] != me)
                || (i + 1 < n && flags[(i + 1) * n + j] != me)
                || (j > 0 && flags[i * n + j - 1] != me)
                || (j + 1 < n && flags[i * n + j + 1] != me);
            if !boundary {
                *slot = if me { weight(center(i, j)) } else { 0.0 };
                continue;
            }
            let lo = [window.lo[0] + i as f64 * hx, window.lo[1] + j as f64 * hy];
            let mut acc = 0.0;
            for a in 0..SUB {
                for b in 0..SUB {
                    let u = [
                        lo[0] + (a as f64 + 0.5) * hx / SUB as f64,
                        lo[1] + (b as f64 + 0.5) * hy / SUB as f64,
                    ];
                    if member(u) {
                        acc += weight(u);
                    }
                }
            }
            *slot = acc / (SUB * SUB) as f64;
        }
        rows.push(pairwise_sum(&row));
    }
    pairwise_sum(&rows) * hx * hy
}

fn refine_indicator_2d(
    window: Rect,
    spec: &QuadratureSpec,
    member: impl Fn([f64; 2]) -> bool,
    weight: impl Fn([f64; 2]) -> f64,
) -> Estimate {
    let mut prev = None;
    let mut value = 0.0;
    for level in 0..spec.levels.max(1) {
        value = antialiased_indicator_2d(window, spec.mesh_at(level), &member, &weight);
        if level + 1 == spec.levels.max(1) {
            return Estimate {
                value,
                error: prev.map_or(f64::INFINITY, |p: f64| (value - p).abs()),
            };
        }
        prev = Some(value);
    }
    Estimate { value, error: 0.0 }
}

/// Riemannian area of the part of the surface inside a metric ball.
pub fn riemannian_area_in_ball(
    chart: &SurfaceChart,
    ball: &Ball,
    spec: &QuadratureSpec,
) -> Estimate {
    let Some(window) = ball_window(chart, ball, 48) else {
        return Estimate::exact_zero();
    };
    let xi = chart.xi.to_f64();
    let member = |u: [f64; 2]| {
        let p = crate::algebra::AlgebraElement {
            c: chart.value_f64(u),
        };
        ball.norm.distance(&xi, &ball.center, &p) <= ball.radius
    };
    if spec.monte_carlo {
        return monte_carlo_2d(window, spec.mc_samples, spec.seed, |u| {
            if member(u) {
                two_vector_unchecked(chart, u).norm()
            } else {
                0.0
            }
        });
    }
    refine_indicator_2d(window, spec, member, |u| {
        two_vector_unchecked(chart, u).norm()
    })
}

/// Intrinsic measure of the surface inside a metric ball: the integrand is
/// the graded norm of the degree-`n` block of the (unnormalized) frame
/// 2-vector.
pub fn intrinsic_measure(
    chart: &SurfaceChart,
    ball: &Ball,
    degree: u32,
    spec: &QuadratureSpec,
) -> Estimate {
    let Some(window) = ball_window(chart, ball, 48) else {
        return Estimate::exact_zero();
    };
    let xi = chart.xi.to_f64();
    let member = |u: [f64; 2]| {
        let p = crate::algebra::AlgebraElement {
            c: chart.value_f64(u),
        };
        ball.norm.distance(&xi, &ball.center, &p) <= ball.radius
    };
    if spec.monte_carlo {
        return monte_carlo_2d(window, spec.mc_samples, spec.seed, |u| {
            if member(u) {
                two_vector_unchecked(chart, u).degree_block(degree).norm()
            } else {
                0.0
            }
        });
    }
    refine_indicator_2d(window, spec, member, |u| {
        two_vector_unchecked(chart, u).degree_block(degree).norm()
    })
}

/// Line integral of a 1-form along a closed parametric curve on `[0, 1]`;
/// the callback returns ambient position and velocity. Midpoint rule on a
/// periodic smooth integrand converges spectrally.
pub fn line_integral_closed(
    omega: &PolyOneForm,
    curve: impl Fn(f64) -> ([f64; 4], [f64; 4]),
    spec: &QuadratureSpec,
) -> Result<Estimate, EngelError> {
    let (start, _) = curve(0.0);
    let (end, _) = curve(1.0);
    let gap = (0..4)
        .map(|i| (start[i] - end[i]).abs())
        .fold(0.0, f64::max);
    let scale = start.iter().map(|x| x.abs()).fold(1.0, f64::max);
    if gap > 1e-9 * scale {
        return Err(EngelError::OpenCurve(gap));
    }
    let eval = |n: usize| {
        let mut vals = Vec::with_capacity(n);
        for k in 0..n {
            let t = (k as f64 + 0.5) / n as f64;
            let (pos, vel) = curve(t);
            let coeff = omega.eval(&pos);
            vals.push((0..4).map(|l| coeff[l] * vel[l]).sum::<f64>());
        }
        pairwise_sum(&vals) / n as f64
    };
    let n0 = (spec.base_mesh * 8).max(64);
    let coarse = eval(n0);
    let fine = eval(n0 * 2);
    Ok(Estimate {
        value: fine,
        error: (fine - coarse).abs() + 1e-14 * (1.0 + fine.abs()),
    })
}

/// Boundary circle of a parameter disk, oriented counterclockwise.
#[derive(Clone, Copy, Debug)]
pub struct ParamDisk {
    pub center: [f64; 2],
    pub radius: f64,
}

impl ParamDisk {
    fn point(&self, t: f64) -> ([f64; 2], [f64; 2]) {
        let ang = 2.0 * std::f64::consts::PI * t;
        let u = [
            self.center[0] + self.radius * ang.cos(),
            self.center[1] + self.radius * ang.sin(),
        ];
        let du = [
            -self.radius * ang.sin() * 2.0 * std::f64::consts::PI,
            self.radius * ang.cos() * 2.0 * std::f64::consts::PI,
        ];
        (u, du)
    }

    pub fn inside(&self, domain: &Rect) -> bool {
        domain.contains([self.center[0] - self.radius, self.center[1] - self.radius])
            && domain.contains([self.center[0] + self.radius, self.center[1] + self.radius])
    }
}

/// Line integral of a 1-form over the image of the disk boundary.
pub fn line_integral(
    omega: &PolyOneForm,
    chart: &SurfaceChart,
    disk: ParamDisk,
    spec: &QuadratureSpec,
) -> Result<Estimate, EngelError> {
    if !disk.inside(&chart.domain) {
        return Err(EngelError::ScheduleOutsideDomain(disk.radius));
    }
    line_integral_closed(
        omega,
        |t| {
            let (u, du) = disk.point(t);
            let pos = chart.value_f64(u);
            let jac = chart.jacobian_f64(u);
            let vel = std::array::from_fn(|i| jac[i][0] * du[0] + jac[i][1] * du[1]);
            (pos, vel)
        },
        spec,
    )
}

/// Surface integral of a 2-form over the image of a parameter disk, in
/// polar coordinates so the integrand stays smooth.
pub fn surface_integral_disk(
    omega: &PolyTwoForm,
    chart: &SurfaceChart,
    disk: ParamDisk,
    spec: &QuadratureSpec,
) -> Result<(Estimate, Vec<f64>), EngelError> {
    if !disk.inside(&chart.domain) {
        return Err(EngelError::ScheduleOutsideDomain(disk.radius));
    }
    let pull = |u: [f64; 2]| {
        let phi = chart.value_f64(u);
        let j = chart.jacobian_f64(u);
        let coeff = omega.eval(&phi);
        (0..6)
            .map(|k| {
                let (a, b) = crate::algebra::PAIRS[k];
                coeff[k] * (j[a][0] * j[b][1] - j[b][0] * j[a][1])
            })
            .sum::<f64>()
    };
    let polar = Rect {
        lo: [0.0, 0.0],
        hi: [disk.radius, 2.0 * std::f64::consts::PI],
    };
    let mut by_level = Vec::new();
    for level in 0..spec.levels.max(2) {
        let n = spec.mesh_at(level);
        let v = midpoint_2d(polar, n, |rt| {
            let u = [
                disk.center[0] + rt[0] * rt[1].cos(),
                disk.center[1] + rt[0] * rt[1].sin(),
            ];
            pull(u) * rt[0]
        });
        by_level.push(v);
    }
    let value = *by_level.last().unwrap();
    let error = if by_level.len() >= 2 {
        (value - by_level[by_level.len() - 2]).abs()
    } else {
        f64::INFINITY
    };
    Ok((Estimate { value, error }, by_level))
}

/// Surface integral of a 2-form over a parameter rectangle.
pub fn surface_integral_rect(
    omega: &PolyTwoForm,
    chart: &SurfaceChart,
    window: Rect,
    spec: &QuadratureSpec,
) -> Estimate {
    refine_2d(window, spec, |u| {
        let phi = chart.value_f64(u);
        let j = chart.jacobian_f64(u);
        let coeff = omega.eval(&phi);
        (0..6)
            .map(|k| {
                let (a, b) = crate::algebra::PAIRS[k];
                coeff[k] * (j[a][0] * j[b][1] - j[b][0] * j[a][1])
            })
            .sum::<f64>()
    })
}

/// Report of one Stokes comparison `\oint theta4 = \iint dtheta4` on the
/// disk of radius `r`.
#[derive(Clone, Debug)]
pub struct StokesReport {
    pub radius: f64,
    pub line: f64,
    pub line_error: f64,
    pub surface: f64,
    pub surface_error: f64,
    /// |line - surface|.
    pub defect: f64,
    /// Sum of both error estimates plus a rounding floor.
    pub combined_error: f64,
    /// surface value / (pi r^2); tends to the dtheta4 pairing with the
    /// tangent at the center.
    pub normalized_ratio: f64,
    /// Surface values per refinement level, for convergence-order checks.
    pub surface_by_level: Vec<f64>,
}

/// Runs the Stokes comparison for `theta4` on the disk `B_r(center)`.
pub fn stokes_check(
    chart: &SurfaceChart,
    center: [f64; 2],
    r: f64,
    spec: &QuadratureSpec,
) -> Result<StokesReport, EngelError> {
    let theta4 = &crate::frame::coframe_forms(&chart.xi)[3];
    let dtheta4 = crate::frame::exterior_derivative(theta4);
    let disk = ParamDisk { center, radius: r };
    let line = line_integral(theta4, chart, disk, spec)?;
    let (surface, by_level) = surface_integral_disk(&dtheta4, chart, disk, spec)?;
    let defect = (line.value - surface.value).abs();
    let combined =
        line.error + surface.error + 1e-12 * (1.0 + line.value.abs() + surface.value.abs());
    Ok(StokesReport {
        radius: r,
        line: line.value,
        line_error: line.error,
        surface: surface.value,
        surface_error: surface.error,
        defect,
        combined_error: combined,
        normalized_ratio: surface.value / (std::f64::consts::PI * r * r),
        surface_by_level: by_level,
    })
}

/// Normalized Stokes ratios over a decreasing radius schedule; the limit
/// is `-xi13 m13(0) - xi23 m23(0)` for graph charts, which is what forces
/// `xi13 = 0` on genuine degree-3 surfaces.
pub fn stokes_ratio_schedule(
    chart: &SurfaceChart,
    center: [f64; 2],
    radii: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<(f64, f64)>, EngelError> {
    radii
        .iter()
        .map(|&r| stokes_check(chart, center, r, spec).map(|rep| (r, rep.normalized_ratio)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraElement, StructureCoefficients};
    use crate::frame::{coframe_forms, exterior_derivative};
    use crate::metric::QuasiNorm;
    use crate::poly::MultiPoly;
    use crate::scalar::Rational;
    use crate::surface::planes;

    fn std_xi() -> StructureCoefficients<Rational> {
        StructureCoefficients::standard()
    }

    fn dom() -> Rect {
        Rect::symmetric(1.0, 1.0)
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-9);
    }

    #[test]
    fn vertical_plane_unit_area() {
        // J = 1 on the vertical plane; area over [0,1]^2 is 1
        let v = planes::vertical(dom(), std_xi());
        let window = Rect {
            lo: [0.0, 0.0],
            hi: [1.0, 1.0],
        };
        let est = riemannian_area_region(&v, window, |_| true, &QuadratureSpec::default());
        assert!((est.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_plane_area_closed_form() {
        // J = sqrt(1 + u1^2/4 + u2^2/4); reduce to a 1D integral oracle
        let m = planes::mixed(dom(), std_xi());
        let window = Rect {
            lo: [0.0, 0.0],
            hi: [1.0, 1.0],
        };
        let spec = QuadratureSpec::default().with_mesh(64, 4);
        let est = riemannian_area_region(&m, window, |_| true, &spec);
        // oracle: high-resolution 1D quadrature of the closed-form inner
        // integral int sqrt(a^2 + t^2) dt with a^2 = 1 + u1^2/4
        let inner = |a2: f64| {
            // int_0^{1/2} sqrt(a2 + s^2) ds, closed form
            let t = 0.5f64;
            let a = a2.sqrt();
            0.5 * (t * (a2 + t * t).sqrt() + a2 * ((t + (a2 + t * t).sqrt()) / a).ln())
        };
        let n = 40_000;
        let mut acc = 0.0;
        for i in 0..n {
            let u1 = (i as f64 + 0.5) / n as f64;
            // substitute s = u2/2: du2 = 2 ds
            acc += 2.0 * inner(1.0 + u1 * u1 / 4.0);
        }
        let oracle = acc / n as f64;
        assert!(
            (est.value - oracle).abs() < 5e-6,
            "{} vs {}",
            est.value,
            oracle
        );
    }

    #[test]
    fn empty_region_is_zero() {
        let v = planes::vertical(dom(), std_xi());
        let est = riemannian_area_region(&v, dom(), |_| false, &QuadratureSpec::default());
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn area_monotone_and_additive() {
        let m = planes::mixed(dom(), std_xi());
        let spec = QuadratureSpec::default();
        let whole = riemannian_area_region(&m, dom(), |_| true, &spec);
        let left = riemannian_area_region(&m, dom(), |u| u[0] <= 0.0, &spec);
        let right = riemannian_area_region(&m, dom(), |u| u[0] > 0.0, &spec);
        assert!(left.value <= whole.value);
        let err = whole.error + left.error + right.error + 1e-9;
        assert!((left.value + right.value - whole.value).abs() <= err);
    }

    #[test]
    fn intrinsic_measure_vertical_plane_slice() {
        // ball of radius r slices the vertical plane in |u1| <= r,
        // |u2| <= k3 r^2: measure 4 k3 r^3
        let v = planes::vertical(dom(), std_xi());
        let norm = QuasiNorm::default();
        let r = 0.2;
        let ball = Ball::new(AlgebraElement::zero(), r, norm);
        let spec = QuadratureSpec::default().with_mesh(96, 3);
        let est = intrinsic_measure(&v, &ball, 3, &spec);
        let expect = 4.0 * norm.kappa3 * r * r * r;
        assert!(
            (est.value - expect).abs() < 0.01 * expect,
            "{} vs {}",
            est.value,
            expect
        );
    }

    #[test]
    fn intrinsic_measure_far_ball_is_zero() {
        let v = planes::vertical(dom(), std_xi());
        let ball = Ball::new(
            AlgebraElement::new(50.0, 0.0, 0.0, 0.0),
            0.1,
            QuasiNorm::default(),
        );
        let est = intrinsic_measure(&v, &ball, 3, &QuadratureSpec::default());
        assert_eq!(est.value, 0.0);
        assert_eq!(est.error, 0.0);
    }

    #[test]
    fn intrinsic_integrand_uses_top_block_only() {
        // on the mixed plane away from u2 = 0 the degree-5 block norm is
        // |u2|/2; integrate over a region avoiding the axis
        let m = planes::mixed(dom(), std_xi());
        let norm = QuasiNorm::default();
        // huge ball so the indicator is identically 1 on the window
        let ball = Ball::new(AlgebraElement::zero(), 50.0, norm);
        let spec = QuadratureSpec::default();
        let est = intrinsic_measure(&m, &ball, 5, &spec);
        // integral of |u2|/2 over [-1,1]^2 = 1/2 * 2 * (1/2 * 2) = 1
        assert!((est.value - 1.0).abs() < 1e-6, "{}", est.value);
    }

    #[test]
    fn line_integral_green_theorem() {
        // y2 dy1 over the unit circle in the layer chart: -pi
        let h = planes::horizontal_layer(Rect::symmetric(1.5, 1.5), std_xi());
        let omega = PolyOneForm {
            comp: [
                MultiPoly::var(1),
                MultiPoly::zero(),
                MultiPoly::zero(),
                MultiPoly::zero(),
            ],
        };
        let disk = ParamDisk {
            center: [0.0, 0.0],
            radius: 1.0,
        };
        let est = line_integral(&omega, &h, disk, &QuadratureSpec::default()).unwrap();
        assert!((est.value + std::f64::consts::PI).abs() < 1e-10);
        // exact forms integrate to zero over closed loops
        let dy1 = PolyOneForm {
            comp: [
                MultiPoly::one(),
                MultiPoly::zero(),
                MultiPoly::zero(),
                MultiPoly::zero(),
            ],
        };
        let est = line_integral(&dy1, &h, disk, &QuadratureSpec::default()).unwrap();
        assert!(est.value.abs() < 1e-12);
    }

    #[test]
    fn open_curves_are_rejected() {
        let omega = PolyOneForm {
            comp: [
                MultiPoly::one(),
                MultiPoly::zero(),
                MultiPoly::zero(),
                MultiPoly::zero(),
            ],
        };
        let err = line_integral_closed(
            &omega,
            |t| ([t, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]),
            &QuadratureSpec::default(),
        );
        assert!(matches!(err, Err(EngelError::OpenCurve(_))));
    }

    #[test]
    fn surface_integral_dtheta3_is_minus_area() {
        // dtheta3 = -dy1 ^ dy2 pulls back to -du1 ^ du2 on the layer chart
        let h = planes::horizontal_layer(Rect::symmetric(1.5, 1.5), std_xi());
        let d3 = exterior_derivative(&coframe_forms(&std_xi())[2]);
        let disk = ParamDisk {
            center: [0.0, 0.0],
            radius: 0.5,
        };
        let (est, _) = surface_integral_disk(&d3, &h, disk, &QuadratureSpec::default()).unwrap();
        let expect = -std::f64::consts::PI * 0.25;
        assert!((est.value - expect).abs() < 1e-6);
        // zero form integrates to zero
        let (z, _) =
            surface_integral_disk(&PolyTwoForm::zero(), &h, disk, &QuadratureSpec::default())
                .unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn stokes_on_vertical_plane_vanishes() {
        let v = planes::vertical(dom(), std_xi());
        let rep = stokes_check(&v, [0.0, 0.0], 0.5, &QuadratureSpec::default()).unwrap();
        assert!(rep.line.abs() < 1e-12);
        assert!(rep.surface.abs() < 1e-12);
        assert!(rep.defect <= rep.combined_error);
        assert!(rep.normalized_ratio.abs() < 1e-12);
    }

    #[test]
    fn stokes_identity_on_random_charts() {
        let mut rng = seeded_rng(307, 0);
        for _ in 0..5 {
            let chart = crate::surface::tests::random_poly_chart(&mut rng);
            let spec = QuadratureSpec::default().with_mesh(32, 3);
            let rep = stokes_check(&chart, [0.0, 0.0], 0.25, &spec).unwrap();
            assert!(
                rep.defect <= rep.combined_error.max(1e-10),
                "defect {} vs error {}",
                rep.defect,
                rep.combined_error
            );
        }
    }

    #[test]
    fn intrinsic_measure_left_translation_invariant() {
        // translating surface and ball by the same element leaves the
        // localized intrinsic measure unchanged
        let m = planes::mixed(dom(), std_xi());
        let norm = QuasiNorm::default();
        let xi_f = std_xi().to_f64();
        let spec = QuadratureSpec::default().with_mesh(48, 2);
        let q = AlgebraElement::new(0.5, -0.25, 0.75, -0.5);
        let q_rat = q.map(|x| crate::scalar::Rational::from_float(*x).unwrap());
        let base_point = AlgebraElement {
            c: m.value_f64([0.25, 0.25]),
        };
        let r = 0.15;
        let mu = intrinsic_measure(&m, &Ball::new(base_point.clone(), r, norm), 5, &spec).value;
        let translated = m.translate_left(&q_rat);
        let moved_center = crate::algebra::bch_product(&q, &base_point, &xi_f);
        let mu_t =
            intrinsic_measure(&translated, &Ball::new(moved_center, r, norm), 5, &spec).value;
        assert!(
            (mu - mu_t).abs() <= 1e-6 * mu.abs().max(1e-12),
            "{mu} vs {mu_t}"
        );
    }

    #[test]
    fn monte_carlo_agrees_with_midpoint() {
        let v = planes::mixed(dom(), std_xi());
        let window = Rect {
            lo: [0.0, 0.0],
            hi: [1.0, 1.0],
        };
        let mid = riemannian_area_region(&v, window, |_| true, &QuadratureSpec::default());
        let mut spec = QuadratureSpec::default();
        spec.monte_carlo = true;
        spec.mc_samples = 400_000;
        let mc = riemannian_area_region(&v, window, |_| true, &spec);
        assert!((mid.value - mc.value).abs() < 5.0 * mc.error.max(1e-4));
        // identical spec reproduces bit-identical values
        let mc2 = riemannian_area_region(&v, window, |_| true, &spec);
        assert_eq!(mc.value.to_bits(), mc2.value.to_bits());
    }
}
