//! Adapted graded frames and graph-form charts at a surface point.
//!
//! At a base point the surface is left-translated to the origin; the
//! top-degree block of its tangent 2-vector singles out the homogeneous
//! tangent plane, and the only orthonormal graded-basis freedom in the
//! Engel group, a rotation of the horizontal layer (plus signs), is chosen
//! in closed form so the plane is spanned by graded basis directions. The
//! chart is then reparametrized to graph form over those directions by a
//! damped Newton inversion, after which its Jacobian at the origin has the
//! strata block form: identity entries at the graph rows, zeros below.

use crate::algebra::{AlgebraElement, StructureCoefficients};
use crate::error::EngelError;
use crate::scalar::Rational;
use crate::surface::SurfaceChart;

/// Everything the adapted-frame construction reports at one point.
#[derive(Clone, Debug)]
pub struct AdaptedFrameReport {
    /// Pointwise degree at the base point.
    pub degree: u32,
    /// Strata ranks (alpha1, alpha2, alpha3); degree = 1*a1 + 2*a2 + 3*a3.
    pub alpha: [usize; 3],
    /// Rotation angle applied to the horizontal layer.
    pub angle: f64,
    /// Structure coefficients of the rotated basis.
    pub xi_prime: StructureCoefficients<f64>,
    /// Ambient coordinate indices (zero-based) carrying the graph form.
    pub graph_rows: [usize; 2],
    /// Induced degrees of the two graph parameters.
    pub induced_degrees: [u32; 2],
    /// New basis vectors expressed in the original graded coordinates.
    pub basis: [[f64; 4]; 4],
    /// Max |entry| over the positions the strata block form requires to
    /// vanish in the recentred Jacobian at 0.
    pub block_form_residual: f64,
}

/// A translated, rotated chart together with its graph-form inversion.
pub struct AdaptedChart {
    pub report: AdaptedFrameReport,
    translated: SurfaceChart,
    rot: [[f64; 2]; 2],
    base_u: [f64; 2],
}

impl AdaptedChart {
    /// Rotated recentred chart value at parameter `u` (pre graph form).
    pub fn rotated_value(&self, u: [f64; 2]) -> [f64; 4] {
        let y = self
            .translated
            .value_f64([self.base_u[0] + u[0], self.base_u[1] + u[1]]);
        self.apply_rotation(y)
    }

    pub fn rotated_jacobian(&self, u: [f64; 2]) -> [[f64; 2]; 4] {
        let j = self
            .translated
            .jacobian_f64([self.base_u[0] + u[0], self.base_u[1] + u[1]]);
        let r = &self.rot;
        [
            [
                r[0][0] * j[0][0] + r[0][1] * j[1][0],
                r[0][0] * j[0][1] + r[0][1] * j[1][1],
            ],
            [
                r[1][0] * j[0][0] + r[1][1] * j[1][0],
                r[1][0] * j[0][1] + r[1][1] * j[1][1],
            ],
            j[2],
            j[3],
        ]
    }

    fn apply_rotation(&self, y: [f64; 4]) -> [f64; 4] {
        let r = &self.rot;
        [
            r[0][0] * y[0] + r[0][1] * y[1],
            r[1][0] * y[0] + r[1][1] * y[1],
            y[2],
            y[3],
        ]
    }

    /// Graph-form chart: solves the graph components for `t` by damped
    /// Newton from the origin and returns the full recentred point.
    pub fn graph_value(&self, t: [f64; 2]) -> Result<[f64; 4], EngelError> {
        let [r1, r2] = self.report.graph_rows;
        let mut u = [0.0f64; 2];
        let target_scale = 1.0 + t[0].abs() + t[1].abs();
        let tol = 1e-13 * target_scale;
        let residual_at = |u: [f64; 2]| -> ([f64; 2], f64) {
            let y = self.rotated_value(u);
            let res = [y[r1] - t[0], y[r2] - t[1]];
            (res, res[0].abs() + res[1].abs())
        };
        let (mut res, mut res_norm) = residual_at(u);
        for _ in 0..60 {
            if res_norm <= tol {
                return Ok(self.rotated_value(u));
            }
            let j = self.rotated_jacobian(u);
            let a = [j[r1], j[r2]];
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            if det.abs() < 1e-14 {
                break;
            }
            let step = [
                (a[1][1] * res[0] - a[0][1] * res[1]) / det,
                (-a[1][0] * res[0] + a[0][0] * res[1]) / det,
            ];
            // damping: halve until the residual actually shrinks
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let trial = [u[0] - lambda * step[0], u[1] - lambda * step[1]];
                let (tres, tnorm) = residual_at(trial);
                if tnorm < res_norm {
                    u = trial;
                    res = tres;
                    res_norm = tnorm;
                    accepted = true;
                    break;
                }
                lambda /= 2.0;
            }
            if !accepted {
                break;
            }
        }
        if res_norm <= tol * 10.0 {
            Ok(self.rotated_value(u))
        } else {
            Err(EngelError::NewtonDiverged { residual: res_norm })
        }
    }
}

impl AdaptedChart {
    /// Graph-chart value together with its analytic Jacobian via the
    /// implicit function theorem (no finite differencing).
    pub fn graph_point_and_jacobian(
        &self,
        t: [f64; 2],
    ) -> Result<([f64; 4], [[f64; 2]; 4]), EngelError> {
        let y = self.graph_value(t)?;
        // recover the parameter from the graph rows and chain through
        let [r1, r2] = self.report.graph_rows;
        let u = self.invert_graph_params(t)?;
        let j = self.rotated_jacobian(u);
        let g = [j[r1], j[r2]];
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        if det.abs() < 1e-14 {
            return Err(EngelError::NewtonDiverged {
                residual: det.abs(),
            });
        }
        let ginv = [
            [g[1][1] / det, -g[0][1] / det],
            [-g[1][0] / det, g[0][0] / det],
        ];
        let jac: [[f64; 2]; 4] = std::array::from_fn(|i| {
            std::array::from_fn(|col| j[i][0] * ginv[0][col] + j[i][1] * ginv[1][col])
        });
        Ok((y, jac))
    }

    fn invert_graph_params(&self, t: [f64; 2]) -> Result<[f64; 2], EngelError> {
        let [r1, r2] = self.report.graph_rows;
        let mut u = [0.0f64; 2];
        let tol = 1e-13 * (1.0 + t[0].abs() + t[1].abs());
        for _ in 0..60 {
            let y = self.rotated_value(u);
            let res = [y[r1] - t[0], y[r2] - t[1]];
            let norm = res[0].abs() + res[1].abs();
            if norm <= tol {
                return Ok(u);
            }
            let j = self.rotated_jacobian(u);
            let a = [j[r1], j[r2]];
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            if det.abs() < 1e-14 {
                return Err(EngelError::NewtonDiverged { residual: norm });
            }
            let mut lambda = 1.0;
            let mut moved = false;
            for _ in 0..30 {
                let trial = [
                    u[0] - lambda * (a[1][1] * res[0] - a[0][1] * res[1]) / det,
                    u[1] - lambda * (-a[1][0] * res[0] + a[0][0] * res[1]) / det,
                ];
                let ty = self.rotated_value(trial);
                let tnorm = (ty[r1] - t[0]).abs() + (ty[r2] - t[1]).abs();
                if tnorm < norm {
                    u = trial;
                    moved = true;
                    break;
                }
                lambda /= 2.0;
            }
            if !moved {
                let y = self.rotated_value(u);
                let res = (y[r1] - t[0]).abs() + (y[r2] - t[1]).abs();
                if res <= tol * 10.0 {
                    return Ok(u);
                }
                return Err(EngelError::NewtonDiverged { residual: res });
            }
        }
        let y = self.rotated_value(u);
        let res = (y[r1] - t[0]).abs() + (y[r2] - t[1]).abs();
        if res <= tol * 10.0 {
            Ok(u)
        } else {
            Err(EngelError::NewtonDiverged { residual: res })
        }
    }

    /// Wraps the graph chart as a callable surface over `domain`, carrying
    /// the rotated structure coefficients. The domain must stay inside the
    /// graph-form neighborhood: the Newton inversion panics outside it.
    pub fn into_surface_chart(self, domain: crate::surface::Rect) -> SurfaceChart {
        let xi_prime = StructureCoefficients {
            xi12: Rational::from_float(self.report.xi_prime.xi12).unwrap(),
            xi13: Rational::from_float(self.report.xi_prime.xi13).unwrap(),
            xi23: Rational::from_float(self.report.xi_prime.xi23).unwrap(),
        };
        let zero_tol = self.translated.zero_tol;
        SurfaceChart::callable(
            std::sync::Arc::new(GraphChartFn { inner: self }),
            domain,
            xi_prime,
        )
        .with_zero_tol(zero_tol)
    }
}

/// Callable view of a graph-form adapted chart.
struct GraphChartFn {
    inner: AdaptedChart,
}

impl crate::surface::CallableChart for GraphChartFn {
    fn value(&self, u: [f64; 2]) -> [f64; 4] {
        self.inner
            .graph_value(u)
            .expect("graph chart evaluated outside its neighborhood")
    }

    fn jacobian(&self, u: [f64; 2]) -> [[f64; 2]; 4] {
        self.inner
            .graph_point_and_jacobian(u)
            .expect("graph chart evaluated outside its neighborhood")
            .1
    }
}

/// Strata of the four graded coordinates (1-based stratum numbers).
const STRATUM: [usize; 4] = [1, 1, 2, 3];

fn snap(x: f64) -> f64 {
    // rotation entries a few ulps away from {0, +-1} come from atan2 of
    // axis-aligned directions; snapping keeps flat fixtures exactly flat
    if x.abs() < 1e-14 {
        0.0
    } else if (x.abs() - 1.0).abs() < 1e-14 {
        x.signum()
    } else {
        x
    }
}

/// Builds the adapted frame and graph chart of `chart` at the domain point
/// `u0`.
pub fn adapted_frame(chart: &SurfaceChart, u0: [f64; 2]) -> Result<AdaptedChart, EngelError> {
    chart.check_domain(u0)?;

    // Translate the surface so the base point is the group identity.
    // Polynomial charts with dyadic base points translate exactly.
    let translated = if chart.is_poly() {
        let ur = [
            Rational::from_float(u0[0])
                .ok_or_else(|| EngelError::Validation("non-finite base point".into()))?,
            Rational::from_float(u0[1]).unwrap(),
        ];
        let p = chart.value_exact(&ur).unwrap();
        let q = AlgebraElement { c: p }.neg();
        chart.translate_left(&q)
    } else {
        let p = AlgebraElement {
            c: chart.value_f64(u0),
        };
        // exact rational carrier for the f64 inverse
        let q = p.map(|x| Rational::from_float(*x).unwrap()).neg();
        chart.translate_left(&q)
    };

    let tv = translated.tangent_two_vector_f64(u0)?;
    let degree = tv.degree_tol(chart.zero_tol)?;

    let (alpha, angle, graph_rows): ([usize; 3], f64, [usize; 2]) = match degree {
        2 => ([2, 0, 0], 0.0, [0, 1]),
        3 => {
            let h = [*tv.component(0, 2), *tv.component(1, 2)];
            ([1, 1, 0], h[1].atan2(h[0]), [0, 2])
        }
        4 => {
            let h = [*tv.component(0, 3), *tv.component(1, 3)];
            ([1, 0, 1], h[1].atan2(h[0]), [0, 3])
        }
        _ => ([0, 1, 1], 0.0, [2, 3]),
    };

    let (c, s) = (snap(angle.cos()), snap(angle.sin()));
    // coordinates transform by R^T when the basis rotates by R
    let rot = [[c, s], [-s, c]];
    let xi = chart.xi.to_f64();
    let xi_prime = StructureCoefficients {
        xi12: xi.xi12,
        xi13: xi.xi13 * c + xi.xi23 * s,
        xi23: -xi.xi13 * s + xi.xi23 * c,
    };
    let basis = [
        [c, s, 0.0, 0.0],
        [-s, c, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ];
    let induced_degrees = [STRATUM[graph_rows[0]] as u32, STRATUM[graph_rows[1]] as u32];

    let mut adapted = AdaptedChart {
        report: AdaptedFrameReport {
            degree,
            alpha,
            angle,
            xi_prime,
            graph_rows,
            induced_degrees,
            basis,
            block_form_residual: 0.0,
        },
        translated,
        rot,
        base_u: u0,
    };

    // Jacobian block-form check at the recentred origin: using the chain
    // rule through the graph inversion, D(graph chart)(0) = J * G^{-1}
    // where G is the graph-row submatrix of J = D(rotated chart)(0).
    let j = adapted.rotated_jacobian([0.0, 0.0]);
    let [r1, r2] = graph_rows;
    let g = [j[r1], j[r2]];
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    if det.abs() < 1e-12 {
        return Err(EngelError::RankDeficient(u0[0], u0[1]));
    }
    let ginv = [
        [g[1][1] / det, -g[0][1] / det],
        [-g[1][0] / det, g[0][0] / det],
    ];
    let d_graph: [[f64; 2]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|col| j[i][0] * ginv[0][col] + j[i][1] * ginv[1][col])
    });
    // Block form at the origin: graph rows are rows of the identity, and a
    // non-graph row of stratum s must vanish against columns of stratum
    // b <= s; columns of strictly later strata are the starred entries.
    let col_stratum = [STRATUM[r1], STRATUM[r2]];
    let mut residual = 0.0f64;
    for i in 0..4 {
        for col in 0..2 {
            let expected_identity = (i == r1 && col == 0) || (i == r2 && col == 1);
            let pinned_zero =
                (i == r1 || i == r2 || col_stratum[col] <= STRATUM[i]) && !expected_identity;
            if expected_identity {
                residual = residual.max((d_graph[i][col] - 1.0).abs());
            } else if pinned_zero {
                residual = residual.max(d_graph[i][col].abs());
            }
        }
    }
    adapted.report.block_form_residual = residual;
    Ok(adapted)
}
