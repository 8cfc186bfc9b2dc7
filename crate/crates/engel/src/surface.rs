//! Parametrized surface patches and their tangent 2-vectors.
//!
//! A chart is a map from a rectangle in the parameter plane into the group,
//! carried either as four exact polynomials in `(u1, u2)` or as a callable
//! with analytic partials. The tangent 2-vector in the left-invariant frame
//! is computed two independent ways: from the closed-form coefficient
//! expression, and by wedging the frame coefficients of the partial
//! derivatives; tests pin the two paths against each other.
//!
//! Degree decisions on the exact path use exact zero tests; the floating
//! path uses the shared relative threshold `zero_tol`.

use crate::algebra::{
    bch_product, AlgebraElement, FrameTwoVector, StructureCoefficients, DEGREE_WEIGHTS, PAIRS,
};
use crate::error::EngelError;
use crate::frame::{frame_matrix, pullback_one_form};
use crate::poly::MultiPoly;
use crate::scalar::{Rational, Scalar};
use std::sync::Arc;

/// Default relative zero threshold for numeric degree decisions.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

/// Closed rectangle in the parameter plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Rect {
    pub fn new(lo: [f64; 2], hi: [f64; 2]) -> Result<Self, EngelError> {
        if !(lo[0] < hi[0] && lo[1] < hi[1]) {
            return Err(EngelError::Validation("empty parameter rectangle".into()));
        }
        Ok(Rect { lo, hi })
    }

    pub fn symmetric(a: f64, b: f64) -> Self {
        Rect {
            lo: [-a, -b],
            hi: [a, b],
        }
    }

    pub fn contains(&self, u: [f64; 2]) -> bool {
        let eps = 1e-12;
        u[0] >= self.lo[0] - eps
            && u[0] <= self.hi[0] + eps
            && u[1] >= self.lo[1] - eps
            && u[1] <= self.hi[1] + eps
    }

    /// Regular grid with `n` points per axis, endpoints included.
    pub fn grid(&self, n: usize) -> impl Iterator<Item = [f64; 2]> + '_ {
        let n = n.max(2);
        (0..n).flat_map(move |i| {
            (0..n).map(move |j| {
                [
                    self.lo[0] + (self.hi[0] - self.lo[0]) * i as f64 / (n - 1) as f64,
                    self.lo[1] + (self.hi[1] - self.lo[1]) * j as f64 / (n - 1) as f64,
                ]
            })
        })
    }
}

/// A chart supplied as a callable with analytic partial derivatives.
/// Finite differencing never enters the core; it exists only as a test
/// oracle.
pub trait CallableChart: Send + Sync {
    fn value(&self, u: [f64; 2]) -> [f64; 4];
    /// Rows are components, columns the `u1`, `u2` partials.
    fn jacobian(&self, u: [f64; 2]) -> [[f64; 2]; 4];
}

#[derive(Clone)]
enum ChartKind {
    Poly([MultiPoly; 4]),
    Callable(Arc<dyn CallableChart>),
}

/// A parametrized surface patch with its base structure coefficients.
#[derive(Clone)]
pub struct SurfaceChart {
    pub domain: Rect,
    pub xi: StructureCoefficients<Rational>,
    pub zero_tol: f64,
    kind: ChartKind,
}

/// Result of a degree sweep over a grid.
#[derive(Clone, Debug)]
pub struct SurfaceDegreeReport {
    /// Max pointwise degree over the grid.
    pub degree: u32,
    /// Sampled points of degree below the max, with their degrees.
    pub singular: Vec<([f64; 2], u32)>,
}

/// Componentwise suprema of the degree-constraint coefficients over a grid.
#[derive(Clone, Debug)]
pub struct ConstraintResiduals {
    /// sup |Y1^Y4|, sup |Y2^Y4|, sup |Y3^Y4| coefficients.
    pub c14: f64,
    pub c24: f64,
    pub c34: f64,
    /// sup |Y1^Y3|, sup |Y2^Y3| (the additional degree-2 constraints).
    pub c13: f64,
    pub c23: f64,
}

impl ConstraintResiduals {
    /// True when the first three vanish within `tol`: degree <= 3 on the grid.
    pub fn degree_at_most_3(&self, tol: f64) -> bool {
        self.c14 <= tol && self.c24 <= tol && self.c34 <= tol
    }
}

/// The six coefficients of Eq.-style tangent 2-vectors, written once over
/// any scalar: `phi` are the chart components at the point, `m` the six
/// Jacobian minors in `PAIRS` order.
pub fn two_vector_from_parts<S: Scalar>(
    phi: &[S; 4],
    m: &[S; 6],
    xi: &StructureCoefficients<S>,
) -> FrameTwoVector<S> {
    let (m12, m13, m14) = (m[0].clone(), m[1].clone(), m[2].clone());
    let (m23, m24, m34) = (m[3].clone(), m[4].clone(), m[5].clone());
    let (p1, p2, p3) = (phi[0].clone(), phi[1].clone(), phi[2].clone());
    let xi12 = xi.xi12.clone();
    let xi13 = xi.xi13.clone();
    let xi23 = xi.xi23.clone();

    let c12 = m12.clone();
    let c13 = m13.clone() - (xi12.clone() * p1.clone() * m12.clone()).scale(1, 2);
    let c23 = m23.clone() - (xi12.clone() * p2.clone() * m12.clone()).scale(1, 2);

    // half * (xi13 phi1 + xi23 phi2)
    let lin = (xi13.clone() * p1.clone() + xi23.clone() * p2.clone()).scale(1, 2);
    // xi12 (xi23 phi1 phi2 + xi13 phi1^2), xi12 (xi13 phi1 phi2 + xi23 phi2^2)
    let q1 = xi12.clone()
        * (xi23.clone() * p1.clone() * p2.clone() + xi13.clone() * p1.clone() * p1.clone());
    let q2 = xi12.clone()
        * (xi13.clone() * p1.clone() * p2.clone() + xi23.clone() * p2.clone() * p2.clone());

    let c14 = m14 - lin.clone() * m13.clone()
        + (q1.scale(1, 6) + (xi23.clone() * p3.clone()).scale(1, 2)) * m12.clone();
    let c24 = m24.clone() - lin * m23.clone()
        + (q2.scale(1, 6) - (xi13.clone() * p3.clone()).scale(1, 2)) * m12.clone();

    let c34 = m34 + (q1.scale(1, 12) - (xi23.clone() * p3.clone()).scale(1, 2)) * m23
        - (xi12.clone() * p1.clone()).scale(1, 2) * m24
        + (xi12.clone() * p2.clone()).scale(1, 2) * m[2].clone()
        - (q2.scale(1, 12) + (xi13.clone() * p3.clone()).scale(1, 2)) * m13
        + ((xi12.clone() * xi13 * p1 * p3.clone()).scale(1, 4)
            + (xi12 * xi23 * p2 * p3).scale(1, 4))
            * m12;

    FrameTwoVector::new([c12, c13, c14, c23, c24, c34])
}

impl SurfaceChart {
    pub fn poly(
        components: [MultiPoly; 4],
        domain: Rect,
        xi: StructureCoefficients<Rational>,
    ) -> Self {
        SurfaceChart {
            domain,
            xi,
            zero_tol: DEFAULT_ZERO_TOL,
            kind: ChartKind::Poly(components),
        }
    }

    pub fn callable(
        f: Arc<dyn CallableChart>,
        domain: Rect,
        xi: StructureCoefficients<Rational>,
    ) -> Self {
        SurfaceChart {
            domain,
            xi,
            zero_tol: DEFAULT_ZERO_TOL,
            kind: ChartKind::Callable(f),
        }
    }

    pub fn with_zero_tol(mut self, tol: f64) -> Self {
        self.zero_tol = tol;
        self
    }

    /// The polynomial components, when the chart is exact.
    pub fn components(&self) -> Option<&[MultiPoly; 4]> {
        match &self.kind {
            ChartKind::Poly(c) => Some(c),
            ChartKind::Callable(_) => None,
        }
    }

    pub fn is_poly(&self) -> bool {
        matches!(self.kind, ChartKind::Poly(_))
    }

    pub fn check_domain(&self, u: [f64; 2]) -> Result<(), EngelError> {
        if self.domain.contains(u) {
            Ok(())
        } else {
            Err(EngelError::OutsideDomain(u[0], u[1]))
        }
    }

    pub fn value_f64(&self, u: [f64; 2]) -> [f64; 4] {
        match &self.kind {
            ChartKind::Poly(c) => std::array::from_fn(|i| c[i].eval2(&u)),
            ChartKind::Callable(f) => f.value(u),
        }
    }

    pub fn jacobian_f64(&self, u: [f64; 2]) -> [[f64; 2]; 4] {
        match &self.kind {
            ChartKind::Poly(c) => {
                std::array::from_fn(|i| [c[i].diff(0).eval2(&u), c[i].diff(1).eval2(&u)])
            }
            ChartKind::Callable(f) => f.jacobian(u),
        }
    }

    pub fn value_exact(&self, u: &[Rational; 2]) -> Option<[Rational; 4]> {
        self.components()
            .map(|c| std::array::from_fn(|i| c[i].eval2(u)))
    }

    /// Smallest singular value of the 4x2 Jacobian.
    pub fn min_singular_value(&self, u: [f64; 2]) -> f64 {
        let j = self.jacobian_f64(u);
        let mut g = [[0.0f64; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                g[a][b] = (0..4).map(|i| j[i][a] * j[i][b]).sum();
            }
        }
        let tr = g[0][0] + g[1][1];
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        (((tr - disc) / 2.0).max(0.0)).sqrt()
    }

    fn check_rank(&self, u: [f64; 2]) -> Result<(), EngelError> {
        let sigma = self.min_singular_value(u);
        if sigma < 1e-9 {
            Err(EngelError::RankDeficient(u[0], u[1]))
        } else {
            Ok(())
        }
    }

    /// The six 2x2 minors of the Jacobian, rows `(i,j)` in `PAIRS` order.
    pub fn minors_f64(&self, u: [f64; 2]) -> Result<[f64; 6], EngelError> {
        self.check_domain(u)?;
        let j = self.jacobian_f64(u);
        Ok(std::array::from_fn(|k| {
            let (a, b) = PAIRS[k];
            j[a][0] * j[b][1] - j[b][0] * j[a][1]
        }))
    }

    /// Exact minors for polynomial charts.
    pub fn minors_exact(&self, u: &[Rational; 2]) -> Option<[Rational; 6]> {
        let c = self.components()?;
        let j: [[Rational; 2]; 4] =
            std::array::from_fn(|i| [c[i].diff(0).eval2(u), c[i].diff(1).eval2(u)]);
        Some(std::array::from_fn(|k| {
            let (a, b) = PAIRS[k];
            j[a][0].clone() * j[b][1].clone() - j[b][0].clone() * j[a][1].clone()
        }))
    }

    /// Tangent 2-vector in the left-invariant frame, floating path.
    pub fn tangent_two_vector_f64(&self, u: [f64; 2]) -> Result<FrameTwoVector<f64>, EngelError> {
        self.check_domain(u)?;
        self.check_rank(u)?;
        let phi = self.value_f64(u);
        let m = self.minors_f64(u)?;
        Ok(two_vector_from_parts(&phi, &m, &self.xi.to_f64()))
    }

    /// Tangent 2-vector with exact rational coefficients (polynomial charts).
    pub fn tangent_two_vector_exact(
        &self,
        u: &[Rational; 2],
    ) -> Result<FrameTwoVector<Rational>, EngelError> {
        let uf = [u[0].to_f64(), u[1].to_f64()];
        self.check_domain(uf)?;
        self.check_rank(uf)?;
        let phi = self
            .value_exact(u)
            .ok_or_else(|| EngelError::Validation("exact path needs a polynomial chart".into()))?;
        let m = self.minors_exact(u).unwrap();
        Ok(two_vector_from_parts(&phi, &m, &self.xi))
    }

    /// The six tangent 2-vector coefficients as exact polynomials in
    /// `(u1, u2)`, for polynomial charts.
    pub fn two_vector_polys(&self) -> Option<FrameTwoVector<MultiPoly>> {
        let c = self.components()?;
        let j: [[MultiPoly; 2]; 4] = std::array::from_fn(|i| [c[i].diff(0), c[i].diff(1)]);
        let m: [MultiPoly; 6] = std::array::from_fn(|k| {
            let (a, b) = PAIRS[k];
            &(&j[a][0] * &j[b][1]) - &(&j[b][0] * &j[a][1])
        });
        let xi_p = self.xi.map(|r| MultiPoly::constant(r.clone()));
        Some(two_vector_from_parts(c, &m, &xi_p))
    }

    /// Frame coefficients of the two partial-derivative fields: the 4x2
    /// array `c` with `d_{u_i} Phi = sum_l c[l][i] Y_l(Phi)`, obtained by
    /// solving against the (unitriangular) frame coefficient matrix.
    pub fn change_of_coefficients(&self, u: [f64; 2]) -> Result<[[f64; 2]; 4], EngelError> {
        self.check_domain(u)?;
        self.check_rank(u)?;
        let y = self.value_f64(u);
        let jac = self.jacobian_f64(u);
        let a = frame_matrix(&self.xi);
        let a_at: [[f64; 4]; 4] =
            std::array::from_fn(|r| std::array::from_fn(|c_| a[r][c_].eval(&y)));
        // Solve A^T c_col = dPhi column-wise; A^T is lower unitriangular.
        let mut c = [[0.0f64; 2]; 4];
        for col in 0..2 {
            for l in 0..4 {
                let mut v = jac[l][col];
                for k in 0..l {
                    v -= a_at[k][l] * c[k][col];
                }
                c[l][col] = v;
            }
        }
        Ok(c)
    }

    /// Frame coefficients of an ambient velocity vector at `Phi(u)`.
    pub fn frame_coefficients_of(&self, u: [f64; 2], w: [f64; 4]) -> [f64; 4] {
        let y = self.value_f64(u);
        let a = frame_matrix(&self.xi);
        let a_at: [[f64; 4]; 4] =
            std::array::from_fn(|r| std::array::from_fn(|c_| a[r][c_].eval(&y)));
        let mut c = [0.0f64; 4];
        for l in 0..4 {
            let mut v = w[l];
            for k in 0..l {
                v -= a_at[k][l] * c[k];
            }
            c[l] = v;
        }
        c
    }

    /// Pointwise degree at `u`, numeric path.
    pub fn pointwise_degree_f64(&self, u: [f64; 2]) -> Result<u32, EngelError> {
        self.tangent_two_vector_f64(u)?.degree_tol(self.zero_tol)
    }

    /// Pointwise degree at a rational parameter point, exact.
    pub fn pointwise_degree_exact(&self, u: &[Rational; 2]) -> Result<u32, EngelError> {
        self.tangent_two_vector_exact(u)?.degree_exact()
    }

    /// Degree sweep over an `n x n` grid: the surface degree is the max,
    /// and points strictly below it are reported as sampled singular
    /// points. Polynomial charts classify exactly at the (dyadic) grid
    /// nodes.
    pub fn surface_degree(&self, n: usize) -> Result<SurfaceDegreeReport, EngelError> {
        let mut max_deg = 0u32;
        let mut per_point: Vec<([f64; 2], u32)> = Vec::new();
        let exact = self.is_poly();
        for u in self.domain.grid(n) {
            let d = if exact {
                let ur = [
                    Rational::from_float(u[0]).unwrap(),
                    Rational::from_float(u[1]).unwrap(),
                ];
                self.pointwise_degree_exact(&ur)?
            } else {
                self.pointwise_degree_f64(u)?
            };
            max_deg = max_deg.max(d);
            per_point.push((u, d));
        }
        let singular = per_point
            .into_iter()
            .filter(|&(_, d)| d < max_deg)
            .collect();
        Ok(SurfaceDegreeReport {
            degree: max_deg,
            singular,
        })
    }

    /// Basis of the homogeneous tangent space at `u`: the plane that
    /// annihilates the top-degree block of the tangent 2-vector.
    pub fn homogeneous_tangent_space(&self, u: [f64; 2]) -> Result<[[f64; 4]; 2], EngelError> {
        let tv = self.tangent_two_vector_f64(u)?;
        let n = tv.degree_tol(self.zero_tol)?;
        let normalize = |mut v: [f64; 4]| {
            let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in &mut v {
                *x /= s;
            }
            v
        };
        let e = |i: usize| {
            let mut v = [0.0; 4];
            v[i] = 1.0;
            v
        };
        Ok(match n {
            2 => [e(0), e(1)],
            3 => {
                let h = [*tv.component(0, 2), *tv.component(1, 2)];
                [normalize([h[0], h[1], 0.0, 0.0]), e(2)]
            }
            4 => {
                let h = [*tv.component(0, 3), *tv.component(1, 3)];
                [normalize([h[0], h[1], 0.0, 0.0]), e(3)]
            }
            _ => [e(2), e(3)],
        })
    }

    /// Suprema over an `n x n` grid of the 2-vector coefficients that the
    /// degree constraints force to vanish. Polynomial charts evaluate the
    /// exact coefficient polynomials, so identical zeros report exactly 0.
    pub fn degree_constraint_residuals(&self, n: usize) -> Result<ConstraintResiduals, EngelError> {
        let mut sup = [0.0f64; 6];
        if let Some(tvp) = self.two_vector_polys() {
            // zero polynomials stay exactly zero regardless of the grid
            for (k, p) in tvp.c.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                for u in self.domain.grid(n) {
                    sup[k] = sup[k].max(p.eval2(&u).abs());
                }
            }
        } else {
            for u in self.domain.grid(n) {
                let tv = self.tangent_two_vector_f64(u)?;
                for k in 0..6 {
                    sup[k] = sup[k].max(tv.c[k].abs());
                }
            }
        }
        Ok(ConstraintResiduals {
            c14: sup[2],
            c24: sup[4],
            c34: sup[5],
            c13: sup[1],
            c23: sup[3],
        })
    }

    /// Sup over an `n x n` grid of the coefficient norms of the pulled-back
    /// contact forms `theta3`, `theta4`. A genuine surface patch always
    /// reports a strictly positive value; no smooth surface of degree 2
    /// exists.
    pub fn horizontality_residual(&self, n: usize) -> Result<f64, EngelError> {
        let th = crate::frame::coframe_forms(&self.xi);
        if let Some(c) = self.components() {
            let pb3 = pullback_one_form(&th[2], c);
            let pb4 = pullback_one_form(&th[3], c);
            let mut sup3 = 0.0f64;
            let mut sup4 = 0.0f64;
            for u in self.domain.grid(n) {
                sup3 = sup3.max(pb3[0].eval2(&u).abs()).max(pb3[1].eval2(&u).abs());
                sup4 = sup4.max(pb4[0].eval2(&u).abs()).max(pb4[1].eval2(&u).abs());
            }
            Ok(sup3 + sup4)
        } else {
            let mut sup3 = 0.0f64;
            let mut sup4 = 0.0f64;
            for u in self.domain.grid(n) {
                let y = self.value_f64(u);
                let jac = self.jacobian_f64(u);
                for (form, sup) in [(&th[2], &mut sup3), (&th[3], &mut sup4)] {
                    let coeffs = form.eval(&y);
                    for col in 0..2 {
                        let v: f64 = (0..4).map(|l| coeffs[l] * jac[l][col]).sum();
                        *sup = sup.max(v.abs());
                    }
                }
            }
            Ok(sup3 + sup4)
        }
    }

    /// Degree of the boundary circle `u(t) = center + radius (cos t, sin t)`
    /// as a curve in the group: max over samples of the 1-vector degree of
    /// its velocity.
    pub fn boundary_degree(
        &self,
        center: [f64; 2],
        radius: f64,
        samples: usize,
    ) -> Result<u32, EngelError> {
        let mut max_deg = 0u32;
        for k in 0..samples {
            let t = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            let u = [center[0] + radius * t.cos(), center[1] + radius * t.sin()];
            self.check_domain(u)?;
            let du = [-radius * t.sin(), radius * t.cos()];
            let jac = self.jacobian_f64(u);
            let w: [f64; 4] = std::array::from_fn(|i| jac[i][0] * du[0] + jac[i][1] * du[1]);
            let v = self.frame_coefficients_of(u, w);
            let sup = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let mut deg = 0u32;
            for i in 0..4 {
                if v[i].abs() >= self.zero_tol * (1.0 + sup) {
                    deg = deg.max(DEGREE_WEIGHTS[i]);
                }
            }
            max_deg = max_deg.max(deg);
        }
        Ok(max_deg)
    }

    /// Left translation by a group element; exact for polynomial charts.
    pub fn translate_left(&self, q: &AlgebraElement<Rational>) -> SurfaceChart {
        match &self.kind {
            ChartKind::Poly(c) => {
                let q_poly = q.map(|r| MultiPoly::constant(r.clone()));
                let chart_elem = AlgebraElement { c: c.clone() };
                let xi_poly = self.xi.map(|r| MultiPoly::constant(r.clone()));
                let translated = bch_product(&q_poly, &chart_elem, &xi_poly);
                SurfaceChart {
                    domain: self.domain,
                    xi: self.xi.clone(),
                    zero_tol: self.zero_tol,
                    kind: ChartKind::Poly(translated.c),
                }
            }
            ChartKind::Callable(f) => {
                let translated = Arc::new(TranslatedChart {
                    q: q.to_f64(),
                    xi: self.xi.to_f64(),
                    inner: f.clone(),
                });
                SurfaceChart {
                    domain: self.domain,
                    xi: self.xi.clone(),
                    zero_tol: self.zero_tol,
                    kind: ChartKind::Callable(translated),
                }
            }
        }
    }

    /// Precomposition with an affine parameter change `u = a + M t`;
    /// exact for polynomial charts.
    pub fn reparametrize_affine(
        &self,
        a: &[Rational; 2],
        m: &[[Rational; 2]; 2],
        domain: Rect,
    ) -> Option<SurfaceChart> {
        let c = self.components()?;
        let t1 = MultiPoly::var(0);
        let t2 = MultiPoly::var(1);
        let sub1 =
            &(&t1.scale(&m[0][0]) + &t2.scale(&m[0][1])) + &MultiPoly::constant(a[0].clone());
        let sub2 =
            &(&t1.scale(&m[1][0]) + &t2.scale(&m[1][1])) + &MultiPoly::constant(a[1].clone());
        let maps = [sub1, sub2, MultiPoly::zero(), MultiPoly::zero()];
        let comps: [MultiPoly; 4] = std::array::from_fn(|i| c[i].subst(&maps));
        Some(SurfaceChart {
            domain,
            xi: self.xi.clone(),
            zero_tol: self.zero_tol,
            kind: ChartKind::Poly(comps),
        })
    }
}

/// Left translate of a callable chart, with the chain rule through the
/// polynomial left-multiplication map.
struct TranslatedChart {
    q: AlgebraElement<f64>,
    xi: StructureCoefficients<f64>,
    inner: Arc<dyn CallableChart>,
}

impl TranslatedChart {
    /// d/dy (q * y), the Jacobian of left multiplication at `y`.
    fn left_mult_jacobian(&self, y: &[f64; 4]) -> [[f64; 4]; 4] {
        let q = &self.q.c;
        let (xi12, xi13, xi23) = (self.xi.xi12, self.xi.xi13, self.xi.xi23);
        // z = q * y from the closed BCH form; differentiate in y.
        let mut j = [[0.0; 4]; 4];
        j[0][0] = 1.0;
        j[1][1] = 1.0;
        // z3 = q3 + y3 + xi12 (q1 y2 - q2 y1)/2
        j[2][0] = -xi12 * q[1] / 2.0;
        j[2][1] = xi12 * q[0] / 2.0;
        j[2][2] = 1.0;
        // z4 = q4 + y4 + (xi13 (q1 y3 - q3 y1) + xi23 (q2 y3 - q3 y2))/2
        //      + xi12 (q1 y2 - q2 y1)(xi13 (q1 - y1) + xi23 (q2 - y2))/12
        let s = q[0] * y[1] - q[1] * y[0];
        let t = xi13 * (q[0] - y[0]) + xi23 * (q[1] - y[1]);
        j[3][0] = -xi13 * q[2] / 2.0 + xi12 * (-q[1] * t + s * (-xi13)) / 12.0;
        j[3][1] = -xi23 * q[2] / 2.0 + xi12 * (q[0] * t + s * (-xi23)) / 12.0;
        j[3][2] = (xi13 * q[0] + xi23 * q[1]) / 2.0;
        j[3][3] = 1.0;
        j
    }
}

impl CallableChart for TranslatedChart {
    fn value(&self, u: [f64; 2]) -> [f64; 4] {
        let y = AlgebraElement {
            c: self.inner.value(u),
        };
        bch_product(&self.q, &y, &self.xi).c
    }

    fn jacobian(&self, u: [f64; 2]) -> [[f64; 2]; 4] {
        let y = self.inner.value(u);
        let jy = self.inner.jacobian(u);
        let jl = self.left_mult_jacobian(&y);
        std::array::from_fn(|i| {
            std::array::from_fn(|col| (0..4).map(|k| jl[i][k] * jy[k][col]).sum())
        })
    }
}

/// Convenience constructors for the canonical coordinate planes used
/// throughout the tests and fixtures.
pub mod planes {
    use super::*;

    fn var(i: usize) -> MultiPoly {
        MultiPoly::var(i)
    }

    fn zero() -> MultiPoly {
        MultiPoly::zero()
    }

    /// `(0, u1, u2, 0)`: the vertical plane, degree 3.
    pub fn vertical(domain: Rect, xi: StructureCoefficients<Rational>) -> SurfaceChart {
        SurfaceChart::poly([zero(), var(0), var(1), zero()], domain, xi)
    }

    /// `(u1, u2, 0, 0)`: tangent to the horizontal layer at the origin.
    pub fn horizontal_layer(domain: Rect, xi: StructureCoefficients<Rational>) -> SurfaceChart {
        SurfaceChart::poly([var(0), var(1), zero(), zero()], domain, xi)
    }

    /// `(u1, 0, u2, 0)`: the mixed-degree test plane (3/4/5 stratified).
    pub fn mixed(domain: Rect, xi: StructureCoefficients<Rational>) -> SurfaceChart {
        SurfaceChart::poly([var(0), zero(), var(1), zero()], domain, xi)
    }

    /// `(u1, 0, 0, u2)`: degree 4 everywhere.
    pub fn plane14(domain: Rect, xi: StructureCoefficients<Rational>) -> SurfaceChart {
        SurfaceChart::poly([var(0), zero(), zero(), var(1)], domain, xi)
    }

    /// `(0, 0, u1, u2)`: degree 5 everywhere (transversal).
    pub fn plane34(domain: Rect, xi: StructureCoefficients<Rational>) -> SurfaceChart {
        SurfaceChart::poly([zero(), zero(), var(0), var(1)], domain, xi)
    }
}
