//! Left-invariant frames, coframes and exterior calculus with general
//! structure coefficients.
//!
//! `frame_fields` returns the polynomial vector fields of the graded basis
//! in exponential coordinates. The dual coframe is obtained by exactly
//! inverting the (unitriangular) frame coefficient matrix, which guards the
//! long `theta4` expression against transcription slips: duality holds by
//! construction and the printed formula is checked against it in tests.

use crate::algebra::{StructureCoefficients, PAIRS};
use crate::poly::MultiPoly;
use crate::scalar::{Rational, Scalar};

/// Vector field with polynomial coefficients over `d/dy1 .. d/dy4`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyVectorField {
    pub comp: [MultiPoly; 4],
}

/// 1-form with polynomial coefficients over `dy1 .. dy4`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyOneForm {
    pub comp: [MultiPoly; 4],
}

/// 2-form with polynomial coefficients over `dy_i ^ dy_j`, `i < j`, in
/// [`PAIRS`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyTwoForm {
    pub comp: [MultiPoly; 6],
}

impl PolyVectorField {
    pub fn eval<S: Scalar>(&self, y: &[S; 4]) -> [S; 4] {
        std::array::from_fn(|i| self.comp[i].eval(y))
    }

    /// Applies the field to a function: `V(f) = sum_k V_k df/dy_k`.
    pub fn apply(&self, f: &MultiPoly) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for k in 0..4 {
            acc = &acc + &(&self.comp[k] * &f.diff(k));
        }
        acc
    }

    /// Vector field commutator `[V, W]`.
    pub fn commutator(&self, other: &PolyVectorField) -> PolyVectorField {
        PolyVectorField {
            comp: std::array::from_fn(|l| {
                &self.apply(&other.comp[l]) - &other.apply(&self.comp[l])
            }),
        }
    }
}

impl PolyOneForm {
    pub fn eval<S: Scalar>(&self, y: &[S; 4]) -> [S; 4] {
        std::array::from_fn(|i| self.comp[i].eval(y))
    }

    /// Pointwise pairing with a vector field, as an exact polynomial.
    pub fn pair(&self, v: &PolyVectorField) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for l in 0..4 {
            acc = &acc + &(&self.comp[l] * &v.comp[l]);
        }
        acc
    }
}

impl PolyTwoForm {
    pub fn zero() -> Self {
        PolyTwoForm {
            comp: std::array::from_fn(|_| MultiPoly::zero()),
        }
    }

    pub fn eval<S: Scalar>(&self, y: &[S; 4]) -> [S; 6] {
        std::array::from_fn(|i| self.comp[i].eval(y))
    }

    pub fn is_zero(&self) -> bool {
        self.comp.iter().all(|p| p.is_zero())
    }
}

/// Coefficient matrix of the frame: `frame_matrix(xi)[j][l]` is the
/// polynomial coefficient of `d/dy_l` in the field `Y~_j`. Unitriangular.
pub fn frame_matrix(xi: &StructureCoefficients<Rational>) -> [[MultiPoly; 4]; 4] {
    let y1 = MultiPoly::var(0);
    let y2 = MultiPoly::var(1);
    let y3 = MultiPoly::var(2);
    let xi12 = MultiPoly::constant(xi.xi12.clone());
    let xi13 = MultiPoly::constant(xi.xi13.clone());
    let xi23 = MultiPoly::constant(xi.xi23.clone());
    let half = |p: &MultiPoly| p.scale(&crate::scalar::rat(1, 2));
    let twelfth = |p: &MultiPoly| p.scale(&crate::scalar::rat(1, 12));

    let zero = MultiPoly::zero;
    let one = MultiPoly::one;

    // Y~1 = d1 - (y2/2) xi12 d3 - ((y3/2) xi13 + xi12 xi13 y1 y2 / 12
    //       + xi12 xi23 y2^2 / 12) d4
    let y1_d3 = -&half(&(&y2 * &xi12));
    let y1_d4 = -&(&(&half(&(&y3 * &xi13)) + &twelfth(&(&(&xi12 * &xi13) * &(&y1 * &y2))))
        + &twelfth(&(&(&xi12 * &xi23) * &(&y2 * &y2))));

    // Y~2 = d2 + (y1/2) xi12 d3 - ((y3/2) xi23 - xi12 xi23 y1 y2 / 12
    //       - xi12 xi13 y1^2 / 12) d4
    let y2_d3 = half(&(&y1 * &xi12));
    let y2_d4 = -&(&(&half(&(&y3 * &xi23)) - &twelfth(&(&(&xi12 * &xi23) * &(&y1 * &y2))))
        - &twelfth(&(&(&xi12 * &xi13) * &(&y1 * &y1))));

    // Y~3 = d3 + (y1 xi13 + y2 xi23)/2 d4
    let y3_d4 = half(&(&(&y1 * &xi13) + &(&y2 * &xi23)));

    [
        [one(), zero(), y1_d3, y1_d4],
        [zero(), one(), y2_d3, y2_d4],
        [zero(), zero(), one(), y3_d4],
        [zero(), zero(), zero(), one()],
    ]
}

/// The general graded frame `Y~1 .. Y~4` in exponential coordinates.
pub fn frame_fields(xi: &StructureCoefficients<Rational>) -> [PolyVectorField; 4] {
    let a = frame_matrix(xi);
    std::array::from_fn(|j| PolyVectorField { comp: a[j].clone() })
}

/// Exact inverse of a unitriangular 4x4 polynomial matrix via the Neumann
/// series; the nilpotent part has order at most 3, so no division occurs.
pub fn invert_unitriangular(a: &[[MultiPoly; 4]; 4]) -> [[MultiPoly; 4]; 4] {
    let mut n = a.clone();
    for i in 0..4 {
        n[i][i] = &n[i][i] - &MultiPoly::one();
    }
    let matmul = |x: &[[MultiPoly; 4]; 4], y: &[[MultiPoly; 4]; 4]| {
        let mut out: [[MultiPoly; 4]; 4] =
            std::array::from_fn(|_| std::array::from_fn(|_| MultiPoly::zero()));
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    out[i][j] = &out[i][j] + &(&x[i][k] * &y[k][j]);
                }
            }
        }
        out
    };
    let n2 = matmul(&n, &n);
    let n3 = matmul(&n2, &n);
    let mut inv: [[MultiPoly; 4]; 4] =
        std::array::from_fn(|_| std::array::from_fn(|_| MultiPoly::zero()));
    for i in 0..4 {
        for j in 0..4 {
            let id = if i == j {
                MultiPoly::one()
            } else {
                MultiPoly::zero()
            };
            inv[i][j] = &(&(&id - &n[i][j]) + &n2[i][j]) - &n3[i][j];
        }
    }
    inv
}

/// The left-invariant dual coframe `theta1 .. theta4`, computed by the
/// exact solve `theta_k(Y~_j) = delta_kj`.
pub fn coframe_forms(xi: &StructureCoefficients<Rational>) -> [PolyOneForm; 4] {
    let a = frame_matrix(xi);
    let a_inv = invert_unitriangular(&a);
    // theta_k = sum_l B[k][l] dy_l with B = (A^T)^{-1} = (A^{-1})^T.
    std::array::from_fn(|k| PolyOneForm {
        comp: std::array::from_fn(|l| a_inv[l][k].clone()),
    })
}

/// Exterior derivative of a polynomial 1-form, exact coefficient-wise.
pub fn exterior_derivative(omega: &PolyOneForm) -> PolyTwoForm {
    PolyTwoForm {
        comp: std::array::from_fn(|k| {
            let (i, j) = PAIRS[k];
            &omega.comp[j].diff(i) - &omega.comp[i].diff(j)
        }),
    }
}

/// Rewrites a 2-form given over `dy_i ^ dy_j` in the coframe basis
/// `theta_k ^ theta_m`.
pub fn two_form_in_coframe(
    omega: &PolyTwoForm,
    xi: &StructureCoefficients<Rational>,
) -> [MultiPoly; 6] {
    // dy_l = sum_k A[k][l] theta_k
    let a = frame_matrix(xi);
    std::array::from_fn(|out_k| {
        let (k, m) = PAIRS[out_k];
        let mut acc = MultiPoly::zero();
        for (in_k, &(i, j)) in PAIRS.iter().enumerate() {
            let wedge = &(&a[k][i] * &a[m][j]) - &(&a[m][i] * &a[k][j]);
            acc = &acc + &(&omega.comp[in_k] * &wedge);
        }
        acc
    })
}

/// Pullback of a 1-form through a polynomial map `R^2 -> R^4`; returns the
/// two `du_i` coefficients as polynomials in `(u1, u2)`.
pub fn pullback_one_form(omega: &PolyOneForm, chart: &[MultiPoly; 4]) -> [MultiPoly; 2] {
    std::array::from_fn(|i| {
        let mut acc = MultiPoly::zero();
        for l in 0..4 {
            acc = &acc + &(&omega.comp[l].subst(chart) * &chart[l].diff(i));
        }
        acc
    })
}

/// Pullback of a 2-form through a polynomial map `R^2 -> R^4`; returns the
/// `du1 ^ du2` coefficient.
pub fn pullback_two_form(omega: &PolyTwoForm, chart: &[MultiPoly; 4]) -> MultiPoly {
    let d1: [MultiPoly; 4] = std::array::from_fn(|l| chart[l].diff(0));
    let d2: [MultiPoly; 4] = std::array::from_fn(|l| chart[l].diff(1));
    let mut acc = MultiPoly::zero();
    for (k, &(i, j)) in PAIRS.iter().enumerate() {
        let minor = &(&d1[i] * &d2[j]) - &(&d1[j] * &d2[i]);
        acc = &acc + &(&omega.comp[k].subst(chart) * &minor);
    }
    acc
}
