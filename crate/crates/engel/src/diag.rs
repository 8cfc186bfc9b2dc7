//! Independent validation oracles.
//!
//! These deliberately avoid the closed-form code paths they are used to
//! check: the flow integrator validates the frame fields against the group
//! law, and the finite-difference Jacobian validates exact chart partials.

use crate::frame::PolyVectorField;

/// Integrates `y' = V(y)` from `y0` over `[0, t]` with `steps` classical
/// RK4 steps. The frame fields are polynomial, so accuracy is O(h^4).
pub fn flow_rk4(v: &PolyVectorField, y0: [f64; 4], t: f64, steps: usize) -> [f64; 4] {
    let h = t / steps as f64;
    let mut y = y0;
    let add =
        |a: [f64; 4], b: [f64; 4], s: f64| -> [f64; 4] { std::array::from_fn(|i| a[i] + s * b[i]) };
    for _ in 0..steps {
        let k1 = v.eval(&y);
        let k2 = v.eval(&add(y, k1, h / 2.0));
        let k3 = v.eval(&add(y, k2, h / 2.0));
        let k4 = v.eval(&add(y, k3, h));
        for i in 0..4 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

/// Central finite-difference Jacobian of a map `R^2 -> R^4`.
pub fn fd_jacobian(f: impl Fn([f64; 2]) -> [f64; 4], u: [f64; 2], h: f64) -> [[f64; 2]; 4] {
    let mut out = [[0.0; 2]; 4];
    for k in 0..2 {
        let mut up = u;
        let mut dn = u;
        up[k] += h;
        dn[k] -= h;
        let fu = f(up);
        let fd = f(dn);
        for i in 0..4 {
            out[i][k] = (fu[i] - fd[i]) / (2.0 * h);
        }
    }
    out
}
