//! Bounded Nelder-Mead maximization, dimension-generic and deterministic.
//!
//! Used to refine grid searches for the spherical factor and the Federer
//! density center search. Trial points are clipped to the box constraints;
//! ties resolve by index order, so a fixed start yields a fixed result.

#[derive(Clone, Debug)]
pub struct SimplexOptions {
    pub max_iter: usize,
    pub tol: f64,
    /// Initial simplex edge, as a fraction of each box width.
    pub step_frac: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iter: 200,
            tol: 1e-10,
            step_frac: 0.1,
        }
    }
}

fn clip(x: &mut [f64], lo: &[f64], hi: &[f64]) {
    for i in 0..x.len() {
        x[i] = x[i].clamp(lo[i], hi[i]);
    }
}

/// Maximizes `f` over the box `[lo, hi]` starting near `start`.
/// Returns the best point and value.
pub fn maximize(
    mut f: impl FnMut(&[f64]) -> f64,
    start: &[f64],
    lo: &[f64],
    hi: &[f64],
    opts: &SimplexOptions,
) -> (Vec<f64>, f64) {
    let dim = start.len();
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    let mut base = start.to_vec();
    clip(&mut base, lo, hi);
    pts.push(base.clone());
    for i in 0..dim {
        let mut p = base.clone();
        let step = (hi[i] - lo[i]) * opts.step_frac;
        p[i] += if p[i] + step <= hi[i] { step } else { -step };
        clip(&mut p, lo, hi);
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    for _ in 0..opts.max_iter {
        // descending by value (maximization): order[0] is best
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| {
            vals[b]
                .partial_cmp(&vals[a])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];
        if (vals[best] - vals[worst]).abs() <= opts.tol * (1.0 + vals[best].abs()) {
            break;
        }
        let mut centroid = vec![0.0; dim];
        for &k in order.iter().take(dim) {
            for d in 0..dim {
                centroid[d] += pts[k][d];
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }
        let shifted = |t: f64| -> Vec<f64> {
            let mut p: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + t * (centroid[d] - pts[worst][d]))
                .collect();
            clip(&mut p, lo, hi);
            p
        };
        let xr = shifted(alpha);
        let vr = f(&xr);
        if vr > vals[second_worst] && vr <= vals[best] {
            pts[worst] = xr;
            vals[worst] = vr;
            continue;
        }
        if vr > vals[best] {
            let xe = shifted(gamma);
            let ve = f(&xe);
            if ve > vr {
                pts[worst] = xe;
                vals[worst] = ve;
            } else {
                pts[worst] = xr;
                vals[worst] = vr;
            }
            continue;
        }
        let xc = shifted(rho);
        let vc = f(&xc);
        if vc > vals[worst] {
            pts[worst] = xc;
            vals[worst] = vc;
            continue;
        }
        // shrink toward the best vertex
        let best_pt = pts[best].clone();
        for k in 0..=dim {
            if k == best {
                continue;
            }
            for d in 0..dim {
                pts[k][d] = best_pt[d] + sigma * (pts[k][d] - best_pt[d]);
            }
            vals[k] = f(&pts[k]);
        }
    }
    let mut best = 0;
    for k in 1..=dim {
        if vals[k] > vals[best] {
            best = k;
        }
    }
    (pts[best].clone(), vals[best])
}
