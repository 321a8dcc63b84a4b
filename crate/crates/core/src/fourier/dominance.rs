use num_complex::Complex64;

use crate::operator::{DiffOperator, MultiIndex};

/// Log-uniform steps per radius.
const STEPS: usize = 64;

/// Sample points with `max(|m|, |n|) = r`, off the axes.
fn annulus_points(r: f64) -> Vec<(f64, f64)> {
    let top = r.ln();
    let mut others = Vec::with_capacity(2 * STEPS);
    // t in [0, ln r) keeps the diagonal corners out of the grid
    for i in 0..STEPS {
        let e = (top * i as f64 / STEPS as f64).exp();
        others.push(e);
        others.push(r - e);
    }
    let mut pts = Vec::new();
    for s in others {
        if s <= 0.0 {
            continue;
        }
        for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            pts.push((sx * r, sy * s));
            pts.push((sx * s, sy * r));
        }
    }
    pts
}

/// For each `M`, the sup of `|m|^x |n|^y / |P_R(m, n)|` over the radii
/// `M, sqrt(2) M, 2M`. Zeros of the symbol give `+inf`.
pub fn dominance_constant(r: &DiffOperator, node: MultiIndex, mlist: &[u64]) -> Vec<f64> {
    mlist
        .iter()
        .map(|&m| {
            let mut sup: f64 = 0.0;
            for rad in [m as f64, std::f64::consts::SQRT_2 * m as f64, 2.0 * m as f64] {
                for (x, y) in annulus_points(rad) {
                    let p = match r.eval_charpoly(Complex64::new(x, 0.0), Complex64::new(y, 0.0)) {
                        Ok(p) => p.norm(),
                        Err(_) => 0.0,
                    };
                    let w = x.abs().powi(node.alpha1 as i32) * y.abs().powi(node.alpha2 as i32);
                    let q = if p == 0.0 { f64::INFINITY } else { w / p };
                    sup = sup.max(q);
                }
            }
            sup
        })
        .collect()
}
