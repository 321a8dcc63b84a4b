//! `int_eps^R e^{i b s} (e^{i u s^{l/k}} - e^{i v s^{l/k}}) / s ds`.

use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Subinterval budget of the adaptive scheme.
const MAX_INTERVALS: usize = 200_000;
/// Cap on the initial partition.
const MAX_PRESPLIT: usize = 20_000;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Kronrod estimate, error estimate, integral of `|f|`.
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for j in 0..7 {
        let x = h * XGK[j];
        let (f1, f2) = (f(c - x), f(c + x));
        k += (f1 + f2) * WGK[j];
        abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            g += (f1 + f2) * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm(), abs * h.abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Globally adaptive Gauss-Kronrod over the given breakpoints.
fn integrate<F: Fn(f64) -> Complex64>(f: &F, breaks: &[f64], rel_tol: f64) -> Result<Complex64> {
    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut abs = 0.0;
    for w in breaks.windows(2) {
        let (v, e, a) = gk15(f, w[0], w[1]);
        total += v;
        err += e;
        abs += a;
        heap.push(Panel { a: w[0], b: w[1], value: v, err: e });
    }
    let floor = 50.0 * f64::EPSILON * abs;
    while err > (rel_tol * total.norm()).max(floor) {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureFailure {
                error: err,
                intervals: heap.len(),
            });
        }
        let p = heap.pop().expect("nonempty");
        let mid = 0.5 * (p.a + p.b);
        let (v1, e1, _) = gk15(f, p.a, mid);
        let (v2, e2, _) = gk15(f, mid, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.err;
        heap.push(Panel { a: p.a, b: mid, value: v1, err: e1 });
        heap.push(Panel { a: mid, b: p.b, value: v2, err: e2 });
    }
    // re-sum to shed drift from the incremental updates
    Ok(heap.iter().map(|p| p.value).sum())
}

/// Breakpoints: dyadic from `eps` to `r` through `1`, refined so no panel
/// is longer than a period of `e^{i b s}`.
fn breakpoints(eps: f64, r: f64, b: f64) -> Vec<f64> {
    let mut pts = vec![eps];
    let mut x = eps;
    loop {
        let next = if x < 1.0 { (2.0 * x).min(1.0) } else { 2.0 * x };
        if next >= r {
            break;
        }
        pts.push(next);
        x = next;
    }
    pts.push(r);
    if b == 0.0 {
        return pts;
    }
    let period = 2.0 * std::f64::consts::PI / b.abs();
    let pieces: f64 = pts.windows(2).map(|w| ((w[1] - w[0]) / period).ceil()).sum();
    let period = period * (pieces / MAX_PRESPLIT as f64).max(1.0);
    let mut out = vec![eps];
    for w in pts.windows(2) {
        let n = ((w[1] - w[0]) / period).ceil().max(1.0) as usize;
        for j in 1..n {
            out.push(w[0] + (w[1] - w[0]) * j as f64 / n as f64);
        }
        out.push(w[1]);
    }
    out
}

#[allow(clippy::too_many_arguments)]
pub fn oscillatory_probe(u: Complex64, v: Complex64, k: u32, l: u32, b: f64, eps: f64, r: f64, rel_tol: f64) -> Result<Complex64> {
    if !(u.im > 0.0 && v.im > 0.0) {
        return Err(Error::InvalidArgument("u and v need positive imaginary parts".into()));
    }
    if !(eps > 0.0 && eps < r && r.is_finite()) || k == 0 || l == 0 {
        return Err(Error::InvalidArgument("need 0 < eps < R and positive k, l".into()));
    }
    if u == v {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let i = Complex64::new(0.0, 1.0);
    let g = l as f64 / k as f64;
    let f = |s: f64| {
        let w = s.powf(g);
        (i * b * s).exp() * ((i * u * w).exp() - (i * v * w).exp()) / s
    };
    integrate(&f, &breakpoints(eps, r, b), rel_tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeSample {
    pub b: f64,
    pub eps: f64,
    pub r: f64,
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
}

/// Probe every `(b, eps, R)` with `eps < R`; returns the samples and the sup.
#[allow(clippy::too_many_arguments)]
pub fn oscillatory_sweep(
    u: Complex64,
    v: Complex64,
    k: u32,
    l: u32,
    bs: &[f64],
    epss: &[f64],
    rs: &[f64],
    rel_tol: f64,
) -> Result<(Vec<ProbeSample>, f64)> {
    let mut out = Vec::new();
    let mut sup: f64 = 0.0;
    for &b in bs {
        for &eps in epss {
            for &r in rs {
                if eps >= r {
                    continue;
                }
                let z = oscillatory_probe(u, v, k, l, b, eps, r, rel_tol)?;
                sup = sup.max(z.norm());
                out.push(ProbeSample {
                    b,
                    eps,
                    r,
                    re: z.re,
                    im: z.im,
                    modulus: z.norm(),
                });
            }
        }
    }
    Ok((out, sup))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk15_is_exact_on_polynomials() {
        let (v, e, _) = gk15(&|x: f64| Complex64::new(x.powi(6), 0.0), 0.0, 1.0);
        assert!((v.re - 1.0 / 7.0).abs() < 1e-15);
        assert!(e < 1e-12);
    }

    #[test]
    fn closed_form_case() {
        // u = i, v = 2i, k = l = 1, b = 0 on [1, 2]: (e^{-s} - e^{-2s}) / s
        let z = oscillatory_probe(Complex64::new(0.0, 1.0), Complex64::new(0.0, 2.0), 1, 1, 0.0, 1.0, 2.0, 1e-10).unwrap();
        // E1(1) - 2 E1(2) + E1(4)
        let expect = 0.219_383_934_395_520_3 - 2.0 * 0.048_900_510_708_061_12 + 0.003_779_352_409_848_906;
        assert!((z.re - expect).abs() < 1e-9, "{z}");
        assert!(z.im.abs() < 1e-12);
    }

    #[test]
    fn equal_arguments_vanish() {
        let u = Complex64::new(0.5, 1.0);
        let z = oscillatory_probe(u, u, 1, 3, 10.0, 1e-4, 1e3, 1e-6).unwrap();
        assert_eq!(z, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn short_interval() {
        let (u, v) = (Complex64::new(0.0, 1.0), Complex64::new(0.0, 2.0));
        for h in [1e-1, 1e-2, 1e-3] {
            let z = oscillatory_probe(u, v, 1, 3, 0.0, 1.0, 1.0 + h, 1e-8).unwrap();
            assert!(z.norm() <= h);
        }
    }
}
