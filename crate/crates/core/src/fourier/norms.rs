use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::config::Tolerances;
use crate::error::{Error, Result};

use super::system::{solve_system, EmbeddingProblem};
use super::trigpoly::TrigPoly;

/// `l2` norm of `|m|^alpha |n|^beta f(m, n)`.
pub fn sobolev_norm(f: &TrigPoly, alpha: f64, beta: f64) -> Result<f64> {
    if (alpha > 0.0 || beta > 0.0) && !f.is_proper() {
        return Err(Error::NotProper);
    }
    let s: f64 = f
        .terms()
        .map(|(&(m, n), c)| {
            let w = (m.unsigned_abs() as f64).powf(alpha) * (n.unsigned_abs() as f64).powf(beta);
            (w * c.abs()).powi(2)
        })
        .sum();
    Ok(s.sqrt())
}

/// Mean of `|f|` over a uniform grid of `oversample * (2B + 1)` points per
/// axis, `B` the bandwidth, synthesized by inverse FFT.
pub fn l1_norm(f: &TrigPoly, oversample: usize) -> Result<f64> {
    if oversample < 4 {
        return Err(Error::InvalidArgument(format!("oversample must be at least 4, got {oversample}")));
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    let g = oversample * (2 * f.bandwidth() as usize + 1);
    let mut grid = vec![Complex64::new(0.0, 0.0); g * g];
    for (&(m, n), c) in f.terms() {
        let i = m.rem_euclid(g as i64) as usize;
        let j = n.rem_euclid(g as i64) as usize;
        grid[i * g + j] += c.to_complex64();
    }
    let fft = FftPlanner::new().plan_fft_inverse(g);
    // rows, then columns through a transpose
    fft.process(&mut grid);
    let mut t = vec![Complex64::new(0.0, 0.0); g * g];
    for i in 0..g {
        for j in 0..g {
            t[j * g + i] = grid[i * g + j];
        }
    }
    fft.process(&mut t);
    Ok(t.iter().map(|z| z.norm()).sum::<f64>() / (g * g) as f64)
}

/// `sum_j ||phi_j||_W / sum_j ||mu_j||_1` with smoothness `((k-1)/2, (l-1)/2)`.
pub fn embedding_ratio(p: &EmbeddingProblem, oversample: usize, tol: &Tolerances) -> Result<f64> {
    let phis = solve_system(p, tol)?;
    let a = (p.k as f64 - 1.0) / 2.0;
    let b = (p.l as f64 - 1.0) / 2.0;
    let mut num = 0.0;
    for phi in &phis {
        num += sobolev_norm(phi, a, b)?;
    }
    let mut den = 0.0;
    for mu in &p.mus {
        den += l1_norm(mu, oversample)?;
    }
    if den == 0.0 {
        return Err(Error::InvalidArgument("all right-hand sides vanish".into()));
    }
    Ok(num / den)
}
