//! Weighted mixed-difference tails of the model multiplier
//! `(iu)^{alpha+a} (iv)^beta / ((iu)^{2a} + s (iv)^{2b})`.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelMultiplier {
    pub alpha: u32,
    pub beta: u32,
    pub a: u32,
    pub b: u32,
    /// `+1` or `-1`.
    pub sign: i32,
}

impl ModelMultiplier {
    pub fn new(alpha: u32, beta: u32, a: u32, b: u32, sign: i32) -> Result<Self> {
        if a == 0 || b == 0 || sign.abs() != 1 {
            return Err(Error::InvalidArgument("need a, b >= 1 and sign = +1 or -1".into()));
        }
        // alpha/a + beta/b < 1
        if (alpha as u64) * (b as u64) + (beta as u64) * (a as u64) >= (a as u64) * (b as u64) {
            return Err(Error::NotSubordinate { alpha, beta });
        }
        // (iu)^{2a} = (-1)^a u^{2a}; both terms need the same sign
        let pa = if a.is_multiple_of(2) { 1 } else { -1 };
        let pb = if b.is_multiple_of(2) { 1 } else { -1 };
        if pa != sign * pb {
            return Err(Error::DenominatorVanishes);
        }
        Ok(ModelMultiplier { alpha, beta, a, b, sign })
    }

    /// Symbol value, `0` at the origin.
    pub fn eval(&self, u: f64, v: f64) -> Complex64 {
        if u == 0.0 && v == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let iu = Complex64::new(0.0, u);
        let iv = Complex64::new(0.0, v);
        let num = iu.powu(self.alpha + self.a) * iv.powu(self.beta);
        let den = iu.powu(2 * self.a) + iv.powu(2 * self.b) * self.sign as f64;
        num / den
    }
}

/// `S(M) = sum log(m+1) log(n+1) |d_x d_y nu(m, n)|` over the first quadrant
/// with `M <= max(m, n) <= mmax`.
pub fn multiplier_tail(num_exponents: (u32, u32), line: (u32, u32), sign: i32, m: u64, mmax: u64) -> Result<f64> {
    Ok(multiplier_tails(num_exponents, line, sign, &[m], mmax)?[0])
}

/// [`multiplier_tail`] for several `M` from one grid evaluation.
pub fn multiplier_tails(num_exponents: (u32, u32), line: (u32, u32), sign: i32, ms: &[u64], mmax: u64) -> Result<Vec<f64>> {
    let nu = ModelMultiplier::new(num_exponents.0, num_exponents.1, line.0, line.1, sign)?;
    let w = mmax as usize + 2;
    let mut grid = vec![Complex64::new(0.0, 0.0); w * w];
    for i in 0..w {
        for j in 0..w {
            grid[i * w + j] = nu.eval(i as f64, j as f64);
        }
    }
    let at = |i: usize, j: usize| grid[i * w + j];
    // by_ring[r] = sum over max(m, n) = r
    let mut by_ring = vec![0.0; mmax as usize + 1];
    for i in 1..=mmax as usize {
        for j in 1..=mmax as usize {
            let dd = at(i + 1, j + 1) - at(i + 1, j) - at(i, j + 1) + at(i, j);
            let t = ((i + 1) as f64).ln() * ((j + 1) as f64).ln() * dd.norm();
            by_ring[i.max(j)] += t;
        }
    }
    Ok(ms
        .iter()
        .map(|&m| by_ring.iter().skip(m as usize).sum())
        .collect())
}
