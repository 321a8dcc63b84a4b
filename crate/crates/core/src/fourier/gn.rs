use crate::error::{Error, Result};

/// Samples of a function on an `n x n` grid, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFn {
    pub n: usize,
    pub values: Vec<f64>,
}

impl GridFn {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::InvalidArgument(format!("expected {} samples, got {}", n * n, values.len())));
        }
        Ok(GridFn { n, values })
    }

    pub fn from_fn<F: Fn(usize, usize) -> f64>(n: usize, f: F) -> Self {
        let values = (0..n * n).map(|k| f(k / n, k % n)).collect();
        GridFn { n, values }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

/// `(sum f^2, sum |D1 f| * sum |D2 f|)` with forward differences; the
/// grid spacing cancels between the two sides.
pub fn gn_check(g: &GridFn) -> Result<(f64, f64)> {
    let n = g.n;
    let edge = (0..n).any(|k| g.at(0, k) != 0.0 || g.at(n - 1, k) != 0.0 || g.at(k, 0) != 0.0 || g.at(k, n - 1) != 0.0);
    if n > 0 && edge {
        return Err(Error::NotCompactlySupported);
    }
    let lhs = g.values.iter().map(|v| v * v).sum();
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    for i in 0..n.saturating_sub(1) {
        for j in 0..n {
            d1 += (g.at(i + 1, j) - g.at(i, j)).abs();
            d2 += (g.at(j, i + 1) - g.at(j, i)).abs();
        }
    }
    Ok((lhs, d1 * d2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(n: usize) -> Vec<f64> {
        let mid = (n - 1) as f64 / 2.0;
        (0..n).map(|i| 1.0 - (i as f64 - mid).abs() / mid).collect()
    }

    #[test]
    fn tensor_triangle() {
        let n = 33;
        let t = triangle(n);
        let g = GridFn::from_fn(n, |i, j| t[i] * t[j]);
        let (lhs, rhs) = gn_check(&g).unwrap();
        let s2: f64 = t.iter().map(|x| x * x).sum();
        let s1: f64 = t.iter().sum();
        let tv: f64 = t.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
        assert!((lhs - s2 * s2).abs() < 1e-9);
        assert!((rhs - (tv * s1).powi(2)).abs() < 1e-9);
        assert!(lhs <= rhs);
    }

    #[test]
    fn zero_and_boundary() {
        assert_eq!(gn_check(&GridFn::from_fn(8, |_, _| 0.0)).unwrap(), (0.0, 0.0));
        assert_eq!(gn_check(&GridFn::from_fn(8, |_, _| 1.0)), Err(Error::NotCompactlySupported));
    }
}
