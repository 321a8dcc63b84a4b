use num_complex::Complex64;

use crate::error::{Error, Result};

/// Number of `k`-th roots of `z` with positive imaginary part.
pub fn halfplane_root_count(z: Complex64, k: u32) -> Result<u32> {
    check(z, k)?;
    Ok(if k.is_multiple_of(2) {
        k / 2
    } else if z.im > 0.0 {
        k.div_ceil(2)
    } else {
        (k - 1) / 2
    })
}

/// Same count by enumerating all roots.
pub fn halfplane_root_count_brute(z: Complex64, k: u32) -> Result<u32> {
    check(z, k)?;
    let r = z.norm().powf(1.0 / k as f64);
    let theta = z.arg();
    let tau = 2.0 * std::f64::consts::PI;
    Ok((0..k)
        .filter(|j| Complex64::from_polar(r, (theta + tau * *j as f64) / k as f64).im > 0.0)
        .count() as u32)
}

fn check(z: Complex64, k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("root degree must be positive".into()));
    }
    if z.im == 0.0 {
        return Err(Error::RealArgument);
    }
    Ok(())
}
