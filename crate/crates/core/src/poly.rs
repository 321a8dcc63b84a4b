//! Univariate polynomials: exact rational roots, Sturm counts, numeric roots.
//!
//! Coefficient vectors are ascending (`p[k]` multiplies `t^k`).

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{ExactComplex, GaussRational, PiPoly};

pub type QPoly = Vec<BigRational>;

pub fn trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn eval(p: &[BigRational], t: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
}

pub fn derivative(p: &[BigRational]) -> QPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect(),
    )
}

/// Euclidean division; `d` must be nonzero after trimming.
pub fn div_rem(p: &[BigRational], d: &[BigRational]) -> (QPoly, QPoly) {
    let d = trim(d.to_vec());
    let dl = d.last().expect("division by zero polynomial").clone();
    let mut r = trim(p.to_vec());
    if r.len() < d.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - d.len() + 1];
    while r.len() >= d.len() && !r.is_empty() {
        let shift = r.len() - d.len();
        let c = r.last().unwrap() / &dl;
        for (k, dc) in d.iter().enumerate() {
            r[shift + k] = &r[shift + k] - &c * dc;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

pub fn gcd(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    match x.last().cloned() {
        Some(l) => x.into_iter().map(|c| c / &l).collect(),
        None => x,
    }
}

/// Integer coefficients with unit content, same roots.
fn primitive_integer(p: &[BigRational]) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

/// Distinct rational roots with multiplicities, ascending.
pub fn rational_roots(p: &[BigRational]) -> Vec<(BigRational, usize)> {
    let mut p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let zeros = p.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        out.push((BigRational::zero(), zeros));
        p.drain(..zeros);
    }
    if p.len() > 1 {
        for cand in candidates(&p) {
            let mut mult = 0;
            loop {
                if p.len() <= 1 || !eval(&p, &cand).is_zero() {
                    break;
                }
                let lin = vec![-cand.clone(), BigRational::one()];
                p = div_rem(&p, &lin).0;
                mult += 1;
            }
            if mult > 0 {
                out.push((cand, mult));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn candidates(p: &[BigRational]) -> Vec<BigRational> {
    let ints = primitive_integer(p);
    let a0 = ints[0].abs().to_u64().filter(|v| *v <= DIVISOR_LIMIT);
    let an = ints.last().unwrap().abs().to_u64().filter(|v| *v <= DIVISOR_LIMIT);
    let mut out = Vec::new();
    if let (Some(a0), Some(an)) = (a0, an) {
        for num in divisors(a0) {
            for den in divisors(an) {
                if num.gcd(&den) != 1 {
                    continue;
                }
                let r = BigRational::new(BigInt::from(num), BigInt::from(den));
                out.push(-r.clone());
                out.push(r);
            }
        }
    } else {
        let fl: Vec<Complex64> = p
            .iter()
            .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
            .collect();
        for z in complex_roots(&fl) {
            if z.im.abs() <= 1e-6 * (1.0 + z.re.abs()) {
                if let Some(r) = rationalize(z.re, 1_000_000) {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// Best continued-fraction approximation with bounded denominator.
fn rationalize(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

fn sign(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut n = 0;
    for s in signs.filter(|s| *s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Number of distinct real roots in `(0, inf)`.
pub fn count_positive_roots(p: &[BigRational]) -> usize {
    let mut p = trim(p.to_vec());
    let zeros = p.iter().take_while(|c| c.is_zero()).count();
    p.drain(..zeros.min(p.len()));
    if p.len() <= 1 {
        return 0;
    }
    let mut seq = vec![p.clone(), derivative(&p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let (_, r) = div_rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let at_zero = sign_changes(seq.iter().map(|s| sign(&s[0])));
    let at_inf = sign_changes(seq.iter().map(|s| sign(s.last().unwrap())));
    at_zero - at_inf
}

/// All complex roots by companion-matrix eigenvalues, polished by Newton.
pub fn complex_roots(p: &[Complex64]) -> Vec<Complex64> {
    let mut p: Vec<Complex64> = p.to_vec();
    while p.last().is_some_and(|c| c.norm() == 0.0) {
        p.pop();
    }
    if p.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let zeros = p.iter().take_while(|c| c.norm() == 0.0).count();
    roots.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
    let q = &p[zeros..];
    let n = q.len() - 1;
    if n == 0 {
        return roots;
    }
    let lead = q[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -q[i] / lead;
    }
    let eig = m.clone().schur().eigenvalues().unwrap_or_else(|| {
        nalgebra::DVector::from_iterator(n, (0..n).map(|i| m[(i, i)]))
    });
    for mut z in eig.iter().copied() {
        for _ in 0..3 {
            let (v, dv) = horner_with_derivative(q, z);
            if dv.norm() == 0.0 {
                break;
            }
            let step = v / dv;
            if !step.is_finite() {
                break;
            }
            let nz = z - step;
            if horner_with_derivative(q, nz).0.norm() <= v.norm() {
                z = nz;
            } else {
                break;
            }
        }
        roots.push(z);
    }
    roots
}

fn horner_with_derivative(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for c in p.iter().rev() {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

/// Real polynomials whose common real algebraic zeros are exactly the real
/// algebraic zeros of `sum coeffs[k] t^k`. `None` if any coefficient is
/// inexact. `pi` is treated as an indeterminate, which is sound for rational
/// candidate roots only.
pub(crate) fn algebraic_components(coeffs: &[ExactComplex]) -> Option<Vec<QPoly>> {
    let mut parts = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        parts.push(c.parts()?);
    }
    let mut den = PiPoly::constant(GaussRational::one());
    for (_, d) in &parts {
        if d.is_one() {
            continue;
        }
        let g = PiPoly::gcd(&den, d);
        den = den.mul(&d.div_rem(&g).0);
    }
    let nums: Vec<PiPoly> = parts
        .iter()
        .map(|(n, d)| if d.is_one() { n.mul(&den) } else { n.mul(&den.div_rem(d).0) })
        .collect();
    let top = nums.iter().map(|n| n.coeffs().len()).max().unwrap_or(0);
    let mut out = Vec::new();
    for e in 0..top {
        let get = |n: &PiPoly| n.coeffs().get(e).cloned().unwrap_or_else(GaussRational::zero);
        let re = trim(nums.iter().map(|n| get(n).re).collect());
        let im = trim(nums.iter().map(|n| get(n).im).collect());
        for comp in [re, im] {
            if !comp.is_empty() {
                out.push(comp);
            }
        }
    }
    Some(out)
}

/// Common rational roots with multiplicity of a polynomial with exact
/// field coefficients. `None` if inexact.
pub fn field_rational_roots(coeffs: &[ExactComplex]) -> Option<Vec<(BigRational, usize)>> {
    let comps = algebraic_components(coeffs)?;
    let g = comps.iter().fold(Vec::new(), |acc: QPoly, c| if acc.is_empty() { gcd(c, c) } else { gcd(&acc, c) });
    Some(rational_roots(&g))
}

/// Rational-coefficient real polynomial if every coefficient is a real
/// rational free of `pi`.
pub(crate) fn as_rational_poly(coeffs: &[ExactComplex]) -> Option<QPoly> {
    coeffs
        .iter()
        .map(|c| c.as_gauss().filter(|g| g.is_real()).map(|g| g.re))
        .collect::<Option<Vec<_>>>()
        .map(trim)
}

/// Gaussian-rational coefficients if all are exact and free of `pi`.
pub(crate) fn as_gauss_poly(coeffs: &[ExactComplex]) -> Option<Vec<GaussRational>> {
    coeffs.iter().map(|c| c.as_gauss()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> QPoly {
        v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (2t - 1)^2 (t + 3) t
        let p = q(&[0, 3, -11, 8, 4]);
        let roots = rational_roots(&p);
        assert_eq!(roots, vec![(r(-3, 1), 1), (r(0, 1), 1), (r(1, 2), 2)]);
    }

    #[test]
    fn no_rational_roots() {
        assert!(rational_roots(&q(&[1, 0, 1])).is_empty());
        assert!(rational_roots(&q(&[-2, 0, 1])).is_empty());
    }

    #[test]
    fn sturm_positive_count() {
        // (t - 1)(t - 2)(t + 5)
        assert_eq!(count_positive_roots(&q(&[10, -13, 2, 1])), 2);
        assert_eq!(count_positive_roots(&q(&[1, 0, 1])), 0);
        // (t - 1)^2 (t + 1)
        assert_eq!(count_positive_roots(&q(&[1, -1, -1, 1])), 1);
        // t^2 - 2
        assert_eq!(count_positive_roots(&q(&[-2, 0, 1])), 1);
    }

    #[test]
    fn companion_roots() {
        let p = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let mut roots = complex_roots(&p);
        roots.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((roots[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((roots[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn field_roots_ignore_pi_scaling() {
        let pi = ExactComplex::pi();
        // pi (t - 1)(t + 1)
        let coeffs = vec![-&pi, ExactComplex::zero(), pi.clone()];
        let roots = field_rational_roots(&coeffs).unwrap();
        assert_eq!(roots, vec![(r(-1, 1), 1), (r(1, 1), 1)]);
    }
}
