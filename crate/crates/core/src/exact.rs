//! Exact scalars for operator coefficients.
//!
//! Values live in the field of rational functions in `pi` with Gaussian
//! rational coefficients. `pi` is transcendental over the rationals, so zero
//! tests and equality are decided exactly. Values built from decimal input
//! are carried as `Complex64` and poison every result they touch.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `re + im*i` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|inv| self.mul(&inv))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `i^k`.
    pub fn i_pow(k: u32) -> Self {
        match k % 4 {
            0 => Self::from_ints(1, 0),
            1 => Self::from_ints(0, 1),
            2 => Self::from_ints(-1, 0),
            _ => Self::from_ints(0, -1),
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// True when both parts are integers.
    pub fn is_gaussian_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        let im_abs = self.im.abs();
        let im_part = if im_abs.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", fmt_rat(&im_abs))
        };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{im_part}")
            } else {
                write!(f, "{im_part}")
            }
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "({} {} {})", fmt_rat(&self.re), sign, im_part)
        }
    }
}

/// Polynomial in `pi`, coefficients ascending, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct PiPoly(Vec<GaussRational>);

impl PiPoly {
    pub fn zero() -> Self {
        PiPoly(Vec::new())
    }

    pub fn constant(c: GaussRational) -> Self {
        PiPoly(vec![c]).trimmed()
    }

    pub fn monomial(c: GaussRational, deg: usize) -> Self {
        let mut v = vec![GaussRational::zero(); deg + 1];
        v[deg] = c;
        PiPoly(v).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[GaussRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&GaussRational> {
        self.0.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = GaussRational::zero();
        let v = (0..n)
            .map(|k| self.0.get(k).unwrap_or(&z).add(o.0.get(k).unwrap_or(&z)))
            .collect();
        PiPoly(v).trimmed()
    }

    pub fn neg(&self) -> Self {
        PiPoly(self.0.iter().map(|c| c.neg()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![GaussRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        PiPoly(v).trimmed()
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        PiPoly(self.0.iter().map(|a| a.mul(c)).collect()).trimmed()
    }

    pub fn conj(&self) -> Self {
        PiPoly(self.0.iter().map(|a| a.conj()).collect())
    }

    /// Euclidean division; `d` must be nonzero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d.lead().expect("division by zero polynomial").inv().unwrap();
        let dd = d.0.len() - 1;
        let mut r = self.clone();
        if r.0.len() < d.0.len() {
            return (Self::zero(), r);
        }
        let mut q = vec![GaussRational::zero(); r.0.len() - dd];
        while !r.is_zero() && r.0.len() > dd {
            let shift = r.0.len() - 1 - dd;
            let c = r.lead().unwrap().mul(&dl);
            for (k, dc) in d.0.iter().enumerate() {
                r.0[shift + k] = r.0[shift + k].sub(&c.mul(dc));
            }
            q[shift] = c;
            r = r.trimmed();
        }
        (PiPoly(q).trimmed(), r)
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.inv().unwrap()),
            None => Self::zero(),
        }
    }

    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    pub fn eval_f64(&self) -> Complex64 {
        let pi = std::f64::consts::PI;
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * pi + c.to_complex64())
    }
}

fn fmt_pi_power(e: usize) -> String {
    match e {
        0 => String::new(),
        1 => "pi".into(),
        _ => format!("pi^{e}"),
    }
}

/// One term `c*pi^e` as a string that may start with '-'.
fn fmt_pi_term(c: &GaussRational, e: usize) -> String {
    let pp = fmt_pi_power(e);
    if e == 0 {
        return c.to_string();
    }
    if c.is_one() {
        return pp;
    }
    if c.neg().is_one() {
        return format!("-{pp}");
    }
    format!("{c}*{pp}")
}

fn join_signed(terms: &[String]) -> String {
    let mut out = String::new();
    for (k, t) in terms.iter().enumerate() {
        if k == 0 {
            out.push_str(t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(t);
        }
    }
    out
}

impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| fmt_pi_term(c, e))
            .collect();
        if terms.len() == 1 {
            write!(f, "{}", terms[0])
        } else {
            write!(f, "({})", join_signed(&terms))
        }
    }
}

#[derive(Clone, Debug)]
enum Repr {
    /// `num/den`, coprime, `den` monic.
    Exact { num: PiPoly, den: PiPoly },
    Approx(Complex64),
}

/// A coefficient: exact element of the field described above or a float.
#[derive(Clone, Debug)]
pub struct ExactComplex {
    repr: Repr,
}

impl ExactComplex {
    pub fn zero() -> Self {
        Self::from_gauss(GaussRational::zero())
    }

    pub fn one() -> Self {
        Self::from_gauss(GaussRational::one())
    }

    pub fn i() -> Self {
        Self::from_gauss(GaussRational::i())
    }

    pub fn pi() -> Self {
        Self::from_parts(PiPoly::monomial(GaussRational::one(), 1), PiPoly::constant(GaussRational::one()))
    }

    /// `2*pi*i`.
    pub fn two_pi_i() -> Self {
        Self::from_parts(
            PiPoly::monomial(GaussRational::from_ints(0, 2), 1),
            PiPoly::constant(GaussRational::one()),
        )
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_gauss(GaussRational::from_int(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_gauss(GaussRational::new(BigRational::from_integer(n), BigRational::zero()))
    }

    pub fn from_gauss(g: GaussRational) -> Self {
        ExactComplex {
            repr: Repr::Exact {
                num: PiPoly::constant(g),
                den: PiPoly::constant(GaussRational::one()),
            },
        }
    }

    pub fn approx(z: Complex64) -> Self {
        ExactComplex { repr: Repr::Approx(z) }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::approx(Complex64::new(x, 0.0))
    }

    pub(crate) fn from_parts(num: PiPoly, den: PiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return ExactComplex {
                repr: Repr::Exact {
                    num,
                    den: PiPoly::constant(GaussRational::one()),
                },
            };
        }
        if den.is_one() {
            return ExactComplex { repr: Repr::Exact { num, den } };
        }
        if den.degree() == Some(0) {
            let inv = den.0[0].inv().unwrap();
            return ExactComplex {
                repr: Repr::Exact {
                    num: num.scale(&inv),
                    den: PiPoly::constant(GaussRational::one()),
                },
            };
        }
        let g = PiPoly::gcd(&num, &den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let l = den.lead().unwrap().inv().unwrap();
        ExactComplex {
            repr: Repr::Exact {
                num: num.scale(&l),
                den: den.scale(&l),
            },
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact { .. })
    }

    /// Zero test. Exact values are decided exactly, floats compare to 0.0.
    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Exact { num, .. } => num.is_zero(),
            Repr::Approx(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Exact { num, den } => num.is_one() && den.is_one(),
            Repr::Approx(z) => z.re == 1.0 && z.im == 0.0,
        }
    }

    /// The Gaussian rational if the value is exact and free of `pi`.
    pub fn as_gauss(&self) -> Option<GaussRational> {
        match &self.repr {
            Repr::Exact { num, den } if den.is_one() && num.degree().unwrap_or(0) == 0 => {
                Some(num.0.first().cloned().unwrap_or_else(GaussRational::zero))
            }
            _ => None,
        }
    }

    pub(crate) fn parts(&self) -> Option<(PiPoly, PiPoly)> {
        match &self.repr {
            Repr::Exact { num, den } => Some((num.clone(), den.clone())),
            Repr::Approx(_) => None,
        }
    }

    /// True for exact values that involve `pi`.
    pub fn has_pi(&self) -> bool {
        match &self.repr {
            Repr::Exact { num, den } => num.degree().unwrap_or(0) > 0 || !den.is_one(),
            Repr::Approx(_) => false,
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        match &self.repr {
            Repr::Exact { num, den } => {
                if den.is_one() {
                    num.eval_f64()
                } else {
                    num.eval_f64() / den.eval_f64()
                }
            }
            Repr::Approx(z) => *z,
        }
    }

    pub fn abs(&self) -> f64 {
        self.to_complex64().norm()
    }

    pub fn conj(&self) -> Self {
        match &self.repr {
            Repr::Exact { num, den } => ExactComplex {
                repr: Repr::Exact {
                    num: num.conj(),
                    den: den.conj(),
                },
            },
            Repr::Approx(z) => Self::approx(z.conj()),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match &self.repr {
            Repr::Exact { num, den } => Self::from_parts(den.clone(), num.clone()),
            Repr::Approx(z) => Self::approx(z.inv()),
        })
    }

    pub fn checked_div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|inv| self * &inv)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `(2*pi*i*x)^k` for integer `x`.
    pub fn two_pi_i_pow(x: i64, k: u32) -> Self {
        let g = GaussRational::i_pow(k).mul(&GaussRational::from_int(2 * x).pow(k));
        Self::from_parts(PiPoly::monomial(g, k as usize), PiPoly::constant(GaussRational::one()))
    }
}

impl PartialEq for ExactComplex {
    fn eq(&self, other: &Self) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::Exact { num: a, den: b }, Repr::Exact { num: c, den: d }) => a == c && b == d,
            (Repr::Approx(a), Repr::Approx(b)) => a == b,
            _ => self.to_complex64() == other.to_complex64(),
        }
    }
}

impl From<i64> for ExactComplex {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<GaussRational> for ExactComplex {
    fn from(g: GaussRational) -> Self {
        Self::from_gauss(g)
    }
}

impl Add for &ExactComplex {
    type Output = ExactComplex;
    fn add(self, o: &ExactComplex) -> ExactComplex {
        match (&self.repr, &o.repr) {
            (Repr::Exact { num: a, den: b }, Repr::Exact { num: c, den: d }) => {
                if b == d {
                    ExactComplex::from_parts(a.add(c), b.clone())
                } else {
                    ExactComplex::from_parts(a.mul(d).add(&c.mul(b)), b.mul(d))
                }
            }
            _ => ExactComplex::approx(self.to_complex64() + o.to_complex64()),
        }
    }
}

impl Sub for &ExactComplex {
    type Output = ExactComplex;
    fn sub(self, o: &ExactComplex) -> ExactComplex {
        self + &(-o)
    }
}

impl Mul for &ExactComplex {
    type Output = ExactComplex;
    fn mul(self, o: &ExactComplex) -> ExactComplex {
        match (&self.repr, &o.repr) {
            (Repr::Exact { num: a, den: b }, Repr::Exact { num: c, den: d }) => {
                if b.is_one() && d.is_one() {
                    ExactComplex::from_parts(a.mul(c), b.clone())
                } else {
                    ExactComplex::from_parts(a.mul(c), b.mul(d))
                }
            }
            _ => ExactComplex::approx(self.to_complex64() * o.to_complex64()),
        }
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        match &self.repr {
            Repr::Exact { num, den } => ExactComplex {
                repr: Repr::Exact {
                    num: num.neg(),
                    den: den.clone(),
                },
            },
            Repr::Approx(z) => ExactComplex::approx(-z),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, o: ExactComplex) -> ExactComplex {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        -&self
    }
}

fn fmt_f64(x: f64) -> String {
    let s = format!("{x}");
    if s.contains(['.', 'e', 'E', 'N', 'i']) {
        s
    } else {
        format!("{s}.0")
    }
}

impl fmt::Display for ExactComplex {
    /// Output re-parses to an equal value (floats round-trip through `{}`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Exact { num, den } => {
                if den.is_one() {
                    write!(f, "{num}")
                } else {
                    let n = num.to_string();
                    let n = if n.starts_with('(') { n } else { format!("({n})") };
                    let d = den.to_string();
                    let d = if d.starts_with('(') { d } else { format!("({d})") };
                    write!(f, "{n}/{d}")
                }
            }
            Repr::Approx(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", fmt_f64(z.re))
                } else if z.re == 0.0 {
                    write!(f, "{}*i", fmt_f64(z.im))
                } else {
                    let sign = if z.im < 0.0 { '-' } else { '+' };
                    write!(f, "({} {} {}*i)", fmt_f64(z.re), sign, fmt_f64(z.im.abs()))
                }
            }
        }
    }
}
