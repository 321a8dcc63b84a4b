//! Constant-coefficient differential operators in two variables.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::ExactComplex;

/// Exponent pair of `d1^alpha1 d2^alpha2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    pub alpha1: u32,
    pub alpha2: u32,
}

impl MultiIndex {
    pub const fn new(alpha1: u32, alpha2: u32) -> Self {
        MultiIndex { alpha1, alpha2 }
    }

    pub fn order(&self) -> u32 {
        self.alpha1 + self.alpha2
    }

    /// Componentwise `self <= other`.
    pub fn dominated_by(&self, other: &MultiIndex) -> bool {
        self.alpha1 <= other.alpha1 && self.alpha2 <= other.alpha2
    }

    /// The componentwise partial order.
    pub fn partial_cmp_componentwise(&self, other: &MultiIndex) -> Option<Ordering> {
        match (self.dominated_by(other), other.dominated_by(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    pub(crate) fn x(&self) -> i64 {
        self.alpha1 as i64
    }

    pub(crate) fn y(&self) -> i64 {
        self.alpha2 as i64
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha1, self.alpha2)
    }
}

/// Column order used for printing and elimination: higher order first, then
/// higher power of `d1`.
pub(crate) fn monomial_cmp(a: &MultiIndex, b: &MultiIndex) -> Ordering {
    b.order().cmp(&a.order()).then(b.alpha1.cmp(&a.alpha1))
}

/// `sum a_k d1^alpha_k d2^beta_k`, zero coefficients never stored.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DiffOperator {
    terms: BTreeMap<MultiIndex, ExactComplex>,
}

impl DiffOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::monomial(MultiIndex::new(0, 0), ExactComplex::one())
    }

    pub fn d1() -> Self {
        Self::monomial(MultiIndex::new(1, 0), ExactComplex::one())
    }

    pub fn d2() -> Self {
        Self::monomial(MultiIndex::new(0, 1), ExactComplex::one())
    }

    pub fn scalar(c: ExactComplex) -> Self {
        Self::monomial(MultiIndex::new(0, 0), c)
    }

    pub fn monomial(mi: MultiIndex, c: ExactComplex) -> Self {
        let mut op = Self::zero();
        op.add_term(mi, c);
        op
    }

    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, ExactComplex)>>(it: I) -> Self {
        let mut op = Self::zero();
        for (mi, c) in it {
            op.add_term(mi, c);
        }
        op
    }

    /// `d1^a d2^b` with unit coefficient.
    pub fn dmono(a: u32, b: u32) -> Self {
        Self::monomial(MultiIndex::new(a, b), ExactComplex::one())
    }

    pub fn add_term(&mut self, mi: MultiIndex, c: ExactComplex) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&mi) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&mi);
        } else {
            self.terms.insert(mi, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.terms.values().all(|c| c.is_exact())
    }

    pub fn order(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(|m| m.order())
            .max()
            .ok_or(Error::DegenerateOperator)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &ExactComplex)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mi: &MultiIndex) -> ExactComplex {
        self.terms.get(mi).cloned().unwrap_or_else(ExactComplex::zero)
    }

    pub fn support(&self) -> Vec<MultiIndex> {
        self.terms.keys().copied().collect()
    }

    /// Keep only the monomials accepted by `keep`.
    pub fn restrict<F: Fn(&MultiIndex) -> bool>(&self, keep: F) -> Self {
        DiffOperator {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Homogeneous part of total order `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        self.restrict(|m| m.order() == k)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&ExactComplex::from_int(-1))
    }

    pub fn scale(&self, c: &ExactComplex) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, a)| (*m, a * c)))
    }

    /// Composition, i.e. multiplication of symbols.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(MultiIndex::new(m1.alpha1 + m2.alpha1, m1.alpha2 + m2.alpha2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..e {
            acc = acc.compose(self);
        }
        acc
    }

    /// `P(x, y) = sum a (2 pi i x)^alpha (2 pi i y)^beta` in floating point.
    pub fn eval_charpoly(&self, x: Complex64, y: Complex64) -> Result<Complex64> {
        if self.is_zero() {
            return Err(Error::DegenerateOperator);
        }
        let tpi = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let (u, v) = (tpi * x, tpi * y);
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| c.to_complex64() * u.powu(m.alpha1) * v.powu(m.alpha2))
            .sum())
    }

    /// Symbol at an integer frequency, exactly when the coefficients are exact.
    pub fn eval_charpoly_exact(&self, m: i64, n: i64) -> Result<ExactComplex> {
        if self.is_zero() {
            return Err(Error::DegenerateOperator);
        }
        let mut acc = ExactComplex::zero();
        for (mi, c) in &self.terms {
            let t = &ExactComplex::two_pi_i_pow(m, mi.alpha1) * &ExactComplex::two_pi_i_pow(n, mi.alpha2);
            acc = &acc + &(c * &t);
        }
        Ok(acc)
    }

    /// Rewrite under the torus automorphism `theta = M t`.
    ///
    /// New derivations satisfy `D = M^T d`, so `d = (M^T)^{-1} D`.
    pub fn substitute(&self, m: [[i64; 2]; 2]) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.abs() != 1 {
            return Err(Error::NotUnimodular { det });
        }
        self.change_variables(m)
    }

    /// Same as [`substitute`](Self::substitute) for any nonsingular integer matrix.
    pub(crate) fn change_variables(&self, m: [[i64; 2]; 2]) -> Result<Self> {
        let [[a, b], [c, d]] = m;
        let det = a * d - b * c;
        if det == 0 {
            return Err(Error::SingularMatrix);
        }
        let det_inv = ExactComplex::one()
            .checked_div(&ExactComplex::from_int(det))
            .expect("nonzero determinant");
        let lin = |p: i64, q: i64| {
            DiffOperator::from_terms([
                (MultiIndex::new(1, 0), &ExactComplex::from_int(p) * &det_inv),
                (MultiIndex::new(0, 1), &ExactComplex::from_int(q) * &det_inv),
            ])
        };
        let new_d1 = lin(d, -c);
        let new_d2 = lin(-b, a);
        let mut out = Self::zero();
        for (mi, coef) in &self.terms {
            let img = new_d1.pow(mi.alpha1).compose(&new_d2.pow(mi.alpha2)).scale(coef);
            out = out.add(&img);
        }
        Ok(out)
    }

    /// Terms in print order.
    pub(crate) fn sorted_terms(&self) -> Vec<(MultiIndex, ExactComplex)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        v.sort_by(|x, y| monomial_cmp(&x.0, &y.0));
        v
    }
}

fn fmt_monomial(m: &MultiIndex) -> String {
    let mut parts = Vec::new();
    for (name, e) in [("d1", m.alpha1), ("d2", m.alpha2)] {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join(" ")
}

/// True if `s` is a single factor chain with no top-level `+` or `-` after
/// an optional leading sign.
fn is_product(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    let mut depth = 0i32;
    for ch in body.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 => return false,
            _ => {}
        }
    }
    true
}

impl fmt::Display for DiffOperator {
    /// Prints in the operator grammar accepted by the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (k, (m, c)) in self.sorted_terms().iter().enumerate() {
            let mono = fmt_monomial(m);
            let neg_one = c.is_exact() && (-c).is_one();
            let term = if c.is_exact() && c.is_one() && !mono.is_empty() {
                mono
            } else if neg_one && !mono.is_empty() {
                format!("-{mono}")
            } else {
                let cs = c.to_string();
                let cs = if is_product(&cs) { cs } else { format!("({cs})") };
                if mono.is_empty() {
                    cs
                } else {
                    format!("{cs} {mono}")
                }
            };
            if k == 0 {
                out.push_str(&term);
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        write!(f, "{out}")
    }
}
