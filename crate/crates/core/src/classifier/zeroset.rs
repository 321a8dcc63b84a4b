//! Integer zero sets of a single symbol on a ladder of boxes.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{flags, rules, Outcome, Verdict, Witnesses};
use crate::config::Tolerances;
use crate::exact::{ExactComplex, GaussRational, PiPoly};
use crate::operator::DiffOperator;

/// Number of box doublings after the first box.
const LADDER: usize = 4;
/// Points of the first box used to propose line directions.
const PAIR_POINTS: usize = 160;
/// Residual points reported as a sample.
const SAMPLE: usize = 16;

/// Full integer line `point + k * direction` inside the zero set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ZeroLine {
    pub direction: (i64, i64),
    pub point: (i64, i64),
}

impl ZeroLine {
    fn offset(&self) -> i64 {
        self.direction.0 * self.point.1 - self.direction.1 * self.point.0
    }

    fn contains(&self, p: (i64, i64)) -> bool {
        self.direction.0 * p.1 - self.direction.1 * p.0 == self.offset()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSetWitness {
    pub boxes: Vec<i64>,
    /// Zero count per box.
    pub totals: Vec<usize>,
    /// Zeros off the detected lines, per box.
    pub residual: Vec<usize>,
    pub lines: Vec<ZeroLine>,
    /// Residual zeros closest to the origin.
    pub sample: Vec<(i64, i64)>,
    pub exact: bool,
}

/// Integer polynomial in `(m, n)` as `(alpha, beta, coefficient)` terms.
type IntPoly = Vec<(u32, u32, BigInt)>;

enum Symbol {
    /// The symbol vanishes iff every component vanishes.
    Exact(Vec<IntPoly>),
    Float(Vec<(u32, u32, Complex64)>, f64),
}

impl Symbol {
    fn new(op: &DiffOperator, tol: f64) -> Self {
        match exact_components(op) {
            Some(c) => Symbol::Exact(c),
            None => Symbol::Float(
                op.terms()
                    .map(|(m, c)| (m.alpha1, m.alpha2, c.to_complex64()))
                    .collect(),
                tol,
            ),
        }
    }

    fn is_zero_at(&self, m: i64, n: i64) -> bool {
        match self {
            Symbol::Exact(comps) => comps.iter().all(|c| eval_int(c, m, n)),
            Symbol::Float(terms, tol) => {
                let tp = 2.0 * std::f64::consts::PI;
                let u = Complex64::new(0.0, tp * m as f64);
                let v = Complex64::new(0.0, tp * n as f64);
                let mut sum = Complex64::new(0.0, 0.0);
                let mut scale = 0.0;
                for (a, b, c) in terms {
                    let t = c * u.powu(*a) * v.powu(*b);
                    sum += t;
                    scale += t.norm();
                }
                sum.norm() <= tol * scale
            }
        }
    }
}

/// True if the integer polynomial vanishes at `(m, n)`.
fn eval_int(p: &IntPoly, m: i64, n: i64) -> bool {
    let fast = || -> Option<i128> {
        let mut acc: i128 = 0;
        for (a, b, c) in p {
            let c: i128 = c.to_i128()?;
            let t = c
                .checked_mul((m as i128).checked_pow(*a)?)?
                .checked_mul((n as i128).checked_pow(*b)?)?;
            acc = acc.checked_add(t)?;
        }
        Some(acc)
    };
    if let Some(v) = fast() {
        return v == 0;
    }
    let acc: BigInt = p
        .iter()
        .map(|(a, b, c)| c * BigInt::from(m).pow(*a) * BigInt::from(n).pow(*b))
        .sum();
    acc.is_zero()
}

/// Split the exact symbol into integer polynomials, one per power of `pi`
/// and real/imaginary part.
fn exact_components(op: &DiffOperator) -> Option<Vec<IntPoly>> {
    let mut terms = Vec::new();
    for (m, c) in op.terms() {
        let v = c * &ExactComplex::two_pi_i_pow(1, m.order());
        terms.push((m.alpha1, m.alpha2, v.parts()?));
    }
    let mut den = PiPoly::constant(GaussRational::one());
    for (_, _, (_, d)) in &terms {
        if !d.is_one() {
            let g = PiPoly::gcd(&den, d);
            den = den.mul(&d.div_rem(&g).0);
        }
    }
    let nums: Vec<(u32, u32, PiPoly)> = terms
        .into_iter()
        .map(|(a, b, (n, d))| (a, b, if d.is_one() { n.mul(&den) } else { n.mul(&den.div_rem(&d).0) }))
        .collect();
    let top = nums.iter().map(|(_, _, n)| n.coeffs().len()).max().unwrap_or(0);
    let mut out = Vec::new();
    for e in 0..top {
        for part in 0..2 {
            let rat: Vec<(u32, u32, BigRational)> = nums
                .iter()
                .filter_map(|(a, b, n)| {
                    let g = n.coeffs().get(e)?;
                    let x = if part == 0 { g.re.clone() } else { g.im.clone() };
                    (!x.is_zero()).then_some((*a, *b, x))
                })
                .collect();
            if rat.is_empty() {
                continue;
            }
            let l = rat.iter().fold(BigInt::one(), |acc, (_, _, x)| acc.lcm(x.denom()));
            out.push(
                rat.into_iter()
                    .map(|(a, b, x)| (a, b, (x * BigRational::from_integer(l.clone())).to_integer()))
                    .collect(),
            );
        }
    }
    Some(out)
}

fn primitive(d: (i64, i64)) -> (i64, i64) {
    let g = d.0.gcd(&d.1);
    let (x, y) = (d.0 / g, d.1 / g);
    if x < 0 || (x == 0 && y < 0) {
        (-x, -y)
    } else {
        (x, y)
    }
}

pub fn analyze_zero_set(op: &DiffOperator, base_box: i64, tol: &Tolerances) -> ZeroSetWitness {
    let sym = Symbol::new(op, tol.zero_set);
    let exact = matches!(sym, Symbol::Exact(_));
    let deg = op.order().unwrap_or(0) as i64;
    let boxes: Vec<i64> = (0..LADDER).map(|k| base_box << k).collect();
    let big = *boxes.last().unwrap();
    let mut zeros = Vec::new();
    for m in -big..=big {
        for n in -big..=big {
            if sym.is_zero_at(m, n) {
                zeros.push((m, n));
            }
        }
    }
    let norm = |p: &(i64, i64)| p.0.abs().max(p.1.abs());
    let mut first: Vec<(i64, i64)> = zeros.iter().copied().filter(|p| norm(p) <= base_box).collect();
    first.sort_by_key(|p| (p.0 * p.0 + p.1 * p.1, *p));
    first.truncate(PAIR_POINTS);
    let mut lines: BTreeSet<ZeroLine> = BTreeSet::new();
    for (i, p) in first.iter().enumerate() {
        for q in &first[i + 1..] {
            let dir = primitive((q.0 - p.0, q.1 - p.1));
            let cand = ZeroLine { direction: dir, point: *p };
            if lines.iter().any(|l| l.direction == dir && l.contains(*p)) {
                continue;
            }
            let on_line = (0..=deg).all(|k| sym.is_zero_at(p.0 + k * dir.0, p.1 + k * dir.1));
            if on_line {
                lines.insert(cand);
            }
        }
    }
    let lines: Vec<ZeroLine> = lines.into_iter().collect();
    let mut residual_pts: Vec<(i64, i64)> = zeros
        .iter()
        .copied()
        .filter(|p| !lines.iter().any(|l| l.contains(*p)))
        .collect();
    let totals = boxes.iter().map(|b| zeros.iter().filter(|p| norm(p) <= *b).count()).collect();
    let residual = boxes
        .iter()
        .map(|b| residual_pts.iter().filter(|p| norm(p) <= *b).count())
        .collect();
    residual_pts.sort_by_key(|p| (p.0 * p.0 + p.1 * p.1, *p));
    residual_pts.truncate(SAMPLE);
    ZeroSetWitness {
        boxes,
        totals,
        residual,
        lines,
        sample: residual_pts,
        exact,
    }
}

/// Coset-ring test for the zero set of a single operator.
pub fn zero_set_rule(op: &DiffOperator, base_box: i64, tol: &Tolerances) -> Verdict {
    let w = analyze_zero_set(op, base_box, tol);
    let r = &w.residual;
    let stable = r.iter().all(|&c| c == r[0]);
    let growing = r[LADDER - 1] > r[LADDER - 2];
    let (outcome, rule, flag, reason) = if stable {
        (Outcome::IsomorphicCK, rules::COSET_RING, None, None)
    } else if growing {
        (Outcome::NotComplemented, rules::ZERO_SET, Some(flags::HEURISTIC), None)
    } else {
        (
            Outcome::Undecided,
            rules::NONE,
            None,
            Some(format!("zero set off lines grew then stopped: counts {r:?}")),
        )
    };
    let mut v = Verdict::new(
        outcome,
        rule,
        Witnesses {
            zero_set: Some(w),
            reasons: reason.into_iter().collect(),
            ..Witnesses::default()
        },
    );
    if let Some(f) = flag {
        v = v.flag(f);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axes_are_two_lines() {
        let v = zero_set_rule(&DiffOperator::dmono(1, 1), 16, &Tolerances::default());
        assert_eq!(v.outcome, Outcome::IsomorphicCK);
        let w = v.witnesses.zero_set.unwrap();
        assert_eq!(w.lines.len(), 2);
        assert!(w.residual.iter().all(|&c| c == 0));
    }

    #[test]
    fn parabola_keeps_growing() {
        let s0 = DiffOperator::d1().scale(&ExactComplex::two_pi_i()).sub(&DiffOperator::dmono(0, 2));
        let w = analyze_zero_set(&s0, 16, &Tolerances::default());
        assert!(w.exact);
        assert!(w.lines.is_empty());
        assert_eq!(w.residual, vec![9, 11, 17, 23]);
        assert!(w.sample.contains(&(4, -2)));
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn irrational_direction_has_isolated_zero() {
        let op = DiffOperator::d1().sub(&DiffOperator::d2().scale(&ExactComplex::from_f64(1.41421356)));
        let v = zero_set_rule(&op, 16, &Tolerances::default());
        assert_eq!(v.outcome, Outcome::IsomorphicCK);
        let w = v.witnesses.zero_set.unwrap();
        assert!(!w.exact);
        assert_eq!(w.totals, vec![1, 1, 1, 1]);
    }

    #[test]
    fn diagonal_line() {
        let op = DiffOperator::d1().add(&DiffOperator::d2());
        let w = analyze_zero_set(&op, 16, &Tolerances::default());
        assert_eq!(w.lines, vec![ZeroLine { direction: (1, -1), point: (0, 0) }]);
    }
}
