//! Example battery, invariance transforms, random generators and sweeps
//! shared by the command line and the test suites.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::classifier::{classify, flags, rules, ClassifyOptions, Outcome, Verdict};
use crate::config::Tolerances;
use crate::error::Result;
use crate::exact::{ExactComplex, GaussRational};
use crate::fourier::{embedding_ratio, EmbeddingProblem, GridFn, TrigPoly};
use crate::linalg::span_basis_with_tol;
use crate::operator::DiffOperator;
use crate::parser::parse_operator;

#[derive(Clone, Debug)]
pub struct BatteryCase {
    pub name: &'static str,
    pub exprs: &'static [&'static str],
    pub expected: Outcome,
    /// Required rule name, when the case pins one.
    pub rule: Option<&'static str>,
    /// Flags that must be present.
    pub flags: &'static [&'static str],
}

impl BatteryCase {
    pub fn operators(&self) -> Vec<DiffOperator> {
        self.exprs
            .iter()
            .map(|e| parse_operator(e).expect("battery expressions parse"))
            .collect()
    }

    /// True if `v` matches the expected outcome, rule and flags.
    pub fn accepts(&self, v: &Verdict) -> bool {
        v.outcome == self.expected && self.rule.is_none_or(|r| v.rule == r) && self.flags.iter().all(|f| v.has_flag(f))
    }
}

pub fn battery() -> Vec<BatteryCase> {
    vec![
        BatteryCase {
            name: "first-order-pair",
            exprs: &["d1", "d2"],
            expected: Outcome::NotComplemented,
            rule: Some(rules::THEOREM_MAIN),
            flags: &[],
        },
        BatteryCase {
            name: "anisotropic-pair",
            exprs: &["d1^3", "d2^2"],
            expected: Outcome::NotComplemented,
            rule: Some(rules::THEOREM_MAIN),
            flags: &[],
        },
        BatteryCase {
            name: "square-with-independent-direction",
            exprs: &["d1^2 + 2 d1 d2 + d2^2", "d1 + 2 d2"],
            expected: Outcome::NotComplemented,
            rule: Some(rules::SUBSTITUTION),
            flags: &[],
        },
        BatteryCase {
            name: "square-with-same-direction",
            exprs: &["d1^2 + 2 d1 d2 + d2^2", "d1 + d2"],
            expected: Outcome::IsomorphicCK,
            rule: None,
            flags: &[],
        },
        BatteryCase {
            name: "parabola",
            exprs: &["2*pi*i*d1 - d2^2"],
            expected: Outcome::NotComplemented,
            rule: Some(rules::ZERO_SET),
            flags: &[flags::HEURISTIC],
        },
        BatteryCase {
            name: "irrational-direction",
            exprs: &["1", "d1 + 1.41421356 d2"],
            expected: Outcome::Undecided,
            rule: None,
            flags: &[flags::INEXACT],
        },
        BatteryCase {
            name: "three-directions",
            exprs: &["d1 d2 (d1 + d2)", "1", "d1"],
            expected: Outcome::IsomorphicCK,
            rule: None,
            flags: &[],
        },
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestResult {
    pub name: String,
    pub operators: Vec<String>,
    pub expected: String,
    pub outcome: String,
    pub rule: String,
    pub flags: Vec<String>,
    pub pass: bool,
}

pub fn run_selftest(opts: &ClassifyOptions) -> Result<Vec<SelftestResult>> {
    battery()
        .iter()
        .map(|case| {
            let ops = case.operators();
            let v = classify(&ops, opts)?;
            Ok(SelftestResult {
                name: case.name.to_string(),
                operators: ops.iter().map(|o| o.to_string()).collect(),
                expected: case.expected.to_string(),
                outcome: v.outcome.to_string(),
                rule: v.rule.clone(),
                flags: v.flags.clone(),
                pass: case.accepts(&v),
            })
        })
        .collect()
}

/// Random integer recombination of full rank.
pub fn random_recombination<R: Rng>(ops: &[DiffOperator], rng: &mut R, tol: &Tolerances) -> Vec<DiffOperator> {
    let r0 = span_basis_with_tol(ops, tol.rank).rank;
    loop {
        let out: Vec<DiffOperator> = (0..ops.len())
            .map(|_| {
                ops.iter().fold(DiffOperator::zero(), |acc, op| {
                    let c: i64 = rng.gen_range(-3..=3);
                    acc.add(&op.scale(&ExactComplex::from_int(c)))
                })
            })
            .collect();
        if out.iter().all(|o| !o.is_zero()) && span_basis_with_tol(&out, tol.rank).rank == r0 {
            return out;
        }
    }
}

/// Random product of elementary unimodular matrices.
pub fn random_unimodular<R: Rng>(rng: &mut R) -> [[i64; 2]; 2] {
    let mut m = [[1, 0], [0, 1]];
    for _ in 0..rng.gen_range(1..=3) {
        let a: i64 = *[-2, -1, 1, 2].choose(rng).expect("nonempty");
        let e = match rng.gen_range(0..4) {
            0 => [[1, a], [0, 1]],
            1 => [[1, 0], [a, 1]],
            2 => [[0, 1], [1, 0]],
            _ => [[-1, 0], [0, 1]],
        };
        m = [
            [m[0][0] * e[0][0] + m[0][1] * e[1][0], m[0][0] * e[0][1] + m[0][1] * e[1][1]],
            [m[1][0] * e[0][0] + m[1][1] * e[1][0], m[1][0] * e[0][1] + m[1][1] * e[1][1]],
        ];
    }
    m
}

/// Outcome changes under recombination and substitution, as messages.
pub fn invariance_failures<R: Rng>(
    case: &BatteryCase,
    rng: &mut R,
    recombinations: usize,
    substitutions: usize,
    opts: &ClassifyOptions,
) -> Result<Vec<String>> {
    let ops = case.operators();
    let mut fails = Vec::new();
    for _ in 0..recombinations {
        let t = random_recombination(&ops, rng, &opts.tolerances);
        let v = classify(&t, opts)?;
        if v.outcome != case.expected {
            fails.push(format!("{}: recombination {:?} gave {}", case.name, strs(&t), v.outcome));
        }
    }
    for _ in 0..substitutions {
        let m = random_unimodular(rng);
        let t = ops.iter().map(|o| o.substitute(m)).collect::<Result<Vec<_>>>()?;
        let v = classify(&t, opts)?;
        if v.outcome != case.expected {
            fails.push(format!("{}: substitution {m:?} gave {}", case.name, v.outcome));
        }
    }
    Ok(fails)
}

fn strs(ops: &[DiffOperator]) -> Vec<String> {
    ops.iter().map(|o| o.to_string()).collect()
}

fn random_gauss<R: Rng>(rng: &mut R) -> ExactComplex {
    let q = |rng: &mut R| {
        let n: i64 = rng.gen_range(-9..=9);
        let d: i64 = rng.gen_range(1..=5);
        ExactComplex::from_int(n).checked_div(&ExactComplex::from_int(d)).expect("nonzero")
    };
    let re = q(rng);
    let im = q(rng);
    &re + &(&im * &ExactComplex::from_gauss(GaussRational::i()))
}

/// Nonzero integer in `[-radius, radius]`, uniform or with log-uniform modulus.
fn random_frequency<R: Rng>(rng: &mut R, radius: i64, log: bool) -> i64 {
    let v = if log {
        let top = ((radius + 1) as f64).ln();
        (rng.gen_range(0.0..top).exp().floor() as i64).clamp(1, radius)
    } else {
        rng.gen_range(1..=radius)
    };
    if rng.gen() {
        v
    } else {
        -v
    }
}

/// Proper polynomial with up to `terms` random frequencies in `[-radius, radius]^2`.
pub fn random_proper<R: Rng>(rng: &mut R, radius: i64, terms: usize, exact: bool) -> TrigPoly {
    random_proper_with(rng, radius, terms, exact, false)
}

fn random_proper_with<R: Rng>(rng: &mut R, radius: i64, terms: usize, exact: bool, log: bool) -> TrigPoly {
    let mut f = TrigPoly::zero();
    while f.is_zero() {
        for _ in 0..rng.gen_range(1..=terms) {
            let m = random_frequency(rng, radius, log);
            let n = random_frequency(rng, radius, log);
            let c = if exact {
                random_gauss(rng)
            } else {
                ExactComplex::approx(Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            };
            f.add_term(m, n, c);
        }
    }
    f
}

/// A random chain instance: `(k, l, phi_1 .. phi_N)`.
pub fn random_chain<R: Rng>(rng: &mut R, max_n: usize, max_kl: u32, radius: i64) -> (u32, u32, Vec<TrigPoly>) {
    let k = rng.gen_range(1..=max_kl);
    let l = rng.gen_range(1..=max_kl);
    let n = rng.gen_range(1..=max_n);
    let phis = (0..n).map(|_| random_proper(rng, radius, 6, true)).collect();
    (k, l, phis)
}

#[derive(Clone, Debug, Serialize)]
pub struct EnvelopeRow {
    pub radius: i64,
    pub max_ratio: f64,
}

/// Running maximum of the embedding ratio over inputs supported in
/// `[-n, n]^2`, radii ascending. Each radius adds `samples` random inputs
/// with log-uniform frequency moduli and `samples` hill-climbing steps from
/// the best input so far; inputs from smaller radii stay admissible.
pub fn embedding_envelope<R: Rng>(
    k: u32,
    l: u32,
    radii: &[i64],
    samples: usize,
    oversample: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<Vec<EnvelopeRow>> {
    let ratio = |phis: &[TrigPoly]| -> Result<f64> {
        embedding_ratio(&EmbeddingProblem::forward(k, l, phis)?, oversample, tol)
    };
    let seed = vec![TrigPoly::monomial(1, 1, ExactComplex::one())];
    let mut best_ratio = ratio(&seed)?;
    let mut best = seed;
    let mut rows = Vec::new();
    for &n in radii {
        for _ in 0..samples {
            let big_n = rng.gen_range(1..=2);
            let phis: Vec<TrigPoly> = (0..big_n).map(|_| random_proper_with(rng, n, 8, false, true)).collect();
            let r = ratio(&phis)?;
            if r > best_ratio {
                best_ratio = r;
                best = phis;
            }
        }
        for _ in 0..samples {
            let cand = perturb(&best, n, rng);
            let r = ratio(&cand)?;
            if r > best_ratio {
                best_ratio = r;
                best = cand;
            }
        }
        rows.push(EnvelopeRow {
            radius: n,
            max_ratio: best_ratio,
        });
    }
    Ok(rows)
}

/// Jitter every coefficient and sometimes add a small new mode.
fn perturb<R: Rng>(phis: &[TrigPoly], radius: i64, rng: &mut R) -> Vec<TrigPoly> {
    phis.iter()
        .map(|f| {
            let mut g = TrigPoly::from_terms(f.terms().map(|(key, c)| {
                let z = c.to_complex64() * Complex64::new(1.0 + 0.3 * rng.gen_range(-1.0..1.0), 0.3 * rng.gen_range(-1.0..1.0));
                (*key, ExactComplex::approx(z))
            }));
            if rng.gen_bool(0.3) {
                let m = random_frequency(rng, radius, true);
                let n = random_frequency(rng, radius, true);
                g.add_term(m, n, ExactComplex::approx(Complex64::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3))));
            }
            if g.is_zero() {
                f.clone()
            } else {
                g
            }
        })
        .collect()
}

/// Sum of a few Gaussian bumps times `x(1-x) y(1-y)` on an `n x n` grid
/// over the unit square; zero on the boundary.
pub fn random_bump<R: Rng>(rng: &mut R, n: usize) -> GridFn {
    let bumps: Vec<(f64, f64, f64, f64)> = (0..rng.gen_range(1..=4))
        .map(|_| {
            (
                rng.gen_range(0.2..0.8),
                rng.gen_range(0.2..0.8),
                rng.gen_range(0.05..0.25),
                rng.gen_range(-1.0..1.0),
            )
        })
        .collect();
    let h = 1.0 / (n - 1) as f64;
    GridFn::from_fn(n, |i, j| {
        let (x, y) = (i as f64 * h, j as f64 * h);
        let s: f64 = bumps
            .iter()
            .map(|(cx, cy, w, a)| a * (-((x - cx).powi(2) + (y - cy).powi(2)) / (w * w)).exp())
            .sum();
        s * x * (1.0 - x) * y * (1.0 - y)
    })
}

/// The `(b, eps, R)` grid of the oscillatory sweep.
pub fn oscillatory_grid() -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    (
        vec![0.0, 1.0, -1.0, 10.0, -10.0, 100.0, -100.0],
        vec![1e-4, 1e-2, 1.0],
        vec![1.0, 10.0, 1e3],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn battery_passes() {
        for r in run_selftest(&ClassifyOptions::default()).unwrap() {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn unimodular_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let m = random_unimodular(&mut rng);
            assert_eq!((m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs(), 1);
        }
    }

    #[test]
    fn bumps_vanish_on_the_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = random_bump(&mut rng, 32);
        assert!(crate::fourier::gn_check(&g).is_ok());
    }
}
