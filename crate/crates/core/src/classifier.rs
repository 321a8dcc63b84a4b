//! Verdicts on spaces generated by operator collections.
//!
//! [`classify`] runs a fixed sequence of rules and stops at the first one
//! that decides. Every verdict carries the rule name and the data needed to
//! re-check it.

pub mod zeroset;

use std::fmt;

use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::exact::{ExactComplex, GaussRational};
use crate::linalg::{rank, span_basis_with_tol};
use crate::newton::{build_diagram, principal_part, senior_part, AdmissibleLine, NewtonDiagram};
use crate::operator::{DiffOperator, MultiIndex};
use crate::poly::{self, as_gauss_poly, as_rational_poly, complex_roots, field_rational_roots};

pub use zeroset::{zero_set_rule, ZeroLine, ZeroSetWitness};

pub mod rules {
    pub const THEOREM_MAIN: &str = "theorem-main";
    pub const NO_LINES: &str = "no-admissible-lines";
    pub const ELLIPTICITY: &str = "ellipticity";
    pub const DIRECTIONAL: &str = "directional-factorization";
    pub const SUBSTITUTION: &str = "substitution";
    pub const COSET_RING: &str = "single-operator-coset-ring";
    pub const ZERO_SET: &str = "single-operator-zero-set";
    pub const NONE: &str = "none";
}

pub mod flags {
    pub const HEURISTIC: &str = "heuristic";
    pub const SUBLATTICE: &str = "sublattice-argument";
    pub const INEXACT: &str = "inexact-arithmetic";
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    NotComplemented,
    IsomorphicCK,
    Undecided,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::NotComplemented => "NotComplemented",
            Outcome::IsomorphicCK => "IsomorphicCK",
            Outcome::Undecided => "Undecided",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeniorWitness {
    pub line: AdmissibleLine,
    pub parts: [DiffOperator; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubstitutionWitness {
    /// `theta = M t`.
    pub matrix: [[i64; 2]; 2],
    /// Rational root `q` of the senior polynomial.
    pub root: BigRational,
    /// Multiplicity of `q` in the senior polynomial.
    pub multiplicity: usize,
    /// Order gap `p` to the highest junior layer of the other operators.
    pub junior_gap: Option<u32>,
    /// Multiplicity of `q` in that junior layer.
    pub junior_multiplicity: Option<usize>,
    /// `multiplicity > junior_multiplicity + junior_gap`.
    pub gate: bool,
    /// Determinant is not a unit.
    pub sublattice: bool,
    pub transformed: Vec<DiffOperator>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Witnesses {
    pub line: Option<(Ratio<i64>, Ratio<i64>)>,
    pub senior_parts: Vec<DiffOperator>,
    pub substitution: Option<SubstitutionWitness>,
    pub zero_set: Option<ZeroSetWitness>,
    pub roots: Vec<Complex64>,
    pub factors: Vec<DiffOperator>,
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub rule: String,
    pub witnesses: Witnesses,
    pub flags: Vec<String>,
    pub inexact: bool,
}

impl Verdict {
    fn new(outcome: Outcome, rule: &str, witnesses: Witnesses) -> Self {
        Verdict {
            outcome,
            rule: rule.to_string(),
            witnesses,
            flags: Vec::new(),
            inexact: false,
        }
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }

    fn flag(mut self, flag: &str) -> Self {
        if !self.has_flag(flag) {
            self.flags.push(flag.to_string());
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyOptions {
    /// Largest denominator of a rational root tried by the substitution search.
    pub substitution_bound: u64,
    /// Half-width of the first box of the zero-set ladder.
    pub zero_set_box: i64,
    pub tolerances: Tolerances,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            substitution_bound: 64,
            zero_set_box: 16,
            tolerances: Tolerances::default(),
        }
    }
}

fn nonzero_basis(ops: &[DiffOperator], tol: &Tolerances) -> Result<Vec<DiffOperator>> {
    let nonzero: Vec<DiffOperator> = ops.iter().filter(|o| !o.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Err(Error::EmptyCollection);
    }
    Ok(span_basis_with_tol(&nonzero, tol.rank).basis)
}

pub fn classify(ops: &[DiffOperator], opts: &ClassifyOptions) -> Result<Verdict> {
    let inexact = ops.iter().any(|o| !o.is_exact());
    let basis = nonzero_basis(ops, &opts.tolerances)?;
    let mut reasons = Vec::new();
    let verdict = match decide(&basis, opts, inexact, &mut reasons)? {
        Some(v) => v,
        None => {
            let w = Witnesses {
                reasons,
                ..Witnesses::default()
            };
            Verdict::new(Outcome::Undecided, rules::NONE, w)
        }
    };
    Ok(finalize(verdict, inexact))
}

fn finalize(mut v: Verdict, inexact: bool) -> Verdict {
    v.inexact = inexact;
    if inexact {
        v = v.flag(flags::INEXACT);
    }
    v
}

fn decide(
    basis: &[DiffOperator],
    opts: &ClassifyOptions,
    inexact: bool,
    reasons: &mut Vec<String>,
) -> Result<Option<Verdict>> {
    if let Some(v) = inner_rules(basis, &opts.tolerances, reasons)? {
        return Ok(Some(v));
    }
    if inexact {
        reasons.push("substitution search disabled: inexact coefficients".into());
    } else if let Some((_, v)) = substitution_search(basis, opts, reasons)? {
        return Ok(Some(v));
    }
    if basis.len() == 1 {
        let v = zero_set_rule(&basis[0], opts.zero_set_box, &opts.tolerances);
        if v.outcome != Outcome::Undecided {
            return Ok(Some(v));
        }
        reasons.extend(v.witnesses.reasons);
    } else {
        reasons.push(format!(
            "zero-set rule needs a single operator, span has dimension {}",
            basis.len()
        ));
    }
    Ok(None)
}

/// Rules that work on a reduced collection without changing variables.
fn inner_rules(basis: &[DiffOperator], tol: &Tolerances, reasons: &mut Vec<String>) -> Result<Option<Verdict>> {
    let d = build_diagram(basis)?;
    if let Some(w) = check_theorem_main(basis, &d) {
        return Ok(Some(main_verdict(w)));
    }
    reasons.push("no admissible line carries two independent senior parts".into());
    if d.lines.is_empty() {
        return Ok(Some(no_lines_verdict(&d)));
    }
    reasons.push(format!("{} admissible line(s) exist", d.lines.len()));
    match ellipticity_rule(basis, &d, tol) {
        Ok(Ok(v)) => return Ok(Some(v)),
        Ok(Err(reason)) => reasons.push(reason),
        Err(Error::InternalInconsistency(msg)) => reasons.push(format!("normalization failed: {msg}")),
        Err(e) => return Err(e),
    }
    match directional_rule(basis) {
        Some(v) => return Ok(Some(v)),
        None => reasons.push(
            "no operator factors into distinct rational directional derivatives above all others".into(),
        ),
    }
    Ok(None)
}

fn main_verdict(w: SeniorWitness) -> Verdict {
    let wit = Witnesses {
        line: Some((w.line.a, w.line.b)),
        senior_parts: w.parts.to_vec(),
        ..Witnesses::default()
    };
    Verdict::new(Outcome::NotComplemented, rules::THEOREM_MAIN, wit)
}

fn no_lines_verdict(d: &NewtonDiagram) -> Verdict {
    let wit = Witnesses {
        reasons: vec![format!("all exponents are dominated by {}", d.core_nodes[0])],
        ..Witnesses::default()
    };
    Verdict::new(Outcome::IsomorphicCK, rules::NO_LINES, wit)
}

/// First admissible line whose senior parts span at least two dimensions.
pub fn check_theorem_main(ops: &[DiffOperator], d: &NewtonDiagram) -> Option<SeniorWitness> {
    for line in &d.lines {
        let seniors: Vec<DiffOperator> = ops
            .iter()
            .filter_map(|o| senior_part(o, line).ok())
            .filter(|s| !s.is_zero())
            .collect();
        if seniors.len() < 2 || rank(&seniors) < 2 {
            continue;
        }
        let first = seniors[0].clone();
        if let Some(second) = seniors[1..]
            .iter()
            .find(|s| rank(&[first.clone(), (*s).clone()]) == 2)
        {
            return Some(SeniorWitness {
                line: line.clone(),
                parts: [first, second.clone()],
            });
        }
    }
    None
}

/// Recombine so that only the first operator has a nonzero principal part.
pub fn normalize_collection(ops: &[DiffOperator], d: &NewtonDiagram) -> Result<Vec<DiffOperator>> {
    normalize_with_tol(ops, d, &Tolerances::default())
}

fn normalize_with_tol(ops: &[DiffOperator], d: &NewtonDiagram, tol: &Tolerances) -> Result<Vec<DiffOperator>> {
    let principals = ops
        .iter()
        .map(|o| principal_part(o, d))
        .collect::<Result<Vec<_>>>()?;
    let Some(lead) = principals.iter().position(|p| !p.is_zero()) else {
        return Err(Error::InternalInconsistency("no operator has a principal part".into()));
    };
    let r = principals[lead].clone();
    let (pivot_m, pivot_c) = r
        .terms()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(m, c)| (*m, c.clone()))
        .unwrap();
    let scale = r.terms().map(|(_, c)| c.abs()).fold(0.0, f64::max);
    let mut out = vec![ops[lead].clone()];
    for (j, op) in ops.iter().enumerate() {
        if j == lead {
            continue;
        }
        if principals[j].is_zero() {
            out.push(op.clone());
            continue;
        }
        let lambda = principals[j]
            .coefficient(&pivot_m)
            .checked_div(&pivot_c)
            .expect("pivot is nonzero");
        let reduced = op.sub(&ops[lead].scale(&lambda));
        let leftover = reduced.restrict(|m| d.on_core(m));
        let exact = reduced.is_exact();
        let negligible = leftover
            .terms()
            .all(|(_, c)| c.abs() <= tol.rank * scale.max(1.0));
        if !leftover.is_zero() && (exact || !negligible) {
            return Err(Error::InternalInconsistency(format!(
                "principal parts of operators {lead} and {j} are not proportional"
            )));
        }
        out.push(reduced.restrict(|m| !d.on_core(m)));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ellipticity {
    pub elliptic: bool,
    /// Roots of the quadrant polynomials.
    pub roots: Vec<Complex64>,
}

/// Ellipticity of a senior part supported on the segment `from -> to`.
pub fn ellipticity_check(
    seg_senior: &DiffOperator,
    segment: (MultiIndex, MultiIndex),
    kappa: u32,
) -> Result<Ellipticity> {
    ellipticity_check_tol(seg_senior, segment, kappa, &Tolerances::default())
}

pub fn ellipticity_check_tol(
    seg_senior: &DiffOperator,
    segment: (MultiIndex, MultiIndex),
    kappa: u32,
    tol: &Tolerances,
) -> Result<Ellipticity> {
    let (z0, z1) = if segment.0.alpha1 >= segment.1.alpha1 {
        segment
    } else {
        (segment.1, segment.0)
    };
    if z0 == z1 || kappa == 0 {
        return Ok(Ellipticity {
            elliptic: true,
            roots: Vec::new(),
        });
    }
    let k = kappa as i64;
    let (dx, dy) = ((z1.x() - z0.x()) / k, (z1.y() - z0.y()) / k);
    if dx * k != z1.x() - z0.x() || dy * k != z1.y() - z0.y() {
        return Err(Error::NotHomogeneous(format!("kappa {kappa} does not divide segment {z0}-{z1}")));
    }
    let lattice: Vec<MultiIndex> = (0..=k)
        .map(|j| MultiIndex::new((z0.x() + j * dx) as u32, (z0.y() + j * dy) as u32))
        .collect();
    if let Some(m) = seg_senior.support().into_iter().find(|m| !lattice.contains(m)) {
        return Err(Error::NotHomogeneous(format!("monomial {m} is off the segment {z0}-{z1}")));
    }
    let c: Vec<ExactComplex> = lattice.iter().map(|m| seg_senior.coefficient(m)).collect();
    let ipow = ExactComplex::from_gauss(GaussRational::i_pow((dx + dy).rem_euclid(4) as u32));
    let mut elliptic = true;
    let mut roots = Vec::new();
    let mut seen: Vec<Vec<ExactComplex>> = Vec::new();
    for (s1, s2) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
        let sign = s1.pow(dx.unsigned_abs() as u32) * s2.pow(dy.unsigned_abs() as u32);
        let theta = &ipow * &ExactComplex::from_int(sign);
        let q: Vec<ExactComplex> = c
            .iter()
            .enumerate()
            .map(|(j, cj)| cj * &theta.pow(j as u32))
            .collect();
        if seen.contains(&q) {
            continue;
        }
        let numeric = complex_roots(&q.iter().map(|x| x.to_complex64()).collect::<Vec<_>>());
        let has_positive = match as_gauss_poly(&q) {
            Some(g) => {
                let re = poly::trim(g.iter().map(|x| x.re.clone()).collect());
                let im = poly::trim(g.iter().map(|x| x.im.clone()).collect());
                let common = if im.is_empty() {
                    re
                } else if re.is_empty() {
                    im
                } else {
                    poly::gcd(&re, &im)
                };
                poly::count_positive_roots(&common) > 0
            }
            None => numeric
                .iter()
                .any(|z| z.re > 0.0 && z.im.abs() <= tol.root_imag * z.norm().max(1.0)),
        };
        if has_positive {
            elliptic = false;
        }
        roots.extend(numeric);
        seen.push(q);
    }
    Ok(Ellipticity { elliptic, roots })
}

/// `Ok(verdict)` if the normalized principal part is elliptic on every
/// segment, `Ok(Err(reason))` if not.
fn ellipticity_rule(
    basis: &[DiffOperator],
    d: &NewtonDiagram,
    tol: &Tolerances,
) -> Result<std::result::Result<Verdict, String>> {
    let normalized = normalize_with_tol(basis, d, tol)?;
    let r = principal_part(&normalized[0], d)?;
    let mut all_roots = Vec::new();
    for (j, line) in d.lines.iter().enumerate() {
        let seg = (d.core_nodes[j], d.core_nodes[j + 1]);
        let part = senior_part(&r, line)?;
        let e = ellipticity_check_tol(&part, seg, d.kappas[j], tol)?;
        if !e.elliptic {
            return Ok(Err(format!(
                "principal part is not elliptic on segment {}-{}",
                seg.0, seg.1
            )));
        }
        all_roots.extend(e.roots);
    }
    let wit = Witnesses {
        roots: all_roots,
        senior_parts: vec![r],
        ..Witnesses::default()
    };
    Ok(Ok(Verdict::new(Outcome::IsomorphicCK, rules::ELLIPTICITY, wit)))
}

/// Binary-form coefficients `c_k` of `d1^(n-k) d2^k`, `k = 0..=n`.
fn binary_form(op: &DiffOperator, n: u32) -> Vec<ExactComplex> {
    (0..=n).map(|k| op.coefficient(&MultiIndex::new(n - k, k))).collect()
}

/// Factorization of a homogeneous operator into pairwise nonproportional
/// rational directional derivatives.
pub fn rational_directional_factors(op: &DiffOperator) -> Option<Vec<DiffOperator>> {
    let n = op.order().ok()?;
    if n == 0 || !op.is_exact() || op.terms().any(|(m, _)| m.order() != n) {
        return None;
    }
    let c = binary_form(op, n);
    let first = c.iter().find(|x| !x.is_zero())?.clone();
    let normalized: Vec<ExactComplex> = c.iter().map(|x| x.checked_div(&first).unwrap()).collect();
    let p = as_rational_poly(&normalized)?;
    let deg = p.len().checked_sub(1)?;
    if (n as usize) - deg > 1 {
        return None;
    }
    let roots = poly::rational_roots(&p);
    if roots.iter().any(|(_, m)| *m != 1) || roots.len() != deg {
        return None;
    }
    let mut factors: Vec<DiffOperator> = roots
        .iter()
        .map(|(q, _)| {
            let qc = ExactComplex::from_gauss(GaussRational::new(q.clone(), BigRational::zero()));
            DiffOperator::d2().sub(&DiffOperator::d1().scale(&qc))
        })
        .collect();
    if (n as usize) > deg {
        factors.push(DiffOperator::d1());
    }
    Some(factors)
}

pub fn directional_rule(ops: &[DiffOperator]) -> Option<Verdict> {
    if ops.is_empty() || ops.iter().any(|o| !o.is_exact()) {
        return None;
    }
    let basis = span_basis_with_tol(ops, Tolerances::default().rank).basis;
    let orders: Vec<u32> = basis.iter().filter_map(|o| o.order().ok()).collect();
    let n = *orders.iter().max()?;
    if orders.iter().filter(|&&o| o == n).count() != 1 {
        return None;
    }
    let top = &basis[orders.iter().position(|&o| o == n)?];
    let factors = rational_directional_factors(top)?;
    let wit = Witnesses {
        factors,
        senior_parts: vec![top.clone()],
        ..Witnesses::default()
    };
    Some(Verdict::new(Outcome::IsomorphicCK, rules::DIRECTIONAL, wit))
}

fn ratio_to_pair(q: &BigRational) -> Option<(i64, i64)> {
    Some((q.numer().to_i64()?, q.denom().to_i64()?))
}

/// Change of variables that turns `d2 - q d1` into a coordinate derivation.
pub fn substitution_matrix(q: &BigRational) -> Option<[[i64; 2]; 2]> {
    let (r, s) = ratio_to_pair(q)?;
    Some([[1, -r], [0, s]])
}

pub fn try_substitution(
    ops: &[DiffOperator],
    bound: u64,
) -> Result<Option<([[i64; 2]; 2], Verdict)>> {
    let opts = ClassifyOptions {
        substitution_bound: bound,
        ..ClassifyOptions::default()
    };
    let basis = nonzero_basis(ops, &opts.tolerances)?;
    substitution_search(&basis, &opts, &mut Vec::new())
}

fn substitution_search(
    basis: &[DiffOperator],
    opts: &ClassifyOptions,
    reasons: &mut Vec<String>,
) -> Result<Option<([[i64; 2]; 2], Verdict)>> {
    if basis.iter().any(|o| !o.is_exact()) {
        reasons.push("substitution search disabled: inexact coefficients".into());
        return Ok(None);
    }
    if basis.len() < 2 {
        reasons.push("substitution search needs at least two independent operators".into());
        return Ok(None);
    }
    let d = build_diagram(basis)?;
    if d.lines.len() != 1 || !d.lines[0].is_antidiagonal() {
        reasons.push("substitution search needs exactly one admissible line with equal intercepts".into());
        return Ok(None);
    }
    let line = &d.lines[0];
    let normalized = match normalize_with_tol(basis, &d, &opts.tolerances) {
        Ok(n) => n,
        Err(Error::InternalInconsistency(msg)) => {
            reasons.push(format!("normalization failed: {msg}"));
            return Ok(None);
        }
        Err(e) => return Err(e),
    };
    let mu = line.a.to_integer() as u32;
    let senior = senior_part(&normalized[0], line)?;
    let roots: Vec<(BigRational, usize)> = field_rational_roots(&binary_form(&senior, mu))
        .unwrap_or_default()
        .into_iter()
        .filter(|(q, _)| q.denom().to_u64().is_some_and(|s| s <= opts.substitution_bound))
        .collect();
    if roots.is_empty() {
        reasons.push(format!(
            "senior polynomial has no rational root with denominator <= {}",
            opts.substitution_bound
        ));
        return Ok(None);
    }
    let others = &normalized[1..];
    let junior_order = others.iter().filter_map(|o| o.order().ok()).max();
    for (q, alpha) in roots {
        let Some(matrix) = substitution_matrix(&q) else {
            continue;
        };
        let (p, beta) = match junior_order {
            Some(jo) if jo < mu => {
                let beta = others
                    .iter()
                    .filter(|o| o.order().ok() == Some(jo))
                    .map(|o| {
                        let layer = binary_form(&o.homogeneous_part(jo), jo);
                        field_rational_roots(&layer)
                            .unwrap_or_default()
                            .into_iter()
                            .find(|(r, _)| *r == q)
                            .map_or(0, |(_, m)| m)
                    })
                    .min()
                    .unwrap_or(0);
                (Some(mu - jo), Some(beta))
            }
            _ => (None, None),
        };
        let gate = match (p, beta) {
            (Some(p), Some(b)) => alpha > b + p as usize,
            _ => false,
        };
        let transformed = normalized
            .iter()
            .map(|o| o.change_variables(matrix))
            .collect::<Result<Vec<_>>>()?;
        let new_basis = nonzero_basis(&transformed, &opts.tolerances)?;
        let mut inner_reasons = Vec::new();
        let sublattice = matrix[1][1].abs() != 1;
        let wit = SubstitutionWitness {
            matrix,
            root: q.clone(),
            multiplicity: alpha,
            junior_gap: p,
            junior_multiplicity: beta,
            gate,
            sublattice,
            transformed: new_basis.clone(),
        };
        if let Some(inner) = inner_rules(&new_basis, &opts.tolerances, &mut inner_reasons)? {
            let rule = if inner.outcome == Outcome::NotComplemented {
                rules::SUBSTITUTION.to_string()
            } else {
                inner.rule.clone()
            };
            let mut v = Verdict {
                rule,
                ..inner
            };
            v.witnesses.substitution = Some(wit);
            if sublattice {
                v = v.flag(flags::SUBLATTICE);
            }
            return Ok(Some((matrix, v)));
        }
        reasons.push(format!("substitution for root {q} did not decide"));
    }
    Ok(None)
}

/// Every rule evaluated independently of pipeline order.
pub fn evaluate_rules(ops: &[DiffOperator], opts: &ClassifyOptions) -> Result<Vec<(String, Outcome)>> {
    let basis = nonzero_basis(ops, &opts.tolerances)?;
    let d = build_diagram(&basis)?;
    let mut out = Vec::new();
    if check_theorem_main(&basis, &d).is_some() {
        out.push((rules::THEOREM_MAIN.to_string(), Outcome::NotComplemented));
    }
    if d.lines.is_empty() {
        out.push((rules::NO_LINES.to_string(), Outcome::IsomorphicCK));
    }
    if check_theorem_main(&basis, &d).is_none() && !d.lines.is_empty() {
        if let Ok(Ok(v)) = ellipticity_rule(&basis, &d, &opts.tolerances) {
            out.push((v.rule, v.outcome));
        }
    }
    if let Some(v) = directional_rule(&basis) {
        out.push((v.rule, v.outcome));
    }
    if basis.iter().all(|o| o.is_exact()) {
        if let Some((_, v)) = substitution_search(&basis, opts, &mut Vec::new())? {
            out.push((format!("{}:{}", rules::SUBSTITUTION, v.rule), v.outcome));
        }
    }
    if basis.len() == 1 {
        let v = zero_set_rule(&basis[0], opts.zero_set_box, &opts.tolerances);
        if v.outcome != Outcome::Undecided {
            out.push((v.rule, v.outcome));
        }
    }
    Ok(out)
}
