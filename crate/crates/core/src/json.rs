//! JSON forms of verdicts, diagrams, trigonometric polynomials and problems.
//! Object keys come out sorted, so output is byte-stable.

use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use serde_json::{json, Map, Value};

use crate::classifier::{Verdict, Witnesses};
use crate::error::{Error, Result};
use crate::exact::ExactComplex;
use crate::fourier::{EmbeddingProblem, TrigPoly};
use crate::newton::{AdmissibleLine, NewtonDiagram};
use crate::operator::{DiffOperator, MultiIndex};
use crate::parser::parse_coefficient;

fn ratio(r: &Ratio<i64>) -> Value {
    json!({"num": r.numer(), "den": r.denom()})
}

fn big_ratio(r: &BigRational) -> Value {
    // integers that fit stay numbers, larger ones become strings
    let n = r.numer().to_string();
    let d = r.denom().to_string();
    let num = n.parse::<i64>().map(Value::from).unwrap_or(Value::String(n));
    let den = d.parse::<i64>().map(Value::from).unwrap_or(Value::String(d));
    json!({"num": num, "den": den})
}

fn mi(m: &MultiIndex) -> Value {
    json!([m.alpha1, m.alpha2])
}

fn ops(v: &[DiffOperator]) -> Value {
    Value::Array(v.iter().map(|o| Value::String(o.to_string())).collect())
}

fn complex(z: &Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

pub fn line_json(l: &AdmissibleLine) -> Value {
    json!({"a": ratio(&l.a), "b": ratio(&l.b), "nodes": [mi(&l.nodes.0), mi(&l.nodes.1)]})
}

pub fn diagram_json(d: &NewtonDiagram) -> Value {
    json!({
        "points": d.points.iter().map(mi).collect::<Vec<_>>(),
        "coreNodes": d.core_nodes.iter().map(mi).collect::<Vec<_>>(),
        "extendedNodes": [mi(&d.extended_nodes.0), mi(&d.extended_nodes.1)],
        "lines": d.lines.iter().map(line_json).collect::<Vec<_>>(),
        "kappas": d.kappas,
    })
}

fn witnesses_json(w: &Witnesses) -> Value {
    let mut m = Map::new();
    if let Some((a, b)) = &w.line {
        m.insert("line".into(), json!({"a": ratio(a), "b": ratio(b)}));
    }
    if !w.senior_parts.is_empty() {
        m.insert("seniorParts".into(), ops(&w.senior_parts));
    }
    if let Some(s) = &w.substitution {
        m.insert(
            "substitution".into(),
            json!({
                "matrix": s.matrix,
                "root": big_ratio(&s.root),
                "multiplicity": s.multiplicity,
                "juniorGap": s.junior_gap,
                "juniorMultiplicity": s.junior_multiplicity,
                "gate": s.gate,
                "sublattice": s.sublattice,
                "transformed": ops(&s.transformed),
            }),
        );
    }
    if let Some(z) = &w.zero_set {
        m.insert("zeroSetSample".into(), json!(z.sample.iter().map(|p| [p.0, p.1]).collect::<Vec<_>>()));
        m.insert(
            "zeroSet".into(),
            json!({
                "boxes": z.boxes,
                "totals": z.totals,
                "residual": z.residual,
                "lines": z.lines.iter().map(|l| json!({"direction": [l.direction.0, l.direction.1], "point": [l.point.0, l.point.1]})).collect::<Vec<_>>(),
                "exact": z.exact,
            }),
        );
    }
    if !w.roots.is_empty() {
        m.insert("roots".into(), Value::Array(w.roots.iter().map(complex).collect()));
    }
    if !w.factors.is_empty() {
        m.insert("factors".into(), ops(&w.factors));
    }
    if !w.reasons.is_empty() {
        m.insert("reasons".into(), json!(w.reasons));
    }
    Value::Object(m)
}

pub fn verdict_json(v: &Verdict) -> Value {
    json!({
        "outcome": v.outcome.to_string(),
        "rule": v.rule,
        "inexact": v.inexact,
        "flags": v.flags,
        "witnesses": witnesses_json(&v.witnesses),
    })
}

/// One JSON object per stored coefficient: `{m, n, re, im}`, plus `exact`
/// holding the exact value when there is one.
pub fn trigpoly_lines(f: &TrigPoly) -> Vec<Value> {
    f.terms()
        .map(|(&(m, n), c)| {
            let z = c.to_complex64();
            let mut o = json!({"m": m, "n": n, "re": z.re, "im": z.im});
            if c.is_exact() {
                o["exact"] = Value::String(c.to_string());
            }
            o
        })
        .collect()
}

pub fn write_trigpoly_lines(f: &TrigPoly) -> String {
    trigpoly_lines(f).iter().map(|v| format!("{v}\n")).collect()
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// Reads one coefficient object. `exact` wins; integer `re`/`im` are exact;
/// anything else is a float.
pub fn coefficient_from_json(v: &Value) -> Result<((i64, i64), ExactComplex)> {
    let m = v["m"].as_i64().ok_or_else(|| bad("coefficient needs integer 'm'"))?;
    let n = v["n"].as_i64().ok_or_else(|| bad("coefficient needs integer 'n'"))?;
    if let Some(s) = v.get("exact").and_then(Value::as_str) {
        return Ok(((m, n), parse_coefficient(s)?));
    }
    let part = |k: &str| -> Result<Value> {
        let x = v.get(k).cloned().unwrap_or(json!(0));
        if x.is_number() {
            Ok(x)
        } else {
            Err(bad(format!("'{k}' must be a number")))
        }
    };
    let (re, im) = (part("re")?, part("im")?);
    let c = match (re.as_i64(), im.as_i64()) {
        (Some(a), Some(b)) => ExactComplex::from_gauss(crate::exact::GaussRational::from_ints(a, b)),
        _ => ExactComplex::approx(Complex64::new(re.as_f64().unwrap_or(0.0), im.as_f64().unwrap_or(0.0))),
    };
    Ok(((m, n), c))
}

pub fn trigpoly_from_values(vals: &[Value]) -> Result<TrigPoly> {
    let mut f = TrigPoly::zero();
    for v in vals {
        let ((m, n), c) = coefficient_from_json(v)?;
        f.add_term(m, n, c);
    }
    Ok(f)
}

/// Parses JSON lines; blank lines are skipped.
pub fn read_trigpoly_lines(text: &str) -> Result<TrigPoly> {
    let mut vals = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(line).map_err(|e| bad(format!("line {}: {e}", k + 1)))?;
        vals.push(v);
    }
    trigpoly_from_values(&vals)
}

fn trigpoly_array(f: &TrigPoly) -> Value {
    Value::Array(trigpoly_lines(f))
}

/// `{k, l, mus: [[coefficient, ...], ...]}`.
pub fn problem_json(p: &EmbeddingProblem) -> Value {
    json!({"k": p.k, "l": p.l, "mus": p.mus.iter().map(trigpoly_array).collect::<Vec<_>>()})
}

pub fn problem_from_json(v: &Value) -> Result<EmbeddingProblem> {
    let k = v["k"].as_u64().ok_or_else(|| bad("problem needs integer 'k'"))? as u32;
    let l = v["l"].as_u64().ok_or_else(|| bad("problem needs integer 'l'"))? as u32;
    let mus = v["mus"].as_array().ok_or_else(|| bad("problem needs array 'mus'"))?;
    let mus = mus
        .iter()
        .map(|m| trigpoly_from_values(m.as_array().ok_or_else(|| bad("each mu must be an array"))?))
        .collect::<Result<Vec<_>>>()?;
    if let Some(n) = v.get("N").and_then(Value::as_u64) {
        if n as usize + 1 != mus.len() {
            return Err(bad(format!("N = {n} needs {} right-hand sides, got {}", n + 1, mus.len())));
        }
    }
    EmbeddingProblem::new(k, l, mus)
}

/// Output of a solve: `{phis, residual}`.
pub fn solution_json(phis: &[TrigPoly], residual: f64) -> Value {
    json!({"phis": phis.iter().map(trigpoly_array).collect::<Vec<_>>(), "residual": residual})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::build_diagram;
    use crate::parser::parse_operator;

    #[test]
    fn diagram_shape() {
        let d = build_diagram(&[parse_operator("d1^3").unwrap(), parse_operator("d2^2").unwrap()]).unwrap();
        let v = diagram_json(&d);
        assert_eq!(v["lines"][0]["a"], json!({"num": 3, "den": 1}));
        assert_eq!(v["coreNodes"], json!([[3, 0], [0, 2]]));
        assert_eq!(v["kappas"], json!([1]));
    }

    #[test]
    fn trigpoly_round_trip() {
        let f = TrigPoly::from_terms([
            ((1, 2), ExactComplex::two_pi_i()),
            ((-3, 1), ExactComplex::approx(Complex64::new(0.25, -1.5))),
            ((2, 2), ExactComplex::from_int(7)),
        ]);
        assert_eq!(read_trigpoly_lines(&write_trigpoly_lines(&f)).unwrap(), f);
        let g = read_trigpoly_lines("{\"m\":1,\"n\":1,\"re\":0,\"im\":1}\n").unwrap();
        assert!(g.is_exact());
    }

    #[test]
    fn problem_round_trip() {
        let phi = TrigPoly::monomial(1, 1, ExactComplex::one());
        let p = EmbeddingProblem::forward(1, 2, &[phi]).unwrap();
        assert_eq!(problem_from_json(&problem_json(&p)).unwrap(), p);
    }
}
