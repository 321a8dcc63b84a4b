//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use smoothspace::classifier::ClassifyOptions;
use smoothspace::fourier::counterexample::CounterexampleConfig;
use smoothspace::fourier::{
    counterexample_run, dominance_constant, gn_check, halfplane_root_count, halfplane_root_count_brute,
    multiplier_tails, oscillatory_probe, oscillatory_sweep, solve_system, EmbeddingProblem,
};
use smoothspace::harness::{
    battery, embedding_envelope, invariance_failures, oscillatory_grid, random_bump, random_chain, run_selftest,
};
use smoothspace::json::diagram_json;
use smoothspace::{build_diagram, parse_operator, DiffOperator, ExactComplex, MultiIndex, Tolerances};

const SELFTEST_BUDGET: Duration = Duration::from_secs(5);
const COUNTEREXAMPLE_BUDGET: Duration = Duration::from_secs(30);
const EMBEDDING_GROWTH: f64 = 1.25;
const DOMINANCE_SPREAD: f64 = 0.05;
const MIXED_DOMINANCE_TOL: f64 = 1e-12;
const NULL_DIRECTION_GROWTH: f64 = 10.0;
const TAIL_DECAY: f64 = 0.5;
const CPQ_BOUND: f64 = 1.0 + 0.25;
const LOG_GROWTH: (f64, f64) = (1.7, 2.3);
/// Frozen sup of the oscillatory probe for `u = i, v = 2i, k = 1, l = 3`.
const OSCILLATORY_ENVELOPE: f64 = 0.2311;
const PROBE_ZERO_TOL: f64 = 1e-10;
const GN_SLACK: f64 = 1.0 + 2.0 / 128.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn c1_battery() -> Outcome {
    let start = Instant::now();
    let res = run_selftest(&ClassifyOptions::default()).expect("battery classifies");
    let dt = start.elapsed();
    let bad: Vec<String> = res
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} gave {} via {}", r.name, r.outcome, r.rule))
        .collect();
    outcome(
        bad.is_empty() && dt < SELFTEST_BUDGET,
        format!("{}/{} cases match in {:.2?} {bad:?}", res.len() - bad.len(), res.len(), dt),
    )
}

fn c2_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let opts = ClassifyOptions::default();
    let mut fails = Vec::new();
    for case in battery() {
        fails.extend(invariance_failures(&case, &mut rng, 20, 20, &opts).expect("transforms classify"));
    }
    outcome(fails.is_empty(), format!("{} failures {:?}", fails.len(), fails.iter().take(3).collect::<Vec<_>>()))
}

fn c3_roots() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = 0;
    for k in 1..=12 {
        for _ in 0..50 {
            let z = random_nonreal(&mut rng);
            if halfplane_root_count(z, k).unwrap() != halfplane_root_count_brute(z, k).unwrap() {
                mismatches += 1;
            }
        }
    }
    let mut pair_mismatches = 0;
    for _ in 0..100 {
        let k = rng.gen_range(1..=12);
        let tau = random_nonreal(&mut rng);
        let mut sigma = random_nonreal(&mut rng);
        if sigma.im.signum() != tau.im.signum() {
            sigma = sigma.conj();
        }
        if halfplane_root_count_brute(tau, k).unwrap() != halfplane_root_count_brute(sigma, k).unwrap() {
            pair_mismatches += 1;
        }
    }
    outcome(
        mismatches == 0 && pair_mismatches == 0,
        format!("formula/brute mismatches {mismatches} of 600, same-sign pair mismatches {pair_mismatches} of 100"),
    )
}

fn random_nonreal(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        if z.im != 0.0 {
            return z;
        }
    }
}

fn c4_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let tol = Tolerances::default();
    let mut failures = 0;
    let mut perturb_zero = 0;
    for _ in 0..200 {
        let (k, l, phis) = random_chain(&mut rng, 4, 5, 16);
        let p = EmbeddingProblem::forward(k, l, &phis).unwrap();
        let ok = p.annihilation_residual() == 0.0 && solve_system(&p, &tol).map(|s| s == phis).unwrap_or(false);
        if !ok {
            failures += 1;
        }
        let mut q = p.clone();
        let j = rng.gen_range(0..q.mus.len());
        let pts: Vec<(i64, i64)> = phis.iter().flat_map(|f| f.terms().map(|(k, _)| *k)).collect();
        let (m, n) = pts[rng.gen_range(0..pts.len())];
        q.mus[j].add_term(m, n, ExactComplex::one());
        if q.annihilation_residual() <= 0.0 {
            perturb_zero += 1;
        }
    }
    outcome(
        failures == 0 && perturb_zero == 0,
        format!("round-trip failures {failures} of 200, perturbations with zero residual {perturb_zero}"),
    )
}

fn c5_embedding() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tol = Tolerances::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, l) in [(1, 1), (1, 3), (3, 1)] {
        let rows = embedding_envelope(k, l, &[4, 8, 16, 32], 40, 4, &mut rng, &tol).expect("envelope");
        let maxes: Vec<f64> = rows.iter().map(|r| r.max_ratio).collect();
        let growth = maxes.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
        pass &= growth <= EMBEDDING_GROWTH;
        parts.push(format!("(k,l)=({k},{l}) envelope {maxes:.4?} worst doubling {growth:.3}"));
    }
    outcome(pass, parts.join("; "))
}

fn c6_dominance() -> Outcome {
    let ms = [16, 64, 256, 1024];
    let lap = parse_operator("d1^2 + d2^2").unwrap();
    let mut spread: f64 = 0.0;
    for node in [MultiIndex::new(2, 0), MultiIndex::new(0, 2)] {
        let v = dominance_constant(&lap, node, &ms);
        let (lo, hi) = v.iter().fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(*x), b.max(*x)));
        spread = spread.max((hi - lo) / hi);
    }
    let target = 1.0 / (4.0 * std::f64::consts::PI.powi(2));
    let mixed = dominance_constant(&DiffOperator::dmono(1, 1), MultiIndex::new(1, 1), &ms);
    let mixed_err = mixed.iter().map(|x| (x - target).abs()).fold(0.0, f64::max);
    let sq = parse_operator("(d1 + d2)^2").unwrap();
    let null = dominance_constant(&sq, MultiIndex::new(2, 0), &[16, 1024]);
    let growth = null[1] / null[0];
    outcome(
        spread < DOMINANCE_SPREAD && mixed_err <= MIXED_DOMINANCE_TOL && growth >= NULL_DIRECTION_GROWTH,
        format!("laplacian spread {spread:.2e}, mixed error {mixed_err:.1e}, null-direction growth {growth:.1}"),
    )
}

fn c7_multiplier() -> Outcome {
    let ms = [8, 16, 32, 64];
    let s = multiplier_tails((0, 0), (1, 1), 1, &ms, 1024).expect("subordinate");
    let monotone = s.windows(2).all(|w| w[1] <= w[0]);
    outcome(
        s[3] < TAIL_DECAY * s[0] && monotone,
        format!("S(8..64) = {s:.4?}, S(64)/S(8) = {:.3}", s[3] / s[0]),
    )
}

fn c8_counterexample() -> Outcome {
    let start = Instant::now();
    let cfg = CounterexampleConfig::case1(1, 1, 1);
    let r = counterexample_run(&cfg).expect("run");
    let dt = start.elapsed();
    let at = |p: u64| r.partial_sums.iter().find(|(q, _)| *q == p).map(|x| x.1).unwrap_or(f64::NAN);
    let ratio = at(4096) / at(64);
    outcome(
        r.cpq_max <= CPQ_BOUND
            && r.gamma_min == 1.0
            && r.gamma_max == 1.0
            && (LOG_GROWTH.0..=LOG_GROWTH.1).contains(&ratio)
            && dt < COUNTEREXAMPLE_BUDGET,
        format!(
            "{} pairs, max |c| {:.4}, gamma in [{}, {}], S(4096)/S(64) = {ratio:.4}, {:.2?}",
            r.pairs, r.cpq_max, r.gamma_min, r.gamma_max, dt
        ),
    )
}

fn c9_oscillatory() -> Outcome {
    let (u, v) = (Complex64::new(0.0, 1.0), Complex64::new(0.0, 2.0));
    let (bs, epss, rs) = oscillatory_grid();
    let (_, sup) = oscillatory_sweep(u, v, 1, 3, &bs, &epss, &rs, 1e-6).expect("quadrature");
    let zero = oscillatory_probe(u, u, 1, 3, 10.0, 1e-4, 1e3, 1e-6).unwrap().norm();
    outcome(
        sup.is_finite() && sup <= OSCILLATORY_ENVELOPE && zero <= PROBE_ZERO_TOL,
        format!("sup {sup:.6} against envelope {OSCILLATORY_ENVELOPE}, |probe(u,u)| = {zero:e}"),
    )
}

fn c10_gagliardo_nirenberg() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (lhs, rhs) = gn_check(&random_bump(&mut rng, 128)).expect("vanishes on boundary");
        worst = worst.max(lhs / rhs);
        if lhs > rhs * GN_SLACK {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("{violations} violations, worst lhs/rhs {worst:.4}"))
}

fn random_coefficient(rng: &mut ChaCha8Rng) -> ExactComplex {
    let q = |rng: &mut ChaCha8Rng| {
        ExactComplex::from_int(rng.gen_range(-20..=20))
            .checked_div(&ExactComplex::from_int(rng.gen_range(1..=9)))
            .unwrap()
    };
    let g = &q(rng) + &(&q(rng) * &ExactComplex::i());
    match rng.gen_range(0..4) {
        0 => &g * &ExactComplex::pi().pow(rng.gen_range(1..=3)),
        _ => g,
    }
}

fn c11_parser() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut failures = Vec::new();
    for _ in 0..1000 {
        let mut op = DiffOperator::zero();
        for _ in 0..rng.gen_range(1..=5) {
            let mi = MultiIndex::new(rng.gen_range(0..=8), rng.gen_range(0..=8));
            op.add_term(mi, random_coefficient(&mut rng));
        }
        if op.is_zero() {
            continue;
        }
        let text = op.to_string();
        match parse_operator(&text) {
            Ok(back) if back == op => {}
            _ => failures.push(text),
        }
    }
    let fixtures = [
        ("d1^2 + 2 d1 d2 + d2^2", include_str!("fixtures/diagram_square.json")),
        ("2*pi*i*d1 - d2^2", include_str!("fixtures/diagram_parabola.json")),
        ("d1 + 1.41421356 d2", include_str!("fixtures/diagram_irrational.json")),
    ];
    let mut mismatched = Vec::new();
    for (expr, fixture) in fixtures {
        let want: Value = serde_json::from_str(fixture).unwrap();
        let got = diagram_json(&build_diagram(&[parse_operator(expr).unwrap()]).unwrap());
        if got != want {
            mismatched.push(expr);
        }
    }
    outcome(
        failures.is_empty() && mismatched.is_empty(),
        format!(
            "round-trip failures {} of 1000 {:?}, fixture mismatches {mismatched:?}",
            failures.len(),
            failures.first()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("example battery", c1_battery),
        ("invariance", c2_invariance),
        ("root counts", c3_roots),
        ("solver round trip", c4_round_trip),
        ("embedding envelope", c5_embedding),
        ("dominance", c6_dominance),
        ("multiplier tail", c7_multiplier),
        ("counterexample divergence", c8_counterexample),
        ("oscillatory probe", c9_oscillatory),
        ("gagliardo-nirenberg", c10_gagliardo_nirenberg),
        ("parser", c11_parser),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name} ({:.2?}): {}", k + 1, start.elapsed(), o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
