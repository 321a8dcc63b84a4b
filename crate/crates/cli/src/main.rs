use std::fs;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use smoothspace::classifier::{classify, ClassifyOptions, Outcome};
use smoothspace::config::{Tolerances, TOL_ENV};
use smoothspace::fourier::{
    counterexample_run, dominance_constant, embedding_ratio, gn_check, multiplier_tails, oscillatory_sweep, solve_system,
    CounterexampleConfig, GridFn,
};
use smoothspace::fourier::counterexample::{even_pair, power_ladder};
use smoothspace::harness::{embedding_envelope, oscillatory_grid, random_bump, run_selftest};
use smoothspace::json::{diagram_json, problem_from_json, solution_json, verdict_json};
use smoothspace::parser::{parse_coefficient, parse_operator, parse_operator_list};
use smoothspace::{build_diagram, DiffOperator, Error, MultiIndex};

#[derive(Parser)]
#[command(name = "smoothspace", version, about = "Complementation of smooth-function spaces on the torus")]
struct Cli {
    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Tolerance overrides, `key=value,...` or one number; also read from SMOOTHSPACE_TOL.
    #[arg(long, global = true, env = TOL_ENV)]
    tol: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a collection of operators.
    Classify {
        #[command(flatten)]
        input: OperatorInput,
        /// Exit 1 when the verdict is Undecided.
        #[arg(long)]
        strict: bool,
        /// Largest root denominator tried by the substitution search.
        #[arg(long, default_value_t = 64)]
        substitution_bound: u64,
        /// Half-width of the first zero-set box.
        #[arg(long, default_value_t = 16)]
        zero_set_box: i64,
    },
    /// Newton diagram of a collection of operators.
    Diagram {
        #[command(flatten)]
        input: OperatorInput,
    },
    /// Solve the chain system read from a JSON file (`-` for stdin).
    Solve { file: String },
    /// Numerical sweeps.
    #[command(subcommand)]
    Verify(Verify),
    /// Run the example battery.
    Selftest,
}

#[derive(Args)]
struct OperatorInput {
    /// Operator expressions.
    exprs: Vec<String>,
    /// File with one expression per line, `#` comments.
    #[arg(long)]
    file: Option<String>,
}

#[derive(Subcommand)]
enum Verify {
    /// Largest ratio of the mixed norm to the norms of the right-hand sides.
    Embedding {
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        l: u32,
        /// Support radii of the random inputs.
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
        radii: Vec<i64>,
        #[arg(long, default_value_t = 40)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        oversample: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ratio for one problem file instead of the random sweep.
        #[arg(long)]
        input: Option<String>,
    },
    /// Sup of `|m|^x |n|^y / |P(m, n)|` on annuli.
    Dominance {
        /// The operator `P`.
        #[arg(long)]
        operator: String,
        /// Node exponents `x,y`.
        #[arg(long, value_delimiter = ',', default_value = "1,1")]
        node: Vec<u32>,
        #[arg(long = "M", value_delimiter = ',', default_value = "16,64,256,1024")]
        m: Vec<u64>,
    },
    /// Tails of the model multiplier sums.
    Multiplier {
        #[arg(long, default_value_t = 0)]
        alpha: u32,
        #[arg(long, default_value_t = 0)]
        beta: u32,
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long, default_value_t = 1)]
        b: u32,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign: i32,
        #[arg(long = "M", value_delimiter = ',', default_value = "8,16,32,64")]
        m: Vec<u64>,
        #[arg(long = "Mmax", default_value_t = 1024)]
        mmax: u64,
    },
    /// Partial sums of the counterexample series.
    Counterexample {
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long = "N", default_value_t = 1)]
        n: usize,
        #[arg(long)]
        j0: Option<usize>,
        #[arg(long)]
        j1: Option<usize>,
        #[arg(long, default_value_t = 0.25)]
        delta: f64,
        #[arg(long = "Cmin", default_value_t = 1)]
        cmin: u64,
        #[arg(long = "Pmax", default_value_t = 4096)]
        pmax: u64,
    },
    /// Sweep of the oscillatory probe over `(b, eps, R)`.
    Oscillatory {
        #[arg(long, default_value = "i")]
        u: String,
        #[arg(long, default_value = "2 i")]
        v: String,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 3)]
        l: u32,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[arg(long = "R", value_delimiter = ',')]
        r: Option<Vec<f64>>,
    },
    /// Discrete Gagliardo-Nirenberg inequality on random bumps or a grid file.
    Gn {
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON `{n, values}` in row-major order.
        #[arg(long)]
        input: Option<String>,
    },
}

struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}")))
    }
}

fn read_json(path: &str) -> Result<Value, Failure> {
    serde_json::from_str(&read_input(path)?).map_err(|e| Failure(format!("{path}: {e}")))
}

fn operators(input: &OperatorInput) -> Result<Vec<DiffOperator>, Failure> {
    let mut ops = Vec::new();
    if let Some(f) = &input.file {
        ops.extend(parse_operator_list(&read_input(f)?)?);
    }
    for e in &input.exprs {
        ops.push(parse_operator(e)?);
    }
    if ops.is_empty() {
        return Err(Failure("no operators given".into()));
    }
    Ok(ops)
}

fn complex_arg(s: &str) -> Result<Complex64, Failure> {
    Ok(parse_coefficient(s)?.to_complex64())
}

fn run(cli: &Cli) -> Result<(Value, bool), Failure> {
    let tol = Tolerances::default().with_overrides(cli.tol.as_deref().unwrap_or(""))?;
    match &cli.command {
        Command::Classify {
            input,
            strict,
            substitution_bound,
            zero_set_box,
        } => {
            let opts = ClassifyOptions {
                substitution_bound: *substitution_bound,
                zero_set_box: *zero_set_box,
                tolerances: tol,
            };
            let v = classify(&operators(input)?, &opts)?;
            let ok = !(*strict && v.outcome == Outcome::Undecided);
            Ok((verdict_json(&v), ok))
        }
        Command::Diagram { input } => Ok((diagram_json(&build_diagram(&operators(input)?)?), true)),
        Command::Solve { file } => {
            let p = problem_from_json(&read_json(file)?)?;
            let phis = solve_system(&p, &tol)?;
            Ok((solution_json(&phis, p.annihilation_residual()), true))
        }
        Command::Selftest => {
            let results = run_selftest(&ClassifyOptions {
                tolerances: tol,
                ..ClassifyOptions::default()
            })?;
            let ok = results.iter().all(|r| r.pass);
            Ok((json!({"pass": ok, "cases": results}), ok))
        }
        Command::Verify(v) => verify(v, &tol).map(|out| (out, true)),
    }
}

fn verify(v: &Verify, tol: &Tolerances) -> Result<Value, Failure> {
    match v {
        Verify::Embedding {
            k,
            l,
            radii,
            samples,
            oversample,
            seed,
            input,
        } => {
            if let Some(path) = input {
                let p = problem_from_json(&read_json(path)?)?;
                return Ok(json!({"k": p.k, "l": p.l, "ratio": embedding_ratio(&p, *oversample, tol)?}));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let rows = embedding_envelope(*k, *l, radii, *samples, *oversample, &mut rng, tol)?;
            Ok(json!({
                "k": k, "l": l, "samples": samples, "oversample": oversample, "seed": seed,
                "envelope": rows, "unverified": even_pair(*k, *l),
            }))
        }
        Verify::Dominance { operator, node, m } => {
            let op = parse_operator(operator)?;
            if node.len() != 2 {
                return Err(Failure("--node takes two exponents x,y".into()));
            }
            let vals = dominance_constant(&op, MultiIndex::new(node[0], node[1]), m);
            let ladder: Vec<Value> = m
                .iter()
                .zip(&vals)
                .map(|(m, c)| json!({"M": m, "constant": finite_or_string(*c)}))
                .collect();
            Ok(json!({"operator": op.to_string(), "node": node, "ladder": ladder}))
        }
        Verify::Multiplier {
            alpha,
            beta,
            a,
            b,
            sign,
            m,
            mmax,
        } => {
            let tails = multiplier_tails((*alpha, *beta), (*a, *b), *sign, m, *mmax)?;
            let ladder: Vec<Value> = m.iter().zip(&tails).map(|(m, s)| json!({"M": m, "tail": s})).collect();
            Ok(json!({"alpha": alpha, "beta": beta, "a": a, "b": b, "sign": sign, "Mmax": mmax, "ladder": ladder}))
        }
        Verify::Counterexample {
            k,
            l,
            n,
            j0,
            j1,
            delta,
            cmin,
            pmax,
        } => {
            let mut cfg = CounterexampleConfig::case1(*k, *l, *n);
            cfg.j0 = j0.unwrap_or(0);
            cfg.j1 = j1.unwrap_or(*n);
            cfg.delta = *delta;
            cfg.cmin = *cmin;
            cfg.pmax = *pmax;
            cfg.ladder = power_ladder(*pmax);
            let r = counterexample_run(&cfg)?;
            let ladder: Vec<Value> = r.partial_sums.iter().map(|(p, s)| json!({"P": p, "S": s})).collect();
            Ok(json!({
                "k": k, "l": l, "N": n, "j0": cfg.j0, "j1": cfg.j1,
                "delta": delta, "Cmin": cmin, "Pmax": pmax,
                "case": r.case, "pairs": r.pairs, "cpqMax": r.cpq_max,
                "gammaMin": r.gamma_min, "gammaMax": r.gamma_max,
                "coefficientMin": r.coefficient_min, "partialSums": ladder, "unverified": r.unverified,
            }))
        }
        Verify::Oscillatory { u, v, k, l, b, eps, r } => {
            let (zu, zv) = (complex_arg(u)?, complex_arg(v)?);
            let (gb, ge, gr) = oscillatory_grid();
            let bs = b.clone().unwrap_or(gb);
            let es = eps.clone().unwrap_or(ge);
            let rs = r.clone().unwrap_or(gr);
            let (samples, sup) = oscillatory_sweep(zu, zv, *k, *l, &bs, &es, &rs, tol.quadrature)?;
            Ok(json!({
                "u": {"re": zu.re, "im": zu.im}, "v": {"re": zv.re, "im": zv.im},
                "k": k, "l": l, "sup": sup, "samples": samples, "unverified": even_pair(*k, *l),
            }))
        }
        Verify::Gn {
            n,
            samples,
            seed,
            input,
        } => {
            let grids = match input {
                Some(path) => {
                    let v = read_json(path)?;
                    let n = v["n"].as_u64().ok_or_else(|| Failure("grid needs integer 'n'".into()))?;
                    let values: Option<Vec<f64>> = v["values"].as_array().map(|a| a.iter().filter_map(Value::as_f64).collect());
                    let values = values.ok_or_else(|| Failure("grid needs numeric array 'values'".into()))?;
                    vec![GridFn::new(n as usize, values)?]
                }
                None => {
                    if *n < 3 {
                        return Err(Failure("grid size must be at least 3".into()));
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    (0..*samples).map(|_| random_bump(&mut rng, *n)).collect()
                }
            };
            let mut worst: f64 = 0.0;
            let mut violations = 0;
            let mut rows = Vec::new();
            for g in &grids {
                let (lhs, rhs) = gn_check(g)?;
                if lhs > rhs {
                    violations += 1;
                }
                if rhs > 0.0 {
                    worst = worst.max(lhs / rhs);
                }
                rows.push(json!({"lhs": lhs, "rhs": rhs}));
            }
            Ok(json!({"grids": grids.len(), "violations": violations, "worstRatio": worst, "checks": rows}))
        }
    }
}

fn finite_or_string(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, ok)) => {
            let text = if cli.pretty {
                serde_json::to_string_pretty(&out)
            } else {
                serde_json::to_string(&out)
            };
            // a closed stdout is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{}", text.expect("JSON values serialize"));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
