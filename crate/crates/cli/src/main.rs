//! `gzorbit`: JSON front end to the GZ toolkit.
//!
//! Every invocation prints one JSON document on stdout. Exit status is 0 on
//! success, 1 for input or domain errors (printed as `{"error": {...}}`) and
//! 2 for usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gzorbit_core::wire::*;
use gzorbit_core::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gzorbit", version, about = "Gelfand-Zeitlin fibres, flows and orbits")]
struct Cli {
    #[command(flatten)]
    cfg: Config,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Config {
    /// Arithmetic: exact Gaussian rationals or complex floating point.
    #[arg(long, global = true, default_value = "exact")]
    mode: Mode,
    #[arg(long, global = true, allow_negative_numbers = true)]
    eps_rank: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    eps_root: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    eps_eq: Option<f64>,
    /// Run the contracts of the command and embed a "checks" block.
    #[arg(long, global = true)]
    verify: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cutoff characteristic polynomials of a matrix.
    Phi {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// The three strong-regularity tests.
    Sreg {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// The Hessenberg matrix of a fibre label.
    Hessenberg {
        #[arg(long, alias = "in")]
        spec: PathBuf,
    },
    /// Apply a word of GZ flows.
    Flow {
        #[arg(long = "in")]
        input: PathBuf,
        /// `i,j,re[,im]`, applied left to right.
        #[arg(long = "step", required = true)]
        steps: Vec<String>,
    },
    /// Solve for bordered-matrix coordinates level by level.
    Xi {
        #[arg(long)]
        spec: PathBuf,
        /// Only this level (default: every level 1..n-1).
        #[arg(long)]
        level: Option<usize>,
        /// Choice vector or one level's choices, inline JSON or a file.
        #[arg(long)]
        choice: Option<String>,
    },
    /// Number of strongly regular orbits in a fibre.
    OrbitCount {
        #[arg(long)]
        spec: PathBuf,
    },
    /// One representative per strongly regular orbit.
    OrbitReps {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Orbit label of a strongly regular matrix.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Known cutoff spectra, to skip root extraction.
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Patterns, permutations and representatives of the nilfibre.
    Nilfibre {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Input { kind: &'static str, detail: String },
    Domain(GzError),
}

impl From<GzError> for Failure {
    fn from(e: GzError) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn to_json(&self) -> Value {
        match self {
            Failure::Input { kind, detail } => json!({"error": {"kind": kind, "detail": detail}}),
            Failure::Domain(e) => error_to_json(e),
        }
    }
}

type Out = std::result::Result<Value, Failure>;

fn read_json(path: &Path) -> std::result::Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input {
        kind: "io",
        detail: format!("{}: {e}", path.display()),
    })?;
    parse_json(&text, &path.display().to_string())
}

fn parse_json(text: &str, what: &str) -> std::result::Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Input {
        kind: "json",
        detail: format!("{what}: {e}"),
    })
}

/// Inline JSON when it looks like JSON, a file path otherwise.
fn inline_or_file(arg: &str) -> std::result::Result<Value, Failure> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        parse_json(arg, "--choice")
    } else {
        read_json(Path::new(arg))
    }
}

fn scalar_arg<S: Scalar>(re: &str, im: Option<&str>) -> Result<S> {
    let part = |s: &str| serde_json::from_str::<Value>(s.trim()).unwrap_or_else(|_| Value::String(s.trim().into()));
    S::from_wire(&Value::Array(vec![part(re), im.map(part).unwrap_or(json!(0))]))
}

fn parse_step<S: Scalar>(s: &str) -> Result<FlowStep<S>> {
    let parts: Vec<&str> = s.split(',').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(GzError::Schema(format!("step {s:?} is not i,j,re[,im]")));
    }
    let idx = |p: &str| {
        p.trim()
            .parse::<usize>()
            .map_err(|_| GzError::Schema(format!("bad index {p:?} in step {s:?}")))
    };
    Ok(FlowStep::new(idx(parts[0])?, idx(parts[1])?, scalar_arg(parts[2], parts.get(3).copied())?))
}

fn with_checks(mut v: Value, checks: Option<Value>) -> Value {
    if let (Some(c), Some(obj)) = (checks, v.as_object_mut()) {
        obj.insert("checks".into(), c);
    }
    v
}

fn count_json(n: u128) -> Value {
    u64::try_from(n).map(|v| json!(v)).unwrap_or_else(|_| json!(n.to_string()))
}

fn run<S: Scalar>(cmd: &Cmd, tol: &Tolerance, verify: bool) -> Out {
    match cmd {
        Cmd::Phi { input } => {
            let x: Mat<S> = mat_from_json(&read_json(input)?)?;
            let c = phi(&x);
            let checks = if verify {
                let h = hessenberg_from_spec(&c)?;
                Some(json!({"hessenberg_round_trip": phi(&h).approx_eq(&c, tol)}))
            } else {
                None
            };
            Ok(with_checks(spec_to_json(&c, tol), checks))
        }
        Cmd::Sreg { input } => {
            let x: Mat<S> = mat_from_json(&read_json(input)?)?;
            Ok(sreg_to_json(&sreg_report(&x, tol)))
        }
        Cmd::Hessenberg { spec } => {
            let c: GZSpec<S> = spec_from_json(&read_json(spec)?, tol)?;
            let h = hessenberg_from_spec(&c)?;
            let checks = verify.then(|| {
                json!({
                    "is_hessenberg": is_hessenberg(&h, tol),
                    "phi_matches": phi(&h).approx_eq(&c, tol),
                    "relative_error": c.rel_error(&phi(&h)),
                })
            });
            Ok(with_checks(mat_to_json(&h), checks))
        }
        Cmd::Flow { input, steps } => {
            let x: Mat<S> = mat_from_json(&read_json(input)?)?;
            let word = steps.iter().map(|s| parse_step(s)).collect::<Result<Vec<FlowStep<S>>>>()?;
            let y = flow_word(&x, &word)?;
            let checks = if verify {
                let rev: Vec<FlowStep<S>> = word.iter().rev().cloned().collect();
                let y2 = flow_word(&x, &rev)?;
                Some(json!({
                    "phi_drift": phi(&x).rel_error(&phi(&y)),
                    "commutativity": y.max_abs_diff(&y2) / y.scale(),
                }))
            } else {
                None
            };
            Ok(with_checks(mat_to_json(&y), checks))
        }
        Cmd::Xi { spec, level, choice } => {
            let c: GZSpec<S> = spec_from_json(&read_json(spec)?, tol)?;
            let n = c.n();
            let levels: Vec<usize> = match level {
                Some(i) if (1..n).contains(i) => vec![*i],
                Some(i) => return Err(GzError::IndexOutOfRange { index: *i, bound: n.saturating_sub(1) }.into()),
                None => (1..n).collect(),
            };
            let choice_v = choice.as_deref().map(inline_or_file).transpose()?;
            let choice_of = |i: usize| -> Result<BlockChoice<S>> {
                match &choice_v {
                    None => Ok(BlockChoice::empty()),
                    Some(v) if v.is_array() && level.is_some() => block_choice_from_json(v),
                    Some(v) => {
                        let cv: ChoiceVector<S> = choice_from_json(v)?;
                        if cv.levels.len() != n - 1 {
                            return Err(GzError::InvalidChoice(format!(
                                "choice has {} levels, fibre has {}",
                                cv.levels.len(),
                                n - 1
                            )));
                        }
                        Ok(cv.levels[i - 1].clone())
                    }
                }
            };
            let mut points = Vec::new();
            for i in levels {
                let target = c.level(i + 1)?;
                let p = xi_solve(&c.spectrum(i, tol)?, target, &choice_of(i)?, &[], tol)?;
                let mut entry = json!({
                    "point": point_to_json(&p),
                    "stabilizer": stabilizer_to_json(&stabilizer_pattern(&p, tol)),
                });
                if verify {
                    entry["checks"] = json!({
                        "charpoly_matches": xi_charpoly(&p).approx_eq(target, tol),
                        "bordered_regular": assemble(&p).is_regular(tol),
                    });
                }
                points.push(entry);
            }
            Ok(json!({"points": points}))
        }
        Cmd::OrbitCount { spec } => {
            let c: GZSpec<S> = spec_from_json(&read_json(spec)?, tol)?;
            let f = fiber_class(&c, tol)?;
            let count = orbit_count(&c, tol)?;
            Ok(json!({"count": count_json(count), "j": f.j, "class": f.kind.as_str()}))
        }
        Cmd::OrbitReps { spec } => {
            let c: GZSpec<S> = spec_from_json(&read_json(spec)?, tol)?;
            let mut orbits = Vec::new();
            for (v, x) in enumerate_orbits(&c, tol)? {
                let mut entry = json!({"choice": choice_to_json(&v), "matrix": mat_to_json(&x)});
                if verify {
                    entry["checks"] = json!({
                        "phi_matches": phi(&x).approx_eq(&c, tol),
                        "strongly_regular": is_strongly_regular(&x, tol)?,
                        "classify_round_trip": classify(&x, tol)? == v,
                    });
                }
                orbits.push(entry);
            }
            Ok(json!({"count": orbits.len(), "orbits": orbits}))
        }
        Cmd::Classify { input, spec } => {
            let x: Mat<S> = mat_from_json(&read_json(input)?)?;
            let v = match spec {
                Some(p) => {
                    let c: GZSpec<S> = spec_from_json(&read_json(p)?, tol)?;
                    if c.n() != x.n() {
                        return Err(GzError::DimensionMismatch(format!("{}x{} matrix, {}-level label", x.n(), x.n(), c.n())).into());
                    }
                    classify_with_spectra(&x, &c.spectra(tol)?, tol)?
                }
                None => classify(&x, tol)?,
            };
            Ok(choice_to_json(&v))
        }
        Cmd::Nilfibre { n } => {
            if *n == 0 {
                return Err(GzError::InvalidParams("n must be at least 1".into()).into());
            }
            let c = GZSpec::<S>::zero(*n);
            let lower = lower_pattern(*n);
            let mut entries = Vec::new();
            for (v, x) in enumerate_orbits(&c, tol)? {
                let sides = v.sides();
                let sigma = nil_permutation(&sides);
                let pattern = nil_pattern(&sides);
                let mut entry = json!({
                    "choice": sides_to_json(&sides),
                    "permutation": permutation_to_json(&sigma),
                    "cycles": sigma.cycles(),
                    "pattern": pattern_to_json(&pattern),
                    "matrix": mat_to_json(&x),
                });
                if verify {
                    entry["checks"] = json!({
                        "permutation_conjugates_lower": permute_pattern(&lower, &sigma) == pattern,
                        "within_pattern": within_pattern(&x, &pattern, tol),
                        "classify_round_trip": classify(&x, tol)? == v,
                    });
                }
                entries.push(entry);
            }
            Ok(json!({"n": n, "count": entries.len(), "entries": entries}))
        }
    }
}

fn tolerance(cfg: &Config) -> Result<Tolerance> {
    let d = Tolerance::default();
    Tolerance::new(
        cfg.eps_rank.unwrap_or(d.eps_rank),
        cfg.eps_root.unwrap_or(d.eps_root),
        cfg.eps_eq.unwrap_or(d.eps_eq),
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = match tolerance(&cli.cfg) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let out = match cli.cfg.mode {
        Mode::Exact => run::<GaussRat>(&cli.cmd, &tol, cli.cfg.verify),
        Mode::Float => run::<Complex64>(&cli.cmd, &tol, cli.cfg.verify),
    };
    let (doc, code) = match out {
        Ok(v) => (v, ExitCode::SUCCESS),
        Err(f) => (f.to_json(), ExitCode::from(1)),
    };
    let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    // a closed pipe downstream is not our failure
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    code
}
