//! `vdc`: command-line front end for the shifted-primes toolkit.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use vdc::construction::{
    assemble, paper_schedule, sweep, ConstructionConfig,
};
use vdc::gamma::{bracket_gamma, build_spectrum};
use vdc::recurrence::{eta_bracket, eta_exact, max_avoiding_set, periodize, verify_avoidance};
use vdc::tau::{error_diagnostics, tau};
use vdc::weights::{build_scheme, verify_cancellation, SchemeParams, WeightScheme};
use vdc::Error;

#[derive(Parser)]
#[command(name = "vdc", version, about = "van der Corput toolkit for shifted primes")]
struct Cli {
    /// Output path; standard output when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Cap on internal parallelism; never affects results.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a CSV of tau(d, q) values: d, q, r, tau_num, tau_den.
    TauTable {
        #[arg(long)]
        dmax: u64,
        #[arg(long)]
        qmax: u64,
    },
    /// Build a weight scheme and verify its cancellation inequality.
    Weights(WeightsArgs),
    /// Assemble the weighted prime cosine polynomial over a schedule.
    Construct {
        /// Scheme JSON as produced by `weights`.
        #[arg(long)]
        scheme: PathBuf,
        /// Comma-separated schedule "N1,N2,...".
        #[arg(long)]
        schedule: String,
        #[arg(long, default_value_t = 1 << 16)]
        grid: usize,
        /// Optional TSV dump of the polynomial over [0, 1/2].
        #[arg(long)]
        tsv: Option<PathBuf>,
    },
    /// Run a batch of constructions and emit the trend table CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Bracket gamma(n) by the cutting-plane LP.
    Gamma {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Bracket gamma over several n; CSV (n, lower, upper, iterations).
    GammaSweep {
        /// Comma-separated list of n values.
        #[arg(long)]
        ns: String,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Heilbronn eta(n), exact or grid-bracketed.
    Eta {
        #[arg(long)]
        n: u64,
        #[arg(long, conflicts_with = "grid")]
        exact: bool,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Maximum difference-avoiding set on a window, forbidden = S_n.
    Avoid {
        #[arg(long)]
        window: u64,
        #[arg(long)]
        n: u64,
    },
    /// Periodize an avoiding set mod 2n and verify its avoidance.
    Periodize {
        /// Comma-separated set "a1,a2,...", each in [1, n].
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: u64,
    },
    /// Error-term shape diagnostics (non-rigorous) and the paper schedule.
    Diagnostics {
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long)]
        n: f64,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        d1: f64,
        /// Also print the paper-preset schedule symbolically at this delta.
        #[arg(long)]
        delta: Option<f64>,
    },
}

#[derive(Args)]
struct WeightsArgs {
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    p_minus: Option<u64>,
    #[arg(long)]
    p_plus: Option<u64>,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long)]
    d_exc: Option<u64>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 3 } else { 0 });
        }
    };
    if let Some(workers) = cli.workers {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    let started = Instant::now();
    match run(&cli, started) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

/// Round a float to 12 significant digits so identical configs print
/// byte-identical JSON.
fn sig12(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(format!("{x}"));
    }
    let s = format!("{x:.11e}");
    let parsed: f64 = s.parse().unwrap();
    serde_json::Number::from_f64(parsed).map_or(Value::Null, Value::Number)
}

fn envelope(config_echo: Value, result: Value, started: Instant) -> Value {
    json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "config_echo": config_echo,
        "wall_time_seconds": started.elapsed().as_secs_f64(),
        "result": result,
    })
}

fn write_output(cli: &Cli, text: &str) -> vdc::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Resource(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.write_all(b"\n"))
                .map_err(|e| Error::Resource(format!("cannot write stdout: {e}")))
        }
    }
}

fn rational_json(r: &BigRational) -> (String, String) {
    (r.numer().to_string(), r.denom().to_string())
}

fn scheme_json(scheme: &WeightScheme, delta: f64) -> Value {
    let report = verify_cancellation(scheme, delta);
    let (min_num, min_den) = rational_json(&report.min_value);
    json!({
        "params": scheme.params,
        "d_star": scheme.d_star,
        "members": scheme.members.iter().map(|(d, w)| {
            let (w_num, w_den) = rational_json(w);
            json!({"d": d, "w_num": w_num, "w_den": w_den})
        }).collect::<Vec<_>>(),
        "cancellation": {
            "min_num": min_num,
            "min_den": min_den,
            "min_value": sig12(report.min_value.to_f64().unwrap_or(f64::NAN)),
            "argmin_q": report.argmin_q,
            "q_checked": report.q_checked,
            "passed": report.passed,
        },
    })
}

#[derive(serde::Deserialize)]
struct SchemeFile {
    params: SchemeParams,
    d_star: u64,
    members: Vec<MemberFile>,
}

#[derive(serde::Deserialize)]
struct MemberFile {
    d: u64,
    w_num: String,
    w_den: String,
}

fn load_scheme(path: &PathBuf) -> vdc::Result<WeightScheme> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    let file: SchemeFile = serde_json::from_str(&text)
        .map_err(|e| Error::Domain(format!("bad scheme JSON: {e}")))?;
    let members = file
        .members
        .into_iter()
        .map(|m| {
            let num = BigInt::from_str(&m.w_num)
                .map_err(|e| Error::Domain(format!("bad weight numerator: {e}")))?;
            let den = BigInt::from_str(&m.w_den)
                .map_err(|e| Error::Domain(format!("bad weight denominator: {e}")))?;
            Ok((m.d, BigRational::new(num, den)))
        })
        .collect::<vdc::Result<Vec<_>>>()?;
    if members.is_empty() {
        return Err(Error::Domain("scheme has no members".into()));
    }
    Ok(WeightScheme {
        params: file.params,
        d_star: file.d_star,
        members,
        interval_primes: Vec::new(),
    })
}

fn parse_u64_list(text: &str) -> vdc::Result<Vec<u64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|e| Error::Domain(format!("bad integer '{s}': {e}")))
        })
        .collect()
}

fn poly_json(poly: &vdc::CosinePoly64) -> Value {
    json!({
        "a0": sig12(poly.a0),
        "terms": poly.terms.iter()
            .map(|&(f, c)| json!([f, sig12(c)]))
            .collect::<Vec<_>>(),
    })
}

#[derive(serde::Deserialize)]
struct SweepFile {
    /// Either the string "unit" (the degenerate scheme {(1, 1)}) or a path
    /// to a scheme JSON file.
    scheme: String,
    schedules: Vec<Vec<u64>>,
    grid_size: usize,
    #[serde(default = "default_delta")]
    delta_target: f64,
}

fn default_delta() -> f64 {
    0.5
}

fn unit_scheme() -> WeightScheme {
    WeightScheme {
        params: SchemeParams { delta: 0.5, p_minus: 1, p_plus: 1, l: 0, d_exceptional: None },
        d_star: 1,
        members: vec![(1, BigRational::from_integer(BigInt::from(1)))],
        interval_primes: Vec::new(),
    }
}

fn run(cli: &Cli, started: Instant) -> vdc::Result<()> {
    match &cli.command {
        Command::TauTable { dmax, qmax } => {
            if *dmax < 1 || *qmax < 1 {
                return Err(Error::Domain("dmax and qmax must be positive".into()));
            }
            let mut out = String::from("d,q,r,tau_num,tau_den\n");
            for d in 1..=*dmax {
                for q in 1..=*qmax {
                    let r = q / num_integer::gcd(q, d);
                    let t = tau(d, q);
                    let (num, den) = rational_json(&t);
                    out.push_str(&format!("{d},{q},{r},{num},{den}\n"));
                }
            }
            write_output(cli, &out)
        }
        Command::Weights(args) => {
            let params = match (args.p_minus, args.p_plus, args.l) {
                (Some(p_minus), Some(p_plus), Some(l)) => SchemeParams {
                    delta: args.delta,
                    p_minus,
                    p_plus,
                    l,
                    d_exceptional: args.d_exc,
                },
                (None, None, None) => SchemeParams::paper_preset(args.delta, args.d_exc),
                _ => {
                    return Err(Error::Domain(
                        "provide all of --p-minus/--p-plus/--l or none (paper preset)".into(),
                    ))
                }
            };
            let scheme = build_scheme(&params)?;
            let echo = json!({"subcommand": "weights", "params": params});
            let doc = envelope(echo, scheme_json(&scheme, args.delta), started);
            write_output(cli, &serde_json::to_string_pretty(&doc).unwrap())
        }
        Command::Construct { scheme, schedule, grid, tsv } => {
            let scheme = load_scheme(scheme)?;
            let n_schedule = parse_u64_list(schedule)?;
            let config = ConstructionConfig {
                scheme,
                n_schedule: n_schedule.clone(),
                grid_size: *grid,
                delta_target: 0.0,
            };
            let result = assemble::<f64>(&config)?;
            if let Some(path) = tsv {
                let dump = vdc::poly::grid_tsv(&result.polynomial, (*grid).max(1024));
                std::fs::write(path, dump)
                    .map_err(|e| Error::Resource(format!("cannot write TSV: {e}")))?;
            }
            let echo = json!({
                "subcommand": "construct",
                "schedule": n_schedule,
                "grid": grid,
            });
            let body = json!({
                "polynomial": poly_json(&result.polynomial),
                "certified_floor": sig12(result.certified_floor),
                "a0_bound": sig12(result.a0_bound),
                "max_frequency": result.max_frequency,
                "diagnostics": result.diagnostics.iter().map(|row| json!({
                    "d": row.d,
                    "n_j": row.n_j,
                    "e1": sig12(row.shapes.e1),
                    "e2": sig12(row.shapes.e2),
                    "e3": sig12(row.shapes.e3),
                    "label": "shape diagnostics (non-rigorous)",
                })).collect::<Vec<_>>(),
            });
            write_output(cli, &serde_json::to_string_pretty(&envelope(echo, body, started)).unwrap())
        }
        Command::Sweep { config } => {
            let text = std::fs::read_to_string(config)
                .map_err(|e| Error::Domain(format!("cannot read {}: {e}", config.display())))?;
            let file: SweepFile = serde_json::from_str(&text)
                .map_err(|e| Error::Domain(format!("bad sweep JSON: {e}")))?;
            let scheme = if file.scheme == "unit" {
                unit_scheme()
            } else {
                load_scheme(&PathBuf::from(&file.scheme))?
            };
            let configs: Vec<ConstructionConfig> = file
                .schedules
                .iter()
                .map(|schedule| ConstructionConfig {
                    scheme: scheme.clone(),
                    n_schedule: schedule.clone(),
                    grid_size: file.grid_size,
                    delta_target: file.delta_target,
                })
                .collect();
            let rows = sweep(&configs)?;
            let mut out = String::from("n,a0_bound,inv_log_n,a0_times_log_n\n");
            for row in rows {
                out.push_str(&format!(
                    "{},{:.12e},{:.12e},{:.12e}\n",
                    row.max_frequency, row.a0_bound, row.inv_log_n, row.a0_times_log_n
                ));
            }
            write_output(cli, &out)
        }
        Command::Gamma { n, tol } => {
            let bracket = bracket_gamma::<f64>(*n, *tol)?;
            let echo = json!({"subcommand": "gamma", "n": n, "tol": tol});
            let body = json!({
                "n": bracket.n,
                "lower": sig12(bracket.lower),
                "upper": sig12(bracket.upper),
                "witness": poly_json(&bracket.witness),
                "witness_cert_grid": bracket.witness_cert_grid,
                "grid_final": bracket.grid_final,
                "iterations": bracket.iterations,
                "converged": bracket.converged,
            });
            write_output(cli, &serde_json::to_string_pretty(&envelope(echo, body, started)).unwrap())
        }
        Command::GammaSweep { ns, tol } => {
            let ns = parse_u64_list(ns)?;
            let mut out = String::from("n,lower,upper,iterations\n");
            for &n in &ns {
                let b = bracket_gamma::<f64>(n, *tol)?;
                out.push_str(&format!(
                    "{},{:.12e},{:.12e},{}\n",
                    n, b.lower, b.upper, b.iterations
                ));
            }
            write_output(cli, &out)
        }
        Command::Eta { n, exact, grid } => {
            let spectrum = build_spectrum(*n)?;
            let echo = json!({"subcommand": "eta", "n": n, "exact": exact, "grid": grid});
            let body = match grid {
                Some(g) => {
                    let b = eta_bracket(&spectrum, *g)?;
                    json!({
                        "n": n,
                        "lower": sig12(b.lower),
                        "upper": sig12(b.upper),
                        "lower_num": b.lower_num,
                        "lower_den": b.lower_den,
                        "argmax_num": b.argmax_num,
                        "argmax_den": b.argmax_den,
                        "method": "grid-bracket",
                    })
                }
                None => {
                    let r = eta_exact(&spectrum)?;
                    json!({
                        "n": r.n,
                        "value": sig12(r.value),
                        "value_num": r.value_num,
                        "value_den": r.value_den,
                        "argmax_num": r.argmax_num,
                        "argmax_den": r.argmax_den,
                        "method": r.method,
                    })
                }
            };
            write_output(cli, &serde_json::to_string_pretty(&envelope(echo, body, started)).unwrap())
        }
        Command::Avoid { window, n } => {
            let forbidden = build_spectrum(*n)?.freqs;
            let result = max_avoiding_set(*window, &forbidden)?;
            let echo = json!({"subcommand": "avoid", "window": window, "n": n});
            let body = serde_json::to_value(&result).unwrap();
            write_output(cli, &serde_json::to_string_pretty(&envelope(echo, body, started)).unwrap())
        }
        Command::Periodize { set, n } => {
            let avoiding = parse_u64_list(set)?;
            let descriptor = periodize(&avoiding, *n)?;
            let forbidden = build_spectrum(*n)?.freqs;
            let check = verify_avoidance(&descriptor, &forbidden, *n);
            let echo = json!({"subcommand": "periodize", "set": avoiding, "n": n});
            let body = json!({
                "descriptor": descriptor,
                "verification": check,
            });
            write_output(cli, &serde_json::to_string_pretty(&envelope(echo, body, started)).unwrap())
        }
        Command::Diagnostics { d, n, q, r, d1, delta } => {
            if *n < 2.0 || *q <= 0.0 || *r <= 0.0 || *d1 <= 0.0 {
                return Err(Error::Domain("diagnostics needs N >= 2 and positive Q, R, D1".into()));
            }
            let shapes = error_diagnostics(*d, *n, *q, *r, *d1);
            let dominant = if shapes.e3 >= shapes.e1.max(shapes.e2) {
                "e3 (minor arcs)"
            } else if shapes.e2 >= shapes.e1 {
                "e2 (major arcs, q | d)"
            } else {
                "e1 (major arcs, q not dividing d)"
            };
            let paper = match delta {
                Some(delta) => serde_json::to_value(paper_schedule(*delta)?).unwrap(),
                None => Value::Null,
            };
            let echo = json!({
                "subcommand": "diagnostics",
                "d": d, "n": n, "q": q, "r": r, "d1": d1, "delta": delta,
            });
            let body = json!({
                "label": "shape diagnostics (non-rigorous)",
                "e1": sig12(shapes.e1),
                "e2": sig12(shapes.e2),
                "e3": sig12(shapes.e3),
                "dominant": dominant,
                "paper_schedule": paper,
            });
            write_output(cli, &serde_json::to_string_pretty(&envelope(echo, body, started)).unwrap())
        }
    }
}
