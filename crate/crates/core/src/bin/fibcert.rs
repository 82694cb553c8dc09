use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use fibcert::exactmath::{Precision, DEFAULT_MAX_DIGITS};
use fibcert::fibkit::fib;
use fibcert::matveev::analytic_stage;
use fibcert::pipeline::{run_proof_with, verify_report_file, ProgressEvent, ProofConfig};
use fibcert::reduction::{approx_f64, reduce_one, reduce_round, ReductionInstance, RoundOptions};
use fibcert::search::{open_problem_oracle, search_box, Range, SearchBox, SearchOptions};
use fibcert::{BigInt, Error};

#[derive(Parser)]
#[command(name = "fibcert", version, about = "Certified replay of F_n = F_l^k (F_l^m - 1)")]
struct Cli {
    /// Working precision in decimal digits.
    #[arg(long, global = true, default_value_t = 200)]
    precision: u32,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full proof and emit the certificate.
    Prove {
        /// Keep per-l reduction results here and reuse them on the next run.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Print per-l progress on stderr.
        #[arg(long)]
        progress: bool,
    },
    /// Analytic bounds only.
    Bounds,
    /// One reduction round with its published parameters.
    Reduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        round: u8,
        /// Restrict to a single l.
        #[arg(long)]
        l: Option<u64>,
        /// Override the bound M on k + m.
        #[arg(long)]
        m: Option<BigInt>,
    },
    /// Exhaustive search over a box `n_lo:n_hi,l_lo:l_hi,k_lo:k_hi,m_lo:m_hi`.
    Search {
        #[arg(long = "box")]
        search_box: SearchBox,
        #[arg(long)]
        no_prefilter: bool,
    },
    /// Search F_n = a^k (b^m - 1) over small ranges.
    Oracle {
        #[arg(long, default_value = "2:5")]
        a: String,
        #[arg(long, default_value = "2:5")]
        b: String,
        #[arg(long, default_value = "1:6")]
        k: String,
        #[arg(long, default_value = "1:6")]
        m: String,
        #[arg(long, default_value_t = 100)]
        n_hi: u64,
    },
    /// Print F_n.
    Fib {
        #[arg(long)]
        n: u64,
    },
    /// Re-check a certificate produced by `prove --output json`.
    Verify { report: PathBuf },
}

fn parse_range(s: &str) -> fibcert::Result<Range> {
    let bad = || Error::Parse(format!("expected lo:hi, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok(Range::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn exit_code(e: &Error) -> ExitCode {
    match e {
        Error::PrecisionExhausted { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

struct Emitter {
    output: Output,
    out: Option<PathBuf>,
}

impl Emitter {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> fibcert::Result<()> {
        let body = match self.output {
            Output::Json => serde_json::to_string_pretty(value)? + "\n",
            Output::Text => text(),
        };
        match &self.out {
            Some(path) => std::fs::write(path, body)?,
            None => print!("{body}"),
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    // clap exits 2 on usage errors, which is reserved for precision exhaustion
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn run(cli: Cli) -> fibcert::Result<ExitCode> {
    let precision = Precision::new(cli.precision, DEFAULT_MAX_DIGITS.max(cli.precision))?;
    let em = Emitter { output: cli.output, out: cli.out };
    let digits = precision.digits;
    match cli.command {
        Command::Prove { cache_dir, progress } => {
            let config = ProofConfig { precision, jobs: cli.jobs, cache_dir, ..ProofConfig::default() };
            let cb = |ev: ProgressEvent<'_>| match ev {
                ProgressEvent::StageStarted(s) => eprintln!("== {s}"),
                ProgressEvent::Reduced { round, outcome } => {
                    eprintln!("   round {round}: l = {:>3}  q_{} = {}", outcome.l, outcome.q_index, outcome.q)
                }
                ProgressEvent::StageFinished(r) => eprintln!("   done in {} ms", r.wall_time_ms),
            };
            let report = run_proof_with(&config, progress.then_some(&cb as _))?;
            em.emit(&report, || report.to_text())?;
            if let Some(f) = &report.failure {
                eprintln!("failure: {}", f.message);
                return Ok(ExitCode::from(if f.kind == "precision-exhausted" { 2 } else { 1 }));
            }
            let expected = report.verdict.len() == 1 && {
                let v = &report.verdict[0];
                (v.n, v.l, v.k, v.m) == (6, 3, 3, 1)
            };
            Ok(if report.certified && expected { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Bounds => {
            let a = analytic_stage(digits)?;
            em.emit(&a, || {
                format!(
                    "n_max = {}\nl_max = {}\nk_max = {}\nm_max = {}\nm coefficient = {:.6e} (cap 1.61e12)\nn coefficient = {:.6e}\n",
                    a.bounds.n_max,
                    a.bounds.l_max,
                    a.bounds.k_max,
                    a.bounds.m_max,
                    a.m_coefficient.padded.to_f64(),
                    a.n_coefficient.to_f64()
                )
            })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce { round, l, m } => {
            let (default_m, l_hi) = if round == 1 { (BigInt::from(131_000_000_000_167u64), 157) } else { (BigInt::from(251), 18) };
            let m = m.unwrap_or(default_m);
            let opts = RoundOptions { precision, jobs: cli.jobs, ..RoundOptions::default() };
            if let Some(l) = l {
                let out = reduce_one(&ReductionInstance::fibonacci(l, m.clone())?, precision, &opts.cap)?;
                em.emit(&out, || {
                    format!(
                        "l = {}  M = {m}\nq_{} = {}\nepsilon > {:e}\nomega < {}\n",
                        out.l,
                        out.q_index,
                        out.q,
                        approx_f64(&out.epsilon_lower),
                        approx_f64(&out.omega_bound)
                    )
                })?;
            } else {
                let s = reduce_round(&m, 3, l_hi, &opts, None)?;
                em.emit(&s, || {
                    let mut t = String::new();
                    for o in &s.table {
                        t += &format!(
                            "l = {:>3}  q_{:<3} = {:<42} eps > {:<12.6e} omega < {}\n",
                            o.l,
                            o.q_index,
                            o.q.to_string(),
                            approx_f64(&o.epsilon_lower),
                            approx_f64(&o.omega_bound)
                        );
                    }
                    t + &format!(
                        "M = {}\nmax q = {} (l = {})\nmin eps > {:e} (l = {})\npooled omega < {}\nper-l omega < {}\nm_max = {}\n",
                        s.m_bound,
                        s.max_q,
                        s.max_q_l,
                        approx_f64(&s.min_epsilon),
                        s.min_epsilon_l,
                        approx_f64(&s.pooled_omega),
                        approx_f64(&s.per_l_max_omega),
                        s.m_max
                    )
                })?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Search { search_box: b, no_prefilter } => {
            let r = search_box(&b, &SearchOptions { prefilter: !no_prefilter, jobs: cli.jobs })?;
            let rows: Vec<_> = r.solutions.iter().map(|s| s.row()).collect();
            em.emit(&json!({ "box": b.to_string(), "solutions": rows, "evaluated": r.evaluated, "pruned": r.pruned }), || {
                let mut t = format!("box {b}: {} tuples evaluated, {} pruned\n", r.evaluated, r.pruned);
                for s in &r.solutions {
                    t += &format!("{s}\n");
                }
                t + &format!("{} solution(s)\n", r.solutions.len())
            })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { a, b, k, m, n_hi } => {
            let hits = open_problem_oracle(parse_range(&a)?, parse_range(&b)?, parse_range(&k)?, parse_range(&m)?, n_hi)?;
            em.emit(&hits, || {
                let mut t = String::new();
                for h in &hits {
                    t += &format!("F_{} = {}^{} ({}^{} - 1) = {}\n", h.n, h.a, h.k, h.b, h.m, fib(h.n));
                }
                t + &format!("{} tuple(s)\n", hits.len())
            })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Fib { n } => {
            let f = fib(n);
            em.emit(&json!({ "n": n, "value": f.to_string() }), || format!("{f}\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { report } => match verify_report_file(&report) {
            Ok(()) => {
                em.emit(&json!({ "verified": true }), || "verified\n".into())?;
                Ok(ExitCode::SUCCESS)
            }
            Err(Error::VerificationFailed(msg)) => {
                em.emit(&json!({ "verified": false, "reason": msg }), || format!("verification failed: {msg}\n"))?;
                Ok(ExitCode::from(1))
            }
            Err(e) => Err(e),
        },
    }
}
