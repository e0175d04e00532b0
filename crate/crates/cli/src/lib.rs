//! Command-line front end.
//!
//! Every subcommand writes JSON lines (one record per line, integers as
//! decimal strings) or, with `--format human`, plain text. Exit codes:
//! `0` completed cleanly, `1` violations found (or no solution under
//! `evaluate --expect-solution`), `2` usage or domain error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use expdio_core::diophantine::{
    decompose, evaluate, search_sharded, verify_scope_sharded, Bounds, Decomposition, ScopeTag,
};
use expdio_core::ljunggren::{default_y_max, search_ljunggren};
use expdio_core::lucas::{
    carmichael_scan, check_lemma1, check_lemma3, primitive_divisors, CARMICHAEL_BOUND,
};
use expdio_core::pell::{check_d, fundamental_solution};
use expdio_core::Natural;
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    #[value(name = "json-lines", alias = "json")]
    JsonLines,
    Human,
}

#[derive(Debug, Parser)]
#[command(
    name = "expdio",
    version,
    about = "Exact checks for (a^n - 1)(b^n - 1) = x^2"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json-lines", global = true)]
    pub format: OutputMode,
    /// Also write the output to this file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

fn natural(s: &str) -> Result<Natural, String> {
    if s.is_empty() || !s.bytes().all(|c| c.is_ascii_digit()) {
        return Err(format!(
            "expected a non-negative decimal integer, got {s:?}"
        ));
    }
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fundamental (or k-th) solution of u^2 - d v^2 = 1.
    Pell {
        #[arg(long, value_parser = natural)]
        d: Natural,
        /// Index of the solution; omit for the fundamental solution.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Divisibility laws and primitive divisors of the Pell sequences.
    Lemmas {
        #[arg(long, value_parser = natural)]
        d: Natural,
        /// Sweep every non-square d from --d up to this value.
        #[arg(long, value_parser = natural)]
        d_max: Option<Natural>,
        /// Index bound for the divisibility checks.
        #[arg(long, default_value_t = 10)]
        k_max: u64,
        /// Index bound for the parity check.
        #[arg(long, default_value_t = 12)]
        parity_k_max: u64,
        /// Index bound for the primitive-divisor scan.
        #[arg(long, default_value_t = 20)]
        n_max: u64,
        /// Indices above this must have a primitive divisor.
        #[arg(long, default_value_t = CARMICHAEL_BOUND)]
        bound: u64,
    },
    /// Primitive prime divisors of v_n.
    PrimitiveDivisors {
        #[arg(long, value_parser = natural)]
        d: Natural,
        #[arg(long)]
        n: u64,
    },
    /// Solutions of x^p = 2 y^2 - 1 with y <= y_max.
    Ljunggren {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        y_max: Option<u64>,
    },
    /// Test one instance (a, b, n).
    Evaluate {
        #[arg(long, value_parser = natural)]
        a: Natural,
        #[arg(long, value_parser = natural)]
        b: Natural,
        #[arg(long)]
        n: u32,
        /// Exit 1 when the instance has no solution.
        #[arg(long)]
        expect_solution: bool,
    },
    /// All solutions with 2 <= a < b inside the bounds.
    Search {
        #[arg(long)]
        a_max: u64,
        #[arg(long)]
        b_max: u64,
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = 1)]
        shards: usize,
    },
    /// Sweep one theorem scope and report violations.
    Verify {
        /// thm1-case1, thm1-case2, thm1-case3, thm2, cohn-4n or power-pair
        #[arg(long, value_parser = parse_scope)]
        scope: ScopeTag,
        #[arg(long)]
        a_max: Option<u64>,
        #[arg(long)]
        b_max: Option<u64>,
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long, default_value_t = 1)]
        shards: usize,
    },
}

fn parse_scope(s: &str) -> Result<ScopeTag, String> {
    s.parse().map_err(|_| {
        let names: Vec<_> = ScopeTag::ALL.iter().map(|t| t.name()).collect();
        format!("unknown scope {s:?} (expected one of {})", names.join(", "))
    })
}

struct Output {
    mode: OutputMode,
    buf: Vec<u8>,
}

impl Output {
    fn record<T: Serialize>(&mut self, value: &T, human: impl FnOnce() -> String) {
        match self.mode {
            OutputMode::JsonLines => {
                serde_json::to_writer(&mut self.buf, value).expect("records serialize");
                self.buf.push(b'\n');
            }
            OutputMode::Human => {
                self.buf.extend_from_slice(human().as_bytes());
                self.buf.push(b'\n');
            }
        }
    }
}

#[derive(Serialize)]
struct LemmaRecord<'a> {
    #[serde(with = "expdio_core::decimal")]
    d: &'a Natural,
    violations: Vec<expdio_core::lucas::LemmaViolation>,
    #[serde(with = "expdio_core::decimal::seq")]
    notes: Vec<u64>,
}

fn execute(cli: &Cli, out: &mut Output) -> Result<i32, expdio_core::Error> {
    match &cli.command {
        Command::Pell { d, k: None } => {
            let f = fundamental_solution(d)?;
            out.record(&f, || format!("d = {}: u1 = {}, v1 = {}", f.d, f.u1, f.v1));
            Ok(EXIT_OK)
        }
        Command::Pell { d, k: Some(k) } => {
            let p = fundamental_solution(d)?.point(*k)?;
            out.record(&p, || {
                format!("d = {}, k = {}: u = {}, v = {}", p.d, p.k, p.u, p.v)
            });
            Ok(EXIT_OK)
        }
        Command::Lemmas {
            d,
            d_max,
            k_max,
            parity_k_max,
            n_max,
            bound,
        } => {
            let mut ds = Vec::new();
            match d_max {
                None => ds.push(d.clone()),
                Some(hi) => {
                    let mut cur = d.clone();
                    while &cur <= hi {
                        if check_d(&cur).is_ok() {
                            ds.push(cur.clone());
                        }
                        cur += 1u32;
                    }
                }
            }
            let mut code = EXIT_OK;
            for d in &ds {
                let mut violations = check_lemma1(d, *k_max)?;
                violations.extend(check_lemma3(d, *parity_k_max)?);
                let scan = carmichael_scan(d, *n_max, *bound)?;
                violations.extend(scan.violations);
                if !violations.is_empty() {
                    code = EXIT_VIOLATION;
                }
                let rec = LemmaRecord {
                    d,
                    violations,
                    notes: scan.notes,
                };
                out.record(&rec, || {
                    let mut s = format!("d = {}: {} violation(s)", rec.d, rec.violations.len());
                    for v in &rec.violations {
                        s.push_str(&format!("\n  {} at k = {}: {}", v.lemma_id, v.k, v.detail));
                    }
                    if !rec.notes.is_empty() {
                        s.push_str(&format!("\n  no primitive divisor at n = {:?}", rec.notes));
                    }
                    s
                });
            }
            Ok(code)
        }
        Command::PrimitiveDivisors { d, n } => {
            let set = primitive_divisors(d, *n)?;
            out.record(&set, || {
                let ps: Vec<String> = set.primes.iter().map(|p| p.to_string()).collect();
                format!("d = {}, n = {}: {{{}}}", set.d, set.n, ps.join(", "))
            });
            Ok(EXIT_OK)
        }
        Command::Ljunggren { p, y_max } => {
            let y_max = y_max.unwrap_or_else(|| default_y_max(*p));
            for s in search_ljunggren(*p, y_max)? {
                out.record(&s, || format!("{}^{} = 2 * {}^2 - 1", s.x, s.p, s.y));
            }
            Ok(EXIT_OK)
        }
        Command::Evaluate {
            a,
            b,
            n,
            expect_solution,
        } => match evaluate(a, b, *n)? {
            Some(cert) => {
                out.record(&cert, || cert.to_string());
                Ok(EXIT_OK)
            }
            None => {
                let Decomposition::Obstructed(o) = decompose(a, b, *n)? else {
                    return Err(expdio_core::Error::Internal(format!(
                        "({a}, {b}, {n}) splits along its gcd but evaluated as non-square"
                    )));
                };
                out.record(&o, || {
                    format!(
                        "no solution for ({}, {}, {}): D = {}, quotients {} and {}, non-square side {:?}",
                        o.a, o.b, o.n, o.d, o.a_quotient, o.b_quotient, o.non_square
                    )
                });
                Ok(if *expect_solution {
                    EXIT_VIOLATION
                } else {
                    EXIT_OK
                })
            }
        },
        Command::Search {
            a_max,
            b_max,
            n_max,
            shards,
        } => {
            for cert in search_sharded(Bounds::new(*a_max, *b_max, *n_max), *shards) {
                out.record(&cert, || cert.to_string());
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            scope,
            a_max,
            b_max,
            n_max,
            shards,
        } => {
            let defaults = scope.default_bounds();
            let bounds = Bounds::new(
                a_max.unwrap_or(defaults.a_max),
                b_max.unwrap_or(defaults.b_max),
                n_max.unwrap_or(defaults.n_max),
            );
            let report = verify_scope_sharded(*scope, bounds, *shards);
            out.record(&report, || {
                let mut s = format!(
                    "{}: a <= {}, b <= {}, n <= {}: {} pairs, {} instances, {} expected exception(s), {} violation(s)",
                    report.scope,
                    bounds.a_max,
                    bounds.b_max,
                    bounds.n_max,
                    report.pairs_checked,
                    report.instances_checked,
                    report.expected_exceptions.len(),
                    report.violations.len()
                );
                for c in &report.expected_exceptions {
                    s.push_str(&format!("\n  allowed:   {c}"));
                }
                for c in &report.violations {
                    s.push_str(&format!("\n  VIOLATION: {c}"));
                }
                s
            });
            Ok(if report.holds() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            })
        }
    }
}

/// Parses `argv` (including the program name), runs the command, and
/// writes to the given streams. Returns the process exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let msg = e.to_string();
                    let first = msg.lines().next().unwrap_or("invalid arguments");
                    let _ = writeln!(stderr, "{first}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut out = Output {
        mode: cli.format,
        buf: Vec::new(),
    };
    let code = match execute(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = stdout.write_all(&out.buf).and_then(|_| stdout.flush()) {
        let _ = writeln!(stderr, "error: writing output: {e}");
        return EXIT_USAGE;
    }
    if let Some(path) = &cli.output {
        if let Err(e) = fs::write(path, &out.buf) {
            let _ = writeln!(stderr, "error: writing {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    code
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}
