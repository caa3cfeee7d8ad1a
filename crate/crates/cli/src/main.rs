//! Command line surface: table dumps, verification suites, and membership
//! queries.  Exit codes: 0 pass/member, 1 fail/non-member, 2 usage or
//! parse errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use e756_cli::json;
use e756_cli::suites::{self, Config, SuiteReport, Tables};

#[derive(Parser)]
#[command(
    name = "e756",
    version,
    about = "Exact tables and verification for the 56-dimensional representation of the Chevalley group of type E7"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum DumpTarget {
    Roots,
    Weights,
    Constants,
    Quadrics,
    FormF,
    FormH,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Invariance,
    Identities,
    LieDims,
    Scaling,
    OrbitVanish,
    CrossCheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Ideal,
    Forms,
}

#[derive(Subcommand)]
enum Command {
    /// Print one of the computed tables.
    Dump {
        #[arg(long, value_enum)]
        target: DumpTarget,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run a verification suite over the configured primes and seed.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Prime moduli for modular checks (repeatable).
        #[arg(long = "prime")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 17)]
        seed: u64,
        /// Length of random generator words.
        #[arg(long, default_value_t = 10)]
        length: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Decide membership of a matrix in the extended group.
    Membership {
        /// Path of the matrix JSON file.
        #[arg(long)]
        matrix: std::path::PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Dump { target, format } => {
            let cfg = Config::default();
            let tables = Tables::new(&cfg.primes);
            let json_text = match target {
                DumpTarget::Roots => to_json(&e756_cli::dumps::dump_roots(&tables.cb)),
                DumpTarget::Weights => to_json(&e756_cli::dumps::dump_weights(&tables.cb)),
                DumpTarget::Constants => to_json(&e756_cli::dumps::dump_constants(&tables.cb)),
                DumpTarget::Quadrics => to_json(&e756_cli::dumps::dump_quadrics(&tables)),
                DumpTarget::FormF => to_json(&e756_cli::dumps::dump_form_f(&tables)),
                DumpTarget::FormH => to_json(&e756_cli::dumps::dump_form_h(&tables)),
            };
            match format {
                Format::Json => println!("{json_text}"),
                Format::Text => {
                    let v: serde_json::Value =
                        serde_json::from_str(&json_text).expect("own output");
                    for item in v.as_array().expect("dump is an array") {
                        println!("{item}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            primes,
            seed,
            length,
            format,
        } => {
            let mut cfg = Config::default();
            if !primes.is_empty() {
                for &p in &primes {
                    if !e756::ring::is_prime(p) {
                        return Err(format!("--prime {p}: not a prime"));
                    }
                }
                cfg.primes = primes;
            }
            cfg.seed = seed;
            cfg.word_length = length;
            let tables = Tables::new(&cfg.primes);
            let report: SuiteReport = match suite {
                Suite::Invariance => suites::suite_invariance(&tables, &cfg),
                Suite::Identities => suites::suite_identities(&tables, &cfg),
                Suite::LieDims => suites::suite_lie_dims(&tables, &cfg),
                Suite::Scaling => suites::suite_scaling(&tables, &cfg),
                Suite::OrbitVanish => suites::suite_orbit_vanish(&tables, &cfg),
                Suite::CrossCheck => suites::suite_cross_check(&tables, &cfg),
            };
            match format {
                Format::Json => println!("{}", to_json(&report)),
                Format::Text => print!("{}", report.to_text()),
            }
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Membership {
            matrix,
            method,
            format,
        } => {
            let text = std::fs::read_to_string(&matrix)
                .map_err(|e| format!("cannot read {}: {e}", matrix.display()))?;
            let parsed = json::parse_matrix(&text).map_err(|e| e.to_string())?;
            let cfg = Config::default();
            let tables = Tables::new(&cfg.primes);
            let verdict = decide(&tables, &parsed, method);
            let member = verdict.member;
            match format {
                Format::Json => println!("{}", to_json(&verdict)),
                Format::Text => {
                    println!(
                        "{} ({} route, ring {})",
                        if member { "member" } else { "non-member" },
                        verdict.method,
                        verdict.ring
                    );
                    if let (Some(eh), Some(ef)) = (&verdict.eps_h, &verdict.eps_f) {
                        println!("eps_h = {eh}; eps_f = {ef}");
                    }
                    if let Some((name, detail)) = &verdict.witness {
                        println!("witness {name}: {detail}");
                    }
                }
            }
            Ok(if member {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

#[derive(serde::Serialize)]
struct VerdictOut {
    build: String,
    ring: String,
    method: String,
    member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps_h: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps_f: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<(String, String)>,
}

fn decide(tables: &Tables, m: &json::AnyMatrix, method: Method) -> VerdictOut {
    use e756::quadrics::Reducer;
    use e756::ring::{Field, RatField, Ring};
    use e756::stabilizer::{membership_forms, membership_gi, MembershipVerdict};

    fn go<R: Field>(
        tables: &Tables,
        ring: &R,
        m: &e756::Matrix<R>,
        method: Method,
    ) -> MembershipVerdict<R::Elem>
    where
        R::Elem: Ord,
    {
        match method {
            Method::Ideal => {
                let reducer = Reducer::new(&tables.cb, &tables.basis, ring.clone());
                membership_gi(&tables.basis, &reducer, ring, m)
            }
            Method::Forms => membership_forms(&tables.cb, &tables.h, &tables.f4, ring, m),
        }
        .unwrap_or_else(|e| {
            eprintln!("error: {e}");
            std::process::exit(2)
        })
    }

    let method_name = match method {
        Method::Ideal => "ideal",
        Method::Forms => "forms",
    }
    .to_string();
    let pack = |ring_name: String,
                member: bool,
                eps_h: Option<String>,
                eps_f: Option<String>,
                witness: Option<(String, String)>| VerdictOut {
        build: suites::BUILD_ID.to_string(),
        ring: ring_name,
        method: method_name.clone(),
        member,
        eps_h,
        eps_f,
        witness,
    };
    match m {
        json::AnyMatrix::Int(mi) => {
            // integer matrices are decided over the rationals
            let q = RatField;
            let mq = mi.map_ring(q, |v| q.from_bigint(v));
            let v = go(tables, &q, &mq, method);
            pack(
                "int".to_string(),
                v.member,
                v.eps_h.map(|e| q.format(&e)),
                v.eps_f.map(|e| q.format(&e)),
                v.witness,
            )
        }
        json::AnyMatrix::Rat(mr) => {
            let q = RatField;
            let v = go(tables, &q, mr, method);
            pack(
                q.name(),
                v.member,
                v.eps_h.map(|e| q.format(&e)),
                v.eps_f.map(|e| q.format(&e)),
                v.witness,
            )
        }
        json::AnyMatrix::Fp(mf) => {
            let fp = *mf.ring();
            let v = go(tables, &fp, mf, method);
            pack(
                fp.name(),
                v.member,
                v.eps_h.map(|e| fp.format(&e)),
                v.eps_f.map(|e| fp.format(&e)),
                v.witness,
            )
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}
