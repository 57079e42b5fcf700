//! schemekit: validate association schemes, print their structural
//! invariants, and decide p-transitivity.
//!
//! Exit codes: 0 success, 1 validation failure, 2 parse/IO error, 3 method
//! not applicable or enumeration cap exceeded, 4 oracle/structural
//! disagreement.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use schemekit_core::criteria::{Decision, DecisionMethod};
use schemekit_core::{
    analyze, emit_report, is_prime, parse_catalog_lossy, parse_relation_matrix, parse_tensor,
    scheme_from_relation_matrix, validate_tensor, CheckMode, Error, ReportEntry, ReportFormat,
    Scheme, DEFAULT_MAX_FREE_BITS,
};

const EXIT_OK: u8 = 0;
const EXIT_VALIDATION: u8 = 1;
const EXIT_PARSE_IO: u8 = 2;
const EXIT_NOT_APPLICABLE: u8 = 3;
const EXIT_DISAGREEMENT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "schemekit",
    about = "Structural invariants and p-transitivity of association schemes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Rm,
    Tensor,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Oracle,
    Structural,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(Args)]
struct PrimesArg {
    /// Comma-separated list of primes
    #[arg(long, default_value = "2,3,5")]
    primes: String,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a scheme file and check the scheme axioms
    Validate {
        path: PathBuf,
        /// Input format; detected from the content when omitted
        #[arg(long, value_enum)]
        format: Option<InputFormat>,
    },
    /// Print thin radical, thin residue, singular minimum and class flags
    Info {
        path: PathBuf,
        #[command(flatten)]
        primes: PrimesArg,
    },
    /// Decide p-transitivity
    Transitive {
        path: PathBuf,
        #[arg(long)]
        prime: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// Enumerate all singular subsets
    Singular {
        path: PathBuf,
        /// Cap on the enumeration exponent
        #[arg(long, default_value_t = DEFAULT_MAX_FREE_BITS)]
        max_free: usize,
    },
    /// Analyze every scheme of a catalog and emit a report
    Batch {
        catalog: PathBuf,
        #[command(flatten)]
        primes: PrimesArg,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. }
        | Error::DuplicateId(_)
        | Error::TensorShape(_)
        | Error::NotPrime(_)
        | Error::Io(_) => EXIT_PARSE_IO,
        Error::TooLarge { .. } | Error::NotApplicable(_) => EXIT_NOT_APPLICABLE,
        _ => EXIT_VALIDATION,
    }
}

fn fail(err: &Error) -> u8 {
    eprintln!("error: {err}");
    exit_code_for(err)
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(Error::Io)
}

fn looks_like_tensor(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn load_scheme(path: &Path, format: Option<InputFormat>) -> Result<Scheme, Error> {
    let text = read_file(path)?;
    let format = format.unwrap_or(if looks_like_tensor(&text) {
        InputFormat::Tensor
    } else {
        InputFormat::Rm
    });
    match format {
        InputFormat::Rm => {
            let matrix = parse_relation_matrix(&text)?;
            scheme_from_relation_matrix(&matrix, CheckMode::Spot)
        }
        InputFormat::Tensor => validate_tensor(parse_tensor(&text)?),
    }
}

fn parse_primes(spec: &str) -> Result<Vec<u64>, Error> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let p: u64 = part.parse().map_err(|_| Error::Parse {
            line: 1,
            column: 1,
            message: format!("invalid prime '{part}'"),
        })?;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        out.push(p);
    }
    if out.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no primes given".into(),
        });
    }
    Ok(out)
}

fn valencies_display(s: &Scheme) -> String {
    let parts: Vec<String> = s.valencies().iter().map(|k| k.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn cmd_validate(path: &Path, format: Option<InputFormat>) -> u8 {
    match load_scheme(path, format) {
        Ok(s) => {
            println!(
                "OK order={} d={} k={}",
                s.order(),
                s.class_count(),
                valencies_display(&s)
            );
            EXIT_OK
        }
        Err(e) => fail(&e),
    }
}

fn cmd_info(path: &Path, primes: &str) -> u8 {
    let primes = match parse_primes(primes) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let s = match load_scheme(path, None) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    println!(
        "order={} d={} k={}",
        s.order(),
        s.class_count(),
        valencies_display(&s)
    );
    println!(
        "quasi_thin={} thin_thin_residue={}",
        s.is_quasi_thin(),
        s.has_thin_thin_residue()
    );
    println!("thin_radical={}", s.thin_radical());
    println!("thin_residue={}", s.thin_residue());
    println!("min_singular={}", s.min_singular());
    for p in primes {
        let sp = match s.p_prime_relations(p) {
            Ok(sp) => sp,
            Err(e) => return fail(&e),
        };
        let closure = match s.closure(&sp) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        };
        let valenced = match s.is_p_prime_valenced(p) {
            Ok(v) => v,
            Err(e) => return fail(&e),
        };
        println!("p={p}: S_p'={sp} closure={closure} p'-valenced={valenced}");
    }
    EXIT_OK
}

fn describe(decision: &Decision) -> String {
    let verdict = if decision.transitive {
        "transitive"
    } else {
        "not transitive"
    };
    match decision.agreement {
        Some(true) => format!("{verdict} (agree)"),
        Some(false) => format!(
            "DISAGREEMENT: oracle says {verdict}, {} says otherwise",
            decision.method
        ),
        None => match decision.method {
            schemekit_core::criteria::Method::Oracle if decision.applicable => verdict.to_string(),
            schemekit_core::criteria::Method::Oracle => {
                format!("{verdict} (oracle; structural not applicable)")
            }
            method => format!("{verdict} ({method})"),
        },
    }
}

fn cmd_transitive(path: &Path, prime: u64, method: MethodArg) -> u8 {
    let s = match load_scheme(path, None) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let method = match method {
        MethodArg::Oracle => DecisionMethod::Oracle,
        MethodArg::Structural => DecisionMethod::Structural,
        MethodArg::Both => DecisionMethod::Both,
    };
    match s.decide(prime, method) {
        Ok(d) => {
            println!("{}", describe(&d));
            if d.agreement == Some(false) {
                EXIT_DISAGREEMENT
            } else {
                EXIT_OK
            }
        }
        Err(e) => fail(&e),
    }
}

fn cmd_singular(path: &Path, max_free: usize) -> u8 {
    let s = match load_scheme(path, None) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    match s.enumerate_singular(max_free) {
        Ok(subsets) => {
            for t in &subsets {
                let closed = s.is_closed(t).expect("singular subsets are non-empty");
                println!("{t}  {}", if closed { "closed" } else { "not-closed" });
            }
            println!("{} singular subsets", subsets.len());
            EXIT_OK
        }
        Err(e) => fail(&e),
    }
}

fn cmd_batch(catalog: &Path, primes: &str, out: Option<&Path>, format: FormatArg) -> u8 {
    let primes = match parse_primes(primes) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let text = match read_file(catalog) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let entries = match parse_catalog_lossy(&text) {
        Ok(entries) => entries,
        Err(e) => return fail(&e),
    };
    let mut report = Vec::new();
    let mut any_error = false;
    let mut any_disagreement = false;
    for (id, parsed) in entries {
        let scheme = parsed.and_then(|m| scheme_from_relation_matrix(&m, CheckMode::Spot));
        match scheme {
            Ok(s) => {
                for &p in &primes {
                    match analyze(&id, &s, p) {
                        Ok(r) => {
                            if r.methods_agree == Some(false) {
                                any_disagreement = true;
                            }
                            report.push(ReportEntry::Report(r));
                        }
                        Err(e) => {
                            any_error = true;
                            report.push(ReportEntry::Failed {
                                id: id.clone(),
                                error: e.to_string(),
                            });
                        }
                    }
                }
            }
            Err(e) => {
                any_error = true;
                report.push(ReportEntry::Failed {
                    id: id.clone(),
                    error: e.to_string(),
                });
            }
        }
    }
    let format = match format {
        FormatArg::Text => ReportFormat::Text,
        FormatArg::Structured => ReportFormat::Structured,
    };
    let rendered = emit_report(&report, format);
    if let Some(out_path) = out {
        if let Err(e) = std::fs::write(out_path, &rendered) {
            return fail(&Error::Io(e));
        }
    } else {
        print!("{rendered}");
    }
    if any_disagreement {
        // the cross-validation gate: a disagreement outranks entry errors
        EXIT_DISAGREEMENT
    } else if any_error {
        EXIT_VALIDATION
    } else {
        EXIT_OK
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Validate { path, format } => cmd_validate(&path, format),
        Command::Info { path, primes } => cmd_info(&path, &primes.primes),
        Command::Transitive {
            path,
            prime,
            method,
        } => cmd_transitive(&path, prime, method),
        Command::Singular { path, max_free } => cmd_singular(&path, max_free),
        Command::Batch {
            catalog,
            primes,
            out,
            format,
        } => cmd_batch(&catalog, &primes.primes, out.as_deref(), format),
    };
    ExitCode::from(code)
}
