use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use whmf::cache::Cache;
use whmf::forms::FormSpec;
use whmf::integral_bases::{default_prec, integral_basis};
use whmf::level_one::a_coeff;
use whmf::qseries::vp_int;
use whmf::tables::PRIMES;
use whmf::verifier::{
    scan_theorem1, verify_all, verify_theorem5, VerificationReport, DEFAULT_PREC,
};
use whmf::{Error, QSeries};

#[derive(Parser)]
#[command(
    name = "whmf",
    version,
    about = "Weakly holomorphic modular forms and their p-adic congruences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the q-expansion of a form such as `j`, `f:4:1` or `theta:-12:2`
    Expand {
        form: String,
        #[arg(long, default_value_t = 64)]
        prec: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Compute without reading or writing the cache
        #[arg(long)]
        no_cache: bool,
    },
    /// Print a_k(m, n) and its 2-, 3- and 5-adic valuations
    #[command(allow_negative_numbers = true)]
    Coeff { k: i64, m: i64, n: i64 },
    /// Export the integral basis of M_k(p)
    Basis {
        k: i64,
        p: u32,
        #[arg(long)]
        prec: Option<i64>,
        /// Directory for manifest.json and one B_<n>.qs file per element
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify p^eps | a_k(m p^s, n) for one pair (p, k) or for all of them
    Verify {
        #[arg(long, required_unless_present = "all")]
        p: Option<u32>,
        #[arg(long, required_unless_present = "all")]
        k: Option<i64>,
        #[arg(long, default_value_t = DEFAULT_PREC)]
        prec: i64,
        /// Write the JSON report here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["p", "k"])]
        all: bool,
    },
    /// Look for coefficients violating the divisibility bound
    Scan {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        mmax: i64,
        #[arg(long)]
        nmax: i64,
        /// Also test m' p^s for s up to this
        #[arg(long, default_value_t = 0)]
        smax: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            // a failed certificate is a mathematical violation, not a usage error
            let violation = matches!(
                e.downcast_ref::<Error>(),
                Some(Error::RemainderNonzero { .. } | Error::CongruenceViolation { .. })
            );
            ExitCode::from(if violation { 1 } else { 2 })
        }
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Expand {
            form,
            prec,
            format,
            cache_dir,
            no_cache,
        } => {
            let spec: FormSpec = form.parse()?;
            let series = if no_cache {
                spec.expand(prec)?
            } else {
                Cache::resolve(cache_dir.as_deref()).expand(&spec, prec)?
            };
            match format {
                Format::Text => print!("{}", series.to_text()),
                Format::Json => println!("{}", series_json(&spec, &series)),
            }
            Ok(true)
        }
        Command::Coeff { k, m, n } => {
            let a = a_coeff(k, m, n)?;
            println!("a_{k}({m},{n}) = {a}");
            for p in PRIMES {
                println!("v_{p} = {}", vp_int(&a, p));
            }
            Ok(true)
        }
        Command::Basis { k, p, prec, out } => {
            let prec = match prec {
                Some(x) => x,
                None => default_prec(k, p)?,
            };
            let basis = integral_basis(k, p, prec)?;
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir)
                        .with_context(|| format!("creating {}", dir.display()))?;
                    fs::write(dir.join("manifest.json"), basis.manifest_json() + "\n")?;
                    for (n, b) in basis.elements.iter().enumerate() {
                        fs::write(dir.join(format!("B_{n}.qs")), b.to_text())?;
                    }
                }
                None => {
                    println!("{}", basis.manifest_json());
                    for b in &basis.elements {
                        print!("{}", b.to_text());
                    }
                }
            }
            Ok(true)
        }
        Command::Verify {
            p,
            k,
            prec,
            out,
            all,
        } => {
            let reports: Vec<VerificationReport> = if all {
                verify_all(prec)
                    .into_iter()
                    .collect::<std::result::Result<_, _>>()?
            } else {
                let (Some(p), Some(k)) = (p, k) else {
                    bail!("--p and --k are required")
                };
                vec![verify_theorem5(p, k, prec)?]
            };
            let body = if all {
                serde_json::to_string_pretty(&reports)?
            } else {
                reports[0].to_json()
            };
            match out {
                Some(path) => {
                    fs::write(&path, body + "\n")
                        .with_context(|| format!("writing {}", path.display()))?;
                    for r in &reports {
                        println!(
                            "p={} k={} {}",
                            r.p,
                            r.k,
                            if r.pass { "pass" } else { "FAIL" }
                        );
                    }
                }
                None => println!("{body}"),
            }
            Ok(reports.iter().all(|r| r.pass))
        }
        Command::Scan {
            p,
            k,
            mmax,
            nmax,
            smax,
        } => {
            let report = scan_theorem1(p, k, mmax, nmax, smax)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if !report.violations.is_empty() {
                eprintln!("{} violation(s)", report.violations.len());
            }
            Ok(report.violations.is_empty())
        }
    }
}

fn series_json(spec: &FormSpec, s: &QSeries) -> serde_json::Value {
    let coeffs: Vec<String> = s
        .coeffs()
        .iter()
        .map(|c| {
            if c.is_integer() {
                c.numer().to_string()
            } else {
                c.to_string()
            }
        })
        .collect();
    json!({ "form": spec.to_string(), "val": s.val(), "prec": s.prec(), "coefficients": coeffs })
}
