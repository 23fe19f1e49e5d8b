use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kfano::bundle_delta::{delta_bundle, BundleDeltaInput};
use kfano::exactnum::{format_pq, parse_rational, Rational};
use kfano::pipeline::{
    certify, emit_report, run_paper_suite, suite_text, CertifyOptions, ReportFormat, SuiteOptions,
    Verdict,
};
use kfano::polyforms::{classify_singularity, parse_poly};
use kfano::valuations::{
    integral_linear_over_slab, slice_volume, slice_volume_profile, SlabPolytope,
};

#[derive(Parser)]
#[command(
    name = "kfano",
    version,
    about = "Exact K-stability certificates for Fano threefolds of family 2.8"
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

#[derive(Subcommand)]
enum Command {
    /// Run the full certification on a quartic with a double point at [0,0,0,1].
    Certify {
        #[arg(long)]
        surface: String,
        /// Override the coefficient c of the log pair.
        #[arg(long, value_parser = rational)]
        c: Option<Rational>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify the singularity of the quartic at [0,0,0,1].
    Classify {
        #[arg(long)]
        surface: String,
    },
    /// Recompute every published constant and compare.
    Suite {
        #[arg(long)]
        json: bool,
        /// Replace the A2 coefficient 2/9 (to watch the checks fail).
        #[arg(long, value_parser = rational, hide = true)]
        perturb_c: Option<Rational>,
    },
    /// Evaluate the stability threshold of a P^1-bundle.
    DeltaBundle {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        r: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        a: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        b: Rational,
        #[arg(long = "delta-base", value_parser = rational)]
        delta_base: Rational,
    },
    /// Volumes of the slab {u >= 0 : m <= u0+u1+u2 <= d} cut by l(u) >= t.
    Slab {
        #[arg(long, value_parser = rational)]
        d: Rational,
        #[arg(long, value_parser = rational)]
        m: Rational,
        /// Coefficients of l, comma separated.
        #[arg(long, value_parser = weights)]
        weights: [Rational; 3],
        #[arg(long, value_parser = rational)]
        t: Option<Rational>,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn weights(s: &str) -> Result<[Rational; 3], String> {
    let parts: Vec<Rational> = s.split(',').map(rational).collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|_| "expected three comma-separated rationals".to_string())
}

fn usage_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Certify {
            surface,
            c,
            format,
            out,
        } => {
            let options = CertifyOptions {
                c,
                ..Default::default()
            };
            let report = match certify(&surface, &options) {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            };
            let fmt = match format {
                Format::Json => ReportFormat::Json,
                Format::Text => ReportFormat::Text,
            };
            let bytes = emit_report(&report, fmt);
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(&path, bytes) {
                        return usage_error(format!("{}: {e}", path.display()));
                    }
                }
                None => print!("{bytes}"),
            }
            if report.verdict == Verdict::KSemistablePairCertified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Classify { surface } => {
            let class = match parse_poly(&surface).and_then(|s| classify_singularity(&s)) {
                Ok(c) => c,
                Err(e) => return usage_error(e),
            };
            println!("{}: {}", class.tag, class.detail);
            if class.tag == kfano::polyforms::SingularityTag::Degenerate {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::Suite { json, perturb_c } => {
            let summary = run_paper_suite(&SuiteOptions { c_a2: perturb_c });
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&summary).expect("summary serializes")
                );
            } else {
                print!("{}", suite_text(&summary));
            }
            if summary.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::DeltaBundle {
            n,
            r,
            a,
            b,
            delta_base,
        } => {
            let input = BundleDeltaInput {
                n,
                r,
                a,
                b,
                delta_base,
            };
            match delta_bundle(&input) {
                Ok(d) => {
                    println!("M          = {}", format_pq(&d.mean_m));
                    println!("term_base  = {}", format_pq(&d.term_base));
                    println!("term_zero  = {}", format_pq(&d.term_zero));
                    println!("term_infty = {}", format_pq(&d.term_infty));
                    println!("delta      = {}", format_pq(&d.delta));
                    ExitCode::SUCCESS
                }
                Err(e) => usage_error(e),
            }
        }
        Command::Slab { d, m, weights, t } => {
            let slab = match SlabPolytope::new(d, m, weights) {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            match t {
                Some(t) if t < Rational::from_integer(0.into()) => usage_error("t must be >= 0"),
                Some(t) => {
                    println!("slice_volume = {}", format_pq(&slice_volume(&slab, &t)));
                    ExitCode::SUCCESS
                }
                None => {
                    println!("volume       = {}", format_pq(&slab.euclidean_volume()));
                    println!(
                        "integral     = {}",
                        format_pq(&integral_linear_over_slab(&slab))
                    );
                    match slice_volume_profile(&slab) {
                        Ok(profile) => {
                            for (w, p) in profile.breakpoints().windows(2).zip(profile.pieces()) {
                                println!("[{}, {}]: {}", w[0], w[1], p);
                            }
                            ExitCode::SUCCESS
                        }
                        Err(e) => {
                            eprintln!("error: {e}");
                            ExitCode::from(1)
                        }
                    }
                }
            }
        }
    }
}
