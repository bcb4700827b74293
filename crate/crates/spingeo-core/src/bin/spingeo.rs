//! Command-line front end: verification reports, identity fuzzing and the
//! scalar estimates.

use std::io;

use clap::{Parser, Subcommand, ValueEnum};

use spingeo_core::estimates::EstimateInput;
use spingeo_core::exactfield::Scalar;
use spingeo_core::report::{self, Arithmetic, Report};

#[derive(Parser)]
#[command(
    name = "spingeo",
    about = "Exact verification of spin geometries with skew torsion",
    version
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
    /// Run the verification suite of a catalog target or a JSON space file.
    ///
    /// Catalog targets: s3, b7, nk6-table, npg2-table.
    Verify {
        /// Catalog name or path to a space-definition JSON file.
        target: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Compare in float arithmetic (tolerance 1e-10) instead of exactly.
        #[arg(long)]
        float: bool,
        /// Only run checks whose id starts with this prefix.
        #[arg(long)]
        only: Option<String>,
    },
    /// Fuzz the frame identities of random torsion 3-forms.
    Fuzz {
        #[arg(long, default_value_t = 7)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        float: bool,
        #[arg(long)]
        only: Option<String>,
    },
    /// Evaluate the eigenvalue estimates and derived constants.
    Estimates {
        /// Frame dimension (3..=8).
        #[arg(long)]
        n: usize,
        /// Scalar curvature, e.g. "189/10".
        #[arg(long, allow_hyphen_values = true)]
        sca: String,
        /// Squared torsion norm, e.g. "7/5".
        #[arg(long, allow_hyphen_values = true)]
        tnorm2: String,
        /// Torsion eigenvalue, e.g. "-7/sqrt5".
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

// Ignore broken pipes so `spingeo ... | head` exits quietly.
fn print_out(text: &str) {
    let _ = io::Write::write_all(&mut io::stdout(), text.as_bytes());
}

fn emit(report: &Report, format: Format) -> i32 {
    let text = match format {
        Format::Text => report.to_text(),
        Format::Json => {
            let mut json = report.to_json();
            json.push('\n');
            json
        }
    };
    print_out(&text);
    report.failures().min(125) as i32
}

fn parse_scalar(label: &str, text: &str) -> Scalar {
    match Scalar::parse(text) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: invalid {label}: {e}");
            std::process::exit(2);
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify { target, format, float, only } => {
            let arithmetic = if float { Arithmetic::Float } else { Arithmetic::Exact };
            match report::run_verify(&target, arithmetic, only.as_deref()) {
                Ok(r) => emit(&r, format),
                Err(e) => {
                    eprintln!("error: {e}");
                    126
                }
            }
        }
        Command::Fuzz { dim, trials, seed, format, float, only } => {
            if !(3..=10).contains(&dim) {
                eprintln!("error: dimension must be in 3..=10");
                std::process::exit(2);
            }
            let arithmetic = if float { Arithmetic::Float } else { Arithmetic::Exact };
            let mut r = report::run_fuzz(dim, trials, seed, arithmetic);
            if let Some(prefix) = only.as_deref() {
                r.filter_prefix(prefix);
            }
            emit(&r, format)
        }
        Command::Estimates { n, sca, tnorm2, gamma, format } => {
            if !(3..=8).contains(&n) {
                eprintln!("error: dimension must be in 3..=8");
                std::process::exit(2);
            }
            let input = EstimateInput::new(
                n,
                parse_scalar("--sca", &sca),
                parse_scalar("--tnorm2", &tnorm2),
                parse_scalar("--gamma", &gamma),
            );
            let out = report::estimates_output(&input);
            let mut text = String::new();
            match format {
                Format::Json => {
                    text.push_str(&serde_json::to_string_pretty(&out).expect("serializes"));
                    text.push('\n');
                }
                Format::Text => {
                    text.push_str(&format!("estimates for n = {}\n", out.n));
                    for v in &out.values {
                        if v.float.is_nan() {
                            text.push_str(&format!("  {:<26} {}\n", v.name, v.exact));
                        } else {
                            text.push_str(&format!(
                                "  {:<26} {}  ({:.12})\n",
                                v.name, v.exact, v.float
                            ));
                        }
                    }
                }
            }
            print_out(&text);
            0
        }
    };
    std::process::exit(code);
}
