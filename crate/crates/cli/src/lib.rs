//! `qsc` — exact calculator for moduli of one-dimensional sheaves on the
//! quadric surface.
//!
//! Subcommands: `hilbert`, `slope`, `tables`, `walls`, `poincare`,
//! `verify`. Output is markdown by default or JSON with `--format json`;
//! the environment variable `QSC_FORMAT` takes precedence over the flag.
//! Rationals are serialized as `num/den` strings in JSON, never as floats.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 internal invariant violation.

pub mod render;
pub mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qsc_core::sheafcalc::{self, HilbertPoly, KClass};
use qsc_core::topology;
use qsc_core::Error;

#[derive(Parser, Debug)]
#[command(name = "qsc", version, about = "Exact sheaf/moduli calculator for P1 x P1")]
pub struct Cli {
    /// Output format; the QSC_FORMAT environment variable overrides this.
    #[arg(long, global = true, value_enum, default_value_t = Format::Markdown)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Markdown,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hilbert polynomial of a K-class or of a curve's structure sheaf.
    Hilbert(HilbertArgs),
    /// Slope t/(r+s) of a linear Hilbert polynomial.
    Slope {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// The semistability case tables (1, 2 or 3).
    Tables {
        #[arg(long)]
        which: u8,
    },
    /// Walls for alpha-semistable pairs with the given Hilbert polynomial.
    Walls {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Poincare polynomial of a space expression.
    Poincare {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Verify every quantitative claim and report pass/fail per check.
    Verify {
        #[arg(long, required = true)]
        all: bool,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct HilbertGroup {
    /// K-class expression, e.g. "O(0,0) - 4 O(-1,-2) + O(-2,-2) + 2 O(-1,-3)".
    #[arg(long, allow_hyphen_values = true)]
    pub kclass: Option<String>,
    /// Curve bidegree "s,r" for the structure sheaf polynomial.
    #[arg(long, allow_hyphen_values = true)]
    pub bidegree: Option<String>,
}

#[derive(Args, Debug)]
pub struct HilbertArgs {
    #[command(flatten)]
    pub source: HilbertGroup,
    /// Twist the result by "i,j".
    #[arg(long, allow_hyphen_values = true)]
    pub twist: Option<String>,
    /// Also report the slope.
    #[arg(long)]
    pub slope: bool,
}

/// Entry point returning the process exit code.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    let format = match resolve_format(cli.format) {
        Ok(f) => f,
        Err(msg) => {
            eprintln!("{msg}");
            return 2;
        }
    };
    match run(&cli.command, format) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{}", render::error_json(&err));
            exit_code_for(&err)
        }
    }
}

/// `QSC_FORMAT` overrides the `--format` flag when set.
fn resolve_format(flag: Format) -> Result<Format, String> {
    match std::env::var("QSC_FORMAT") {
        Ok(value) => match value.to_ascii_lowercase().as_str() {
            "markdown" => Ok(Format::Markdown),
            "json" => Ok(Format::Json),
            other => Err(format!(
                "QSC_FORMAT must be `markdown` or `json`, got `{other}`"
            )),
        },
        Err(_) => Ok(flag),
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvariantViolation(_) | Error::IllFormedMorphism(_) | Error::DegenerateWall(_) => 3,
        _ => 2,
    }
}

fn parse_pair(src: &str, what: &str) -> Result<(i64, i64), Error> {
    let mut parts = src.splitn(2, ',');
    let a = parts.next().map(str::trim).and_then(|p| p.parse().ok());
    let b = parts.next().map(str::trim).and_then(|p| p.parse().ok());
    match (a, b) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::RejectedInput(format!(
            "{what} must be two integers `a,b`, got `{src}`"
        ))),
    }
}

/// Execute one command; the Ok value is the exit code (verify may return 1).
pub fn run(command: &Command, format: Format) -> Result<i32, Error> {
    match command {
        Command::Hilbert(args) => {
            let mut poly = match (&args.source.kclass, &args.source.bidegree) {
                (Some(kclass), None) => sheafcalc::chi(&KClass::parse(kclass)?),
                (None, Some(bidegree)) => {
                    sheafcalc::structure_sheaf_poly(parse_pair(bidegree, "--bidegree")?)?
                }
                _ => unreachable!("clap enforces exactly one source"),
            };
            if let Some(twist) = &args.twist {
                poly = sheafcalc::twist(&poly, parse_pair(twist, "--twist")?);
            }
            let slope = if args.slope {
                Some(sheafcalc::slope(&poly)?)
            } else {
                None
            };
            print_output(format, render::hilbert_markdown(&poly, slope.as_ref()), || {
                render::hilbert_json(&poly, slope.as_ref())
            });
            Ok(0)
        }
        Command::Slope { poly } => {
            let p = HilbertPoly::parse(poly)?;
            let s = sheafcalc::slope(&p)?;
            print_output(format, render::slope_markdown(&s), || {
                render::slope_json(&s)
            });
            Ok(0)
        }
        Command::Tables { which } => {
            let rows = render::table_rows(*which)?;
            print_output(format, render::table_markdown(*which, &rows)?, || {
                render::table_json(*which, &rows)
            });
            Ok(0)
        }
        Command::Walls { poly } => {
            let p = HilbertPoly::parse(poly)?;
            let walls = qsc_core::pairs::find_walls(&p)?;
            print_output(format, render::walls_markdown(&walls), || {
                render::walls_json(&walls)
            });
            Ok(0)
        }
        Command::Poincare { expr } => {
            let ast = topology::parse_space_expr(expr)?;
            let value = topology::evaluate_space(&ast)?;
            print_output(format, render::poincare_markdown(&value), || {
                render::poincare_json(&value)
            });
            Ok(0)
        }
        Command::Verify { all: _ } => {
            let report = verify::run_all();
            let pass = report.all_pass();
            print_output(format, render::report_markdown(&report), || {
                render::report_json(&report)
            });
            Ok(if pass { 0 } else { 1 })
        }
    }
}

fn print_output(
    format: Format,
    markdown: String,
    json: impl FnOnce() -> serde_json::Value,
) {
    match format {
        Format::Markdown => println!("{markdown}"),
        Format::Json => println!("{}", json()),
    }
}
