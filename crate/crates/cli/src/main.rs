//! `laurent-groth`: series arithmetic, graded algebras, resolutions and
//! Grothendieck-group classes from JSON inputs.
//!
//! Exit codes: 0 on success, 1 when a check fails or a truncation runs out,
//! 2 on malformed or inconsistent input.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "laurent-groth", version, about = "Exact graded-algebra and Laurent-series computations")]
pub struct Cli {
    /// Truncation height: output bound for series, expansion bound for algebras.
    #[arg(long, global = true)]
    pub height: Option<u64>,
    /// Term order: `lex` or inline JSON such as '{"matrix":[[1,1],[0,1]]}'.
    #[arg(long, global = true)]
    pub order: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Height searched for a nonzero term before a series is declared zero.
    #[arg(long, global = true, default_value_t = 64)]
    pub probe: u64,
    /// Worker threads; computations currently run on one thread.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Product of two series.
    SeriesMul { a: String, b: String },
    /// Inverse of a series.
    SeriesInvert { input: String },
    /// Whether two series agree below a degree; exit 1 when they differ.
    SeriesEq {
        a: String,
        b: String,
        /// Degree `e`, comma separated: coefficients at support points below it are compared.
        #[arg(long, allow_hyphen_values = true)]
        up_to: String,
        /// Explicit height bound for the points examined.
        #[arg(long)]
        within: Option<u64>,
    },
    /// Graded dimension of an algebra.
    AlgebraGdim { input: String },
    /// Cartan matrix: rows simples, columns projectives.
    AlgebraCartan { input: String },
    /// Simple classes in terms of projectives, from the inverse Cartan matrix.
    AlgebraSimples { input: String },
    /// Minimal projective resolution of a simple module.
    Resolve {
        input: String,
        vertex: String,
        #[arg(long, default_value_t = 8)]
        length: usize,
    },
    /// Homology and Euler class of a complex.
    Euler { input: String },
    /// Matrix of the map on classes induced by a bimodule.
    Functor { input: String },
    /// Compares inverse Cartan and resolution routes on k[x]/(x^N), and
    /// prints the (1 − λ²)/(1 − q²) table.
    VerifyPaper {
        #[arg(long)]
        n: usize,
    },
}

fn init_logging() {
    let level = match std::env::var("LAURENT_GROTH_LOG").as_deref() {
        Ok("quiet") => log::LevelFilter::Off,
        Ok("info") => log::LevelFilter::Info,
        Ok("debug") => log::LevelFilter::Debug,
        _ => log::LevelFilter::Warn,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    if let Ok(v) = std::env::var("LAURENT_GROTH_LOG") {
        if !["quiet", "info", "debug"].contains(&v.as_str()) {
            log::warn!("ignoring LAURENT_GROTH_LOG={v:?}; expected quiet, info or debug");
        }
    }
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.output);
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
