use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use etafano::arith::parse_rational;
use etafano::catalog;
use etafano::eta::EtaOptions;
use etafano::{Convention, Error, FlowOptions, Rational, SignConvention, SpectralMode};
use etafano_cli::commands::{self, Inputs, Outcome};
use etafano_cli::report::{Format, Report};
use serde_json::json;

const EXIT_ERROR: u8 = 1;
const EXIT_INDETERMINATE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "etafano", version, about = "Exact eta invariants of circle bundles over Fano manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Builtin name (cp1xcp1, cp1x<N>, hyp:n=<n>,d=<d>) or a config file.
    #[arg(long, global = true, default_value = "cp1xcp1")]
    manifold: String,
    #[arg(long, global = true, default_value = "0", allow_hyphen_values = true, value_parser = rational)]
    r: Rational,
    #[arg(long, global = true, default_value = "1", value_parser = rational)]
    eps: Rational,
    /// Series truncation order; defaults to n + 2.
    #[arg(long, global = true)]
    order: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Nakano)]
    mode: ModeArg,
    #[arg(long, global = true, value_enum, default_value_t = ConventionArg::Real)]
    convention: ConventionArg,
    #[arg(long = "sf-sign", global = true, value_enum, default_value_t = SignArg::Paper)]
    sf_sign: SignArg,
    /// Constant multiplying the transgression integral.
    #[arg(long = "N", global = true, default_value = "1", allow_hyphen_values = true, value_parser = rational)]
    n_const: Rational,
    /// Factor applied to the spectral search windows.
    #[arg(long = "window-scale", global = true, default_value = "1", value_parser = rational)]
    window_scale: Rational,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Adds a display-only decimal rendering of every rational.
    #[arg(long, global = true)]
    decimal: Option<u32>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full three-term eta invariant.
    Eta,
    /// Adiabatic-limit term only.
    AdiabaticLimit,
    /// Transgression integral and its boundary form.
    Transgression,
    /// Spectral flow of the twisted Dirac family over delta in [0, eps].
    SpectralFlow,
    /// APS index of the cylinder end.
    ApsIndex,
    /// Dimension of the kernel at delta = eps.
    KernelDim,
    /// Exact identity checks on one manifold.
    CheckIdentities {
        /// Include the characteristic series coefficients.
        #[arg(long)]
        dump_series: bool,
    },
    /// Reproduce the zero crossing on a general-type hypersurface.
    Counterexample,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Nakano,
    Explicit,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    Real,
    #[value(name = "paper_i")]
    PaperI,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignArg {
    Paper,
    Standard,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

impl Cli {
    fn eta_options(&self) -> EtaOptions {
        EtaOptions {
            convention: match self.convention {
                ConventionArg::Real => Convention::Real,
                ConventionArg::PaperI => Convention::PaperI,
            },
            n_const: self.n_const.clone(),
            flow: FlowOptions {
                mode: match self.mode {
                    ModeArg::Nakano => SpectralMode::Nakano,
                    ModeArg::Explicit => SpectralMode::Explicit,
                },
                sign: match self.sf_sign {
                    SignArg::Paper => SignConvention::Paper,
                    SignArg::Standard => SignConvention::Standard,
                },
                window_scale: self.window_scale.clone(),
            },
            order: self.order,
        }
    }

    fn command_name(&self) -> &'static str {
        match self.command {
            Command::Eta => "eta",
            Command::AdiabaticLimit => "adiabatic-limit",
            Command::Transgression => "transgression",
            Command::SpectralFlow => "spectral-flow",
            Command::ApsIndex => "aps-index",
            Command::KernelDim => "kernel-dim",
            Command::CheckIdentities { .. } => "check-identities",
            Command::Counterexample => "counterexample",
        }
    }
}

/// Returns the exit code; errors map to 1.
fn run(cli: &Cli) -> Result<u8> {
    let (spec, model) = catalog::load(&cli.manifold)?;
    let opts = cli.eta_options();
    let inp = Inputs { spec: &spec, model: &model, r: cli.r.clone(), eps: cli.eps.clone(), opts: opts.clone() };
    let mut failed_checks = false;
    let outcome: Outcome = match &cli.command {
        Command::Eta => commands::eta(&inp)?,
        Command::AdiabaticLimit => commands::adiabatic_limit(&inp)?,
        Command::Transgression => commands::transgression(&inp)?,
        Command::SpectralFlow => commands::spectral(&inp)?,
        Command::ApsIndex => commands::aps(&inp)?,
        Command::KernelDim => commands::kernel(&inp)?,
        Command::CheckIdentities { dump_series } => {
            let (outcome, passed) = commands::check_identities(&inp, *dump_series)?;
            failed_checks = !passed;
            outcome
        }
        Command::Counterexample => commands::counterexample(&inp)?,
    };

    let provenance = json!({
        "schema_version": etafano_cli::report::SCHEMA_VERSION,
        "manifold": spec.summary(),
        "r": cli.r.to_string(),
        "eps": cli.eps.to_string(),
        "order": opts.order.unwrap_or_else(|| spec.default_order()),
        "convention": opts.convention,
        "N": opts.n_const.to_string(),
        "mode": opts.flow.mode,
        "sf_sign": opts.flow.sign,
        "window_scale": opts.flow.window_scale.to_string(),
        "windows": outcome.windows,
    });
    let report = Report::new(cli.command_name(), provenance, outcome.result).with_decimal(cli.decimal);
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let text = report.render(format)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }

    if failed_checks {
        eprintln!("error: identity checks failed");
        return Ok(EXIT_ERROR);
    }
    if outcome.indeterminate {
        eprintln!("warning: spectral result indeterminate; see the report");
        return Ok(EXIT_INDETERMINATE);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let indeterminate = matches!(e.downcast_ref::<Error>(), Some(Error::Indeterminate(_)));
            ExitCode::from(if indeterminate { EXIT_INDETERMINATE } else { EXIT_ERROR })
        }
    }
}
