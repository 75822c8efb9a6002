use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rotpoly::cli::{
    self, parse_point, CliError, CommandOutput, EvalOptions, ResponseFormat, SystemDocument,
};
use rotpoly::{CoefficientKind, ComplexPoint, GridScale};

#[derive(Parser, Debug)]
#[command(
    name = "rotpoly",
    version,
    about = "Real-arithmetic complex polynomial evaluation and frequency response"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a polynomial document at one point.
    Eval {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: ComplexPoint,
        /// Also emit dp/ds.
        #[arg(long)]
        derivative: bool,
        /// Also emit 1/p (fails with status 2 at a root).
        #[arg(long)]
        reciprocal: bool,
    },
    /// Sweep a transfer function, time-constant or state-space document over jω.
    Freqresp {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
        wmin: f64,
        #[arg(long, default_value_t = 100.0, allow_hyphen_values = true)]
        wmax: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Scale::Log)]
        scale: Scale,
        #[arg(long, value_enum, default_value_t = Format::Nyquist)]
        format: Format,
    },
    /// Measured vs claimed per-frequency operation counts.
    Opcount {
        #[arg(long, default_value_t = 0)]
        nmin: usize,
        #[arg(long, default_value_t = 16)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = Kind::Complex)]
        kind: Kind,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Evaluate a poly2d document (and Q/P when Q is present) at (s1, s2).
    Eval2d {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: ComplexPoint,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point2: ComplexPoint,
        /// Relative residual below which P counts as rank one.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Raise a square matrix to a positive integer power.
    Matpow {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        rho: i64,
    },
    /// Convert a state_space document to a transfer_function document.
    Ss2tf {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Convert a time_constants document to a transfer_function document.
    Tc2tf {
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Scale {
    Log,
    Linear,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Nyquist,
    Bode,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Real,
    Complex,
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", p.display())))?;
        }
        _ => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Parse(format!("cannot read standard input: {e}")))?;
        }
    }
    Ok(text)
}

fn read_doc(path: &Option<PathBuf>) -> Result<SystemDocument, CliError> {
    SystemDocument::parse(&read_input(path)?)
}

fn run(command: Command) -> Result<CommandOutput, CliError> {
    match command {
        Command::Eval {
            input,
            point,
            derivative,
            reciprocal,
        } => cli::cmd_eval(
            &read_doc(&input)?,
            point,
            EvalOptions {
                derivative,
                reciprocal,
            },
        ),
        Command::Freqresp {
            input,
            wmin,
            wmax,
            points,
            scale,
            format,
        } => {
            let scale = match scale {
                Scale::Log => GridScale::Log,
                Scale::Linear => GridScale::Linear,
            };
            let grid = cli::grid_from_flags(wmin, wmax, points, scale)?;
            let format = match format {
                Format::Nyquist => ResponseFormat::Nyquist,
                Format::Bode => ResponseFormat::Bode,
            };
            cli::cmd_freqresp(&read_doc(&input)?, &grid, format)
        }
        Command::Opcount {
            nmin,
            nmax,
            kind,
            seed,
        } => {
            let kind = match kind {
                Kind::Real => CoefficientKind::Real,
                Kind::Complex => CoefficientKind::Complex,
            };
            cli::cmd_opcount(nmin, nmax, kind, seed)
        }
        Command::Eval2d {
            input,
            point,
            point2,
            tol,
        } => cli::cmd_eval2d(&read_doc(&input)?, point, point2, tol),
        Command::Matpow { input, rho } => {
            let a = cli::parse_matrix(&read_input(&input)?)?;
            cli::cmd_matpow(&a, rho)
        }
        Command::Ss2tf { input } => cli::cmd_ss2tf(&read_doc(&input)?),
        Command::Tc2tf { input } => cli::cmd_tc2tf(&read_doc(&input)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            for d in &out.diagnostics {
                eprintln!("{d}");
            }
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(out.stdout.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
