//! Command-line front end for `agm-pi-core`.

pub mod config;
pub mod render;

use std::io::{self, Write};

use agm_pi_core::{agm, borwein, convergence, equivalence, integral_oracle};
use agm_pi_core::{Error, PrecisionContext};

pub use config::{Algorithm, CliConfig, Command, Format};

/// Success.
pub const EXIT_OK: u8 = 0;
/// A check failed or the computation hit an error.
pub const EXIT_FAILURE: u8 = 1;
/// Invalid arguments.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Compute(Error),
    Io(io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Usage(m) => f.write_str(m),
            RunError::Compute(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Compute(e)
    }
}

impl From<io::Error> for RunError {
    fn from(e: io::Error) -> Self {
        RunError::Io(e)
    }
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Usage(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}

fn context(cfg: &CliConfig) -> Result<PrecisionContext, RunError> {
    let digits =
        usize::try_from(cfg.digits).map_err(|_| RunError::Usage("--digits too large".into()))?;
    let guard =
        usize::try_from(cfg.guard).map_err(|_| RunError::Usage("--guard too large".into()))?;
    PrecisionContext::with_guard(digits, guard).map_err(|e| RunError::Usage(e.to_string()))
}

/// Iterations needed by `algorithm` for `digits`: the Brent-Salamin count,
/// halved (rounding up) for the quartic iteration.
pub fn default_iterations(digits: usize, algorithm: Algorithm) -> u32 {
    let n = convergence::required_iterations(digits);
    match algorithm {
        Algorithm::Bs | Algorithm::Bb2 => n,
        Algorithm::Bb4 => n.div_ceil(2),
    }
}

/// Digits of pi truncated to the context's requested digits.
pub fn compute(
    ctx: PrecisionContext,
    algorithm: Algorithm,
    iterations: u32,
) -> Result<String, Error> {
    let value = match algorithm {
        Algorithm::Bs => agm::brent_salamin_pi(ctx, iterations)?,
        Algorithm::Bb2 => borwein::quadratic_pi(ctx, iterations)?,
        Algorithm::Bb4 => borwein::quartic_pi(ctx, iterations)?,
    };
    value.to_decimal_string(ctx.requested_digits())
}

/// Executes a parsed configuration, writing results to `out`. Returns the
/// process exit code.
pub fn run(cfg: &CliConfig, out: &mut dyn Write) -> Result<u8, RunError> {
    let ctx = context(cfg)?;
    let digits = ctx.requested_digits();
    match cfg.command {
        Command::Compute => {
            let iterations = cfg
                .iterations
                .unwrap_or_else(|| default_iterations(digits, cfg.algorithm));
            let text = compute(ctx, cfg.algorithm, iterations)?;
            render::compute(out, cfg, iterations, &text)?;
            Ok(EXIT_OK)
        }
        Command::Table => {
            if cfg.algorithm != Algorithm::Bs {
                return Err(RunError::Usage(
                    "the convergence table is only defined for --algorithm bs".into(),
                ));
            }
            let n = cfg
                .iterations
                .unwrap_or_else(|| default_iterations(digits, Algorithm::Bs));
            if n == 0 {
                return Err(RunError::Usage("table needs --iterations >= 1".into()));
            }
            let report = convergence::build_report(n, ctx)?;
            render::table(out, cfg, &report)?;
            Ok(EXIT_OK)
        }
        Command::Verify => {
            let n = cfg
                .iterations
                .unwrap_or_else(|| default_iterations(digits, Algorithm::Bb4));
            let report = equivalence::check_all(n, ctx)?;
            render::verify(out, cfg, &report)?;
            Ok(if report.pass { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Oracle => {
            let checks = integral_oracle::run_all(&integral_oracle::QuadratureSettings::default())?;
            render::oracle(out, cfg, &checks)?;
            Ok(if checks.iter().all(|c| c.pass) {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
    }
}
