use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Print digits of pi
    Compute,
    /// Print the per-iteration convergence table
    Table,
    /// Cross-check the three iterations against each other
    Verify,
    /// Run the double-precision integral identity checks
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    /// Brent-Salamin
    Bs,
    /// Quadratic Borwein
    Bb2,
    /// Quartic Borwein
    Bb4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Arbitrary-precision pi from the arithmetic-geometric mean.
#[derive(Clone, Debug, PartialEq, Eq, Parser)]
#[command(name = "agm-pi", version)]
pub struct CliConfig {
    #[arg(value_enum)]
    pub command: Command,

    /// Decimal digits after the point
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub digits: u64,

    #[arg(long, value_enum, default_value_t = Algorithm::Bs)]
    pub algorithm: Algorithm,

    /// Extra decimal digits carried internally
    #[arg(long, default_value_t = agm_pi_core::DEFAULT_GUARD_DIGITS as u64)]
    pub guard: u64,

    /// Iteration count; planned from the error bound when omitted
    #[arg(long)]
    pub iterations: Option<u32>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

impl CliConfig {
    pub fn parse_args<I, T>(argv: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        CliConfig::try_parse_from(
            std::iter::once("agm-pi".into()).chain(argv.into_iter().map(Into::into)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = CliConfig::parse_args(["compute", "--digits", "100"]).unwrap();
        assert_eq!(c.command, Command::Compute);
        assert_eq!(c.digits, 100);
        assert_eq!(c.algorithm, Algorithm::Bs);
        assert_eq!(c.guard, 50);
        assert_eq!(c.iterations, None);
        assert_eq!(c.format, Format::Text);
    }

    #[test]
    fn json_table() {
        let c = CliConfig::parse_args(["table", "--digits", "100", "--format", "json"]).unwrap();
        assert_eq!(c.command, Command::Table);
        assert_eq!(c.format, Format::Json);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CliConfig::parse_args(["compute", "--digits", "0"]).is_err());
        assert!(CliConfig::parse_args(["compute", "--precision", "5"]).is_err());
        assert!(CliConfig::parse_args(["launch"]).is_err());
        assert!(CliConfig::parse_args(["compute", "--algorithm", "bb3"]).is_err());
        assert!(CliConfig::parse_args(["compute", "--guard", "-1"]).is_err());
    }
}
