//! Command-line driver: verification suites, value tables, the enumeration
//! oracle and Monte Carlo estimates, rendered as json, csv or text.

mod render;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use absum::exact::{binomial, BigNat};
use absum::identities::{self, IdentityId, IdentityReport, SumsAt};
use absum::oracle;
use absum::stochastic::{self, ConsistencyCheck, Quantity, RngSpec};

pub use render::render;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "ABSUM_THREADS";

pub const DEFAULT_SEED: u64 = 0x0b1a_5eed;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("invalid configuration: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] absum::Error),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) if !e.use_stderr() => 0,
            CliError::Clap(_) | CliError::Usage(_) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "absum",
    version,
    about = "Verify absolute-value binomial sum identities"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Check every selected identity for each k in range.
    Verify(RunArgs),
    /// Print S0, S1, S2, S3 for each k in range.
    Table(RunArgs),
    /// Compare the enumeration oracle with the closed forms.
    Oracle(RunArgs),
    /// Monte Carlo estimates of E|p| and E|p²−q²| against exact targets.
    Mc(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    k_min: Option<u64>,
    #[arg(long)]
    k_max: Option<u64>,
    /// Shorthand for --k-min K --k-max K.
    #[arg(long, conflicts_with_all = ["k_min", "k_max"])]
    k: Option<u64>,
    /// Comma-separated identity ids (verify only).
    #[arg(long, value_parser = parse_identities)]
    identity: Option<IdentityList>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    #[arg(long, default_value_t = oracle::DEFAULT_ORACLE_MAX)]
    oracle_max: u64,
    #[arg(long)]
    fail_fast: bool,
}

#[derive(Debug, Clone)]
struct IdentityList(Vec<IdentityId>);

fn parse_identities(s: &str) -> Result<IdentityList, String> {
    identities::parse_identity_list(s)
        .map(IdentityList)
        .map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Table,
    Oracle,
    Mc,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Table => "table",
            Command::Oracle => "oracle",
            Command::Mc => "mc",
        }
    }

    fn default_k_range(self) -> (u64, u64) {
        match self {
            Command::Verify => (0, 50),
            Command::Table => (0, 10),
            Command::Oracle => (0, oracle::DEFAULT_ORACLE_MAX),
            Command::Mc => (1, 20),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitPolicy {
    FailFast,
    Collect,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub k_min: u64,
    pub k_max: u64,
    pub identities: Vec<IdentityId>,
    pub format: Format,
    pub seed: u64,
    pub samples: u64,
    pub oracle_max: u64,
    pub exit_policy: ExitPolicy,
    pub z_max: f64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let (k_min, k_max) = command.default_k_range();
        RunConfig {
            command,
            k_min,
            k_max,
            identities: IdentityId::ALL.to_vec(),
            format: Format::Text,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            oracle_max: oracle::DEFAULT_ORACLE_MAX,
            exit_policy: ExitPolicy::Collect,
            z_max: stochastic::DEFAULT_Z_MAX,
        }
    }

    /// Parses a full argument vector (including the program name) and
    /// validates the result.
    pub fn from_args<I, T>(args: I) -> Result<Self, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args)?;
        let (command, a) = match cli.command {
            CommandArgs::Verify(a) => (Command::Verify, a),
            CommandArgs::Table(a) => (Command::Table, a),
            CommandArgs::Oracle(a) => (Command::Oracle, a),
            CommandArgs::Mc(a) => (Command::Mc, a),
        };
        let mut config = RunConfig::new(command);
        if let Some(k) = a.k {
            config.k_min = k;
            config.k_max = k;
        }
        if let Some(k) = a.k_min {
            config.k_min = k;
        }
        if let Some(k) = a.k_max {
            config.k_max = k;
        }
        if let Some(IdentityList(ids)) = a.identity {
            config.identities = ids;
        }
        config.format = a.format;
        config.seed = a.seed;
        config.samples = a.samples;
        config.oracle_max = a.oracle_max;
        if a.fail_fast {
            config.exit_policy = ExitPolicy::FailFast;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        if self.k_min > self.k_max {
            return usage(format!(
                "--k-min {} exceeds --k-max {}",
                self.k_min, self.k_max
            ));
        }
        // Keeps 2k, k² and the 16^k exponent comfortably inside i64.
        if self.k_max > 1_000_000 {
            return usage(format!("--k-max {} is larger than 1000000", self.k_max));
        }
        if self.command == Command::Mc && self.samples < 2 {
            return usage(format!(
                "--samples must be at least 2 (got {})",
                self.samples
            ));
        }
        if self.command == Command::Oracle {
            let limit = self.oracle_max.min(oracle::HARD_ORACLE_MAX);
            if self.k_max > limit {
                return usage(format!(
                    "oracle k {} exceeds the enumeration limit {limit} (raise --oracle-max)",
                    self.k_max
                ));
            }
        }
        if self.identities.is_empty() {
            return usage("no identities selected".into());
        }
        Ok(())
    }
}

/// One row of the value table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub k: u64,
    pub s0: BigNat,
    pub s1: BigNat,
    pub s2: BigNat,
    pub s3: BigNat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRow {
    pub k: u64,
    pub oracle_s0: BigNat,
    pub s0_closed: BigNat,
    pub oracle_s1: BigNat,
    pub s1_closed: BigNat,
    pub histogram_matches: bool,
}

impl OracleRow {
    pub fn pass(&self) -> bool {
        self.histogram_matches
            && self.oracle_s0 == self.s0_closed
            && self.oracle_s1 == self.s1_closed
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Records {
    Verify(Vec<IdentityReport>),
    Table(Vec<TableRow>),
    Oracle(Vec<OracleRow>),
    Mc(Vec<ConsistencyCheck>),
}

impl Records {
    /// Exact checks must all hold; Monte Carlo warnings do not fail a run.
    pub fn pass(&self) -> bool {
        match self {
            Records::Verify(r) => identities::all_pass(r),
            Records::Table(_) | Records::Mc(_) => true,
            Records::Oracle(r) => r.iter().all(OracleRow::pass),
        }
    }
}

/// Evaluates `f` for every k in range in ascending order. Under fail-fast the
/// range is walked sequentially and stops after the first failing k;
/// otherwise it runs in parallel and keeps every result.
fn over_k<T, F, P>(config: &RunConfig, f: F, ok: P) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(u64) -> Result<T, CliError> + Sync + Send,
    P: Fn(&T) -> bool,
{
    let range = config.k_min..=config.k_max;
    match config.exit_policy {
        ExitPolicy::Collect => range.into_par_iter().map(f).collect(),
        ExitPolicy::FailFast => {
            let mut out = Vec::new();
            for k in range {
                let item = f(k)?;
                let good = ok(&item);
                out.push(item);
                if !good {
                    break;
                }
            }
            Ok(out)
        }
    }
}

fn table_row(k: u64) -> TableRow {
    let sums = SumsAt::new(k);
    TableRow {
        k,
        s0: sums.s0_closed(),
        s1: sums.s1_closed(),
        s2: sums.s2_closed(),
        s3: sums
            .s3_closed()
            .to_biguint()
            .expect("S3 closed form is non-negative"),
    }
}

fn oracle_row(k: u64, limit: u64) -> Result<OracleRow, CliError> {
    let hist = oracle::enumerate_histogram_with_limit(k, limit)?;
    let ki = k as i64;
    let histogram_matches = hist.counts.keys().all(|p| p.abs() <= ki)
        && (-ki - 2..=ki + 2).all(|p| hist.count(p) == binomial(2 * ki, ki + p));
    Ok(OracleRow {
        k,
        oracle_s0: oracle::s0_from_histogram(&hist),
        s0_closed: identities::s0_closed(k),
        oracle_s1: oracle::s1_from_histogram(&hist),
        s1_closed: identities::s1_closed(k),
        histogram_matches,
    })
}

fn mc_rows(config: &RunConfig, k: u64) -> Result<Vec<ConsistencyCheck>, CliError> {
    [Quantity::MeanAbs, Quantity::MeanAbsDiffSq]
        .into_iter()
        .enumerate()
        .map(|(i, quantity)| {
            // Distinct stream per (k, quantity).
            let spec = RngSpec::new(config.seed, 2 * k + i as u64);
            Ok(stochastic::consistency_check(
                quantity,
                k,
                config.samples,
                spec,
                config.z_max,
            )?)
        })
        .collect()
}

/// Computes the records for a validated configuration.
pub fn execute(config: &RunConfig) -> Result<Records, CliError> {
    config.validate()?;
    Ok(match config.command {
        Command::Verify => {
            let per_k = over_k(
                config,
                |k| Ok(identities::verify_selected(k, &config.identities)),
                |reports: &Vec<IdentityReport>| identities::all_pass(reports),
            )?;
            let mut reports: Vec<IdentityReport> = per_k.into_iter().flatten().collect();
            if config.exit_policy == ExitPolicy::FailFast {
                if let Some(i) = reports.iter().position(|r| !r.equal) {
                    reports.truncate(i + 1);
                }
            }
            Records::Verify(reports)
        }
        Command::Table => Records::Table(over_k(config, |k| Ok(table_row(k)), |_| true)?),
        Command::Oracle => Records::Oracle(over_k(
            config,
            |k| oracle_row(k, config.oracle_max),
            OracleRow::pass,
        )?),
        Command::Mc => Records::Mc(
            over_k(config, |k| mc_rows(config, k), |_| true)?
                .into_iter()
                .flatten()
                .collect(),
        ),
    })
}

/// Runs the configuration, writes the report and returns the exit code
/// (0 when every exact check passed, 1 otherwise).
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let records = execute(config)?;
    out.write_all(render(config, &records).as_bytes())?;
    Ok(if records.pass() { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use absum::BigInt;

    #[test]
    fn failing_report_fails_the_run() {
        let bad = IdentityReport::new(IdentityId::Lemma1, 3, BigInt::from(1), BigInt::from(2));
        let good = IdentityReport::new(IdentityId::Lemma1, 4, BigInt::from(2), BigInt::from(2));
        assert!(!Records::Verify(vec![good.clone(), bad]).pass());
        assert!(Records::Verify(vec![good]).pass());
    }

    #[test]
    fn fail_fast_stops_at_first_failure() {
        let mut config = RunConfig::new(Command::Table);
        config.k_min = 0;
        config.k_max = 9;
        config.exit_policy = ExitPolicy::FailFast;
        let seen = over_k(&config, Ok, |k| *k != 3).unwrap();
        assert_eq!(seen, vec![0, 1, 2, 3]);
        config.exit_policy = ExitPolicy::Collect;
        let seen = over_k(&config, Ok, |k| *k != 3).unwrap();
        assert_eq!(seen, (0..=9).collect::<Vec<_>>());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(
            CliError::Core(absum::Error::TooFewSamples(1)).exit_code(),
            1
        );
    }
}
