use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ftfilter::paulisim::{FaultScope, InputNoise};

#[derive(Debug, Parser)]
#[command(
    name = "ftfilter",
    version,
    about = "Fault-tolerant verification networks for CSS codeword ancillas"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bring the check matrix to standard form and test the coset condition.
    Analyze {
        #[command(flatten)]
        code: CodeArgs,
        /// Test the checks exactly as given instead of their standard form.
        #[arg(long)]
        naive: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write the preparation and verification circuits and the schedule.
    Emit {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long = "tm", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        t_m: u32,
        /// Also write the naive network built from the checks as given.
        #[arg(long)]
        naive: bool,
        /// Directory for the circuit and schedule files.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Enumerate every placement of up to `kmax` faults.
    Scan {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        network: NetworkArgs,
        #[arg(long, default_value_t = 1)]
        kmax: usize,
        /// Also sweep every X error on the incoming ancilla.
        #[arg(long)]
        inject: bool,
        #[arg(long, value_enum, default_value_t = Scope::Verifier)]
        faults: Scope,
        /// Which violation count decides the exit code.
        #[arg(long, value_enum, default_value_t = Rule::Strict)]
        rule: Rule,
        /// Violations listed per level and rule.
        #[arg(long, default_value_t = 20)]
        max_events: usize,
        #[command(flatten)]
        exec: ExecArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample noisy runs and fit the power law of each residual weight.
    Mc {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        network: NetworkArgs,
        /// Comma-separated failure probabilities, each in (0, 1].
        #[arg(long, value_delimiter = ',', default_values_t = vec![3e-3, 1e-2, 3e-2], value_parser = parse_epsilon)]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Scope::Verifier)]
        faults: Scope,
        /// Error on the incoming ancilla: `perfect`, `prop:F` (probability
        /// F·ε) or `fixed:P`.
        #[arg(long, default_value = "fixed:1", value_parser = parse_input)]
        input: InputNoise,
        #[arg(long, value_enum, default_value_t = ChannelArg::Depolarizing)]
        channel: ChannelArg,
        /// Location classes that never fail.
        #[arg(long, value_enum, value_delimiter = ',')]
        disable: Vec<NoiseClass>,
        #[command(flatten)]
        exec: ExecArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct CodeArgs {
    /// Built-in code name (rep5, steane7).
    #[arg(
        long,
        value_name = "NAME",
        required_unless_present = "code_file",
        conflicts_with = "code_file"
    )]
    pub code: Option<String>,
    /// Code file with `name`, `t`, `G:` and `H:` sections.
    #[arg(long, value_name = "PATH")]
    pub code_file: Option<PathBuf>,
    /// Override the correctable weight `t` of the code.
    #[arg(long)]
    pub t: Option<usize>,
    /// Thin out dependent generator rows instead of rejecting the file.
    #[arg(long)]
    pub allow_redundant: bool,
}

#[derive(Debug, Args)]
pub struct NetworkArgs {
    #[arg(long = "tm", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub t_m: u32,
    /// Use the naive network built from the checks as given.
    #[arg(long)]
    pub naive: bool,
}

#[derive(Debug, Args)]
pub struct ExecArgs {
    /// Run on the calling thread only.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Records,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    /// Faults anywhere, ancilla included.
    All,
    /// Faults on verifier qubits and readouts only.
    Verifier,
}

impl From<Scope> for FaultScope {
    fn from(s: Scope) -> Self {
        match s {
            Scope::All => FaultScope::All,
            Scope::Verifier => FaultScope::VerifierOnly,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    /// Effective weight above circuit faults plus a nonzero injection.
    Total,
    /// Effective weight above circuit faults alone.
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChannelArg {
    Depolarizing,
    BitFlip,
    PhaseFlip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NoiseClass {
    Prep,
    Gate,
    Idle,
    Meas,
}

fn parse_epsilon(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("ε = {v} outside (0, 1]"))
    }
}

fn parse_input(s: &str) -> Result<InputNoise, String> {
    let number = |v: &str| v.parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    match s.split_once(':') {
        None if s == "perfect" => Ok(InputNoise::Perfect),
        Some(("prop", f)) => Ok(InputNoise::Proportional(number(f)?)),
        Some(("fixed", p)) => Ok(InputNoise::Fixed(number(p)?)),
        _ => Err(format!("expected perfect, prop:F or fixed:P, got {s:?}")),
    }
}
