use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use flatcor::cancellation::Sign;

#[derive(Parser, Debug, Clone)]
#[command(name = "flatcor", version, about = "Batch verifier for finite flat correspondences")]
pub struct Cli {
    /// Workspace document defining the schemes and correspondences.
    #[arg(long, short = 'w', global = true)]
    pub workspace: Option<PathBuf>,
    /// Coefficient field (QQ or Fp:<p>); must agree with the workspace.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Reduction steps allowed per Groebner basis computation.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub budget: u64,
    /// Window for filtration searches.
    #[arg(long, global = true, default_value_t = 8)]
    pub window: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    /// Record wall-clock time in reports (makes output nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Re-validate the certificates of a structured report.
    #[arg(long)]
    pub recheck: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// `second ∘ first`.
    Compose {
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// Disjoint union of two spans with the same source and target.
    Add {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// External tensor product.
    Tensor {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Certify the left leg finite locally free.
    Certify {
        #[arg(long)]
        corr: String,
    },
    /// Rank of the certified left leg.
    Degree {
        #[arg(long)]
        corr: String,
    },
    /// Flatness bound of `Z(1 - t^n f)`, or of `Z(1 - t^n (f t^a + f2 t^b))` with `--f2`.
    Bound {
        #[arg(long)]
        corr: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        f2: Option<String>,
    },
    /// Flatness verdict for one slice, by the bound or by direct certification.
    Slice {
        #[arg(long)]
        corr: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        f2: Option<String>,
        #[arg(long, default_value_t = 0)]
        a: u32,
        #[arg(long, default_value_t = 0)]
        b: u32,
    },
    /// The span `rho_mn^±(corr)` over `X × A^1`, certified.
    Rho {
        #[arg(long)]
        corr: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        sign: Sign,
    },
    /// The slice `rho_n^±(corr)` over `X`, certified.
    RhoSlice {
        #[arg(long)]
        corr: String,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        sign: Sign,
    },
    /// Smallest index with every `rho_mn^±` certified inside the window.
    Filtration {
        #[arg(long)]
        corr: String,
    },
    /// Naturality of `rho` under pushforward along gamma and pullback along beta.
    VerifyCompat {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        sign: Sign,
    },
    /// The five machine checks of the final cancellation identities.
    #[command(name = "verify-lemma-35")]
    VerifyLemma35 {
        #[arg(long)]
        n: u32,
    },
    /// Rational contraction over `(A^1 - 0)^dim`.
    Contract {
        #[arg(long)]
        corr: String,
    },
    /// Contract and check the endpoints: identity at u = 1, constant at u = 0.
    VerifyContraction {
        #[arg(long)]
        corr: String,
    },
    /// Run every request of the workspace, in order.
    Run,
    /// Print the workspace in canonical form.
    Print,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Compose { .. } => "compose",
            Command::Add { .. } => "add",
            Command::Tensor { .. } => "tensor",
            Command::Certify { .. } => "certify",
            Command::Degree { .. } => "degree",
            Command::Bound { .. } => "bound",
            Command::Slice { .. } => "slice",
            Command::Rho { .. } => "rho",
            Command::RhoSlice { .. } => "rho-slice",
            Command::Filtration { .. } => "filtration",
            Command::VerifyCompat { .. } => "verify-compat",
            Command::VerifyLemma35 { .. } => "verify-lemma-35",
            Command::Contract { .. } => "contract",
            Command::VerifyContraction { .. } => "verify-contraction",
            Command::Run => "run",
            Command::Print => "print",
        }
    }
}

/// A request line inside a workspace: one command, no global flags.
#[derive(Parser, Debug)]
#[command(name = "request", no_binary_name = true)]
struct RequestLine {
    #[command(subcommand)]
    command: Command,
}

pub fn parse_request(args: &[String]) -> Result<Command, String> {
    let line = RequestLine::try_parse_from(args).map_err(|e| e.render().to_string().lines().next().unwrap_or("").to_string())?;
    match line.command {
        Command::Run | Command::Print => Err(format!("`{}` cannot be used inside a workspace", line.command.name())),
        c => Ok(c),
    }
}

pub fn check_request(args: &[String]) -> Result<(), String> {
    parse_request(args).map(|_| ())
}
