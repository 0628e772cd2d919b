mod run;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "grpquiv",
    version,
    about = "Quivers of group relations and their Cuntz-Pimsner algebras"
)]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Quivers Q_{n,m}(Z_p).
    #[command(subcommand)]
    Finite(Finite),
    /// Torus quivers given by integer matrices F and G.
    #[command(subcommand)]
    Torus(Torus),
    /// Exact computations in O_{F,G}(T^d).
    #[command(subcommand)]
    Symbolic(Symbolic),
}

#[derive(Subcommand, Debug)]
pub enum Finite {
    /// Cycle decomposition of O_{n,m}(Z_p) into matrix algebras over C(T).
    Decompose(Nm),
    /// Isomorphism classes of all p^2 quivers Q_{n,m}(Z_p).
    Census {
        #[arg(long)]
        p: u64,
    },
    /// Decide whether Q_{q1}(Z_p) and Q_{q2}(Z_p) are isomorphic.
    Iso {
        #[arg(long)]
        p: u64,
        /// Coefficients `n,m` of the first quiver.
        #[arg(long)]
        q1: String,
        /// Coefficients `n,m` of the second quiver.
        #[arg(long)]
        q2: String,
    },
    /// Vertex and edge lists of Q_{n,m}(Z_p).
    Build(Nm),
}

#[derive(Args, Debug)]
pub struct Nm {
    #[arg(long)]
    pub p: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub n: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
}

#[derive(Args, Debug)]
pub struct Matrices {
    /// Matrix in the form `a,b;c,d`.
    #[arg(long = "F", allow_hyphen_values = true)]
    pub f: String,
    #[arg(long = "G", allow_hyphen_values = true)]
    pub g: String,
}

#[derive(Subcommand, Debug)]
pub enum Torus {
    /// Replace (F, G) by an equivalent pair with F positive diagonal.
    Reduce(Matrices),
    /// Sample the orthonormality and reconstruction defects of the basis {y^nu}.
    Onb {
        #[command(flatten)]
        mats: Matrices,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = grpquiv::torquiver::DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum Symbolic {
    /// Rewrite a sum of words in U_j, S, S* into normal form.
    Normalize {
        #[command(flatten)]
        mats: Matrices,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Run one of the relation suites.
    Verify {
        #[arg(long, value_enum)]
        check: Check,
        #[command(flatten)]
        mats: Matrices,
        /// Level, or power for power-quotient.
        #[arg(long)]
        k: Option<usize>,
        /// Exponents k_1,...,k_d for subalg-gens and twisted.
        #[arg(long)]
        kvec: Option<String>,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Presentation,
    PowerQuotient,
    SubalgGens,
    Twisted,
    MatrixUnits,
    Diagram,
    CrossedProduct,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
