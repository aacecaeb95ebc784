//! Command-line front end: parse operator expressions over the named
//! generators, normalise, compare, and run the verification suite.
//!
//! Exit codes: 0 success/equal/pass, 1 unequal/fail, 2 usage or parse
//! error, 3 resource ceiling.

use clap::{Parser, Subcommand, ValueEnum};
use o2sym::algebra::AlgebraElement;
use o2sym::expr::{self, EvalError};
use o2sym::numeric;
use o2sym::tower;
use std::process::ExitCode;

mod render;
mod suite;

#[derive(Parser)]
#[command(
    name = "o2sym",
    version,
    about = "Exact operator calculus for the Cuntz algebra O_2 and its crossed products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatrixFormat {
    Dense,
    Sparse,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    Down,
    Up,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression and print its canonical normal form
    Norm { expr: String },
    /// Compare two expressions for exact equality
    Eq { left: String, right: String },
    /// Apply the flip automorphism and print the normal form
    Sigma { expr: String },
    /// Print the sigma-fixed part of an expression
    Fix { expr: String },
    /// Write the element as f + g*W and print both components
    Pair { expr: String },
    /// Print the exact matrix of an expression on the depth-d step space
    Matrix {
        expr: String,
        #[arg(long)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Dense)]
        format: MatrixFormat,
    },
    /// Walk the tower of self-similar embeddings and verify each level
    Tower {
        #[arg(long)]
        steps: u32,
        #[arg(long, value_enum, default_value_t = Direction::Down)]
        direction: Direction,
    },
    /// Brute-force the diagonal commutant over all 0/1 vectors at a depth
    Commutant {
        #[arg(long)]
        depth: u32,
    },
    /// Run the sampled Z-crossed-product checks on the five-point grid
    #[command(name = "zcross-suite")]
    ZcrossSuite,
    /// Run the full verification suite
    Suite {
        /// Largest depth for the commutant brute force
        #[arg(long, default_value_t = 2)]
        depth: u32,
    },
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<tower::TowerError> for CliError {
    fn from(e: tower::TowerError) -> Self {
        match e {
            tower::TowerError::DepthCeiling { .. } | tower::TowerError::FlipUnavailable { .. } => {
                CliError {
                    code: EXIT_RESOURCE,
                    message: e.to_string(),
                }
            }
            other => CliError {
                code: EXIT_FAIL,
                message: other.to_string(),
            },
        }
    }
}

fn eval_arg(text: &str) -> Result<AlgebraElement, CliError> {
    let tree = expr::parse(text).map_err(|e| CliError::usage(e.to_string()))?;
    expr::eval(&tree).map_err(|e| match e {
        EvalError::DepthCeiling { .. } => CliError {
            code: EXIT_RESOURCE,
            message: e.to_string(),
        },
        other => CliError::usage(other.to_string()),
    })
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Norm { expr } => {
            println!("{}", eval_arg(&expr)?.to_lines());
            Ok(0)
        }
        Command::Eq { left, right } => {
            let equal = eval_arg(&left)? == eval_arg(&right)?;
            println!("{}", if equal { "EQUAL" } else { "DIFFER" });
            Ok(if equal { 0 } else { EXIT_FAIL })
        }
        Command::Sigma { expr } => {
            println!("{}", eval_arg(&expr)?.sigma().to_lines());
            Ok(0)
        }
        Command::Fix { expr } => {
            println!("{}", eval_arg(&expr)?.fixed_part().to_lines());
            Ok(0)
        }
        Command::Pair { expr } => {
            let (f, g) = eval_arg(&expr)?.to_pair();
            println!("f:");
            println!("{}", f.to_lines());
            println!("g:");
            println!("{}", g.to_lines());
            Ok(0)
        }
        Command::Matrix {
            expr,
            depth,
            format,
        } => {
            let element = eval_arg(&expr)?;
            let op =
                numeric::matrix_of(&element, depth).map_err(|e| CliError::usage(e.to_string()))?;
            match format {
                MatrixFormat::Dense => print!("{}", render::dense_matrix(&op)),
                MatrixFormat::Sparse => print!("{}", render::sparse_matrix(&op)),
            }
            Ok(0)
        }
        Command::Tower { steps, direction } => {
            let down = direction == Direction::Down;
            let (text, code) = render::tower_walk(steps, down)?;
            print!("{text}");
            Ok(code)
        }
        Command::Commutant { depth } => {
            if !(1..=3).contains(&depth) {
                return Err(CliError::usage(
                    "commutant brute force supports depth 1..=3 (2^(2^d) candidates)",
                ));
            }
            let survivors =
                numeric::commutant_survivors(depth).map_err(|e| CliError::usage(e.to_string()))?;
            println!(
                "depth {depth}: {} candidate vectors, {} commute with every V+(I,J) of depth <= {depth}",
                1u64 << (1u32 << depth),
                survivors.len()
            );
            println!("survivors:");
            for chi in &survivors {
                let bits: String = chi.iter().map(|&b| if b { '1' } else { '0' }).collect();
                println!("{bits}");
            }
            let only_constants = survivors.len() == 2
                && survivors.iter().any(|v| v.iter().all(|&b| b))
                && survivors.iter().any(|v| v.iter().all(|&b| !b));
            Ok(if only_constants { 0 } else { EXIT_FAIL })
        }
        Command::ZcrossSuite => {
            let (text, ok) = render::zcross_report();
            print!("{text}");
            Ok(if ok { 0 } else { EXIT_FAIL })
        }
        Command::Suite { depth } => {
            if !(1..=3).contains(&depth) {
                return Err(CliError::usage(
                    "suite --depth supports 1..=3 for the commutant brute force",
                ));
            }
            let ok = suite::run(depth);
            Ok(if ok { 0 } else { EXIT_FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
