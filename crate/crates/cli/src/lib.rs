//! Command-line front end for `orbiweyl-core`: argument parsing, input
//! files, and deterministic table or JSON reports.
//!
//! Exit codes: 0 when the computation succeeds and any verdict is PASS,
//! 1 for a FAIL verdict, 2 for errors.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use orbiweyl_core::Rational;

pub mod commands;
pub mod files;
pub mod rule;
mod table;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Rule(#[from] rule::RuleError),
    #[error(transparent)]
    Novikov(#[from] orbiweyl_core::novikov::NovikovError),
    #[error(transparent)]
    Parse(#[from] orbiweyl_core::novikov::ParseError),
    #[error(transparent)]
    Algebra(#[from] orbiweyl_core::quantum_algebra::AlgebraError),
    #[error(transparent)]
    Potential(#[from] orbiweyl_core::potential::PotentialError),
    #[error(transparent)]
    Flow(#[from] orbiweyl_core::flow_complex::FlowError),
    #[error(transparent)]
    Ledger(#[from] orbiweyl_core::capped_orbits::LedgerError),
    #[error(transparent)]
    Group(#[from] orbiweyl_core::quasimorphism::GroupError),
}

#[derive(Debug, Parser)]
#[command(name = "orbiweyl", version, about = "Exact checks for bulk-deformed orbifold Floer computations on symmetric products")]
pub struct Cli {
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Novikov working truncation, as a rational `p/q`.
    #[arg(long, global = true, value_parser = parse_rational_arg)]
    pub trunc: Option<Rational>,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Chen-Ruan sectors of Sym^k of an n-fold (Betti data for the sphere).
    Sectors {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// Idempotents of the symmetric-invariant quantum cohomology of (P^1)^k.
    Idempotents {
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_rational_arg)]
        omega: Rational,
    },
    /// Critical point and Hessian of the circle-link disc potential on S^2.
    Potential(PotentialArgs),
    /// Hessian-valuation certificate over a range of k.
    Weyl {
        /// Disc area rule in k, e.g. "1/ceil(sqrt(k))".
        #[arg(long)]
        bk_rule: String,
        #[arg(long, default_value_t = 1)]
        k_min: usize,
        #[arg(long)]
        k_max: usize,
    },
    /// Synthetic flow categories.
    #[command(subcommand)]
    Flow(FlowCommand),
    /// Spec_k from a table of iterate spectra.
    Spec {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Quasimorphism bounds on a finite perfect group.
    Qm {
        /// `a5`, `trivial` or `z<n>`.
        #[arg(long, default_value = "a5")]
        group: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long = "B", value_parser = parse_rational_arg)]
    pub b: Rational,
    /// Annulus area; defaults to (1 - 2B)/(k - 1), i.e. total area 1.
    #[arg(long = "A", value_parser = parse_rational_arg)]
    pub a: Option<Rational>,
    #[arg(long, default_value = "1", value_parser = parse_rational_arg)]
    pub gamma: Rational,
    /// Newton target for the gradient valuation; defaults to ten disc areas past the leading order.
    #[arg(long, value_parser = parse_rational_arg)]
    pub target_val: Option<Rational>,
}

#[derive(Debug, Subcommand)]
pub enum FlowCommand {
    /// Generate seeded categories and check the d^2 = 0 identities.
    Verify {
        #[arg(long, default_value_t = 6)]
        size: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Number of consecutive seeds to check.
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long)]
        gamma_swap: bool,
        /// Write the first generated category to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Spectral invariant of a class in a category file.
    Spectral {
        #[arg(long)]
        input: PathBuf,
        /// Class over the generator ids, e.g. "p3 + 2*p5 - 1/2*T^(1)*p1".
        #[arg(long)]
        class: String,
        /// Bulk parameter as a Novikov series.
        #[arg(long, default_value = "0")]
        alpha: String,
    },
}

fn parse_rational_arg(text: &str) -> Result<Rational, String> {
    orbiweyl_core::novikov::parse_rational(text.trim()).map_err(|e| e.to_string())
}

/// A finished computation: text and JSON renderings plus the verdict, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub verdict: Option<bool>,
    pub text: String,
    pub json: serde_json::Value,
}

impl Report {
    pub fn exit_code(&self) -> u8 {
        match self.verdict {
            Some(false) => 1,
            _ => 0,
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let trunc = cli.trunc.as_ref();
    match &cli.command {
        Command::Sectors { k, dim } => commands::sectors(*k, *dim),
        Command::Idempotents { k, omega } => commands::idempotents(*k, omega, trunc),
        Command::Potential(args) => commands::potential(args, trunc),
        Command::Weyl { bk_rule, k_min, k_max } => commands::weyl(bk_rule, *k_min, *k_max),
        Command::Flow(FlowCommand::Verify { size, depth, count, gamma_swap, emit }) => {
            commands::flow_verify(cli.seed, *count, *size, *depth, *gamma_swap, emit.as_deref())
        }
        Command::Flow(FlowCommand::Spectral { input, class, alpha }) => commands::flow_spectral(input, class, alpha),
        Command::Spec { table, k } => commands::spec(table, *k),
        Command::Qm { group, samples } => commands::qm(group, *samples, cli.seed),
    }
}
