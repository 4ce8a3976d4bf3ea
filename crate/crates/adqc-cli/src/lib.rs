// Copyright 2026 the adqc developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Command-line surface over the adqc library: classify couplings,
//! compile circuits to measurement patterns, simulate patterns,
//! synthesize POVMs and run the self-test suites.
//!
//! Stdout carries results (JSON documents), stderr carries diagnostics.
//! Exit codes are documented in [`commands`].

use clap::{Parser, Subcommand};

pub mod commands;
pub mod docs;
pub mod selftest;

use commands::Failure;

#[derive(Debug, Parser)]
#[command(name = "adqc", version, about = "Ancilla-driven quantum computation toolkit")]
pub struct Cli {
    /// Worker threads for grid searches (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a two-qubit coupling from a 4x4 matrix document.
    Classify {
        /// Path to a matrix document {"dim": 4, "entries": [[re, im], ...]}.
        path: String,
        /// Class-boundary tolerance on the chamber angles.
        #[arg(long, default_value_t = adqc_core::classifier::CLASS_TOL)]
        tol: f64,
        /// Per-axis resolution of the witness parameter grid.
        #[arg(long, default_value_t = adqc_core::classifier::DEFAULT_GRID)]
        grid: usize,
    },
    /// Compile a circuit document into an ancilla measurement pattern.
    Compile {
        /// Path to a circuit document.
        path: String,
        /// Write the pattern here and print only the measurement count.
        #[arg(long)]
        out: Option<String>,
    },
    /// Execute a pattern document on an input state.
    Simulate {
        /// Path to a pattern document.
        pattern: String,
        /// Product-state shorthand over {0,1,+,-} or a state document path.
        #[arg(long)]
        input: String,
        /// sample | enumerate | branch:BITS
        #[arg(long, default_value = "sample")]
        mode: String,
        /// Sampling seed; falls back to $ADQC_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Sampled runs in sample mode (seeds seed, seed+1, ...).
        #[arg(long, default_value_t = 1)]
        trials: usize,
    },
    /// Realize a POVM on one register qubit through Neumark dilation.
    Povm {
        /// Path to a POVM document {"elements": [matrix, ...]}.
        spec: String,
        /// Input register state (shorthand or document path).
        #[arg(long)]
        state: String,
        /// Register qubit the POVM acts on.
        #[arg(long)]
        qubit: usize,
    },
    /// Run the acceptance-criteria suites.
    Selftest {
        /// quick | full
        #[arg(long, default_value = "full")]
        level: String,
    },
}

/// Captured outcome of one command invocation.
#[derive(Debug, Clone)]
pub struct Execution {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses and runs an argument vector in-process.
pub fn execute<S: AsRef<str>>(argv: &[S]) -> Execution {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(cli) => cli,
        Err(err) => {
            // Help/version requests are successes; everything else is a
            // parse error (exit 1).
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let rendered = err.render().to_string();
            return if code == 0 {
                Execution {
                    stdout: rendered,
                    stderr: String::new(),
                    code,
                }
            } else {
                Execution {
                    stdout: String::new(),
                    stderr: rendered,
                    code,
                }
            };
        }
    };

    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }

    let result: Result<(String, i32), Failure> = match &cli.command {
        Command::Classify { path, tol, grid } => commands::cmd_classify(path, *tol, *grid),
        Command::Compile { path, out } => commands::cmd_compile(path, out.as_deref()),
        Command::Simulate {
            pattern,
            input,
            mode,
            seed,
            trials,
        } => commands::cmd_simulate(pattern, input, mode, *seed, *trials),
        Command::Povm { spec, state, qubit } => commands::cmd_povm(spec, state, *qubit),
        Command::Selftest { level } => commands::cmd_selftest(level),
    };

    match result {
        Ok((stdout, code)) => Execution {
            stdout,
            stderr: String::new(),
            code,
        },
        Err(failure) => Execution {
            stdout: String::new(),
            stderr: format!("error: {}\n", failure.message),
            code: failure.code,
        },
    }
}
