use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gl11::monodromy::ModuleSpec;
use gl11::report::{random_spec, spectrum, verify, Caps, Fault, Suite};
use serde::Serialize;

/// Exact gl(1|1) spin-chain computations.
#[derive(Parser)]
#[command(name = "gl11", version)]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Divisors, eigenvalues and (generalized) eigenspace dimensions per level.
    Spectrum {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Run verification suites; exit 0 iff all pass.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 3)]
        max_k: usize,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 3)]
        max_m: usize,
        #[arg(long, default_value_t = 4)]
        degree_cap: u32,
        #[arg(long, default_value_t = 3)]
        tau_order: usize,
        /// Include wall-clock timings (makes the output nondeterministic).
        #[arg(long)]
        timing: bool,
        /// Negative control: run with a deliberately broken monodromy.
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
    /// Print a deterministic pseudo-random cyclic spec file.
    RandomSpec {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Largest λ₁ of a factor.
        #[arg(long, default_value_t = 1)]
        weight_budget: i64,
        /// Force γ to split into linear factors.
        #[arg(long)]
        split: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    FlipT21,
}

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn emit<T: Serialize>(dest: &Option<PathBuf>, v: &T) -> Result<(), String> {
    let text = serde_json::to_string_pretty(v).map_err(|e| e.to_string())? + "\n";
    match dest {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INPUT)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Spectrum { spec, level } => {
            let text = match std::fs::read_to_string(&spec) {
                Ok(t) => t,
                Err(e) => return input_error(format!("{}: {e}", spec.display())),
            };
            let s = match ModuleSpec::from_toml_str(&text) {
                Ok(s) => s,
                Err(e) => return input_error(e),
            };
            let r = match spectrum(&s, level) {
                Ok(r) => r,
                Err(e) => return input_error(e),
            };
            if let Err(e) = emit(&cli.json, &r) {
                return input_error(e);
            }
            if r.consistent {
                ExitCode::SUCCESS
            } else {
                eprintln!("spectrum is not internally consistent");
                ExitCode::from(EXIT_FAIL)
            }
        }
        Cmd::Verify { suite, max_k, max_n, max_m, degree_cap, tau_order, timing, inject_fault } => {
            let suites = match Suite::parse(&suite) {
                Ok(s) => s,
                Err(e) => return input_error(e),
            };
            let caps = Caps { max_k, max_n, max_m, degree_cap, tau_order };
            let fault = match inject_fault {
                Some(FaultArg::FlipT21) => Fault::FlipT21,
                None => Fault::None,
            };
            let r = match verify(&suites, &caps, fault, timing) {
                Ok(r) => r,
                Err(e) => return input_error(e),
            };
            if let Err(e) = emit(&cli.json, &r) {
                return input_error(e);
            }
            for s in &r.suites {
                let status = if s.pass { "PASS" } else { "FAIL" };
                eprintln!("{status} {} ({} checks)", s.suite.name(), s.items.len());
                if let Some(f) = s.first_failure() {
                    eprintln!("  first failure: {} [{}]", f.name, f.witness.as_deref().unwrap_or(""));
                }
            }
            if r.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Cmd::RandomSpec { seed, k, weight_budget, split } => match random_spec(seed, k, weight_budget, split) {
            Ok(s) => {
                let text = s.to_toml_string();
                match &cli.json {
                    Some(p) => {
                        if let Err(e) = std::fs::write(p, text) {
                            return input_error(format!("{}: {e}", p.display()));
                        }
                    }
                    None => print!("{text}"),
                }
                ExitCode::SUCCESS
            }
            Err(e) => input_error(e),
        },
    }
}
