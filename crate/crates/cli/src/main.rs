use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vnpointer_cli::pipeline::{self, SweepParam};
use vnpointer_cli::scenario::Scenario;
use vnpointer_cli::verify::{run_verify, VerifyOptions};
use vnpointer_cli::{CliError, Result};

/// Exact pointer states for von Neumann projector measurements: run
/// preselected and pre/postselected scenarios, compare them, sweep
/// parameters, and verify the closed forms against a brute-force oracle.
#[derive(Parser)]
#[command(name = "vnpointer", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and write its artifacts.
    Run {
        /// Scenario JSON file.
        scenario: PathBuf,
        /// Output directory for CSV/JSON artifacts.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Validate the scenario, write its canonical JSON to this path
        /// ("-" for stdout), and exit without running the pipelines.
        #[arg(long, value_name = "PATH")]
        dump_config: Option<PathBuf>,
    },
    /// Run the PS and PPS pipelines side by side and tabulate the deltas.
    Compare {
        scenario: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Re-run a scenario over a list of parameter values.
    Sweep {
        scenario: PathBuf,
        /// Which scalar field to vary.
        #[arg(long, value_enum)]
        param: SweepParam,
        /// Comma-separated values, e.g. --values 0.1,1.0,2.0,10.0
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the oracle identity-check battery.
    Verify {
        /// Randomized cases for the closed-form vs oracle battery.
        #[arg(long, default_value_t = VerifyOptions::default().trials)]
        trials: usize,
        /// Seed for the deterministic case generator.
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
        /// Pointer grid resolution for the batteries (power of two).
        #[arg(long, default_value_t = VerifyOptions::default().grid_n)]
        grid_n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { scenario, out, dump_config } => {
            let scenario = Scenario::load(&scenario)?;
            if let Some(path) = dump_config {
                let text = scenario.dump_string();
                if path.as_os_str() == "-" {
                    print!("{text}");
                } else {
                    std::fs::write(&path, text)?;
                    println!("wrote {}", path.display());
                }
                return Ok(());
            }
            let (report, written) = pipeline::run_scenario(&scenario, &out)?;
            print_run_summary(&report);
            for path in written {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Compare { scenario, out } => {
            let scenario = Scenario::load(&scenario)?;
            let (compare, written) = pipeline::compare_scenario(&scenario, &out)?;
            println!("PS  cross mass {:.6e}  momentum shift {:+.6e}", compare.ps_cross_l1, compare.ps_momentum_shift);
            println!("PPS cross mass {:.6e}  momentum shift {:+.6e}", compare.pps_cross_l1, compare.pps_momentum_shift);
            println!(
                "branch weights: PS [{:.6}, {:.6}] -> PPS [{:.6}, {:.6}]",
                compare.ps_branch_weights[0],
                compare.ps_branch_weights[1],
                compare.pps_branch_weights[0],
                compare.pps_branch_weights[1]
            );
            for path in written {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Sweep { scenario, param, values, out } => {
            let scenario = Scenario::load(&scenario)?;
            let (summary, written) = pipeline::sweep_scenario(&scenario, param, &values, &out)?;
            println!("swept {} over {} values", summary.parameter, summary.entries.len());
            for path in written.iter().filter(|p| p.parent() == Some(out.as_path())) {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Verify { trials, seed, grid_n } => {
            if trials == 0 {
                return Err(CliError::Validation("verify requires at least one trial".into()));
            }
            let report = run_verify(&VerifyOptions { trials, seed, grid_n })?;
            for check in &report.checks {
                println!(
                    "{} {}: {}",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.name,
                    check.detail
                );
            }
            if report.all_pass() {
                println!("verify: all checks passed");
                Ok(())
            } else {
                Err(CliError::ToleranceBreach(
                    "one or more verification checks failed".into(),
                ))
            }
        }
    }
}

fn print_run_summary(report: &pipeline::RunReport) {
    println!(
        "PS: <A> = {:.6}, cross mass {:.3e}, momentum shift {:+.3e}",
        report.ps.expectation, report.ps.cross_l1, report.ps.momentum_shift
    );
    if let Some(dev) = report.ps.oracle_deviation {
        println!("oracle deviation {dev:.3e} (closed form confirmed)");
    }
    if let Some(pps) = &report.pps {
        println!(
            "PPS: A_w = {:.6}{:+.6}i, chi = {:.6} rad, N = {:.6}, P(post) = {:.6}",
            pps.weak_value[0], pps.weak_value[1], pps.phase_chi, pps.normalization,
            pps.postselection_probability
        );
        println!(
            "PPS: cross mass {:.3e}, momentum shift {:+.3e}",
            pps.cross_l1, pps.momentum_shift
        );
    }
}
