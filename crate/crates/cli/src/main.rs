//! `gwv`: command-line front end for the GWV monogamy toolkit.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gwv_core::bounds::{feasible_k, BoundFamily, KInterval};
use gwv_core::harness::examples::{example_setup, run_example};
use gwv_core::harness::{
    check_orderings, emit_report, figure_scenario, generate_figure, run_fuzz, run_verify, Format, FuzzConfig, Grid,
    Preset, Scenario,
};
use gwv_core::{Error, Result};

#[derive(Parser)]
#[command(name = "gwv", version, about = "Monogamy and polygamy bounds for GWV states")]
struct Cli {
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (verify, fuzz) or directory (figure).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format: csv or table.
    #[arg(long, global = true)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the bounds of a scenario file.
    Verify { scenario: PathBuf },
    /// Check theorems and bound orderings on random GWV states.
    Fuzz(FuzzArgs),
    /// Print the feasible k interval(s) of a scenario or an example.
    FeasibleK {
        scenario: Option<PathBuf>,
        #[arg(long, conflicts_with = "scenario")]
        example: Option<u8>,
    },
    /// Write the dataset and gnuplot script of figure 1-4.
    Figure {
        number: u8,
        #[arg(long, requires_all = ["to", "step"])]
        from: Option<f64>,
        #[arg(long, requires_all = ["from", "step"])]
        to: Option<f64>,
        #[arg(long, requires_all = ["from", "to"])]
        step: Option<f64>,
        /// Print the figure's scenario JSON instead of evaluating it.
        #[arg(long)]
        scenario: bool,
    },
    /// Print the worked values of example 1-4.
    Example { number: u8 },
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 1000)]
    states: usize,
    /// Allowed subsystem counts.
    #[arg(long, value_delimiter = ',', default_values_t = [3, 4, 5])]
    n: Vec<usize>,
    /// Allowed local dimensions.
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3])]
    d: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    params_per_state: usize,
    /// Compare the analytic measure with the numerical convex roof.
    #[arg(long)]
    oracle: bool,
}

enum Outcome {
    Ok,
    Violation,
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Error::from(e).context(format!("writing {}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(cli: &Cli, path: &Path) -> Result<Outcome> {
    let scenario = Scenario::load(path)?;
    let reports = run_verify(&scenario)?;
    let format = cli.format.unwrap_or(scenario.output.format);
    let out = cli.out.as_deref().or(scenario.output.path.as_deref());
    write_or_print(out, &emit_report(&reports, format)?)?;
    let failed = reports.iter().filter(|r| r.preconditions_ok && !r.satisfied).count();
    let flagged = reports.iter().filter(|r| !r.preconditions_ok).count();
    eprintln!(
        "{} rows, {flagged} with failed preconditions, {failed} violations",
        reports.len()
    );
    Ok(if failed > 0 { Outcome::Violation } else { Outcome::Ok })
}

fn fuzz(cli: &Cli, args: &FuzzArgs) -> Result<Outcome> {
    let cfg = FuzzConfig {
        n_states: args.states,
        seed: cli.seed,
        n_choices: args.n.clone(),
        d_choices: args.d.clone(),
        params_per_state: args.params_per_state,
        oracle: args.oracle,
        ..FuzzConfig::default()
    };
    let summary = run_fuzz(&cfg)?;
    print!("{summary}");
    if let Some(path) = &cli.out {
        let json = summary.to_json()?;
        write_or_print(Some(path), &json)?;
    }
    Ok(if summary.passed() {
        Outcome::Ok
    } else {
        Outcome::Violation
    })
}

fn print_interval(label: &str, iv: &KInterval) {
    let mut line = format!(
        "{label}: [{}, {}]",
        gwv_core::harness::format_sig(iv.lo),
        gwv_core::harness::format_sig(iv.hi)
    );
    if iv.is_empty() {
        line.push_str(" (empty)");
    }
    if iv.degenerate {
        line.push_str(" (degenerate profile)");
    }
    println!("{line}");
}

fn feasible(scenario: Option<&Path>, example: Option<u8>) -> Result<Outcome> {
    match (scenario, example) {
        (Some(path), _) => {
            let s = Scenario::load(path)?;
            let profile = s.profile()?;
            let mut any = false;
            for (i, spec) in s.bound_specs.iter().enumerate() {
                if !matches!(
                    spec.family,
                    BoundFamily::Hamming | BoundFamily::JPower | BoundFamily::TSplit | BoundFamily::Lemma2Gamma
                ) {
                    continue;
                }
                let iv = feasible_k(&profile, spec.family, spec.mu_ref, spec.t.or(s.partition.t()))
                    .map_err(|e| e.context(format!("bound_specs[{i}]")))?;
                print_interval(&format!("bound_specs[{i}] {}", spec.family), &iv);
                any = true;
            }
            if !any {
                return Err(Error::Argument(
                    "scenario has no bound family with a k parameter".into(),
                ));
            }
        }
        (None, Some(n)) => {
            let preset = Preset::from_index(n)?;
            let report = run_example(preset)?;
            let (_, family, _) = example_setup(preset);
            print_interval(&format!("{} {family}", preset.name()), &report.feasible);
        }
        (None, None) => return Err(Error::Argument("give a scenario file or --example N".into())),
    }
    Ok(Outcome::Ok)
}

fn figure(cli: &Cli, number: u8, axis: Option<Grid>, print_scenario: bool) -> Result<Outcome> {
    if print_scenario {
        println!("{}", figure_scenario(number, axis)?.to_json()?);
        return Ok(Outcome::Ok);
    }
    let mut fig = generate_figure(number, axis)?;
    if let Some(format) = cli.format {
        fig.csv = emit_report(&fig.reports, format)?;
    }
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let (csv, gp) = fig.write(&dir)?;
    println!("wrote {} and {}", csv.display(), gp.display());
    let problems = check_orderings(&fig.reports);
    for p in &problems {
        eprintln!("ordering violated: {p}");
    }
    Ok(if problems.is_empty() {
        Outcome::Ok
    } else {
        Outcome::Violation
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Verify { scenario } => verify(cli, scenario),
        Command::Fuzz(args) => fuzz(cli, args),
        Command::FeasibleK { scenario, example } => feasible(scenario.as_deref(), *example),
        Command::Figure {
            number,
            from,
            to,
            step,
            scenario,
        } => {
            let axis = match (from, to, step) {
                (Some(a), Some(b), Some(s)) => Some(Grid::new(*a, *b, *s)?),
                _ => None,
            };
            figure(cli, *number, axis, *scenario)
        }
        Command::Example { number } => {
            print!("{}", run_example(Preset::from_index(*number)?)?);
            Ok(Outcome::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}
