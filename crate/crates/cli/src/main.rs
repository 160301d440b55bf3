//! `seshadri` — exact multiple Seshadri constants of (1, d)-polarized
//! abelian surfaces at finite subgroup orbits, assuming Picard number one.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or validation
//! error. All computation is exact; see the library crate for the
//! mathematics.

mod output;
mod problem;

use clap::{Args, Parser, Subcommand, ValueEnum};
use problem::{parse_inline_vector, parse_integer_arg, parse_spec_file, Mode, Problem};
use seshadri_core::oracle::{verify_pipeline, Check, CheckOutcome, VerificationReport};
use seshadri_core::pell::fundamental_solution;
use seshadri_core::seshadri::{
    bauer_simple, general_points_lower_bound, half_period_pair, multi_at_subgroup,
    torsion_constant, SeshadriResult,
};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "seshadri", version, about = "Exact multiple Seshadri constants on abelian surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a multiple Seshadri constant from a JSON spec file or inline flags
    Seshadri(SeshadriArgs),
    /// Fundamental solution of the Pell equation l^2 - D k^2 = 1
    Pell {
        /// Non-square discriminant D >= 2
        d: String,
    },
    /// Run the randomized self-verification suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SeshadriArgs {
    /// JSON problem description (alternative to the inline flags)
    #[arg(
        value_name = "SPEC_FILE",
        conflicts_with_all = ["d", "gen", "torsion", "half_periods", "points"]
    )]
    spec_file: Option<PathBuf>,

    /// Polarization degree d >= 1
    #[arg(long)]
    d: Option<String>,

    /// Subgroup generator as four comma-separated rationals (repeatable)
    #[arg(long = "gen", value_name = "a,b,c,e")]
    gen: Vec<String>,

    /// Full m-torsion subgroup
    #[arg(long, value_name = "m", conflicts_with_all = ["gen", "half_periods", "points"])]
    torsion: Option<String>,

    /// Pair of half-periods, each as four comma-separated rationals
    #[arg(
        long = "half-periods",
        value_name = "POINT",
        num_args = 2,
        conflicts_with_all = ["gen", "torsion", "points"]
    )]
    half_periods: Option<Vec<String>>,

    /// Lower bound at r very general points
    #[arg(long, value_name = "r", conflicts_with_all = ["gen", "torsion", "half_periods"])]
    points: Option<String>,

    /// Cross-check the result with the brute-force oracle suite
    #[arg(long)]
    verify: bool,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: u32,
    #[arg(long = "d-max", default_value_t = 12)]
    d_max: u64,
    #[arg(long = "exp-max", default_value_t = 6)]
    exp_max: u64,
    /// Force a failing check (for exit-code testing)
    #[arg(long, hide = true)]
    inject_failure: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Seshadri(args) => run_seshadri(args),
        Command::Pell { d } => run_pell(&d),
        Command::Verify(args) => Ok(run_verify(args)),
    }
}

fn run_seshadri(args: SeshadriArgs) -> Result<i32, String> {
    let problem = build_problem(&args)?;
    let result = compute(&problem)?;

    match args.output {
        OutputFormat::Json => {
            print!("{}", output::to_json_string(&output::result_json(&problem, &result)));
        }
        OutputFormat::Text => print!("{}", output::render_text(&problem, &result)),
    }

    if args.verify {
        let report = verify_pipeline(&problem.equivalent_presentation());
        return Ok(report_verdict(&report));
    }
    Ok(0)
}

fn build_problem(args: &SeshadriArgs) -> Result<Problem, String> {
    if let Some(path) = &args.spec_file {
        return parse_spec_file(path);
    }
    let Some(d) = &args.d else {
        return Err("provide a spec file or --d (see --help)".into());
    };
    let d = parse_integer_arg(d, "--d")?;
    let surface = seshadri_core::PolarizedSurface::new(d).map_err(|e| e.to_string())?;

    let mode = if let Some(m) = &args.torsion {
        Mode::Torsion(parse_integer_arg(m, "--torsion")?)
    } else if let Some(points) = &args.half_periods {
        let e1 = parse_inline_vector(&points[0]).map_err(|e| format!("--half-periods first point: {e}"))?;
        let e2 = parse_inline_vector(&points[1]).map_err(|e| format!("--half-periods second point: {e}"))?;
        Mode::HalfPeriods(e1, e2)
    } else if let Some(r) = &args.points {
        Mode::GeneralPoints(parse_integer_arg(r, "--points")?)
    } else if !args.gen.is_empty() {
        let mut gens = Vec::with_capacity(args.gen.len());
        for (i, g) in args.gen.iter().enumerate() {
            gens.push(parse_inline_vector(g).map_err(|e| format!("--gen #{}: {e}", i + 1))?);
        }
        Mode::Subgroup(gens)
    } else {
        Mode::Simple
    };
    Ok(Problem { surface, mode })
}

fn compute(problem: &Problem) -> Result<SeshadriResult, String> {
    let d = problem.surface.d();
    let result = match &problem.mode {
        Mode::Simple => bauer_simple(d),
        Mode::Subgroup(gens) => multi_at_subgroup(&seshadri_core::SubgroupPresentation::new(
            problem.surface.clone(),
            gens.clone(),
        )),
        Mode::Torsion(m) => torsion_constant(d, m),
        Mode::HalfPeriods(e1, e2) => half_period_pair(&problem.surface, e1, e2),
        Mode::GeneralPoints(r) => general_points_lower_bound(d, r),
    };
    result.map_err(|e| e.to_string())
}

fn run_pell(d: &str) -> Result<i32, String> {
    let d = parse_integer_arg(d, "D")?;
    let sol = fundamental_solution(&d).map_err(|e| e.to_string())?;
    print!("{}", output::pell_json_string(&sol));
    Ok(0)
}

fn run_verify(args: VerifyArgs) -> i32 {
    let mut report =
        seshadri_core::randomized_suite(args.seed, args.trials, args.d_max, args.exp_max);
    if args.inject_failure {
        report.checks.push(Check {
            name: "injected".into(),
            outcome: CheckOutcome::Failed,
            detail: "failure injected via --inject-failure".into(),
        });
    }
    println!(
        "checks: {} total, {} passed, {} skipped, {} failed",
        report.checks.len(),
        report.passed_count(),
        report.skipped_count(),
        report.failed_count()
    );
    report_verdict(&report)
}

fn report_verdict(report: &VerificationReport) -> i32 {
    if report.all_passed() {
        eprintln!("verification passed ({} checks)", report.checks.len());
        0
    } else {
        for failure in report.failures() {
            eprintln!("verification FAILED: {}: {}", failure.name, failure.detail);
        }
        1
    }
}
