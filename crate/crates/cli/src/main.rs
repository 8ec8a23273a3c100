//! `ftseries`: solve, evaluate and verify series solutions from the shell.
//!
//! Exit codes: 0 success, 1 invalid input, 2 solver failure, 3 evaluation
//! grid outside the declared box, 4 verification failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ftseries::archive;
use ftseries::builtin::{builtin_example, EXAMPLES};
use ftseries::diagnostics::{verify, Grid};
use ftseries::literal::parse_real;
use ftseries::{Error, ProblemSpec, SeriesSolution, ValidatedSpec};

#[derive(Parser)]
#[command(name = "ftseries", version, about = "Series solutions of Cauchy problems in Fourier-Taylor bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Source {
    /// Built-in problem name (see `ftseries examples`).
    #[arg(long, conflicts_with = "input")]
    example: Option<String>,
    /// Problem document (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Truncation order, overriding the problem's own.
    #[arg(long = "N", value_name = "N")]
    truncation: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem and write its solution archive.
    Solve {
        #[command(flatten)]
        source: Source,
        /// Archive path; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a solution on a grid.
    Eval {
        #[command(flatten)]
        source: Source,
        /// Solution archive; the problem is solved in memory if omitted.
        #[arg(long)]
        archive: Option<PathBuf>,
        /// `AXIS=MIN:MAX:COUNT` or `AXIS=VALUE`, AXIS being 1-based or `x1`.
        #[arg(long)]
        grid: Vec<String>,
        /// Comma-separated times.
        #[arg(long)]
        times: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run residual, tail, bound and closed-form checks.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Archive to check instead of a fresh solve.
        #[arg(long)]
        archive: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the built-in problems.
    Examples,
}

/// A failed command with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn fail(code: u8) -> impl FnOnce(anyhow::Error) -> Failure {
    move |error| Failure { code, error }
}

fn invalid<E: Into<anyhow::Error>>(e: E) -> Failure {
    let error = e.into();
    let code = match error.downcast_ref::<Error>() {
        Some(Error::GridDomain(_)) => 3,
        _ => 1,
    };
    Failure { code, error }
}

fn solver(e: Error) -> Failure {
    match e {
        Error::GridDomain(_) => fail(3)(e.into()),
        _ => fail(2)(anyhow!(e).context("solver failed")),
    }
}

type Outcome = Result<(), Failure>;

fn load_spec(source: &Source) -> Result<ValidatedSpec, Failure> {
    let spec: ProblemSpec = match (&source.example, &source.input) {
        (Some(name), None) => builtin_example(name).map_err(invalid)?,
        (None, Some(path)) => ftseries::document::load(path).map_err(invalid)?,
        _ => return Err(invalid(anyhow!("give exactly one of --example NAME or --input PATH"))),
    };
    let spec = match source.truncation {
        Some(n) => spec.with_truncation(n),
        None => spec,
    };
    spec.validate().map_err(|e| invalid(anyhow!(e).context("invalid problem")))
}

fn solve(spec: &ValidatedSpec) -> Result<SeriesSolution, Failure> {
    let sol = ftseries::solve(spec).map_err(solver)?;
    for w in &sol.warnings {
        eprintln!("warning: {w}");
    }
    Ok(sol)
}

fn emit(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(fail(1)),
        None => std::io::stdout().write_all(text.as_bytes()).context("cannot write output").map_err(fail(1)),
    }
}

fn cmd_solve(source: &Source, output: Option<&Path>) -> Outcome {
    let spec = load_spec(source)?;
    let sol = solve(&spec)?;
    let text = archive::Archive::from_solution(&sol).to_json() + "\n";
    emit(output, &text)
}

fn parse_grid(specs: &[String], sol: &SeriesSolution) -> Result<Vec<Vec<f64>>, Failure> {
    let bounds = &sol.provenance.eval_box;
    let mut axes: Vec<Vec<f64>> = bounds
        .iter()
        .map(|&(lo, hi)| (0..11).map(|i| lo + (hi - lo) * f64::from(i) / 10.0).collect())
        .collect();
    for s in specs {
        let (axis, range) = s.split_once('=').ok_or_else(|| invalid(anyhow!("grid `{s}`: expected AXIS=MIN:MAX:COUNT")))?;
        let axis: usize = axis
            .trim()
            .trim_start_matches('x')
            .parse()
            .map_err(|_| invalid(anyhow!("grid `{s}`: bad axis")))?;
        if axis == 0 || axis > axes.len() {
            return Err(invalid(anyhow!("grid `{s}`: axis {axis} out of range 1..={}", axes.len())));
        }
        let real = |v: &str| parse_real(v).ok_or_else(|| invalid(anyhow!("grid `{s}`: bad number `{v}`")));
        let parts: Vec<&str> = range.split(':').collect();
        axes[axis - 1] = match parts.as_slice() {
            [v] => vec![real(v)?],
            [lo, hi, count] => {
                let (lo, hi) = (real(lo)?, real(hi)?);
                let count: usize = count.trim().parse().map_err(|_| invalid(anyhow!("grid `{s}`: bad count")))?;
                if count < 2 {
                    return Err(invalid(anyhow!("grid `{s}`: a range needs at least 2 points")));
                }
                (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
            }
            _ => return Err(invalid(anyhow!("grid `{s}`: expected AXIS=MIN:MAX:COUNT or AXIS=VALUE"))),
        };
    }
    Ok(axes)
}

fn parse_times(times: Option<&str>, horizon: f64) -> Result<Vec<f64>, Failure> {
    match times {
        None => Ok(vec![0.0, horizon / 2.0, horizon]),
        Some(list) => list
            .split(',')
            .map(|v| parse_real(v).ok_or_else(|| invalid(anyhow!("bad time `{v}`"))))
            .collect(),
    }
}

fn load_solution(source: &Source, archive_path: Option<&Path>) -> Result<SeriesSolution, Failure> {
    match archive_path {
        Some(path) => archive::read(path).map_err(invalid),
        None => solve(&load_spec(source)?),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_eval(
    source: &Source,
    archive_path: Option<&Path>,
    grid: &[String],
    times: Option<&str>,
    format: Format,
    output: Option<&Path>,
) -> Outcome {
    let sol = load_solution(source, archive_path)?;
    let grid = Grid::new(parse_grid(grid, &sol)?, parse_times(times, sol.provenance.horizon)?);
    let points = grid.points();
    if let Some((x, t)) = points.iter().find(|(x, t)| !sol.contains(x, *t)) {
        return Err(fail(3)(anyhow!(
            "point x = {x:?}, t = {t} lies outside the declared box {:?} x [0, {}]",
            sol.provenance.eval_box,
            sol.provenance.horizon
        )));
    }
    let mut rows = Vec::with_capacity(points.len());
    for (x, t) in &points {
        rows.push(sol.eval_all(x, *t).map_err(solver)?);
    }
    let dim = sol.basis().dim();
    let text = match format {
        Format::Json => {
            let body: Vec<serde_json::Value> = points
                .iter()
                .zip(&rows)
                .map(|((x, t), v)| {
                    serde_json::json!({ "x": x, "t": t, "values": v.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>() })
                })
                .collect();
            serde_json::to_string_pretty(&serde_json::json!({ "unknowns": sol.unknowns, "points": body }))
                .expect("plain values serialize")
                + "\n"
        }
        Format::Csv | Format::Text => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header: Vec<String> = (1..=dim).map(|j| format!("x{j}")).collect();
            header.push("t".into());
            for u in &sol.unknowns {
                header.push(format!("{u}_re"));
                header.push(format!("{u}_im"));
            }
            w.write_record(&header).map_err(invalid)?;
            for ((x, t), values) in points.iter().zip(&rows) {
                let mut rec: Vec<String> = x.iter().map(f64::to_string).collect();
                rec.push(t.to_string());
                for c in values {
                    rec.push(c.re.to_string());
                    rec.push(c.im.to_string());
                }
                w.write_record(&rec).map_err(invalid)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| invalid(anyhow!(e.to_string())))?).expect("csv output is UTF-8")
        }
    };
    emit(output, &text)
}

fn cmd_verify(source: &Source, archive_path: Option<&Path>, format: Format, output: Option<&Path>) -> Outcome {
    let spec = load_spec(source)?;
    let sol = match archive_path {
        Some(path) => archive::read(path).map_err(invalid)?,
        None => solve(&spec)?,
    };
    let report = verify(&spec, &sol).map_err(|e| fail(4)(anyhow!(e).context("verification could not run")))?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize") + "\n",
        Format::Csv | Format::Text => report.to_text(),
    };
    emit(output, &text)?;
    if report.passed() {
        Ok(())
    } else {
        Err(fail(4)(anyhow!("verification failed")))
    }
}

fn cmd_examples() -> Outcome {
    let width = EXAMPLES.iter().map(|e| e.0.len()).max().unwrap_or(0);
    let text: String = EXAMPLES.iter().map(|(name, about)| format!("{name:<width$}  {about}\n")).collect();
    emit(None, &text)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("FT_SERIES_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| invalid(anyhow!("FT_SERIES_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(invalid)
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    match cli.command {
        Command::Solve { source, output } => cmd_solve(&source, output.as_deref()),
        Command::Eval { source, archive, grid, times, format, output } => {
            cmd_eval(&source, archive.as_deref(), &grid, times.as_deref(), format, output.as_deref())
        }
        Command::Verify { source, archive, format, output } => {
            cmd_verify(&source, archive.as_deref(), format, output.as_deref())
        }
        Command::Examples => cmd_examples(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
