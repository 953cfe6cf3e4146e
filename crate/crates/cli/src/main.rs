mod args;
mod io;

use std::path::Path;
use std::process::ExitCode;

use blindconv::ambiguity::{attack, shift_ambiguity, verify_pair, AmbiguousPair};
use blindconv::campaign::{reproduce_paper_with, run_campaign, CampaignConfig, PaperSeeds};
use blindconv::nullspace::{classify, kernel_basis, m2_element, n0_element, n2_generate, n2_lift, FamilyKind};
use blindconv::quotient::quotient_decompose;
use blindconv::{convolve, hankel_basis, lift_apply, DenseMatrix, LiftedConvOp, Signal, ToleranceProfile};
use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, Format};
use io::{emit, matrix_csv, read_json, to_csv, to_json, CliError, EXIT_CHECK};

/// Rendered output and the exit code it implies.
struct Output {
    text: String,
    passed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, passed: true }
    }
}

fn signal_csv(s: &Signal) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Row {
        index: usize,
        value: f64,
    }
    to_csv(s.as_slice().iter().enumerate().map(|(index, &value)| Row { index, value }))
}

fn render_signal(s: &Signal, format: Format) -> Result<Output, CliError> {
    Ok(Output::ok(match format {
        Format::Json => to_json(s),
        Format::Csv => signal_csv(s)?,
    }))
}

fn render_matrix(w: &DenseMatrix, format: Format) -> Result<Output, CliError> {
    Ok(Output::ok(match format {
        Format::Json => to_json(w),
        Format::Csv => matrix_csv((0..w.rows()).map(|r| w.row(r)))?,
    }))
}

fn json_only<T: Serialize>(value: &T, format: Format, command: &str) -> Result<Output, CliError> {
    match format {
        Format::Json => Ok(Output::ok(to_json(value))),
        Format::Csv => Err(CliError::usage(format!(
            "`{command}` has nested output; use --format json"
        ))),
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    let tol = ToleranceProfile::new(g.tol_abs, g.tol_rel)?;
    let fmt = g.format;
    let name = cli.command.name();
    let sig = |p: &Path| read_json::<Signal>(p);

    match &cli.command {
        Command::Convolve { x, y } => render_signal(&convolve(&sig(x)?, &sig(y)?), fmt),
        Command::Lift { w } => {
            let w: DenseMatrix = read_json(w)?;
            render_signal(&lift_apply(&LiftedConvOp::for_matrix(&w), &w)?, fmt)
        }
        Command::Basis { m, n, j } => match j {
            Some(j) => render_matrix(&LiftedConvOp::new(*m, *n)?.selector(*j)?, fmt),
            None => json_only(&hankel_basis(*m, *n)?, fmt, name),
        },
        Command::N0 { u, v } => render_matrix(&n0_element(&sig(u)?, &sig(v)?), fmt),
        Command::N2 { m, n, u1, u2, v1, v2 } => {
            #[derive(Serialize)]
            struct Generated<C> {
                matrix: DenseMatrix,
                certificate: C,
            }
            match (u1, u2, v1, v2) {
                (Some(u1), Some(u2), Some(v1), Some(v2)) => {
                    let w = n2_lift(&sig(u1)?, &sig(u2)?, &sig(v1)?, &sig(v2)?, &tol)?;
                    render_matrix(&w, fmt)
                }
                _ => {
                    let (m, n) = m.zip(*n).ok_or_else(|| CliError::usage("n2 needs --m and --n"))?;
                    let (matrix, certificate) = n2_generate(m, n, g.seed)?;
                    match fmt {
                        Format::Json => Ok(Output::ok(to_json(&Generated { matrix, certificate }))),
                        Format::Csv => render_matrix(&matrix, fmt),
                    }
                }
            }
        }
        Command::M2 { u, lambda } => render_matrix(&m2_element(&sig(u)?, *lambda)?, fmt),
        Command::Kernel { m, n } => json_only(&kernel_basis(*m, *n)?, fmt, name),
        Command::Decompose { input } => {
            let elements = quotient_decompose(&sig(input)?, &tol)?;
            Ok(Output::ok(match fmt {
                Format::Json => to_json(&elements),
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Row {
                        gamma: f64,
                        residual: f64,
                        w_star: String,
                    }
                    to_csv(elements.iter().map(|e| Row {
                        gamma: e.gamma,
                        residual: e.residual,
                        w_star: join(e.w_star.as_slice()),
                    }))?
                }
            }))
        }
        Command::Classify { input } => {
            let w: DenseMatrix = read_json(input)?;
            json_only(&classify(&w, &tol)?, fmt, name)
        }
        Command::Attack { x, y } => json_only(&attack(&sig(x)?, &sig(y)?, &tol)?, fmt, name),
        Command::Shift { x, y } => json_only(&shift_ambiguity(&sig(x)?, &sig(y)?)?, fmt, name),
        Command::Verify { pair } => {
            let pair: AmbiguousPair = read_json(pair)?;
            let report = verify_pair(&pair, &tol)?;
            let text = match fmt {
                Format::Json => to_json(&report),
                Format::Csv => to_csv([&report])?,
            };
            Ok(Output {
                text,
                passed: report.certifies_unidentifiability,
            })
        }
        Command::ReproducePaper { x1, x2, y1, y2 } => {
            let mut seeds = PaperSeeds::default();
            for (slot, path) in [
                (&mut seeds.x1, x1),
                (&mut seeds.x2, x2),
                (&mut seeds.y1, y1),
                (&mut seeds.y2, y2),
            ] {
                if let Some(p) = path {
                    *slot = sig(p)?;
                }
            }
            let report = reproduce_paper_with(&seeds);
            let text = match fmt {
                Format::Json => to_json(&report),
                Format::Csv => to_csv(&report.checks)?,
            };
            Ok(Output {
                text,
                passed: report.passed,
            })
        }
        Command::Trials {
            suite,
            trials,
            mmax,
            nmax,
            timing,
        } => {
            if *trials == 0 {
                return Err(CliError::usage("--n must be at least 1"));
            }
            let config = CampaignConfig {
                suite: *suite,
                trials: *trials,
                seed: g.seed,
                mmax: *mmax,
                nmax: *nmax,
                tol,
                timing: *timing,
            };
            let report = run_campaign(&config);
            let text = match fmt {
                Format::Json => to_json(&report),
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Row<'a> {
                        index: u64,
                        m: usize,
                        n: usize,
                        family: Option<FamilyKind>,
                        success: bool,
                        residual: Option<f64>,
                        collinearity: Option<f64>,
                        cardinality: Option<usize>,
                        wall_time_us: Option<f64>,
                        failure: Option<&'a str>,
                    }
                    to_csv(report.trials.iter().map(|t| Row {
                        index: t.index,
                        m: t.m,
                        n: t.n,
                        family: t.family,
                        success: t.success,
                        residual: t.residual,
                        collinearity: t.collinearity,
                        cardinality: t.cardinality,
                        wall_time_us: t.wall_time_us,
                        failure: t.failure.as_deref(),
                    }))?
                }
            };
            Ok(Output {
                text,
                passed: report.all_passed(),
            })
        }
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version go to stdout with exit 0
            let code = if e.use_stderr() { io::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = cli.global.out.clone();
    match run(cli).and_then(|o| emit(out.as_deref(), &o.text).map(|()| o.passed)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK),
        Err(e) => {
            e.print();
            ExitCode::from(e.exit)
        }
    }
}
