//! Command-line front end.
//!
//! Exit codes: 0 success, 1 computation failed, 2 bad input, 3 no
//! convergence, 4 certificate violated.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::fracops::GridFunction;
use crate::green::{green_table, lambda_constant, ConeWindow, FracOrder};
use crate::lyapunov::{
    certify, eigen_exclusion, gamma_exact, gamma_paper, lyapunov_rhs_co, lyapunov_rhs_co_paper,
    sturm_liouville_spectrum, CertifyMode, Variant,
};
use crate::problem_file::ProblemFile;
use crate::reproduce::run_example;
use crate::solver::{cone_check, norm_bounds, residual_terms, solve_picard, ProblemSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;
pub const EXIT_VIOLATED: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "fracbvp",
    version,
    about = "Discrete fractional boundary value problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the Green's function G(t, s).
    Green(GreenArgs),
    /// Solve the nonlinear problem by Picard iteration.
    Solve(SolveArgs),
    /// Evaluate a Lyapunov-type inequality.
    Certify(CertifyArgs),
    /// Eigenvalue exclusion radius for f(y) = y, q constant.
    EigenBound(EigenArgs),
    /// Recompute a published worked example.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TheoremArg {
    #[value(name = "3.4")]
    Nontrivial,
    #[value(name = "3.6")]
    Shell,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Exact,
    Paper,
}

#[derive(Debug, Args)]
struct GreenArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long)]
    b: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write a JSON run report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// JSON problem file; inline flags override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long)]
    b: Option<usize>,
    /// Load q(t).
    #[arg(long)]
    q: Option<String>,
    /// Nonlinearity f(y).
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    r1: Option<f64>,
    #[arg(long)]
    r2: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
    #[arg(long)]
    damping: Option<f64>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Also write the resolved problem as a JSON problem file.
    #[arg(long = "save-spec")]
    save_spec: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_enum)]
    theorem: TheoremArg,
    /// Maximum of the solution (nontrivial-solution inequality).
    #[arg(long, conflicts_with = "auto_eta")]
    eta: Option<f64>,
    /// Solve first and use the solution's maximum as eta.
    #[arg(long = "auto-eta")]
    auto_eta: bool,
    #[arg(long, value_enum, default_value = "exact")]
    variant: VariantArg,
    /// Override gamma in the existence-shell inequality.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EigenArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long)]
    b: usize,
    /// Compute the spectrum of the interior operator and compare.
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    example: u8,
    #[arg(long)]
    report: Option<PathBuf>,
}

/// A failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: e.to_string(),
    }
}

fn compute(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_COMPUTE,
        message: e.to_string(),
    }
}

/// Output of a subcommand before it is written anywhere.
struct Outcome {
    code: i32,
    input: Value,
    outputs: Value,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: Vec<String>,
    input_digest: String,
    outputs: &'a Value,
    warnings: &'a [String],
    exit_status: i32,
}

/// Shortest decimal that round-trips.
pub fn fmt_real(x: f64) -> String {
    format!("{x:?}")
}

fn digest(value: &Value) -> String {
    let canonical = serde_json::to_vec(value).expect("json value serializes");
    Sha256::digest(&canonical)
        .iter()
        .fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| compute(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(compute)
        }
    }
}

fn to_json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Human-readable summary: to stdout when the data went to a file, stderr otherwise.
fn summary(data_to_file: bool, text: &str) {
    if data_to_file {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let report_path = match &cli.command {
        Command::Green(a) => a.report.clone(),
        Command::Solve(a) => a.report.clone(),
        Command::Certify(a) => a.report.clone(),
        Command::EigenBound(a) => a.report.clone(),
        Command::Reproduce(a) => a.report.clone(),
    };
    let result = match cli.command {
        Command::Green(a) => cmd_green(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Certify(a) => cmd_certify(a),
        Command::EigenBound(a) => cmd_eigen_bound(a),
        Command::Reproduce(a) => cmd_reproduce(a),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message);
            Outcome {
                code: f.code,
                input: Value::Null,
                outputs: json!({ "error": f.message }),
                warnings: Vec::new(),
            }
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(path) = report_path {
        let report = RunReport {
            command: args
                .iter()
                .map(|a| a.to_string_lossy().into_owned())
                .collect(),
            input_digest: digest(&outcome.input),
            outputs: &outcome.outputs,
            warnings: &outcome.warnings,
            exit_status: outcome.code,
        };
        if let Err(e) = std::fs::write(&path, to_json_text(&report)) {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_COMPUTE;
        }
    }
    outcome.code
}

fn cmd_green(a: GreenArgs) -> Result<Outcome, Failure> {
    let alpha = FracOrder::new(a.alpha).map_err(input)?;
    crate::green::check_b(a.b).map_err(input)?;
    let table = green_table(alpha, a.b).map_err(compute)?;
    let window = ConeWindow::new(alpha, a.b).map_err(compute)?;
    let lambda = lambda_constant(alpha, a.b).map_err(compute)?;
    let (max, mk, ms) = table.max_entry();
    let n = table.size();
    let rows: Vec<f64> = (0..n).map(|k| table.row_point(k)).collect();

    let data = match a.format {
        Format::Csv => {
            let mut s = String::from("t\\s");
            for col in 0..n {
                let _ = write!(s, ",{col}");
            }
            s.push('\n');
            for (k, t) in rows.iter().enumerate() {
                s.push_str(&fmt_real(*t));
                for v in table.row(k) {
                    let _ = write!(s, ",{}", fmt_real(*v));
                }
                s.push('\n');
            }
            s
        }
        Format::Json => to_json_text(&json!({
            "alpha": a.alpha,
            "b": a.b,
            "t": rows,
            "s": (0..n).collect::<Vec<_>>(),
            "values": (0..n).map(|k| table.row(k).to_vec()).collect::<Vec<_>>(),
        })),
    };
    write_text(a.out.as_deref(), &data)?;
    let window_t: Vec<f64> = window.grid_indices.iter().map(|&k| rows[k]).collect();
    summary(
        a.out.is_some(),
        &format!(
            "max G = {} at t = {}, s = {}\nlambda = {}\nwindow [{}, {}]: k = {:?}, t = {:?}\n",
            fmt_real(max),
            fmt_real(table.row_point(mk)),
            ms,
            fmt_real(lambda),
            fmt_real(window.lower),
            fmt_real(window.upper),
            window.grid_indices,
            window_t
        ),
    );
    Ok(Outcome {
        code: EXIT_OK,
        input: json!({ "command": "green", "alpha": a.alpha, "b": a.b }),
        outputs: json!({
            "max": { "value": max, "t": table.row_point(mk), "s": ms },
            "lambda": lambda,
            "window": window,
        }),
        warnings: Vec::new(),
    })
}

/// Merges the problem file (if any) with inline flags.
fn resolve_problem(p: &ProblemArgs) -> Result<ProblemFile, Failure> {
    let mut file = match &p.spec {
        Some(path) => ProblemFile::read(path).map_err(input)?,
        None => {
            let missing: Vec<&str> = [
                ("--alpha", p.alpha.is_none()),
                ("--b", p.b.is_none()),
                ("--q", p.q.is_none()),
                ("--f", p.f.is_none()),
            ]
            .iter()
            .filter(|(_, m)| *m)
            .map(|(n, _)| *n)
            .collect();
            if !missing.is_empty() {
                return Err(input(format!(
                    "either --spec or all of --alpha, --b, --q, --f are required (missing {})",
                    missing.join(", ")
                )));
            }
            ProblemFile {
                alpha: 0.0,
                b: 0,
                q: String::new(),
                f: String::new(),
                r1: None,
                r2: None,
                tol: None,
                max_iter: None,
                damping: None,
            }
        }
    };
    if let Some(v) = p.alpha {
        file.alpha = v;
    }
    if let Some(v) = p.b {
        file.b = v;
    }
    if let Some(v) = &p.q {
        file.q = v.clone();
    }
    if let Some(v) = &p.f {
        file.f = v.clone();
    }
    file.r1 = p.r1.or(file.r1);
    file.r2 = p.r2.or(file.r2);
    file.tol = p.tol.or(file.tol);
    file.max_iter = p.max_iter.or(file.max_iter);
    file.damping = p.damping.or(file.damping);
    Ok(file)
}

fn solution_rows(
    spec: &ProblemSpec,
    y: &GridFunction,
) -> Result<Vec<(i64, f64, f64, f64)>, Failure> {
    let terms = residual_terms(spec, y).map_err(compute)?;
    let v = y.values();
    Ok(y.iter()
        .enumerate()
        .map(|(j, (t, yv))| {
            // Boundary rows report the boundary-condition residual, i.e. y itself.
            let r = if j == 0 || j == v.len() - 1 {
                yv
            } else {
                terms[j - 1]
            };
            (j as i64 - 1, t, yv, r)
        })
        .collect())
}

fn cmd_solve(a: SolveArgs) -> Result<Outcome, Failure> {
    let file = resolve_problem(&a.problem)?;
    let spec = file.to_spec().map_err(input)?;
    let options = file.picard_options();
    if let Some(path) = &a.save_spec {
        let saved = ProblemFile::from_spec(&spec, Some(&options)).to_json();
        std::fs::write(path, saved).map_err(|e| compute(format!("{}: {e}", path.display())))?;
    }
    let sol = match solve_picard(&spec, &options) {
        Ok(s) => s,
        Err(e @ (Error::Domain(_) | Error::Parse { .. })) => return Err(input(e)),
        Err(e) => return Err(compute(e)),
    };
    let rows = solution_rows(&spec, &sol.y)?;
    let lambda = lambda_constant(spec.alpha, spec.b).map_err(compute)?;
    let window = ConeWindow::new(spec.alpha, spec.b).map_err(compute)?;
    let in_cone = cone_check(&sol.y, lambda, &window).map_err(compute)?;
    let bounds = match (spec.r1, spec.r2) {
        (Some(r1), Some(r2)) => Some(norm_bounds(&sol, r1, r2)),
        _ => None,
    };

    let data = match a.format {
        Format::Csv => {
            let mut s = String::from("k,t,y,residual_term\n");
            for (k, t, y, r) in &rows {
                let _ = writeln!(s, "{k},{},{},{}", fmt_real(*t), fmt_real(*y), fmt_real(*r));
            }
            s
        }
        Format::Json => to_json_text(&json!({
            "problem": file,
            "solution": &sol,
            "cone_check": in_cone,
            "lambda": lambda,
            "norm_bounds": bounds,
            "points": rows.iter().map(|(k, t, y, r)| json!({
                "k": k, "t": t, "y": y, "residual_term": r
            })).collect::<Vec<_>>(),
        })),
    };
    write_text(a.out.as_deref(), &data)?;

    let mut text = format!(
        "eta = {}\nresidual_sup = {}\niterations = {}\nconverged = {}\ncone_check (lambda = {}) = {}\n",
        fmt_real(sol.eta),
        fmt_real(sol.residual_sup),
        sol.iterations,
        sol.converged,
        fmt_real(lambda),
        in_cone
    );
    let mut warnings = Vec::new();
    if let Some(nb) = bounds {
        let _ = writeln!(
            text,
            "norm = {} in [r1, r2] = [{}, {}]: lower {}, upper {}",
            fmt_real(nb.norm),
            fmt_real(nb.r1),
            fmt_real(nb.r2),
            if nb.lower_holds { "holds" } else { "fails" },
            if nb.upper_holds { "holds" } else { "fails" },
        );
        if !nb.lower_holds {
            warnings.push(
                "the Picard limit lies below r1; the existence shell only guarantees some fixed point in [r1, r2]"
                    .to_string(),
            );
        }
    }
    summary(a.out.is_some(), &text);
    if !sol.converged {
        warnings.push(format!(
            "no convergence after {} iterations",
            sol.iterations
        ));
    }
    Ok(Outcome {
        code: if sol.converged {
            EXIT_OK
        } else {
            EXIT_NO_CONVERGENCE
        },
        input: json!({ "command": "solve", "problem": file }),
        outputs: json!({
            "solution": &sol,
            "cone_check": in_cone,
            "norm_bounds": bounds,
        }),
        warnings,
    })
}

fn cmd_certify(a: CertifyArgs) -> Result<Outcome, Failure> {
    let file = resolve_problem(&a.problem)?;
    let spec = file.to_spec().map_err(input)?;
    let variant = match a.variant {
        VariantArg::Exact => Variant::Exact,
        VariantArg::Paper => Variant::Paper,
    };
    let mut warnings = Vec::new();
    let mode = match a.theorem {
        TheoremArg::Nontrivial => {
            let eta = match (a.eta, a.auto_eta) {
                (Some(eta), false) => eta,
                (None, true) => {
                    let sol = solve_picard(&spec, &file.picard_options()).map_err(compute)?;
                    if !sol.converged {
                        return Err(Failure {
                            code: EXIT_NO_CONVERGENCE,
                            message: format!(
                                "--auto-eta: no convergence after {} iterations",
                                sol.iterations
                            ),
                        });
                    }
                    sol.eta
                }
                _ => {
                    return Err(input(
                        "theorem 3.4 needs exactly one of --eta or --auto-eta",
                    ))
                }
            };
            CertifyMode::NontrivialSolution { eta }
        }
        TheoremArg::Shell => {
            let (Some(r1), Some(r2)) = (spec.r1, spec.r2) else {
                return Err(input("theorem 3.6 needs r1 and r2"));
            };
            if let Some(g) = a.gamma {
                if !(g > 0.0) {
                    return Err(input(format!("--gamma must be positive, got {g}")));
                }
            }
            // Report the other form alongside, since they differ by Γ(b+3).
            let g = match (a.gamma, variant) {
                (Some(g), _) => Ok(g),
                (None, Variant::Exact) => gamma_exact(spec.alpha, spec.b, &spec.q),
                (None, Variant::Paper) => gamma_paper(spec.alpha, spec.b, &spec.q),
            };
            if let Ok(g) = g {
                let formula = lyapunov_rhs_co(spec.alpha, spec.b, r1, r2, g).map_err(input)?;
                let displayed =
                    lyapunov_rhs_co_paper(spec.alpha, spec.b, r1, r2, g).map_err(input)?;
                warnings.push(format!(
                    "the published example displays Gamma(b+3) = {} times the stated formula: formula rhs {}, displayed-style rhs {}",
                    fmt_real(displayed / formula),
                    fmt_real(formula),
                    fmt_real(displayed)
                ));
            }
            CertifyMode::ExistenceShell {
                r1,
                r2,
                gamma: a.gamma,
            }
        }
    };
    let cert = match certify(&spec, mode, variant) {
        Ok(c) => c,
        Err(e @ Error::Eval(_)) => return Err(compute(e)),
        Err(e) => return Err(input(e)),
    };
    write_text(None, &to_json_text(&cert))?;
    Ok(Outcome {
        code: if cert.satisfied {
            EXIT_OK
        } else {
            EXIT_VIOLATED
        },
        input: json!({
            "command": "certify",
            "problem": file,
            "theorem": format!("{:?}", a.theorem),
            "variant": format!("{:?}", a.variant),
            "eta": a.eta,
            "auto_eta": a.auto_eta,
            "gamma": a.gamma,
        }),
        outputs: serde_json::to_value(cert).expect("serializable"),
        warnings,
    })
}

fn cmd_eigen_bound(a: EigenArgs) -> Result<Outcome, Failure> {
    let alpha = FracOrder::new(a.alpha).map_err(input)?;
    crate::green::check_b(a.b).map_err(input)?;
    let radius = eigen_exclusion(alpha, a.b).map_err(compute)?;
    let mut text = format!("radius = {}\n", fmt_real(radius));
    let mut outputs = json!({ "radius": radius });
    let mut code = EXIT_OK;
    if a.verify {
        let mut spectrum = sturm_liouville_spectrum(alpha, a.b).map_err(compute)?;
        spectrum.sort_by(|x, y| x.norm().total_cmp(&y.norm()).then(x.im.total_cmp(&y.im)));
        let min_mag = spectrum
            .iter()
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min);
        for z in &spectrum {
            let _ = writeln!(
                text,
                "eigenvalue {} {:+}i  |mu| = {}",
                fmt_real(z.re),
                z.im,
                fmt_real(z.norm())
            );
        }
        let outside = min_mag > radius;
        let _ = writeln!(
            text,
            "min |mu| = {}\nall eigenvalues outside radius: {outside}",
            fmt_real(min_mag)
        );
        if !outside {
            code = EXIT_COMPUTE;
        }
        outputs = json!({
            "radius": radius,
            "min_magnitude": min_mag,
            "all_outside": outside,
            "spectrum": spectrum.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        });
    }
    print!("{text}");
    Ok(Outcome {
        code,
        input: json!({ "command": "eigen-bound", "alpha": a.alpha, "b": a.b, "verify": a.verify }),
        outputs,
        warnings: Vec::new(),
    })
}

fn cmd_reproduce(a: ReproduceArgs) -> Result<Outcome, Failure> {
    let rep = run_example(a.example).map_err(compute)?;
    print!("{}", rep.to_table());
    let pass = rep.all_pass();
    println!(
        "{}",
        if pass {
            "all comparisons pass"
        } else {
            "SOME COMPARISONS FAIL"
        }
    );
    Ok(Outcome {
        code: if pass { EXIT_OK } else { EXIT_COMPUTE },
        input: json!({ "command": "reproduce", "example": a.example }),
        outputs: serde_json::to_value(&rep.comparisons).expect("serializable"),
        warnings: rep.warnings,
    })
}
