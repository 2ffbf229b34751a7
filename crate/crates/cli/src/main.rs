//! Batch front end: problem files in, deterministic reports out.
//!
//! Exit codes: 0 on success, 1 on malformed input or missing files, 2 when a
//! request needs the square-root machinery but -1 occurs among the
//! commutation scalars.

use clap::{Parser, Subcommand};
use qstrata::render::{render_presentation, render_rational, render_saturation, MonomialStyle};
use qstrata::{
    analyze, bichar_feasibility, fiber_equivalent, parse_lambda, parse_problem,
    parse_rational_point, psi_generators, run_selftest, stratum_for, twist_hypothesis_check,
    Error, FeasibilityOutcome, FiberVerdict, PresentationForm, Problem, ProblemSource,
    ProblemSpec, QMatrix, Result,
};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "qstrata", version, about = "Stratified spectra of quantum affine spaces")]
struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full stratification report for a problem file.
    Analyze { file: PathBuf },
    /// Ideal generators for the stratum containing a given point.
    Psi {
        file: PathBuf,
        /// Point coordinates: comma-separated rationals, `0`, or `*` for a
        /// formal symbol.
        #[arg(long)]
        lambda: String,
    },
    /// Decide whether two points lie in the same fiber.
    Fiber {
        file: PathBuf,
        /// First point: comma-separated exact rationals.
        #[arg(long)]
        lambda: String,
        /// Second point: comma-separated exact rationals.
        #[arg(long)]
        mu: String,
    },
    /// Search the sign-flip cocycle family for a compatible matrix.
    Feasibility {
        file: Option<PathBuf>,
        /// Use the built-in matrix with every commutation scalar equal to -1.
        #[arg(long, conflicts_with = "file")]
        minus_one: bool,
        /// Number of generators for --minus-one.
        #[arg(long)]
        n: Option<usize>,
        /// Declare characteristic 2 for the built-in matrix.
        #[arg(long, requires = "minus_one")]
        char2: bool,
        /// Values are searched among the 2^k-th roots of unity.
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// Pull a graded-twist problem back to its ambient space and analyze it.
    Twist { file: PathBuf },
    /// Run the seeded oracle suites.
    Selftest,
}

struct Output {
    text: String,
    code: i32,
}

fn ok(text: String) -> Result<Output> {
    Ok(Output { text, code: 0 })
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            std::process::exit(out.code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(if e.is_hypothesis_violation() { 2 } else { 1 });
        }
    }
}

fn read_spec(path: &Path) -> Result<ProblemSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn read_problem(path: &Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    parse_problem(&text)
}

fn format_subset(w: &[usize]) -> String {
    if w.is_empty() {
        "{}".into()
    } else {
        let inner: Vec<String> = w.iter().map(|i| (i + 1).to_string()).collect();
        format!("{{{}}}", inner.join(", "))
    }
}

fn run(cli: Cli) -> Result<Output> {
    match &cli.command {
        Command::Analyze { file } => {
            let spec = read_spec(file)?;
            let report = analyze(&spec)?;
            if cli.json {
                ok(to_json(&report)?)
            } else {
                ok(report.to_text())
            }
        }
        Command::Twist { file } => {
            let spec = read_spec(file)?;
            let problem = spec.build()?;
            match problem.source() {
                ProblemSource::Twist(p) => twist_hypothesis_check(p)?,
                ProblemSource::Matrix(_) => {
                    return Err(Error::InvalidInput(
                        "the twist command needs a problem with a graded_twist block".into(),
                    ))
                }
            }
            let report = analyze(&spec)?;
            if cli.json {
                ok(to_json(&report)?)
            } else {
                ok(report.to_text())
            }
        }
        Command::Psi { file, lambda } => {
            let problem = read_problem(file)?;
            let q = problem.ambient_qmatrix()?;
            let b = q.validate()?;
            let c = b.sqrt()?;
            let entries = parse_lambda(lambda, problem.n())?;
            let w: Vec<usize> = entries
                .iter()
                .enumerate()
                .filter(|(_, e)| e.is_zero())
                .map(|(i, _)| i)
                .collect();
            let stratum = stratum_for(&b, &w)?;
            let pres = psi_generators(&c, &stratum, &entries, PresentationForm::AffineSaturation)?;
            let generators = render_presentation(&c, &pres, MonomialStyle::Ordered)?;
            let saturation = render_saturation(&pres);
            if cli.json {
                let doc = serde_json::json!({
                    "w": w.iter().map(|i| i + 1).collect::<Vec<usize>>(),
                    "generators": generators,
                    "saturation": saturation,
                });
                ok(to_json(&doc)?)
            } else {
                let mut text = format!(
                    "ideal generators over the stratum with vanishing set {}\n",
                    format_subset(&w)
                );
                for g in &generators {
                    text.push_str("  ");
                    text.push_str(g);
                    text.push('\n');
                }
                if let Some(s) = &saturation {
                    text.push_str("  ");
                    text.push_str(s);
                    text.push('\n');
                }
                ok(text)
            }
        }
        Command::Fiber { file, lambda, mu } => {
            let problem = read_problem(file)?;
            let q = problem.ambient_qmatrix()?;
            let b = q.validate()?;
            let left = parse_rational_point(lambda, problem.n())?;
            let right = parse_rational_point(mu, problem.n())?;
            let verdict = fiber_equivalent(&b, &left, &right)?;
            fiber_output(cli.json, &verdict)
        }
        Command::Feasibility {
            file,
            minus_one,
            n,
            char2,
            k,
        } => {
            let b = if *minus_one {
                let n = n.ok_or_else(|| {
                    Error::InvalidInput("--minus-one needs --n <generators>".into())
                })?;
                QMatrix::uniparameter(n, 2, *char2, None)?.validate()?
            } else {
                let path = file.as_ref().ok_or_else(|| {
                    Error::InvalidInput(
                        "feasibility needs a problem file or --minus-one --n <generators>".into(),
                    )
                })?;
                let problem = read_problem(path)?;
                problem.ambient_qmatrix()?.validate()?
            };
            let outcome = bichar_feasibility(&b, *k)?;
            if cli.json {
                ok(to_json(&outcome)?)
            } else {
                ok(feasibility_text(&outcome))
            }
        }
        Command::Selftest => {
            let report = run_selftest()?;
            let text = if cli.json {
                to_json(&report)?
            } else {
                report.to_text()
            };
            Ok(Output {
                text,
                code: if report.passed() { 0 } else { 1 },
            })
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Internal(format!("serialization: {e}")))?;
    text.push('\n');
    Ok(text)
}

fn fiber_output(json: bool, verdict: &FiberVerdict) -> Result<Output> {
    if json {
        let doc = match verdict {
            FiberVerdict::Equivalent => serde_json::json!({
                "equivalent": true,
                "verdict": "equivalent",
            }),
            FiberVerdict::DifferentStrata { left_w, right_w } => serde_json::json!({
                "equivalent": false,
                "verdict": "different_strata",
                "left_w": left_w.iter().map(|i| i + 1).collect::<Vec<usize>>(),
                "right_w": right_w.iter().map(|i| i + 1).collect::<Vec<usize>>(),
            }),
            FiberVerdict::EquivalentOverExtension { ratios } => serde_json::json!({
                "equivalent": false,
                "verdict": "equivalent_over_extension",
                "ratios": ratios.iter().map(render_rational).collect::<Vec<String>>(),
            }),
            FiberVerdict::NotEquivalent { alpha, left, right } => serde_json::json!({
                "equivalent": false,
                "verdict": "not_equivalent",
                "alpha": alpha.iter().map(|x| x.to_string()).collect::<Vec<String>>(),
                "left": render_rational(left),
                "right": render_rational(right),
            }),
        };
        return ok(to_json(&doc)?);
    }
    let text = match verdict {
        FiberVerdict::Equivalent => "equivalent: true\n\
             the points induce the same character on the radical of their stratum\n"
            .to_string(),
        FiberVerdict::DifferentStrata { left_w, right_w } => format!(
            "equivalent: false\nthe points lie on different strata: vanishing sets {} and {}\n",
            format_subset(left_w),
            format_subset(right_w)
        ),
        FiberVerdict::EquivalentOverExtension { ratios } => {
            let shown: Vec<String> = ratios.iter().map(render_rational).collect();
            format!(
                "equivalent: false\n\
                 the characters differ only by signs (ratios: {}); a quadratic extension of \
                 the base field merges the two fibers\n",
                shown.join(", ")
            )
        }
        FiberVerdict::NotEquivalent { alpha, left, right } => {
            let vec: Vec<String> = alpha.iter().map(|x| x.to_string()).collect();
            format!(
                "equivalent: false\nseparating radical vector ({}): character values {} and {}\n",
                vec.join(", "),
                render_rational(left),
                render_rational(right)
            )
        }
    };
    ok(text)
}

fn feasibility_text(outcome: &FeasibilityOutcome) -> String {
    let mut text = format!(
        "sign-flip feasibility for n = {} generators, values among the {}-th roots of unity\n",
        outcome.n(),
        outcome.modulus()
    );
    text.push_str(&format!(
        "search space: {} candidates; searched {}{}\n",
        outcome.space(),
        outcome.searched(),
        if outcome.was_exhaustive() {
            " (exhaustive)"
        } else {
            " (linear route only)"
        }
    ));
    text.push_str(&format!("routes agree: {}\n", outcome.routes_agree()));
    text.push_str(&format!("verdict: {}\n", outcome.label()));
    if let Some(w) = outcome.witness() {
        text.push_str("witness exponent matrix:\n");
        for i in 0..w.rows() {
            let row: Vec<String> = (0..w.cols()).map(|j| w.get(i, j).to_string()).collect();
            text.push_str(&format!("  ({})\n", row.join(", ")));
        }
    }
    text
}
