//! Command-line front end: problem-file ingestion, method dispatch,
//! structured reports, and the two built-in demonstrations.

use crate::case_studies::{
    bratu_pipeline, critical_point, equivalence_matrix, fisher_outcome,
};
use crate::error::{Error, Result};
use crate::expfn::{run_expfn, AnsatzExp};
use crate::expr::{self, Expr, WAVE_VAR};
use crate::ffx::{run_ffx, run_riccati, MethodOutcome};
use crate::parser::parse_any;
use crate::problem::{parse_problem, ProblemFile};
use crate::report::{render_latex, render_text, report_from, Report};
use crate::verify::{bind_prime_profile, residual_report, Grid, ResidualOptions};
use clap::{Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "wavecraft",
    about = "Exact travelling-wave solutions of nonlinear evolution equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Ffx,
    Riccati,
    Expfn,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Text,
    Latex,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file with one expansion method.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Wave direction sign in the frame substitution (+ or -).
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        direction: String,
        /// Exponent ranges c,d,p,q for the exponential ansatz.
        #[arg(long)]
        ranges: Option<String>,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        output: Output,
    },
    /// Re-check a solution report against its problem file.
    Verify {
        file: PathBuf,
        solution: PathBuf,
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        direction: String,
    },
    /// Run a built-in case study (fisher or bratu).
    Demo { which: String },
}

fn parse_direction(s: &str) -> Result<i64> {
    match s {
        "+" => Ok(1),
        "-" => Ok(-1),
        other => Err(Error::InvalidProblem(format!(
            "direction must be + or -, got `{}`",
            other
        ))),
    }
}

fn parse_ranges(s: &str) -> Result<(u32, u32, u32, u32)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::InvalidProblem(
            "ranges take four comma-separated integers: c,d,p,q".to_string(),
        ));
    }
    let mut vals = [0u32; 4];
    for (i, p) in parts.iter().enumerate() {
        vals[i] = p.trim().parse::<u32>().map_err(|_| {
            Error::InvalidProblem(format!("`{}` is not a nonnegative integer", p.trim()))
        })?;
    }
    Ok((vals[0], vals[1], vals[2], vals[3]))
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))
}

/// A grid that spans the boundary-condition locations, or the default
/// symmetric wave window when there are none.
fn problem_grid(pf: &ProblemFile) -> Grid {
    if pf.bcs.is_empty() {
        return Grid::default_wave();
    }
    let locs: Vec<f64> = pf
        .bcs
        .iter()
        .map(|bc| bc.location.to_f64().unwrap_or(0.0))
        .collect();
    let lo = locs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = locs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo > 1e-9 {
        Grid::new(lo, hi, 101)
    } else {
        Grid::new(lo - 1.0, lo + 1.0, 101)
    }
}

fn solve_outcome(
    pf: &ProblemFile,
    method: Method,
    direction: i64,
    ranges: Option<(u32, u32, u32, u32)>,
) -> Result<MethodOutcome> {
    let ode = pf.to_ode(direction)?;
    match method {
        Method::Ffx | Method::Riccati => {
            let outcome = if method == Method::Ffx {
                run_ffx(&ode, &pf.params)?
            } else {
                run_riccati(&ode, &pf.params)?
            };
            if !pf.bcs.is_empty() {
                // never silently drop constraints the method cannot apply
                return Err(Error::InvalidProblem(
                    "boundary conditions are only applied by the expfn method".to_string(),
                ));
            }
            Ok(outcome)
        }
        Method::Expfn => {
            let (c, d, p, q) = ranges.unwrap_or(pf.ranges);
            let mut extra: Vec<String> = pf.params.clone();
            if ode.lhs.contains_symbol(&ode.speed) {
                extra.push(ode.speed.clone());
            }
            run_expfn(
                &ode.lhs,
                &ode.dependent,
                &extra,
                &AnsatzExp::from_ranges(c, d, p, q),
                &pf.bcs,
                &problem_grid(pf),
            )
        }
    }
}

/// Solves a problem text end to end and returns the JSON report: the entry
/// point shared by the command line and the Python bindings.
pub fn solve_text(
    text: &str,
    method: &str,
    direction: i64,
    ranges: Option<(u32, u32, u32, u32)>,
) -> Result<String> {
    let method = match method {
        "ffx" => Method::Ffx,
        "riccati" => Method::Riccati,
        "expfn" => Method::Expfn,
        other => {
            return Err(Error::InvalidProblem(format!(
                "unknown method `{}`; use ffx, riccati, or expfn",
                other
            )))
        }
    };
    if direction != 1 && direction != -1 {
        return Err(Error::InvalidProblem(
            "direction must be 1 or -1".to_string(),
        ));
    }
    let pf = parse_problem(text)?;
    let outcome = solve_outcome(&pf, method, direction, ranges)?;
    Ok(crate::report::to_json(&report_from(&outcome)))
}

fn cmd_solve(
    file: &PathBuf,
    method: Method,
    direction: &str,
    ranges: Option<&str>,
    output: Output,
) -> Result<i32> {
    let pf = parse_problem(&read(file)?)?;
    let dir = parse_direction(direction)?;
    let flag = ranges.map(parse_ranges).transpose()?;
    let outcome = solve_outcome(&pf, method, dir, flag)?;
    let report = report_from(&outcome);
    match output {
        Output::Json => print!("{}", crate::report::to_json(&report)),
        Output::Text => print!("{}", render_text(&report, &pf.dependent)),
        Output::Latex => print!("{}", render_latex(&report, &pf.dependent)),
    }
    Ok(0)
}

fn cmd_verify(file: &PathBuf, solution: &PathBuf, direction: &str) -> Result<i32> {
    let pf = parse_problem(&read(file)?)?;
    let dir = parse_direction(direction)?;
    let ode = pf.to_ode(dir)?;
    let report: Report = serde_json::from_str(&read(solution)?)
        .map_err(|e| Error::InvalidProblem(format!("solution file: {}", e)))?;
    let mut all_pass = true;
    for (i, b) in report.branches.iter().enumerate() {
        let mut rules: BTreeMap<Expr, Expr> = BTreeMap::new();
        for (name, v) in &b.assignments {
            rules.insert(expr::sym(name), parse_any(&v.exact)?);
        }
        let profile = parse_any(&b.closed_form.text)?;
        let lhs = ode.lhs.substitute(&rules);
        let bound = bind_prime_profile(&lhs, &ode.dependent, &profile);
        let mut bindings: BTreeMap<String, f64> = BTreeMap::new();
        let in_lhs = bound.free_symbols();
        let in_profile = profile.free_symbols();
        for s in in_lhs.union(&in_profile) {
            if s.as_str() != WAVE_VAR {
                bindings.insert(s.clone(), 1.0);
            }
        }
        let grid = Grid::new(
            b.residual.grid.from,
            b.residual.grid.to,
            b.residual.grid.points,
        );
        let rr = residual_report(&bound, &grid, &bindings, &ResidualOptions::default())?;
        let mut bc_ok = true;
        for bc in &pf.bcs {
            let mut e = profile.clone();
            for _ in 0..bc.order {
                e = e.differentiate(WAVE_VAR);
            }
            let mut local = bindings.clone();
            local.insert(WAVE_VAR.to_string(), bc.location.to_f64().unwrap_or(0.0));
            let got = e.eval(&local)?;
            let want = bc.target.to_f64().unwrap_or(0.0);
            if (got - want).abs() > 1e-8 {
                bc_ok = false;
            }
        }
        let ok = rr.pass && bc_ok;
        all_pass &= ok;
        println!(
            "branch {}: {} (max residual {:.3e}, skipped {}{})",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            rr.max_residual,
            rr.skipped,
            if bc_ok { "" } else { ", boundary conditions violated" }
        );
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_demo(which: &str) -> Result<i32> {
    match which {
        "fisher" => {
            for method in ["ffx", "riccati", "expfn"] {
                let outcome = fisher_outcome(method, 1)?;
                print!("{}", render_text(&report_from(&outcome), "u"));
                println!();
            }
            println!("cross-method equivalence:");
            for pair in equivalence_matrix()? {
                println!(
                    "  {} ~ {}: {} (max difference {:.3e})",
                    pair.first,
                    pair.second,
                    if pair.report.pass { "agree" } else { "DISAGREE" },
                    pair.report.max_difference
                );
            }
            Ok(0)
        }
        "bratu" => {
            let curve = bratu_pipeline()?;
            println!("lambda(alpha) = {}", curve.lambda_of_alpha);
            println!("a1(alpha) = {}", curve.a1_of_alpha);
            if let Some(t) = &curve.trivial {
                println!(
                    "trivial branch: {}",
                    t.assignment
                        .values
                        .iter()
                        .map(|(k, v)| format!("{} = {}", k, v))
                        .collect::<Vec<_>>()
                        .join(", ")
                );
            }
            let (alpha_c, lambda_c) = critical_point(&curve)?;
            println!("alpha_c = {:.8}", alpha_c);
            println!("lambda_c = {:.8}", lambda_c);
            Ok(0)
        }
        other => Err(Error::InvalidProblem(format!(
            "unknown demo `{}`; available: fisher, bratu",
            other
        ))),
    }
}

/// Entry point shared by the `wavecraft` binary; returns a process exit code.
pub fn run_cli() -> i32 {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve {
            file,
            method,
            direction,
            ranges,
            output,
        } => cmd_solve(file, *method, direction, ranges.as_deref(), *output),
        Command::Verify {
            file,
            solution,
            direction,
        } => cmd_verify(file, solution, direction),
        Command::Demo { which } => cmd_demo(which),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            e.exit_code()
        }
    }
}
