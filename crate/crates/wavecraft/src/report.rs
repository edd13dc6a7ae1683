//! Structured output: the JSON report schema with exact value strings plus
//! float shadows, and plain-text / LaTeX renderings of the same content.
//!
//! Identical solver outcomes serialize to byte-identical JSON: maps are
//! ordered, field order is fixed by declaration, and every number either
//! prints exactly (rationals, radicals) or through the standard float
//! formatter.

use crate::expr::{Expr, WAVE_VAR};
use crate::ffx::MethodOutcome;
use crate::render::latex;
use crate::verify::SolutionBranch;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub method: String,
    pub branches: Vec<BranchJson>,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchJson {
    pub assignments: BTreeMap<String, ValueJson>,
    pub free: Vec<String>,
    pub closed_form: ClosedFormJson,
    pub case: String,
    pub residual: ResidualJson,
    pub limit_forms: Vec<ClosedFormJson>,
}

/// An exact value string (re-parseable by the expression grammar) plus a
/// float shadow when the value is a plain number.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValueJson {
    pub exact: String,
    pub float: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosedFormJson {
    pub text: String,
    pub latex: String,
    pub constants: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResidualJson {
    pub max: f64,
    pub grid: GridJson,
    pub skipped: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridJson {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Diagnostics {
    pub complex_branches_discarded: usize,
    pub messages: Vec<String>,
}

fn value_json(e: &Expr) -> ValueJson {
    ValueJson {
        exact: e.to_string(),
        float: e.as_num().map(|r| r.to_f64()),
    }
}

fn closed_form_json(u: &Expr, constants: &[String]) -> ClosedFormJson {
    ClosedFormJson {
        text: u.to_string(),
        latex: latex(u),
        constants: constants.to_vec(),
    }
}

fn branch_json(b: &SolutionBranch) -> BranchJson {
    let assignments = b
        .assignment
        .values
        .iter()
        .map(|(k, v)| (k.clone(), value_json(v)))
        .collect();
    BranchJson {
        assignments,
        free: b.assignment.free.iter().cloned().collect(),
        closed_form: closed_form_json(&b.solution.u, &b.solution.constants),
        case: b.solution.case.as_str().to_string(),
        residual: ResidualJson {
            max: b.residual.max_residual,
            grid: GridJson {
                from: b.residual.grid.from,
                to: b.residual.grid.to,
                points: b.residual.grid.points,
            },
            skipped: b.residual.skipped,
            pass: b.residual.pass,
        },
        limit_forms: b
            .limit_solutions
            .iter()
            .map(|s| closed_form_json(&s.u, &s.constants))
            .collect(),
    }
}

pub fn report_from(outcome: &MethodOutcome) -> Report {
    Report {
        method: outcome.method.to_string(),
        branches: outcome.branches.iter().map(branch_json).collect(),
        diagnostics: Diagnostics {
            complex_branches_discarded: outcome.complex_discarded,
            messages: outcome.notes.clone(),
        },
    }
}

pub fn to_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("report serializes") + "\n"
}

// ---- human-readable renderings ----

pub fn render_text(report: &Report, dependent: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "method: {}", report.method);
    for (i, b) in report.branches.iter().enumerate() {
        let _ = writeln!(s, "branch {} [{}]", i + 1, b.case);
        for (name, v) in &b.assignments {
            match v.float {
                Some(f) => {
                    let _ = writeln!(s, "  {} = {}  (~ {:.8})", name, v.exact, f);
                }
                None => {
                    let _ = writeln!(s, "  {} = {}", name, v.exact);
                }
            }
        }
        if !b.free.is_empty() {
            let _ = writeln!(s, "  free: {}", b.free.join(", "));
        }
        let _ = writeln!(s, "  {}({}) = {}", dependent, WAVE_VAR, b.closed_form.text);
        for l in &b.limit_forms {
            let _ = writeln!(s, "  limit: {}", l.text);
        }
        let _ = writeln!(
            s,
            "  residual: max {:.3e} over [{}, {}] x {}, skipped {} -> {}",
            b.residual.max,
            b.residual.grid.from,
            b.residual.grid.to,
            b.residual.grid.points,
            b.residual.skipped,
            if b.residual.pass { "pass" } else { "FAIL" }
        );
    }
    let _ = writeln!(
        s,
        "diagnostics: {} complex branch(es) discarded",
        report.diagnostics.complex_branches_discarded
    );
    for m in &report.diagnostics.messages {
        let _ = writeln!(s, "  note: {}", m);
    }
    s
}

pub fn render_latex(report: &Report, dependent: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "% method: {}", report.method);
    for (i, b) in report.branches.iter().enumerate() {
        let _ = writeln!(s, "% branch {} ({})", i + 1, b.case);
        let mut constraints: Vec<String> = vec![];
        for (name, v) in &b.assignments {
            let e = crate::parser::parse_any(&v.exact).expect("exact strings re-parse");
            constraints.push(format!(
                "{} = {}",
                crate::render::latex(&Expr::Sym(name.clone())),
                latex(&e)
            ));
        }
        let _ = writeln!(
            s,
            "\\[ {}(\\{}) = {}, \\quad {} \\]",
            dependent,
            WAVE_VAR,
            b.closed_form.latex,
            constraints.join(", \\; ")
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case_studies::fisher_outcome;

    #[test]
    fn identical_runs_serialize_identically() {
        let a = to_json(&report_from(&fisher_outcome("ffx", 1).unwrap()));
        let b = to_json(&report_from(&fisher_outcome("ffx", 1).unwrap()));
        assert_eq!(a, b);
        assert!(a.contains("\"method\": \"ffx\""));
    }

    #[test]
    fn exact_strings_shadow_floats() {
        let report = report_from(&fisher_outcome("ffx", 1).unwrap());
        let branch = &report.branches[0];
        let c = &branch.assignments["c"];
        assert!(c.exact.contains("sqrt(6)"));
        let f = c.float.expect("numeric speed");
        assert!((f.abs() - 5.0 / 6.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn renderings_cover_every_branch() {
        let report = report_from(&fisher_outcome("ffx", 1).unwrap());
        let text = render_text(&report, "u");
        assert!(text.contains("branch 1"));
        assert!(text.contains("branch 2"));
        assert!(text.contains("u(xi) ="));
        assert!(text.contains("pass"));
        let tex = render_latex(&report, "u");
        assert_eq!(tex.matches("\\[").count(), 2);
        assert!(tex.contains("\\sqrt{6}"));
    }

    #[test]
    fn report_round_trips_through_serde() {
        let report = report_from(&fisher_outcome("ffx", 1).unwrap());
        let json = to_json(&report);
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(to_json(&back), json);
    }
}
