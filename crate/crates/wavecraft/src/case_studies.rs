//! Worked end-to-end studies: the Fisher reaction–diffusion wave solved by
//! all three expansions with cross-method equivalence checks, and the
//! one-dimensional Bratu–Gelfand boundary-value problem with its
//! bifurcation curve and fold point.

use crate::error::{Error, Result};
use crate::expfn::{run_expfn, AnsatzExp, BoundaryCondition};
use crate::expr::{self, Expr, WAVE_VAR};
use crate::ffx::{run_ffx, run_riccati, MethodOutcome};
use crate::parser::parse_any;
use crate::reduce::{reduce_to_ode, EvolutionPDE};
use crate::verify::{
    bind_prime_profile, equivalence_check, residual_report, EquivalenceReport, Grid,
    ResidualOptions, ResidualReport, SolutionBranch,
};
use num::BigRational;
use std::collections::BTreeMap;

/// u_t − u_xx − u + u² = 0.
pub fn fisher_pde() -> EvolutionPDE {
    EvolutionPDE::new(
        parse_any("u_t - u_xx - u + u^2").expect("fixed equation parses"),
        "u",
        "x",
        "t",
    )
    .expect("fixed equation is a valid evolution equation")
}

/// Runs one of the three methods on the Fisher equation.
pub fn fisher_outcome(method: &str, direction: i64) -> Result<MethodOutcome> {
    let ode = reduce_to_ode(&fisher_pde(), direction)?;
    match method {
        "ffx" => run_ffx(&ode, &[]),
        "riccati" => run_riccati(&ode, &[]),
        "expfn" => run_expfn(
            &ode.lhs,
            &ode.dependent,
            &[ode.speed.clone()],
            &AnsatzExp::from_ranges(1, 1, 1, 1),
            &[],
            &Grid::default_wave(),
        ),
        other => Err(Error::InvalidProblem(format!("unknown method `{}`", other))),
    }
}

/// One pairwise comparison of the equivalence matrix.
#[derive(Clone, Debug)]
pub struct EquivalencePair {
    pub first: String,
    pub second: String,
    pub report: EquivalenceReport,
}

fn positive_speed_wave(outcome: &MethodOutcome) -> Option<&SolutionBranch> {
    outcome.branches.iter().find(|b| {
        b.assignment
            .value_of("c")
            .and_then(|v| v.as_num())
            .map(|r| r.sign() == std::cmp::Ordering::Greater)
            .unwrap_or(false)
            && b.solution.u.contains_symbol(WAVE_VAR)
    })
}

fn negative_speed_wave(outcome: &MethodOutcome) -> Option<&SolutionBranch> {
    outcome.branches.iter().find(|b| {
        b.assignment
            .value_of("c")
            .and_then(|v| v.as_num())
            .map(|r| r.sign() == std::cmp::Ordering::Less)
            .unwrap_or(false)
            && b.solution.u.contains_symbol(WAVE_VAR)
    })
}

/// Cross-validates the Fisher wave across the three methods and both wave
/// directions. Every entry must pass for the methods to agree.
pub fn equivalence_matrix() -> Result<Vec<EquivalencePair>> {
    let ffx = fisher_outcome("ffx", 1)?;
    let ric = fisher_outcome("riccati", 1)?;
    let exp = fisher_outcome("expfn", 1)?;
    let grid = Grid::default_wave();
    let ffx_main = positive_speed_wave(&ffx)
        .ok_or_else(|| Error::InvalidProblem("no travelling branch".to_string()))?;
    let ric_main = positive_speed_wave(&ric)
        .ok_or_else(|| Error::InvalidProblem("no travelling branch".to_string()))?;
    let mut pairs = vec![];
    // identical F-families: no constant fit needed
    pairs.push(EquivalencePair {
        first: "ffx(c>0)".to_string(),
        second: "riccati(c>0)".to_string(),
        report: equivalence_check(
            &ffx_main.solution.u,
            &ric_main.solution.u,
            &BTreeMap::new(),
            None,
            &grid,
            &{
                let mut b = BTreeMap::new();
                b.insert("C".to_string(), 1.0);
                b
            },
            1e-9,
        ),
    });
    // the exponential-basis family differs by one free-constant gauge
    for (label, reference) in [("ffx(c>0)", ffx_main), ("riccati(c>0)", ric_main)] {
        let mut best: Option<EquivalenceReport> = None;
        let mut picked = String::new();
        for (i, b) in exp.branches.iter().enumerate() {
            if b.assignment.value_of("c") != reference.assignment.value_of("c") {
                continue;
            }
            if !b.solution.u.contains_symbol(WAVE_VAR) || b.solution.constants.len() != 1 {
                continue;
            }
            let mut bindings = BTreeMap::new();
            bindings.insert(b.solution.constants[0].clone(), 1.0);
            let rep = equivalence_check(
                &b.solution.u,
                &reference.solution.u,
                &BTreeMap::new(),
                Some("C"),
                &grid,
                &bindings,
                1e-9,
            );
            let better = best
                .as_ref()
                .map(|old| rep.max_difference < old.max_difference)
                .unwrap_or(true);
            if better {
                picked = format!("expfn[{}]", i);
                best = Some(rep);
            }
        }
        let report = best
            .ok_or_else(|| Error::InvalidProblem("no comparable expfn branch".to_string()))?;
        pairs.push(EquivalencePair {
            first: picked,
            second: label.to_string(),
            report,
        });
    }
    // mirror waves: u with c < 0 equals the c > 0 wave under ξ ↦ −ξ
    let ffx_mirror = negative_speed_wave(&ffx)
        .ok_or_else(|| Error::InvalidProblem("no mirror branch".to_string()))?;
    let reflected = ffx_mirror
        .solution
        .u
        .substitute_symbol(WAVE_VAR, &expr::neg(expr::sym(WAVE_VAR)));
    let mut bindings = BTreeMap::new();
    bindings.insert("K".to_string(), 1.0);
    let mut rename = BTreeMap::new();
    rename.insert("C".to_string(), "K".to_string());
    pairs.push(EquivalencePair {
        first: "ffx(c<0) at -xi".to_string(),
        second: "ffx(c>0)".to_string(),
        report: equivalence_check(
            &reflected,
            &ffx_main.solution.u,
            &rename,
            Some("C"),
            &grid,
            &bindings,
            1e-9,
        ),
    });
    Ok(pairs)
}

// ---- Bratu–Gelfand ----

/// The planar Bratu–Gelfand problem u″ + λe^u = 0, u′(0) = 0, u(1) = 1,
/// rationalized by u = −n·ln v into n(v′² − v·v″) + λv^{2−n} = 0 with
/// v′(0) = 0, v(1) = 1. The substitution satisfies the pointwise identity
/// n(v′² − v·v″) + λv^{2−n} = v²·(u″ + λe^u).
#[derive(Clone, Debug)]
pub struct BratuProblem {
    pub n: i64,
    /// Left-hand side in v, v′, v″ and the parameter λ.
    pub lhs: Expr,
    pub bcs: Vec<BoundaryCondition>,
}

pub fn transform_bratu(n: i64) -> Result<BratuProblem> {
    if !(1..=2).contains(&n) {
        return Err(Error::InvalidProblem(
            "the exponent transform is rational only for n = 1 or n = 2".to_string(),
        ));
    }
    let text = match n {
        1 => "v'^2 - v*v'' + lambda*v",
        _ => "2*v'^2 - 2*v*v'' + lambda",
    };
    Ok(BratuProblem {
        n,
        lhs: parse_any(text).expect("fixed equation parses"),
        bcs: vec![
            BoundaryCondition {
                order: 1,
                location: BigRational::from_integer(0.into()),
                target: BigRational::from_integer(0.into()),
            },
            BoundaryCondition {
                order: 0,
                location: BigRational::from_integer(1.into()),
                target: BigRational::from_integer(1.into()),
            },
        ],
    })
}

/// The solved boundary-value family: the symbolic bifurcation curve λ(α)
/// together with the verified branch it came from.
#[derive(Clone, Debug)]
pub struct BifurcationCurve {
    pub lambda_of_alpha: Expr,
    pub a1_of_alpha: Expr,
    pub branch: SolutionBranch,
    pub trivial: Option<SolutionBranch>,
    pub outcome: MethodOutcome,
}

pub fn bratu_pipeline() -> Result<BifurcationCurve> {
    let problem = transform_bratu(2)?;
    let outcome = run_expfn(
        &problem.lhs,
        "v",
        &["lambda".to_string()],
        &AnsatzExp::from_ranges(1, 1, 0, 0),
        &problem.bcs,
        &Grid::new(0.0, 1.0, 101),
    )?;
    let branch = outcome
        .branches
        .iter()
        .find(|b| {
            b.assignment
                .value_of("lambda")
                .map(|v| !v.is_num_zero())
                .unwrap_or(false)
        })
        .cloned()
        .ok_or_else(|| Error::InvalidProblem("no coupled branch".to_string()))?;
    let trivial = outcome
        .branches
        .iter()
        .find(|b| b.assignment.value_of("lambda") == Some(&expr::int(0)))
        .cloned();
    let lambda_of_alpha = branch
        .assignment
        .value_of("lambda")
        .cloned()
        .ok_or_else(|| Error::InvalidProblem("missing lambda".to_string()))?;
    let a1_of_alpha = branch
        .assignment
        .value_of("a1")
        .cloned()
        .ok_or_else(|| Error::InvalidProblem("missing a1".to_string()))?;
    Ok(BifurcationCurve {
        lambda_of_alpha,
        a1_of_alpha,
        branch,
        trivial,
        outcome,
    })
}

/// Numeric λ(α).
pub fn lambda_at(curve: &BifurcationCurve, alpha: f64) -> Result<f64> {
    let mut b = BTreeMap::new();
    b.insert("alpha".to_string(), alpha);
    curve.lambda_of_alpha.eval(&b)
}

/// The fold of the bifurcation curve: bisects dλ/dα on (0.5, 2.5) down to
/// an α-interval of 1e−10 and returns (α_c, λ_c). The derivative must
/// change sign across the bracket.
pub fn critical_point(curve: &BifurcationCurve) -> Result<(f64, f64)> {
    let dlambda = curve.lambda_of_alpha.differentiate("alpha");
    let f = |a: f64| -> Result<f64> {
        let mut b = BTreeMap::new();
        b.insert("alpha".to_string(), a);
        dlambda.eval(&b)
    };
    let (mut lo, mut hi) = (0.5f64, 2.5f64);
    if !(f(lo)? > 0.0 && f(hi)? < 0.0) {
        return Err(Error::NoSignChange);
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha_c = 0.5 * (lo + hi);
    Ok((alpha_c, lambda_at(curve, alpha_c)?))
}

/// Residual and boundary error of the solved family at a concrete α.
#[derive(Clone, Debug)]
pub struct BratuCheck {
    pub residual: ResidualReport,
    pub bc_error: f64,
}

pub fn bratu_solution_check(curve: &BifurcationCurve, alpha: f64) -> Result<BratuCheck> {
    let problem = transform_bratu(2)?;
    let profile = &curve.branch.solution.u;
    let mut bindings = BTreeMap::new();
    bindings.insert("alpha".to_string(), alpha);
    let mut lhs = problem.lhs.clone();
    if let Some(lam) = curve.branch.assignment.value_of("lambda") {
        lhs = lhs.substitute_symbol("lambda", lam);
    }
    let bound = bind_prime_profile(&lhs, "v", profile);
    let residual = residual_report(
        &bound,
        &Grid::new(0.0, 1.0, 101),
        &bindings,
        &ResidualOptions::default(),
    )?;
    let mut bc_error: f64 = 0.0;
    for bc in &problem.bcs {
        let mut e = profile.clone();
        for _ in 0..bc.order {
            e = e.differentiate(WAVE_VAR);
        }
        let mut b = bindings.clone();
        use num::ToPrimitive;
        b.insert(
            WAVE_VAR.to_string(),
            bc.location.to_f64().expect("rational location"),
        );
        let got = e.eval(&b)?;
        bc_error = bc_error.max((got - bc.target.to_f64().expect("rational target")).abs());
    }
    Ok(BratuCheck { residual, bc_error })
}
