//! Oracle verification suite: every closed-form prediction in the core
//! crate compared against the engine that should reproduce it, one line
//! per check, nonzero exit when anything drifts.

use std::f64::consts::FRAC_PI_2;

use clap::Args;
use cvwitness_core::{
    assess, oracles, q_moments, t_expectation, two_mode_squeezed_vacuum, Complex64 as C64, EcsSign,
    EprScale, MomentSet, TruncationPolicy,
};
use serde_json::{Map, Value};

use crate::json::sig12;
use crate::CliError;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Override every check tolerance with one value.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Emit the summary as JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

struct Check {
    name: String,
    source: &'static str,
    engine: f64,
    reference: f64,
    tol: f64,
    caveat: Option<&'static str>,
}

impl Check {
    fn abs_diff(&self) -> f64 {
        (self.engine - self.reference).abs()
    }

    fn pass(&self) -> bool {
        self.abs_diff() <= self.tol
    }
}

fn flag(value: bool) -> f64 {
    if value {
        1.0
    } else {
        0.0
    }
}

/// Build the full check list. Boolean verdicts are encoded as 0/1 so the
/// same |Δ| ≤ tol machinery covers them.
fn build_checks() -> Result<Vec<Check>, CliError> {
    let policy = TruncationPolicy::default();
    let mut checks = Vec::new();

    // Squeezed-vacuum concurrence, number-basis engine vs closed form.
    for r in [0.2, 0.5, 1.0] {
        let oracle = oracles::tmsv_tau(r);
        let state = two_mode_squeezed_vacuum(r, &policy)?;
        let report = assess(&state.extract_moments());
        checks.push(Check {
            name: format!("squeezed-vacuum concurrence r={r}"),
            source: oracle.source,
            engine: report.tau,
            reference: oracle.value,
            tol: 1e-6,
            caveat: oracle.caveat,
        });
    }

    // Cross-engine consistency: the number-basis moments of the squeezed
    // vacuum must assess identically to hand-written closed-form moments.
    {
        let r = 0.5_f64;
        let state = two_mode_squeezed_vacuum(r, &policy)?;
        let fock_report = assess(&state.extract_moments());
        let closed = MomentSet {
            n1: r.sinh().powi(2),
            n2: r.sinh().powi(2),
            cross: C64::new(r.sinh() * r.cosh(), 0.0),
            ..MomentSet::vacuum()
        };
        let closed_report = assess(&closed);
        checks.push(Check {
            name: format!("cross-engine test operator r={r}"),
            source: "engine-cross-check",
            engine: fock_report.t_expectation,
            reference: closed_report.t_expectation,
            tol: 1e-6,
            caveat: None,
        });
        checks.push(Check {
            name: format!("cross-engine concurrence r={r}"),
            source: "engine-cross-check",
            engine: fock_report.tau,
            reference: closed_report.tau,
            tol: 1e-6,
            caveat: None,
        });
    }

    // Equal-occupation kernel: test-operator values and the verdict
    // window edges.
    {
        let n = 1.0;
        for x in [0.6, 0.5] {
            let oracle = oracles::santos_t(n, x);
            let form = cvwitness_core::santos_form(n, x)?;
            let report = assess(&form.moment_set());
            checks.push(Check {
                name: format!("equal-occupation test operator n={n} x={x}"),
                source: oracle.source,
                engine: report.t_expectation,
                reference: oracle.value,
                tol: 1e-9,
                caveat: oracle.caveat,
            });
        }
        let (lo, hi) = oracles::santos_window(n);
        for (x, expect_gees) in [(lo - 1e-3, false), (lo + 1e-3, true)] {
            let form = cvwitness_core::santos_form(n, x)?;
            let report = assess(&form.moment_set());
            checks.push(Check {
                name: format!("equal-occupation verdict n={n} x={x:.3}"),
                source: "equal-occupation-window",
                engine: flag(report.is_gees),
                reference: flag(expect_gees),
                tol: 0.5,
                caveat: None,
            });
        }
        for (x, expect_physical) in [(hi, true), (0.72, false)] {
            let form = cvwitness_core::santos_form(n, x)?;
            checks.push(Check {
                name: format!("equal-occupation physicality n={n} x={x:.4}"),
                source: "equal-occupation-window",
                engine: flag(form.is_physical()),
                reference: flag(expect_physical),
                tol: 0.5,
                caveat: None,
            });
        }
    }

    // Minimum-correlation kernel at (r=1, d=0.3): occupations, the
    // unit-scale and optimal-scale test operators, and the published
    // form, which matches in sign only.
    {
        let (r, d) = (1.0_f64, 0.3_f64);
        let form = cvwitness_core::minimum_correlation_form(r, d)?;
        let m = form.moment_set();
        let gamma = r.tanh();
        let det = 1.0 - 2.0 * d;
        for (label, engine, reference) in [
            ("occupation n1", m.n1, (1.0 - d) / (gamma * det) - 1.0),
            ("occupation n2", m.n2, (1.0 - d) * gamma / det - 1.0),
            ("correlation delta", m.delta(), -2.0 * d / det),
        ] {
            checks.push(Check {
                name: format!("minimum-correlation {label} r={r} d={d}"),
                source: "minimum-correlation-moments",
                engine,
                reference,
                tol: 1e-9,
                caveat: None,
            });
        }
        let unit = oracles::mincorr_t_c1(r, d);
        let engine_unit = t_expectation(&m, EprScale::new(1.0)?);
        checks.push(Check {
            name: format!("minimum-correlation unit-scale test r={r} d={d}"),
            source: unit.source,
            engine: engine_unit,
            reference: unit.value,
            tol: 1e-9,
            caveat: unit.caveat,
        });
        let report = assess(&m);
        let optimal_reference = 2.0 * (m.n1 * m.n2).sqrt() - m.delta().abs();
        checks.push(Check {
            name: format!("minimum-correlation optimal-scale test r={r} d={d}"),
            source: "minimum-correlation-optimal-scale",
            engine: report.t_expectation,
            reference: optimal_reference,
            tol: 1e-9,
            caveat: None,
        });
        let published = oracles::mincorr_t_paper(r, d);
        let sign_only_agreement = published.value < 0.0
            && engine_unit > 0.0
            && (engine_unit + published.value).abs() <= 1e-9;
        checks.push(Check {
            name: format!("minimum-correlation published form r={r} d={d}"),
            source: published.source,
            engine: flag(sign_only_agreement),
            reference: 1.0,
            tol: 0.5,
            caveat: published.caveat,
        });
    }

    // Entangled coherent states at (R=1, θ=π/2): both branches against
    // their closed forms, plus even/odd orthogonality.
    {
        let (radius, theta) = (1.0, FRAC_PI_2);
        let alpha = C64::from_polar(radius, theta);
        let plus = entangled(EcsSign::Plus, alpha, &policy)?;
        let minus = entangled(EcsSign::Minus, alpha, &policy)?;
        for (label, sign, state) in [
            ("even", EcsSign::Plus, &plus),
            ("odd", EcsSign::Minus, &minus),
        ] {
            let oracle = oracles::ecs_t(sign, radius, theta)?;
            let report = assess(&state.extract_moments());
            checks.push(Check {
                name: format!("entangled-coherent {label} test operator R={radius} θ=π/2"),
                source: oracle.source,
                engine: report.t_expectation,
                reference: oracle.value,
                tol: 1e-6,
                caveat: oracle.caveat,
            });
        }
        let cutoff = plus.cutoff().max(minus.cutoff());
        let overlap = plus
            .embedded(cutoff)?
            .overlap(&minus.embedded(cutoff)?)?
            .norm();
        checks.push(Check {
            name: "entangled-coherent branch orthogonality".into(),
            source: "even-odd-branch-overlap",
            engine: overlap,
            reference: 0.0,
            tol: 1e-12,
            caveat: None,
        });
    }

    // Kernel normalization recomputed by brute-force phase-space
    // quadrature — the independent check on the inversion formulas.
    {
        let santos = cvwitness_core::santos_form(1.0, 0.6)?;
        checks.push(Check {
            name: "quadrature normalization, equal-occupation kernel".into(),
            source: "q-kernel-normalization",
            engine: q_moments(&santos, 7.0, 40).norm,
            reference: 1.0,
            tol: 1e-6,
            caveat: None,
        });
        let mincorr = cvwitness_core::minimum_correlation_form(1.0, 0.3)?;
        checks.push(Check {
            name: "quadrature normalization, minimum-correlation kernel".into(),
            source: "q-kernel-normalization",
            engine: q_moments(&mincorr, 7.5, 40).norm,
            reference: 1.0,
            tol: 1e-6,
            caveat: None,
        });
    }

    Ok(checks)
}

fn entangled(
    sign: EcsSign,
    alpha: C64,
    policy: &TruncationPolicy,
) -> Result<cvwitness_core::TwoModeState, CliError> {
    let state = cvwitness_core::entangled_coherent(sign, alpha, policy)?;
    // The closed forms assume a deep basis; grow past the adaptive cutoff.
    let cutoff = state.cutoff().max(32);
    Ok(state.embedded(cutoff)?)
}

/// Run the suite; returns whether every check passed.
pub fn run(args: &VerifyArgs) -> Result<bool, CliError> {
    let mut checks = build_checks()?;
    if let Some(tol) = args.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Usage(format!(
                "--tol must be positive, got {tol}"
            )));
        }
        for check in &mut checks {
            check.tol = tol;
        }
    }
    let passed = checks.iter().filter(|c| c.pass()).count();
    let failed = checks.len() - passed;

    if args.json {
        let mut doc = Map::new();
        doc.insert(
            "checks".into(),
            Value::Array(checks.iter().map(check_value).collect()),
        );
        doc.insert("passed".into(), Value::Number(passed.into()));
        doc.insert("failed".into(), Value::Number(failed.into()));
        println!("{}", Value::Object(doc));
    } else {
        for check in &checks {
            let status = if check.pass() { "PASS" } else { "FAIL" };
            let mut line = format!(
                "{status}  {:<52} engine={:<24} reference={:<24} |Δ|={:.3e} tol={:.1e}  [{}]",
                check.name,
                format!("{:.12e}", check.engine),
                format!("{:.12e}", check.reference),
                check.abs_diff(),
                check.tol,
                check.source,
            );
            if let Some(caveat) = check.caveat {
                line.push_str(&format!("  ({caveat})"));
            }
            println!("{line}");
        }
        println!("verify: {passed}/{} checks passed", checks.len());
    }
    Ok(failed == 0)
}

fn check_value(check: &Check) -> Value {
    let mut out = Map::new();
    out.insert("name".into(), Value::String(check.name.clone()));
    out.insert("source".into(), Value::String(check.source.into()));
    out.insert("engine".into(), sig12(check.engine));
    out.insert("reference".into(), sig12(check.reference));
    out.insert("abs_diff".into(), sig12(check.abs_diff()));
    out.insert("tolerance".into(), sig12(check.tol));
    out.insert("pass".into(), Value::Bool(check.pass()));
    out.insert(
        "caveat".into(),
        check
            .caveat
            .map_or(Value::Null, |c| Value::String(c.into())),
    );
    Value::Object(out)
}
