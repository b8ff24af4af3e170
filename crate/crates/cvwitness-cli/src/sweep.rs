//! Parameter-grid sweeps with deterministic CSV output.
//!
//! Grid points are independent, so they are evaluated in parallel; rows
//! are collected and written in lexicographic grid order (first parameter
//! outermost) regardless of completion order. A point whose constructor
//! fails (for example a squeezing value whose state cannot converge under
//! the cutoff ceiling) still produces a row — numeric cells become `NaN`
//! and the validity flag goes false — so the output always has exactly
//! one row per grid point.

use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use cvwitness_core::{assess, TruncationPolicy};
use rayon::prelude::*;

use crate::families::{evaluate_point, EngineArgs, EngineChoice, Family};
use crate::json::csv_number;
use crate::CliError;

pub const CSV_HEADER: [&str; 15] = [
    "family",
    "param1",
    "param2",
    "n1",
    "n2",
    "delta",
    "c",
    "t",
    "du2",
    "dv2",
    "tau",
    "is_gees",
    "u_squeezed",
    "v_squeezed",
    "valid",
];

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// State family to sweep (tmsv, santos, mincorr, ecs_plus, ecs_minus).
    #[arg(long, value_enum)]
    pub family: Family,
    /// Squeezing parameter r: value or "min:max:points".
    #[arg(long)]
    pub r: Option<String>,
    /// Mean occupation n: value or "min:max:points".
    #[arg(long)]
    pub n: Option<String>,
    /// Correlation parameter x: value or "min:max:points".
    #[arg(long)]
    pub x: Option<String>,
    /// Correlation weight d: value or "min:max:points".
    #[arg(long)]
    pub d: Option<String>,
    /// Amplitude magnitude R: value or "min:max:points".
    #[arg(long)]
    pub radius: Option<String>,
    /// Amplitude phase θ: value or "min:max:points".
    #[arg(long)]
    pub theta: Option<String>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub engine: EngineArgs,
}

/// Parse "value" or "min:max:points" into an inclusive grid.
fn parse_grid(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| {
        CliError::Usage(format!(
            "--{flag}: expected a number or \"min:max:points\", got \"{text}\" ({why})"
        ))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [value] => {
            let v: f64 = value.trim().parse().map_err(|_| bad("not a number"))?;
            Ok(vec![v])
        }
        [min, max, points] => {
            let lo: f64 = min.trim().parse().map_err(|_| bad("bad min"))?;
            let hi: f64 = max.trim().parse().map_err(|_| bad("bad max"))?;
            let count: usize = points.trim().parse().map_err(|_| bad("bad point count"))?;
            if count == 0 {
                return Err(bad("point count must be ≥ 1"));
            }
            if count == 1 {
                if lo != hi {
                    return Err(bad("a single-point range needs min == max"));
                }
                return Ok(vec![lo]);
            }
            let step = (hi - lo) / (count - 1) as f64;
            // Pin the final point so the upper endpoint is hit exactly.
            Ok((0..count)
                .map(|k| {
                    if k == count - 1 {
                        hi
                    } else {
                        lo + step * k as f64
                    }
                })
                .collect())
        }
        _ => Err(bad("wrong number of ':' separators")),
    }
}

/// The two sweepable parameter axes for a family, in column order.
fn grid_axes(args: &SweepArgs) -> Result<(Vec<f64>, Option<Vec<f64>>), CliError> {
    let take = |flag: &str, text: &Option<String>| -> Result<Vec<f64>, CliError> {
        let text = text.as_deref().ok_or_else(|| {
            CliError::Usage(format!(
                "family {} requires --{flag} for sweeping",
                args.family.name()
            ))
        })?;
        parse_grid(flag, text)
    };
    match args.family {
        Family::Tmsv => Ok((take("r", &args.r)?, None)),
        Family::Santos => Ok((take("n", &args.n)?, Some(take("x", &args.x)?))),
        Family::Mincorr => Ok((take("r", &args.r)?, Some(take("d", &args.d)?))),
        Family::EcsPlus | Family::EcsMinus => Ok((
            take("radius", &args.radius)?,
            Some(take("theta", &args.theta)?),
        )),
        Family::CoherentProduct | Family::SeparableMixture => Err(CliError::Usage(format!(
            "family {} is not sweepable (its parameters are not two reals)",
            args.family.name()
        ))),
    }
}

fn check_engine(family: Family, choice: EngineChoice) -> Result<(), CliError> {
    match (family.gaussian_only(), choice) {
        (_, EngineChoice::Auto) | (true, EngineChoice::Gaussian) | (false, EngineChoice::Fock) => {
            Ok(())
        }
        (true, EngineChoice::Fock) => Err(CliError::Usage(format!(
            "family {} has no number-basis constructor; use --engine gaussian or auto",
            family.name()
        ))),
        (false, EngineChoice::Gaussian) => Err(CliError::Usage(format!(
            "family {} is not a Gaussian kernel; use --engine fock or auto",
            family.name()
        ))),
    }
}

fn evaluate_row(
    family: Family,
    p1: f64,
    p2: Option<f64>,
    policy: &TruncationPolicy,
) -> Vec<String> {
    let mut row = Vec::with_capacity(CSV_HEADER.len());
    row.push(family.name().to_string());
    row.push(csv_number(p1));
    row.push(p2.map_or_else(String::new, csv_number));
    match evaluate_point(family, p1, p2, policy) {
        Ok(ev) => {
            let rep = assess(&ev.moments);
            let m = &ev.moments;
            for value in [
                m.n1,
                m.n2,
                rep.delta,
                rep.c,
                rep.t_expectation,
                rep.du2,
                rep.dv2,
                rep.tau,
            ] {
                row.push(csv_number(value));
            }
            row.push(rep.is_gees.to_string());
            row.push(rep.u_squeezed.to_string());
            row.push(rep.v_squeezed.to_string());
            row.push(ev.valid.to_string());
        }
        Err(_) => {
            for _ in 0..8 {
                row.push("NaN".into());
            }
            for _ in 0..4 {
                row.push("false".into());
            }
        }
    }
    row
}

pub fn run(args: &SweepArgs) -> Result<(), CliError> {
    check_engine(args.family, args.engine.engine)?;
    let policy = TruncationPolicy::new(args.engine.tail_tol, args.engine.max_cutoff)?;
    let (axis1, axis2) = grid_axes(args)?;

    let points: Vec<(f64, Option<f64>)> = match &axis2 {
        Some(axis2) => axis1
            .iter()
            .flat_map(|&p1| axis2.iter().map(move |&p2| (p1, Some(p2))))
            .collect(),
        None => axis1.iter().map(|&p1| (p1, None)).collect(),
    };

    let rows: Vec<Vec<String>> = points
        .par_iter()
        .map(|&(p1, p2)| evaluate_row(args.family, p1, p2, &policy))
        .collect();

    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(CSV_HEADER)?;
    for row in &rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}
