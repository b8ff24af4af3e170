//! State-family resolution: turn command-line parameters into a
//! [`MomentSet`] plus engine metadata, routing each family to the engine
//! that supports it.

use clap::{Args, ValueEnum};
use cvwitness_core::{
    coherent_product, entangled_coherent, minimum_correlation_form, random_separable, santos_form,
    two_mode_squeezed_vacuum, Complex64 as C64, EcsSign, MomentSet, TruncationPolicy,
};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Two-mode squeezed vacuum (r).
    Tmsv,
    /// Product of coherent states (alpha1, alpha2).
    #[value(name = "coherent_product", alias = "coherent-product")]
    CoherentProduct,
    /// Even entangled coherent state (alpha, or radius/theta).
    #[value(name = "ecs_plus", alias = "ecs-plus")]
    EcsPlus,
    /// Odd entangled coherent state (alpha, or radius/theta).
    #[value(name = "ecs_minus", alias = "ecs-minus")]
    EcsMinus,
    /// Equal-occupation correlated Gaussian kernel (n, x).
    Santos,
    /// Minimum-correlation Gaussian kernel (r, d).
    Mincorr,
    /// Seeded random separable mixture (seed, branches).
    #[value(name = "separable_mixture", alias = "separable-mixture")]
    SeparableMixture,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Tmsv => "tmsv",
            Family::CoherentProduct => "coherent_product",
            Family::EcsPlus => "ecs_plus",
            Family::EcsMinus => "ecs_minus",
            Family::Santos => "santos",
            Family::Mincorr => "mincorr",
            Family::SeparableMixture => "separable_mixture",
        }
    }

    /// Gaussian-kernel families go to the moment-inversion engine; every
    /// other family needs the truncated number basis.
    pub fn gaussian_only(self) -> bool {
        matches!(self, Family::Santos | Family::Mincorr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    /// Pick the engine from the family.
    Auto,
    /// Truncated number-basis states.
    Fock,
    /// Gaussian Q-kernel moment inversion.
    Gaussian,
}

/// Shared engine knobs.
#[derive(Debug, Args)]
pub struct EngineArgs {
    /// Moment engine; `auto` routes by family.
    #[arg(long, value_enum, default_value_t = EngineChoice::Auto)]
    pub engine: EngineChoice,
    /// Tail-mass tolerance for adaptive cutoff growth.
    #[arg(long = "tail-tol", default_value_t = 1e-10)]
    pub tail_tol: f64,
    /// Hard ceiling on the per-mode photon cutoff.
    #[arg(long = "max-cutoff", default_value_t = 120)]
    pub max_cutoff: usize,
}

/// Family parameters for `analyze`; each family reads its own subset.
#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Squeezing parameter r (tmsv, mincorr).
    #[arg(long)]
    pub r: Option<f64>,
    /// Mean occupation n (santos).
    #[arg(long)]
    pub n: Option<f64>,
    /// Correlation parameter x (santos).
    #[arg(long)]
    pub x: Option<f64>,
    /// Correlation weight d (mincorr).
    #[arg(long)]
    pub d: Option<f64>,
    /// Coherent amplitude "re[,im]" (ecs families).
    #[arg(long)]
    pub alpha: Option<String>,
    /// First-mode amplitude "re[,im]" (coherent_product).
    #[arg(long)]
    pub alpha1: Option<String>,
    /// Second-mode amplitude "re[,im]" (coherent_product).
    #[arg(long)]
    pub alpha2: Option<String>,
    /// Amplitude magnitude R (ecs families, polar form).
    #[arg(long)]
    pub radius: Option<f64>,
    /// Amplitude phase θ in radians (ecs families, polar form).
    #[arg(long)]
    pub theta: Option<f64>,
    /// Mixture seed (separable_mixture).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Mixture branch count (separable_mixture).
    #[arg(long)]
    pub branches: Option<usize>,
    /// Fixed per-mode cutoff (separable_mixture).
    #[arg(long, default_value_t = 18)]
    pub cutoff: usize,
}

/// A parameter as it appears in the JSON `params` object.
#[derive(Debug, Clone, Copy)]
pub enum ParamValue {
    Real(f64),
    Int(u64),
    Complex(C64),
}

/// Everything the report document needs besides the assessment itself.
#[derive(Debug)]
pub struct Evaluated {
    pub family: Family,
    pub params: Vec<(&'static str, ParamValue)>,
    pub moments: MomentSet,
    pub engine: &'static str,
    pub cutoff: Option<usize>,
    pub tail_mass: Option<f64>,
    pub valid: bool,
}

pub fn parse_complex(text: &str) -> Result<C64, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = || CliError::Usage(format!("expected \"re\" or \"re,im\", got \"{text}\""));
    match parts.as_slice() {
        [re] => Ok(C64::new(re.trim().parse().map_err(|_| bad())?, 0.0)),
        [re, im] => Ok(C64::new(
            re.trim().parse().map_err(|_| bad())?,
            im.trim().parse().map_err(|_| bad())?,
        )),
        _ => Err(bad()),
    }
}

fn require(value: Option<f64>, flag: &str, family: Family) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("family {} requires --{flag}", family.name())))
}

fn check_engine(family: Family, choice: EngineChoice) -> Result<&'static str, CliError> {
    match (family.gaussian_only(), choice) {
        (true, EngineChoice::Auto | EngineChoice::Gaussian) => Ok("gaussian"),
        (false, EngineChoice::Auto | EngineChoice::Fock) => Ok("fock"),
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

/// Resolve an `analyze` invocation into moments and metadata.
pub fn evaluate_args(
    family: Family,
    p: &ParamArgs,
    choice: EngineChoice,
    policy: &TruncationPolicy,
) -> Result<Evaluated, CliError> {
    check_engine(family, choice)?;
    match family {
        Family::Tmsv => eval_tmsv(require(p.r, "r", family)?, policy),
        Family::Santos => eval_santos(require(p.n, "n", family)?, require(p.x, "x", family)?),
        Family::Mincorr => eval_mincorr(require(p.r, "r", family)?, require(p.d, "d", family)?),
        Family::EcsPlus | Family::EcsMinus => {
            let alpha = ecs_alpha(family, p)?;
            eval_ecs(family, alpha, policy)
        }
        Family::CoherentProduct => {
            let a1 = p.alpha1.as_deref().ok_or_else(|| {
                CliError::Usage("family coherent_product requires --alpha1".into())
            })?;
            let a2 = p.alpha2.as_deref().ok_or_else(|| {
                CliError::Usage("family coherent_product requires --alpha2".into())
            })?;
            eval_coherent(parse_complex(a1)?, parse_complex(a2)?, policy)
        }
        Family::SeparableMixture => {
            let seed = p.seed.ok_or_else(|| {
                CliError::Usage("family separable_mixture requires --seed".into())
            })?;
            let branches = p.branches.ok_or_else(|| {
                CliError::Usage("family separable_mixture requires --branches".into())
            })?;
            eval_separable(seed, branches, p.cutoff)
        }
    }
}

fn ecs_alpha(family: Family, p: &ParamArgs) -> Result<C64, CliError> {
    match (&p.alpha, p.radius, p.theta) {
        (Some(text), None, None) => parse_complex(text),
        (None, Some(radius), theta) => {
            if radius < 0.0 {
                return Err(CliError::Usage(format!(
                    "--radius must be ≥ 0, got {radius}"
                )));
            }
            Ok(C64::from_polar(radius, theta.unwrap_or(0.0)))
        }
        (Some(_), Some(_) | None, _) => Err(CliError::Usage(format!(
            "family {} takes --alpha or --radius/--theta, not both",
            family.name()
        ))),
        (None, None, _) => Err(CliError::Usage(format!(
            "family {} requires --alpha or --radius [--theta]",
            family.name()
        ))),
    }
}

/// Resolve one sweep grid point; `p2` is absent for one-parameter
/// families.
pub fn evaluate_point(
    family: Family,
    p1: f64,
    p2: Option<f64>,
    policy: &TruncationPolicy,
) -> Result<Evaluated, CliError> {
    let second = || {
        p2.ok_or_else(|| CliError::Usage(format!("family {} needs two parameters", family.name())))
    };
    match family {
        Family::Tmsv => eval_tmsv(p1, policy),
        Family::Santos => eval_santos(p1, second()?),
        Family::Mincorr => eval_mincorr(p1, second()?),
        Family::EcsPlus | Family::EcsMinus => {
            eval_ecs(family, C64::from_polar(p1, second()?), policy)
        }
        Family::CoherentProduct | Family::SeparableMixture => Err(CliError::Usage(format!(
            "family {} is not sweepable (its parameters are not two reals)",
            family.name()
        ))),
    }
}

fn eval_tmsv(r: f64, policy: &TruncationPolicy) -> Result<Evaluated, CliError> {
    let s = two_mode_squeezed_vacuum(r, policy)?;
    Ok(Evaluated {
        family: Family::Tmsv,
        params: vec![("r", ParamValue::Real(r))],
        moments: s.extract_moments(),
        engine: "fock",
        cutoff: Some(s.cutoff()),
        tail_mass: Some(s.tail_mass()),
        valid: true,
    })
}

fn eval_santos(n: f64, x: f64) -> Result<Evaluated, CliError> {
    let form = santos_form(n, x)?;
    Ok(Evaluated {
        family: Family::Santos,
        params: vec![("n", ParamValue::Real(n)), ("x", ParamValue::Real(x))],
        moments: form.moment_set(),
        engine: "gaussian",
        cutoff: None,
        tail_mass: None,
        valid: form.is_physical(),
    })
}

fn eval_mincorr(r: f64, d: f64) -> Result<Evaluated, CliError> {
    let form = minimum_correlation_form(r, d)?;
    Ok(Evaluated {
        family: Family::Mincorr,
        params: vec![("r", ParamValue::Real(r)), ("d", ParamValue::Real(d))],
        moments: form.moment_set(),
        engine: "gaussian",
        cutoff: None,
        tail_mass: None,
        valid: form.is_physical(),
    })
}

fn eval_ecs(family: Family, alpha: C64, policy: &TruncationPolicy) -> Result<Evaluated, CliError> {
    let sign = if family == Family::EcsPlus {
        EcsSign::Plus
    } else {
        EcsSign::Minus
    };
    let s = entangled_coherent(sign, alpha, policy)?;
    Ok(Evaluated {
        family,
        params: vec![("alpha", ParamValue::Complex(alpha))],
        moments: s.extract_moments(),
        engine: "fock",
        cutoff: Some(s.cutoff()),
        tail_mass: Some(s.tail_mass()),
        valid: true,
    })
}

fn eval_coherent(a1: C64, a2: C64, policy: &TruncationPolicy) -> Result<Evaluated, CliError> {
    let s = coherent_product(a1, a2, policy)?;
    Ok(Evaluated {
        family: Family::CoherentProduct,
        params: vec![
            ("alpha1", ParamValue::Complex(a1)),
            ("alpha2", ParamValue::Complex(a2)),
        ],
        moments: s.extract_moments(),
        engine: "fock",
        cutoff: Some(s.cutoff()),
        tail_mass: Some(s.tail_mass()),
        valid: true,
    })
}

fn eval_separable(seed: u64, branches: usize, cutoff: usize) -> Result<Evaluated, CliError> {
    if branches == 0 {
        return Err(CliError::Usage("--branches must be ≥ 1".into()));
    }
    let s = random_separable(seed, cutoff, branches);
    Ok(Evaluated {
        family: Family::SeparableMixture,
        params: vec![
            ("seed", ParamValue::Int(seed)),
            ("branches", ParamValue::Int(branches as u64)),
            ("cutoff", ParamValue::Int(cutoff as u64)),
        ],
        moments: s.extract_moments(),
        engine: "fock",
        cutoff: Some(s.cutoff()),
        tail_mass: Some(s.tail_mass()),
        valid: true,
    })
}
