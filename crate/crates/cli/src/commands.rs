//! The three subcommands. Each returns its report body and exit code.

use num_traits::ToPrimitive;
use serde_json::{json, Value};
use sublevel::asym::{asymptotic_profile, compare_profiles, lp_cross_check, newton_data, Exponents};
use sublevel::empirics::{
    default_schedule, fit_exponents, sweep, ExponentFit, Kappa, SweepConfig, SweepKind, SweepResult, VolumeMethod,
};
use sublevel::json::rational_to_json;
use sublevel::mgcheck::{
    all_passed, check_mg, estimate_constants, perturbation_probe, EpsilonChoice, EstimateConfig, MgConfig, MgStatus,
    MgVerdict, ProbeConfig,
};
use sublevel::Rational;

use crate::error::{CliError, EXIT_MG_VIOLATION, EXIT_OK};
use crate::report::MapInput;

/// Settings shared by the empirics runs of `analyze` and `verify`.
#[derive(Clone, Debug)]
pub struct EmpiricsSettings {
    pub seed: u64,
    pub method: VolumeMethod,
    pub max_box: i64,
    pub r_max: Option<f64>,
}

fn mg_config(seed: u64, budget: Option<u64>) -> MgConfig {
    let mut config = MgConfig {
        seed,
        ..MgConfig::default()
    };
    if let Some(b) = budget {
        config.max_evals_per_start = b;
    }
    config
}

fn verdicts_json(verdicts: &[MgVerdict]) -> Value {
    let worst = verdicts.iter().map(|v| v.status).max().unwrap_or(MgStatus::Passed);
    json!({
        "status": worst.as_str(),
        "condition_holds": all_passed(verdicts),
        "verdicts": verdicts.iter().map(MgVerdict::to_json).collect::<Vec<_>>(),
    })
}

fn estimate_json(input: &MapInput, seed: u64) -> Value {
    let config = EstimateConfig {
        seed,
        ..EstimateConfig::default()
    };
    match estimate_constants(&input.map, &config) {
        Ok(e) => e.to_json(),
        Err(e) => json!({"error": e.to_string()}),
    }
}

fn predicted(kind: SweepKind, input: &MapInput) -> Result<Option<Exponents<Rational>>, CliError> {
    let profile = asymptotic_profile(&input.map)?;
    Ok(match kind {
        SweepKind::LatticeCount => profile.lattice,
        SweepKind::Volume => profile.volume,
    })
}

fn sweep_config(kind: SweepKind, settings: &EmpiricsSettings) -> SweepConfig {
    SweepConfig {
        kind,
        method: settings.method,
        max_box: settings.max_box,
        seed: settings.seed,
    }
}

fn fit_json(fit: Result<ExponentFit, sublevel::empirics::EmpiricsError>) -> Value {
    match fit {
        Ok(f) => f.to_json(),
        Err(e) => json!({"error": e.to_string()}),
    }
}

struct EmpiricalRun {
    sweep: SweepResult,
    fixed: Result<ExponentFit, sublevel::empirics::EmpiricsError>,
    free: Result<ExponentFit, sublevel::empirics::EmpiricsError>,
}

fn run_empirics(
    input: &MapInput,
    kind: SweepKind,
    exponents: &Exponents<Rational>,
    settings: &EmpiricsSettings,
) -> Result<EmpiricalRun, CliError> {
    let schedule = default_schedule(kind, settings.r_max.unwrap_or(f64::INFINITY));
    let result = sweep(&input.map, &schedule, &sweep_config(kind, settings))?;
    let kappa = Kappa::Fixed(exponents.log_exponent as i64);
    Ok(EmpiricalRun {
        fixed: fit_exponents(&result, kappa),
        free: fit_exponents(&result, Kappa::Free),
        sweep: result,
    })
}

fn prediction_json(e: &Exponents<Rational>) -> Value {
    json!({
        "theta": rational_to_json(&e.theta),
        "theta_float": e.theta.to_f64(),
        "kappa": e.log_exponent,
    })
}

fn empirics_json(input: &MapInput, settings: &EmpiricsSettings) -> Result<Value, CliError> {
    let mut out = serde_json::Map::new();
    for (key, kind) in [("lattice", SweepKind::LatticeCount), ("volume", SweepKind::Volume)] {
        let value = match predicted(kind, input)? {
            None => Value::Null,
            Some(e) => match run_empirics(input, kind, &e, settings) {
                Ok(run) => json!({
                    "predicted": prediction_json(&e),
                    "sweep": run.sweep.to_json(),
                    "fit_fixed_kappa": fit_json(run.fixed),
                    "fit_free_kappa": fit_json(run.free),
                }),
                Err(CliError::Unsupported(msg)) => json!({"error": msg}),
                Err(other) => return Err(other),
            },
        };
        out.insert(key.into(), value);
    }
    Ok(Value::Object(out))
}

/// Newton data, both profiles, the LP cross-check and the MG search for one map.
pub fn analyze_one(
    input: &MapInput,
    seed: u64,
    budget: Option<u64>,
    empirics: Option<&EmpiricsSettings>,
) -> Result<Value, CliError> {
    let data = newton_data(&input.map)?;
    let profile = asymptotic_profile(&input.map)?;
    let profiles_agree = compare_profiles(&profile)?;
    let cross = lp_cross_check(&input.map)?;
    let verdicts = check_mg(&input.map, &mg_config(seed, budget))?;
    let mut mg = verdicts_json(&verdicts);
    mg["estimate"] = if all_passed(&verdicts) {
        estimate_json(input, seed)
    } else {
        Value::Null
    };
    Ok(json!({
        "input": input.to_json(),
        "newton": {"gamma": data.gamma.to_json(), "closure": data.closure.to_json()},
        "profile": profile.to_json(),
        "profiles_agree": profiles_agree,
        "lp_cross_check": cross.to_json(),
        "mg": mg,
        "empirics": match empirics {
            Some(settings) => empirics_json(input, settings)?,
            None => Value::Null,
        },
    }))
}

pub fn analyze(
    inputs: &[MapInput],
    preset: Option<&str>,
    seed: u64,
    budget: Option<u64>,
    empirics: Option<&EmpiricsSettings>,
) -> Result<(Value, i32), CliError> {
    let reports = inputs
        .iter()
        .map(|i| analyze_one(i, seed, budget, empirics))
        .collect::<Result<Vec<_>, _>>()?;
    let body = match preset {
        Some(name) => json!({"preset": name, "reports": reports}),
        None => reports.into_iter().next().expect("one input"),
    };
    Ok((body, EXIT_OK))
}

pub struct ProbeRequest {
    pub trials: usize,
    pub epsilon: EpsilonChoice,
}

pub fn check_mg_one(
    input: &MapInput,
    seed: u64,
    budget: Option<u64>,
    probe: Option<&ProbeRequest>,
) -> Result<(Value, bool), CliError> {
    let config = mg_config(seed, budget);
    let verdicts = check_mg(&input.map, &config)?;
    let certified = verdicts.iter().any(|v| v.status == MgStatus::ViolationCertified);
    let mut report = json!({"input": input.to_json(), "mg": verdicts_json(&verdicts)});
    report["mg"]["estimate"] = if all_passed(&verdicts) {
        estimate_json(input, seed)
    } else {
        Value::Null
    };
    if let Some(request) = probe {
        report["perturbation"] = if all_passed(&verdicts) {
            let probe_config = ProbeConfig {
                trials: request.trials,
                epsilon: request.epsilon,
                seed,
                mg: config,
                estimate: EstimateConfig {
                    seed,
                    ..EstimateConfig::default()
                },
            };
            perturbation_probe(&input.map, &probe_config)?.to_json()
        } else {
            json!({"skipped": "the map did not pass the MG check"})
        };
    }
    Ok((report, certified))
}

pub fn check_mg_command(
    inputs: &[MapInput],
    preset: Option<&str>,
    seed: u64,
    budget: Option<u64>,
    probe: Option<&ProbeRequest>,
) -> Result<(Value, i32), CliError> {
    let mut reports = Vec::new();
    let mut violation = false;
    for input in inputs {
        let (report, certified) = check_mg_one(input, seed, budget, probe)?;
        violation |= certified;
        reports.push(report);
    }
    let body = match preset {
        Some(name) => json!({"preset": name, "reports": reports}),
        None => reports.into_iter().next().expect("one input"),
    };
    Ok((body, if violation { EXIT_MG_VIOLATION } else { EXIT_OK }))
}

/// Result of `verify`: the report, a human-readable table and the raw sweep.
pub struct Verification {
    pub report: Value,
    pub table: String,
    pub sweep: SweepResult,
}

/// Sweep and fit one kind, and compare with the prediction.
pub fn verify(input: &MapInput, kind: SweepKind, settings: &EmpiricsSettings) -> Result<Verification, CliError> {
    let exponents = predicted(kind, input)?.ok_or_else(|| {
        CliError::Unsupported(format!(
            "{} is infinite for this map, nothing to verify",
            match kind {
                SweepKind::LatticeCount => "the lattice count",
                SweepKind::Volume => "the volume",
            }
        ))
    })?;
    let run = run_empirics(input, kind, &exponents, settings)?;
    let fixed = run.fixed.clone().map_err(CliError::from)?;
    let theta = exponents.theta.to_f64().unwrap_or(f64::NAN);
    let mut table = String::new();
    table.push_str(&format!("{:<22}{:>14}{:>14}\n", "quantity", "predicted", "fitted"));
    table.push_str(&format!(
        "{:<22}{:>14.6}{:>14.6}\n",
        "theta (kappa fixed)", theta, fixed.theta_hat
    ));
    table.push_str(&format!(
        "{:<22}{:>14}{:>14}\n",
        "kappa (fixed)", exponents.log_exponent, exponents.log_exponent
    ));
    match &run.free {
        Ok(free) => {
            table.push_str(&format!(
                "{:<22}{:>14.6}{:>14.6}\n",
                "theta (kappa free)", theta, free.theta_hat
            ));
            table.push_str(&format!(
                "{:<22}{:>14}{:>14.6}\n",
                "kappa (free)", exponents.log_exponent, free.kappa_hat
            ));
        }
        Err(e) => table.push_str(&format!("free fit failed: {e}\n")),
    }
    let method = match kind {
        SweepKind::LatticeCount => Value::Null,
        SweepKind::Volume => json!(settings.method.name()),
    };
    let report = json!({
        "input": input.to_json(),
        "kind": kind.name(),
        "method": method,
        "predicted": prediction_json(&exponents),
        "sweep": run.sweep.to_json(),
        "fit_fixed_kappa": fixed.to_json(),
        "fit_free_kappa": fit_json(run.free),
    });
    Ok(Verification {
        report,
        table,
        sweep: run.sweep,
    })
}
