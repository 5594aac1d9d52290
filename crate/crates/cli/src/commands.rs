use std::fs::{self, File};
use std::io::{self, Write};
use std::path::PathBuf;

use serde_json::json;
use unramified_core::arith::{decimal_string, BigRational};
use unramified_core::checks::CheckOutcome;
use unramified_core::dseries::{DFamily, DSeriesError};
use unramified_core::experiments::{
    phi_reports, root_reports, write_csv, write_jsonl, ExperimentError, ExperimentReport, ModelKind, SuiteConfig,
    Z_GATE,
};
use unramified_core::incidence::verify::verify_divisor_poset;
use unramified_core::incidence::IncidenceError;
use unramified_core::numtheory::{checked_pow, is_prime};
use unramified_core::padic::MAX_FIELD_SIZE;

use crate::{Command, Format, McArgs, Model, Scope};

pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_VERIFICATION: u8 = 2;
pub const EXIT_GATE: u8 = 3;

pub const MAX_DFUNC_N: u64 = 60;
pub const MAX_P: u64 = 1_000_000;
/// Largest n accepted by `verify --scope incidence`.
pub const MAX_INCIDENCE_N: u64 = 1000;
const DECIMALS: usize = 12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{failed} of {total} checks failed")]
    Verification { failed: usize, total: usize },
    #[error("{0} report(s) outside the |z| <= {Z_GATE} gate")]
    Gate(usize),
    #[error(transparent)]
    DSeries(#[from] DSeriesError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification { .. } => EXIT_VERIFICATION,
            CliError::Gate(_) => EXIT_GATE,
            _ => EXIT_VALIDATION,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

pub fn run(cmd: Command) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    match cmd {
        Command::Dfunc { n, format } => dfunc(&mut out, n, format),
        Command::Probs { n, p, format } => probs(&mut out, n, p, format),
        Command::Verify {
            scope,
            from,
            to,
            format,
        } => verify(&mut out, scope, from, to, format),
        Command::Simulate { mc, model } => {
            let kind = match model {
                Model::Haar => ModelKind::Haar,
                Model::Monic => ModelKind::Monic,
                Model::MonicXn => ModelKind::MonicXn,
            };
            let config = suite_config(&mc)?;
            let reports = root_reports(&config, kind)?;
            finish(&mut out, &mc, &format!("simulate-{kind}"), &reports)
        }
        Command::Integrate { mc, region } => {
            let config = suite_config(&mc)?;
            let reports = phi_reports(&config, region.regions())?;
            finish(&mut out, &mc, "integrate", &reports)
        }
    }
}

fn check_prime(p: u64) -> Result<(), CliError> {
    if !is_prime(p) {
        return Err(invalid(format!("p must be prime, got {p}")));
    }
    if p > MAX_P {
        return Err(invalid(format!("p must be at most {MAX_P}, got {p}")));
    }
    Ok(())
}

fn dfunc(out: &mut impl Write, n: u64, format: Format) -> Result<(), CliError> {
    let fam = DFamily::new();
    let d = fam.d(n)?.render();
    let ds = fam.d_star(n)?.render();
    match format {
        Format::Text => {
            writeln!(out, "D_{n} = {d}")?;
            writeln!(out, "D*_{n} = {ds}")?;
        }
        Format::Json => writeln!(out, "{}", json!({ "n": n, "d": d, "d_star": ds }))?,
        Format::Csv => {
            writeln!(out, "n,function,expression")?;
            writeln!(out, "{n},D,\"{d}\"")?;
            writeln!(out, "{n},D*,\"{ds}\"")?;
        }
    }
    Ok(())
}

fn probs(out: &mut impl Write, n: u64, p: u64, format: Format) -> Result<(), CliError> {
    check_prime(p)?;
    let table = DFamily::new().probabilities(n, p)?;
    let rows: [(&str, &BigRational); 3] = [("rho", &table.rho), ("alpha", &table.alpha), ("beta", &table.beta)];
    match format {
        Format::Text => {
            writeln!(out, "n = {n}, p = {p}")?;
            for (name, v) in rows {
                writeln!(out, "{name:<5} = {v}  ~ {}", decimal_string(v, DECIMALS))?;
            }
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("n".into(), json!(n));
            obj.insert("p".into(), json!(p));
            for (name, v) in rows {
                obj.insert(
                    name.into(),
                    json!({
                        "num": v.numer().to_string(),
                        "den": v.denom().to_string(),
                        "decimal": decimal_string(v, DECIMALS),
                    }),
                );
            }
            writeln!(out, "{}", serde_json::Value::Object(obj))?;
        }
        Format::Csv => {
            writeln!(out, "n,p,quantity,num,den,decimal")?;
            for (name, v) in rows {
                writeln!(
                    out,
                    "{n},{p},{name},{},{},{}",
                    v.numer(),
                    v.denom(),
                    decimal_string(v, DECIMALS)
                )?;
            }
        }
    }
    Ok(())
}

fn verify(out: &mut impl Write, scope: Scope, from: u64, to: u64, format: Format) -> Result<(), CliError> {
    if from == 0 || from > to {
        return Err(invalid(format!("empty or invalid range {from}..={to}")));
    }
    let incidence = matches!(scope, Scope::Incidence | Scope::All);
    let dseries = matches!(scope, Scope::Dseries | Scope::All);
    if incidence && to > MAX_INCIDENCE_N {
        return Err(invalid(format!("incidence checks need n <= {MAX_INCIDENCE_N}")));
    }
    if dseries && to > MAX_DFUNC_N {
        return Err(invalid(format!("dseries checks need n <= {MAX_DFUNC_N}")));
    }
    let fam = DFamily::new();
    let mut outcomes: Vec<CheckOutcome> = Vec::new();
    for n in from..=to {
        if incidence {
            outcomes.extend(verify_divisor_poset(n)?);
        }
        if dseries {
            outcomes.extend(fam.verify(n)?);
        }
    }
    match format {
        Format::Text => {
            for o in &outcomes {
                writeln!(out, "{o}")?;
            }
        }
        Format::Json => {
            for o in &outcomes {
                writeln!(out, "{}", serde_json::to_string(o)?)?;
            }
        }
        Format::Csv => {
            writeln!(out, "name,passed,detail")?;
            for o in &outcomes {
                writeln!(
                    out,
                    "\"{}\",{},\"{}\"",
                    o.name.replace('"', "\"\""),
                    o.passed,
                    o.detail.replace('"', "\"\"")
                )?;
            }
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if format == Format::Text {
        writeln!(out, "{} checks, {failed} failed", outcomes.len())?;
    }
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            total: outcomes.len(),
        });
    }
    Ok(())
}

fn suite_config(mc: &McArgs) -> Result<SuiteConfig, CliError> {
    if mc.n == 0 {
        return Err(invalid("n must be positive"));
    }
    if mc.samples == 0 {
        return Err(invalid("samples must be positive"));
    }
    check_prime(mc.p)?;
    if checked_pow(mc.p, mc.n).is_none_or(|q| q > MAX_FIELD_SIZE as u128) {
        return Err(invalid(format!("p^n must be at most {MAX_FIELD_SIZE}")));
    }
    if mc.precision < 4 {
        return Err(invalid("precision must be at least 4"));
    }
    if checked_pow(mc.p, mc.precision).is_none_or(|m| m >= 1u128 << 127) {
        return Err(invalid(format!(
            "p^precision must be below 2^127 (p = {}, precision = {})",
            mc.p, mc.precision
        )));
    }
    let mut config = SuiteConfig::new(mc.n, mc.p, mc.samples, mc.seed);
    config.precision = mc.precision;
    Ok(config)
}

fn output_path(mc: &McArgs, stem: &str) -> Result<Option<PathBuf>, CliError> {
    if let Some(path) = &mc.out {
        return Ok(Some(path.clone()));
    }
    let Some(dir) = &mc.out_dir else {
        return Ok(None);
    };
    fs::create_dir_all(dir)?;
    let ext = if mc.format == Format::Csv { "csv" } else { "jsonl" };
    Ok(Some(
        dir.join(format!("{stem}-n{}-p{}-seed{}.{ext}", mc.n, mc.p, mc.seed)),
    ))
}

fn finish(out: &mut impl Write, mc: &McArgs, stem: &str, reports: &[ExperimentReport]) -> Result<(), CliError> {
    if let Some(path) = output_path(mc, stem)? {
        if mc.format == Format::Csv {
            write_csv(File::create(&path)?, reports)?;
        } else {
            write_jsonl(&path, reports)?;
        }
    }
    match mc.format {
        Format::Text => z_table(out, reports)?,
        Format::Json => {
            for r in reports {
                writeln!(out, "{}", r.to_json_line()?)?;
            }
        }
        Format::Csv => write_csv(&mut *out, reports)?,
    }
    let failed = reports.iter().filter(|r| !r.passes(Z_GATE)).count();
    if failed > 0 {
        return Err(CliError::Gate(failed));
    }
    Ok(())
}

fn z_table(out: &mut impl Write, reports: &[ExperimentReport]) -> io::Result<()> {
    writeln!(
        out,
        "{:<17} {:<8} {:<6} {:>12} {:>11} {:>12} {:>14} {:>8} {:>6}",
        "quantity", "model", "region", "mean", "stderr", "target", "exact", "z", "incon"
    )?;
    for r in reports {
        let z = r.z.map_or("-".to_string(), |z| format!("{z:+.3}"));
        writeln!(
            out,
            "{:<17} {:<8} {:<6} {:>12.8} {:>11.3e} {:>12.8} {:>14} {:>8} {:>6}",
            r.quantity,
            r.model.as_str(),
            r.region.as_str(),
            r.mean,
            r.stderr,
            r.target_f64(),
            format!("{}/{}", r.target_num, r.target_den),
            z,
            r.inconclusive
        )?;
    }
    Ok(())
}
