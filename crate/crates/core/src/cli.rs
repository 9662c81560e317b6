//! Command dispatch and reports for the `mcprod` binary.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cdga::{CdgaError, CohomologyClass, Element, FreeCDGA};
use crate::dgla::MCProductData;
use crate::fibrations::{
    adjoin_odd, annihilates, descend, validate_fibration, AlgebraicFibration, FibrationError,
    DEFAULT_MAX_ADJUNCTIONS,
};
use crate::files::{read_text, DglaFile, FileError, ModelFile, SystemFile};
use crate::linalg::fmt_rational;
use crate::parse::parse_element;
use crate::products::{massey_product, mc_product, DefiningSystem, MasseyResult, ProductError};

/// Environment variable overriding the TA adjunction cap.
pub const MAX_ITER_VAR: &str = "MCPROD_MAX_ITER";

#[derive(Debug, Parser)]
#[command(name = "mcprod", version, about = "Maurer-Cartan higher products over free CDGAs")]
pub struct Cli {
    /// Emit the machine-readable report.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a model or DGLA file.
    Validate { file: PathBuf },
    /// Cohomology of a model in one degree.
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        degree: u32,
    },
    /// Massey product of the classes of the given cocycles.
    Massey {
        file: PathBuf,
        #[arg(required = true, num_args = 2..)]
        exprs: Vec<String>,
    },
    /// MC higher product of a defining system.
    McProduct {
        file: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        system: PathBuf,
    },
    /// Decide whether a class lies in the annihilation ideal.
    Annihilate {
        file: PathBuf,
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        max_degree: u32,
    },
    /// Move an MC product along A ↪ A[x], dx = e. The system file is over A[x].
    Descend {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        euler: String,
        #[arg(long)]
        x_degree: u32,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        system: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Run the acceptance suite.
    Selftest,
}

/// Input problems; exit status 2.
#[derive(Debug, Error)]
pub enum InputError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error("{0}")]
    Invalid(String),
}

impl From<CdgaError> for InputError {
    fn from(e: CdgaError) -> Self {
        InputError::Invalid(e.to_string())
    }
}

impl From<ProductError> for InputError {
    fn from(e: ProductError) -> Self {
        InputError::Invalid(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Success,
    Failure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Failure => 1,
        }
    }
}

/// Human lines plus a machine-readable payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub status: Status,
    pub lines: Vec<String>,
    pub data: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

fn report(command: &[String], status: Status, lines: Vec<String>, data: Value) -> Report {
    Report {
        command: command.to_vec(),
        status,
        lines,
        data,
    }
}

/// Adjunction cap from the environment, falling back to the default.
pub fn max_adjunctions() -> Result<usize, InputError> {
    match std::env::var(MAX_ITER_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| InputError::Invalid(format!("{MAX_ITER_VAR} must be a nonnegative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_MAX_ADJUNCTIONS),
    }
}

fn load_model(path: &Path) -> Result<FreeCDGA, InputError> {
    Ok(ModelFile::parse(&read_text(path)?)?.build()?)
}

fn load_data(path: &Path) -> Result<MCProductData, InputError> {
    let data = DglaFile::parse(&read_text(path)?)?.build()?;
    let report = data.validate();
    if !report.is_valid() {
        return Err(InputError::Invalid(format!("{}: {report}", path.display())));
    }
    Ok(data)
}

fn expr(a: &FreeCDGA, src: &str) -> Result<Element, InputError> {
    parse_element(src, a).map_err(|e| InputError::Invalid(format!("`{src}`: {e}")))
}

fn homogeneous_class(a: &FreeCDGA, src: &str) -> Result<CohomologyClass, InputError> {
    let x = expr(a, src)?;
    let degree = a
        .degree(&x)
        .ok_or_else(|| InputError::Invalid(format!("`{src}` is zero or not homogeneous")))?;
    if !a.d(&x).is_zero() {
        return Err(InputError::Invalid(format!("`{src}` is not a cocycle")));
    }
    Ok(a.reduce_to_class(&x, degree)?)
}

fn rationals(v: &[crate::linalg::Rational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

/// Class with the legend needed to read its coordinates.
fn class_json(a: &FreeCDGA, c: &CohomologyClass) -> Result<Value, InputError> {
    let legend: Vec<String> = a
        .cohomology(c.degree)?
        .classes(a)?
        .iter()
        .map(|b| a.format(&b.representative))
        .collect();
    Ok(json!({
        "degree": c.degree,
        "representative": a.format(&c.representative),
        "basis": legend,
        "coordinates": rationals(&c.coordinates),
        "zero": c.is_zero(),
    }))
}

fn fibration_json(f: &AlgebraicFibration) -> Value {
    let total = f.total();
    let gens: Vec<Value> = f
        .fiber()
        .iter()
        .map(|g| {
            let i = total.generator_index(&g.generator.name).expect("fiber generator");
            json!({
                "name": g.generator.name,
                "degree": g.generator.degree,
                "stage": g.stage,
                "differential": total.format(total.d_image(i)),
            })
        })
        .collect();
    json!({ "generators": gens })
}

fn fibration_lines(f: &AlgebraicFibration) -> Vec<String> {
    let total = f.total();
    f.fiber()
        .iter()
        .map(|g| {
            let i = total.generator_index(&g.generator.name).expect("fiber generator");
            format!(
                "  {} (degree {}, stage {}): d = {}",
                g.generator.name,
                g.generator.degree,
                g.stage,
                total.format(total.d_image(i))
            )
        })
        .collect()
}

/// Executes a parsed command line. `command` is echoed into the report.
pub fn run(cli: &Cli, command: &[String]) -> Result<Report, InputError> {
    match &cli.command {
        Command::Validate { file } => validate(command, file),
        Command::Cohomology { file, degree } => cohomology(command, file, *degree),
        Command::Massey { file, exprs } => massey(command, file, exprs),
        Command::McProduct { file, data, system } => mc(command, file, data, system),
        Command::Annihilate {
            file,
            cocycle,
            max_degree,
        } => annihilate(command, file, cocycle, *max_degree),
        Command::Descend {
            file,
            euler,
            x_degree,
            data,
            system,
            class,
        } => descend_cmd(command, file, euler, *x_degree, data, system, class),
        Command::Selftest => selftest(command),
    }
}

fn validate(command: &[String], file: &Path) -> Result<Report, InputError> {
    let text = read_text(file)?;
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| FileError::Syntax(e.to_string()))?;
    let (kind, violations) = if table.contains_key("generators") {
        let a = ModelFile::parse(&text)?.build()?;
        ("model", a.validate().violations)
    } else if table.contains_key("basis") {
        let data = DglaFile::parse(&text)?.build()?;
        let mut r = data.total().validate();
        r.extend(data.validate());
        ("dgla", r.violations)
    } else {
        return Err(InputError::Invalid(
            "neither a model (`generators`) nor a DGLA file (`basis`)".into(),
        ));
    };
    let status = if violations.is_empty() {
        Status::Success
    } else {
        Status::Failure
    };
    let mut lines = vec![format!(
        "{}: {} {}",
        file.display(),
        kind,
        if violations.is_empty() { "valid" } else { "invalid" }
    )];
    lines.extend(violations.iter().map(|v| format!("  {v}")));
    Ok(report(
        command,
        status,
        lines,
        json!({ "kind": kind, "valid": violations.is_empty(), "violations": violations }),
    ))
}

fn cohomology(command: &[String], file: &Path, k: u32) -> Result<Report, InputError> {
    let a = load_model(file)?;
    let top = a.trustworthy_degree();
    if k > top {
        return Err(InputError::Invalid(format!(
            "degree {k} is beyond the truncation (largest exact degree {top})"
        )));
    }
    let classes = a.cohomology(k)?.classes(&a)?;
    let reps: Vec<String> = classes.iter().map(|c| a.format(&c.representative)).collect();
    let mut lines = vec![format!("H^{k} has dimension {}", reps.len())];
    lines.extend(reps.iter().map(|r| format!("  [{r}]")));
    Ok(report(
        command,
        Status::Success,
        lines,
        json!({ "degree": k, "dimension": reps.len(), "basis": reps }),
    ))
}

fn system_pairs(a: &FreeCDGA, data: &MCProductData, s: &DefiningSystem) -> Vec<(String, String)> {
    SystemFile::from_tensor(a, data.quotient(), s.element()).system
}

fn massey(command: &[String], file: &Path, exprs: &[String]) -> Result<Report, InputError> {
    let a = load_model(file)?;
    let classes: Vec<CohomologyClass> = exprs
        .iter()
        .map(|e| homogeneous_class(&a, e))
        .collect::<Result<_, _>>()?;
    let out = massey_product(&a, &classes)?;
    let degrees: Vec<u32> = classes.iter().map(|c| c.degree).collect();
    let data_file = DglaFile::from_data(&out.labels.data);
    Ok(match out.result {
        MasseyResult::Value {
            system,
            product,
            indeterminacy,
        } => {
            let pairs = system_pairs(&a, &out.labels.data, &system);
            let mut lines = vec![format!(
                "<{}> = [{}]",
                exprs.join(", "),
                a.format(&product.cocycle)
            )];
            lines.push(format!(
                "  class {}, indeterminacy of dimension {}",
                if product.class.is_zero() { "zero" } else { "nonzero" },
                indeterminacy.dim()
            ));
            lines.push("  defining system:".into());
            lines.extend(pairs.iter().map(|(l, c)| format!("    {l}: {c}")));
            let ind: Vec<Vec<String>> = indeterminacy.vectors().iter().map(|v| rationals(v)).collect();
            report(
                command,
                Status::Success,
                lines,
                json!({
                    "degrees": degrees,
                    "data": data_file,
                    "system": pairs,
                    "product": class_json(&a, &product.class)?,
                    "cocycle": a.format(&product.cocycle),
                    "indeterminacy": ind,
                }),
            )
        }
        MasseyResult::Obstructed {
            window,
            class,
            perturbations_tried,
        } => report(
            command,
            Status::Failure,
            vec![format!(
                "<{}> is not defined: window ({}, {}) is obstructed by [{}] ({} perturbations tried)",
                exprs.join(", "),
                window.0,
                window.1,
                a.format(&class.representative),
                perturbations_tried
            )],
            json!({
                "degrees": degrees,
                "data": data_file,
                "obstructed_window": [window.0, window.1],
                "obstruction": class_json(&a, &class)?,
                "perturbations_tried": perturbations_tried,
            }),
        ),
    })
}

fn mc(command: &[String], file: &Path, data: &Path, system: &Path) -> Result<Report, InputError> {
    let a = load_model(file)?;
    let data = load_data(data)?;
    let t = SystemFile::parse(&read_text(system)?)?.build(&a, data.quotient())?;
    let system = DefiningSystem::new(&a, data.quotient(), t)?;
    let product = mc_product(&a, &data, &system)?;
    let lines = vec![
        format!("m(μ) = [{}]", a.format(&product.cocycle)),
        format!(
            "  degree {}, class {}",
            product.class.degree,
            if product.class.is_zero() { "zero" } else { "nonzero" }
        ),
    ];
    Ok(report(
        command,
        Status::Success,
        lines,
        json!({
            "system": system_pairs(&a, &data, &system),
            "cocycle": a.format(&product.cocycle),
            "product": class_json(&a, &product.class)?,
        }),
    ))
}

fn annihilate(command: &[String], file: &Path, cocycle: &str, max_degree: u32) -> Result<Report, InputError> {
    let a = load_model(file)?;
    let cls = homogeneous_class(&a, cocycle)?;
    let cap = max_adjunctions()?;
    let out = match annihilates(&a, &cls, max_degree, cap) {
        Ok(out) => out,
        Err(e @ FibrationError::CapExceeded(_)) => {
            return Ok(report(
                command,
                Status::Failure,
                vec![format!("undecided: {e}")],
                json!({ "annihilated": Value::Null, "error": e.to_string() }),
            ))
        }
        Err(e) => return Err(InputError::Invalid(e.to_string())),
    };
    if !out.annihilated {
        return Ok(report(
            command,
            Status::Failure,
            vec![format!("[{cocycle}] is not annihilated")],
            json!({ "annihilated": false, "class": class_json(&a, &cls)? }),
        ));
    }
    let witness = out.witness.expect("annihilated classes carry a witness");
    let primitive = out.primitive.unwrap_or_default();
    let valid = validate_fibration(&witness, true).is_valid();
    let mut lines = vec![format!(
        "[{cocycle}] is annihilated by a {}-generator odd fibration",
        witness.fiber().len()
    )];
    lines.extend(fibration_lines(&witness));
    lines.push(format!("  primitive: {}", witness.total().format(&primitive)));
    Ok(report(
        command,
        if valid { Status::Success } else { Status::Failure },
        lines,
        json!({
            "annihilated": true,
            "class": class_json(&a, &cls)?,
            "witness": fibration_json(&witness),
            "witness_valid": valid,
            "primitive": witness.total().format(&primitive),
        }),
    ))
}

fn fresh_fiber_name(a: &FreeCDGA) -> String {
    let mut name = String::from("x");
    while a.has_generator(&name) {
        name.push('_');
    }
    name
}

#[allow(clippy::too_many_arguments)]
fn descend_cmd(
    command: &[String],
    file: &Path,
    euler: &str,
    x_degree: u32,
    data: &Path,
    system: &Path,
    class: &str,
) -> Result<Report, InputError> {
    let a = load_model(file)?;
    let e = expr(&a, euler)?;
    let x = fresh_fiber_name(&a);
    let (fib, step) = adjoin_odd(&a, &e, x_degree, &x).map_err(|e| InputError::Invalid(e.to_string()))?;
    let data = load_data(data)?;
    let t = SystemFile::parse(&read_text(system)?)?.build(fib.total(), data.quotient())?;
    let sigma = DefiningSystem::new(fib.total(), data.quotient(), t)?;
    let c = expr(&a, class)?;
    let out = match descend(&fib, &step, &data, &sigma, &c) {
        Ok(out) => out,
        Err(
            e @ (FibrationError::LemmaFailed { .. }
            | FibrationError::NormalizationUnsolvable
            | FibrationError::Product(_)),
        ) => {
            return Ok(report(
                command,
                Status::Failure,
                vec![format!("descend failed: {e}")],
                json!({ "error": e.to_string() }),
            ))
        }
        Err(e) => return Err(InputError::Invalid(e.to_string())),
    };
    let m = out.zeta.total();
    let zeta_file = DglaFile::from_data(&out.zeta);
    let pairs = SystemFile::from_tensor(&a, out.zeta.quotient(), out.system.element()).system;
    let l0 = data.total().format_vec(&out.l0);
    let mut lines = vec![
        format!("fiber generator {x} of degree {x_degree}, dx = {}", a.format(&e)),
        format!("normalized c = {}", a.format(&out.normalized_c)),
        format!("ℓ₀ = {l0}"),
        format!("M̃ has dimension {}, center {}", m.dim(), m.name(out.zeta.center())),
        format!("m_ζ(system) = [{}]", a.format(&out.product.cocycle)),
        "  system:".into(),
    ];
    lines.extend(pairs.iter().map(|(l, c)| format!("    {l}: {c}")));
    lines.push("  checked:".into());
    lines.extend(out.checks.iter().map(|c| format!("    {c}")));
    Ok(report(
        command,
        Status::Success,
        lines,
        json!({
            "fiber_generator": x,
            "zeta": zeta_file,
            "system": pairs,
            "normalized_c": a.format(&out.normalized_c),
            "l0": l0,
            "product": class_json(&a, &out.product.class)?,
            "checks": out.checks,
        }),
    ))
}

fn selftest(command: &[String]) -> Result<Report, InputError> {
    let cap = max_adjunctions()?;
    let outcomes = crate::acceptance::run_all(cap);
    let all = outcomes.iter().all(|o| o.passed);
    let lines = outcomes.iter().map(|o| o.to_string()).collect();
    let data: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({ "id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail }))
        .collect();
    Ok(report(
        command,
        if all { Status::Success } else { Status::Failure },
        lines,
        json!({ "criteria": data }),
    ))
}
