//! Command-line front end.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use fmr_core::engine::{backward_reason_with, break_loops, EngineError, EngineOptions};
use fmr_core::impact::{cmp, impact, ImpactError, ImpactQuery};
use fmr_core::oracle::sampler::{SamplerGrid, DOCUMENTED_SEEDS};
use fmr_core::oracle::truth_table::TruthTableError;
use fmr_core::oracle::verify::{verify_result, VerifyError};
use fmr_core::oracle::{simulate, truth_table, FaultAssignment, VerifyOptions};
use fmr_core::{
    CausePolicy, FailureMode, Kind, KnowledgeContext, Literal, SystemModel, Value, ValuePolicy,
    ValueType, VarClass, DEFAULT_TERM_CAP,
};
use thiserror::Error;

use crate::model_file::{parse_attrs, parse_model, parse_model_unchecked, ModelFileError};
use crate::report::{
    to_json, AnalysisReport, Feedback, ImpactReport, OutputChange, TruthTableReport,
    ValidationReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Backward reasoning from an output failure to its causes.
    Analyze,
    /// Failure truth table of a Boolean kind.
    TruthTable,
    /// Impact of changing one boundary value.
    Impact,
    /// Check a model file and list its loops.
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    H,
    L,
    T,
    F,
}

impl From<Mode> for FailureMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::H => FailureMode::High,
            Mode::L => FailureMode::Low,
            Mode::T => FailureMode::True,
            Mode::F => FailureMode::False,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Certain,
    Minimum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ValuesArg {
    Independent,
    Dependent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "fmr",
    version,
    about = "Failure mode reasoning over dataflow models"
)]
pub struct RunConfig {
    pub command: Command,
    /// Model file (JSON).
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// System output to analyse. For `impact`, restricts the outputs summed.
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long, value_enum, default_value = "certain")]
    pub policy: PolicyArg,
    #[arg(long, value_enum, default_value = "independent")]
    pub values: ValuesArg,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Maximum number of DNF terms during expansion.
    #[arg(long, default_value_t = DEFAULT_TERM_CAP)]
    pub dnf_cap: usize,
    /// Proposed change, `<var>=<v>:<w>`.
    #[arg(long)]
    pub impact: Option<String>,
    /// Include the expansion steps in the report.
    #[arg(long)]
    pub trace: bool,
    /// Check the result against forward simulation.
    #[arg(long)]
    pub verify: bool,
    /// Seed of the randomized sampling grid used by `--verify`.
    #[arg(long, default_value_t = DOCUMENTED_SEEDS[0])]
    pub seed: u64,
    /// Kind for `truth-table`.
    #[arg(long)]
    pub kind: Option<String>,
    /// Number of arguments for `truth-table`.
    #[arg(long, default_value_t = 2)]
    pub arity: usize,
    /// Kind attributes for `truth-table`, as a JSON object.
    #[arg(long)]
    pub attrs: Option<String>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            model: None,
            target: None,
            mode: None,
            policy: PolicyArg::Certain,
            values: ValuesArg::Independent,
            format: Format::Text,
            dnf_cap: DEFAULT_TERM_CAP,
            impact: None,
            trace: false,
            verify: false,
            seed: DOCUMENTED_SEEDS[0],
            kind: None,
            arity: 2,
            attrs: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("system-model: {0}")]
    Model(#[from] ModelFileError),
    #[error("component-models: {0}")]
    Catalogue(String),
    #[error("reasoning-engine: {0}")]
    Engine(EngineError),
    #[error("oracle: {0}")]
    Oracle(#[from] VerifyError),
    #[error("oracle: {0}")]
    TruthTable(#[from] TruthTableError),
    #[error("impact: {0}")]
    Impact(#[from] ImpactError),
}

impl From<EngineError> for RunError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Catalogue { .. } => RunError::Catalogue(e.to_string()),
            e => RunError::Engine(e),
        }
    }
}

/// Exit status and the bytes for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(cfg: &RunConfig) -> Outcome {
    match execute(cfg) {
        Ok((status, stdout)) => Outcome {
            status,
            stdout,
            stderr: String::new(),
        },
        Err(e) => {
            let status = if matches!(e, RunError::Usage(_)) {
                2
            } else {
                1
            };
            let mut stderr = format!("error: {e}\n");
            if let RunError::Model(ModelFileError::Invalid(inv)) = &e {
                stderr.clear();
                for d in &inv.0 {
                    stderr.push_str(&format!("error: system-model: {d}\n"));
                }
            }
            Outcome {
                status,
                stdout: String::new(),
                stderr,
            }
        }
    }
}

fn emit<T: serde::Serialize>(cfg: &RunConfig, r: &T, text: impl FnOnce(&T) -> String) -> String {
    match cfg.format {
        Format::Text => text(r),
        Format::Json => to_json(r),
    }
}

fn read_model_text(cfg: &RunConfig) -> Result<String, RunError> {
    let path = cfg
        .model
        .as_ref()
        .ok_or_else(|| RunError::Usage(String::from("--model is required")))?;
    std::fs::read_to_string(path).map_err(|source| RunError::Io {
        path: path.clone(),
        source,
    })
}

fn execute(cfg: &RunConfig) -> Result<(i32, String), RunError> {
    match cfg.command {
        Command::Analyze => analyze(cfg).map(|s| (0, s)),
        Command::TruthTable => table(cfg).map(|s| (0, s)),
        Command::Impact => impact_cmd(cfg).map(|s| (0, s)),
        Command::Validate => validate(cfg),
    }
}

fn analyze(cfg: &RunConfig) -> Result<String, RunError> {
    let m = parse_model(&read_model_text(cfg)?)?;
    let target = cfg
        .target
        .as_ref()
        .ok_or_else(|| RunError::Usage(String::from("analyze needs --target")))?;
    let mode = cfg
        .mode
        .ok_or_else(|| RunError::Usage(String::from("analyze needs --mode")))?;
    let cause = match cfg.policy {
        PolicyArg::Certain => CausePolicy::CertainCauses,
        PolicyArg::Minimum => CausePolicy::MinimumConditions,
    };
    let values = match cfg.values {
        ValuesArg::Independent => ValuePolicy::Independent,
        ValuesArg::Dependent => ValuePolicy::Dependent,
    };
    let ctx = KnowledgeContext::from_model(&m, cause, values);
    let lit = Literal::new(target.as_str(), mode.into());
    let opts = EngineOptions {
        dnf_cap: cfg.dnf_cap,
    };
    let r = backward_reason_with(&m, &lit, &ctx, opts)?;
    let mut report = AnalysisReport::new(&r, cfg.trace);
    if cfg.verify {
        let broken = break_loops(&m);
        let mut grids = vec![(String::from("standard"), SamplerGrid::standard())];
        if has_real_boundary(&broken.model) {
            grids.push((
                format!("seed {:#x}", cfg.seed),
                SamplerGrid::seeded(cfg.seed),
            ));
        }
        for (name, grid) in &grids {
            let vo = VerifyOptions::new(grid).with_context(&ctx);
            let audit = verify_result(&broken.model, &r, &vo)?;
            report.add_checks(name, &audit);
        }
    }
    Ok(emit(cfg, &report, AnalysisReport::text))
}

fn has_real_boundary(m: &SystemModel) -> bool {
    m.boundary_variables()
        .iter()
        .any(|v| v.value_type == ValueType::Real)
}

fn table(cfg: &RunConfig) -> Result<String, RunError> {
    let name = cfg
        .kind
        .as_ref()
        .ok_or_else(|| RunError::Usage(String::from("truth-table needs --kind")))?;
    let kind =
        Kind::from_name(name).ok_or_else(|| RunError::Usage(format!("unknown kind `{name}`")))?;
    let attrs = parse_attrs(kind, cfg.attrs.as_deref())?;
    let arity = match &attrs {
        fmr_core::Attrs::None => cfg.arity,
        a => match a.expected_arity(kind) {
            Ok(fmr_core::kind::Arity::Exactly(n)) => n,
            _ => cfg.arity,
        },
    };
    let t = truth_table(kind, &attrs, arity)?;
    Ok(emit(
        cfg,
        &TruthTableReport::new(&t),
        TruthTableReport::text,
    ))
}

/// `true`/`false`/`T`/`F` or a number.
pub fn parse_value(s: &str) -> Option<Value> {
    match s {
        "true" | "T" => Some(Value::Bool(true)),
        "false" | "F" => Some(Value::Bool(false)),
        _ => s
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Value::Real),
    }
}

/// Splits `<var>=<v>:<w>`.
pub fn parse_change(s: &str) -> Option<(String, Value, Value)> {
    let (var, rest) = s.split_once('=')?;
    let (v, w) = rest.split_once(':')?;
    let var = var.trim();
    if var.is_empty() {
        return None;
    }
    Some((
        var.to_string(),
        parse_value(v.trim())?,
        parse_value(w.trim())?,
    ))
}

/// Reported and intended values of every boundary variable, taken from the
/// model's known values. A certain variable may give either one.
pub fn baseline(m: &SystemModel, changed: &str) -> Result<FaultAssignment, RunError> {
    let mut a = FaultAssignment::new();
    for v in m.boundary_variables() {
        let k = v.known;
        let (r, i) = if v.class == VarClass::Certain {
            (k.reported.or(k.intended), k.intended.or(k.reported))
        } else {
            (k.reported, k.intended)
        };
        let pair = match (r, i) {
            (Some(r), Some(i)) => (r, i),
            // The changed variable's reported value is replaced anyway.
            (None, Some(i)) if v.name == changed => (i, i),
            _ => {
                return Err(RunError::Usage(format!(
                    "impact needs known reported and intended values for `{}`",
                    v.name
                )))
            }
        };
        a.insert(v.name.clone(), pair);
    }
    Ok(a)
}

fn impact_cmd(cfg: &RunConfig) -> Result<String, RunError> {
    let m = parse_model(&read_model_text(cfg)?)?;
    let change = cfg
        .impact
        .as_ref()
        .ok_or_else(|| RunError::Usage(String::from("impact needs --impact <var>=<v>:<w>")))?;
    let (variable, from, to) = parse_change(change)
        .ok_or_else(|| RunError::Usage(format!("cannot parse change `{change}`")))?;
    let outputs = match &cfg.target {
        Some(t) => vec![t.clone()],
        None => m.outputs.clone(),
    };
    let base = baseline(&m, &variable)?;
    let q = ImpactQuery {
        variable: variable.clone(),
        from,
        to,
        outputs: outputs.clone(),
    };
    let total = impact(&m, &q, &base)?;
    let modes = |v: Value| {
        let mut a = base.clone();
        let intended = a[&variable].1;
        a.insert(variable.clone(), (v, intended));
        simulate(&m, &a)
    };
    let (at_v, at_w) = (
        modes(from).map_err(ImpactError::from)?,
        modes(to).map_err(ImpactError::from)?,
    );
    let mut changes = Vec::new();
    for o in &outputs {
        changes.push(OutputChange {
            output: o.clone(),
            mode_from: at_v[o].to_string(),
            mode_to: at_w[o].to_string(),
            score: cmp(at_v[o], at_w[o])?.abs(),
        });
    }
    let r = ImpactReport {
        variable,
        from: from.to_string(),
        to: to.to_string(),
        outputs: changes,
        impact: total,
    };
    Ok(emit(cfg, &r, ImpactReport::text))
}

fn validate(cfg: &RunConfig) -> Result<(i32, String), RunError> {
    let m = parse_model_unchecked(&read_model_text(cfg)?)?;
    let diagnostics: Vec<String> = m.validate().iter().map(ToString::to_string).collect();
    let valid = diagnostics.is_empty();
    let feedback = if valid {
        m.detect_loops()
            .into_iter()
            .map(|f| Feedback {
                variable: f.variable,
                from: f.from,
                to: f.to,
            })
            .collect()
    } else {
        Vec::new()
    };
    let r = ValidationReport {
        valid,
        diagnostics,
        feedback,
    };
    Ok((
        if valid { 0 } else { 1 },
        emit(cfg, &r, ValidationReport::text),
    ))
}
