//! Empirical checks of certain causes and minimum conditions.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::sampler::SamplerGrid;
use super::{Circuit, SimError};
use crate::context::{CausePolicy, KnowledgeContext, ValuePolicy};
use crate::engine::AnalysisResult;
use crate::expr::{Expr, Literal};
use crate::mode::{FailureMode, Sign, Value, ValueType};
use crate::model::{SystemModel, VarClass};

/// An assignment together with the mode it produced at the target.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub assignment: Vec<(String, Value, Value)>,
    pub observed: FailureMode,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, r, v)) in self.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}=({r},{v})")?;
        }
        write!(f, " -> {}", self.observed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// Proven by exhaustive enumeration of Boolean values.
    Holds,
    /// No counterexample on the real-valued sampling grid.
    Unrefuted,
    Refuted(Counterexample),
    /// Nothing to check: no assignment satisfies the preconditions.
    Inconclusive,
}

impl Verdict {
    /// `Holds` or `Unrefuted`.
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Holds | Verdict::Unrefuted)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("holds"),
            Verdict::Unrefuted => f.write_str("unrefuted"),
            Verdict::Refuted(c) => write!(f, "refuted by {c}"),
            Verdict::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("`{0}` is not a boundary variable")]
    NotBoundary(String),
    #[error("`{0}` is not a variable of the model")]
    Unknown(String),
}

/// Filter on the pair of one boundary variable.
pub type PairFilter<'a> = &'a dyn Fn(&str, (Value, Value)) -> bool;

pub struct VerifyOptions<'a> {
    pub grid: &'a SamplerGrid,
    /// Extra certain variables and, under value-dependent reasoning, the
    /// known values and signs to respect. Known real values are matched by
    /// sign only, since they are generally not on the grid.
    pub ctx: Option<&'a KnowledgeContext>,
    pub premise: Option<PairFilter<'a>>,
}

impl<'a> VerifyOptions<'a> {
    pub fn new(grid: &'a SamplerGrid) -> Self {
        VerifyOptions {
            grid,
            ctx: None,
            premise: None,
        }
    }

    pub fn with_context(mut self, ctx: &'a KnowledgeContext) -> Self {
        self.ctx = Some(ctx);
        self
    }

    pub fn with_premise(mut self, premise: PairFilter<'a>) -> Self {
        self.premise = Some(premise);
        self
    }
}

struct Space {
    circuit: Circuit,
    /// Candidate pairs per boundary variable, parallel to `circuit.boundary()`.
    choices: Vec<Vec<(Value, Value)>>,
    real: bool,
}

fn matches_value(known: Option<Value>, v: Value) -> bool {
    match (known, v) {
        (None, _) => true,
        (Some(Value::Real(k)), Value::Real(x)) => Sign::of(k) == Sign::of(x),
        (Some(k), v) => k == v,
    }
}

impl Space {
    fn new(
        model: &SystemModel,
        opts: &VerifyOptions<'_>,
        modes_of: &dyn Fn(&str, ValueType, bool) -> Vec<FailureMode>,
    ) -> Result<Space, VerifyError> {
        let circuit = Circuit::compile(model)?;
        let mut choices = Vec::new();
        let mut real = false;
        for &b in circuit.boundary() {
            let name = circuit.name(b);
            let decl = model.var(name).expect("compiled from the model");
            let certain =
                decl.class == VarClass::Certain || opts.ctx.is_some_and(|c| c.is_certain(name));
            real |= decl.value_type == ValueType::Real;
            let mut pairs = Vec::new();
            for mode in modes_of(name, decl.value_type, certain) {
                pairs.extend(opts.grid.pairs(decl.value_type, mode));
            }
            if let Some(ctx) = opts.ctx {
                let uses = certain || ctx.values == ValuePolicy::Dependent;
                if uses {
                    let k = ctx.knowledge(name).copied().unwrap_or_default();
                    let (kr, ki) = if certain {
                        (k.reported.or(k.intended), k.intended.or(k.reported))
                    } else {
                        (k.reported, k.intended)
                    };
                    pairs.retain(|(r, i)| {
                        let sign_ok = match k.sign {
                            Some(s) => {
                                r.as_real().is_none_or(|x| Sign::of(x) == s)
                                    && i.as_real().is_none_or(|x| Sign::of(x) == s)
                            }
                            None => true,
                        };
                        sign_ok && matches_value(kr, *r) && matches_value(ki, *i)
                    });
                }
            }
            if let Some(p) = opts.premise {
                pairs.retain(|pair| p(name, *pair));
            }
            choices.push(pairs);
        }
        Ok(Space {
            circuit,
            choices,
            real,
        })
    }

    /// Calls `visit` with the simulated values of every assignment, skipping
    /// those outside a component's domain. Stops early when `visit` returns
    /// `false`.
    fn for_each(
        &self,
        mut visit: impl FnMut(&[(Value, Value)]) -> bool,
    ) -> Result<(), VerifyError> {
        if self.choices.iter().any(Vec::is_empty) {
            return Ok(());
        }
        let placeholder = (Value::Bool(false), Value::Bool(false));
        let mut values = alloc::vec![placeholder; self.circuit.variable_count()];
        let mut odometer = alloc::vec![0usize; self.choices.len()];
        loop {
            for (k, &b) in self.circuit.boundary().iter().enumerate() {
                values[b] = self.choices[k][odometer[k]];
            }
            match self.circuit.run(&mut values) {
                Ok(()) => {
                    if !visit(&values) {
                        return Ok(());
                    }
                }
                Err(e) if e.is_domain() => {}
                Err(e) => return Err(e.into()),
            }
            let mut k = 0;
            loop {
                if k == odometer.len() {
                    return Ok(());
                }
                odometer[k] += 1;
                if odometer[k] < self.choices[k].len() {
                    break;
                }
                odometer[k] = 0;
                k += 1;
            }
        }
    }

    fn counterexample(&self, values: &[(Value, Value)], observed: FailureMode) -> Counterexample {
        Counterexample {
            assignment: self
                .circuit
                .boundary()
                .iter()
                .map(|&b| (String::from(self.circuit.name(b)), values[b].0, values[b].1))
                .collect(),
            observed,
        }
    }

    fn passed(&self) -> Verdict {
        if self.real {
            Verdict::Unrefuted
        } else {
            Verdict::Holds
        }
    }
}

fn target_index(c: &Circuit, target: &Literal) -> Result<usize, VerifyError> {
    c.index_of(&target.var)
        .ok_or_else(|| VerifyError::Unknown(target.var.clone()))
}

/// Intended output value consistent with the target mode: a commission
/// needs an intended `F`, an omission an intended `T`.
fn intended_ok(target: FailureMode, intended: Value) -> bool {
    match target {
        FailureMode::True => intended == Value::Bool(false),
        FailureMode::False => intended == Value::Bool(true),
        _ => true,
    }
}

/// Checks that the literals of `term`, with every other boundary variable
/// correct, always produce `target`.
///
/// Only assignments whose intended output admits the target mode are
/// considered.
pub fn verify_certain_cause(
    model: &SystemModel,
    term: &[Literal],
    target: &Literal,
    opts: &VerifyOptions<'_>,
) -> Result<Verdict, VerifyError> {
    for l in term {
        if model.var(&l.var).is_none() {
            return Err(VerifyError::Unknown(l.var.clone()));
        }
        if !model.is_boundary(&l.var) {
            return Err(VerifyError::NotBoundary(l.var.clone()));
        }
    }
    let modes_of = |name: &str, _ty: ValueType, certain: bool| -> Vec<FailureMode> {
        let wanted: Vec<FailureMode> = term
            .iter()
            .filter(|l| l.var == name)
            .map(|l| l.mode)
            .collect();
        match wanted.as_slice() {
            [] => alloc::vec![FailureMode::Match],
            [m] if !certain || *m == FailureMode::Match => alloc::vec![*m],
            _ => Vec::new(),
        }
    };
    let space = Space::new(model, opts, &modes_of)?;
    let t = target_index(&space.circuit, target)?;
    let mut seen = 0usize;
    let mut bad = None;
    space.for_each(|values| {
        if !intended_ok(target.mode, values[t].1) {
            return true;
        }
        seen += 1;
        let m = space.circuit.mode(values, t);
        if m != target.mode {
            bad = Some(space.counterexample(values, m));
            return false;
        }
        true
    })?;
    Ok(match bad {
        Some(c) => Verdict::Refuted(c),
        None if seen == 0 => Verdict::Inconclusive,
        None => space.passed(),
    })
}

/// Checks that every assignment producing `target` satisfies `expr`.
pub fn verify_minimum_conditions(
    model: &SystemModel,
    expr: &Expr,
    target: &Literal,
    opts: &VerifyOptions<'_>,
) -> Result<Verdict, VerifyError> {
    let modes_of = |_: &str, ty: ValueType, certain: bool| -> Vec<FailureMode> {
        if certain {
            alloc::vec![FailureMode::Match]
        } else {
            ty.modes().to_vec()
        }
    };
    let space = Space::new(model, opts, &modes_of)?;
    let t = target_index(&space.circuit, target)?;
    let circuit = &space.circuit;
    let mut bad = None;
    space.for_each(|values| {
        let m = circuit.mode(values, t);
        if m != target.mode {
            return true;
        }
        let mode_of = |name: &str| match circuit.index_of(name) {
            Some(i) => circuit.mode(values, i),
            None => FailureMode::Match,
        };
        if !expr.eval(&mode_of) {
            bad = Some(space.counterexample(values, m));
            return false;
        }
        true
    })?;
    Ok(match bad {
        Some(c) => Verdict::Refuted(c),
        None => space.passed(),
    })
}

/// Oracle verdicts for an analysis result.
#[derive(Debug, Clone, PartialEq)]
pub enum Audit {
    /// One verdict per cut set, checked as a certain cause.
    CertainCauses(Vec<(Vec<Literal>, Verdict)>),
    /// The whole cause checked as a minimum condition.
    MinimumConditions(Verdict),
}

impl Audit {
    /// No verdict is a refutation.
    pub fn unrefuted(&self) -> bool {
        match self {
            Audit::CertainCauses(v) => v.iter().all(|(_, v)| !matches!(v, Verdict::Refuted(_))),
            Audit::MinimumConditions(v) => !matches!(v, Verdict::Refuted(_)),
        }
    }

    /// Every verdict is `Holds` or `Unrefuted`.
    pub fn passed(&self) -> bool {
        match self {
            Audit::CertainCauses(v) => v.iter().all(|(_, v)| v.passed()),
            Audit::MinimumConditions(v) => v.passed(),
        }
    }

    pub fn verdicts(&self) -> Vec<&Verdict> {
        match self {
            Audit::CertainCauses(v) => v.iter().map(|(_, v)| v).collect(),
            Audit::MinimumConditions(v) => alloc::vec![v],
        }
    }
}

/// Checks a result the way it is meant: every cut set of an unweakened
/// certain-cause result as a certain cause, anything else as a minimum
/// condition.
pub fn verify_result(
    model: &SystemModel,
    result: &AnalysisResult,
    opts: &VerifyOptions<'_>,
) -> Result<Audit, VerifyError> {
    if result.cause_policy == CausePolicy::CertainCauses && !result.weakened {
        let mut out = Vec::new();
        for term in result.terms() {
            let v = verify_certain_cause(model, &term, &result.target, opts)?;
            out.push((term, v));
        }
        Ok(Audit::CertainCauses(out))
    } else {
        verify_minimum_conditions(model, &result.cause, &result.target, opts)
            .map(Audit::MinimumConditions)
    }
}
