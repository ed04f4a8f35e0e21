//! Backward composition of local failure models.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::catalogue::{component_model, CatalogueError};
use crate::context::{CausePolicy, ContextError, KnowledgeContext, ValuePolicy};
use crate::dnf::{dnf_terms, terms_to_expr, Term, DEFAULT_TERM_CAP};
use crate::error::AlgebraError;
use crate::expr::{Expr, Literal};
use crate::mode::FailureMode;
use crate::model::{FeedbackEdge, InvalidModel, SystemModel, VarClass, VariableDecl};
use crate::simplify::simplify;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error(transparent)]
    InvalidModel(#[from] InvalidModel),
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error("`{0}` is not a system output")]
    NotAnOutput(String),
    #[error("mode {mode} does not apply to `{var}`")]
    ModeMismatch { var: String, mode: FailureMode },
    #[error("the target must be a fault mode, not m")]
    MatchTarget,
    #[error("component `{component}`: {source}")]
    Catalogue {
        component: String,
        source: CatalogueError,
    },
    #[error("component `{component}` produced a model mentioning {literal}")]
    MatchLiteral { component: String, literal: Literal },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    pub dnf_cap: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            dnf_cap: DEFAULT_TERM_CAP,
        }
    }
}

/// One substitution made during expansion: `effect` at the output of
/// `component` was replaced by `local`, already expanded and simplified.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub component: String,
    pub effect: Literal,
    pub local: Expr,
    pub weakened: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisResult {
    pub target: Literal,
    /// DNF over boundary literals, canonically ordered.
    pub cause: Expr,
    pub cause_policy: CausePolicy,
    pub value_policy: ValuePolicy,
    /// Some component admitted no certain cause and contributed its minimum
    /// conditions instead.
    pub weakened: bool,
    pub trace: Vec<TraceStep>,
    pub feedback: Vec<FeedbackEdge>,
}

impl AnalysisResult {
    pub fn terms(&self) -> Vec<Term> {
        dnf_terms(&self.cause, usize::MAX).expect("no cap")
    }

    /// Rebuilds the cause from the trace alone.
    pub fn replay(&self, ctx: &KnowledgeContext, cap: usize) -> Result<Expr, AlgebraError> {
        let steps: BTreeMap<&Literal, &Expr> =
            self.trace.iter().map(|s| (&s.effect, &s.local)).collect();
        let start = steps
            .get(&self.target)
            .map_or(Expr::Lit(self.target.clone()), |e| (*e).clone());
        canonical(&simplify(&start, ctx), ctx, cap)
    }
}

/// DNF in canonical term order, with knowledge applied once more after
/// multiplying out.
fn canonical(e: &Expr, ctx: &KnowledgeContext, cap: usize) -> Result<Expr, AlgebraError> {
    let once = simplify(&terms_to_expr(&dnf_terms(e, cap)?), ctx);
    Ok(terms_to_expr(&dnf_terms(&once, cap)?))
}

/// A model whose feedback edges were cut.
#[derive(Debug, Clone, PartialEq)]
pub struct BrokenModel {
    pub model: SystemModel,
    pub feedback: Vec<FeedbackEdge>,
    /// Fresh certain variables standing for the previous values of looped
    /// variables.
    pub pinned: Vec<String>,
}

/// Rebinds every feedback read to a fresh certain variable `v@prev`: before
/// the failure the looped value was as intended, so it contributes no fault.
pub fn break_loops(model: &SystemModel) -> BrokenModel {
    let feedback: Vec<FeedbackEdge> = model.detect_loops().into_iter().collect();
    let mut out = model.clone();
    let mut fresh: BTreeMap<String, String> = BTreeMap::new();
    let mut pinned = Vec::new();
    for e in &feedback {
        let name = fresh
            .entry(e.variable.clone())
            .or_insert_with(|| {
                let mut name = format!("{}@prev", e.variable);
                let mut n = 2;
                while out.var(&name).is_some() {
                    name = format!("{}@prev{n}", e.variable);
                    n += 1;
                }
                let ty = model
                    .var(&e.variable)
                    .map(|v| v.value_type)
                    .unwrap_or(crate::mode::ValueType::Bool);
                out.variables
                    .push(VariableDecl::new(name.clone(), ty, VarClass::Certain));
                pinned.push(name.clone());
                name
            })
            .clone();
        let c = out
            .components
            .iter_mut()
            .find(|c| c.name == e.to)
            .expect("feedback edge names a component");
        if e.slot < c.inputs.len() {
            c.inputs[e.slot] = name;
        } else {
            let i = e.slot - c.inputs.len();
            c.params[i] = name;
        }
    }
    BrokenModel {
        model: out,
        feedback,
        pinned,
    }
}

struct Expansion<'a> {
    model: &'a SystemModel,
    ctx: &'a KnowledgeContext,
    cap: usize,
    memo: BTreeMap<Literal, Expr>,
    trace: Vec<TraceStep>,
    weakened: bool,
}

impl Expansion<'_> {
    fn expand(&mut self, lit: &Literal) -> Result<Expr, EngineError> {
        if let Some(e) = self.memo.get(lit) {
            return Ok(e.clone());
        }
        let Some(c) = self.model.producer(&lit.var) else {
            return Ok(simplify(&Expr::Lit(lit.clone()), self.ctx));
        };
        let scenario =
            component_model(c, lit.mode, self.ctx).map_err(|source| EngineError::Catalogue {
                component: c.name.clone(),
                source,
            })?;
        let component = c.name.clone();
        let expanded = scenario.cause.try_substitute(&mut |l: &Literal| {
            if l.mode == FailureMode::Match {
                return Err(EngineError::MatchLiteral {
                    component: component.clone(),
                    literal: l.clone(),
                });
            }
            self.expand(l)
        })?;
        let e = simplify(&expanded, self.ctx);
        let e = simplify(&terms_to_expr(&dnf_terms(&e, self.cap)?), self.ctx);
        self.weakened |= scenario.weakened;
        self.trace.push(TraceStep {
            component,
            effect: lit.clone(),
            local: e.clone(),
            weakened: scenario.weakened,
        });
        self.memo.insert(lit.clone(), e.clone());
        Ok(e)
    }
}

pub fn backward_reason(
    model: &SystemModel,
    target: &Literal,
    ctx: &KnowledgeContext,
) -> Result<AnalysisResult, EngineError> {
    backward_reason_with(model, target, ctx, EngineOptions::default())
}

pub fn backward_reason_with(
    model: &SystemModel,
    target: &Literal,
    ctx: &KnowledgeContext,
    opts: EngineOptions,
) -> Result<AnalysisResult, EngineError> {
    model.check()?;
    ctx.check()?;
    if !model.outputs.contains(&target.var) {
        return Err(EngineError::NotAnOutput(target.var.clone()));
    }
    if target.mode == FailureMode::Match {
        return Err(EngineError::MatchTarget);
    }
    let ty = model.var(&target.var).expect("validated").value_type;
    if !target.mode.applies_to(ty) {
        return Err(EngineError::ModeMismatch {
            var: target.var.clone(),
            mode: target.mode,
        });
    }
    let broken = break_loops(model);
    let mut ctx = ctx.clone();
    for p in &broken.pinned {
        ctx.mark_certain(p.clone());
    }
    let mut ex = Expansion {
        model: &broken.model,
        ctx: &ctx,
        cap: opts.dnf_cap,
        memo: BTreeMap::new(),
        trace: Vec::new(),
        weakened: false,
    };
    let cause = ex.expand(target)?;
    let cause = canonical(&cause, &ctx, opts.dnf_cap)?;
    Ok(AnalysisResult {
        target: target.clone(),
        cause,
        cause_policy: ctx.cause,
        value_policy: ctx.values,
        weakened: ex.weakened && ctx.cause == CausePolicy::CertainCauses,
        trace: ex.trace,
        feedback: broken.feedback,
    })
}

/// Cut sets of a result, shortest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    pub cut_sets: Vec<Vec<Literal>>,
    pub note: Option<&'static str>,
}

pub fn explain(result: &AnalysisResult) -> Explanation {
    let cut_sets = result.terms();
    let note = match &result.cause {
        Expr::False => Some("no consistent cause"),
        Expr::True => Some("the target needs no fault at any input"),
        _ => None,
    };
    Explanation { cut_sets, note }
}

/// Variables the cause may mention: suspicious boundary variables.
pub fn suspicious_boundary(model: &SystemModel) -> BTreeSet<String> {
    model
        .boundary_variables()
        .into_iter()
        .filter(|v| v.class == VarClass::Suspicious)
        .map(|v| v.name.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::lit;
    use crate::kind::Kind;
    use crate::model::ComponentDecl;
    use FailureMode::*;

    fn comparators(x_certain: bool) -> SystemModel {
        let x = VariableDecl::real("x");
        SystemModel::new()
            .variable(if x_certain { x.certain() } else { x })
            .variable(VariableDecl::real("p1"))
            .variable(VariableDecl::real("p2"))
            .variable(VariableDecl::boolean("z1"))
            .variable(VariableDecl::boolean("z2"))
            .variable(VariableDecl::boolean("y"))
            .component(ComponentDecl::new("c1", Kind::Lcom, &["x"], "z1").with_params(&["p1"]))
            .component(ComponentDecl::new("c2", Kind::Gcom, &["x"], "z2").with_params(&["p2"]))
            .component(ComponentDecl::new("c3", Kind::Or, &["z1", "z2"], "y"))
            .output("y")
    }

    #[test]
    fn worked_example() {
        let m = comparators(true);
        let ctx =
            KnowledgeContext::from_model(&m, CausePolicy::CertainCauses, ValuePolicy::Independent);
        let r = backward_reason(&m, &Literal::new("y", True), &ctx).unwrap();
        assert_eq!(r.cause, Expr::or([lit("p1", High), lit("p2", Low)]));
        let ex = explain(&r);
        assert_eq!(
            ex.cut_sets,
            [[Literal::new("p1", High)], [Literal::new("p2", Low)]]
        );
        assert_eq!(r.replay(&ctx, DEFAULT_TERM_CAP).unwrap(), r.cause);
    }

    #[test]
    fn worked_example_all_suspicious() {
        let m = comparators(false);
        let ctx = KnowledgeContext::from_model(
            &m,
            CausePolicy::MinimumConditions,
            ValuePolicy::Independent,
        );
        let r = backward_reason(&m, &Literal::new("y", True), &ctx).unwrap();
        assert_eq!(
            r.cause,
            Expr::or([
                lit("p1", High),
                lit("p2", Low),
                lit("x", High),
                lit("x", Low)
            ])
        );
    }

    #[test]
    fn single_not() {
        let m = SystemModel::new()
            .variable(VariableDecl::boolean("x"))
            .variable(VariableDecl::boolean("y"))
            .component(ComponentDecl::new("n", Kind::Not, &["x"], "y"))
            .output("y");
        let r = backward_reason(
            &m,
            &Literal::new("y", True),
            &KnowledgeContext::certain_causes(),
        )
        .unwrap();
        assert_eq!(r.cause, lit("x", False));
        assert_eq!(r.trace.len(), 1);
    }

    #[test]
    fn self_loop_is_cut() {
        let m = SystemModel::new()
            .variable(VariableDecl::boolean("x"))
            .variable(VariableDecl::boolean("y"))
            .component(ComponentDecl::new("f", Kind::Or, &["x", "y"], "y"))
            .output("y");
        let b = break_loops(&m);
        assert_eq!(b.pinned, ["y@prev"]);
        assert_eq!(b.model.components[0].inputs, ["x", "y@prev"]);
        for ctx in [
            KnowledgeContext::certain_causes(),
            KnowledgeContext::minimum_conditions(),
        ] {
            let r = backward_reason(&m, &Literal::new("y", True), &ctx).unwrap();
            assert_eq!(r.cause, lit("x", True));
        }
    }

    #[test]
    fn acyclic_model_is_unchanged_by_loop_breaking() {
        let m = comparators(true);
        assert_eq!(break_loops(&m).model, m);
    }

    #[test]
    fn bad_targets() {
        let m = comparators(true);
        let ctx = KnowledgeContext::certain_causes();
        assert_eq!(
            backward_reason(&m, &Literal::new("z1", True), &ctx).unwrap_err(),
            EngineError::NotAnOutput("z1".into())
        );
        assert!(matches!(
            backward_reason(&m, &Literal::new("y", High), &ctx).unwrap_err(),
            EngineError::ModeMismatch { .. }
        ));
        assert_eq!(
            backward_reason(&m, &Literal::new("y", Match), &ctx).unwrap_err(),
            EngineError::MatchTarget
        );
    }

    #[test]
    fn empty_cause_is_explained() {
        let m = SystemModel::new()
            .variable(VariableDecl::boolean("a").certain())
            .variable(VariableDecl::boolean("b").certain())
            .variable(VariableDecl::boolean("y"))
            .component(ComponentDecl::new("g", Kind::And, &["a", "b"], "y"))
            .output("y");
        let ctx = KnowledgeContext::from_model(
            &m,
            CausePolicy::MinimumConditions,
            ValuePolicy::Independent,
        );
        let r = backward_reason(&m, &Literal::new("y", True), &ctx).unwrap();
        let ex = explain(&r);
        assert!(ex.cut_sets.is_empty());
        assert_eq!(ex.note, Some("no consistent cause"));
    }
}
