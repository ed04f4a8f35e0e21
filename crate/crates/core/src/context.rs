//! Prior knowledge and reasoning policy for an analysis.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use core::fmt;

use thiserror::Error;

use crate::expr::Literal;
use crate::mode::{md, FailureMode, Sign, Value, ValueType};
use crate::model::{SystemModel, VarClass};

/// What the engine concludes about inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausePolicy {
    /// Conjunctions of input faults that guarantee the output failure.
    CertainCauses,
    /// The weakest condition every explaining fault assignment satisfies.
    MinimumConditions,
}

impl CausePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            CausePolicy::CertainCauses => "certain",
            CausePolicy::MinimumConditions => "minimum",
        }
    }
}

impl fmt::Display for CausePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Whether known values of suspicious variables are used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValuePolicy {
    Independent,
    Dependent,
}

impl ValuePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            ValuePolicy::Independent => "independent",
            ValuePolicy::Dependent => "dependent",
        }
    }
}

impl fmt::Display for ValuePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Facts known about one variable.
///
/// `sign` is a sign that holds in both the reported and the intended world
/// (the fault does not change it). `reported`/`intended` are concrete values.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Knowledge {
    pub sign: Option<Sign>,
    pub reported: Option<Value>,
    pub intended: Option<Value>,
}

impl Knowledge {
    pub fn is_empty(&self) -> bool {
        self.sign.is_none() && self.reported.is_none() && self.intended.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("value-dependent reasoning requested but no variable carries a known value or sign")]
    NoValueKnowledge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeContext {
    pub cause: CausePolicy,
    pub values: ValuePolicy,
    certain: BTreeSet<String>,
    knowledge: BTreeMap<String, Knowledge>,
    types: BTreeMap<String, ValueType>,
}

impl KnowledgeContext {
    pub fn new(cause: CausePolicy, values: ValuePolicy) -> Self {
        KnowledgeContext {
            cause,
            values,
            certain: BTreeSet::new(),
            knowledge: BTreeMap::new(),
            types: BTreeMap::new(),
        }
    }

    /// Certain causes, value-independent.
    pub fn certain_causes() -> Self {
        Self::new(CausePolicy::CertainCauses, ValuePolicy::Independent)
    }

    /// Minimum conditions, value-independent.
    pub fn minimum_conditions() -> Self {
        Self::new(CausePolicy::MinimumConditions, ValuePolicy::Independent)
    }

    pub fn from_model(model: &SystemModel, cause: CausePolicy, values: ValuePolicy) -> Self {
        let mut ctx = Self::new(cause, values);
        for v in &model.variables {
            ctx.types.insert(v.name.clone(), v.value_type);
            if v.class == VarClass::Certain {
                ctx.certain.insert(v.name.clone());
            }
            if !v.known.is_empty() {
                ctx.knowledge.insert(v.name.clone(), v.known);
            }
        }
        ctx
    }

    pub fn with_certain(mut self, var: impl Into<String>) -> Self {
        self.certain.insert(var.into());
        self
    }

    pub fn with_knowledge(mut self, var: impl Into<String>, k: Knowledge) -> Self {
        self.knowledge.insert(var.into(), k);
        self
    }

    pub fn with_policy(mut self, cause: CausePolicy, values: ValuePolicy) -> Self {
        self.cause = cause;
        self.values = values;
        self
    }

    pub fn mark_certain(&mut self, var: impl Into<String>) {
        self.certain.insert(var.into());
    }

    pub fn is_certain(&self, var: &str) -> bool {
        self.certain.contains(var)
    }

    pub fn certain_variables(&self) -> impl Iterator<Item = &str> {
        self.certain.iter().map(String::as_str)
    }

    pub fn knowledge(&self, var: &str) -> Option<&Knowledge> {
        self.knowledge.get(var)
    }

    pub fn value_type(&self, var: &str) -> Option<ValueType> {
        self.types.get(var).copied()
    }

    fn uses_values_of(&self, var: &str) -> bool {
        self.values == ValuePolicy::Dependent || self.is_certain(var)
    }

    /// Reported value, if known and usable under the current policy. For a
    /// certain variable reported and intended coincide.
    pub fn known_reported(&self, var: &str) -> Option<Value> {
        if !self.uses_values_of(var) {
            return None;
        }
        let k = self.knowledge.get(var)?;
        if self.is_certain(var) {
            k.reported.or(k.intended)
        } else {
            k.reported
        }
    }

    pub fn known_intended(&self, var: &str) -> Option<Value> {
        if !self.uses_values_of(var) {
            return None;
        }
        let k = self.knowledge.get(var)?;
        if self.is_certain(var) {
            k.intended.or(k.reported)
        } else {
            k.intended
        }
    }

    /// A sign that holds in both worlds. Certain variables derive it from any
    /// known value; suspicious ones only from declared sign knowledge under
    /// value-dependent reasoning.
    pub fn stable_sign(&self, var: &str) -> Option<Sign> {
        if !self.uses_values_of(var) {
            return None;
        }
        let k = self.knowledge.get(var)?;
        if let Some(s) = k.sign {
            return Some(s);
        }
        if self.is_certain(var) {
            if let Some(v) = k.reported.or(k.intended).and_then(Value::as_real) {
                return Some(Sign::of(v));
            }
        }
        if let (Some(r), Some(i)) = (k.reported, k.intended) {
            let (rs, is) = (Sign::of(r.as_real()?), Sign::of(i.as_real()?));
            if rs == is {
                return Some(rs);
            }
        }
        None
    }

    /// Sign of the reported value, when it is known.
    pub fn reported_sign(&self, var: &str) -> Option<Sign> {
        self.known_reported(var)
            .and_then(Value::as_real)
            .map(Sign::of)
    }

    /// Resolves a literal against what is known: `Some(false)` if its mode is
    /// impossible, `Some(true)` if it is forced, `None` otherwise.
    pub fn literal_truth(&self, lit: &Literal) -> Option<bool> {
        if self.is_certain(&lit.var) {
            return Some(lit.mode == FailureMode::Match);
        }
        if self.values != ValuePolicy::Dependent {
            return None;
        }
        let k = self.knowledge.get(&lit.var)?;
        if let (Some(r), Some(i)) = (k.reported, k.intended) {
            if let Ok(actual) = md(r, i) {
                return Some(actual == lit.mode);
            }
        }
        if k.sign == Some(Sign::Zero) {
            return Some(lit.mode == FailureMode::Match);
        }
        let excluded = match lit.mode {
            FailureMode::True => {
                k.reported == Some(Value::Bool(false)) || k.intended == Some(Value::Bool(true))
            }
            FailureMode::False => {
                k.reported == Some(Value::Bool(true)) || k.intended == Some(Value::Bool(false))
            }
            _ => false,
        };
        if excluded {
            Some(false)
        } else {
            None
        }
    }

    /// Value-dependent reasoning is only meaningful with some knowledge.
    pub fn check(&self) -> Result<(), ContextError> {
        if self.values == ValuePolicy::Dependent && self.knowledge.values().all(Knowledge::is_empty)
        {
            return Err(ContextError::NoValueKnowledge);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FailureMode::*;

    #[test]
    fn certain_variables_resolve() {
        let ctx = KnowledgeContext::certain_causes().with_certain("x");
        assert_eq!(ctx.literal_truth(&Literal::new("x", High)), Some(false));
        assert_eq!(ctx.literal_truth(&Literal::new("x", Match)), Some(true));
        assert_eq!(ctx.literal_truth(&Literal::new("p", High)), None);
    }

    #[test]
    fn known_values_only_count_when_dependent() {
        let k = Knowledge {
            reported: Some(Value::Bool(false)),
            ..Knowledge::default()
        };
        let indep = KnowledgeContext::minimum_conditions().with_knowledge("a", k);
        assert_eq!(indep.literal_truth(&Literal::new("a", True)), None);
        let dep = indep.with_policy(CausePolicy::MinimumConditions, ValuePolicy::Dependent);
        assert_eq!(dep.literal_truth(&Literal::new("a", True)), Some(false));
        assert_eq!(dep.literal_truth(&Literal::new("a", False)), None);
        assert_eq!(dep.known_reported("a"), Some(Value::Bool(false)));
    }

    #[test]
    fn certain_sign_comes_from_value() {
        let k = Knowledge {
            reported: Some(Value::Real(-3.0)),
            ..Knowledge::default()
        };
        let ctx = KnowledgeContext::certain_causes()
            .with_certain("p")
            .with_knowledge("p", k);
        assert_eq!(ctx.stable_sign("p"), Some(Sign::Neg));
        let sus = KnowledgeContext::certain_causes().with_knowledge("q", k);
        assert_eq!(sus.stable_sign("q"), None);
    }

    #[test]
    fn dependent_needs_knowledge() {
        let ctx = KnowledgeContext::new(CausePolicy::CertainCauses, ValuePolicy::Dependent);
        assert_eq!(ctx.check(), Err(ContextError::NoValueKnowledge));
        assert!(KnowledgeContext::certain_causes().check().is_ok());
    }
}
