//! Comparison of failure modes and the impact of a proposed value change.

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::mode::{FailureMode, Value};
use crate::model::SystemModel;
use crate::oracle::{simulate, FaultAssignment, SimError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImpactError {
    #[error("cannot compare {0} with {1}: different value types")]
    CrossFamily(FailureMode, FailureMode),
    #[error("`{0}` is not a boundary variable")]
    NotBoundary(String),
    #[error("`{0}` is not a system output")]
    NotAnOutput(String),
    #[error("values for `{var}` do not match its type")]
    ValueType { var: String },
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Signed distance between two failure modes of the same family.
///
/// `1` for `h` against `l` (or `t` against `f`), `0.5` for a fault against
/// `m`, `0` for equal modes, negated when the arguments are swapped.
pub fn cmp(x: FailureMode, z: FailureMode) -> Result<f64, ImpactError> {
    use FailureMode::*;
    if let (Some(a), Some(b)) = (x.family(), z.family()) {
        if a != b {
            return Err(ImpactError::CrossFamily(x, z));
        }
    }
    Ok(match (x, z) {
        _ if x == z => 0.0,
        (High, Low) | (True, False) => 1.0,
        (Low, High) | (False, True) => -1.0,
        (High | True, Match) => 0.5,
        (Low | False, Match) => -0.5,
        // Not covered by the usual table; filled in antisymmetrically.
        (Match, High | True) => -0.5,
        (Match, Low | False) => 0.5,
        _ => unreachable!(),
    })
}

/// A proposed change of `variable` from `from` to `to`, judged on `outputs`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactQuery {
    pub variable: String,
    pub from: Value,
    pub to: Value,
    pub outputs: Vec<String>,
}

/// `Σ |cmp(ŷ_v, ŷ_w)|` over the query outputs, where `ŷ_v` is the output
/// mode with the reported value of the variable set to `v`. Intended values
/// stay as in the baseline.
pub fn impact(
    model: &SystemModel,
    q: &ImpactQuery,
    baseline: &FaultAssignment,
) -> Result<f64, ImpactError> {
    let decl = model
        .var(&q.variable)
        .filter(|_| model.is_boundary(&q.variable))
        .ok_or_else(|| ImpactError::NotBoundary(q.variable.clone()))?;
    if q.from.value_type() != decl.value_type || q.to.value_type() != decl.value_type {
        return Err(ImpactError::ValueType {
            var: q.variable.clone(),
        });
    }
    for o in &q.outputs {
        if !model.outputs.contains(o) {
            return Err(ImpactError::NotAnOutput(o.clone()));
        }
    }
    let intended = baseline
        .get(&q.variable)
        .map(|p| p.1)
        .ok_or_else(|| SimError::Missing(q.variable.clone()))?;
    let run = |v: Value| {
        let mut a = baseline.clone();
        a.insert(q.variable.clone(), (v, intended));
        simulate(model, &a)
    };
    let (at_v, at_w) = (run(q.from)?, run(q.to)?);
    let mut total = 0.0;
    for o in &q.outputs {
        total += cmp(at_v[o], at_w[o])?.abs();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kind::Kind;
    use crate::model::{ComponentDecl, VariableDecl};
    use FailureMode::*;

    #[test]
    fn table_cells() {
        assert_eq!(cmp(High, Low).unwrap(), 1.0);
        assert_eq!(cmp(False, True).unwrap(), -1.0);
        assert_eq!(cmp(True, Match).unwrap(), 0.5);
        assert_eq!(cmp(Low, Match).unwrap(), -0.5);
        for u in FailureMode::ALL {
            assert_eq!(cmp(u, u).unwrap(), 0.0);
        }
        assert!(cmp(High, True).is_err());
    }

    #[test]
    fn flipping_commission_to_match() {
        // y = p > x with x certain at 0; raising p past the threshold was the
        // fault, putting it back removes it.
        let m = SystemModel::new()
            .variable(VariableDecl::real("p"))
            .variable(VariableDecl::real("x").certain())
            .variable(VariableDecl::boolean("y"))
            .component(ComponentDecl::new("g", Kind::Gcom, &["p"], "y").with_params(&["x"]))
            .output("y");
        let mut base = FaultAssignment::new();
        base.insert("p".into(), (Value::Real(1.0), Value::Real(-1.0)));
        base.insert("x".into(), (Value::Real(0.0), Value::Real(0.0)));
        let q = ImpactQuery {
            variable: "p".into(),
            from: Value::Real(1.0),
            to: Value::Real(-2.0),
            outputs: alloc::vec!["y".into()],
        };
        assert_eq!(impact(&m, &q, &base).unwrap(), 0.5);
        let same = ImpactQuery { to: q.from, ..q };
        assert_eq!(impact(&m, &same, &base).unwrap(), 0.0);
    }
}
