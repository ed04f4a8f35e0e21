//! Forward fault simulation.
//!
//! The oracle knows nothing about failure expressions. It evaluates each
//! component twice, once on reported and once on intended values, and
//! classifies every wire with [`md`]. The verifiers in [`verify`] enumerate
//! assignments of (reported, intended) pairs and compare the observed output
//! modes with derived models.

pub mod sampler;
pub mod truth_table;
pub mod verify;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::kind::{apply, Attrs, EvalError, Kind};
use crate::mode::{md, FailureMode, Sign, Value};
use crate::model::{InvalidModel, SystemModel};

pub use sampler::SamplerGrid;
pub use truth_table::{truth_table, TruthTable, TruthTableRow};
pub use verify::{
    verify_certain_cause, verify_minimum_conditions, verify_result, Audit, Counterexample, Verdict,
    VerifyOptions,
};

/// Reported and intended value of every boundary variable.
pub type FaultAssignment = BTreeMap<String, (Value, Value)>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    InvalidModel(#[from] InvalidModel),
    #[error("the model has a loop; break it before simulating")]
    Loop,
    #[error("no value for boundary variable `{0}`")]
    Missing(String),
    #[error("component `{component}`: {source}")]
    Eval {
        component: String,
        source: EvalError,
    },
    #[error("component `{0}`: the fault moves the argument across zero")]
    SignCrossing(String),
}

impl SimError {
    /// The assignment lies outside a component's domain; enumerations skip
    /// such assignments.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            SimError::SignCrossing(_)
                | SimError::Eval {
                    source: EvalError::Domain { .. },
                    ..
                }
        )
    }
}

#[derive(Debug, Clone)]
struct Node {
    name: String,
    kind: Kind,
    attrs: Attrs,
    args: Vec<usize>,
    out: usize,
}

/// A model flattened into index form for repeated simulation.
#[derive(Debug, Clone)]
pub struct Circuit {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    boundary: Vec<usize>,
    nodes: Vec<Node>,
}

impl Circuit {
    pub fn compile(model: &SystemModel) -> Result<Circuit, SimError> {
        model.check()?;
        let order = model.topological_order().ok_or(SimError::Loop)?;
        let names: Vec<String> = model.variables.iter().map(|v| v.name.clone()).collect();
        let index: BTreeMap<String, usize> = names
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, n)| (n, i))
            .collect();
        let boundary = model
            .boundary_variables()
            .iter()
            .map(|v| index[&v.name])
            .collect();
        let nodes = order
            .iter()
            .map(|c| Node {
                name: c.name.clone(),
                kind: c.kind,
                attrs: c.attrs.clone(),
                args: c.args().map(|a| index[a]).collect(),
                out: index[c.output()],
            })
            .collect();
        Ok(Circuit {
            names,
            index,
            boundary,
            nodes,
        })
    }

    pub fn variable_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Indices of the boundary variables, in declaration order.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    /// Evaluates both worlds in place. `values` is indexed by variable and
    /// must hold the boundary pairs; every other slot is overwritten.
    pub fn run(&self, values: &mut [(Value, Value)]) -> Result<(), SimError> {
        let mut rep = Vec::new();
        let mut int = Vec::new();
        for n in &self.nodes {
            rep.clear();
            int.clear();
            for &a in &n.args {
                rep.push(values[a].0);
                int.push(values[a].1);
            }
            if n.kind == Kind::Inv {
                let (r, i) = (rep[0].as_real(), int[0].as_real());
                if let (Some(r), Some(i)) = (r, i) {
                    if Sign::of(r) != Sign::of(i) {
                        return Err(SimError::SignCrossing(n.name.clone()));
                    }
                }
            }
            let eval = |args: &[Value]| {
                apply(n.kind, &n.attrs, args).map_err(|source| SimError::Eval {
                    component: n.name.clone(),
                    source,
                })
            };
            values[n.out] = (eval(&rep)?, eval(&int)?);
        }
        Ok(())
    }

    /// Failure mode of variable `i` after [`Circuit::run`].
    pub fn mode(&self, values: &[(Value, Value)], i: usize) -> FailureMode {
        let (r, v) = values[i];
        md(r, v).expect("simulated values are well typed")
    }
}

/// Simulates a loop-free model and returns the failure mode of every
/// variable.
pub fn simulate(
    model: &SystemModel,
    a: &FaultAssignment,
) -> Result<BTreeMap<String, FailureMode>, SimError> {
    let circuit = Circuit::compile(model)?;
    let placeholder = (Value::Bool(false), Value::Bool(false));
    let mut values = alloc::vec![placeholder; circuit.variable_count()];
    for &b in circuit.boundary() {
        let name = circuit.name(b);
        values[b] = *a.get(name).ok_or_else(|| SimError::Missing(name.into()))?;
    }
    circuit.run(&mut values)?;
    Ok((0..circuit.variable_count())
        .map(|i| (circuit.name(i).into(), circuit.mode(&values, i)))
        .collect())
}

/// Reported-world values only, for what-if evaluation.
pub fn simulate_values(
    model: &SystemModel,
    a: &FaultAssignment,
) -> Result<BTreeMap<String, (Value, Value)>, SimError> {
    let circuit = Circuit::compile(model)?;
    let placeholder = (Value::Bool(false), Value::Bool(false));
    let mut values = alloc::vec![placeholder; circuit.variable_count()];
    for &b in circuit.boundary() {
        let name = circuit.name(b);
        values[b] = *a.get(name).ok_or_else(|| SimError::Missing(name.into()))?;
    }
    circuit.run(&mut values)?;
    Ok((0..circuit.variable_count())
        .map(|i| (circuit.name(i).into(), values[i]))
        .collect())
}
