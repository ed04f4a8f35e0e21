//! Dataflow models: declared variables, component instances and wiring.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::context::Knowledge;
use crate::kind::{Arity, Attrs, Kind};
use crate::mode::{Value, ValueType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarClass {
    /// Known to be correct; only ever in mode `m`.
    Certain,
    Suspicious,
}

impl VarClass {
    pub fn as_str(self) -> &'static str {
        match self {
            VarClass::Certain => "certain",
            VarClass::Suspicious => "suspicious",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariableDecl {
    pub name: String,
    pub value_type: ValueType,
    pub class: VarClass,
    pub known: Knowledge,
}

impl VariableDecl {
    pub fn new(name: impl Into<String>, value_type: ValueType, class: VarClass) -> Self {
        VariableDecl {
            name: name.into(),
            value_type,
            class,
            known: Knowledge::default(),
        }
    }

    pub fn real(name: impl Into<String>) -> Self {
        Self::new(name, ValueType::Real, VarClass::Suspicious)
    }

    pub fn boolean(name: impl Into<String>) -> Self {
        Self::new(name, ValueType::Bool, VarClass::Suspicious)
    }

    pub fn certain(mut self) -> Self {
        self.class = VarClass::Certain;
        self
    }

    pub fn with_known(mut self, known: Knowledge) -> Self {
        self.known = known;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecl {
    pub name: String,
    pub kind: Kind,
    pub inputs: Vec<String>,
    pub params: Vec<String>,
    pub outputs: Vec<String>,
    pub attrs: Attrs,
}

impl ComponentDecl {
    pub fn new(name: impl Into<String>, kind: Kind, inputs: &[&str], output: &str) -> Self {
        ComponentDecl {
            name: name.into(),
            kind,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            params: Vec::new(),
            outputs: alloc::vec![output.to_string()],
            attrs: Attrs::None,
        }
    }

    pub fn with_params(mut self, params: &[&str]) -> Self {
        self.params = params.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_attrs(mut self, attrs: Attrs) -> Self {
        self.attrs = attrs;
        self
    }

    /// Inputs followed by params, the order the local models use.
    pub fn args(&self) -> impl Iterator<Item = &String> {
        self.inputs.iter().chain(self.params.iter())
    }

    pub fn arg_count(&self) -> usize {
        self.inputs.len() + self.params.len()
    }

    pub fn output(&self) -> &str {
        &self.outputs[0]
    }
}

/// One violation of the model invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Diagnostic {
    #[error("variable `{0}` is declared more than once")]
    DuplicateVariable(String),
    #[error("component `{0}` is declared more than once")]
    DuplicateComponent(String),
    #[error("component `{component}` refers to undeclared variable `{var}`")]
    UndeclaredVariable { component: String, var: String },
    #[error("system output `{0}` is not declared")]
    UndeclaredOutput(String),
    #[error("variable `{var}` is produced by both `{first}` and `{second}`")]
    DuplicateProducer {
        var: String,
        first: String,
        second: String,
    },
    #[error("system output `{0}` has no producer")]
    NoProducer(String),
    #[error("component `{component}` ({kind}) takes {expected} arguments, got {found}")]
    ArityMismatch {
        component: String,
        kind: Kind,
        expected: Arity,
        found: usize,
    },
    #[error("component `{component}` ({kind}) has {found} outputs, expected 1")]
    OutputCount {
        component: String,
        kind: Kind,
        found: usize,
    },
    #[error("Lim component `{0}` needs one input and two params (lower, upper)")]
    LimiterShape(String),
    #[error("component `{component}` ({kind}) expects `{var}` to be {expected}, it is {found}")]
    TypeMismatch {
        component: String,
        kind: Kind,
        var: String,
        expected: ValueType,
        found: ValueType,
    },
    #[error("component `{component}`: {reason}")]
    BadAttrs { component: String, reason: String },
    #[error("variable `{var}` carries a known value of the wrong type")]
    KnownValueType { var: String },
    #[error("Boolean variable `{var}` cannot carry sign knowledge")]
    SignOnBoolean { var: String },
    #[error("certain variable `{var}` has different reported and intended values")]
    CertainDeviates { var: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid model: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
pub struct InvalidModel(pub Vec<Diagnostic>);

/// An edge that closes a cycle: `variable`, produced by `from`, is read by
/// `to` at argument position `slot`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeedbackEdge {
    pub variable: String,
    pub from: String,
    pub to: String,
    pub slot: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SystemModel {
    pub variables: Vec<VariableDecl>,
    pub components: Vec<ComponentDecl>,
    pub outputs: Vec<String>,
}

impl SystemModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn variable(mut self, v: VariableDecl) -> Self {
        self.variables.push(v);
        self
    }

    pub fn component(mut self, c: ComponentDecl) -> Self {
        self.components.push(c);
        self
    }

    pub fn output(mut self, name: &str) -> Self {
        self.outputs.push(name.to_string());
        self
    }

    pub fn var(&self, name: &str) -> Option<&VariableDecl> {
        self.variables.iter().find(|v| v.name == name)
    }

    pub fn component_named(&self, name: &str) -> Option<&ComponentDecl> {
        self.components.iter().find(|c| c.name == name)
    }

    /// The component producing `var`, if any.
    pub fn producer(&self, var: &str) -> Option<&ComponentDecl> {
        self.components
            .iter()
            .find(|c| c.outputs.iter().any(|o| o == var))
    }

    /// Variables no component produces: external inputs and parameters.
    pub fn boundary_variables(&self) -> Vec<&VariableDecl> {
        let produced: BTreeSet<&str> = self
            .components
            .iter()
            .flat_map(|c| c.outputs.iter().map(String::as_str))
            .collect();
        self.variables
            .iter()
            .filter(|v| !produced.contains(v.name.as_str()))
            .collect()
    }

    pub fn is_boundary(&self, var: &str) -> bool {
        self.producer(var).is_none()
    }

    /// All invariant violations, in a fixed order.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut types: BTreeMap<&str, ValueType> = BTreeMap::new();
        for v in &self.variables {
            if types.insert(&v.name, v.value_type).is_some() {
                out.push(Diagnostic::DuplicateVariable(v.name.clone()));
            }
            out.extend(check_knowledge(v));
        }
        let mut names = BTreeSet::new();
        let mut producers: BTreeMap<&str, &str> = BTreeMap::new();
        for c in &self.components {
            if !names.insert(c.name.as_str()) {
                out.push(Diagnostic::DuplicateComponent(c.name.clone()));
            }
            for o in &c.outputs {
                if let Some(first) = producers.insert(o, &c.name) {
                    out.push(Diagnostic::DuplicateProducer {
                        var: o.clone(),
                        first: first.to_string(),
                        second: c.name.clone(),
                    });
                    producers.insert(o, first);
                }
            }
            out.extend(check_component(c, &types));
        }
        for o in &self.outputs {
            if !types.contains_key(o.as_str()) {
                out.push(Diagnostic::UndeclaredOutput(o.clone()));
            } else if !producers.contains_key(o.as_str()) {
                out.push(Diagnostic::NoProducer(o.clone()));
            }
        }
        out
    }

    pub fn check(&self) -> Result<(), InvalidModel> {
        let d = self.validate();
        if d.is_empty() {
            Ok(())
        } else {
            Err(InvalidModel(d))
        }
    }

    fn edges(&self) -> Vec<FeedbackEdge> {
        let mut edges = Vec::new();
        for c in &self.components {
            for (slot, a) in c.args().enumerate() {
                if let Some(p) = self.producer(a) {
                    edges.push(FeedbackEdge {
                        variable: a.clone(),
                        from: p.name.clone(),
                        to: c.name.clone(),
                        slot,
                    });
                }
            }
        }
        edges.sort();
        edges
    }

    /// Components in dependency order (producers first), or `None` when the
    /// wiring has a cycle. Ties are broken by component name.
    pub fn topological_order(&self) -> Option<Vec<&ComponentDecl>> {
        let edges = self.edges();
        toposort(&self.component_names(), &edges).map(|names| {
            names
                .iter()
                .map(|n| self.component_named(n).unwrap())
                .collect()
        })
    }

    fn component_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.components.iter().map(|c| c.name.clone()).collect();
        names.sort();
        names.dedup();
        names
    }

    /// A minimal set of edges whose removal leaves the wiring acyclic.
    ///
    /// Inside every cyclic strongly connected component the edges entering
    /// its lexicographically least component are cut; this repeats until no
    /// cycle is left. Cut edges that turn out to be redundant are then
    /// restored one at a time, in order.
    pub fn detect_loops(&self) -> BTreeSet<FeedbackEdge> {
        let nodes = self.component_names();
        let mut kept = self.edges();
        let mut cut = BTreeSet::new();
        loop {
            let cyclic: Vec<Vec<String>> = scc(&nodes, &kept)
                .into_iter()
                .filter(|s| s.len() > 1 || kept.iter().any(|e| e.from == s[0] && e.to == s[0]))
                .collect();
            if cyclic.is_empty() {
                break;
            }
            for group in cyclic {
                let head = group.iter().min().unwrap();
                kept.retain(|e| {
                    let entering = &e.to == head && group.contains(&e.from);
                    if entering {
                        cut.insert(e.clone());
                    }
                    !entering
                });
            }
        }
        for e in cut.clone() {
            kept.push(e.clone());
            if toposort(&nodes, &kept).is_some() {
                cut.remove(&e);
            } else {
                kept.pop();
            }
        }
        cut
    }
}

fn check_knowledge(v: &VariableDecl) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let k = &v.known;
    let bad_type = [k.reported, k.intended]
        .iter()
        .flatten()
        .any(|x| x.value_type() != v.value_type);
    if bad_type {
        out.push(Diagnostic::KnownValueType {
            var: v.name.clone(),
        });
    }
    if k.sign.is_some() && v.value_type == ValueType::Bool {
        out.push(Diagnostic::SignOnBoolean {
            var: v.name.clone(),
        });
    }
    if v.class == VarClass::Certain && !bad_type {
        if let (Some(r), Some(i)) = (k.reported, k.intended) {
            if r != i {
                out.push(Diagnostic::CertainDeviates {
                    var: v.name.clone(),
                });
            }
        }
    }
    if let Some(Value::Real(x)) = k.reported.or(k.intended) {
        if x.is_nan() {
            out.push(Diagnostic::KnownValueType {
                var: v.name.clone(),
            });
        }
    }
    out
}

fn check_component(c: &ComponentDecl, types: &BTreeMap<&str, ValueType>) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    match c.attrs.expected_arity(c.kind) {
        Err(reason) => out.push(Diagnostic::BadAttrs {
            component: c.name.clone(),
            reason,
        }),
        Ok(arity) => {
            if !arity.accepts(c.arg_count()) {
                out.push(Diagnostic::ArityMismatch {
                    component: c.name.clone(),
                    kind: c.kind,
                    expected: arity,
                    found: c.arg_count(),
                });
            } else if c.kind == Kind::Lim && (c.inputs.len() != 1 || c.params.len() != 2) {
                out.push(Diagnostic::LimiterShape(c.name.clone()));
            }
        }
    }
    if c.outputs.len() != 1 {
        out.push(Diagnostic::OutputCount {
            component: c.name.clone(),
            kind: c.kind,
            found: c.outputs.len(),
        });
    }
    let wires = c
        .args()
        .map(|a| (a, c.kind.input_type()))
        .chain(c.outputs.iter().map(|o| (o, c.kind.output_type())));
    for (var, expected) in wires {
        match types.get(var.as_str()) {
            None => out.push(Diagnostic::UndeclaredVariable {
                component: c.name.clone(),
                var: var.clone(),
            }),
            Some(&found) if found != expected => out.push(Diagnostic::TypeMismatch {
                component: c.name.clone(),
                kind: c.kind,
                var: var.clone(),
                expected,
                found,
            }),
            Some(_) => {}
        }
    }
    out
}

/// Kahn's algorithm with name-ordered tie breaking.
fn toposort(nodes: &[String], edges: &[FeedbackEdge]) -> Option<Vec<String>> {
    let mut indegree: BTreeMap<&str, usize> = nodes.iter().map(|n| (n.as_str(), 0)).collect();
    for e in edges {
        *indegree.get_mut(e.to.as_str())? += 1;
    }
    let mut ready: BTreeSet<&str> = indegree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(n, _)| *n)
        .collect();
    let mut order = Vec::with_capacity(nodes.len());
    while let Some(n) = ready.pop_first() {
        order.push(n.to_string());
        for e in edges.iter().filter(|e| e.from == n) {
            let d = indegree.get_mut(e.to.as_str()).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.insert(&e.to);
            }
        }
    }
    (order.len() == nodes.len()).then_some(order)
}

/// Strongly connected components (Tarjan), each sorted, in a deterministic
/// order.
fn scc(nodes: &[String], edges: &[FeedbackEdge]) -> Vec<Vec<String>> {
    struct State<'a> {
        succ: BTreeMap<&'a str, Vec<&'a str>>,
        index: BTreeMap<&'a str, usize>,
        low: BTreeMap<&'a str, usize>,
        stack: Vec<&'a str>,
        on_stack: BTreeSet<&'a str>,
        next: usize,
        out: Vec<Vec<String>>,
    }

    fn visit<'a>(s: &mut State<'a>, v: &'a str) {
        s.index.insert(v, s.next);
        s.low.insert(v, s.next);
        s.next += 1;
        s.stack.push(v);
        s.on_stack.insert(v);
        let succ = s.succ.get(v).cloned().unwrap_or_default();
        for w in succ {
            if !s.index.contains_key(w) {
                visit(s, w);
                let lw = s.low[w];
                let lv = s.low.get_mut(v).unwrap();
                *lv = (*lv).min(lw);
            } else if s.on_stack.contains(w) {
                let iw = s.index[w];
                let lv = s.low.get_mut(v).unwrap();
                *lv = (*lv).min(iw);
            }
        }
        if s.low[v] == s.index[v] {
            let mut group = Vec::new();
            loop {
                let w = s.stack.pop().unwrap();
                s.on_stack.remove(w);
                group.push(w.to_string());
                if w == v {
                    break;
                }
            }
            group.sort();
            s.out.push(group);
        }
    }

    let mut succ: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for e in edges {
        succ.entry(e.from.as_str()).or_default().push(e.to.as_str());
    }
    let mut s = State {
        succ,
        index: BTreeMap::new(),
        low: BTreeMap::new(),
        stack: Vec::new(),
        on_stack: BTreeSet::new(),
        next: 0,
        out: Vec::new(),
    };
    for n in nodes {
        if !s.index.contains_key(n.as_str()) {
            visit(&mut s, n);
        }
    }
    s.out.sort();
    s.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::Sign;

    fn comparators() -> SystemModel {
        SystemModel::new()
            .variable(VariableDecl::real("x").certain())
            .variable(VariableDecl::real("p1"))
            .variable(VariableDecl::real("p2"))
            .variable(VariableDecl::boolean("z1"))
            .variable(VariableDecl::boolean("z2"))
            .variable(VariableDecl::boolean("y"))
            .component(ComponentDecl::new("lcom", Kind::Lcom, &["x"], "z1").with_params(&["p1"]))
            .component(ComponentDecl::new("gcom", Kind::Gcom, &["x"], "z2").with_params(&["p2"]))
            .component(ComponentDecl::new("or", Kind::Or, &["z1", "z2"], "y"))
            .output("y")
    }

    #[test]
    fn small_model_is_valid() {
        let m = comparators();
        assert_eq!(m.validate(), Vec::new());
        let names: Vec<_> = m
            .boundary_variables()
            .iter()
            .map(|v| v.name.as_str())
            .collect();
        assert_eq!(names, ["x", "p1", "p2"]);
        assert!(m.detect_loops().is_empty());
        let order: Vec<_> = m
            .topological_order()
            .unwrap()
            .iter()
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(order, ["gcom", "lcom", "or"]);
    }

    #[test]
    fn missing_producer() {
        let m = SystemModel::new()
            .variable(VariableDecl::boolean("y"))
            .output("y");
        assert_eq!(m.validate(), [Diagnostic::NoProducer("y".into())]);
    }

    #[test]
    fn boolean_wire_into_add() {
        let m = SystemModel::new()
            .variable(VariableDecl::boolean("a"))
            .variable(VariableDecl::real("b"))
            .variable(VariableDecl::real("y"))
            .component(ComponentDecl::new("add", Kind::Add, &["a", "b"], "y"))
            .output("y");
        let d = m.validate();
        assert_eq!(d.len(), 1);
        assert!(matches!(d[0], Diagnostic::TypeMismatch { .. }));
    }

    #[test]
    fn koon_attrs_are_checked() {
        let m = SystemModel::new()
            .variable(VariableDecl::boolean("a"))
            .variable(VariableDecl::boolean("b"))
            .variable(VariableDecl::boolean("y"))
            .component(
                ComponentDecl::new("v", Kind::KooN, &["a", "b"], "y")
                    .with_attrs(Attrs::KooN { k: 3, n: 2 }),
            )
            .output("y");
        let d = m.validate();
        assert_eq!(d.len(), 1);
        assert!(matches!(d[0], Diagnostic::BadAttrs { .. }));
    }

    #[test]
    fn duplicate_producer_and_knowledge_checks() {
        let m = SystemModel::new()
            .variable(VariableDecl::boolean("a").with_known(Knowledge {
                sign: Some(Sign::Pos),
                ..Knowledge::default()
            }))
            .variable(VariableDecl::boolean("y"))
            .component(ComponentDecl::new("n1", Kind::Not, &["a"], "y"))
            .component(ComponentDecl::new("n2", Kind::Not, &["a"], "y"))
            .output("y");
        let d = m.validate();
        assert!(d.contains(&Diagnostic::SignOnBoolean { var: "a".into() }));
        assert!(d
            .iter()
            .any(|x| matches!(x, Diagnostic::DuplicateProducer { .. })));
        assert_eq!(m.validate(), d);
    }

    #[test]
    fn self_loop() {
        let m = SystemModel::new()
            .variable(VariableDecl::boolean("x"))
            .variable(VariableDecl::boolean("y"))
            .component(ComponentDecl::new("f", Kind::Or, &["x", "y"], "y"))
            .output("y");
        assert!(m.validate().is_empty());
        assert!(m.topological_order().is_none());
        let loops: Vec<_> = m.detect_loops().into_iter().collect();
        assert_eq!(
            loops,
            [FeedbackEdge {
                variable: "y".into(),
                from: "f".into(),
                to: "f".into(),
                slot: 1
            }]
        );
    }

    #[test]
    fn two_component_cycle() {
        let m = SystemModel::new()
            .variable(VariableDecl::boolean("x"))
            .variable(VariableDecl::boolean("u"))
            .variable(VariableDecl::boolean("y"))
            .component(ComponentDecl::new("b", Kind::And, &["x", "y"], "u"))
            .component(ComponentDecl::new("a", Kind::Not, &["u"], "y"))
            .output("y");
        let loops = m.detect_loops();
        assert_eq!(loops.len(), 1);
        let e = loops.iter().next().unwrap();
        assert_eq!((e.from.as_str(), e.to.as_str()), ("b", "a"));
    }
}
