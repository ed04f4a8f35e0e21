//! Random and single-component models for property tests.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::kind::{Attrs, Kind};
use crate::model::{ComponentDecl, SystemModel, VariableDecl};

#[derive(Debug, Clone)]
pub struct GenOptions {
    pub max_components: usize,
    pub max_boundary: usize,
    pub kinds: Vec<Kind>,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            max_components: 4,
            max_boundary: 6,
            kinds: alloc::vec![
                Kind::And,
                Kind::Or,
                Kind::Not,
                Kind::KooN,
                Kind::Dnf,
                Kind::Cnf
            ],
        }
    }
}

fn attrs_and_arity<R: Rng>(rng: &mut R, kind: Kind) -> (Attrs, usize) {
    match kind {
        Kind::Not => (Attrs::None, 1),
        Kind::And | Kind::Or => (Attrs::None, rng.gen_range(2..=3)),
        Kind::KooN => {
            let n = rng.gen_range(2..=3);
            (
                Attrs::KooN {
                    k: rng.gen_range(1..=n),
                    n,
                },
                n,
            )
        }
        Kind::Dnf | Kind::Cnf => {
            let (rows, cols) = *[(1, 2), (2, 1), (2, 2)].choose(rng).unwrap();
            (Attrs::Grid { rows, cols }, rows * cols)
        }
        k => panic!("{k} is not a Boolean kind"),
    }
}

/// A model in which every wire and every boundary variable is read exactly
/// once, so the components form a tree rooted at the output `y`.
pub fn random_tree_model<R: Rng>(rng: &mut R, opts: &GenOptions) -> SystemModel {
    struct St<'a, R> {
        rng: &'a mut R,
        opts: &'a GenOptions,
        model: SystemModel,
        comps: usize,
        leaves: usize,
        frontier: usize,
    }
    fn node<R: Rng>(st: &mut St<'_, R>, root: bool) -> String {
        let kind = *st.opts.kinds.choose(st.rng).unwrap();
        let (attrs, arity) = attrs_and_arity(st.rng, kind);
        // `frontier` counts the leaves the tree would have if every open
        // slot became a boundary variable.
        let fits = st.frontier + arity - 1 <= st.opts.max_boundary;
        let grow = st.comps < st.opts.max_components && fits && (root || st.rng.gen_bool(0.5));
        if !grow {
            let name = format!("x{}", st.leaves + 1);
            st.leaves += 1;
            st.model.variables.push(VariableDecl::boolean(name.clone()));
            return name;
        }
        st.comps += 1;
        st.frontier += arity - 1;
        let id = st.comps;
        let out = if root {
            String::from("y")
        } else {
            format!("w{id}")
        };
        let args: Vec<String> = (0..arity).map(|_| node(st, false)).collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        st.model.variables.push(VariableDecl::boolean(out.clone()));
        st.model
            .components
            .push(ComponentDecl::new(format!("c{id}"), kind, &args, &out).with_attrs(attrs));
        out
    }
    let mut st = St {
        rng,
        opts,
        model: SystemModel::new(),
        comps: 0,
        leaves: 0,
        frontier: 1,
    };
    node(&mut st, true);
    st.model.outputs.push(String::from("y"));
    st.model
}

/// A model whose components read boundary variables or earlier outputs, so
/// wires may fan out. The last component drives the output `y`.
pub fn random_dag_model<R: Rng>(rng: &mut R, opts: &GenOptions) -> SystemModel {
    let n = rng.gen_range(1..=opts.max_components);
    let boundary = rng.gen_range(1..=opts.max_boundary);
    let mut m = SystemModel::new();
    for i in 1..=boundary {
        m.variables.push(VariableDecl::boolean(format!("x{i}")));
    }
    let mut wires: Vec<String> = Vec::new();
    for id in 1..=n {
        let kind = *opts.kinds.choose(rng).unwrap();
        let (attrs, arity) = attrs_and_arity(rng, kind);
        let args: Vec<String> = (0..arity)
            .map(|_| {
                if !wires.is_empty() && rng.gen_bool(0.4) {
                    wires.choose(rng).unwrap().clone()
                } else {
                    format!("x{}", rng.gen_range(1..=boundary))
                }
            })
            .collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = if id == n {
            String::from("y")
        } else {
            format!("w{id}")
        };
        m.variables.push(VariableDecl::boolean(out.clone()));
        m.components
            .push(ComponentDecl::new(format!("c{id}"), kind, &args, &out).with_attrs(attrs));
        wires.push(out);
    }
    // Boundary variables nothing reads are dropped.
    let used: Vec<String> = m
        .components
        .iter()
        .flat_map(|c| c.args().cloned())
        .collect();
    m.variables
        .retain(|v| !v.name.starts_with('x') || used.contains(&v.name));
    m.outputs.push(String::from("y"));
    m
}

/// A random And/Or/Not model with one feedback connection: some component
/// additionally reads a wire computed downstream of it. Returns the model
/// and the looped wire.
pub fn random_loop_model<R: Rng>(
    rng: &mut R,
    max_components: usize,
    max_boundary: usize,
) -> (SystemModel, String) {
    let opts = GenOptions {
        max_components,
        max_boundary,
        kinds: alloc::vec![Kind::And, Kind::Or, Kind::Not],
    };
    loop {
        let mut m = random_dag_model(rng, &opts);
        let mut candidates = Vec::new();
        for (j, cj) in m.components.iter().enumerate() {
            for (i, ci) in m.components.iter().enumerate() {
                let gate = matches!(ci.kind, Kind::And | Kind::Or);
                if gate && (i == j || reaches(&m, &ci.outputs[0], &cj.name)) {
                    candidates.push((i, j));
                }
            }
        }
        if let Some(&(i, j)) = candidates.choose(rng) {
            let wire = m.components[j].outputs[0].clone();
            m.components[i].inputs.push(wire.clone());
            return (m, wire);
        }
    }
}

/// Whether `wire` feeds component `target`, directly or through others.
fn reaches(m: &SystemModel, wire: &str, target: &str) -> bool {
    let mut stack = alloc::vec![String::from(wire)];
    let mut seen = Vec::new();
    while let Some(w) = stack.pop() {
        for c in &m.components {
            if c.args().any(|a| *a == w) {
                if c.name == target {
                    return true;
                }
                if !seen.contains(&c.name) {
                    seen.push(c.name.clone());
                    stack.push(c.outputs[0].clone());
                }
            }
        }
    }
    false
}

/// One component `g` reading suspicious inputs `x1..xn` and certain params,
/// driving the output `y`.
pub fn single_component(
    kind: Kind,
    attrs: Attrs,
    inputs: usize,
    certain_params: &[&str],
) -> SystemModel {
    let decl = |name: String, ty| match ty {
        crate::mode::ValueType::Real => VariableDecl::real(name),
        crate::mode::ValueType::Bool => VariableDecl::boolean(name),
    };
    let names: Vec<String> = (1..=inputs).map(|i| format!("x{i}")).collect();
    let mut m = SystemModel::new();
    for n in &names {
        m.variables.push(decl(n.clone(), kind.input_type()));
    }
    for p in certain_params {
        m.variables
            .push(decl(String::from(*p), kind.input_type()).certain());
    }
    m.variables
        .push(decl(String::from("y"), kind.output_type()));
    let args: Vec<&str> = names.iter().map(String::as_str).collect();
    m.components.push(
        ComponentDecl::new("g", kind, &args, "y")
            .with_params(certain_params)
            .with_attrs(attrs),
    );
    m.outputs.push(String::from("y"));
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_models_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let opts = GenOptions::default();
        for _ in 0..200 {
            let t = random_tree_model(&mut rng, &opts);
            assert_eq!(t.validate(), []);
            assert!(t.components.len() <= 4);
            assert!(t.boundary_variables().len() <= 6);
            let d = random_dag_model(&mut rng, &opts);
            assert_eq!(d.validate(), []);
            assert!(d.topological_order().is_some());
        }
    }

    #[test]
    fn loop_models_have_a_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let (m, _) = random_loop_model(&mut rng, 3, 4);
            assert_eq!(m.validate(), []);
            assert!(m.topological_order().is_none());
            assert!(!m.detect_loops().is_empty());
        }
    }
}
