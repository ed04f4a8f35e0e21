//! JSON model files.
//!
//! ```json
//! {
//!   "variables": [{"name": "x", "type": "real", "class": "certain", "known": {"sign": "pos"}}],
//!   "components": [{"name": "c", "kind": "KooN", "inputs": ["a", "b"], "params": [],
//!                   "outputs": ["y"], "attrs": {"k": 1, "n": 2}}],
//!   "outputs": ["y"]
//! }
//! ```

use fmr_core::model::InvalidModel;
use fmr_core::{
    Attrs, ComponentDecl, Kind, Knowledge, Sign, SystemModel, Value, ValueType, VarClass,
    VariableDecl,
};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("component `{component}`: {reason}")]
    Attrs { component: String, reason: String },
    #[error(transparent)]
    Invalid(#[from] InvalidModel),
}

impl From<serde_json::Error> for ModelFileError {
    fn from(e: serde_json::Error) -> Self {
        // serde_json appends " at line L column C"; keep only the message.
        let full = e.to_string();
        let message = match full.rfind(" at line ") {
            Some(i) => full[..i].to_string(),
            None => full,
        };
        ModelFileError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileModel {
    variables: Vec<FileVariable>,
    components: Vec<FileComponent>,
    outputs: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileVariable {
    name: String,
    #[serde(rename = "type")]
    ty: TypeName,
    class: ClassName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    known: Option<FileKnowledge>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum TypeName {
    Real,
    Bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ClassName {
    Certain,
    Suspicious,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SignName {
    Neg,
    Zero,
    Pos,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum FileValue {
    Bool(bool),
    Real(f64),
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileKnowledge {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sign: Option<SignName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reported: Option<FileValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    intended: Option<FileValue>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileComponent {
    name: String,
    kind: KindName,
    inputs: Vec<String>,
    params: Vec<String>,
    outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    attrs: Option<FileAttrs>,
}

#[derive(Debug, Clone, Copy)]
struct KindName(Kind);

impl Serialize for KindName {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.0.name())
    }
}

impl<'de> Deserialize<'de> for KindName {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Kind::from_name(&s)
            .map(KindName)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown kind `{s}`")))
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileAttrs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    rows: Option<usize>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    cols: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gradient: Option<Vec<SignName>>,
}

fn sign_of(s: SignName) -> Sign {
    match s {
        SignName::Neg => Sign::Neg,
        SignName::Zero => Sign::Zero,
        SignName::Pos => Sign::Pos,
    }
}

fn sign_name(s: Sign) -> SignName {
    match s {
        Sign::Neg => SignName::Neg,
        Sign::Zero => SignName::Zero,
        Sign::Pos => SignName::Pos,
    }
}

fn value_of(v: FileValue) -> Value {
    match v {
        FileValue::Bool(b) => Value::Bool(b),
        FileValue::Real(x) => Value::Real(x),
    }
}

fn file_value(v: Value) -> FileValue {
    match v {
        Value::Bool(b) => FileValue::Bool(b),
        Value::Real(x) => FileValue::Real(x),
    }
}

fn attrs_of(c: &FileComponent) -> Result<Attrs, ModelFileError> {
    let a = c.attrs.as_ref();
    let err = |reason: String| ModelFileError::Attrs {
        component: c.name.clone(),
        reason,
    };
    let kind = c.kind.0;
    let missing = |what: &str| err(format!("{kind} requires attribute `{what}`"));
    let attrs = match kind {
        Kind::KooN => {
            let a = a.ok_or_else(|| missing("k"))?;
            let k = a.k.ok_or_else(|| missing("k"))?;
            let n = a.n.ok_or_else(|| missing("n"))?;
            (a.rows.is_none() && a.cols.is_none() && a.gradient.is_none())
                .then_some(Attrs::KooN { k, n })
        }
        Kind::Dnf | Kind::Cnf => {
            let a = a.ok_or_else(|| missing("L"))?;
            let rows = a.rows.ok_or_else(|| missing("L"))?;
            let cols = a.cols.ok_or_else(|| missing("K"))?;
            (a.k.is_none() && a.n.is_none() && a.gradient.is_none())
                .then_some(Attrs::Grid { rows, cols })
        }
        Kind::Monotone => {
            let a = a.ok_or_else(|| missing("gradient"))?;
            let g = a.gradient.as_ref().ok_or_else(|| missing("gradient"))?;
            (a.k.is_none() && a.n.is_none() && a.rows.is_none() && a.cols.is_none())
                .then(|| Attrs::Gradient(g.iter().copied().map(sign_of).collect()))
        }
        _ => {
            let empty = a.is_none_or(|a| {
                a.k.is_none()
                    && a.n.is_none()
                    && a.rows.is_none()
                    && a.cols.is_none()
                    && a.gradient.is_none()
            });
            empty.then_some(Attrs::None)
        }
    };
    attrs.ok_or_else(|| err(format!("attributes do not apply to {kind}")))
}

/// Parses and validates a model file.
pub fn parse_model(text: &str) -> Result<SystemModel, ModelFileError> {
    let m = parse_model_unchecked(text)?;
    m.check()?;
    Ok(m)
}

/// Parses a model file without checking the graph invariants.
pub fn parse_model_unchecked(text: &str) -> Result<SystemModel, ModelFileError> {
    let f: FileModel = serde_json::from_str(text)?;
    let mut m = SystemModel::new();
    for v in f.variables {
        let ty = match v.ty {
            TypeName::Real => ValueType::Real,
            TypeName::Bool => ValueType::Bool,
        };
        let class = match v.class {
            ClassName::Certain => VarClass::Certain,
            ClassName::Suspicious => VarClass::Suspicious,
        };
        let k = v.known.unwrap_or_default();
        let known = Knowledge {
            sign: k.sign.map(sign_of),
            reported: k.reported.map(value_of),
            intended: k.intended.map(value_of),
        };
        m.variables
            .push(VariableDecl::new(v.name, ty, class).with_known(known));
    }
    for c in f.components {
        let attrs = attrs_of(&c)?;
        m.components.push(ComponentDecl {
            name: c.name,
            kind: c.kind.0,
            inputs: c.inputs,
            params: c.params,
            outputs: c.outputs,
            attrs,
        });
    }
    m.outputs = f.outputs;
    Ok(m)
}

/// Pretty-printed JSON, terminated by a newline.
pub fn serialize_model(m: &SystemModel) -> String {
    let f = FileModel {
        variables: m
            .variables
            .iter()
            .map(|v| FileVariable {
                name: v.name.clone(),
                ty: match v.value_type {
                    ValueType::Real => TypeName::Real,
                    ValueType::Bool => TypeName::Bool,
                },
                class: match v.class {
                    VarClass::Certain => ClassName::Certain,
                    VarClass::Suspicious => ClassName::Suspicious,
                },
                known: (!v.known.is_empty()).then(|| FileKnowledge {
                    sign: v.known.sign.map(sign_name),
                    reported: v.known.reported.map(file_value),
                    intended: v.known.intended.map(file_value),
                }),
            })
            .collect(),
        components: m
            .components
            .iter()
            .map(|c| FileComponent {
                name: c.name.clone(),
                kind: KindName(c.kind),
                inputs: c.inputs.clone(),
                params: c.params.clone(),
                outputs: c.outputs.clone(),
                attrs: match &c.attrs {
                    Attrs::None => None,
                    Attrs::KooN { k, n } => Some(FileAttrs {
                        k: Some(*k),
                        n: Some(*n),
                        ..FileAttrs::default()
                    }),
                    Attrs::Grid { rows, cols } => Some(FileAttrs {
                        rows: Some(*rows),
                        cols: Some(*cols),
                        ..FileAttrs::default()
                    }),
                    Attrs::Gradient(g) => Some(FileAttrs {
                        gradient: Some(g.iter().copied().map(sign_name).collect()),
                        ..FileAttrs::default()
                    }),
                },
            })
            .collect(),
        outputs: m.outputs.clone(),
    };
    let mut s = serde_json::to_string_pretty(&f).expect("model serializes");
    s.push('\n');
    s
}

/// Parses kind attributes given as a JSON object, as in a model file.
pub fn parse_attrs(kind: Kind, json: Option<&str>) -> Result<Attrs, ModelFileError> {
    let attrs = json.map(serde_json::from_str::<FileAttrs>).transpose()?;
    attrs_of(&FileComponent {
        name: kind.name().to_string(),
        kind: KindName(kind),
        inputs: Vec::new(),
        params: Vec::new(),
        outputs: Vec::new(),
        attrs,
    })
}
