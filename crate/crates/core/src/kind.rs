//! Component kinds, their signatures and their concrete behaviour.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::mode::{Sign, Value, ValueType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    And,
    Or,
    Not,
    Add,
    Sub,
    Avg,
    Lim,
    Inv,
    Abs,
    Mul,
    Gcom,
    Lcom,
    Dnf,
    Cnf,
    KooN,
    Monotone,
}

impl Kind {
    pub const ALL: [Kind; 16] = [
        Kind::And,
        Kind::Or,
        Kind::Not,
        Kind::Add,
        Kind::Sub,
        Kind::Avg,
        Kind::Lim,
        Kind::Inv,
        Kind::Abs,
        Kind::Mul,
        Kind::Gcom,
        Kind::Lcom,
        Kind::Dnf,
        Kind::Cnf,
        Kind::KooN,
        Kind::Monotone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::And => "And",
            Kind::Or => "Or",
            Kind::Not => "Not",
            Kind::Add => "Add",
            Kind::Sub => "Sub",
            Kind::Avg => "Avg",
            Kind::Lim => "Lim",
            Kind::Inv => "Inv",
            Kind::Abs => "Abs",
            Kind::Mul => "Mul",
            Kind::Gcom => "Gcom",
            Kind::Lcom => "Lcom",
            Kind::Dnf => "DNF",
            Kind::Cnf => "CNF",
            Kind::KooN => "KooN",
            Kind::Monotone => "Monotone",
        }
    }

    pub fn from_name(name: &str) -> Option<Kind> {
        Kind::ALL.iter().copied().find(|k| k.name() == name)
    }

    pub fn input_type(self) -> ValueType {
        match self {
            Kind::And | Kind::Or | Kind::Not | Kind::Dnf | Kind::Cnf | Kind::KooN => {
                ValueType::Bool
            }
            _ => ValueType::Real,
        }
    }

    pub fn output_type(self) -> ValueType {
        match self {
            Kind::Gcom | Kind::Lcom => ValueType::Bool,
            k => k.input_type(),
        }
    }

    /// Kinds whose concrete function is Boolean on both sides.
    pub fn is_boolean(self) -> bool {
        self.input_type() == ValueType::Bool
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Kind-specific attributes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Attrs {
    #[default]
    None,
    /// `k` out of `n` inputs must be true.
    KooN { k: usize, n: usize },
    /// `rows` × `cols` inputs, row-major (`L` and `K`).
    Grid { rows: usize, cols: usize },
    /// Sign of the partial derivative per argument.
    Gradient(Vec<Sign>),
}

impl Attrs {
    /// Checks the attributes against a kind and returns the number of
    /// arguments (inputs followed by params) the kind then expects, or a
    /// description of what is wrong.
    pub fn expected_arity(&self, kind: Kind) -> Result<Arity, String> {
        match (kind, self) {
            (Kind::KooN, Attrs::KooN { k, n }) => {
                if *n == 0 || *k == 0 || k > n {
                    Err(format!("KooN needs 1 <= k <= n, got k={k}, n={n}"))
                } else {
                    Ok(Arity::Exactly(*n))
                }
            }
            (Kind::Dnf | Kind::Cnf, Attrs::Grid { rows, cols }) => {
                if *rows == 0 || *cols == 0 {
                    Err(format!("{kind} needs L, K >= 1, got L={rows}, K={cols}"))
                } else {
                    Ok(Arity::Exactly(rows * cols))
                }
            }
            (Kind::Monotone, Attrs::Gradient(g)) => {
                if g.is_empty() {
                    Err(String::from("Monotone needs at least one gradient sign"))
                } else if g.contains(&Sign::Zero) {
                    Err(String::from("Monotone gradient signs must be pos or neg"))
                } else {
                    Ok(Arity::Exactly(g.len()))
                }
            }
            (Kind::KooN | Kind::Dnf | Kind::Cnf | Kind::Monotone, _) => {
                Err(format!("{kind} requires {}", required_attrs(kind)))
            }
            (_, Attrs::None) => Ok(match kind {
                Kind::And | Kind::Or | Kind::Add | Kind::Avg => Arity::AtLeast(2),
                Kind::Not | Kind::Inv | Kind::Abs => Arity::Exactly(1),
                Kind::Sub | Kind::Mul | Kind::Gcom | Kind::Lcom => Arity::Exactly(2),
                Kind::Lim => Arity::Exactly(3),
                _ => unreachable!(),
            }),
            (_, _) => Err(format!("{kind} takes no attributes")),
        }
    }
}

fn required_attrs(kind: Kind) -> &'static str {
    match kind {
        Kind::KooN => "attributes k and n",
        Kind::Dnf | Kind::Cnf => "attributes L and K",
        Kind::Monotone => "a gradient attribute",
        _ => "no attributes",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Exactly(usize),
    AtLeast(usize),
}

impl Arity {
    pub fn accepts(self, n: usize) -> bool {
        match self {
            Arity::Exactly(m) => n == m,
            Arity::AtLeast(m) => n >= m,
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Exactly(n) => write!(f, "{n}"),
            Arity::AtLeast(n) => write!(f, "at least {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{kind} expects {expected} arguments, got {found}")]
    Arity {
        kind: Kind,
        expected: Arity,
        found: usize,
    },
    #[error("{kind} expects {expected} arguments")]
    Type { kind: Kind, expected: ValueType },
    #[error("{0}")]
    Attrs(String),
    #[error("{kind} is undefined at the given arguments: {reason}")]
    Domain { kind: Kind, reason: &'static str },
}

/// Concrete value of a component. `args` are its inputs followed by its
/// params. Lim takes `(x, lower, upper)`; Gcom is `a > b`, Lcom is `a < b`;
/// a Monotone component is evaluated as `Σ sᵢ·xᵢ` with `sᵢ = ±1`.
pub fn apply(kind: Kind, attrs: &Attrs, args: &[Value]) -> Result<Value, EvalError> {
    let arity = attrs.expected_arity(kind).map_err(EvalError::Attrs)?;
    if !arity.accepts(args.len()) {
        return Err(EvalError::Arity {
            kind,
            expected: arity,
            found: args.len(),
        });
    }
    let type_err = || EvalError::Type {
        kind,
        expected: kind.input_type(),
    };
    if kind.is_boolean() {
        let b: Vec<bool> = args
            .iter()
            .map(|v| v.as_bool())
            .collect::<Option<_>>()
            .ok_or_else(type_err)?;
        let out = match (kind, attrs) {
            (Kind::And, _) => b.iter().all(|x| *x),
            (Kind::Or, _) => b.iter().any(|x| *x),
            (Kind::Not, _) => !b[0],
            (Kind::Dnf, Attrs::Grid { cols, .. }) => b.chunks(*cols).any(|r| r.iter().all(|x| *x)),
            (Kind::Cnf, Attrs::Grid { cols, .. }) => b.chunks(*cols).all(|r| r.iter().any(|x| *x)),
            (Kind::KooN, Attrs::KooN { k, .. }) => b.iter().filter(|x| **x).count() >= *k,
            _ => unreachable!(),
        };
        return Ok(Value::Bool(out));
    }
    let x: Vec<f64> = args
        .iter()
        .map(|v| v.as_real())
        .collect::<Option<_>>()
        .ok_or_else(type_err)?;
    let out = match (kind, attrs) {
        (Kind::Add, _) => Value::Real(x.iter().sum()),
        (Kind::Avg, _) => Value::Real(x.iter().sum::<f64>() / x.len() as f64),
        (Kind::Sub, _) => Value::Real(x[0] - x[1]),
        (Kind::Mul, _) => Value::Real(x[0] * x[1]),
        (Kind::Abs, _) => Value::Real(x[0].abs()),
        (Kind::Inv, _) => {
            if x[0] == 0.0 {
                return Err(EvalError::Domain {
                    kind,
                    reason: "division by zero",
                });
            }
            Value::Real(1.0 / x[0])
        }
        (Kind::Lim, _) => {
            let (lo, hi) = (x[1], x[2]);
            if lo > hi {
                return Err(EvalError::Domain {
                    kind,
                    reason: "lower bound above upper bound",
                });
            }
            Value::Real(x[0].clamp(lo, hi))
        }
        (Kind::Gcom, _) => Value::Bool(x[0] > x[1]),
        (Kind::Lcom, _) => Value::Bool(x[0] < x[1]),
        (Kind::Monotone, Attrs::Gradient(g)) => Value::Real(
            x.iter()
                .zip(g)
                .map(|(v, s)| if *s == Sign::Neg { -v } else { *v })
                .sum(),
        ),
        _ => unreachable!(),
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn b(x: bool) -> Value {
        Value::Bool(x)
    }

    fn r(x: f64) -> Value {
        Value::Real(x)
    }

    #[test]
    fn names_round_trip() {
        for k in Kind::ALL {
            assert_eq!(Kind::from_name(k.name()), Some(k));
        }
        assert_eq!(Kind::from_name("Xor"), None);
    }

    #[test]
    fn boolean_kinds() {
        let none = Attrs::None;
        assert_eq!(apply(Kind::And, &none, &[b(true), b(false)]), Ok(b(false)));
        assert_eq!(apply(Kind::Or, &none, &[b(true), b(false)]), Ok(b(true)));
        assert_eq!(apply(Kind::Not, &none, &[b(true)]), Ok(b(false)));
        let koon = Attrs::KooN { k: 2, n: 3 };
        assert_eq!(
            apply(Kind::KooN, &koon, &[b(true), b(false), b(true)]),
            Ok(b(true))
        );
        assert_eq!(
            apply(Kind::KooN, &koon, &[b(true), b(false), b(false)]),
            Ok(b(false))
        );
        let grid = Attrs::Grid { rows: 2, cols: 2 };
        let args = [b(true), b(false), b(false), b(true)];
        assert_eq!(apply(Kind::Dnf, &grid, &args), Ok(b(false)));
        assert_eq!(apply(Kind::Cnf, &grid, &args), Ok(b(true)));
    }

    #[test]
    fn real_kinds() {
        let none = Attrs::None;
        assert_eq!(apply(Kind::Sub, &none, &[r(3.0), r(1.0)]), Ok(r(2.0)));
        assert_eq!(apply(Kind::Avg, &none, &[r(3.0), r(1.0)]), Ok(r(2.0)));
        assert_eq!(
            apply(Kind::Lim, &none, &[r(3.0), r(-1.0), r(1.0)]),
            Ok(r(1.0))
        );
        assert_eq!(apply(Kind::Gcom, &none, &[r(3.0), r(1.0)]), Ok(b(true)));
        assert_eq!(apply(Kind::Lcom, &none, &[r(3.0), r(1.0)]), Ok(b(false)));
        assert!(matches!(
            apply(Kind::Inv, &none, &[r(0.0)]),
            Err(EvalError::Domain { .. })
        ));
        let g = Attrs::Gradient(vec![Sign::Pos, Sign::Neg]);
        assert_eq!(apply(Kind::Monotone, &g, &[r(3.0), r(1.0)]), Ok(r(2.0)));
    }

    #[test]
    fn signature_errors() {
        let none = Attrs::None;
        assert!(matches!(
            apply(Kind::And, &none, &[b(true)]),
            Err(EvalError::Arity { .. })
        ));
        assert!(matches!(
            apply(Kind::Add, &none, &[b(true), r(1.0)]),
            Err(EvalError::Type { .. })
        ));
        assert!(Attrs::KooN { k: 4, n: 3 }
            .expected_arity(Kind::KooN)
            .is_err());
        assert!(Attrs::None.expected_arity(Kind::KooN).is_err());
        assert!(Attrs::KooN { k: 1, n: 1 }
            .expected_arity(Kind::And)
            .is_err());
    }
}
