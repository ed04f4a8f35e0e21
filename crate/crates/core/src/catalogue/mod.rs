//! Local failure models of the component kinds.
//!
//! [`local_model`] maps a failure mode at a component output to an
//! expression over failure modes of its arguments (inputs followed by
//! params). Under [`CausePolicy::CertainCauses`] every term of the result is
//! meant to guarantee the output mode on its own; under
//! [`CausePolicy::MinimumConditions`] the result is a condition every
//! explaining fault assignment satisfies. When a kind admits no certain
//! cause the minimum conditions are returned and the scenario is marked
//! `weakened`.

mod mul;
mod structural;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

pub use mul::{
    mul_certain_param, mul_sign_stable, table_cause, table_row, Atom, MulRow, MUL_TABLE,
};
pub use structural::{any_input, cnf_model, dnf_model, koon_model, monotone_model, subsets};

use crate::context::{CausePolicy, KnowledgeContext};
use crate::expr::{Expr, Literal};
use crate::kind::{Attrs, Kind};
use crate::mode::{FailureMode, Sign, Value};
use crate::model::ComponentDecl;
use crate::simplify::simplify;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogueError {
    #[error("{kind} cannot produce output mode {mode}")]
    UnsupportedMode { kind: Kind, mode: FailureMode },
    #[error("{kind}: output mode is unreachable ({reason})")]
    Unreachable { kind: Kind, reason: &'static str },
    #[error("limiter bound `{0}` must be certain")]
    SuspiciousLimiterBound(String),
    #[error("{kind}: {reason}")]
    BadSignature { kind: Kind, reason: String },
}

/// A fact about values the model relies on.
#[derive(Debug, Clone, PartialEq)]
pub enum Premise {
    /// Sign of the variable in both worlds.
    StableSign {
        var: String,
        sign: Sign,
    },
    /// Sign of the reported value.
    ReportedSign {
        var: String,
        sign: Sign,
    },
    Reported {
        var: String,
        value: Value,
    },
    Intended {
        var: String,
        value: Value,
    },
}

impl fmt::Display for Premise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = |s: &Sign| match s {
            Sign::Neg => "< 0",
            Sign::Zero => "= 0",
            Sign::Pos => "> 0",
        };
        match self {
            Premise::StableSign { var, sign } => write!(f, "sign({var}) stays {sign}"),
            Premise::ReportedSign { var, sign } => write!(f, "reported {var} {}", rel(sign)),
            Premise::Reported { var, value } => write!(f, "reported {var} = {value}"),
            Premise::Intended { var, value } => write!(f, "intended {var} = {value}"),
        }
    }
}

/// `{cause} kind {effect ∧ premise}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FailureScenario {
    pub cause: Expr,
    pub kind: Kind,
    pub effect: Literal,
    pub premise: Vec<Premise>,
    pub weakened: bool,
}

struct Builder<'a> {
    ctx: &'a KnowledgeContext,
    premise: Vec<Premise>,
    weakened: bool,
}

impl Builder<'_> {
    fn weaken(&mut self) {
        if self.ctx.cause == CausePolicy::CertainCauses {
            self.weakened = true;
        }
    }

    fn certain(&self) -> bool {
        self.ctx.cause == CausePolicy::CertainCauses
    }
}

/// The local model of `kind` for the output literal `effect`, with args
/// named as given.
pub fn local_model(
    kind: Kind,
    attrs: &Attrs,
    args: &[String],
    effect: &Literal,
    ctx: &KnowledgeContext,
) -> Result<FailureScenario, CatalogueError> {
    let arity = attrs
        .expected_arity(kind)
        .map_err(|reason| CatalogueError::BadSignature { kind, reason })?;
    if !arity.accepts(args.len()) {
        return Err(CatalogueError::BadSignature {
            kind,
            reason: alloc::format!("expected {arity} arguments, got {}", args.len()),
        });
    }
    let u = effect.mode;
    let fits = u.family() == Some(kind.output_type());
    if !fits {
        return Err(CatalogueError::UnsupportedMode { kind, mode: u });
    }
    let mut b = Builder {
        ctx,
        premise: Vec::new(),
        weakened: false,
    };
    let lit = |i: usize, m: FailureMode| Expr::lit(args[i].as_str(), m);
    let min = !b.certain();
    let cause = match kind {
        Kind::And | Kind::Or => gate(kind, args, u, &mut b),
        Kind::Not | Kind::Inv => lit(0, u.invert()),
        Kind::Add | Kind::Avg => any_input(args, u),
        Kind::Sub => Expr::or([lit(0, u), lit(1, u.invert())]),
        Kind::Monotone => match attrs {
            Attrs::Gradient(g) => monotone_model(args, g, u)?,
            _ => unreachable!(),
        },
        Kind::Lim => {
            for bound in &args[1..] {
                if !ctx.is_certain(bound) {
                    return Err(CatalogueError::SuspiciousLimiterBound(bound.clone()));
                }
            }
            // Saturation can absorb the deviation, so x = u is only necessary.
            b.weaken();
            lit(0, u)
        }
        Kind::Gcom | Kind::Lcom => {
            // a > b turns true when a rises or b falls; a < b the other way.
            let rising = (kind == Kind::Gcom) == (u == FailureMode::True);
            let (ma, mb) = if rising {
                (FailureMode::High, FailureMode::Low)
            } else {
                (FailureMode::Low, FailureMode::High)
            };
            // Crossing the threshold depends on the size of the deviation.
            b.weaken();
            Expr::or([lit(0, ma), lit(1, mb)])
        }
        Kind::Abs => match ctx.stable_sign(&args[0]) {
            Some(Sign::Zero) => {
                return Err(CatalogueError::Unreachable {
                    kind,
                    reason: "argument is known to stay at zero",
                })
            }
            Some(s) => {
                b.premise.push(Premise::StableSign {
                    var: args[0].clone(),
                    sign: s,
                });
                lit(0, s.direction().apply(u))
            }
            None => {
                b.weaken();
                Expr::or([lit(0, FailureMode::High), lit(0, FailureMode::Low)])
            }
        },
        Kind::Mul => mul(args, u, &mut b)?,
        Kind::Dnf | Kind::Cnf | Kind::KooN if min => any_input(args, u),
        Kind::Dnf => match attrs {
            Attrs::Grid { cols, .. } => dnf_model(args, *cols, u)?,
            _ => unreachable!(),
        },
        Kind::Cnf => match attrs {
            Attrs::Grid { cols, .. } => cnf_model(args, *cols, u)?,
            _ => unreachable!(),
        },
        Kind::KooN => match attrs {
            Attrs::KooN { k, .. } => koon_model(args, *k, u)?,
            _ => unreachable!(),
        },
    };
    Ok(FailureScenario {
        cause: simplify(&cause, ctx),
        kind,
        effect: effect.clone(),
        premise: b.premise,
        weakened: b.weakened,
    })
}

/// [`local_model`] for a declared component.
pub fn component_model(
    c: &ComponentDecl,
    mode: FailureMode,
    ctx: &KnowledgeContext,
) -> Result<FailureScenario, CatalogueError> {
    let args: Vec<String> = c.args().cloned().collect();
    local_model(
        c.kind,
        &c.attrs,
        &args,
        &Literal::new(c.output(), mode),
        ctx,
    )
}

/// And/Or gates with any number of inputs.
///
/// Output mode `u` arises from one input `xᵢ = u` when every other input
/// lets it through: for And-`t` the others must report `T`, for And-`f`
/// they must be intended `T`, for Or-`t` intended `F`, for Or-`f` reported
/// `F`. A side condition settled by a known value is applied directly. An
/// unknown one is dropped for minimum conditions. For certain causes the
/// intended-value conditions follow from the output being faulty and are
/// dropped too, while a reported-value condition can only be guaranteed by
/// the other input failing the same way.
fn gate(kind: Kind, args: &[String], u: FailureMode, b: &mut Builder<'_>) -> Expr {
    let through = kind == Kind::Or;
    let on_reported = (kind == Kind::And) == (u == FailureMode::True);
    let mut terms = Vec::with_capacity(args.len());
    for (i, xi) in args.iter().enumerate() {
        let mut term = alloc::vec![Expr::lit(xi.as_str(), u)];
        for (j, xj) in args.iter().enumerate() {
            if i == j {
                continue;
            }
            let need = !through;
            let known = if on_reported {
                b.ctx.known_reported(xj)
            } else {
                b.ctx.known_intended(xj)
            };
            match known.and_then(Value::as_bool) {
                Some(v) => {
                    if !b.ctx.is_certain(xj) {
                        let value = Value::Bool(v);
                        b.premise.push(if on_reported {
                            Premise::Reported {
                                var: xj.clone(),
                                value,
                            }
                        } else {
                            Premise::Intended {
                                var: xj.clone(),
                                value,
                            }
                        });
                    }
                    if v != need {
                        term.push(Expr::False);
                    }
                }
                None if on_reported && b.certain() => term.push(Expr::lit(xj.as_str(), u)),
                None => {}
            }
        }
        terms.push(Expr::and(term));
    }
    b.premise
        .sort_by(|x, y| alloc::format!("{x}").cmp(&alloc::format!("{y}")));
    b.premise.dedup();
    Expr::or(terms)
}

fn mul(args: &[String], u: FailureMode, b: &mut Builder<'_>) -> Result<Expr, CatalogueError> {
    let ctx = b.ctx;
    let (x1, x2) = (&args[0], &args[1]);
    match (ctx.is_certain(x1), ctx.is_certain(x2)) {
        (true, true) => Ok(Expr::False),
        (false, true) | (true, false) => {
            let (sus, cert) = if ctx.is_certain(x2) {
                (x1, x2)
            } else {
                (x2, x1)
            };
            match ctx.stable_sign(cert) {
                Some(s) => {
                    b.premise.push(Premise::StableSign {
                        var: cert.clone(),
                        sign: s,
                    });
                    mul_certain_param(sus, u, s)
                }
                None => {
                    b.weaken();
                    Ok(Expr::or([
                        Expr::lit(sus.as_str(), FailureMode::High),
                        Expr::lit(sus.as_str(), FailureMode::Low),
                    ]))
                }
            }
        }
        (false, false) => {
            if let (Some(s1), Some(s2)) = (ctx.stable_sign(x1), ctx.stable_sign(x2)) {
                b.premise.push(Premise::StableSign {
                    var: x1.clone(),
                    sign: s1,
                });
                b.premise.push(Premise::StableSign {
                    var: x2.clone(),
                    sign: s2,
                });
                return mul_sign_stable(x1, x2, u, s1, s2);
            }
            let rs = |v: &str| ctx.reported_sign(v).or(ctx.stable_sign(v));
            b.weaken();
            if let (Some(s1), Some(s2)) = (rs(x1), rs(x2)) {
                b.premise.push(Premise::ReportedSign {
                    var: x1.clone(),
                    sign: s1,
                });
                b.premise.push(Premise::ReportedSign {
                    var: x2.clone(),
                    sign: s2,
                });
                let row = table_row(u, s1, s2).expect("table covers every sign pair");
                return Ok(table_cause(row, x1, x2));
            }
            Ok(mul::mul_unknown(x1, x2))
        }
    }
}
