//! Multiplication models.

use alloc::vec::Vec;

use super::CatalogueError;
use crate::expr::Expr;
use crate::kind::Kind;
use crate::mode::{FailureMode, Sign};

/// `x = ⟨p⟩u` for a product with a certain factor of known sign.
pub fn mul_certain_param(
    var: &str,
    effect: FailureMode,
    param_sign: Sign,
) -> Result<Expr, CatalogueError> {
    if !matches!(effect, FailureMode::High | FailureMode::Low) {
        return Err(CatalogueError::UnsupportedMode {
            kind: Kind::Mul,
            mode: effect,
        });
    }
    if param_sign == Sign::Zero {
        return Err(CatalogueError::Unreachable {
            kind: Kind::Mul,
            reason: "a zero factor keeps the product at zero",
        });
    }
    Ok(Expr::lit(var, param_sign.direction().apply(effect)))
}

/// Atom of a table cause. `IntendedZero` is the statement `x̄ᵢ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    X1(FailureMode),
    X2(FailureMode),
    IntendedZero1,
    IntendedZero2,
}

#[derive(Debug, Clone, Copy)]
pub struct MulRow {
    pub effect: FailureMode,
    pub reported1: Sign,
    pub reported2: Sign,
    /// Disjunction of conjunctions.
    pub cause: &'static [&'static [Atom]],
}

use Atom::*;
use FailureMode::{High as H, Low as L};
use Sign::{Neg, Pos, Zero};

/// Conditions on two suspicious factors given the output mode and the signs
/// of their reported values.
pub const MUL_TABLE: [MulRow; 18] = [
    MulRow {
        effect: L,
        reported1: Neg,
        reported2: Neg,
        cause: &[&[X1(H)], &[X2(H)], &[X1(L), X2(L)]],
    },
    MulRow {
        effect: L,
        reported1: Neg,
        reported2: Zero,
        cause: &[&[X2(H)], &[X1(L), X2(L)]],
    },
    MulRow {
        effect: L,
        reported1: Neg,
        reported2: Pos,
        cause: &[&[X1(L)], &[X2(H)], &[IntendedZero1], &[IntendedZero2]],
    },
    MulRow {
        effect: L,
        reported1: Zero,
        reported2: Neg,
        cause: &[&[X1(H)], &[X1(L), X2(L)]],
    },
    MulRow {
        effect: L,
        reported1: Zero,
        reported2: Zero,
        cause: &[&[X1(H), X2(H)], &[X1(L), X2(L)]],
    },
    MulRow {
        effect: L,
        reported1: Zero,
        reported2: Pos,
        cause: &[&[X1(L)], &[X1(H), X2(H)]],
    },
    MulRow {
        effect: L,
        reported1: Pos,
        reported2: Neg,
        cause: &[&[X1(H)], &[X2(L)], &[IntendedZero1], &[IntendedZero2]],
    },
    MulRow {
        effect: L,
        reported1: Pos,
        reported2: Zero,
        cause: &[&[X2(L)], &[X1(H), X2(H)]],
    },
    MulRow {
        effect: L,
        reported1: Pos,
        reported2: Pos,
        cause: &[&[X1(L)], &[X2(L)], &[X1(H), X2(H)]],
    },
    MulRow {
        effect: H,
        reported1: Neg,
        reported2: Neg,
        cause: &[&[X1(L)], &[X2(L)], &[IntendedZero1], &[IntendedZero2]],
    },
    MulRow {
        effect: H,
        reported1: Neg,
        reported2: Zero,
        cause: &[&[X2(L)], &[X1(L), X2(H)]],
    },
    MulRow {
        effect: H,
        reported1: Neg,
        reported2: Pos,
        cause: &[&[X1(H)], &[X2(L)], &[X1(L), X2(H)]],
    },
    MulRow {
        effect: H,
        reported1: Zero,
        reported2: Neg,
        cause: &[&[X1(L)], &[X1(H), X2(L)]],
    },
    MulRow {
        effect: H,
        reported1: Zero,
        reported2: Zero,
        cause: &[&[X1(H), X2(L)], &[X1(L), X2(H)]],
    },
    MulRow {
        effect: H,
        reported1: Zero,
        reported2: Pos,
        cause: &[&[X1(H)], &[X1(L), X2(H)]],
    },
    MulRow {
        effect: H,
        reported1: Pos,
        reported2: Neg,
        cause: &[&[X1(L)], &[X2(H)], &[X1(H), X2(L)]],
    },
    MulRow {
        effect: H,
        reported1: Pos,
        reported2: Zero,
        cause: &[&[X2(H)], &[X1(H), X2(L)]],
    },
    MulRow {
        effect: H,
        reported1: Pos,
        reported2: Pos,
        cause: &[&[X1(H)], &[X2(H)], &[IntendedZero1], &[IntendedZero2]],
    },
];

pub fn table_row(effect: FailureMode, reported1: Sign, reported2: Sign) -> Option<&'static MulRow> {
    MUL_TABLE
        .iter()
        .find(|r| r.effect == effect && r.reported1 == reported1 && r.reported2 == reported2)
}

/// Instantiates a table row for factors named `x1`, `x2`.
///
/// `x̄ᵢ = 0` is not a failure-mode statement. With the sign of `x̃ᵢ` fixed by
/// the row it is equivalent to a deviation of `xᵢ` away from zero, so it is
/// replaced by that literal: `x̃ᵢ < 0 = x̄ᵢ` is `l`, `x̃ᵢ > 0 = x̄ᵢ` is `h`.
/// This widens the expression, which is sound for a necessary condition.
pub fn table_cause(row: &MulRow, x1: &str, x2: &str) -> Expr {
    let away = |s: Sign| match s {
        Neg => Some(L),
        Pos => Some(H),
        Zero => None,
    };
    let atom = |a: Atom| -> Expr {
        match a {
            X1(m) => Expr::lit(x1, m),
            X2(m) => Expr::lit(x2, m),
            IntendedZero1 => away(row.reported1).map_or(Expr::False, |m| Expr::lit(x1, m)),
            IntendedZero2 => away(row.reported2).map_or(Expr::False, |m| Expr::lit(x2, m)),
        }
    };
    Expr::or(
        row.cause
            .iter()
            .map(|term| Expr::and(term.iter().map(|a| atom(*a)).collect::<Vec<_>>())),
    )
}

/// Two suspicious factors whose signs are known not to change.
pub fn mul_sign_stable(
    x1: &str,
    x2: &str,
    effect: FailureMode,
    sign1: Sign,
    sign2: Sign,
) -> Result<Expr, CatalogueError> {
    let mut terms = Vec::new();
    if sign2 != Zero {
        terms.push(Expr::lit(x1, sign2.direction().apply(effect)));
    }
    if sign1 != Zero {
        terms.push(Expr::lit(x2, sign1.direction().apply(effect)));
    }
    if terms.is_empty() {
        return Err(CatalogueError::Unreachable {
            kind: Kind::Mul,
            reason: "both factors are known to stay at zero",
        });
    }
    Ok(Expr::or(terms))
}

/// No usable knowledge: some factor deviates.
pub fn mul_unknown(x1: &str, x2: &str) -> Expr {
    Expr::or([
        Expr::lit(x1, H),
        Expr::lit(x1, L),
        Expr::lit(x2, H),
        Expr::lit(x2, L),
    ])
}
