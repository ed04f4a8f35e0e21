//! Models generated from the structure of a function rather than listed per
//! kind: sum-of-products, product-of-sums, k-out-of-n voting and functions
//! declared monotone in each argument.

use alloc::string::String;
use alloc::vec::Vec;

use super::CatalogueError;
use crate::expr::Expr;
use crate::kind::Kind;
use crate::mode::{FailureMode, Sign};

fn bool_effect(kind: Kind, effect: FailureMode) -> Result<(), CatalogueError> {
    match effect {
        FailureMode::True | FailureMode::False => Ok(()),
        mode => Err(CatalogueError::UnsupportedMode { kind, mode }),
    }
}

/// Row-major grid of argument names.
fn rows(args: &[String], cols: usize) -> impl Iterator<Item = &[String]> {
    args.chunks(cols)
}

fn all_same(vars: &[String], mode: FailureMode) -> Expr {
    Expr::and(
        vars.iter()
            .map(|v| Expr::lit(v.as_str(), mode))
            .collect::<Vec<_>>(),
    )
}

fn any_same(vars: &[String], mode: FailureMode) -> Expr {
    Expr::or(
        vars.iter()
            .map(|v| Expr::lit(v.as_str(), mode))
            .collect::<Vec<_>>(),
    )
}

/// Certain causes of an `L`×`K` sum of products.
pub fn dnf_model(
    args: &[String],
    cols: usize,
    effect: FailureMode,
) -> Result<Expr, CatalogueError> {
    bool_effect(Kind::Dnf, effect)?;
    Ok(match effect {
        FailureMode::True => Expr::or(
            rows(args, cols)
                .map(|r| all_same(r, effect))
                .collect::<Vec<_>>(),
        ),
        _ => Expr::and(
            rows(args, cols)
                .map(|r| any_same(r, effect))
                .collect::<Vec<_>>(),
        ),
    })
}

/// Certain causes of an `L`×`K` product of sums; the dual of [`dnf_model`].
pub fn cnf_model(
    args: &[String],
    cols: usize,
    effect: FailureMode,
) -> Result<Expr, CatalogueError> {
    bool_effect(Kind::Cnf, effect)?;
    Ok(match effect {
        FailureMode::True => Expr::and(
            rows(args, cols)
                .map(|r| any_same(r, effect))
                .collect::<Vec<_>>(),
        ),
        _ => Expr::or(
            rows(args, cols)
                .map(|r| all_same(r, effect))
                .collect::<Vec<_>>(),
        ),
    })
}

/// Certain causes of a k-out-of-n vote: any `k` commissions, or any
/// `n - k + 1` omissions.
pub fn koon_model(args: &[String], k: usize, effect: FailureMode) -> Result<Expr, CatalogueError> {
    bool_effect(Kind::KooN, effect)?;
    let n = args.len();
    let size = if effect == FailureMode::True {
        k
    } else {
        n + 1 - k
    };
    Ok(Expr::or(
        subsets(n, size)
            .into_iter()
            .map(|s| {
                Expr::and(
                    s.into_iter()
                        .map(|i| Expr::lit(args[i].as_str(), effect))
                        .collect::<Vec<_>>(),
                )
            })
            .collect::<Vec<_>>(),
    ))
}

/// Certain causes (and minimum conditions) of a function strictly monotone
/// in every argument: each argument moving in the direction its gradient
/// sign maps onto the output deviation.
pub fn monotone_model(
    args: &[String],
    gradient: &[Sign],
    effect: FailureMode,
) -> Result<Expr, CatalogueError> {
    if !matches!(effect, FailureMode::High | FailureMode::Low) {
        return Err(CatalogueError::UnsupportedMode {
            kind: Kind::Monotone,
            mode: effect,
        });
    }
    Ok(Expr::or(
        args.iter()
            .zip(gradient)
            .map(|(a, s)| Expr::lit(a.as_str(), s.direction().apply(effect)))
            .collect::<Vec<_>>(),
    ))
}

/// Flat disjunction of same-mode literals: the minimum conditions of every
/// structural Boolean kind, since each is monotone increasing.
pub fn any_input(args: &[String], effect: FailureMode) -> Expr {
    any_same(args, effect)
}

/// All `size`-element index subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if size <= n {
        go(0, n, size, &mut Vec::new(), &mut out);
    }
    out
}
