//! Disjunctive normal form with absorption.
//!
//! Terms are sorted literal lists. Terms holding two modes of one variable
//! are dropped while multiplying out, and any term that is a superset of
//! another is absorbed. The resulting term list is sorted by length and then
//! lexicographically, which is the canonical report order.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::AlgebraError;
use crate::expr::{Expr, Literal};

pub const DEFAULT_TERM_CAP: usize = 100_000;

/// One conjunction of literals, sorted by (variable, mode tag).
pub type Term = Vec<Literal>;

pub fn to_dnf(e: &Expr, cap: usize) -> Result<Expr, AlgebraError> {
    Ok(terms_to_expr(&dnf_terms(e, cap)?))
}

pub fn dnf_terms(e: &Expr, cap: usize) -> Result<Vec<Term>, AlgebraError> {
    let terms = match e {
        Expr::True => alloc::vec![Vec::new()],
        Expr::False => Vec::new(),
        Expr::Lit(l) => alloc::vec![alloc::vec![l.clone()]],
        Expr::Or(cs) => {
            let mut acc = Vec::new();
            for c in cs {
                acc.extend(dnf_terms(c, cap)?);
                if acc.len() > cap {
                    return Err(AlgebraError::TermCapExceeded { cap });
                }
            }
            acc
        }
        Expr::And(cs) => {
            let mut acc: Vec<Term> = alloc::vec![Vec::new()];
            for c in cs {
                let rhs = dnf_terms(c, cap)?;
                if acc.len().saturating_mul(rhs.len()) > cap {
                    return Err(AlgebraError::TermCapExceeded { cap });
                }
                let mut next = Vec::with_capacity(acc.len() * rhs.len());
                for a in &acc {
                    for b in &rhs {
                        if let Some(t) = merge(a, b) {
                            next.push(t);
                        }
                    }
                }
                acc = absorb(next);
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
    };
    Ok(absorb(terms))
}

pub fn terms_to_expr(terms: &[Term]) -> Expr {
    Expr::or(
        terms
            .iter()
            .map(|t| Expr::and(t.iter().cloned().map(Expr::Lit))),
    )
}

/// Canonical term order: shorter first, then lexicographic.
pub fn term_order(a: &Term, b: &Term) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Conjunction of two sorted terms; `None` when they disagree on a variable.
fn merge(a: &[Literal], b: &[Literal]) -> Option<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].var.cmp(&b[j].var) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                if a[i].mode != b[j].mode {
                    return None;
                }
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some(out)
}

fn is_subset(small: &[Literal], big: &[Literal]) -> bool {
    let mut j = 0;
    for l in small {
        loop {
            if j == big.len() {
                return false;
            }
            match big[j].cmp(l) {
                Ordering::Less => j += 1,
                Ordering::Equal => {
                    j += 1;
                    break;
                }
                Ordering::Greater => return false,
            }
        }
    }
    true
}

fn absorb(mut terms: Vec<Term>) -> Vec<Term> {
    for t in terms.iter_mut() {
        t.sort();
        t.dedup();
    }
    terms.retain(|t| t.windows(2).all(|w| w[0].var != w[1].var));
    terms.sort_by(term_order);
    terms.dedup();
    let mut kept: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        if !kept.iter().any(|k| is_subset(k, &t)) {
            kept.push(t);
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::lit;
    use crate::mode::FailureMode::*;

    #[test]
    fn distribution() {
        let (a, b, c) = (lit("a", True), lit("b", True), lit("c", True));
        let e = Expr::and([Expr::or([a.clone(), b.clone()]), c.clone()]);
        let expected = Expr::or([
            Expr::and([a.clone(), c.clone()]),
            Expr::and([b.clone(), c.clone()]),
        ]);
        assert_eq!(to_dnf(&e, DEFAULT_TERM_CAP).unwrap(), expected);
    }

    #[test]
    fn fixpoint_on_dnf_input() {
        let e = Expr::or([lit("a", True), Expr::and([lit("b", False), lit("c", True)])]);
        let once = to_dnf(&e, DEFAULT_TERM_CAP).unwrap();
        assert_eq!(once, e);
        assert_eq!(to_dnf(&once, DEFAULT_TERM_CAP).unwrap(), once);
    }

    #[test]
    fn absorption() {
        let e = Expr::or([Expr::and([lit("a", True), lit("b", True)]), lit("a", True)]);
        assert_eq!(to_dnf(&e, DEFAULT_TERM_CAP).unwrap(), lit("a", True));
    }

    #[test]
    fn contradictory_products_vanish() {
        let e = Expr::and([Expr::or([lit("x", High), lit("y", Low)]), lit("x", Low)]);
        assert_eq!(
            to_dnf(&e, DEFAULT_TERM_CAP).unwrap(),
            Expr::and([lit("x", Low), lit("y", Low)])
        );
        let e = Expr::and([lit("x", High), lit("x", Low)]);
        assert_eq!(to_dnf(&e, DEFAULT_TERM_CAP).unwrap(), Expr::False);
    }

    #[test]
    fn cap_is_an_error() {
        // (a1|b1) & (a2|b2) & ... has 2^n terms.
        let e = Expr::and((0..12).map(|i| {
            Expr::or([
                lit(&alloc::format!("a{i}"), True),
                lit(&alloc::format!("b{i}"), True),
            ])
        }));
        assert_eq!(
            to_dnf(&e, 1000),
            Err(AlgebraError::TermCapExceeded { cap: 1000 })
        );
        assert!(to_dnf(&e, 5000).is_ok());
    }
}
