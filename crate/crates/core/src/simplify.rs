//! Simplification rules of the algebra.
//!
//! * a variable is in exactly one mode at a time, so a conjunction holding
//!   two different modes of the same variable is `FALSE`;
//! * the disjunction of all three modes of a variable is `TRUE`;
//! * literals on certain variables resolve to constants (`m` is `TRUE`,
//!   any fault is `FALSE`); under value-dependent reasoning the same happens
//!   to literals made impossible or forced by known values;
//! * constants propagate, children are flattened, sorted and deduplicated.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::context::KnowledgeContext;
use crate::expr::{Expr, Literal};
use crate::mode::{FailureMode, ValueType};

pub fn simplify(e: &Expr, ctx: &KnowledgeContext) -> Expr {
    match e {
        Expr::True => Expr::True,
        Expr::False => Expr::False,
        Expr::Lit(l) => match ctx.literal_truth(l) {
            Some(true) => Expr::True,
            Some(false) => Expr::False,
            None => Expr::Lit(l.clone()),
        },
        Expr::And(cs) => {
            let mut kids = Vec::with_capacity(cs.len());
            for c in cs {
                match simplify(c, ctx) {
                    Expr::True => {}
                    Expr::False => return Expr::False,
                    Expr::And(inner) => kids.extend(inner),
                    other => kids.push(other),
                }
            }
            kids.sort();
            kids.dedup();
            if has_conflict(&kids) {
                return Expr::False;
            }
            Expr::and(kids)
        }
        Expr::Or(cs) => {
            let mut kids = Vec::with_capacity(cs.len());
            for c in cs {
                match simplify(c, ctx) {
                    Expr::False => {}
                    Expr::True => return Expr::True,
                    Expr::Or(inner) => kids.extend(inner),
                    other => kids.push(other),
                }
            }
            kids.sort();
            kids.dedup();
            if covers_all_modes(&kids) {
                return Expr::True;
            }
            Expr::or(kids)
        }
    }
}

fn literal_children(kids: &[Expr]) -> impl Iterator<Item = &Literal> {
    kids.iter().filter_map(|k| match k {
        Expr::Lit(l) => Some(l),
        _ => None,
    })
}

/// Two different modes of one variable among the literal children.
fn has_conflict(kids: &[Expr]) -> bool {
    let mut seen: BTreeMap<&str, FailureMode> = BTreeMap::new();
    for l in literal_children(kids) {
        match seen.get(l.var.as_str()) {
            Some(&m) if m != l.mode => return true,
            _ => {
                seen.insert(&l.var, l.mode);
            }
        }
    }
    false
}

/// Some variable appears with all three modes of its type.
fn covers_all_modes(kids: &[Expr]) -> bool {
    let mut seen: BTreeMap<&str, [bool; 5]> = BTreeMap::new();
    for l in literal_children(kids) {
        let idx = FailureMode::ALL.iter().position(|m| *m == l.mode).unwrap();
        seen.entry(&l.var).or_default()[idx] = true;
    }
    let has = |set: &[bool; 5], m: FailureMode| {
        set[FailureMode::ALL.iter().position(|x| *x == m).unwrap()]
    };
    seen.values().any(|set| {
        [ValueType::Real, ValueType::Bool]
            .iter()
            .any(|ty| ty.modes().iter().all(|m| has(set, *m)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::lit;
    use FailureMode::*;

    fn plain() -> KnowledgeContext {
        KnowledgeContext::minimum_conditions()
    }

    #[test]
    fn conflicting_modes_collapse() {
        let e = Expr::and([lit("x", High), lit("x", Low)]);
        assert_eq!(simplify(&e, &plain()), Expr::False);
        let e = Expr::and([lit("x", Match), lit("x", Low), lit("y", High)]);
        assert_eq!(simplify(&e, &plain()), Expr::False);
        let e = Expr::and([lit("y", True), lit("y", True)]);
        assert_eq!(simplify(&e, &plain()), lit("y", True));
    }

    #[test]
    fn wildcard_collapses() {
        let e = Expr::or([lit("x", True), lit("x", Match), lit("x", False)]);
        assert_eq!(simplify(&e, &plain()), Expr::True);
        let e = Expr::wildcard("r", ValueType::Real);
        assert_eq!(simplify(&e, &plain()), Expr::True);
        let e = Expr::or([lit("x", True), lit("x", False)]);
        assert_eq!(
            simplify(&e, &plain()),
            Expr::Or(alloc::vec![lit("x", False), lit("x", True)])
        );
    }

    #[test]
    fn certain_variable_rules_out_its_faults() {
        let ctx = KnowledgeContext::certain_causes().with_certain("x");
        let e = Expr::or([lit("x", High), lit("p", Low)]);
        assert_eq!(simplify(&e, &ctx), lit("p", Low));
        let e = Expr::and([lit("x", Match), lit("p", Low)]);
        assert_eq!(simplify(&e, &ctx), lit("p", Low));
        assert_eq!(simplify(&lit("x", High), &ctx), Expr::False);
    }

    #[test]
    fn output_is_sorted_and_deduplicated() {
        let e = Expr::or([lit("b", High), lit("a", Low), lit("b", High)]);
        assert_eq!(
            simplify(&e, &plain()),
            Expr::Or(alloc::vec![lit("a", Low), lit("b", High)])
        );
    }
}
