//! Boolean expressions over failure literals.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::mode::{FailureMode, ValueType};

/// A sentence of the form `x̂ = u`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: String,
    pub mode: FailureMode,
}

impl Literal {
    pub fn new(var: impl Into<String>, mode: FailureMode) -> Literal {
        Literal {
            var: var.into(),
            mode,
        }
    }

    pub fn inverted(&self) -> Literal {
        Literal::new(self.var.clone(), self.mode.invert())
    }

    /// Parses `name=u` where `u` is one of `h l t f m`.
    pub fn parse(text: &str) -> Option<Literal> {
        let (var, mode) = text.rsplit_once('=')?;
        let mut chars = mode.trim().chars();
        let mode = FailureMode::from_letter(chars.next()?)?;
        if chars.next().is_some() || var.trim().is_empty() {
            return None;
        }
        Some(Literal::new(var.trim(), mode))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.var, self.mode)
    }
}

/// A failure expression.
///
/// The smart constructors [`Expr::and`] and [`Expr::or`] flatten nested
/// operators of the same kind and fold constants, so a constructed `And`/`Or`
/// always has at least two children and never directly contains a node of
/// its own kind.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    True,
    False,
    Lit(Literal),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

impl Expr {
    pub fn lit(var: impl Into<String>, mode: FailureMode) -> Expr {
        Expr::Lit(Literal::new(var, mode))
    }

    pub fn and(children: impl IntoIterator<Item = Expr>) -> Expr {
        let mut out = Vec::new();
        for c in children {
            match c {
                Expr::True => {}
                Expr::False => return Expr::False,
                Expr::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Expr::True,
            1 => out.pop().unwrap(),
            _ => Expr::And(out),
        }
    }

    pub fn or(children: impl IntoIterator<Item = Expr>) -> Expr {
        let mut out = Vec::new();
        for c in children {
            match c {
                Expr::False => {}
                Expr::True => return Expr::True,
                Expr::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Expr::False,
            1 => out.pop().unwrap(),
            _ => Expr::Or(out),
        }
    }

    /// The "any mode" sentence for a variable, desugared into the disjunction
    /// of the three modes of its type.
    pub fn wildcard(var: &str, ty: ValueType) -> Expr {
        Expr::or(ty.modes().into_iter().map(|m| Expr::lit(var, m)))
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Expr::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Expr::False)
    }

    /// Truth value under an assignment of one mode per variable.
    pub fn eval<F>(&self, mode_of: &F) -> bool
    where
        F: Fn(&str) -> FailureMode + ?Sized,
    {
        match self {
            Expr::True => true,
            Expr::False => false,
            Expr::Lit(l) => mode_of(&l.var) == l.mode,
            Expr::And(cs) => cs.iter().all(|c| c.eval(mode_of)),
            Expr::Or(cs) => cs.iter().any(|c| c.eval(mode_of)),
        }
    }

    /// Failure-mode dual: `∧`/`∨` exchanged, every mode inverted, constants
    /// swapped.
    pub fn dual(&self) -> Expr {
        match self {
            Expr::True => Expr::False,
            Expr::False => Expr::True,
            Expr::Lit(l) => Expr::Lit(l.inverted()),
            Expr::And(cs) => Expr::Or(cs.iter().map(Expr::dual).collect()),
            Expr::Or(cs) => Expr::And(cs.iter().map(Expr::dual).collect()),
        }
    }

    /// Replaces every literal by the expression returned for it.
    pub fn try_substitute<E, F>(&self, f: &mut F) -> Result<Expr, E>
    where
        F: FnMut(&Literal) -> Result<Expr, E>,
    {
        Ok(match self {
            Expr::True => Expr::True,
            Expr::False => Expr::False,
            Expr::Lit(l) => f(l)?,
            Expr::And(cs) => {
                let mut out = Vec::with_capacity(cs.len());
                for c in cs {
                    out.push(c.try_substitute(f)?);
                }
                Expr::and(out)
            }
            Expr::Or(cs) => {
                let mut out = Vec::with_capacity(cs.len());
                for c in cs {
                    out.push(c.try_substitute(f)?);
                }
                Expr::or(out)
            }
        })
    }

    pub fn literals(&self) -> BTreeSet<Literal> {
        let mut out = BTreeSet::new();
        self.collect_literals(&mut out);
        out
    }

    fn collect_literals(&self, out: &mut BTreeSet<Literal>) {
        match self {
            Expr::True | Expr::False => {}
            Expr::Lit(l) => {
                out.insert(l.clone());
            }
            Expr::And(cs) | Expr::Or(cs) => cs.iter().for_each(|c| c.collect_literals(out)),
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.literals().into_iter().map(|l| l.var).collect()
    }

    pub fn mentions(&self, var: &str) -> bool {
        match self {
            Expr::True | Expr::False => false,
            Expr::Lit(l) => l.var == var,
            Expr::And(cs) | Expr::Or(cs) => cs.iter().any(|c| c.mentions(var)),
        }
    }

    /// Number of nodes, used to keep intermediate expansions in check.
    pub fn size(&self) -> usize {
        match self {
            Expr::True | Expr::False | Expr::Lit(_) => 1,
            Expr::And(cs) | Expr::Or(cs) => 1 + cs.iter().map(Expr::size).sum::<usize>(),
        }
    }
}

impl From<Literal> for Expr {
    fn from(l: Literal) -> Expr {
        Expr::Lit(l)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, cs: &[Expr], sep: &str) -> fmt::Result {
            f.write_str("(")?;
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")
        }
        match self {
            Expr::True => f.write_str("TRUE"),
            Expr::False => f.write_str("FALSE"),
            Expr::Lit(l) => write!(f, "{l}"),
            Expr::And(cs) => join(f, cs, " & "),
            Expr::Or(cs) => join(f, cs, " | "),
        }
    }
}

/// Shorthand used throughout the tests: `lit("x", High)`.
pub fn lit(var: &str, mode: FailureMode) -> Expr {
    Expr::lit(var.to_string(), mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use FailureMode::*;

    #[test]
    fn constructors_flatten_and_fold() {
        let e = Expr::and([lit("a", True), Expr::and([lit("b", True), lit("c", True)])]);
        assert_eq!(
            e,
            Expr::And(vec![lit("a", True), lit("b", True), lit("c", True)])
        );
        assert_eq!(Expr::and([lit("a", True), Expr::False]), Expr::False);
        assert_eq!(Expr::or([lit("a", True), Expr::False]), lit("a", True));
        assert_eq!(Expr::or(Vec::new()), Expr::False);
        assert_eq!(Expr::and(Vec::new()), Expr::True);
    }

    #[test]
    fn dual_of_worked_example() {
        // x1=h & x2=l & (x1=m | x3=h)
        let phi = Expr::and([
            lit("x1", High),
            lit("x2", Low),
            Expr::or([lit("x1", Match), lit("x3", High)]),
        ]);
        let expected = Expr::or([
            lit("x1", Low),
            lit("x2", High),
            Expr::and([lit("x1", Match), lit("x3", Low)]),
        ]);
        assert_eq!(phi.dual(), expected);
        assert_eq!(phi.dual().dual(), phi);
        assert_eq!(lit("x", Match).dual(), lit("x", Match));
        assert_eq!(Expr::True.dual(), Expr::False);
    }

    #[test]
    fn literal_parsing() {
        assert_eq!(Literal::parse("p1=h"), Some(Literal::new("p1", High)));
        assert_eq!(Literal::parse("a=b=t"), Some(Literal::new("a=b", True)));
        assert_eq!(Literal::parse("x=q"), None);
        assert_eq!(Literal::parse("=t"), None);
        assert_eq!(Literal::parse("x=tt"), None);
    }

    #[test]
    fn display_is_compact() {
        let e = Expr::or([lit("p1", High), Expr::and([lit("x", Low), lit("y", True)])]);
        assert_eq!(alloc::format!("{e}"), "(p1=h | (x=l & y=t))");
    }
}
