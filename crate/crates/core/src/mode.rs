//! Failure modes, typed values and the direction-of-fault operators.

use core::cmp::Ordering;
use core::fmt;

use crate::error::AlgebraError;

/// Declared type of a system variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValueType {
    Real,
    Bool,
}

impl ValueType {
    pub fn as_str(self) -> &'static str {
        match self {
            ValueType::Real => "real",
            ValueType::Bool => "bool",
        }
    }

    /// The fault modes a variable of this type can take (excluding `m`).
    pub fn fault_modes(self) -> [FailureMode; 2] {
        match self {
            ValueType::Real => [FailureMode::High, FailureMode::Low],
            ValueType::Bool => [FailureMode::True, FailureMode::False],
        }
    }

    /// All three modes of this type, in tag order.
    pub fn modes(self) -> [FailureMode; 3] {
        let [a, b] = self.fault_modes();
        [a, b, FailureMode::Match]
    }
}

impl fmt::Display for ValueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A concrete value carried by a variable in either the reported or the
/// intended world.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Real(f64),
    Bool(bool),
}

impl Value {
    pub fn value_type(self) -> ValueType {
        match self {
            Value::Real(_) => ValueType::Real,
            Value::Bool(_) => ValueType::Bool,
        }
    }

    pub fn as_real(self) -> Option<f64> {
        match self {
            Value::Real(v) => Some(v),
            Value::Bool(_) => None,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            Value::Real(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(v) => write!(f, "{v}"),
            Value::Bool(true) => f.write_str("T"),
            Value::Bool(false) => f.write_str("F"),
        }
    }
}

/// The five-valued abstraction of the deviation between a reported and an
/// intended value.
///
/// `h`/`l` only apply to real variables, `t`/`f` only to Boolean ones and `m`
/// (no deviation) to both. The "any mode" wildcard is not a tag; see
/// [`crate::Expr::wildcard`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailureMode {
    /// Reported value higher than intended.
    High,
    /// Reported value lower than intended.
    Low,
    /// Reported `true` where `false` was intended (commission).
    True,
    /// Reported `false` where `true` was intended (omission).
    False,
    /// Reported equals intended.
    Match,
}

impl FailureMode {
    pub const ALL: [FailureMode; 5] = [
        FailureMode::High,
        FailureMode::Low,
        FailureMode::True,
        FailureMode::False,
        FailureMode::Match,
    ];

    pub fn letter(self) -> char {
        match self {
            FailureMode::High => 'h',
            FailureMode::Low => 'l',
            FailureMode::True => 't',
            FailureMode::False => 'f',
            FailureMode::Match => 'm',
        }
    }

    pub fn from_letter(c: char) -> Option<FailureMode> {
        Some(match c {
            'h' => FailureMode::High,
            'l' => FailureMode::Low,
            't' => FailureMode::True,
            'f' => FailureMode::False,
            'm' => FailureMode::Match,
            _ => return None,
        })
    }

    /// `Some(type)` for the family the mode belongs to, `None` for `m`.
    pub fn family(self) -> Option<ValueType> {
        match self {
            FailureMode::High | FailureMode::Low => Some(ValueType::Real),
            FailureMode::True | FailureMode::False => Some(ValueType::Bool),
            FailureMode::Match => None,
        }
    }

    pub fn is_fault(self) -> bool {
        self != FailureMode::Match
    }

    pub fn applies_to(self, ty: ValueType) -> bool {
        self.family().is_none_or(|fam| fam == ty)
    }

    /// Direction inversion: `h`↔`l`, `t`↔`f`, `m`↦`m`.
    pub fn invert(self) -> FailureMode {
        match self {
            FailureMode::High => FailureMode::Low,
            FailureMode::Low => FailureMode::High,
            FailureMode::True => FailureMode::False,
            FailureMode::False => FailureMode::True,
            FailureMode::Match => FailureMode::Match,
        }
    }
}

// Canonical ordering is by tag letter.
impl Ord for FailureMode {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letter().cmp(&other.letter())
    }
}

impl PartialOrd for FailureMode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FailureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Free-function form of [`FailureMode::invert`].
pub fn invert(mode: FailureMode) -> FailureMode {
    mode.invert()
}

/// Classifies the deviation between a reported and an intended value.
pub fn md(reported: Value, intended: Value) -> Result<FailureMode, AlgebraError> {
    match (reported, intended) {
        (Value::Real(r), Value::Real(i)) => {
            if r.is_nan() || i.is_nan() {
                return Err(AlgebraError::NotANumber);
            }
            Ok(if r > i {
                FailureMode::High
            } else if r < i {
                FailureMode::Low
            } else {
                FailureMode::Match
            })
        }
        (Value::Bool(r), Value::Bool(i)) => Ok(match (r, i) {
            (true, false) => FailureMode::True,
            (false, true) => FailureMode::False,
            _ => FailureMode::Match,
        }),
        (r, i) => Err(AlgebraError::TypeMismatch {
            reported: r.value_type(),
            intended: i.value_type(),
        }),
    }
}

/// Sign of a real quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Neg
        } else if x > 0.0 {
            Sign::Pos
        } else {
            Sign::Zero
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Neg => "neg",
            Sign::Zero => "zero",
            Sign::Pos => "pos",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            Sign::Neg => Direction::Invert,
            Sign::Zero | Sign::Pos => Direction::Identity,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Change of direction applied to a failure mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Identity,
    Invert,
}

impl Direction {
    pub fn apply(self, mode: FailureMode) -> FailureMode {
        match self {
            Direction::Identity => mode,
            Direction::Invert => mode.invert(),
        }
    }

    /// Composition; two inversions cancel.
    pub fn then(self, other: Direction) -> Direction {
        if self == other {
            Direction::Identity
        } else {
            Direction::Invert
        }
    }
}

/// `Invert` for strictly negative quantities, `Identity` otherwise (including 0).
pub fn direction_of_sign(s: f64) -> Direction {
    Sign::of(s).direction()
}
