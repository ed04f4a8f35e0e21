//! Failure truth tables of Boolean kinds.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::kind::{apply, Attrs, EvalError, Kind};
use crate::mode::{md, FailureMode, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TruthTableError {
    #[error("{0} is not a Boolean kind")]
    NotBoolean(Kind),
    #[error("truth tables are limited to 4 arguments, got {0}")]
    TooWide(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTableRow {
    /// (reported, intended, mode) per argument.
    pub inputs: Vec<(bool, bool, FailureMode)>,
    pub output: (bool, bool, FailureMode),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    pub kind: Kind,
    pub rows: Vec<TruthTableRow>,
}

/// All combinations of reported and intended argument values.
///
/// Rows count up in binary over `x̃₁ x̄₁ x̃₂ x̄₂ …` with the first column most
/// significant and `F` before `T`.
pub fn truth_table(kind: Kind, attrs: &Attrs, arity: usize) -> Result<TruthTable, TruthTableError> {
    if !kind.is_boolean() {
        return Err(TruthTableError::NotBoolean(kind));
    }
    if arity > 4 {
        return Err(TruthTableError::TooWide(arity));
    }
    let bits = 2 * arity;
    let mut rows = Vec::with_capacity(1 << bits);
    for code in 0u32..(1 << bits) {
        let bit = |k: usize| code & (1 << (bits - 1 - k)) != 0;
        let inputs: Vec<(bool, bool, FailureMode)> = (0..arity)
            .map(|i| {
                let (r, v) = (bit(2 * i), bit(2 * i + 1));
                (r, v, md(Value::Bool(r), Value::Bool(v)).unwrap())
            })
            .collect();
        let rep: Vec<Value> = inputs.iter().map(|x| Value::Bool(x.0)).collect();
        let int: Vec<Value> = inputs.iter().map(|x| Value::Bool(x.1)).collect();
        let r = apply(kind, attrs, &rep)?;
        let v = apply(kind, attrs, &int)?;
        let output = (
            r.as_bool().unwrap(),
            v.as_bool().unwrap(),
            md(r, v).unwrap(),
        );
        rows.push(TruthTableRow { inputs, output });
    }
    Ok(TruthTable { kind, rows })
}

impl TruthTable {
    /// Plain-text rendering with aligned columns.
    pub fn render(&self) -> String {
        let arity = self.rows.first().map_or(0, |r| r.inputs.len());
        let mut header: Vec<String> = alloc::vec![String::from("No.")];
        let names: Vec<String> = if arity == 1 {
            alloc::vec![String::from("x")]
        } else {
            (1..=arity).map(|i| format!("x{i}")).collect()
        };
        for n in names.iter().map(String::as_str).chain(["y"]) {
            header.push(format!("{n}~"));
            header.push(format!("{n}-"));
            header.push(format!("{n}^"));
        }
        let tv = |b: bool| if b { "T" } else { "F" };
        let mut lines: Vec<Vec<String>> = alloc::vec![header];
        for (i, row) in self.rows.iter().enumerate() {
            let mut cells = alloc::vec![format!("{}", i + 1)];
            for (r, v, m) in row.inputs.iter().chain([&row.output]) {
                cells.push(tv(*r).into());
                cells.push(tv(*v).into());
                cells.push(format!("{m}"));
            }
            lines.push(cells);
        }
        let widths: Vec<usize> = (0..lines[0].len())
            .map(|c| lines.iter().map(|l| l[c].len()).max().unwrap())
            .collect();
        let mut out = String::new();
        for l in &lines {
            let mut line = String::new();
            for (c, cell) in l.iter().enumerate() {
                if c > 0 {
                    line.push_str("  ");
                }
                line.push_str(cell);
                line.extend(core::iter::repeat_n(' ', widths[c] - cell.len()));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn not_table() {
        let t = truth_table(Kind::Not, &Attrs::None, 1).unwrap();
        assert_eq!(t.rows.len(), 4);
        for r in &t.rows {
            assert_eq!(r.output.2, r.inputs[0].2.invert());
        }
    }

    #[test]
    fn and_row_eleven() {
        let t = truth_table(Kind::And, &Attrs::None, 2).unwrap();
        assert_eq!(t.rows.len(), 16);
        let r = &t.rows[10];
        assert_eq!(r.inputs[0], (true, false, FailureMode::True));
        assert_eq!(r.inputs[1], (true, false, FailureMode::True));
        assert_eq!(r.output, (true, false, FailureMode::True));
    }

    #[test]
    fn real_kinds_are_rejected() {
        assert_eq!(
            truth_table(Kind::Add, &Attrs::None, 2),
            Err(TruthTableError::NotBoolean(Kind::Add))
        );
    }
}
