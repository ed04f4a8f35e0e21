//! Value grids used to enumerate real-valued assignments.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mode::{FailureMode, Value, ValueType};

/// Intended values and deviation sizes for real variables.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerGrid {
    pub intended: Vec<f64>,
    pub deltas: Vec<f64>,
}

/// Seeds of the two randomized grids in [`SamplerGrid::documented`].
pub const DOCUMENTED_SEEDS: [u64; 2] = [0x5eed_0001, 0x5eed_0002];

impl SamplerGrid {
    /// Intended values `{-2, -1, -0.5, 0, 0.5, 1, 2}`, deviations
    /// `{0.25, 1, 3}`.
    pub fn standard() -> Self {
        SamplerGrid {
            intended: alloc::vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0],
            deltas: alloc::vec![0.25, 1.0, 3.0],
        }
    }

    /// Three deviation sizes drawn as multiples of 1/8 in (0, 4]. Intended
    /// values are 0, ± each deviation and ± one extra draw, so deviations
    /// landing exactly on zero or crossing it are always present.
    pub fn seeded(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| f64::from(rng.gen_range(1..=32u32)) / 8.0;
        let mut deltas = Vec::new();
        while deltas.len() < 3 {
            let d = draw(&mut rng);
            if !deltas.contains(&d) {
                deltas.push(d);
            }
        }
        deltas.sort_by(f64::total_cmp);
        let extra = draw(&mut rng);
        let mut intended = alloc::vec![0.0, extra, -extra];
        for d in &deltas {
            intended.push(*d);
            intended.push(-*d);
        }
        intended.sort_by(f64::total_cmp);
        intended.dedup();
        SamplerGrid { intended, deltas }
    }

    /// The standard grid followed by the two seeded ones.
    pub fn documented() -> [SamplerGrid; 3] {
        [
            SamplerGrid::standard(),
            SamplerGrid::seeded(DOCUMENTED_SEEDS[0]),
            SamplerGrid::seeded(DOCUMENTED_SEEDS[1]),
        ]
    }

    /// All (reported, intended) pairs of a variable in the given mode.
    pub fn pairs(&self, ty: ValueType, mode: FailureMode) -> Vec<(Value, Value)> {
        match ty {
            ValueType::Bool => bool_pairs(mode),
            ValueType::Real => {
                let mut out = Vec::new();
                for &v in &self.intended {
                    match mode {
                        FailureMode::Match => out.push((Value::Real(v), Value::Real(v))),
                        FailureMode::High | FailureMode::Low => {
                            for &d in &self.deltas {
                                let r = if mode == FailureMode::High {
                                    v + d
                                } else {
                                    v - d
                                };
                                out.push((Value::Real(r), Value::Real(v)));
                            }
                        }
                        _ => {}
                    }
                }
                out
            }
        }
    }
}

pub fn bool_pairs(mode: FailureMode) -> Vec<(Value, Value)> {
    let b = Value::Bool;
    match mode {
        FailureMode::True => alloc::vec![(b(true), b(false))],
        FailureMode::False => alloc::vec![(b(false), b(true))],
        FailureMode::Match => alloc::vec![(b(false), b(false)), (b(true), b(true))],
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_sizes() {
        let g = SamplerGrid::standard();
        assert_eq!(g.pairs(ValueType::Real, FailureMode::Match).len(), 7);
        assert_eq!(g.pairs(ValueType::Real, FailureMode::High).len(), 21);
        assert!(g.pairs(ValueType::Real, FailureMode::True).is_empty());
        assert_eq!(g.pairs(ValueType::Bool, FailureMode::Match).len(), 2);
    }

    #[test]
    fn seeded_grids_are_deterministic_and_distinct() {
        let [a, b, c] = SamplerGrid::documented();
        assert_eq!(b, SamplerGrid::seeded(DOCUMENTED_SEEDS[0]));
        assert_ne!(a, b);
        assert_ne!(b, c);
        for g in [&b, &c] {
            assert!(g.intended.contains(&0.0));
            for d in &g.deltas {
                assert!(g.intended.contains(d) && g.intended.contains(&-d));
            }
        }
    }

    #[test]
    fn pairs_have_the_requested_mode() {
        let g = SamplerGrid::seeded(7);
        for ty in [ValueType::Real, ValueType::Bool] {
            for mode in ty.modes() {
                for (r, i) in g.pairs(ty, mode) {
                    assert_eq!(crate::mode::md(r, i).unwrap(), mode);
                }
            }
        }
    }
}
