//! Every local model checked against forward simulation.

use fmr_core::catalogue::{table_cause, MUL_TABLE};
use fmr_core::generate::single_component;
use fmr_core::oracle::sampler::SamplerGrid;
use fmr_core::oracle::verify::{verify_result, Audit};
use fmr_core::oracle::{verify_certain_cause, verify_minimum_conditions, Verdict, VerifyOptions};
use fmr_core::{
    backward_reason, Attrs, CausePolicy, FailureMode, Kind, Knowledge, KnowledgeContext, Literal,
    Sign, SystemModel, Value, ValuePolicy,
};

use FailureMode::*;

fn fault_modes(kind: Kind) -> [FailureMode; 2] {
    kind.output_type().fault_modes()
}

/// Analyses `y = u` under both policies and audits the results on every
/// documented grid.
fn audit_all(
    m: &SystemModel,
    extra: impl Fn(KnowledgeContext) -> KnowledgeContext,
) -> Vec<(String, Audit)> {
    let kind = m.components[0].kind;
    let mut out = Vec::new();
    for u in fault_modes(kind) {
        for policy in [CausePolicy::CertainCauses, CausePolicy::MinimumConditions] {
            let values = if m.variables.iter().any(|v| !v.known.is_empty()) {
                ValuePolicy::Dependent
            } else {
                ValuePolicy::Independent
            };
            let ctx = extra(KnowledgeContext::from_model(m, policy, values));
            let r = backward_reason(m, &Literal::new("y", u), &ctx).unwrap();
            for grid in SamplerGrid::documented() {
                let opts = VerifyOptions::new(&grid).with_context(&ctx);
                let a = verify_result(m, &r, &opts).unwrap();
                out.push((
                    format!("{kind} y={u} {} -> {}", policy.as_str(), r.cause),
                    a,
                ));
                if kind.is_boolean() {
                    break;
                }
            }
        }
    }
    out
}

fn assert_all_pass(m: &SystemModel) {
    for (what, a) in audit_all(m, |c| c) {
        assert!(a.passed(), "{what}: {a:?}");
    }
}

#[test]
fn boolean_kinds() {
    for n in 2..=4 {
        assert_all_pass(&single_component(Kind::And, Attrs::None, n, &[]));
        assert_all_pass(&single_component(Kind::Or, Attrs::None, n, &[]));
    }
    assert_all_pass(&single_component(Kind::Not, Attrs::None, 1, &[]));
    for (rows, cols) in [(1, 2), (2, 1), (2, 2)] {
        assert_all_pass(&single_component(
            Kind::Dnf,
            Attrs::Grid { rows, cols },
            rows * cols,
            &[],
        ));
        assert_all_pass(&single_component(
            Kind::Cnf,
            Attrs::Grid { rows, cols },
            rows * cols,
            &[],
        ));
    }
    for n in 1..=3 {
        for k in 1..=n {
            assert_all_pass(&single_component(Kind::KooN, Attrs::KooN { k, n }, n, &[]));
        }
    }
}

#[test]
fn gate_with_a_certain_input() {
    // The certain input is a param, so the gate has one suspicious input.
    for kind in [Kind::And, Kind::Or] {
        assert_all_pass(&single_component(kind, Attrs::None, 1, &["c"]));
    }
}

#[test]
fn real_kinds() {
    assert_all_pass(&single_component(Kind::Add, Attrs::None, 2, &[]));
    assert_all_pass(&single_component(Kind::Add, Attrs::None, 3, &[]));
    assert_all_pass(&single_component(Kind::Avg, Attrs::None, 2, &[]));
    assert_all_pass(&single_component(Kind::Sub, Attrs::None, 2, &[]));
    assert_all_pass(&single_component(Kind::Inv, Attrs::None, 1, &[]));
    assert_all_pass(&single_component(Kind::Abs, Attrs::None, 1, &[]));
    assert_all_pass(&single_component(Kind::Mul, Attrs::None, 2, &[]));
    assert_all_pass(&single_component(Kind::Mul, Attrs::None, 1, &["p"]));
    assert_all_pass(&single_component(Kind::Lim, Attrs::None, 1, &["lo", "hi"]));
    assert_all_pass(&single_component(Kind::Gcom, Attrs::None, 2, &[]));
    assert_all_pass(&single_component(Kind::Lcom, Attrs::None, 2, &[]));
    assert_all_pass(&single_component(Kind::Lcom, Attrs::None, 1, &["t"]));
    let g = Attrs::Gradient(vec![Sign::Pos, Sign::Neg, Sign::Pos]);
    assert_all_pass(&single_component(Kind::Monotone, g, 3, &[]));
}

#[test]
fn weakened_models_are_not_certain_causes() {
    // Each of these kinds is flagged weakened under certain causes because
    // some cut set is refuted when read as a certain cause.
    let grid = SamplerGrid::standard();
    let cases = [
        single_component(Kind::Lim, Attrs::None, 1, &["lo", "hi"]),
        single_component(Kind::Gcom, Attrs::None, 2, &[]),
        single_component(Kind::Lcom, Attrs::None, 2, &[]),
        single_component(Kind::Abs, Attrs::None, 1, &[]),
        single_component(Kind::Mul, Attrs::None, 2, &[]),
        single_component(Kind::Mul, Attrs::None, 1, &["p"]),
    ];
    for m in &cases {
        let kind = m.components[0].kind;
        let u = fault_modes(kind)[0];
        let ctx =
            KnowledgeContext::from_model(m, CausePolicy::CertainCauses, ValuePolicy::Independent);
        let r = backward_reason(m, &Literal::new("y", u), &ctx).unwrap();
        assert!(r.weakened, "{kind}");
        let opts = VerifyOptions::new(&grid).with_context(&ctx);
        let refuted = r.terms().iter().any(|t| {
            matches!(
                verify_certain_cause(m, t, &r.target, &opts).unwrap(),
                Verdict::Refuted(_)
            )
        });
        assert!(refuted, "{kind}: {}", r.cause);
    }
}

fn sign_filter(
    signs: [(&'static str, Sign); 2],
    reported_only: bool,
) -> impl Fn(&str, (Value, Value)) -> bool {
    move |name, (r, i)| match signs.iter().find(|(n, _)| *n == name) {
        Some((_, s)) => {
            let ok = |v: Value| v.as_real().is_none_or(|x| Sign::of(x) == *s);
            ok(r) && (reported_only || ok(i))
        }
        None => true,
    }
}

#[test]
fn every_mul_table_row_is_a_minimum_condition() {
    let m = single_component(Kind::Mul, Attrs::None, 2, &[]);
    for row in &MUL_TABLE {
        let cause = table_cause(row, "x1", "x2");
        let filter = sign_filter([("x1", row.reported1), ("x2", row.reported2)], true);
        for grid in SamplerGrid::documented() {
            let opts = VerifyOptions::new(&grid).with_premise(&filter);
            let v = verify_minimum_conditions(&m, &cause, &Literal::new("y", row.effect), &opts)
                .unwrap();
            assert_eq!(
                v,
                Verdict::Unrefuted,
                "y={} with signs {} {}: {cause}",
                row.effect,
                row.reported1,
                row.reported2
            );
        }
    }
}

#[test]
fn mul_table_rows_used_by_the_engine() {
    let base = single_component(Kind::Mul, Attrs::None, 2, &[]);
    for row in &MUL_TABLE {
        let mut m = base.clone();
        let known = |s: Sign| Knowledge {
            reported: Some(Value::Real(match s {
                Sign::Neg => -1.5,
                Sign::Zero => 0.0,
                Sign::Pos => 1.5,
            })),
            ..Knowledge::default()
        };
        m.variables[0].known = known(row.reported1);
        m.variables[1].known = known(row.reported2);
        let ctx = KnowledgeContext::from_model(
            &m,
            CausePolicy::MinimumConditions,
            ValuePolicy::Dependent,
        );
        let r = backward_reason(&m, &Literal::new("y", row.effect), &ctx).unwrap();
        assert_eq!(
            r.cause,
            fmr_core::to_dnf(&table_cause(row, "x1", "x2"), usize::MAX).unwrap()
        );
        for grid in SamplerGrid::documented() {
            let opts = VerifyOptions::new(&grid).with_context(&ctx);
            assert!(verify_result(&m, &r, &opts).unwrap().passed());
        }
    }
}

#[test]
fn stable_signs_give_certain_causes() {
    let signs = [Sign::Neg, Sign::Pos];
    for s1 in signs {
        for s2 in signs {
            let mut m = single_component(Kind::Mul, Attrs::None, 2, &[]);
            m.variables[0].known.sign = Some(s1);
            m.variables[1].known.sign = Some(s2);
            for u in [High, Low] {
                let ctx = KnowledgeContext::from_model(
                    &m,
                    CausePolicy::CertainCauses,
                    ValuePolicy::Dependent,
                );
                let r = backward_reason(&m, &Literal::new("y", u), &ctx).unwrap();
                assert!(!r.weakened);
                for grid in SamplerGrid::documented() {
                    let opts = VerifyOptions::new(&grid).with_context(&ctx);
                    let a = verify_result(&m, &r, &opts).unwrap();
                    assert!(a.passed(), "{s1} {s2} {u}: {a:?}");
                }
            }
        }
    }
    for s in signs {
        let mut m = single_component(Kind::Abs, Attrs::None, 1, &[]);
        m.variables[0].known.sign = Some(s);
        let mut p = single_component(Kind::Mul, Attrs::None, 1, &["p"]);
        p.variables[1].known.sign = Some(s);
        for m in [m, p] {
            for u in [High, Low] {
                let ctx = KnowledgeContext::from_model(
                    &m,
                    CausePolicy::CertainCauses,
                    ValuePolicy::Dependent,
                );
                let r = backward_reason(&m, &Literal::new("y", u), &ctx).unwrap();
                assert!(!r.weakened);
                let grid = SamplerGrid::standard();
                let opts = VerifyOptions::new(&grid).with_context(&ctx);
                assert!(
                    verify_result(&m, &r, &opts).unwrap().passed(),
                    "{}",
                    r.cause
                );
            }
        }
    }
}
