use fmr_core::dnf::to_dnf;
use fmr_core::generate::{random_dag_model, random_loop_model, GenOptions};
use fmr_core::impact::cmp;
use fmr_core::{
    simplify, Expr, FailureMode, KnowledgeContext, Literal, ValueType, DEFAULT_TERM_CAP,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const VARS: [(&str, ValueType); 6] = [
    ("a", ValueType::Bool),
    ("b", ValueType::Bool),
    ("c", ValueType::Bool),
    ("r", ValueType::Real),
    ("s", ValueType::Real),
    ("u", ValueType::Real),
];

fn literal() -> impl Strategy<Value = Expr> {
    (0..VARS.len(), 0..3usize).prop_map(|(v, m)| {
        let (name, ty) = VARS[v];
        Expr::lit(name, ty.modes()[m])
    })
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        8 => literal(),
        1 => Just(Expr::True),
        1 => Just(Expr::False),
    ];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..4).prop_map(Expr::And),
            prop::collection::vec(inner, 0..4).prop_map(Expr::Or),
        ]
    })
}

/// Every assignment of one mode per variable, certain variables fixed to m.
fn assignments(certain: &[bool]) -> Vec<Vec<FailureMode>> {
    let mut out = vec![Vec::new()];
    for (i, (_, ty)) in VARS.iter().enumerate() {
        let choices: Vec<FailureMode> = if certain[i] {
            vec![FailureMode::Match]
        } else {
            ty.modes().to_vec()
        };
        out = out
            .into_iter()
            .flat_map(|a| {
                choices.iter().map(move |m| {
                    let mut a = a.clone();
                    a.push(*m);
                    a
                })
            })
            .collect();
    }
    out
}

fn eval(e: &Expr, a: &[FailureMode]) -> bool {
    e.eval(&|name: &str| {
        let i = VARS.iter().position(|(n, _)| *n == name).unwrap();
        a[i]
    })
}

proptest! {
    #[test]
    fn simplify_preserves_meaning(e in expr(), certain in prop::collection::vec(any::<bool>(), 6)) {
        let mut ctx = KnowledgeContext::certain_causes();
        for (i, c) in certain.iter().enumerate() {
            if *c {
                ctx.mark_certain(VARS[i].0);
            }
        }
        let s = simplify(&e, &ctx);
        for a in assignments(&certain) {
            prop_assert_eq!(eval(&s, &a), eval(&e, &a), "{} vs {}", e, s);
        }
    }

    #[test]
    fn dnf_preserves_meaning(e in expr()) {
        let d = to_dnf(&e, DEFAULT_TERM_CAP).unwrap();
        for a in assignments(&[false; 6]) {
            prop_assert_eq!(eval(&d, &a), eval(&e, &a), "{} vs {}", e, d);
        }
        prop_assert_eq!(to_dnf(&d, DEFAULT_TERM_CAP).unwrap(), d.clone());
    }

    #[test]
    fn dual_is_an_involution(e in expr()) {
        prop_assert_eq!(e.dual().dual(), e);
    }

    #[test]
    fn literal_display_parses_back(v in 0..VARS.len(), m in 0..3usize) {
        let (name, ty) = VARS[v];
        let l = Literal::new(name, ty.modes()[m]);
        prop_assert_eq!(Literal::parse(&l.to_string()), Some(l));
    }

    #[test]
    fn loops_found_exactly_when_not_sortable(seed in any::<u64>(), looped in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = if looped {
            random_loop_model(&mut rng, 4, 5).0
        } else {
            random_dag_model(&mut rng, &GenOptions::default())
        };
        let loops = m.detect_loops();
        prop_assert_eq!(loops.is_empty(), m.topological_order().is_some());
        prop_assert_eq!(loops.clone(), m.detect_loops());
        let broken = fmr_core::break_loops(&m);
        prop_assert!(broken.model.topological_order().is_some());
        prop_assert_eq!(broken.feedback.len(), loops.len());
    }
}

#[test]
fn inversion_and_cmp_symmetry() {
    for u in FailureMode::ALL {
        assert_eq!(fmr_core::invert(fmr_core::invert(u)), u);
        for v in FailureMode::ALL {
            if let (Ok(a), Ok(b)) = (cmp(u, v), cmp(v, u)) {
                assert_eq!(a.abs(), b.abs());
                assert_eq!(a, -b);
            }
        }
    }
}

#[test]
fn absorption_matches_enumeration() {
    let a = Expr::lit("a", FailureMode::True);
    let b = Expr::lit("b", FailureMode::True);
    let e = Expr::or([Expr::and([a.clone(), b]), a.clone()]);
    let d = to_dnf(&e, DEFAULT_TERM_CAP).unwrap();
    assert_eq!(d, a);
    for x in assignments(&[false; 6]) {
        assert_eq!(eval(&d, &x), eval(&e, &x));
    }
}
