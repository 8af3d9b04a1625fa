mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use mrv::ast::*;
use mrv::interp::Machine;
use mrv::smt::model::Replay;
use mrv::syntax::{parse_program, pretty};
use mrv::temporal::{eval_prefix, split};
use mrv::trace::{self, Monitor, Trace};
use mrv::typing::{verify_program, Outcome, VerifyOptions};

fn generated() -> impl Strategy<Value = (u64, Program)> {
    any::<u64>().prop_map(|seed| (seed, parse_program(&common::program(seed)).expect("generator output parses")))
}

fn verify(p: &Program) -> mrv::typing::Report {
    verify_program(p, &VerifyOptions::default()).expect("well-formed")
}

/// Spine bindings of `e`, outermost first.
fn spine(e: &Expr) -> Vec<&Binding> {
    let mut out = Vec::new();
    let mut cur = e;
    while let Expr::Let(b) | Expr::LetRec(b) = cur {
        out.push(&**b);
        cur = &b.body;
    }
    out
}

fn arb_state() -> impl Strategy<Value = TracePred> {
    (prop::sample::select(vec!["x", "y"]), -2i64..=2, prop::sample::select(vec![CmpOp::Ge, CmpOp::Lt, CmpOp::Eq]))
        .prop_map(|(x, c, op)| TracePred::State(StatePred::Cmp(op, Term::Var(x.into()), Term::Int(c))))
}

fn arb_pred() -> impl Strategy<Value = TracePred> {
    arb_state().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|p| TracePred::Always(Box::new(p))),
            inner.clone().prop_map(|p| TracePred::Next(Box::new(p))),
            (inner.clone(), inner).prop_map(|(a, b)| TracePred::And(Box::new(a), Box::new(b))),
        ]
    })
}

fn arb_trace() -> impl Strategy<Value = Vec<BTreeMap<String, Value>>> {
    prop::collection::vec((-3i64..=3, -3i64..=3), 0..8).prop_map(|rows| {
        rows.into_iter()
            .map(|(x, y)| BTreeMap::from([("x".to_string(), Value::Int(x)), ("y".to_string(), Value::Int(y))]))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn pretty_printing_round_trips((_, p) in generated()) {
        let text = pretty(&p);
        let q = parse_program(&text).unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(pretty(&q), text);
    }

    #[test]
    fn execution_is_deterministic((_, p) in generated()) {
        let (mut a, mut b) = (Machine::new(&p), Machine::new(&p));
        for _ in 0..40 {
            let (x, y) = (a.step().unwrap(), b.step().unwrap());
            prop_assert_eq!(x.output, y.output);
            prop_assert_eq!(&a.state, &b.state);
        }
    }

    #[test]
    fn spine_histories_grow_by_one_per_instant((_, p) in generated(), n in 1usize..30) {
        let mut m = Machine::new(&p);
        let mut outputs = Vec::new();
        for _ in 0..n {
            let inst = m.step().unwrap();
            outputs.push(inst.bindings);
        }
        for b in spine(&m.state) {
            prop_assert_eq!(b.history.len(), n);
            // the recorded history is what each instant reported; generated
            // binder names are unique
            if let Pattern::Var(x) = &b.pat {
                for (i, row) in outputs.iter().enumerate() {
                    let v = row.iter().find(|(name, _)| name == x).map(|(_, v)| v);
                    prop_assert_eq!(v, Some(&b.history[i]));
                }
            }
        }
    }

    #[test]
    fn split_is_equivalent(p in arb_pred(), tr in arb_trace()) {
        let (h, t) = split(&p);
        let q = TracePred::And(Box::new(TracePred::State(h)), Box::new(TracePred::Next(Box::new(t))));
        prop_assert_eq!(eval_prefix(&p, &tr).unwrap().kind(), eval_prefix(&q, &tr).unwrap().kind());
    }

    #[test]
    fn traces_round_trip_through_csv_and_jsonl((_, p) in generated(), n in 0usize..40) {
        let t = trace::run(&p, n, None).map_err(|(_, i, e)| TestCaseError::fail(format!("{i}: {e}")))?;
        let mut csv = Vec::new();
        t.write_csv(&mut csv).unwrap();
        let back = Trace::read_csv(csv.as_slice()).unwrap();
        prop_assert_eq!(&back, &t);
        let mut jsonl = Vec::new();
        t.write_jsonl(&mut jsonl).unwrap();
        let back = Trace::read_jsonl(jsonl.as_slice()).unwrap();
        if n > 0 {
            prop_assert_eq!(&back, &t);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn verified_programs_never_violate_at_runtime((seed, p) in generated()) {
        prop_assert!(verify(&p).verified, "seed {}", seed);
        let t = trace::run(&p, 100, None).map_err(|(_, i, e)| TestCaseError::fail(format!("{i}: {e}")))?;
        let verdicts = Monitor::new(&p).check(&t).unwrap();
        for v in verdicts {
            prop_assert!(!v.verdict.is_violation(), "seed {}: {} {:?}", seed, v.label, v.verdict);
        }
    }

    #[test]
    fn counterexamples_replay(c1 in prop::sample::select(vec![-3i64, -1, 1, 2]), c2 in -2i64..=2, c3 in -5i64..=5, l in -5i64..=5) {
        // unbounded a: the return bound never holds for every input
        let src = format!("let f ((a, b) : int * int) : {{v : int | v >= {l}}} = a * {c1} + b * {c2} + {c3};;\nf (0, 0)");
        let r = verify(&parse_program(&src).unwrap());
        prop_assert!(!r.verified);
        let f = r.obligations.iter().find(|o| o.rule == "T-FUN").unwrap();
        let Outcome::Invalid { model, replay } = &f.outcome else { return Err(TestCaseError::fail(f.outcome.label())) };
        prop_assert_eq!(replay, &Replay::Confirmed);
        let a: i64 = model["a"].parse().unwrap();
        let b: i64 = model.get("b").map_or(0, |b| b.parse().unwrap());
        prop_assert!(a * c1 + b * c2 + c3 < l, "{:?}", model);
    }

    #[test]
    fn lower_bounds_subtype_exactly_when_weaker(a in -4i64..=4, b in -4i64..=4, s in 0i64..=2) {
        // {v >= a} is a subtype of {v >= b} iff b <= a
        let src = format!(
            "let rec x : {{v : int | always (v >= {a})}} = {a} fby x + {s} in\n\
             let y : {{v : int | always (v >= {b})}} = x in y"
        );
        let r = verify(&parse_program(&src).unwrap());
        prop_assert_eq!(r.verified, b <= a, "{:?}", r.obligations.iter().map(|o| o.outcome.label()).collect::<Vec<_>>());
    }
}
