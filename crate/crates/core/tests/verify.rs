use mrv::smt::model::Replay;
use mrv::syntax::parse_program;
use mrv::typing::{verify_program, Outcome, Report, VerifyOptions};

fn verify(src: &str) -> Report {
    verify_program(&parse_program(src).unwrap(), &VerifyOptions::default()).unwrap()
}

#[test]
fn nonnegative_is_not_a_subtype_of_positive() {
    let r = verify("let f (w : {v : int | v >= 0}) : {v : int | v > 0} = w;;\nf (1)");
    assert!(!r.verified);
    let bad: Vec<_> = r.failures().collect();
    assert_eq!(bad.len(), 1);
    let Outcome::Invalid { model, replay } = &bad[0].outcome else { panic!("{:?}", bad[0].outcome) };
    // w >= 0 and not w > 0 leaves exactly one witness
    assert_eq!(model["w"], "0");
    assert_eq!(*replay, Replay::Confirmed);
}

#[test]
fn positive_is_a_subtype_of_nonnegative() {
    assert!(verify("let f (w : {v : int | v > 0}) : {v : int | v >= 0} = w;;\nf (1)").verified);
}

#[test]
fn call_sites_must_meet_the_parameter_type() {
    let r = verify("let f (w : {v : int | v > 0}) : {v : int | v >= 0} = w;;\nf (0)");
    assert!(!r.verified);
    assert!(r.failures().all(|o| o.rule == "T-APP"), "{:?}", r.failures().map(|o| &o.rule).collect::<Vec<_>>());
}

#[test]
fn next_constrains_only_later_instants() {
    assert!(verify("main : {v : int | v = 0 and next always (v = 1)} = 0 fby 1").verified);
    assert!(!verify("main : {v : int | always (v = 1)} = 0 fby 1").verified);
}

#[test]
fn float_division_by_a_nonzero_constant() {
    assert!(verify("let rec x : {v : float | always (v >= 0.0)} = 1.0 fby x / 2.0 in x").verified);
}
