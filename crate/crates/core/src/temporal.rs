//! Temporal operators on trace predicates and finite-prefix evaluation.
//!
//! `split` decomposes a predicate into a head (the obligation on the current
//! instant) and a tail (the obligation on the rest of the trace). `eval_prefix`
//! is the runtime monitor: a finite prefix can refute a safety property but
//! never establish an `always`.

use std::collections::{BTreeMap, HashMap};

use crate::ast::*;

/// Head: the state predicate a trace must satisfy at its first instant.
pub fn hd(p: &TracePred) -> StatePred {
    match p {
        TracePred::State(s) => s.clone(),
        TracePred::And(a, b) => StatePred::and(hd(a), hd(b)),
        TracePred::Always(a) => hd(a),
        TracePred::Next(_) => StatePred::True,
    }
}

/// Guards every state predicate in `p` with `q`, instant by instant.
pub fn impl_(q: &StatePred, p: &TracePred) -> TracePred {
    match p {
        TracePred::State(StatePred::True) => TracePred::TRUE,
        TracePred::State(s) => TracePred::State(StatePred::implies(q.clone(), s.clone())),
        TracePred::And(a, b) => TracePred::and(impl_(q, a), impl_(q, b)),
        TracePred::Always(a) => TracePred::always(impl_(q, a)),
        TracePred::Next(a) => TracePred::next(impl_(q, a)),
    }
}

/// Splits `p` into `(head, tail)` with `p` equivalent to
/// `head and next tail`.
pub fn split(p: &TracePred) -> (StatePred, TracePred) {
    match p {
        TracePred::State(s) => (s.clone(), TracePred::TRUE),
        TracePred::And(a, b) => {
            let (a1, a2) = split(a);
            let (b1, b2) = split(b);
            (StatePred::and(a1, b1), TracePred::and(a2, b2))
        }
        TracePred::Next(a) => (StatePred::True, (**a).clone()),
        TracePred::Always(a) => {
            let (a1, a2) = split(a);
            (a1, TracePred::and(a2, p.clone()))
        }
    }
}

/// The refinement on the value emitted at the current instant.
pub fn type_head(t: &RefType) -> RefType {
    t.map_pred(|p| TracePred::State(split(p).0))
}

/// The refinement on the stream from the next instant on.
pub fn type_tail(t: &RefType) -> RefType {
    t.map_pred(|p| split(p).1)
}

/// Shifts a refinement one instant into the future; used for variables seen
/// from inside a `delay`.
pub fn type_prev(t: &RefType) -> RefType {
    t.map_pred(|p| TracePred::next(p.clone()))
}

// ------------------------------------------------------------------ evaluation

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound name `{0}` in predicate")]
    Unbound(String),
    #[error("type mismatch in predicate: {0}")]
    Type(String),
    #[error("division by zero in predicate")]
    DivByZero,
    #[error("integer overflow in predicate")]
    Overflow,
    #[error("cannot evaluate function `{0}`")]
    NoFunction(String),
}

/// Variable and function lookup for predicate evaluation.
pub trait Valuation {
    fn lookup(&self, name: &str) -> Option<Value>;

    fn apply(&self, f: &str, _args: &[Value]) -> Result<Value, EvalError> {
        Err(EvalError::NoFunction(f.to_string()))
    }
}

impl Valuation for HashMap<String, Value> {
    fn lookup(&self, name: &str) -> Option<Value> {
        self.get(name).cloned()
    }
}

impl Valuation for BTreeMap<String, Value> {
    fn lookup(&self, name: &str) -> Option<Value> {
        self.get(name).cloned()
    }
}

impl<V: Valuation + ?Sized> Valuation for &V {
    fn lookup(&self, name: &str) -> Option<Value> {
        (**self).lookup(name)
    }
    fn apply(&self, f: &str, args: &[Value]) -> Result<Value, EvalError> {
        (**self).apply(f, args)
    }
}

pub fn eval_term(t: &Term, env: &dyn Valuation) -> Result<Value, EvalError> {
    Ok(match t {
        Term::Int(i) => Value::Int(*i),
        Term::Real(r) => Value::Float(*r),
        Term::Bool(b) => Value::Bool(*b),
        Term::Var(x) => env.lookup(x).ok_or_else(|| EvalError::Unbound(x.clone()))?,
        Term::Neg(a) => match eval_term(a, env)? {
            Value::Int(i) => Value::Int(i.checked_neg().ok_or(EvalError::Overflow)?),
            Value::Float(f) => Value::Float(-f),
            v => return Err(EvalError::Type(format!("cannot negate {v}"))),
        },
        Term::Arith(op, a, b) => arith(*op, eval_term(a, env)?, eval_term(b, env)?)?,
        Term::App(f, args) => {
            let vs = args.iter().map(|a| eval_term(a, env)).collect::<Result<Vec<_>, _>>()?;
            env.apply(f, &vs)?
        }
        Term::Ite(c, a, b) => {
            if eval_state(c, env)? {
                eval_term(a, env)?
            } else {
                eval_term(b, env)?
            }
        }
        Term::Pred(p) => Value::Bool(eval_state(p, env)?),
    })
}

/// Arithmetic with the runtime semantics: checked 64-bit integers,
/// IEEE doubles, and a trap on division by zero.
pub fn arith(op: ArithOp, a: Value, b: Value) -> Result<Value, EvalError> {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => {
            let r = match op {
                ArithOp::Add => x.checked_add(y),
                ArithOp::Sub => x.checked_sub(y),
                ArithOp::Mul => x.checked_mul(y),
                ArithOp::Div => {
                    if y == 0 {
                        return Err(EvalError::DivByZero);
                    }
                    // Euclidean, as SMT-LIB `div`
                    x.checked_div_euclid(y)
                }
            };
            r.map(Value::Int).ok_or(EvalError::Overflow)
        }
        (Value::Float(x), Value::Float(y)) => Ok(Value::Float(match op {
            ArithOp::Add => x + y,
            ArithOp::Sub => x - y,
            ArithOp::Mul => x * y,
            ArithOp::Div => {
                if y == 0.0 {
                    return Err(EvalError::DivByZero);
                }
                x / y
            }
        })),
        (a, b) => Err(EvalError::Type(format!("`{}` applied to {a} and {b}", op.symbol()))),
    }
}

pub fn compare(op: CmpOp, a: &Value, b: &Value) -> Result<bool, EvalError> {
    use std::cmp::Ordering;
    let ord = match (a, b) {
        (Value::Int(x), Value::Int(y)) => x.partial_cmp(y),
        (Value::Float(x), Value::Float(y)) => x.partial_cmp(y),
        (Value::Bool(x), Value::Bool(y)) if matches!(op, CmpOp::Eq | CmpOp::Ne) => x.partial_cmp(y),
        (a, b) => return Err(EvalError::Type(format!("`{}` applied to {a} and {b}", op.symbol()))),
    };
    // NaN compares false under every operator except `<>`.
    let Some(ord) = ord else { return Ok(op == CmpOp::Ne) };
    Ok(match op {
        CmpOp::Eq => ord == Ordering::Equal,
        CmpOp::Ne => ord != Ordering::Equal,
        CmpOp::Lt => ord == Ordering::Less,
        CmpOp::Le => ord != Ordering::Greater,
        CmpOp::Gt => ord == Ordering::Greater,
        CmpOp::Ge => ord != Ordering::Less,
    })
}

pub fn eval_state(p: &StatePred, env: &dyn Valuation) -> Result<bool, EvalError> {
    Ok(match p {
        StatePred::True => true,
        StatePred::False => false,
        StatePred::Atom(t) => match eval_term(t, env)? {
            Value::Bool(b) => b,
            v => return Err(EvalError::Type(format!("expected a boolean, found {v}"))),
        },
        StatePred::Cmp(op, a, b) => compare(*op, &eval_term(a, env)?, &eval_term(b, env)?)?,
        StatePred::Not(a) => !eval_state(a, env)?,
        StatePred::And(a, b) => eval_state(a, env)? && eval_state(b, env)?,
        StatePred::Or(a, b) => eval_state(a, env)? || eval_state(b, env)?,
        StatePred::Implies(a, b) => !eval_state(a, env)? || eval_state(b, env)?,
    })
}

/// Three-valued outcome of checking a predicate on a finite prefix.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Inconclusive,
    /// The state predicate failed at this instant.
    Violation { instant: usize, pred: StatePred },
}

impl Verdict {
    pub fn is_violation(&self) -> bool {
        matches!(self, Verdict::Violation { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Violation { .. } => "violation",
        }
    }

    /// Violation dominates (earliest instant wins), then Inconclusive, then Pass.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (a @ Verdict::Violation { .. }, b @ Verdict::Violation { .. }) => {
                let (Verdict::Violation { instant: i, .. }, Verdict::Violation { instant: j, .. }) = (&a, &b)
                else {
                    unreachable!()
                };
                if j < i {
                    b
                } else {
                    a
                }
            }
            (v @ Verdict::Violation { .. }, _) | (_, v @ Verdict::Violation { .. }) => v,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }
}

/// Evaluates `p` on the finite trace prefix. `always` never yields `Pass`:
/// it is either refuted within the prefix or inconclusive.
pub fn eval_prefix<V: Valuation>(p: &TracePred, trace: &[V]) -> Result<Verdict, EvalError> {
    eval_at(p, trace, 0)
}

fn eval_at<V: Valuation>(p: &TracePred, trace: &[V], i: usize) -> Result<Verdict, EvalError> {
    match p {
        TracePred::State(StatePred::True) => Ok(Verdict::Pass),
        TracePred::State(s) => {
            if i >= trace.len() {
                Ok(Verdict::Inconclusive)
            } else if eval_state(s, &trace[i])? {
                Ok(Verdict::Pass)
            } else {
                Ok(Verdict::Violation { instant: i, pred: s.clone() })
            }
        }
        TracePred::Next(a) => eval_at(a, trace, i + 1),
        TracePred::And(a, b) => Ok(eval_at(a, trace, i)?.and(eval_at(b, trace, i)?)),
        TracePred::Always(a) => {
            let mut verdict = Verdict::Inconclusive;
            for j in i..trace.len() {
                let v = eval_at(a, trace, j)?;
                if v.is_violation() {
                    verdict = verdict.and(v);
                }
            }
            Ok(verdict)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_trace_pred;

    fn tp(s: &str) -> TracePred {
        parse_trace_pred(s).unwrap()
    }

    fn trace(xs: &[i64]) -> Vec<HashMap<String, Value>> {
        xs.iter().map(|x| HashMap::from([("x".to_string(), Value::Int(*x))])).collect()
    }

    #[test]
    fn split_always() {
        let (h, t) = split(&tp("always (v >= 0)"));
        assert_eq!(h.to_string(), "v >= 0");
        assert_eq!(t, tp("always (v >= 0)"));
    }

    #[test]
    fn split_next_and_state() {
        let (h, t) = split(&tp("v = 0 and next always (v >= 1)"));
        assert_eq!(h.to_string(), "v = 0");
        assert_eq!(t, tp("always (v >= 1)"));
        let (h, t) = split(&tp("next next (v = 2)"));
        assert_eq!(h, StatePred::True);
        assert_eq!(t, tp("next (v = 2)"));
    }

    #[test]
    fn hd_examples() {
        assert_eq!(hd(&tp("always (v > 0) and next (v > 1)")).to_string(), "v > 0");
        assert_eq!(hd(&tp("next (v > 1)")), StatePred::True);
    }

    #[test]
    fn impl_distributes() {
        let q = StatePred::var("c");
        assert_eq!(impl_(&q, &tp("always next (v > 0)")), tp("always next (c => v > 0)"));
    }

    #[test]
    fn type_projections() {
        let t = crate::syntax::parse_reftype("{v : int | v = 0 and next always (v >= 1)}").unwrap();
        assert_eq!(type_head(&t).to_string(), "{v : int | v = 0}");
        assert_eq!(type_tail(&t).to_string(), "{v : int | always (v >= 1)}");
        assert_eq!(type_prev(&t).to_string(), "{v : int | next (v = 0 and next always (v >= 1))}");
    }

    #[test]
    fn prefix_verdicts() {
        let p = tp("x = 0 and next always (x = 1)");
        assert_eq!(eval_prefix(&p, &trace(&[0, 1, 1, 1])).unwrap(), Verdict::Inconclusive);
        assert_eq!(eval_prefix(&tp("x = 0"), &trace(&[0, 5])).unwrap(), Verdict::Pass);
        let v = eval_prefix(&p, &trace(&[0, 1, 2, 1])).unwrap();
        assert!(matches!(v, Verdict::Violation { instant: 2, .. }));
        let v = eval_prefix(&tp("always (x >= 0) and next next (x = 9)"), &trace(&[0, 1, -1, 0])).unwrap();
        assert!(matches!(v, Verdict::Violation { instant: 2, .. }));
        assert_eq!(eval_prefix(&tp("next (x = 0)"), &trace(&[3])).unwrap(), Verdict::Inconclusive);
    }

    #[test]
    fn earliest_violation_inside_always() {
        // instant 1 fails through the `x >= 0` conjunct even though the scan
        // at instant 0 reports instant 2 first
        let v = eval_prefix(&tp("always (next next (x = 0) and x >= 0)"), &trace(&[0, -1, 5])).unwrap();
        assert!(matches!(v, Verdict::Violation { instant: 1, .. }));
    }

    #[test]
    fn runtime_arith() {
        assert_eq!(arith(ArithOp::Div, Value::Int(-7), Value::Int(2)), Ok(Value::Int(-4)));
        assert_eq!(arith(ArithOp::Div, Value::Int(-7), Value::Int(-2)), Ok(Value::Int(4)));
        assert_eq!(arith(ArithOp::Div, Value::Int(7), Value::Int(-2)), Ok(Value::Int(-3)));
        assert_eq!(arith(ArithOp::Div, Value::Int(1), Value::Int(0)), Err(EvalError::DivByZero));
        assert_eq!(arith(ArithOp::Add, Value::Int(i64::MAX), Value::Int(1)), Err(EvalError::Overflow));
    }
}
