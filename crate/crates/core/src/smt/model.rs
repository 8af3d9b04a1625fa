//! Solver models with exact values, and replay of obligations under them.

use std::collections::{BTreeMap, HashMap};
use std::cell::Cell;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::sexp::Sexp;
use crate::ast::*;
use crate::typing::logic::{Signature, Sort};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MValue {
    Int(BigInt),
    Real(BigRational),
    Bool(bool),
}

impl fmt::Display for MValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MValue::Int(i) => write!(f, "{i}"),
            MValue::Real(r) if r.is_integer() => write!(f, "{}.0", r.numer()),
            MValue::Real(r) => {
                let approx = r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN);
                write!(f, "{r} (~{approx})")
            }
            MValue::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl MValue {
    fn default_for(s: Sort) -> MValue {
        match s {
            Sort::Int => MValue::Int(BigInt::zero()),
            Sort::Real => MValue::Real(BigRational::zero()),
            Sort::Bool => MValue::Bool(false),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("malformed model: {0}")]
    Malformed(String),
    #[error("model value outside the supported fragment: {0}")]
    Unsupported(String),
    #[error("division by zero; the solver may give it any value")]
    DivByZero,
    #[error("no value for `{0}`")]
    Missing(String),
}

/// Bound on evaluation steps for one model term.
const EVAL_FUEL: usize = 1_000_000;

/// Constants and function interpretations from `(get-model)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Model {
    pub consts: BTreeMap<String, Sexp>,
    pub funs: BTreeMap<String, (Vec<String>, Sexp)>,
}

impl Model {
    /// Accepts both `((define-fun ..) ..)` and `(model (define-fun ..) ..)`.
    pub fn from_sexp(s: &Sexp) -> Result<Model, ModelError> {
        let items = s.list().ok_or_else(|| ModelError::Malformed("expected a list".into()))?;
        let items = match items {
            [Sexp::Atom(m), rest @ ..] if m == "model" => rest,
            xs => xs,
        };
        let mut m = Model::default();
        for d in items {
            let Some([Sexp::Atom(kw), Sexp::Atom(name), Sexp::List(params), _sort, body]) = d.list() else {
                return Err(ModelError::Malformed(format!("unexpected entry {d}")));
            };
            if kw != "define-fun" {
                return Err(ModelError::Malformed(format!("unexpected `{kw}`")));
            }
            if params.is_empty() {
                m.consts.insert(name.clone(), body.clone());
            } else {
                let ps = params
                    .iter()
                    .map(|p| match p.list() {
                        Some([Sexp::Atom(x), _]) => Ok(x.clone()),
                        _ => Err(ModelError::Malformed(format!("bad parameter {p}"))),
                    })
                    .collect::<Result<_, _>>()?;
                m.funs.insert(name.clone(), (ps, body.clone()));
            }
        }
        Ok(m)
    }

    /// Value of a constant, if the model assigns it.
    pub fn value(&self, name: &str) -> Option<Result<MValue, ModelError>> {
        self.consts.get(name).map(|b| self.eval(b, &HashMap::new(), 0))
    }

    /// Assigned constants as printable strings.
    pub fn assignments(&self) -> BTreeMap<String, String> {
        self.consts
            .iter()
            .map(|(k, v)| (k.clone(), self.eval(v, &HashMap::new(), 0).map(|v| v.to_string()).unwrap_or_else(|_| v.to_string())))
            .collect()
    }

    fn eval(&self, s: &Sexp, env: &HashMap<String, MValue>, depth: usize) -> Result<MValue, ModelError> {
        self.eval_in(s, env, depth, &Cell::new(EVAL_FUEL))
    }

    fn eval_in(&self, s: &Sexp, env: &HashMap<String, MValue>, depth: usize, fuel: &Cell<usize>) -> Result<MValue, ModelError> {
        if depth > 256 || fuel.get() == 0 {
            return Err(ModelError::Unsupported("model term too large".into()));
        }
        fuel.set(fuel.get() - 1);
        let unsupported = || ModelError::Unsupported(s.to_string());
        match s {
            Sexp::Str(_) => Err(unsupported()),
            Sexp::Atom(a) => {
                if let Some(v) = env.get(a) {
                    return Ok(v.clone());
                }
                match a.as_str() {
                    "true" => return Ok(MValue::Bool(true)),
                    "false" => return Ok(MValue::Bool(false)),
                    _ => {}
                }
                if let Some(v) = parse_numeral(a) {
                    return Ok(v);
                }
                if let Some(body) = self.consts.get(a) {
                    return self.eval_in(body, &HashMap::new(), depth + 1, fuel);
                }
                Err(unsupported())
            }
            Sexp::List(xs) => {
                let Some((Sexp::Atom(head), args)) = xs.split_first() else { return Err(unsupported()) };
                if head == "let" {
                    let [Sexp::List(binds), body] = args else { return Err(unsupported()) };
                    let mut inner = env.clone();
                    for b in binds {
                        let Some([Sexp::Atom(x), e]) = b.list() else { return Err(unsupported()) };
                        inner.insert(x.clone(), self.eval_in(e, env, depth + 1, fuel)?);
                    }
                    return self.eval_in(body, &inner, depth + 1, fuel);
                }
                if head == "ite" {
                    let [c, a, b] = args else { return Err(unsupported()) };
                    return match self.eval_in(c, env, depth + 1, fuel)? {
                        MValue::Bool(true) => self.eval_in(a, env, depth + 1, fuel),
                        MValue::Bool(false) => self.eval_in(b, env, depth + 1, fuel),
                        _ => Err(unsupported()),
                    };
                }
                let vs = args.iter().map(|a| self.eval_in(a, env, depth + 1, fuel)).collect::<Result<Vec<_>, _>>()?;
                if let Some((ps, body)) = self.funs.get(head) {
                    if ps.len() != vs.len() {
                        return Err(unsupported());
                    }
                    let inner: HashMap<String, MValue> = ps.iter().cloned().zip(vs).collect();
                    return self.eval_in(body, &inner, depth + 1, fuel);
                }
                builtin(head, vs).ok_or_else(unsupported)?
            }
        }
    }

    /// Interpretation of function `f` at `args`.
    pub fn apply(&self, f: &str, args: Vec<MValue>) -> Result<MValue, ModelError> {
        let (ps, body) = self.funs.get(f).ok_or_else(|| ModelError::Missing(f.to_string()))?;
        if ps.len() != args.len() {
            return Err(ModelError::Malformed(format!("`{f}` applied to {} arguments", args.len())));
        }
        let env: HashMap<String, MValue> = ps.iter().cloned().zip(args).collect();
        self.eval(body, &env, 0)
    }
}

fn parse_numeral(a: &str) -> Option<MValue> {
    if !a.as_bytes().first()?.is_ascii_digit() {
        return None;
    }
    if let Some((i, f)) = a.split_once('.') {
        if !i.bytes().all(|c| c.is_ascii_digit()) || !f.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let num: BigInt = format!("{i}{f}").parse().ok()?;
        let den = BigInt::from(10u32).pow(f.len() as u32);
        Some(MValue::Real(BigRational::new(num, den)))
    } else {
        a.parse().ok().map(MValue::Int)
    }
}

/// Built-in operators; `None` for anything unrecognised.
fn builtin(head: &str, vs: Vec<MValue>) -> Option<Result<MValue, ModelError>> {
    use MValue::*;
    let num2 = |vs: &[MValue]| -> Option<(BigRational, BigRational, bool)> {
        match vs {
            [Int(a), Int(b)] => Some((BigRational::from(a.clone()), BigRational::from(b.clone()), true)),
            [Real(a), Real(b)] => Some((a.clone(), b.clone(), false)),
            [Int(a), Real(b)] => Some((BigRational::from(a.clone()), b.clone(), false)),
            [Real(a), Int(b)] => Some((a.clone(), BigRational::from(b.clone()), false)),
            _ => None,
        }
    };
    let mk = |r: BigRational, int: bool| if int { Int(r.to_integer()) } else { Real(r) };
    Some(Ok(match (head, vs.as_slice()) {
        ("not", [Bool(b)]) => Bool(!b),
        ("and", bs) => Bool(bs.iter().all(|b| *b == Bool(true))),
        ("or", bs) => Bool(bs.iter().any(|b| *b == Bool(true))),
        ("=>", [Bool(a), Bool(b)]) => Bool(!a || *b),
        ("=", [a, b]) => match (a, b) {
            (Bool(x), Bool(y)) => Bool(x == y),
            _ => {
                let (x, y, _) = num2(&vs)?;
                Bool(x == y)
            }
        },
        ("distinct", [a, b]) => match builtin("=", vec![a.clone(), b.clone()])? {
            Ok(Bool(e)) => Bool(!e),
            r => return Some(r),
        },
        ("-", [Int(a)]) => Int(-a),
        ("-", [Real(a)]) => Real(-a),
        ("to_real", [Int(a)]) => Real(BigRational::from(a.clone())),
        ("to_int", [Real(a)]) => Int(a.floor().to_integer()),
        ("abs", [Int(a)]) => Int(a.abs()),
        ("abs", [Real(a)]) => Real(a.abs()),
        ("+" | "*", vs) if !vs.is_empty() => {
            let mut acc = vs[0].clone();
            for v in &vs[1..] {
                let (a, b, int) = num2(&[acc, v.clone()])?;
                acc = mk(if head == "+" { a + b } else { a * b }, int);
            }
            acc
        }
        ("-", [a, b]) => {
            let (a, b, int) = num2(&[a.clone(), b.clone()])?;
            mk(a - b, int)
        }
        ("/", [a, b]) => {
            let (a, b, _) = num2(&[a.clone(), b.clone()])?;
            if b.is_zero() {
                return Some(Err(ModelError::DivByZero));
            }
            Real(a / b)
        }
        ("div", [Int(a), Int(b)]) => match smt_div(a, b) {
            Some(q) => Int(q),
            None => return Some(Err(ModelError::DivByZero)),
        },
        ("mod", [Int(a), Int(b)]) => match smt_div(a, b) {
            Some(q) => Int(a - b * q),
            None => return Some(Err(ModelError::DivByZero)),
        },
        ("<" | "<=" | ">" | ">=", [a, b]) => {
            let (a, b, _) = num2(&[a.clone(), b.clone()])?;
            Bool(match head {
                "<" => a < b,
                "<=" => a <= b,
                ">" => a > b,
                _ => a >= b,
            })
        }
        _ => return None,
    }))
}

/// SMT-LIB integer division: the remainder is always non-negative.
pub fn smt_div(a: &BigInt, b: &BigInt) -> Option<BigInt> {
    if b.is_zero() {
        return None;
    }
    let r = BigRational::new(a.clone(), b.clone());
    Some(if b.is_positive() { r.floor().to_integer() } else { r.ceil().to_integer() })
}

/// The exact rational an f64 literal denotes in the encoding: the value of
/// its shortest decimal representation.
pub fn decimal_rational(f: f64) -> BigRational {
    let s = format!("{:e}", f.abs());
    let (mant, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    let digits: BigInt = format!("{ip}{fp}").parse().expect("digits");
    let shift = exp - fp.len() as i32;
    let ten = BigInt::from(10u32);
    let r = if shift >= 0 {
        BigRational::from(digits * ten.pow(shift as u32))
    } else {
        BigRational::new(digits, ten.pow((-shift) as u32))
    };
    if f < 0.0 {
        -r
    } else {
        r
    }
}

// ------------------------------------------------------------------- replay

/// Outcome of re-evaluating an obligation under a countermodel.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum Replay {
    /// Every assumption holds and the goal fails.
    Confirmed,
    /// The model does not falsify the obligation under exact evaluation.
    Rejected(String),
    /// The model uses values the evaluator cannot interpret.
    Undetermined(String),
}

struct Replayer<'m> {
    model: &'m Model,
    sig: &'m Signature,
}

impl Replayer<'_> {
    fn term(&self, t: &Term) -> Result<MValue, ModelError> {
        Ok(match t {
            Term::Int(i) => MValue::Int(BigInt::from(*i)),
            Term::Real(r) => MValue::Real(decimal_rational(*r)),
            Term::Bool(b) => MValue::Bool(*b),
            Term::Var(x) => match self.model.value(x) {
                Some(v) => v?,
                // Unconstrained symbols may be omitted from the model.
                None => MValue::default_for(*self.sig.vars.get(x).ok_or_else(|| ModelError::Missing(x.clone()))?),
            },
            Term::Neg(a) => match self.term(a)? {
                MValue::Int(i) => MValue::Int(-i),
                MValue::Real(r) => MValue::Real(-r),
                MValue::Bool(_) => return Err(ModelError::Malformed("negated boolean".into())),
            },
            Term::Arith(op, a, b) => {
                let (a, b) = (self.term(a)?, self.term(b)?);
                let head = match (op, &a) {
                    (ArithOp::Add, _) => "+",
                    (ArithOp::Sub, _) => "-",
                    (ArithOp::Mul, _) => "*",
                    (ArithOp::Div, MValue::Int(_)) => "div",
                    (ArithOp::Div, _) => "/",
                };
                builtin(head, vec![a, b]).ok_or_else(|| ModelError::Malformed(format!("ill-sorted `{t}`")))??
            }
            Term::App(f, args) => {
                let vs = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                match self.model.funs.get(f) {
                    Some(_) => self.model.apply(f, vs)?,
                    None => match self.model.consts.get(f) {
                        // A constant function may be printed without parameters.
                        Some(_) => self.model.value(f).expect("present")?,
                        None => MValue::default_for(self.sig.funs.get(f).ok_or_else(|| ModelError::Missing(f.clone()))?.ret),
                    },
                }
            }
            Term::Ite(c, a, b) => {
                if self.state(c)? {
                    self.term(a)?
                } else {
                    self.term(b)?
                }
            }
            Term::Pred(p) => MValue::Bool(self.state(p)?),
        })
    }

    fn state(&self, p: &StatePred) -> Result<bool, ModelError> {
        let bool_of = |v: MValue| match v {
            MValue::Bool(b) => Ok(b),
            v => Err(ModelError::Malformed(format!("expected a boolean, found {v}"))),
        };
        Ok(match p {
            StatePred::True => true,
            StatePred::False => false,
            StatePred::Atom(t) => bool_of(self.term(t)?)?,
            StatePred::Cmp(op, a, b) => {
                let (a, b) = (self.term(a)?, self.term(b)?);
                let head = match op {
                    CmpOp::Eq => "=",
                    CmpOp::Ne => "distinct",
                    CmpOp::Lt => "<",
                    CmpOp::Le => "<=",
                    CmpOp::Gt => ">",
                    CmpOp::Ge => ">=",
                };
                bool_of(builtin(head, vec![a, b]).ok_or_else(|| ModelError::Malformed(format!("ill-sorted `{p}`")))??)?
            }
            StatePred::Not(a) => !self.state(a)?,
            StatePred::And(a, b) => self.state(a)? && self.state(b)?,
            StatePred::Or(a, b) => self.state(a)? || self.state(b)?,
            StatePred::Implies(a, b) => !self.state(a)? || self.state(b)?,
        })
    }
}

/// Checks that `model` satisfies every assumption and falsifies `goal`.
pub fn replay(model: &Model, sig: &Signature, assumptions: &[StatePred], goal: &StatePred) -> Replay {
    let r = Replayer { model, sig };
    let run = || -> Result<Replay, ModelError> {
        for a in assumptions {
            if !r.state(a)? {
                return Ok(Replay::Rejected(format!("assumption `{a}` is false in the model")));
            }
        }
        if r.state(goal)? {
            return Ok(Replay::Rejected(format!("goal `{goal}` holds in the model")));
        }
        Ok(Replay::Confirmed)
    };
    run().unwrap_or_else(|e| Replay::Undetermined(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smt::sexp;

    #[test]
    fn constants_and_functions() {
        let s = sexp::parse(
            "((define-fun x () Real (/ 1.0 3.0)) (define-fun n () Int (- 4)) \
             (define-fun f ((x!0 Int)) Int (ite (= x!0 1) 10 (+ x!0 1))))",
        )
        .unwrap();
        let m = Model::from_sexp(&s).unwrap();
        assert_eq!(m.value("x").unwrap().unwrap(), MValue::Real(BigRational::new(1.into(), 3.into())));
        assert_eq!(m.value("n").unwrap().unwrap(), MValue::Int(BigInt::from(-4)));
        assert_eq!(m.apply("f", vec![MValue::Int(1.into())]).unwrap(), MValue::Int(10.into()));
        assert_eq!(m.apply("f", vec![MValue::Int(5.into())]).unwrap(), MValue::Int(6.into()));
    }

    #[test]
    fn old_style_models_and_root_obj() {
        let s = sexp::parse("(model (define-fun r () Real (root-obj (+ (^ x 2) (- 2)) 1)))").unwrap();
        let m = Model::from_sexp(&s).unwrap();
        assert!(matches!(m.value("r").unwrap(), Err(ModelError::Unsupported(_))));
    }

    #[test]
    fn div_semantics() {
        let d = |a: i64, b: i64| smt_div(&BigInt::from(a), &BigInt::from(b)).unwrap();
        assert_eq!(d(7, 2), 3.into());
        assert_eq!(d(-7, 2), (-4).into());
        assert_eq!(d(-7, -2), 4.into());
        assert_eq!(d(7, -2), (-3).into());
        assert!(smt_div(&BigInt::from(1), &BigInt::zero()).is_none());
    }

    #[test]
    fn decimal_literals() {
        assert_eq!(decimal_rational(0.1), BigRational::new(1.into(), 10.into()));
        assert_eq!(decimal_rational(-2.5e-3), BigRational::new((-25).into(), 10000.into()));
        assert_eq!(decimal_rational(1.5e20), BigRational::from(BigInt::from(150_000_000_000_000_000_000u128)));
        assert_eq!(decimal_rational(0.0), BigRational::zero());
    }

    #[test]
    fn replay_confirms_and_rejects() {
        let mut sig = Signature::default();
        sig.vars.insert("x".into(), Sort::Int);
        let m = Model::from_sexp(&sexp::parse("((define-fun x () Int (- 1)))").unwrap()).unwrap();
        let goal = crate::syntax::parse_state_pred("x >= 0").unwrap();
        assert_eq!(replay(&m, &sig, &[], &goal), Replay::Confirmed);
        let hyp = crate::syntax::parse_state_pred("x = 0").unwrap();
        assert!(matches!(replay(&m, &sig, &[hyp], &goal), Replay::Rejected(_)));
    }
}
