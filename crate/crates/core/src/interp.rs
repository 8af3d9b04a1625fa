//! Small-step interpreter. One call to [`step`] produces the value at the
//! current instant and the rewritten expression for the next one: `fby`
//! becomes `delay`, and every `let` records the value it bound.

use std::collections::BTreeMap;

use crate::ast::*;
use crate::devices::DeviceTable;
use crate::temporal::{self, type_tail, EvalError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RuntimeError {
    #[error("`{0}` read before it is defined in this instant")]
    NilAccess(Name),
    #[error("`{0}` has no value at this depth of `delay`")]
    EmptyHistory(Name),
    #[error("unbound variable `{0}`")]
    Unbound(Name),
    #[error("unknown function `{0}`")]
    UnknownFunction(Name),
    #[error("{0}")]
    Arithmetic(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("device `{key}`: {message}")]
    Device { key: String, message: String },
}

impl From<EvalError> for RuntimeError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::DivByZero => RuntimeError::Arithmetic("division by zero".into()),
            EvalError::Overflow => RuntimeError::Arithmetic("integer overflow".into()),
            EvalError::Unbound(x) => RuntimeError::Unbound(x),
            EvalError::NoFunction(f) => RuntimeError::UnknownFunction(f),
            EvalError::Type(m) => RuntimeError::TypeMismatch(m),
        }
    }
}

/// A value written to an actuator by `robot_str`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Write {
    pub instant: usize,
    pub key: String,
    pub value: Value,
}

/// Execution context shared by every step of an instant.
pub struct Ctx<'p> {
    pub funs: &'p [FunDef],
    pub instant: usize,
    /// Sensor table; `Some` selects robot mode.
    pub devices: Option<&'p DeviceTable>,
    pub writes: Vec<Write>,
    /// Every `let` firing of this instant, outside function bodies.
    pub bound: Vec<Bound>,
    site: Vec<u32>,
    in_fun: bool,
}

impl<'p> Ctx<'p> {
    pub fn new(funs: &'p [FunDef]) -> Ctx<'p> {
        Ctx { funs, instant: 0, devices: None, writes: Vec::new(), bound: Vec::new(), site: Vec::new(), in_fun: false }
    }

    fn record(&mut self, pat: &Pattern, v: &Value, rec: bool) {
        if self.in_fun {
            return;
        }
        for (name, path) in pat.paths() {
            let value = project(v, &path).clone();
            self.bound.push(Bound { site: Site { path: self.site.clone(), rec }, name: name.to_string(), value });
        }
    }
}

/// Position of a binder in the main expression. A `fby` tail and the
/// `delay` it turns into share an edge, so a site is stable across instants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub path: Vec<u32>,
    pub rec: bool,
}

/// One name bound by a `let` during an instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Bound {
    pub site: Site,
    pub name: Name,
    pub value: Value,
}

/// Steps `e` one edge below the current site.
fn sub(ctx: &mut Ctx<'_>, env: &Env<'_>, e: Expr, edge: u32) -> Result<(Value, Expr), RuntimeError> {
    ctx.site.push(edge);
    let r = step(ctx, env, e);
    ctx.site.pop();
    r
}

#[derive(Debug, Clone)]
enum Last {
    /// The sequence is just the stored history (inside a `delay`).
    Absent,
    /// The pending value of a `let rec` binder.
    Nil,
    Val(Value),
}

/// History of one name: `hist` followed by `last`, projected by `path` when
/// the name is a component of a tuple pattern.
#[derive(Debug, Clone)]
struct Slot<'a> {
    hist: &'a [Value],
    path: Vec<usize>,
    last: Last,
}

fn project<'v>(v: &'v Value, path: &[usize]) -> &'v Value {
    path.iter().fold(v, |v, i| match v {
        Value::Tuple(vs) => &vs[*i],
        v => v,
    })
}

impl Slot<'_> {
    fn current(&self, name: &str) -> Result<Value, RuntimeError> {
        match &self.last {
            Last::Val(v) => Ok(v.clone()),
            Last::Nil => Err(RuntimeError::NilAccess(name.to_string())),
            Last::Absent => match self.hist.last() {
                Some(Value::Nil) => Err(RuntimeError::NilAccess(name.to_string())),
                Some(v) => Ok(project(v, &self.path).clone()),
                None => Err(RuntimeError::EmptyHistory(name.to_string())),
            },
        }
    }

    fn prev(&self) -> Self {
        let mut s = self.clone();
        match s.last {
            Last::Absent => s.hist = &s.hist[..s.hist.len().saturating_sub(1)],
            _ => s.last = Last::Absent,
        }
        s
    }
}

/// Environment mapping names to histories; later entries shadow earlier ones.
#[derive(Debug, Clone, Default)]
pub struct Env<'a> {
    slots: Vec<(&'a str, Slot<'a>)>,
}

impl<'a> Env<'a> {
    pub fn new() -> Env<'a> {
        Env { slots: Vec::new() }
    }

    fn lookup(&self, x: &str) -> Result<Value, RuntimeError> {
        match self.slots.iter().rev().find(|(n, _)| *n == x) {
            Some((n, s)) => s.current(n),
            None => Err(RuntimeError::Unbound(x.to_string())),
        }
    }

    /// Drops the most recent value of every history.
    pub fn prev(&self) -> Env<'a> {
        Env { slots: self.slots.iter().map(|(n, s)| (*n, s.prev())).collect() }
    }

    fn bind(&mut self, pat: &'a Pattern, hist: &'a [Value], last: Option<&Value>) -> Result<(), RuntimeError> {
        for (name, path) in pat.paths() {
            let last = match last {
                None => Last::Nil,
                Some(v) => {
                    let mut cur = v;
                    for i in &path {
                        match cur {
                            Value::Tuple(vs) if *i < vs.len() => cur = &vs[*i],
                            _ => {
                                return Err(RuntimeError::TypeMismatch(format!(
                                    "pattern `{pat}` does not match value {v}"
                                )))
                            }
                        }
                    }
                    Last::Val(cur.clone())
                }
            };
            self.slots.push((name, Slot { hist, path, last }));
        }
        Ok(())
    }

    /// Binds `pat` to a single current value with no history.
    pub fn bind_value(&mut self, pat: &'a Pattern, v: &Value) -> Result<(), RuntimeError> {
        self.bind(pat, &[], Some(v))
    }
}

fn as_bool(v: &Value, what: &str) -> Result<bool, RuntimeError> {
    match v {
        Value::Bool(b) => Ok(*b),
        v => Err(RuntimeError::TypeMismatch(format!("{what} must be a boolean, found {v}"))),
    }
}

/// Applies a top-level function to a value.
pub fn apply(ctx: &mut Ctx<'_>, f: &str, arg: &Value) -> Result<Value, RuntimeError> {
    let d = ctx.funs.iter().find(|d| d.name == f).ok_or_else(|| RuntimeError::UnknownFunction(f.into()))?;
    let mut env = Env::new();
    env.bind_value(&d.param, arg)?;
    let outer = std::mem::replace(&mut ctx.in_fun, true);
    let r = step(ctx, &env, d.body.clone());
    ctx.in_fun = outer;
    Ok(r?.0)
}

fn binop(op: BinOp, a: Value, b: Value) -> Result<Value, RuntimeError> {
    let arith = |op| temporal::arith(op, a.clone(), b.clone()).map_err(RuntimeError::from);
    let cmp = |op| temporal::compare(op, &a, &b).map(Value::Bool).map_err(RuntimeError::from);
    match op {
        BinOp::Add => arith(ArithOp::Add),
        BinOp::Sub => arith(ArithOp::Sub),
        BinOp::Mul => arith(ArithOp::Mul),
        BinOp::Div => arith(ArithOp::Div),
        BinOp::Eq => cmp(CmpOp::Eq),
        BinOp::Ne => cmp(CmpOp::Ne),
        BinOp::Lt => cmp(CmpOp::Lt),
        BinOp::Le => cmp(CmpOp::Le),
        BinOp::Gt => cmp(CmpOp::Gt),
        BinOp::Ge => cmp(CmpOp::Ge),
        BinOp::And => Ok(Value::Bool(as_bool(&a, "operand of `and`")? && as_bool(&b, "operand of `and`")?)),
        BinOp::Or => Ok(Value::Bool(as_bool(&a, "operand of `or`")? || as_bool(&b, "operand of `or`")?)),
    }
}

/// Evaluates `e` for one instant under `env`, returning the emitted value
/// and the expression for the next instant.
pub fn step(ctx: &mut Ctx<'_>, env: &Env<'_>, e: Expr) -> Result<(Value, Expr), RuntimeError> {
    Ok(match e {
        Expr::Const(v) => (v.clone(), Expr::Const(v)),
        Expr::Var(x) => (env.lookup(&x)?, Expr::Var(x)),
        Expr::Fby(a, b) => {
            let (v, _) = sub(ctx, env, *a, 0)?;
            (v, Expr::Delay(b))
        }
        Expr::Delay(a) => {
            let (v, a) = sub(ctx, &env.prev(), *a, 1)?;
            (v, Expr::Delay(Box::new(a)))
        }
        Expr::Let(b) => {
            let Binding { mut history, pat, ty, rhs, body } = *b;
            let (v, rhs) = sub(ctx, env, rhs, 0)?;
            ctx.record(&pat, &v, false);
            let (w, body) = {
                let mut inner = env.clone();
                inner.bind(&pat, &history, Some(&v))?;
                sub(ctx, &inner, body, 1)?
            };
            history.push(v);
            let ty = ty.as_ref().map(type_tail);
            (w, Expr::Let(Box::new(Binding { history, pat, ty, rhs, body })))
        }
        Expr::LetRec(b) => {
            let Binding { mut history, pat, ty, rhs, body } = *b;
            let (v, rhs) = {
                let mut inner = env.clone();
                inner.bind(&pat, &history, None)?;
                sub(ctx, &inner, rhs, 0)?
            };
            ctx.record(&pat, &v, true);
            let (w, body) = {
                let mut inner = env.clone();
                inner.bind(&pat, &history, Some(&v))?;
                sub(ctx, &inner, body, 1)?
            };
            history.push(v);
            let ty = ty.as_ref().map(type_tail);
            (w, Expr::LetRec(Box::new(Binding { history, pat, ty, rhs, body })))
        }
        Expr::App(f, y) => {
            let arg = env.lookup(&y)?;
            (apply(ctx, &f, &arg)?, Expr::App(f, y))
        }
        Expr::Tuple(es) => {
            let mut vs = Vec::with_capacity(es.len());
            let mut out = Vec::with_capacity(es.len());
            for (i, e) in es.into_iter().enumerate() {
                let (v, e) = sub(ctx, env, e, i as u32)?;
                vs.push(v);
                out.push(e);
            }
            (Value::Tuple(vs), Expr::Tuple(out))
        }
        Expr::If(c, a, b) => {
            let cond = as_bool(&env.lookup(&c)?, "condition")?;
            let (va, a) = sub(ctx, env, *a, 0)?;
            let (vb, b) = sub(ctx, env, *b, 1)?;
            (if cond { va } else { vb }, Expr::If(c, Box::new(a), Box::new(b)))
        }
        Expr::Models(a, r) => {
            let (v, a) = sub(ctx, env, *a, 0)?;
            let Some(devices) = ctx.devices else {
                return Ok((v, Expr::Models(Box::new(a), r)));
            };
            match *r {
                Robot::Get(key) => {
                    let sensed = devices.read(&key, ctx.instant, &v)?;
                    (sensed, Expr::Models(Box::new(a), Box::new(Robot::Get(key))))
                }
                Robot::Str(key, x) => {
                    let (w, x) = sub(ctx, env, x, 1)?;
                    ctx.writes.push(Write { instant: ctx.instant, key: key.clone(), value: w });
                    (v, Expr::Models(Box::new(a), Box::new(Robot::Str(key, x))))
                }
            }
        }
        Expr::Unary(op, a) => {
            let (v, a) = sub(ctx, env, *a, 0)?;
            let r = match (op, v) {
                (UnOp::Neg, Value::Int(i)) => {
                    Value::Int(i.checked_neg().ok_or_else(|| RuntimeError::Arithmetic("integer overflow".into()))?)
                }
                (UnOp::Neg, Value::Float(f)) => Value::Float(-f),
                (UnOp::Not, Value::Bool(b)) => Value::Bool(!b),
                (op, v) => return Err(RuntimeError::TypeMismatch(format!("{op:?} applied to {v}"))),
            };
            (r, Expr::Unary(op, Box::new(a)))
        }
        Expr::Binary(op, a, b) => {
            let (va, a) = sub(ctx, env, *a, 0)?;
            let (vb, b) = sub(ctx, env, *b, 1)?;
            (binop(op, va, vb)?, Expr::Binary(op, Box::new(a), Box::new(b)))
        }
    })
}

/// Names of the top-level `let` spine of `e`, in binding order, with the
/// projection path of each name into its binder's value.
pub fn spine(e: &Expr) -> Vec<(Name, Vec<usize>)> {
    let mut out = Vec::new();
    let mut cur = e;
    while let Expr::Let(b) | Expr::LetRec(b) = cur {
        out.extend(b.pat.paths().into_iter().map(|(n, p)| (n.to_string(), p)));
        cur = &b.body;
    }
    out
}

/// Values most recently bound along the top-level `let` spine.
pub fn spine_values(e: &Expr) -> Vec<(Name, Value)> {
    let mut out = Vec::new();
    let mut cur = e;
    while let Expr::Let(b) | Expr::LetRec(b) = cur {
        if let Some(v) = b.history.last() {
            for (n, p) in b.pat.paths() {
                out.push((n.to_string(), project(v, &p).clone()));
            }
        }
        cur = &b.body;
    }
    out
}

/// One instant of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Instant {
    pub output: Value,
    /// Values of the top-level `let` spine.
    pub bindings: Vec<(Name, Value)>,
    /// Every `let` that fired, including nested ones.
    pub bound: Vec<Bound>,
    pub writes: Vec<Write>,
}

/// A program together with its current (stepped) main expression.
pub struct Machine<'p> {
    pub program: &'p Program,
    pub state: Expr,
    pub instant: usize,
    pub devices: Option<&'p DeviceTable>,
}

impl<'p> Machine<'p> {
    pub fn new(program: &'p Program) -> Machine<'p> {
        Machine { program, state: program.main.clone(), instant: 0, devices: None }
    }

    pub fn with_devices(mut self, devices: &'p DeviceTable) -> Self {
        self.devices = Some(devices);
        self
    }

    pub fn step(&mut self) -> Result<Instant, RuntimeError> {
        let mut ctx = Ctx::new(&self.program.funs);
        ctx.instant = self.instant;
        ctx.devices = self.devices;
        let state = std::mem::replace(&mut self.state, Expr::Const(Value::Nil));
        let (output, next) = step(&mut ctx, &Env::new(), state)?;
        self.state = next;
        self.instant += 1;
        Ok(Instant { output, bindings: spine_values(&self.state), bound: ctx.bound, writes: ctx.writes })
    }
}

/// Runs `n` instants and returns the emitted values.
pub fn run_values(p: &Program, n: usize) -> Result<Vec<Value>, RuntimeError> {
    let mut m = Machine::new(p);
    (0..n).map(|_| m.step().map(|i| i.output)).collect()
}

/// Convenience for tests: values of every spine name over `n` instants.
pub fn run_bindings(p: &Program, n: usize) -> Result<BTreeMap<Name, Vec<Value>>, RuntimeError> {
    let mut m = Machine::new(p);
    let mut out: BTreeMap<Name, Vec<Value>> = BTreeMap::new();
    for _ in 0..n {
        for (k, v) in m.step()?.bindings {
            out.entry(k).or_default().push(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn ints(vs: &[Value]) -> Vec<i64> {
        vs.iter()
            .map(|v| match v {
                Value::Int(i) => *i,
                v => panic!("{v}"),
            })
            .collect()
    }

    #[test]
    fn counter() {
        let p = parse_program("let rec x = 0 fby x + 1 in x").unwrap();
        assert_eq!(ints(&run_values(&p, 6).unwrap()), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn delayed_let_inside_rec() {
        // The inner `let y` is re-evaluated under the previous environment
        // once its `fby` has fired, so `x` lags by one instant.
        let p = parse_program("let rec x = (let y = 0 fby 1 in (0 fby x + y)) in x").unwrap();
        assert_eq!(ints(&run_values(&p, 6).unwrap()), vec![0, 0, 1, 2, 3, 4]);
    }

    #[test]
    fn nested_fby() {
        let p = parse_program("let rec x = 0 fby (1 fby x + 10) in x").unwrap();
        assert_eq!(ints(&run_values(&p, 5).unwrap()), vec![0, 1, 10, 11, 20]);
    }

    #[test]
    fn tuples_and_if() {
        let p = parse_program(
            "let rec (a, b) = (0, 1) fby (b, a + b) in let c = a > 2 in if c then a else 0 - a",
        )
        .unwrap();
        assert_eq!(ints(&run_values(&p, 7).unwrap()), vec![0, -1, -1, -2, 3, 5, 8]);
    }

    #[test]
    fn function_application() {
        let p = parse_program("let sq (x : int) : int = x * x;; let rec n = 1 fby n + 1 in sq n").unwrap();
        assert_eq!(ints(&run_values(&p, 4).unwrap()), vec![1, 4, 9, 16]);
    }

    #[test]
    fn nil_access_is_trapped() {
        // Rejected statically; evaluated here to exercise the trap.
        let p = parse_program("let rec x = x + 1 in x").unwrap();
        assert_eq!(run_values(&p, 1), Err(RuntimeError::NilAccess("x".into())));
    }

    #[test]
    fn division_by_zero_is_trapped() {
        let p = parse_program("let z = 0 in 1 / z").unwrap();
        assert!(matches!(run_values(&p, 1), Err(RuntimeError::Arithmetic(_))));
    }

    #[test]
    fn histories_are_recorded() {
        let p = parse_program("let rec x : {v:int | always (v >= 0)} = 0 fby x + 1 in x").unwrap();
        let mut m = Machine::new(&p);
        m.step().unwrap();
        m.step().unwrap();
        let Expr::LetRec(b) = &m.state else { panic!() };
        assert_eq!(b.history, vec![Value::Int(0), Value::Int(1)]);
        assert!(matches!(b.rhs, Expr::Delay(_)));
        assert_eq!(b.ty.as_ref().unwrap().to_string(), "{v : int | always (v >= 0)}");
    }

    #[test]
    fn spine_columns() {
        let p = parse_program("let a = 1 in let rec (b, c) = (1, 2) fby (c, b) in b").unwrap();
        let names: Vec<_> = spine(&p.main).into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, vec!["a", "b", "c"]);
        let bs = run_bindings(&p, 3).unwrap();
        assert_eq!(ints(&bs["c"]), vec![2, 1, 2]);
    }
}
