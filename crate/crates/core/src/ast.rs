//! Abstract syntax: values, expressions, base and refinement types, predicates.
//!
//! Expressions are in A-normal form where the calculus requires it: `if`
//! conditions and application arguments are variables. The parser introduces
//! fresh `let`s for anything else.

use serde::{Deserialize, Serialize};

pub type Name = String;

/// A runtime value. `Nil` only appears in environments (the pending value of a
/// `let rec` binder) and never inside a tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Tuple(Vec<Value>),
    Nil,
}

impl Value {
    pub fn is_nil(&self) -> bool {
        matches!(self, Value::Nil)
    }

    /// Base type of a non-nil value.
    pub fn base_type(&self) -> Option<BaseType> {
        Some(match self {
            Value::Int(_) => BaseType::Int,
            Value::Float(_) => BaseType::Float,
            Value::Bool(_) => BaseType::Bool,
            Value::Tuple(vs) => {
                BaseType::Product(vs.iter().map(Value::base_type).collect::<Option<_>>()?)
            }
            Value::Nil => return None,
        })
    }

    /// Scalar leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&Value> {
        let mut out = Vec::new();
        fn go<'a>(v: &'a Value, out: &mut Vec<&'a Value>) {
            match v {
                Value::Tuple(vs) => vs.iter().for_each(|v| go(v, out)),
                v => out.push(v),
            }
        }
        go(self, &mut out);
        out
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(f) => Some(*f),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseType {
    Int,
    Float,
    Bool,
    Product(Vec<BaseType>),
}

impl BaseType {
    pub fn is_scalar(&self) -> bool {
        !matches!(self, BaseType::Product(_))
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, BaseType::Int | BaseType::Float)
    }

    /// Scalar leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<BaseType> {
        match self {
            BaseType::Product(ts) => ts.iter().flat_map(BaseType::leaves).collect(),
            t => vec![t.clone()],
        }
    }
}

/// Binder: a single name or a (possibly nested) tuple of names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pattern {
    Var(Name),
    Tuple(Vec<Pattern>),
}

impl Pattern {
    pub fn var(name: impl Into<Name>) -> Pattern {
        Pattern::Var(name.into())
    }

    /// Names bound by the pattern, left to right.
    pub fn names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        fn go<'a>(p: &'a Pattern, out: &mut Vec<&'a str>) {
            match p {
                Pattern::Var(n) => out.push(n),
                Pattern::Tuple(ps) => ps.iter().for_each(|p| go(p, out)),
            }
        }
        go(self, &mut out);
        out
    }

    /// Pairs each bound name with the part of `base` it binds.
    /// Returns `None` when the pattern shape does not fit the type.
    pub fn bind_types(&self, base: &BaseType) -> Option<Vec<(Name, BaseType)>> {
        let mut out = Vec::new();
        fn go(p: &Pattern, t: &BaseType, out: &mut Vec<(Name, BaseType)>) -> bool {
            match (p, t) {
                (Pattern::Var(n), t) => {
                    out.push((n.clone(), t.clone()));
                    true
                }
                (Pattern::Tuple(ps), BaseType::Product(ts)) if ps.len() == ts.len() => {
                    ps.iter().zip(ts).all(|(p, t)| go(p, t, out))
                }
                _ => false,
            }
        }
        go(self, base, &mut out).then_some(out)
    }

    /// Pairs each bound name with the part of `v` it binds.
    pub fn bind_value<'v>(&self, v: &'v Value) -> Option<Vec<(&str, &'v Value)>> {
        let mut out = Vec::new();
        fn go<'p, 'v>(p: &'p Pattern, v: &'v Value, out: &mut Vec<(&'p str, &'v Value)>) -> bool {
            match (p, v) {
                (Pattern::Var(n), v) => {
                    out.push((n, v));
                    true
                }
                (Pattern::Tuple(ps), Value::Tuple(vs)) if ps.len() == vs.len() => {
                    ps.iter().zip(vs).all(|(p, v)| go(p, v, out))
                }
                _ => false,
            }
        }
        go(self, v, &mut out).then_some(out)
    }

    /// Projection path of every bound name, e.g. `(a, (b, c))` gives
    /// `a -> [0]`, `b -> [1, 0]`, `c -> [1, 1]`.
    pub fn paths(&self) -> Vec<(&str, Vec<usize>)> {
        let mut out = Vec::new();
        fn go<'a>(p: &'a Pattern, path: &mut Vec<usize>, out: &mut Vec<(&'a str, Vec<usize>)>) {
            match p {
                Pattern::Var(n) => out.push((n, path.clone())),
                Pattern::Tuple(ps) => {
                    for (i, p) in ps.iter().enumerate() {
                        path.push(i);
                        go(p, path, out);
                        path.pop();
                    }
                }
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Eq => "=",
            BinOp::Ne => "<>",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "and",
            BinOp::Or => "or",
        }
    }

    pub fn is_arith(self) -> bool {
        matches!(self, BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div)
    }

    pub fn is_cmp(self) -> bool {
        matches!(self, BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge)
    }

    pub fn is_logic(self) -> bool {
        matches!(self, BinOp::And | BinOp::Or)
    }
}

/// Robot-side command of a `models` expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Robot {
    /// Read a sensor value under the given key.
    Get(String),
    /// Write the value of the expression to the actuator under the key.
    Str(String, Expr),
}

/// A `let`/`let rec` node. `history` holds the binder's values at past
/// instants, oldest first; the parser always produces an empty history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Binding {
    pub history: Vec<Value>,
    pub pat: Pattern,
    pub ty: Option<RefType>,
    pub rhs: Expr,
    pub body: Expr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Expr {
    Const(Value),
    Var(Name),
    Let(Box<Binding>),
    LetRec(Box<Binding>),
    /// Application of a top-level function to a variable.
    App(Name, Name),
    Fby(Box<Expr>, Box<Expr>),
    /// Internal: produced by stepping `fby`, evaluated under the previous
    /// environment.
    Delay(Box<Expr>),
    Tuple(Vec<Expr>),
    If(Name, Box<Expr>, Box<Expr>),
    Models(Box<Expr>, Box<Robot>),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn int(i: i64) -> Expr {
        Expr::Const(Value::Int(i))
    }
    pub fn float(f: f64) -> Expr {
        Expr::Const(Value::Float(f))
    }
    pub fn bool(b: bool) -> Expr {
        Expr::Const(Value::Bool(b))
    }
    pub fn var(n: impl Into<Name>) -> Expr {
        Expr::Var(n.into())
    }
    pub fn fby(a: Expr, b: Expr) -> Expr {
        Expr::Fby(Box::new(a), Box::new(b))
    }
    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }
    pub fn let_(pat: Pattern, ty: Option<RefType>, rhs: Expr, body: Expr) -> Expr {
        Expr::Let(Box::new(Binding { history: vec![], pat, ty, rhs, body }))
    }
    pub fn let_rec(pat: Pattern, ty: Option<RefType>, rhs: Expr, body: Expr) -> Expr {
        Expr::LetRec(Box::new(Binding { history: vec![], pat, ty, rhs, body }))
    }
    pub fn if_(c: impl Into<Name>, t: Expr, e: Expr) -> Expr {
        Expr::If(c.into(), Box::new(t), Box::new(e))
    }

    /// True when the expression contains no `fby`, `delay` or `let rec`,
    /// i.e. its value at an instant depends only on the current environment.
    pub fn is_pointwise(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) | Expr::App(..) => true,
            Expr::Fby(..) | Expr::Delay(_) | Expr::LetRec(_) => false,
            Expr::Let(b) => b.rhs.is_pointwise() && b.body.is_pointwise(),
            Expr::Tuple(es) => es.iter().all(Expr::is_pointwise),
            Expr::If(_, a, b) => a.is_pointwise() && b.is_pointwise(),
            Expr::Models(e, r) => {
                e.is_pointwise()
                    && match &**r {
                        Robot::Get(_) => true,
                        Robot::Str(_, e) => e.is_pointwise(),
                    }
            }
            Expr::Unary(_, e) => e.is_pointwise(),
            Expr::Binary(_, a, b) => a.is_pointwise() && b.is_pointwise(),
        }
    }

    /// Number of nodes, used to bound generated programs.
    pub fn size(&self) -> usize {
        1 + match self {
            Expr::Const(_) | Expr::Var(_) | Expr::App(..) => 0,
            Expr::Let(b) | Expr::LetRec(b) => b.rhs.size() + b.body.size(),
            Expr::Fby(a, b) | Expr::Binary(_, a, b) | Expr::If(_, a, b) => a.size() + b.size(),
            Expr::Delay(e) | Expr::Unary(_, e) => e.size(),
            Expr::Tuple(es) => es.iter().map(Expr::size).sum(),
            Expr::Models(e, r) => {
                e.size()
                    + match &**r {
                        Robot::Get(_) => 1,
                        Robot::Str(_, e) => e.size(),
                    }
            }
        }
    }
}

/// Arithmetic and boolean terms inside refinement predicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Term {
    Int(i64),
    Real(f64),
    Bool(bool),
    Var(Name),
    Neg(Box<Term>),
    Arith(ArithOp, Box<Term>, Box<Term>),
    /// Uninterpreted function application; arguments are scalar leaves.
    App(Name, Vec<Term>),
    Ite(Box<StatePred>, Box<Term>, Box<Term>),
    /// A predicate used as a boolean term, e.g. the right side of `b = (x > 0)`.
    Pred(Box<StatePred>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "<>",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Predicate over a single instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StatePred {
    True,
    False,
    /// Boolean-valued term (a boolean variable or function application).
    Atom(Term),
    Cmp(CmpOp, Term, Term),
    Not(Box<StatePred>),
    And(Box<StatePred>, Box<StatePred>),
    Or(Box<StatePred>, Box<StatePred>),
    Implies(Box<StatePred>, Box<StatePred>),
}

impl StatePred {
    pub fn var(n: impl Into<Name>) -> StatePred {
        StatePred::Atom(Term::Var(n.into()))
    }

    pub fn cmp(op: CmpOp, a: Term, b: Term) -> StatePred {
        StatePred::Cmp(op, a, b)
    }

    pub fn eq(a: Term, b: Term) -> StatePred {
        StatePred::Cmp(CmpOp::Eq, a, b)
    }

    /// Conjunction with `True` units removed.
    pub fn and(a: StatePred, b: StatePred) -> StatePred {
        match (a, b) {
            (StatePred::True, b) => b,
            (a, StatePred::True) => a,
            (a, b) => StatePred::And(Box::new(a), Box::new(b)),
        }
    }

    pub fn and_all(ps: impl IntoIterator<Item = StatePred>) -> StatePred {
        ps.into_iter().fold(StatePred::True, StatePred::and)
    }

    pub fn not(p: StatePred) -> StatePred {
        StatePred::Not(Box::new(p))
    }

    pub fn or(a: StatePred, b: StatePred) -> StatePred {
        StatePred::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: StatePred, b: StatePred) -> StatePred {
        StatePred::Implies(Box::new(a), Box::new(b))
    }

    /// Top-level conjuncts.
    pub fn conjuncts(&self) -> Vec<&StatePred> {
        match self {
            StatePred::And(a, b) => {
                let mut v = a.conjuncts();
                v.extend(b.conjuncts());
                v
            }
            StatePred::True => vec![],
            p => vec![p],
        }
    }
}

/// Linear-time predicate: state predicates under `always`, `next` and
/// conjunction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TracePred {
    State(StatePred),
    Always(Box<TracePred>),
    Next(Box<TracePred>),
    And(Box<TracePred>, Box<TracePred>),
}

impl TracePred {
    pub const TRUE: TracePred = TracePred::State(StatePred::True);

    pub fn is_true(&self) -> bool {
        matches!(self, TracePred::State(StatePred::True))
    }

    pub fn state(p: StatePred) -> TracePred {
        TracePred::State(p)
    }

    /// Conjunction with `True` units removed; two state predicates merge into
    /// one state-level conjunction, which is the form the parser produces.
    pub fn and(a: TracePred, b: TracePred) -> TracePred {
        match (a, b) {
            (a, b) if a.is_true() => b,
            (a, b) if b.is_true() => a,
            (TracePred::State(p), TracePred::State(q)) => TracePred::State(StatePred::and(p, q)),
            (a, b) => TracePred::And(Box::new(a), Box::new(b)),
        }
    }

    pub fn and_all(ps: impl IntoIterator<Item = TracePred>) -> TracePred {
        ps.into_iter().fold(TracePred::TRUE, TracePred::and)
    }

    /// `always p`; `always true` simplifies to `true`.
    pub fn always(p: TracePred) -> TracePred {
        if p.is_true() {
            p
        } else {
            TracePred::Always(Box::new(p))
        }
    }

    /// `next p`; `next true` simplifies to `true`.
    pub fn next(p: TracePred) -> TracePred {
        if p.is_true() {
            p
        } else {
            TracePred::Next(Box::new(p))
        }
    }

    pub fn is_state(&self) -> bool {
        matches!(self, TracePred::State(_))
    }

    /// True when no temporal operator occurs.
    pub fn as_state(&self) -> Option<&StatePred> {
        match self {
            TracePred::State(p) => Some(p),
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TracePred::State(_) => 0,
            TracePred::Always(p) | TracePred::Next(p) => 1 + p.depth(),
            TracePred::And(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// Refinement type `{binder : base | pred}` or an unrefined base type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RefType {
    Base(BaseType),
    Refined { binder: Pattern, base: BaseType, pred: TracePred },
}

impl RefType {
    pub fn base(&self) -> &BaseType {
        match self {
            RefType::Base(b) | RefType::Refined { base: b, .. } => b,
        }
    }

    pub fn pred(&self) -> Option<&TracePred> {
        match self {
            RefType::Base(_) => None,
            RefType::Refined { pred, .. } => Some(pred),
        }
    }

    /// Rebuilds the type with a new predicate over the same binder.
    pub fn map_pred(&self, f: impl FnOnce(&TracePred) -> TracePred) -> RefType {
        match self {
            RefType::Base(b) => RefType::Base(b.clone()),
            RefType::Refined { binder, base, pred } => {
                RefType::Refined { binder: binder.clone(), base: base.clone(), pred: f(pred) }
            }
        }
    }
}

/// Top-level function `let f (param : arg) : ret = body`. Argument and
/// return refinements are state-level; they hold at every instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunDef {
    pub name: Name,
    pub param: Pattern,
    pub arg: RefType,
    pub ret: RefType,
    pub body: Expr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Program {
    pub funs: Vec<FunDef>,
    /// Optional annotation on the main stream, written `main : T = e`.
    pub main_ty: Option<RefType>,
    pub main: Expr,
}

impl Program {
    pub fn fun(&self, name: &str) -> Option<&FunDef> {
        self.funs.iter().find(|f| f.name == name)
    }
}
