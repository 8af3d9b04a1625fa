use std::fmt;

use super::*;
use crate::ast::*;

// Formula precedence levels; shares the arithmetic levels with expressions.
const F_ITE: u8 = 0;
const F_IMPLIES: u8 = 1;
const F_OR: u8 = 2;
const F_AND: u8 = 3;
const F_TEMPORAL: u8 = 4;

/// Shortest decimal form that reads back to the same `f64`, always with a
/// `.` or exponent so that it lexes as a float.
pub fn format_float(f: f64) -> String {
    format!("{f:?}")
}

pub fn pretty(p: &Program) -> String {
    p.to_string()
}

fn paren(s: String, level: u8, min: u8) -> String {
    if level < min {
        format!("({s})")
    } else {
        s
    }
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn negate(operand: String, nonneg_literal: bool) -> String {
    if operand.starts_with('-') {
        format!("- {operand}")
    } else if nonneg_literal {
        format!("-({operand})")
    } else {
        format!("-{operand}")
    }
}

// ------------------------------------------------------------------ values

fn value_level(v: &Value) -> u8 {
    match v {
        Value::Int(i) if *i < 0 => LVL_UNARY,
        Value::Float(f) if f.is_sign_negative() => LVL_UNARY,
        _ => LVL_ATOM,
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => f.write_str(&format_float(*x)),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Tuple(vs) => {
                f.write_str("(")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str(")")
            }
            Value::Nil => f.write_str("nil"),
        }
    }
}

// ------------------------------------------------------------------- types

impl fmt::Display for BaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseType::Int => f.write_str("int"),
            BaseType::Float => f.write_str("float"),
            BaseType::Bool => f.write_str("bool"),
            BaseType::Product(ts) => {
                let parts: Vec<String> = ts
                    .iter()
                    .map(|t| match t {
                        BaseType::Product(_) => format!("({t})"),
                        t => t.to_string(),
                    })
                    .collect();
                f.write_str(&parts.join(" * "))
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Var(n) => f.write_str(n),
            Pattern::Tuple(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

impl fmt::Display for RefType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefType::Base(b) => write!(f, "{b}"),
            RefType::Refined { binder, base, pred } => write!(f, "{{{binder} : {base} | {pred}}}"),
        }
    }
}

// -------------------------------------------------------------- predicates

fn term_level(t: &Term) -> u8 {
    match t {
        Term::Int(i) if *i < 0 => LVL_UNARY,
        Term::Real(r) if r.is_sign_negative() => LVL_UNARY,
        Term::Int(_) | Term::Real(_) | Term::Bool(_) | Term::Var(_) => LVL_ATOM,
        Term::Neg(_) => LVL_UNARY,
        Term::Arith(ArithOp::Add | ArithOp::Sub, ..) => LVL_ADD,
        Term::Arith(..) => LVL_MUL,
        Term::App(..) => LVL_APP,
        Term::Ite(..) => F_ITE,
        Term::Pred(p) => state_level(p),
    }
}

fn term(t: &Term, min: u8) -> String {
    let s = match t {
        Term::Int(i) => i.to_string(),
        Term::Real(r) => format_float(*r),
        Term::Bool(b) => b.to_string(),
        Term::Var(x) => x.clone(),
        Term::Neg(a) => negate(
            term(a, LVL_UNARY),
            matches!(**a, Term::Int(i) if i >= 0) || matches!(**a, Term::Real(r) if !r.is_sign_negative()),
        ),
        Term::Arith(op, a, b) => {
            let l = term_level(t);
            format!("{} {} {}", term(a, l), op.symbol(), term(b, l + 1))
        }
        Term::App(f, args) if args.len() == 1 => format!("{f} {}", term(&args[0], LVL_ATOM)),
        Term::App(f, args) => {
            let parts: Vec<String> = args.iter().map(|a| term(a, F_ITE)).collect();
            format!("{f} ({})", parts.join(", "))
        }
        Term::Ite(c, a, b) => {
            format!("if {} then {} else {}", state(c, F_ITE), term(a, F_ITE), term(b, F_ITE))
        }
        Term::Pred(p) => return state(p, min),
    };
    paren(s, term_level(t), min)
}

fn state_level(p: &StatePred) -> u8 {
    match p {
        StatePred::True | StatePred::False => LVL_ATOM,
        StatePred::Atom(t) => term_level(t),
        StatePred::Cmp(..) => LVL_CMP,
        StatePred::Not(_) => LVL_UNARY,
        StatePred::And(..) => F_AND,
        StatePred::Or(..) => F_OR,
        StatePred::Implies(..) => F_IMPLIES,
    }
}

fn state(p: &StatePred, min: u8) -> String {
    let s = match p {
        StatePred::True => "true".to_string(),
        StatePred::False => "false".to_string(),
        StatePred::Atom(t) => return term(t, min),
        StatePred::Cmp(op, a, b) => format!("{} {} {}", term(a, LVL_ADD), op.symbol(), term(b, LVL_ADD)),
        StatePred::Not(a) => format!("not {}", state(a, LVL_UNARY)),
        StatePred::And(a, b) => format!("{} and {}", state(a, F_AND), state(b, F_TEMPORAL)),
        StatePred::Or(a, b) => format!("{} or {}", state(a, F_OR), state(b, F_AND)),
        StatePred::Implies(a, b) => format!("{} => {}", state(a, F_OR), state(b, F_IMPLIES)),
    };
    paren(s, state_level(p), min)
}

fn trace_level(p: &TracePred) -> u8 {
    match p {
        TracePred::State(s) => state_level(s),
        TracePred::Always(_) | TracePred::Next(_) => F_TEMPORAL,
        TracePred::And(..) => F_AND,
    }
}

fn temporal_operand(p: &TracePred) -> String {
    match p {
        TracePred::Always(_) | TracePred::Next(_) => trace(p, F_TEMPORAL),
        TracePred::State(s) if state_level(s) == LVL_ATOM => trace(p, F_TEMPORAL),
        p => format!("({})", trace(p, F_ITE)),
    }
}

fn trace(p: &TracePred, min: u8) -> String {
    let s = match p {
        TracePred::State(s) => return state(s, min),
        TracePred::Always(a) => format!("always {}", temporal_operand(a)),
        TracePred::Next(a) => format!("next {}", temporal_operand(a)),
        TracePred::And(a, b) => format!("{} and {}", trace(a, F_AND), trace(b, F_TEMPORAL)),
    };
    paren(s, trace_level(p), min)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&term(self, F_ITE))
    }
}

impl fmt::Display for StatePred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&state(self, F_ITE))
    }
}

impl fmt::Display for TracePred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&trace(self, F_ITE))
    }
}

// ------------------------------------------------------------- expressions

fn expr_level(e: &Expr) -> u8 {
    match e {
        Expr::Const(v) => value_level(v),
        Expr::Var(_) | Expr::Tuple(_) | Expr::Delay(_) => LVL_ATOM,
        Expr::Let(_) | Expr::LetRec(_) | Expr::If(..) => LVL_OPEN,
        Expr::App(..) => LVL_APP,
        Expr::Fby(..) => LVL_FBY,
        Expr::Models(..) => LVL_MODELS,
        Expr::Unary(..) => LVL_UNARY,
        Expr::Binary(op, ..) => binop_level(*op),
    }
}

fn binding(kw: &str, b: &Binding, ind: usize) -> String {
    let hist = if b.history.is_empty() {
        String::new()
    } else {
        let vs: Vec<String> = b.history.iter().map(|v| v.to_string()).collect();
        format!("@[{}]", vs.join(", "))
    };
    let ty = b.ty.as_ref().map(|t| format!(" : {t}")).unwrap_or_default();
    format!(
        "{kw}{hist} {}{ty} = {} in\n{}{}",
        b.pat,
        expr(&b.rhs, LVL_OPEN, ind + 2),
        " ".repeat(ind),
        expr(&b.body, LVL_OPEN, ind)
    )
}

fn expr(e: &Expr, min: u8, ind: usize) -> String {
    let s = match e {
        Expr::Const(v) => v.to_string(),
        Expr::Var(x) => x.clone(),
        Expr::Let(b) => binding("let", b, ind),
        Expr::LetRec(b) => binding("let rec", b, ind),
        Expr::App(f, x) => format!("{f} {x}"),
        Expr::Fby(a, b) => format!("{} fby {}", expr(a, LVL_MODELS, ind), expr(b, LVL_FBY, ind)),
        Expr::Delay(a) => format!("delay ({})", expr(a, LVL_OPEN, ind)),
        Expr::Tuple(es) => {
            let parts: Vec<String> = es.iter().map(|e| expr(e, LVL_OPEN, ind)).collect();
            format!("({})", parts.join(", "))
        }
        Expr::If(c, a, b) => format!(
            "if {c} then {} else {}",
            expr(a, LVL_OPEN, ind + 2),
            expr(b, LVL_OPEN, ind + 2)
        ),
        Expr::Models(a, r) => {
            let robot = match &**r {
                Robot::Get(k) => format!("robot_get {}", quote(k)),
                Robot::Str(k, x) => format!("robot_str {} {}", quote(k), expr(x, LVL_UNARY, ind)),
            };
            format!("{} models {robot}", expr(a, LVL_MODELS, ind))
        }
        Expr::Unary(UnOp::Neg, a) => negate(
            expr(a, LVL_UNARY, ind),
            matches!(**a, Expr::Const(Value::Int(_) | Value::Float(_))) && value_level_of(a) == LVL_ATOM,
        ),
        Expr::Unary(UnOp::Not, a) => format!("not {}", expr(a, LVL_UNARY, ind)),
        Expr::Binary(op, a, b) => {
            let l = binop_level(*op);
            let left_min = if op.is_cmp() { l + 1 } else { l };
            format!("{} {} {}", expr(a, left_min, ind), op.symbol(), expr(b, l + 1, ind))
        }
    };
    paren(s, expr_level(e), min)
}

fn value_level_of(e: &Expr) -> u8 {
    match e {
        Expr::Const(v) => value_level(v),
        _ => LVL_ATOM,
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&expr(self, LVL_OPEN, 0))
    }
}

impl fmt::Display for FunDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "let {} ({} : {}) : {} =\n  {}",
            self.name,
            self.param,
            self.arg,
            self.ret,
            expr(&self.body, LVL_OPEN, 2)
        )
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.funs {
            writeln!(f, "{d};;\n")?;
        }
        if let Some(t) = &self.main_ty {
            writeln!(f, "main : {t} =")?;
        }
        writeln!(f, "{}", self.main)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_program, parse_trace_pred};

    fn round_trip(src: &str) {
        let p = parse_program(src).unwrap();
        let printed = p.to_string();
        let q = parse_program(&printed).unwrap_or_else(|e| panic!("{e}\n{printed}"));
        assert_eq!(p, q, "{printed}");
    }

    #[test]
    fn round_trips() {
        round_trip("let rec x : {v:int | always (v >= 0)} = 0 fby x + 1 in x");
        round_trip("let x = -(1) in - -1 - x");
        round_trip("let x = (1 - 2) - (3 - 4) in x * (x + 1)");
        round_trip("let x = (let y = 1 in y, 2) in x");
        round_trip("let x = 1 + (if true then 1 else 2) in 0 fby (1 fby x)");
        round_trip("let (a, b) = (1.5, 2.) models robot_get \"k\\\"q\" in a models robot_str \"w\" (b + 1.)");
        round_trip("main : {v:int | v = 0 and next always (v >= 1 => v < 9)} = 0 fby 1");
        round_trip("let f ((a, b) : {(p, q) : int * (int * bool) | true}) : {v:int | v >= f (a, 1)} = a;;\nf x");
    }

    #[test]
    fn predicate_printing() {
        let p = parse_trace_pred("always (v >= 0) and next (v = (x > 1))").unwrap();
        assert_eq!(p.to_string(), "always (v >= 0) and next (v = (x > 1))");
    }
}
