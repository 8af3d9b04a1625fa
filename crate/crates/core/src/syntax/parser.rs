use std::collections::HashSet;

use super::lexer::{lex, Kw, Tok, Token};
use super::ParseError;
use crate::ast::*;

pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(src)?;
    let prog = p.program()?;
    p.expect_eof()?;
    Ok(prog)
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

pub fn parse_reftype(src: &str) -> Result<RefType, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.reftype()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_trace_pred(src: &str) -> Result<TracePred, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    p.expect_eof()?;
    p.to_trace(f)
}

pub fn parse_state_pred(src: &str) -> Result<StatePred, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    p.expect_eof()?;
    p.to_state(f)
}

/// Untyped formula tree, classified into terms, state predicates and trace
/// predicates after parsing.
#[derive(Debug, Clone)]
enum F {
    Int(i64),
    Real(f64),
    Bool(bool),
    Var(Name),
    Neg(Box<F>),
    Not(Box<F>),
    Arith(ArithOp, Box<F>, Box<F>),
    Cmp(CmpOp, Box<F>, Box<F>),
    And(Box<F>, Box<F>),
    Or(Box<F>, Box<F>),
    Implies(Box<F>, Box<F>),
    Always(Box<F>),
    Next(Box<F>),
    App(Name, Vec<F>),
    Ite(Box<F>, Box<F>, Box<F>),
    Tuple(Vec<F>),
}

impl F {
    fn temporal(&self) -> bool {
        match self {
            F::Always(_) | F::Next(_) => true,
            F::Int(_) | F::Real(_) | F::Bool(_) | F::Var(_) => false,
            F::Neg(a) | F::Not(a) => a.temporal(),
            F::Arith(_, a, b) | F::Cmp(_, a, b) | F::And(a, b) | F::Or(a, b) | F::Implies(a, b) => {
                a.temporal() || b.temporal()
            }
            F::App(_, xs) | F::Tuple(xs) => xs.iter().any(F::temporal),
            F::Ite(a, b, c) => a.temporal() || b.temporal() || c.temporal(),
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    used: HashSet<String>,
    fresh: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        let toks = lex(src)?;
        let used = toks
            .iter()
            .filter_map(|t| match &t.tok {
                Tok::Ident(s) => Some(s.clone()),
                _ => None,
            })
            .collect();
        Ok(Parser { toks, pos: 0, used, fresh: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError::new(t.line, t.col, &t.tok.describe(), msg)
    }

    fn is_kw(&self, kw: Kw) -> bool {
        *self.peek() == Tok::Kw(kw)
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn eat_kw(&mut self, kw: Kw) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: Kw) -> Result<(), ParseError> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", super::lexer::keyword_text(kw))))
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error("unexpected token after end of expression"))
        }
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error("expected an identifier")),
        }
    }

    fn fresh(&mut self, prefix: &str) -> Name {
        loop {
            let n = format!("_{prefix}{}", self.fresh);
            self.fresh += 1;
            if self.used.insert(n.clone()) {
                return n;
            }
        }
    }

    // ---------------------------------------------------------------- program

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut funs = Vec::new();
        while self.is_kw(Kw::Let)
            && matches!(self.peek_at(1), Tok::Ident(_))
            && *self.peek_at(2) == Tok::Sym("(")
        {
            funs.push(self.fundef()?);
        }
        let mut main_ty = None;
        if self.eat_kw(Kw::Main) {
            self.expect_sym(":")?;
            main_ty = Some(self.reftype()?);
            self.expect_sym("=")?;
        }
        let main = self.expr()?;
        Ok(Program { funs, main_ty, main })
    }

    fn fundef(&mut self) -> Result<FunDef, ParseError> {
        self.expect_kw(Kw::Let)?;
        let name = self.ident()?;
        self.expect_sym("(")?;
        let param = self.pattern()?;
        self.expect_sym(":")?;
        let arg = self.reftype()?;
        self.expect_sym(")")?;
        self.expect_sym(":")?;
        let ret = self.reftype()?;
        self.expect_sym("=")?;
        let body = self.expr()?;
        self.expect_sym(";;")?;
        Ok(FunDef { name, param, arg, ret, body })
    }

    fn pattern(&mut self) -> Result<Pattern, ParseError> {
        if self.eat_sym("(") {
            let mut ps = vec![self.pattern()?];
            while self.eat_sym(",") {
                ps.push(self.pattern()?);
            }
            self.expect_sym(")")?;
            if ps.len() == 1 {
                return Ok(ps.pop().unwrap());
            }
            Ok(Pattern::Tuple(ps))
        } else {
            Ok(Pattern::Var(self.ident()?))
        }
    }

    // ------------------------------------------------------------------ types

    fn reftype(&mut self) -> Result<RefType, ParseError> {
        if self.eat_sym("{") {
            let binder = self.pattern()?;
            self.expect_sym(":")?;
            let base = self.base_type()?;
            self.expect_sym("|")?;
            let f = self.formula()?;
            let pred = self.to_trace(f)?;
            self.expect_sym("}")?;
            Ok(RefType::Refined { binder, base, pred })
        } else {
            Ok(RefType::Base(self.base_type()?))
        }
    }

    fn base_type(&mut self) -> Result<BaseType, ParseError> {
        let mut ts = vec![self.base_atom()?];
        while self.eat_sym("*") {
            ts.push(self.base_atom()?);
        }
        Ok(if ts.len() == 1 { ts.pop().unwrap() } else { BaseType::Product(ts) })
    }

    fn base_atom(&mut self) -> Result<BaseType, ParseError> {
        match self.peek() {
            Tok::Kw(Kw::Int) => {
                self.bump();
                Ok(BaseType::Int)
            }
            Tok::Kw(Kw::Float) => {
                self.bump();
                Ok(BaseType::Float)
            }
            Tok::Kw(Kw::Bool) => {
                self.bump();
                Ok(BaseType::Bool)
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.base_type()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            _ => Err(self.error("expected a base type")),
        }
    }

    // ------------------------------------------------------------ expressions

    fn expr(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Kw(Kw::Let) => self.let_expr(),
            Tok::Kw(Kw::If) => self.if_expr(),
            _ => self.fby_expr(),
        }
    }

    fn let_expr(&mut self) -> Result<Expr, ParseError> {
        self.expect_kw(Kw::Let)?;
        let rec = self.eat_kw(Kw::Rec);
        let pat = self.pattern()?;
        let ty = if self.eat_sym(":") { Some(self.reftype()?) } else { None };
        self.expect_sym("=")?;
        let rhs = self.expr()?;
        self.expect_kw(Kw::In)?;
        let body = self.expr()?;
        Ok(if rec { Expr::let_rec(pat, ty, rhs, body) } else { Expr::let_(pat, ty, rhs, body) })
    }

    fn if_expr(&mut self) -> Result<Expr, ParseError> {
        self.expect_kw(Kw::If)?;
        let c = self.expr()?;
        self.expect_kw(Kw::Then)?;
        let t = self.expr()?;
        self.expect_kw(Kw::Else)?;
        let e = self.expr()?;
        Ok(match c {
            Expr::Var(x) => Expr::if_(x, t, e),
            c => {
                let x = self.fresh("c");
                Expr::let_(Pattern::Var(x.clone()), None, c, Expr::if_(x, t, e))
            }
        })
    }

    fn fby_expr(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.models_expr()?;
        if self.eat_kw(Kw::Fby) {
            let rhs = self.fby_expr()?;
            return Ok(Expr::fby(lhs, rhs));
        }
        Ok(lhs)
    }

    fn models_expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.binary(3)?;
        while self.eat_kw(Kw::Models) {
            let r = if self.eat_kw(Kw::RobotGet) {
                Robot::Get(self.string()?)
            } else if self.eat_kw(Kw::RobotStr) {
                let key = self.string()?;
                Robot::Str(key, self.unary()?)
            } else {
                return Err(self.error("expected `robot_get` or `robot_str`"));
            };
            e = Expr::Models(Box::new(e), Box::new(r));
        }
        Ok(e)
    }

    fn string(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error("expected a string literal")),
        }
    }

    fn binop_at(&self, level: u8) -> Option<BinOp> {
        let op = match self.peek() {
            Tok::Kw(Kw::Or) => BinOp::Or,
            Tok::Kw(Kw::And) => BinOp::And,
            Tok::Sym("=") => BinOp::Eq,
            Tok::Sym("<>") => BinOp::Ne,
            Tok::Sym("<") => BinOp::Lt,
            Tok::Sym("<=") => BinOp::Le,
            Tok::Sym(">") => BinOp::Gt,
            Tok::Sym(">=") => BinOp::Ge,
            Tok::Sym("+") | Tok::Sym("+.") => BinOp::Add,
            Tok::Sym("-") | Tok::Sym("-.") => BinOp::Sub,
            Tok::Sym("*") | Tok::Sym("*.") => BinOp::Mul,
            Tok::Sym("/") | Tok::Sym("/.") => BinOp::Div,
            _ => return None,
        };
        (super::binop_level(op) == level).then_some(op)
    }

    /// Binary operators from `level` (or) up to multiplication.
    fn binary(&mut self, level: u8) -> Result<Expr, ParseError> {
        if level > super::LVL_MUL {
            return self.unary();
        }
        let mut lhs = self.binary(level + 1)?;
        if level == super::LVL_CMP {
            if let Some(op) = self.binop_at(level) {
                self.bump();
                let rhs = self.binary(level + 1)?;
                lhs = Expr::bin(op, lhs, rhs);
                if self.binop_at(level).is_some() {
                    return Err(self.error("comparison operators do not associate; add parentheses"));
                }
            }
            return Ok(lhs);
        }
        while let Some(op) = self.binop_at(level) {
            self.bump();
            let rhs = self.binary(level + 1)?;
            lhs = Expr::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.is_sym("-") || self.is_sym("-.") {
            self.bump();
            match self.peek().clone() {
                Tok::Int(n) => {
                    self.bump();
                    return Ok(Expr::int(self.neg_int(n)?));
                }
                Tok::Float(f) => {
                    self.bump();
                    return Ok(Expr::float(-f));
                }
                _ => return Ok(Expr::Unary(UnOp::Neg, Box::new(self.unary()?))),
            }
        }
        if self.eat_kw(Kw::Not) {
            return Ok(Expr::Unary(UnOp::Not, Box::new(self.unary()?)));
        }
        self.app()
    }

    fn neg_int(&self, n: u64) -> Result<i64, ParseError> {
        if n <= i64::MAX as u64 + 1 {
            Ok((n as i128).wrapping_neg() as i64)
        } else {
            Err(self.error("integer literal out of range"))
        }
    }

    fn pos_int(&self, n: u64) -> Result<i64, ParseError> {
        i64::try_from(n).map_err(|_| self.error("integer literal out of range"))
    }

    fn starts_arg(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Int(_)
                | Tok::Float(_)
                | Tok::Ident(_)
                | Tok::Kw(Kw::True)
                | Tok::Kw(Kw::False)
                | Tok::Sym("(")
        )
    }

    fn app(&mut self) -> Result<Expr, ParseError> {
        if let Tok::Ident(f) = self.peek().clone() {
            self.bump();
            if self.starts_arg() {
                let arg = self.atom()?;
                return Ok(match arg {
                    Expr::Var(y) => Expr::App(f, y),
                    arg => {
                        let y = self.fresh("a");
                        Expr::let_(Pattern::Var(y.clone()), None, arg, Expr::App(f, y))
                    }
                });
            }
            return Ok(Expr::Var(f));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::int(self.pos_int(n)?))
            }
            Tok::Float(f) => {
                self.bump();
                Ok(Expr::float(f))
            }
            Tok::Kw(Kw::True) => {
                self.bump();
                Ok(Expr::bool(true))
            }
            Tok::Kw(Kw::False) => {
                self.bump();
                Ok(Expr::bool(false))
            }
            Tok::Ident(x) => {
                self.bump();
                Ok(Expr::Var(x))
            }
            Tok::Kw(Kw::Let) => self.let_expr(),
            Tok::Kw(Kw::If) => self.if_expr(),
            Tok::Sym("(") => {
                self.bump();
                let mut es = vec![self.expr()?];
                while self.eat_sym(",") {
                    es.push(self.expr()?);
                }
                self.expect_sym(")")?;
                Ok(if es.len() == 1 { es.pop().unwrap() } else { Expr::Tuple(es) })
            }
            Tok::Kw(Kw::Delay) | Tok::Kw(Kw::Nil) => {
                Err(self.error("internal form cannot appear in source programs"))
            }
            _ => Err(self.error("expected an expression")),
        }
    }

    // --------------------------------------------------------------- formulas

    fn formula(&mut self) -> Result<F, ParseError> {
        if self.eat_kw(Kw::If) {
            let c = self.formula()?;
            self.expect_kw(Kw::Then)?;
            let t = self.formula()?;
            self.expect_kw(Kw::Else)?;
            let e = self.formula()?;
            return Ok(F::Ite(Box::new(c), Box::new(t), Box::new(e)));
        }
        self.f_implies()
    }

    fn f_implies(&mut self) -> Result<F, ParseError> {
        let lhs = self.f_or()?;
        if self.eat_sym("=>") {
            let rhs = self.f_implies()?;
            return Ok(F::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn f_or(&mut self) -> Result<F, ParseError> {
        let mut lhs = self.f_and()?;
        while self.eat_kw(Kw::Or) {
            let rhs = self.f_and()?;
            lhs = F::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn f_and(&mut self) -> Result<F, ParseError> {
        let mut lhs = self.f_temporal()?;
        while self.eat_kw(Kw::And) {
            let rhs = self.f_temporal()?;
            lhs = F::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn f_temporal(&mut self) -> Result<F, ParseError> {
        if self.eat_kw(Kw::Always) {
            return Ok(F::Always(Box::new(self.f_temporal()?)));
        }
        if self.eat_kw(Kw::Next) {
            return Ok(F::Next(Box::new(self.f_temporal()?)));
        }
        self.f_cmp()
    }

    fn f_cmp(&mut self) -> Result<F, ParseError> {
        let lhs = self.f_add()?;
        let op = match self.peek() {
            Tok::Sym("=") => CmpOp::Eq,
            Tok::Sym("<>") => CmpOp::Ne,
            Tok::Sym("<") => CmpOp::Lt,
            Tok::Sym("<=") => CmpOp::Le,
            Tok::Sym(">") => CmpOp::Gt,
            Tok::Sym(">=") => CmpOp::Ge,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.f_add()?;
        if matches!(self.peek(), Tok::Sym("=" | "<>" | "<" | "<=" | ">" | ">=")) {
            return Err(self.error("comparison operators do not associate; add parentheses"));
        }
        Ok(F::Cmp(op, Box::new(lhs), Box::new(rhs)))
    }

    fn f_add(&mut self) -> Result<F, ParseError> {
        let mut lhs = self.f_mul()?;
        loop {
            let op = match self.peek() {
                Tok::Sym("+") | Tok::Sym("+.") => ArithOp::Add,
                Tok::Sym("-") | Tok::Sym("-.") => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.f_mul()?;
            lhs = F::Arith(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn f_mul(&mut self) -> Result<F, ParseError> {
        let mut lhs = self.f_unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym("*") | Tok::Sym("*.") => ArithOp::Mul,
                Tok::Sym("/") | Tok::Sym("/.") => ArithOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.f_unary()?;
            lhs = F::Arith(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn f_unary(&mut self) -> Result<F, ParseError> {
        if self.is_sym("-") || self.is_sym("-.") {
            self.bump();
            return match self.peek().clone() {
                Tok::Int(n) => {
                    self.bump();
                    Ok(F::Int(self.neg_int(n)?))
                }
                Tok::Float(f) => {
                    self.bump();
                    Ok(F::Real(-f))
                }
                _ => Ok(F::Neg(Box::new(self.f_unary()?))),
            };
        }
        if self.eat_kw(Kw::Not) {
            return Ok(F::Not(Box::new(self.f_unary()?)));
        }
        if let Tok::Ident(f) = self.peek().clone() {
            self.bump();
            if self.starts_arg() {
                let args = match self.f_atom()? {
                    F::Tuple(xs) => xs,
                    x => vec![x],
                };
                return Ok(F::App(f, args));
            }
            return Ok(F::Var(f));
        }
        self.f_atom()
    }

    fn f_atom(&mut self) -> Result<F, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(F::Int(self.pos_int(n)?))
            }
            Tok::Float(f) => {
                self.bump();
                Ok(F::Real(f))
            }
            Tok::Kw(Kw::True) => {
                self.bump();
                Ok(F::Bool(true))
            }
            Tok::Kw(Kw::False) => {
                self.bump();
                Ok(F::Bool(false))
            }
            Tok::Ident(x) => {
                self.bump();
                Ok(F::Var(x))
            }
            Tok::Sym("(") => {
                self.bump();
                let mut xs = vec![self.formula()?];
                while self.eat_sym(",") {
                    xs.push(self.formula()?);
                }
                self.expect_sym(")")?;
                Ok(if xs.len() == 1 { xs.pop().unwrap() } else { F::Tuple(xs) })
            }
            _ => Err(self.error("expected a predicate or term")),
        }
    }

    fn to_trace(&self, f: F) -> Result<TracePred, ParseError> {
        if !f.temporal() {
            return Ok(TracePred::State(self.to_state(f)?));
        }
        Ok(match f {
            F::Always(a) => TracePred::Always(Box::new(self.to_trace(*a)?)),
            F::Next(a) => TracePred::Next(Box::new(self.to_trace(*a)?)),
            F::And(a, b) => {
                TracePred::And(Box::new(self.to_trace(*a)?), Box::new(self.to_trace(*b)?))
            }
            _ => {
                return Err(self.error(
                    "temporal operators may only appear under `always`, `next` and `and`",
                ))
            }
        })
    }

    fn to_state(&self, f: F) -> Result<StatePred, ParseError> {
        Ok(match f {
            F::Bool(true) => StatePred::True,
            F::Bool(false) => StatePred::False,
            F::Cmp(op, a, b) => StatePred::Cmp(op, self.to_term(*a)?, self.to_term(*b)?),
            F::Not(a) => StatePred::Not(Box::new(self.to_state(*a)?)),
            F::And(a, b) => StatePred::And(Box::new(self.to_state(*a)?), Box::new(self.to_state(*b)?)),
            F::Or(a, b) => StatePred::Or(Box::new(self.to_state(*a)?), Box::new(self.to_state(*b)?)),
            F::Implies(a, b) => {
                StatePred::Implies(Box::new(self.to_state(*a)?), Box::new(self.to_state(*b)?))
            }
            f @ (F::Var(_) | F::App(..) | F::Ite(..)) => StatePred::Atom(self.to_term(f)?),
            F::Always(_) | F::Next(_) => {
                return Err(self.error("temporal operator inside a state predicate"))
            }
            F::Int(_) | F::Real(_) | F::Neg(_) | F::Arith(..) => {
                return Err(self.error("expected a predicate, found a numeric term"))
            }
            F::Tuple(_) => return Err(self.error("tuples are only allowed as function arguments")),
        })
    }

    fn to_term(&self, f: F) -> Result<Term, ParseError> {
        Ok(match f {
            F::Int(i) => Term::Int(i),
            F::Real(r) => Term::Real(r),
            F::Bool(b) => Term::Bool(b),
            F::Var(x) => Term::Var(x),
            F::Neg(a) => Term::Neg(Box::new(self.to_term(*a)?)),
            F::Arith(op, a, b) => Term::Arith(op, Box::new(self.to_term(*a)?), Box::new(self.to_term(*b)?)),
            F::App(f, xs) => Term::App(f, xs.into_iter().map(|x| self.to_term(x)).collect::<Result<_, _>>()?),
            F::Ite(c, t, e) => Term::Ite(
                Box::new(self.to_state(*c)?),
                Box::new(self.to_term(*t)?),
                Box::new(self.to_term(*e)?),
            ),
            f @ (F::Cmp(..) | F::Not(_) | F::And(..) | F::Or(..) | F::Implies(..)) => {
                Term::Pred(Box::new(self.to_state(f)?))
            }
            F::Always(_) | F::Next(_) => return Err(self.error("temporal operator inside a term")),
            F::Tuple(_) => return Err(self.error("tuples are only allowed as function arguments")),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn let_rec_counter() {
        let p = parse_program("let rec x : {v:int | always (v >= 0)} = 0 fby x + 1 in x").unwrap();
        let Expr::LetRec(b) = &p.main else { panic!("{:?}", p.main) };
        assert_eq!(b.pat, Pattern::var("x"));
        assert_eq!(b.rhs, Expr::fby(Expr::int(0), Expr::bin(BinOp::Add, Expr::var("x"), Expr::int(1))));
        let Some(RefType::Refined { pred, .. }) = &b.ty else { panic!() };
        assert!(matches!(pred, TracePred::Always(_)));
    }

    #[test]
    fn precedence() {
        let e = parse_expr("a + b * c = d or e and f").unwrap();
        let expected = Expr::bin(
            BinOp::Or,
            Expr::bin(
                BinOp::Eq,
                Expr::bin(BinOp::Add, Expr::var("a"), Expr::bin(BinOp::Mul, Expr::var("b"), Expr::var("c"))),
                Expr::var("d"),
            ),
            Expr::bin(BinOp::And, Expr::var("e"), Expr::var("f")),
        );
        assert_eq!(e, expected);
        // fby binds loosest and associates to the right
        let e = parse_expr("1 fby 2 fby x + 1").unwrap();
        assert_eq!(
            e,
            Expr::fby(Expr::int(1), Expr::fby(Expr::int(2), Expr::bin(BinOp::Add, Expr::var("x"), Expr::int(1))))
        );
        // not binds tighter than multiplication
        let e = parse_expr("not a * b").unwrap();
        assert_eq!(e, Expr::bin(BinOp::Mul, Expr::Unary(UnOp::Not, Box::new(Expr::var("a"))), Expr::var("b")));
    }

    #[test]
    fn if_condition_is_named() {
        let e = parse_expr("if x > 0 then 1 else 2").unwrap();
        let Expr::Let(b) = e else { panic!() };
        assert_eq!(b.pat, Pattern::var("_c0"));
        assert!(matches!(b.body, Expr::If(ref c, _, _) if c == "_c0"));
    }

    #[test]
    fn fresh_names_avoid_user_names() {
        let e = parse_expr("let _c0 = 1 in if _c0 > 0 then 1 else 2").unwrap();
        let Expr::Let(b) = e else { panic!() };
        let Expr::Let(inner) = &b.body else { panic!() };
        assert_eq!(inner.pat, Pattern::var("_c1"));
    }

    #[test]
    fn app_argument_is_named() {
        let e = parse_expr("max (a, 0.0)").unwrap();
        let Expr::Let(b) = e else { panic!() };
        assert_eq!(b.rhs, Expr::Tuple(vec![Expr::var("a"), Expr::float(0.0)]));
        assert_eq!(b.body, Expr::App("max".into(), "_a0".into()));
        assert_eq!(parse_expr("f x").unwrap(), Expr::App("f".into(), "x".into()));
    }

    #[test]
    fn negative_literals() {
        assert_eq!(parse_expr("-3").unwrap(), Expr::int(-3));
        assert_eq!(parse_expr("x - 3").unwrap(), Expr::bin(BinOp::Sub, Expr::var("x"), Expr::int(3)));
        assert_eq!(parse_expr("-(3)").unwrap(), Expr::Unary(UnOp::Neg, Box::new(Expr::int(3))));
        assert_eq!(parse_expr("-9223372036854775808").unwrap(), Expr::int(i64::MIN));
        assert!(parse_expr("9223372036854775808").is_err());
    }

    #[test]
    fn tuple_refinement() {
        let t = parse_reftype("{(f, l) : float * float | always (f >= 0.0 and l <= 19.0)}").unwrap();
        let RefType::Refined { binder, base, .. } = t else { panic!() };
        assert_eq!(binder, Pattern::Tuple(vec![Pattern::var("f"), Pattern::var("l")]));
        assert_eq!(base, BaseType::Product(vec![BaseType::Float, BaseType::Float]));
    }

    #[test]
    fn state_conjunctions_stay_state_level() {
        let p = parse_trace_pred("v = 0 and next always v >= 1").unwrap();
        let TracePred::And(a, b) = p else { panic!() };
        assert!(a.is_state());
        assert!(matches!(*b, TracePred::Next(_)));
        assert!(parse_trace_pred("always v > 0 or v < 0").is_err());
        assert!(parse_trace_pred("always (v > 0 or v < 0)").is_ok());
    }

    #[test]
    fn functions_and_main_annotation() {
        let src = "let f (x : {v:float | v < 0.0}) : {v:float | v >= 0.0} = let y = x * x in y;;\n\
                   main : float = f (-1.0)";
        let p = parse_program(src).unwrap();
        assert_eq!(p.funs.len(), 1);
        assert_eq!(p.main_ty, Some(RefType::Base(BaseType::Float)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_program("let x = 1 in\n  x +").unwrap_err();
        assert_eq!((e.line, e.col), (2, 6));
        assert_eq!(e.found, "end of input");
        let e = parse_expr("delay x").unwrap_err();
        assert_eq!(e.found, "delay");
    }
}
