//! Bidirectional refinement checking. Structural rules (`fby`, `let`, `if`,
//! `delay`, `models`) push the expected type inward; pointwise expressions
//! are translated to logic terms and compared against the expected type,
//! which produces an [`Obligation`] per instant class.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::logic::{self, Instants, Signature, Sort};
use crate::ast::*;
use crate::checks::{self, StaticError};
use crate::temporal::{impl_, split};

/// Deepest `next` nesting the lowering accepts.
pub const MAX_NEXT_DEPTH: usize = 32;

/// A verification condition: the conjunction of `assumptions` must entail
/// `goal`, read at one instant class of the stream.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Obligation {
    pub id: usize,
    /// Typing rule that produced the subtyping check.
    pub rule: String,
    /// Path of binders leading to the checked expression.
    pub location: String,
    pub instants: Instants,
    pub sig: Signature,
    pub assumptions: Vec<StatePred>,
    pub goal: StatePred,
}

impl std::fmt::Display for Obligation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let hs: Vec<String> = self.assumptions.iter().map(|h| h.to_string()).collect();
        write!(f, "{} |- {}", hs.join(", "), self.goal)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TypeError {
    #[error(transparent)]
    Static(#[from] StaticError),
    #[error("{location}: {message}")]
    IllFormed { location: String, message: String },
}

#[derive(Debug, Clone)]
struct Leaf {
    name: String,
    sort: Sort,
}

impl Leaf {
    fn term(&self) -> Term {
        Term::Var(self.name.clone())
    }
}

/// A binder in scope. `assume` is stated relative to the current frame; each
/// enclosing `delay` wraps it in one more `next`.
#[derive(Debug, Clone)]
struct Entry {
    names: Vec<(Name, BaseType, Vec<Leaf>)>,
    leaves: Vec<Leaf>,
    assume: Vec<TracePred>,
    history: Vec<Value>,
    shift: usize,
}

#[derive(Debug, Clone, Default)]
struct Scope {
    entries: Vec<Entry>,
}

impl Scope {
    fn lookup(&self, x: &str) -> Option<(&BaseType, &[Leaf])> {
        self.entries
            .iter()
            .rev()
            .find_map(|e| e.names.iter().rev().find(|(n, _, _)| n == x))
            .map(|(_, b, l)| (b, l.as_slice()))
    }

    fn with(&self, e: Entry) -> Scope {
        let mut s = self.clone();
        s.entries.push(e);
        s
    }

    /// The scope seen from inside `delay`: one instant earlier.
    fn prev(&self) -> Scope {
        let mut s = self.clone();
        for e in &mut s.entries {
            e.assume = e.assume.drain(..).map(TracePred::next).collect();
            e.shift += 1;
        }
        s
    }

    fn base_env(&self) -> Vec<(Name, BaseType)> {
        self.entries.iter().flat_map(|e| e.names.iter().map(|(n, b, _)| (n.clone(), b.clone()))).collect()
    }

    /// Everything known about the binders: their refinements plus, under
    /// `delay`, the recorded values at the shifted instant.
    fn assumptions(&self) -> Vec<TracePred> {
        let mut out = Vec::new();
        for e in &self.entries {
            out.extend(e.assume.iter().cloned());
            if e.shift >= 1 && e.history.len() >= e.shift {
                let v = &e.history[e.history.len() - e.shift];
                for (leaf, val) in e.leaves.iter().zip(v.leaves()) {
                    if let Some(t) = value_term(val) {
                        out.push(TracePred::State(StatePred::eq(leaf.term(), t)));
                    }
                }
            }
        }
        out
    }
}

fn value_term(v: &Value) -> Option<Term> {
    match v {
        Value::Int(i) => Some(Term::Int(*i)),
        Value::Float(f) if f.is_finite() => Some(Term::Real(*f)),
        Value::Bool(b) => Some(Term::Bool(*b)),
        _ => None,
    }
}

/// Expected type: a predicate over named value leaves.
#[derive(Debug, Clone)]
struct Goal {
    leaves: Vec<Leaf>,
    pred: TracePred,
}

/// Synthesized description of a pointwise expression: its value is
/// `leaves` at every instant, given `facts`.
#[derive(Debug, Clone, Default)]
struct Synth {
    leaves: Vec<(Term, Sort)>,
    facts: Vec<TracePred>,
}

/// Why a subexpression is being checked, for obligation provenance.
#[derive(Debug, Clone)]
struct Ctx {
    rule: &'static str,
    loc: String,
}

impl Ctx {
    fn at(&self, rule: &'static str, step: impl std::fmt::Display) -> Ctx {
        Ctx { rule, loc: format!("{} > {step}", self.loc) }
    }
}

fn leaf_suffixes(b: &BaseType) -> Vec<(String, Sort)> {
    match b {
        BaseType::Product(ts) => ts
            .iter()
            .enumerate()
            .flat_map(|(i, t)| leaf_suffixes(t).into_iter().map(move |(s, k)| (format!(".{i}{s}"), k)))
            .collect(),
        b => vec![(String::new(), Sort::of_leaf(b))],
    }
}

/// UF symbol for leaf `k` of function `f`'s result.
pub fn uf_name(f: &str, ret: &BaseType, k: usize) -> String {
    match ret {
        BaseType::Product(_) => format!("fun.{f}{}", leaf_suffixes(ret)[k].0),
        _ => format!("fun.{f}"),
    }
}

fn as_pred(t: Term) -> StatePred {
    match t {
        Term::Pred(p) => *p,
        Term::Bool(true) => StatePred::True,
        Term::Bool(false) => StatePred::False,
        t => StatePred::Atom(t),
    }
}

fn pred_term(p: StatePred) -> Term {
    match p {
        StatePred::True => Term::Bool(true),
        StatePred::False => Term::Bool(false),
        StatePred::Atom(t) => t,
        p => Term::Pred(Box::new(p)),
    }
}

pub struct Checker<'p> {
    funs: &'p [FunDef],
    sig: Signature,
    names: HashMap<String, usize>,
    fresh: usize,
    pub obligations: Vec<Obligation>,
}

impl<'p> Checker<'p> {
    /// `funs` must be elaborated.
    pub fn new(funs: &'p [FunDef]) -> Checker<'p> {
        let mut sig = Signature::default();
        for f in funs {
            let args: Vec<Sort> = leaf_suffixes(f.arg.base()).into_iter().map(|(_, s)| s).collect();
            for (k, (_, ret)) in leaf_suffixes(f.ret.base()).into_iter().enumerate() {
                sig.funs.insert(uf_name(&f.name, f.ret.base(), k), logic::FunSig { args: args.clone(), ret });
            }
        }
        Checker { funs, sig, names: HashMap::new(), fresh: 0, obligations: Vec::new() }
    }

    fn unique(&mut self, base: &str) -> String {
        let n = self.names.entry(base.to_string()).or_insert(0);
        let name = if *n == 0 { base.to_string() } else { format!("{base}~{n}") };
        *n += 1;
        name
    }

    fn fresh_leaves(&mut self, hint: &str, base: &BaseType) -> Vec<Leaf> {
        self.fresh += 1;
        let stem = format!("{hint}!{}", self.fresh);
        leaf_suffixes(base)
            .into_iter()
            .map(|(s, sort)| {
                let name = format!("{stem}{s}");
                self.sig.vars.insert(name.clone(), sort);
                Leaf { name, sort }
            })
            .collect()
    }

    /// Fresh logic names for the names a pattern binds.
    fn bind_pattern(&mut self, pat: &Pattern, base: &BaseType, ctx: &Ctx) -> Result<Entry, TypeError> {
        let parts = pat.bind_types(base).ok_or_else(|| ill(ctx, format!("pattern `{pat}` does not fit `{base}`")))?;
        let mut names = Vec::new();
        let mut leaves = Vec::new();
        for (n, b) in parts {
            let stem = self.unique(&n);
            let ls: Vec<Leaf> = leaf_suffixes(&b)
                .into_iter()
                .map(|(s, sort)| {
                    let name = format!("{stem}{s}");
                    self.sig.vars.insert(name.clone(), sort);
                    Leaf { name, sort }
                })
                .collect();
            leaves.extend(ls.iter().cloned());
            names.push((n, b, ls));
        }
        Ok(Entry { names, leaves, assume: Vec::new(), history: Vec::new(), shift: 0 })
    }

    /// Instantiates a predicate written over `binder` (and names in scope)
    /// at the given value leaves.
    fn instantiate(
        &self,
        pred: &TracePred,
        binder: &HashMap<String, Vec<Term>>,
        scope: &Scope,
        ctx: &Ctx,
    ) -> Result<TracePred, TypeError> {
        let funs = self.funs;
        let mut resolve = |x: &str, is_fun: bool| -> Result<Term, String> {
            if is_fun {
                let f = funs.iter().find(|f| f.name == x).ok_or_else(|| format!("unknown function `{x}`"))?;
                if !f.ret.base().is_scalar() {
                    return Err(format!("`{x}` returns a tuple and cannot appear in a predicate"));
                }
                return Ok(Term::Var(uf_name(x, f.ret.base(), 0)));
            }
            let ts: Vec<Term> = match binder.get(x) {
                Some(ts) => ts.clone(),
                None => match scope.lookup(x) {
                    Some((_, ls)) => ls.iter().map(Leaf::term).collect(),
                    None => return Err(format!("unbound name `{x}` in refinement")),
                },
            };
            match <[Term; 1]>::try_from(ts) {
                Ok([t]) => Ok(t),
                Err(_) => Err(format!("`{x}` is a tuple; destructure it in the binder to refer to its parts")),
            }
        };
        let renamed = logic::rename_trace(pred, &mut resolve).map_err(|m| ill(ctx, m))?;
        logic::sort_trace(&renamed, &self.sig).map_err(|m| ill(ctx, m))
    }

    fn binder_map(pat: &Pattern, base: &BaseType, leaves: &[Term]) -> Option<HashMap<String, Vec<Term>>> {
        let mut out = HashMap::new();
        let mut at = 0;
        for (n, b) in pat.bind_types(base)? {
            let k = b.leaves().len();
            out.insert(n, leaves[at..at + k].to_vec());
            at += k;
        }
        Some(out)
    }

    /// Refinement of `t` stated over `leaves`.
    fn type_pred(&self, t: &RefType, leaves: &[Term], scope: &Scope, ctx: &Ctx) -> Result<TracePred, TypeError> {
        match t {
            RefType::Base(_) => Ok(TracePred::TRUE),
            RefType::Refined { binder, base, pred } => {
                let map = Self::binder_map(binder, base, leaves)
                    .ok_or_else(|| ill(ctx, format!("binder `{binder}` does not fit `{base}`")))?;
                self.instantiate(pred, &map, scope, ctx)
            }
        }
    }

    fn goal_of(&mut self, t: &RefType, scope: &Scope, ctx: &Ctx, lift: bool) -> Result<Goal, TypeError> {
        let hint = match t {
            RefType::Refined { binder: Pattern::Var(v), .. } => v.clone(),
            _ => "v".to_string(),
        };
        let leaves = self.fresh_leaves(&hint, t.base());
        let terms: Vec<Term> = leaves.iter().map(Leaf::term).collect();
        let mut pred = self.type_pred(t, &terms, scope, ctx)?;
        if lift {
            pred = TracePred::always(pred);
        }
        Ok(Goal { leaves, pred })
    }

    fn subtype(&mut self, scope: &Scope, s: &Synth, goal: &Goal, ctx: &Ctx) -> Result<(), TypeError> {
        if goal.pred.is_true() {
            return Ok(());
        }
        let mut hyps = scope.assumptions();
        hyps.extend(s.facts.iter().cloned());
        for (leaf, (t, _)) in goal.leaves.iter().zip(&s.leaves) {
            hyps.push(TracePred::always(TracePred::State(StatePred::eq(leaf.term(), t.clone()))));
        }
        let lowered = logic::lower(&hyps, &goal.pred, MAX_NEXT_DEPTH).map_err(|m| ill(ctx, m))?;
        for l in lowered {
            let mut syms = BTreeSet::new();
            l.assumptions.iter().for_each(|a| logic::state_symbols(a, &mut syms));
            logic::state_symbols(&l.goal, &mut syms);
            self.obligations.push(Obligation {
                id: self.obligations.len(),
                rule: ctx.rule.to_string(),
                location: ctx.loc.clone(),
                instants: l.instants,
                sig: self.sig.restrict(&syms),
                assumptions: l.assumptions,
                goal: l.goal,
            });
        }
        Ok(())
    }

    fn base_of(&self, e: &Expr, scope: &Scope, ctx: &Ctx) -> Result<BaseType, TypeError> {
        checks::infer_expr(e, &scope.base_env(), self.funs).map_err(|err| ill(ctx, err.to_string()))
    }

    // -------------------------------------------------------------- checking

    fn check(&mut self, scope: &Scope, e: &Expr, goal: &Goal, ctx: &Ctx) -> Result<(), TypeError> {
        match e {
            Expr::Fby(a, b) => {
                let (head, tail) = split(&goal.pred);
                let g1 = Goal { leaves: goal.leaves.clone(), pred: TracePred::State(head) };
                let g2 = Goal { leaves: goal.leaves.clone(), pred: tail };
                self.check(scope, a, &g1, &ctx.at("T-FBY", "fby head"))?;
                self.check(scope, b, &g2, &ctx.at("T-FBY", "fby tail"))
            }
            Expr::Delay(a) => self.check(&scope.prev(), a, goal, &ctx.at("T-DELAY", "delay")),
            Expr::Let(b) => {
                let inner = self.bind_let(scope, b, false, ctx)?;
                self.check(&inner, &b.body, goal, ctx)
            }
            Expr::LetRec(b) => {
                let inner = self.bind_let(scope, b, true, ctx)?;
                self.check(&inner, &b.body, goal, ctx)
            }
            Expr::If(c, a, b) => {
                let q = self.cond_pred(scope, c, ctx)?;
                let ga = Goal { leaves: goal.leaves.clone(), pred: impl_(&q, &goal.pred) };
                let gb = Goal { leaves: goal.leaves.clone(), pred: impl_(&StatePred::not(q), &goal.pred) };
                self.check(scope, a, &ga, &ctx.at("T-IF", format!("if {c} then")))?;
                self.check(scope, b, &gb, &ctx.at("T-IF", format!("if {c} else")))
            }
            Expr::Models(a, r) => {
                self.robot(scope, r, ctx)?;
                self.check(scope, a, goal, &ctx.at("T-MODELS", "models"))
            }
            Expr::Const(Value::Nil) => Ok(()),
            _ => {
                let s = self.synth(scope, e, ctx)?;
                self.subtype(scope, &s, goal, ctx)
            }
        }
    }

    fn robot(&mut self, scope: &Scope, r: &Robot, ctx: &Ctx) -> Result<(), TypeError> {
        if let Robot::Str(key, x) = r {
            let ctx = ctx.at("T-MODELS", format!("robot_str {key:?}"));
            let base = self.base_of(x, scope, &ctx)?;
            let g = Goal { leaves: self.fresh_leaves("v", &base), pred: TracePred::TRUE };
            self.check(scope, x, &g, &ctx)?;
        }
        Ok(())
    }

    fn cond_pred(&self, scope: &Scope, c: &str, ctx: &Ctx) -> Result<StatePred, TypeError> {
        match scope.lookup(c) {
            Some((BaseType::Bool, [l])) => Ok(StatePred::Atom(l.term())),
            Some(_) => Err(ill(ctx, format!("condition `{c}` is not a boolean"))),
            None => Err(ill(ctx, format!("unbound condition `{c}`"))),
        }
    }

    /// Checks a binding and returns the scope for its body.
    fn bind_let(&mut self, scope: &Scope, b: &Binding, rec: bool, ctx: &Ctx) -> Result<Scope, TypeError> {
        let ty = b.ty.clone().ok_or_else(|| ill(ctx, format!("binding `{}` is not elaborated", b.pat)))?;
        let here = ctx.at(if rec { "T-LETREC" } else { "T-LET" }, format!("{} {}", if rec { "let rec" } else { "let" }, b.pat));
        let mut entry = self.bind_pattern(&b.pat, ty.base(), &here)?;
        entry.history = b.history.clone();
        let terms: Vec<Term> = entry.leaves.iter().map(Leaf::term).collect();
        if rec {
            entry.assume.push(self.type_pred(&ty, &terms, scope, &here)?);
            let inner = scope.with(entry);
            let goal = self.goal_of(&ty, scope, &here, false)?;
            self.check(&inner, &b.rhs, &goal, &here)?;
            return Ok(inner);
        }
        entry.assume.push(self.type_pred(&ty, &terms, scope, &here)?);
        if b.rhs.is_pointwise() {
            let s = self.synth(scope, &b.rhs, &here)?;
            if ty.pred().is_some() {
                let goal = self.goal_of(&ty, scope, &here, false)?;
                self.subtype(scope, &s, &goal, &here)?;
            }
            // Selfification: the binder equals its definition.
            entry.assume.extend(s.facts);
            for (l, (t, _)) in entry.leaves.iter().zip(s.leaves) {
                entry.assume.push(TracePred::always(TracePred::State(StatePred::eq(l.term(), t))));
            }
        } else {
            let goal = self.goal_of(&ty, scope, &here, false)?;
            self.check(scope, &b.rhs, &goal, &here)?;
        }
        Ok(scope.with(entry))
    }

    // ------------------------------------------------------------- synthesis

    fn scalar(&mut self, scope: &Scope, e: &Expr, ctx: &Ctx) -> Result<(Term, Sort, Vec<TracePred>), TypeError> {
        let s = self.synth(scope, e, ctx)?;
        match <[(Term, Sort); 1]>::try_from(s.leaves) {
            Ok([(t, k)]) => Ok((t, k, s.facts)),
            Err(_) => Err(ill(ctx, format!("`{e}` is not a scalar"))),
        }
    }

    fn synth(&mut self, scope: &Scope, e: &Expr, ctx: &Ctx) -> Result<Synth, TypeError> {
        Ok(match e {
            Expr::Const(v) if !v.is_nil() => Synth {
                leaves: v
                    .leaves()
                    .into_iter()
                    .map(|v| {
                        let t = value_term(v).ok_or_else(|| ill(ctx, format!("literal {v} has no logic counterpart")))?;
                        let sort = Sort::of_leaf(&v.base_type().expect("scalar literal"));
                        Ok((t, sort))
                    })
                    .collect::<Result<_, TypeError>>()?,
                facts: vec![],
            },
            Expr::Var(x) => {
                let (_, ls) = scope.lookup(x).ok_or_else(|| ill(ctx, format!("unbound variable `{x}`")))?;
                Synth { leaves: ls.iter().map(|l| (l.term(), l.sort)).collect(), facts: vec![] }
            }
            Expr::Unary(op, a) => {
                let (t, k, facts) = self.scalar(scope, a, ctx)?;
                let t = match op {
                    UnOp::Neg => Term::Neg(Box::new(t)),
                    UnOp::Not => pred_term(StatePred::not(as_pred(t))),
                };
                Synth { leaves: vec![(t, k)], facts }
            }
            Expr::Binary(op, a, b) => {
                let (ta, ka, mut facts) = self.scalar(scope, a, ctx)?;
                let (tb, _, fb) = self.scalar(scope, b, ctx)?;
                facts.extend(fb);
                let (ta, tb) = (Box::new(ta), Box::new(tb));
                let (t, k) = match op {
                    BinOp::Add => (Term::Arith(ArithOp::Add, ta, tb), ka),
                    BinOp::Sub => (Term::Arith(ArithOp::Sub, ta, tb), ka),
                    BinOp::Mul => (Term::Arith(ArithOp::Mul, ta, tb), ka),
                    BinOp::Div => (Term::Arith(ArithOp::Div, ta, tb), ka),
                    BinOp::And => (pred_term(StatePred::and(as_pred(*ta), as_pred(*tb))), Sort::Bool),
                    BinOp::Or => (pred_term(StatePred::or(as_pred(*ta), as_pred(*tb))), Sort::Bool),
                    cmp => {
                        let c = match cmp {
                            BinOp::Eq => CmpOp::Eq,
                            BinOp::Ne => CmpOp::Ne,
                            BinOp::Lt => CmpOp::Lt,
                            BinOp::Le => CmpOp::Le,
                            BinOp::Gt => CmpOp::Gt,
                            _ => CmpOp::Ge,
                        };
                        (Term::Pred(Box::new(StatePred::Cmp(c, *ta, *tb))), Sort::Bool)
                    }
                };
                Synth { leaves: vec![(t, k)], facts }
            }
            Expr::Tuple(es) => {
                let mut out = Synth::default();
                for e in es {
                    let s = self.synth(scope, e, ctx)?;
                    out.leaves.extend(s.leaves);
                    out.facts.extend(s.facts);
                }
                out
            }
            Expr::If(c, a, b) => {
                let q = self.cond_pred(scope, c, ctx)?;
                let sa = self.synth(scope, a, ctx)?;
                let sb = self.synth(scope, b, ctx)?;
                let leaves = sa
                    .leaves
                    .into_iter()
                    .zip(sb.leaves)
                    .map(|((ta, k), (tb, _))| (Term::Ite(Box::new(q.clone()), Box::new(ta), Box::new(tb)), k))
                    .collect();
                Synth { leaves, facts: sa.facts.into_iter().chain(sb.facts).collect() }
            }
            Expr::Let(b) => {
                let inner = self.bind_let(scope, b, false, ctx)?;
                let mut s = self.synth(&inner, &b.body, ctx)?;
                // Names bound here may occur in the result.
                s.facts.extend(inner.entries.last().expect("binding").assume.iter().cloned());
                s
            }
            Expr::Models(a, r) => {
                self.robot(scope, r, ctx)?;
                self.synth(scope, a, ctx)?
            }
            Expr::App(f, y) => self.synth_app(scope, f, y, ctx)?,
            // Not pointwise: check what is inside, then treat the value as
            // unknown.
            Expr::Const(_) | Expr::Fby(..) | Expr::LetRec(_) | Expr::Delay(_) => {
                let base = self.base_of(e, scope, ctx)?;
                let leaves = self.fresh_leaves("u", &base);
                let g = Goal { leaves: leaves.clone(), pred: TracePred::TRUE };
                self.check(scope, e, &g, ctx)?;
                Synth { leaves: leaves.into_iter().map(|l| (l.term(), l.sort)).collect(), facts: vec![] }
            }
        })
    }

    fn synth_app(&mut self, scope: &Scope, f: &str, y: &str, ctx: &Ctx) -> Result<Synth, TypeError> {
        let def = self.funs.iter().find(|d| d.name == f).ok_or_else(|| ill(ctx, format!("unknown function `{f}`")))?;
        let (_, ls) = scope.lookup(y).ok_or_else(|| ill(ctx, format!("unbound variable `{y}`")))?;
        let args: Vec<Term> = ls.iter().map(Leaf::term).collect();
        let actx = ctx.at("T-APP", format!("argument of {f}"));
        if def.arg.pred().is_some() {
            let goal = self.goal_of(&def.arg, &Scope::default(), &actx, true)?;
            let s = Synth { leaves: ls.iter().map(|l| (l.term(), l.sort)).collect(), facts: vec![] };
            self.subtype(scope, &s, &goal, &actx)?;
        }
        let ret = def.ret.base();
        let results: Vec<(Term, Sort)> = leaf_suffixes(ret)
            .into_iter()
            .enumerate()
            .map(|(k, (_, sort))| (Term::App(uf_name(f, ret, k), args.clone()), sort))
            .collect();
        let mut facts = vec![];
        if let RefType::Refined { binder, base, pred } = &def.ret {
            let rterms: Vec<Term> = results.iter().map(|(t, _)| t.clone()).collect();
            let mut map = Self::binder_map(&def.param, def.arg.base(), &args)
                .ok_or_else(|| ill(ctx, format!("parameter of `{f}` does not fit its type")))?;
            map.extend(Self::binder_map(binder, base, &rterms).ok_or_else(|| ill(ctx, "bad result binder".into()))?);
            let p = self.instantiate(pred, &map, &Scope::default(), ctx)?;
            facts.push(TracePred::always(p));
        }
        Ok(Synth { leaves: results, facts })
    }

    // ------------------------------------------------------------ top level

    pub fn check_fun(&mut self, f: &FunDef) -> Result<(), TypeError> {
        let ctx = Ctx { rule: "T-FUN", loc: format!("fun {}", f.name) };
        let mut entry = self.bind_pattern(&f.param, f.arg.base(), &ctx)?;
        let terms: Vec<Term> = entry.leaves.iter().map(Leaf::term).collect();
        entry.assume.push(TracePred::always(self.type_pred(&f.arg, &terms, &Scope::default(), &ctx)?));
        let scope = Scope::default().with(entry);
        let goal = self.goal_of(&f.ret, &scope, &ctx, true)?;
        self.check(&scope, &f.body, &goal, &ctx)
    }

    pub fn check_main(&mut self, main: &Expr, ty: Option<&RefType>) -> Result<(), TypeError> {
        let ctx = Ctx { rule: "T-MAIN", loc: "main".into() };
        let scope = Scope::default();
        let goal = match ty {
            Some(t) => self.goal_of(t, &scope, &ctx, false)?,
            None => {
                let base = self.base_of(main, &scope, &ctx)?;
                Goal { leaves: self.fresh_leaves("v", &base), pred: TracePred::TRUE }
            }
        };
        self.check(&scope, main, &goal, &ctx)
    }
}

fn ill(ctx: &Ctx, message: String) -> TypeError {
    TypeError::IllFormed { location: ctx.loc.clone(), message }
}

/// Static checks, elaboration and obligation generation.
pub fn obligations(p: &Program) -> Result<Vec<Obligation>, TypeError> {
    checks::check_program(p)?;
    let p = checks::elaborate(p)?;
    let mut c = Checker::new(&p.funs);
    for f in &p.funs {
        c.check_fun(f)?;
    }
    c.check_main(&p.main, p.main_ty.as_ref())?;
    Ok(c.obligations)
}
