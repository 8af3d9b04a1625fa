//! Logic-level helpers: sorts, renaming and sort-checking of predicates, and
//! the reduction of trace-level entailments to per-instant state entailments.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::ast::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sort {
    Int,
    Real,
    Bool,
}

impl Sort {
    pub fn of_leaf(b: &BaseType) -> Sort {
        match b {
            BaseType::Int => Sort::Int,
            BaseType::Float => Sort::Real,
            BaseType::Bool => Sort::Bool,
            BaseType::Product(_) => panic!("product type is not a leaf"),
        }
    }

    pub fn smt(self) -> &'static str {
        match self {
            Sort::Int => "Int",
            Sort::Real => "Real",
            Sort::Bool => "Bool",
        }
    }

    fn numeric(self) -> bool {
        self != Sort::Bool
    }
}

/// Uninterpreted function signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunSig {
    pub args: Vec<Sort>,
    pub ret: Sort,
}

/// Sorts of the logic constants and functions an obligation mentions.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Signature {
    pub vars: BTreeMap<String, Sort>,
    pub funs: BTreeMap<String, FunSig>,
}

impl Signature {
    /// Restriction to the given symbols.
    pub fn restrict(&self, syms: &BTreeSet<String>) -> Signature {
        Signature {
            vars: self.vars.iter().filter(|(k, _)| syms.contains(*k)).map(|(k, v)| (k.clone(), *v)).collect(),
            funs: self.funs.iter().filter(|(k, _)| syms.contains(*k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }
}

// ------------------------------------------------------------------ symbols

pub fn term_symbols(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Int(_) | Term::Real(_) | Term::Bool(_) => {}
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::Neg(a) => term_symbols(a, out),
        Term::Arith(_, a, b) => {
            term_symbols(a, out);
            term_symbols(b, out);
        }
        Term::App(f, args) => {
            out.insert(f.clone());
            args.iter().for_each(|a| term_symbols(a, out));
        }
        Term::Ite(c, a, b) => {
            state_symbols(c, out);
            term_symbols(a, out);
            term_symbols(b, out);
        }
        Term::Pred(p) => state_symbols(p, out),
    }
}

pub fn state_symbols(p: &StatePred, out: &mut BTreeSet<String>) {
    match p {
        StatePred::True | StatePred::False => {}
        StatePred::Atom(t) => term_symbols(t, out),
        StatePred::Cmp(_, a, b) => {
            term_symbols(a, out);
            term_symbols(b, out);
        }
        StatePred::Not(a) => state_symbols(a, out),
        StatePred::And(a, b) | StatePred::Or(a, b) | StatePred::Implies(a, b) => {
            state_symbols(a, out);
            state_symbols(b, out);
        }
    }
}

// ----------------------------------------------------------------- renaming

/// Replaces every variable and function name through `f`.
pub fn rename_term(t: &Term, f: &mut dyn FnMut(&str, bool) -> Result<Term, String>) -> Result<Term, String> {
    Ok(match t {
        Term::Int(_) | Term::Real(_) | Term::Bool(_) => t.clone(),
        Term::Var(x) => f(x, false)?,
        Term::Neg(a) => Term::Neg(Box::new(rename_term(a, f)?)),
        Term::Arith(op, a, b) => Term::Arith(*op, Box::new(rename_term(a, f)?), Box::new(rename_term(b, f)?)),
        Term::App(g, args) => {
            let Term::Var(g) = f(g, true)? else { return Err(format!("`{g}` is not a function")) };
            Term::App(g, args.iter().map(|a| rename_term(a, f)).collect::<Result<_, _>>()?)
        }
        Term::Ite(c, a, b) => Term::Ite(
            Box::new(rename_state(c, f)?),
            Box::new(rename_term(a, f)?),
            Box::new(rename_term(b, f)?),
        ),
        Term::Pred(p) => Term::Pred(Box::new(rename_state(p, f)?)),
    })
}

pub fn rename_state(
    p: &StatePred,
    f: &mut dyn FnMut(&str, bool) -> Result<Term, String>,
) -> Result<StatePred, String> {
    Ok(match p {
        StatePred::True | StatePred::False => p.clone(),
        StatePred::Atom(t) => StatePred::Atom(rename_term(t, f)?),
        StatePred::Cmp(op, a, b) => StatePred::Cmp(*op, rename_term(a, f)?, rename_term(b, f)?),
        StatePred::Not(a) => StatePred::Not(Box::new(rename_state(a, f)?)),
        StatePred::And(a, b) => StatePred::And(Box::new(rename_state(a, f)?), Box::new(rename_state(b, f)?)),
        StatePred::Or(a, b) => StatePred::Or(Box::new(rename_state(a, f)?), Box::new(rename_state(b, f)?)),
        StatePred::Implies(a, b) => {
            StatePred::Implies(Box::new(rename_state(a, f)?), Box::new(rename_state(b, f)?))
        }
    })
}

pub fn rename_trace(
    p: &TracePred,
    f: &mut dyn FnMut(&str, bool) -> Result<Term, String>,
) -> Result<TracePred, String> {
    Ok(match p {
        TracePred::State(s) => TracePred::State(rename_state(s, f)?),
        TracePred::Always(a) => TracePred::Always(Box::new(rename_trace(a, f)?)),
        TracePred::Next(a) => TracePred::Next(Box::new(rename_trace(a, f)?)),
        TracePred::And(a, b) => TracePred::And(Box::new(rename_trace(a, f)?), Box::new(rename_trace(b, f)?)),
    })
}

// ------------------------------------------------------------ sort checking

fn int_literal(t: &Term) -> Option<i64> {
    match t {
        Term::Int(i) => Some(*i),
        Term::Neg(a) => int_literal(a).and_then(i64::checked_neg),
        _ => None,
    }
}

/// Integer literals are accepted where a real is expected.
fn coerce(t: Term, from: Sort, to: Sort) -> Result<Term, String> {
    if from == to {
        return Ok(t);
    }
    if from == Sort::Int && to == Sort::Real {
        if let Some(i) = int_literal(&t) {
            return Ok(Term::Real(i as f64));
        }
    }
    Err(format!("`{t}` has sort {} where {} is expected", from.smt(), to.smt()))
}

fn unify(a: (Term, Sort), b: (Term, Sort)) -> Result<(Term, Term, Sort), String> {
    let ((ta, sa), (tb, sb)) = (a, b);
    if sa == sb {
        return Ok((ta, tb, sa));
    }
    if sa == Sort::Int && sb == Sort::Real {
        return Ok((coerce(ta, sa, sb)?, tb, sb));
    }
    if sb == Sort::Int && sa == Sort::Real {
        return Ok((ta, coerce(tb, sb, sa)?, sa));
    }
    Err(format!("`{ta}` and `{tb}` have different sorts ({} and {})", sa.smt(), sb.smt()))
}

/// Sort-checks a term, inserting literal coercions.
pub fn sort_term(t: &Term, sig: &Signature) -> Result<(Term, Sort), String> {
    Ok(match t {
        Term::Int(_) => (t.clone(), Sort::Int),
        Term::Real(r) => {
            if !r.is_finite() {
                return Err(format!("non-finite literal {r}"));
            }
            (t.clone(), Sort::Real)
        }
        Term::Bool(_) => (t.clone(), Sort::Bool),
        Term::Var(x) => (t.clone(), *sig.vars.get(x).ok_or_else(|| format!("unknown name `{x}`"))?),
        Term::Neg(a) => {
            let (a, s) = sort_term(a, sig)?;
            if !s.numeric() {
                return Err(format!("cannot negate boolean `{a}`"));
            }
            (Term::Neg(Box::new(a)), s)
        }
        Term::Arith(op, a, b) => {
            let (a, b, s) = unify(sort_term(a, sig)?, sort_term(b, sig)?)?;
            if !s.numeric() {
                return Err(format!("arithmetic on booleans `{a}` and `{b}`"));
            }
            (Term::Arith(*op, Box::new(a), Box::new(b)), s)
        }
        Term::App(f, args) => {
            let fs = sig.funs.get(f).ok_or_else(|| format!("unknown function `{f}`"))?;
            if fs.args.len() != args.len() {
                return Err(format!("`{f}` expects {} argument(s), found {}", fs.args.len(), args.len()));
            }
            let mut out = Vec::new();
            for (a, s) in args.iter().zip(&fs.args) {
                let (a, sa) = sort_term(a, sig)?;
                out.push(coerce(a, sa, *s)?);
            }
            (Term::App(f.clone(), out), fs.ret)
        }
        Term::Ite(c, a, b) => {
            let c = sort_state(c, sig)?;
            let (a, b, s) = unify(sort_term(a, sig)?, sort_term(b, sig)?)?;
            (Term::Ite(Box::new(c), Box::new(a), Box::new(b)), s)
        }
        Term::Pred(p) => (Term::Pred(Box::new(sort_state(p, sig)?)), Sort::Bool),
    })
}

pub fn sort_state(p: &StatePred, sig: &Signature) -> Result<StatePred, String> {
    Ok(match p {
        StatePred::True | StatePred::False => p.clone(),
        StatePred::Atom(t) => {
            let (t, s) = sort_term(t, sig)?;
            if s != Sort::Bool {
                return Err(format!("`{t}` is not a boolean"));
            }
            StatePred::Atom(t)
        }
        StatePred::Cmp(op, a, b) => {
            let (a, b, s) = unify(sort_term(a, sig)?, sort_term(b, sig)?)?;
            if !s.numeric() && !matches!(op, CmpOp::Eq | CmpOp::Ne) {
                return Err(format!("`{}` on booleans", op.symbol()));
            }
            StatePred::Cmp(*op, a, b)
        }
        StatePred::Not(a) => StatePred::Not(Box::new(sort_state(a, sig)?)),
        StatePred::And(a, b) => StatePred::And(Box::new(sort_state(a, sig)?), Box::new(sort_state(b, sig)?)),
        StatePred::Or(a, b) => StatePred::Or(Box::new(sort_state(a, sig)?), Box::new(sort_state(b, sig)?)),
        StatePred::Implies(a, b) => {
            StatePred::Implies(Box::new(sort_state(a, sig)?), Box::new(sort_state(b, sig)?))
        }
    })
}

pub fn sort_trace(p: &TracePred, sig: &Signature) -> Result<TracePred, String> {
    Ok(match p {
        TracePred::State(s) => TracePred::State(sort_state(s, sig)?),
        TracePred::Always(a) => TracePred::Always(Box::new(sort_trace(a, sig)?)),
        TracePred::Next(a) => TracePred::Next(Box::new(sort_trace(a, sig)?)),
        TracePred::And(a, b) => TracePred::And(Box::new(sort_trace(a, sig)?), Box::new(sort_trace(b, sig)?)),
    })
}

// ----------------------------------------------------------- ackermannize

struct Ack<'s> {
    sig: &'s Signature,
    apps: Vec<(String, String, Vec<Term>)>,
    index: BTreeMap<String, usize>,
}

impl Ack<'_> {
    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::Int(_) | Term::Real(_) | Term::Bool(_) | Term::Var(_) => t.clone(),
            Term::Neg(a) => Term::Neg(Box::new(self.term(a))),
            Term::Arith(op, a, b) => Term::Arith(*op, Box::new(self.term(a)), Box::new(self.term(b))),
            Term::App(f, args) => {
                let args: Vec<Term> = args.iter().map(|a| self.term(a)).collect();
                let key = Term::App(f.clone(), args.clone()).to_string();
                let i = match self.index.get(&key) {
                    Some(i) => *i,
                    None => {
                        let name = format!("{f}@{}", self.apps.len());
                        self.apps.push((name, f.clone(), args));
                        self.index.insert(key, self.apps.len() - 1);
                        self.apps.len() - 1
                    }
                };
                Term::Var(self.apps[i].0.clone())
            }
            Term::Ite(c, a, b) => Term::Ite(Box::new(self.state(c)), Box::new(self.term(a)), Box::new(self.term(b))),
            Term::Pred(p) => Term::Pred(Box::new(self.state(p))),
        }
    }

    fn state(&mut self, p: &StatePred) -> StatePred {
        match p {
            StatePred::True | StatePred::False => p.clone(),
            StatePred::Atom(t) => StatePred::Atom(self.term(t)),
            StatePred::Cmp(op, a, b) => StatePred::Cmp(*op, self.term(a), self.term(b)),
            StatePred::Not(a) => StatePred::Not(Box::new(self.state(a))),
            StatePred::And(a, b) => StatePred::And(Box::new(self.state(a)), Box::new(self.state(b))),
            StatePred::Or(a, b) => StatePred::Or(Box::new(self.state(a)), Box::new(self.state(b))),
            StatePred::Implies(a, b) => StatePred::Implies(Box::new(self.state(a)), Box::new(self.state(b))),
        }
    }
}

/// Replaces each distinct function application by a fresh constant and adds
/// functional-consistency constraints, giving an equisatisfiable
/// quantifier-free formula without uninterpreted functions. Nonlinear
/// arithmetic engines handle the result far better.
pub fn ackermannize(
    assumptions: &[StatePred],
    goal: &StatePred,
    sig: &Signature,
) -> (Vec<StatePred>, StatePred, Signature) {
    let mut ack = Ack { sig, apps: Vec::new(), index: BTreeMap::new() };
    let mut hyps: Vec<StatePred> = assumptions.iter().map(|a| ack.state(a)).collect();
    let goal = ack.state(goal);
    let mut out = Signature { vars: sig.vars.clone(), funs: BTreeMap::new() };
    for (name, f, _) in &ack.apps {
        let ret = ack.sig.funs.get(f).map(|s| s.ret).unwrap_or(Sort::Real);
        out.vars.insert(name.clone(), ret);
    }
    for (i, (ci, fi, ai)) in ack.apps.iter().enumerate() {
        for (cj, fj, aj) in &ack.apps[i + 1..] {
            if fi != fj {
                continue;
            }
            let same_args = StatePred::and_all(ai.iter().zip(aj).map(|(x, y)| StatePred::eq(x.clone(), y.clone())));
            hyps.push(StatePred::implies(same_args, StatePred::eq(Term::Var(ci.clone()), Term::Var(cj.clone()))));
        }
    }
    (hyps, goal, out)
}

// ----------------------------------------------------------------- lowering

/// `next^delay p` or, when `always` is set, `next^delay always p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub delay: usize,
    pub always: bool,
    pub pred: StatePred,
}

/// Normal form of a trace predicate as a conjunction of atoms, using
/// `always (a and b) = always a and always b`, `always next = next always`
/// and `always always = always`.
pub fn atoms(p: &TracePred) -> Vec<Atom> {
    let mut out = Vec::new();
    fn go(p: &TracePred, delay: usize, always: bool, out: &mut Vec<Atom>) {
        match p {
            TracePred::State(StatePred::True) => {}
            TracePred::State(s) => out.push(Atom { delay, always, pred: s.clone() }),
            TracePred::And(a, b) => {
                go(a, delay, always, out);
                go(b, delay, always, out);
            }
            TracePred::Next(a) => go(a, delay + 1, always, out),
            TracePred::Always(a) => go(a, delay, true, out),
        }
    }
    go(p, 0, false, &mut out);
    out
}

/// Which instants a lowered obligation covers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Instants {
    At(usize),
    /// Every instant strictly after the given one.
    After(usize),
    /// The given instant and every later one.
    From(usize),
}

impl std::fmt::Display for Instants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Instants::At(n) => write!(f, "instant {n}"),
            Instants::After(n) => write!(f, "instants > {n}"),
            Instants::From(n) => write!(f, "instants >= {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lowered {
    pub instants: Instants,
    pub assumptions: Vec<StatePred>,
    pub goal: StatePred,
}

/// Splits a goal into conjuncts, distributing implications over
/// conjunctions in their conclusion.
pub fn split_goal(p: &StatePred) -> Vec<StatePred> {
    match p {
        StatePred::True => vec![],
        StatePred::And(a, b) => {
            let mut v = split_goal(a);
            v.extend(split_goal(b));
            v
        }
        StatePred::Implies(q, c) => split_goal(c)
            .into_iter()
            .map(|c| StatePred::implies((**q).clone(), c))
            .collect(),
        p => vec![p.clone()],
    }
}

/// Keeps the assumptions transitively sharing a symbol with the goal.
pub fn cone_of_influence(assumptions: Vec<StatePred>, goal: &StatePred) -> Vec<StatePred> {
    let mut syms = BTreeSet::new();
    state_symbols(goal, &mut syms);
    let with_syms: Vec<(StatePred, BTreeSet<String>)> = assumptions
        .into_iter()
        .map(|a| {
            let mut s = BTreeSet::new();
            state_symbols(&a, &mut s);
            (a, s)
        })
        .collect();
    let mut keep = vec![false; with_syms.len()];
    loop {
        let mut changed = false;
        for (i, (_, s)) in with_syms.iter().enumerate() {
            // Symbol-free assumptions (`false`, say) always matter.
            if !keep[i] && (s.is_empty() || !s.is_disjoint(&syms)) {
                keep[i] = true;
                syms.extend(s.iter().cloned());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    with_syms.into_iter().zip(keep).filter(|(_, k)| *k).map(|((a, _), _)| a).collect()
}

fn literal_binding(p: &StatePred) -> Option<(&str, &Term)> {
    let StatePred::Cmp(CmpOp::Eq, a, b) = p else { return None };
    let is_lit = |t: &Term| matches!(t, Term::Int(_) | Term::Real(_) | Term::Bool(_)) || int_literal(t).is_some();
    match (a, b) {
        (Term::Var(x), t) if is_lit(t) => Some((x, t)),
        (t, Term::Var(x)) if is_lit(t) => Some((x, t)),
        _ => None,
    }
}

/// Substitutes names that an assumption equates to a literal. The defining
/// equalities are kept, so models still assign those names.
pub fn propagate_constants(mut assumptions: Vec<StatePred>, mut goal: StatePred) -> (Vec<StatePred>, StatePred) {
    loop {
        let mut consts: BTreeMap<String, Term> = BTreeMap::new();
        let mut defining = BTreeSet::new();
        for (i, a) in assumptions.iter().enumerate() {
            if let Some((x, t)) = literal_binding(a) {
                if !consts.contains_key(x) {
                    consts.insert(x.to_string(), t.clone());
                    defining.insert(i);
                }
            }
        }
        let mut changed = false;
        let mut subst = |x: &str, is_fun: bool| -> Result<Term, String> {
            match consts.get(x) {
                Some(t) if !is_fun => {
                    changed = true;
                    Ok(t.clone())
                }
                _ => Ok(Term::Var(x.to_string())),
            }
        };
        for (i, a) in assumptions.iter_mut().enumerate() {
            if !defining.contains(&i) {
                *a = rename_state(a, &mut subst).expect("substitution is total");
            }
        }
        goal = rename_state(&goal, &mut subst).expect("substitution is total");
        if !changed {
            return (assumptions, goal);
        }
    }
}

/// A symbol-free assumption that holds; dropping it only strengthens the
/// obligation.
fn ground_true(p: &StatePred) -> bool {
    let mut syms = BTreeSet::new();
    state_symbols(p, &mut syms);
    syms.is_empty() && crate::temporal::eval_state(p, &BTreeMap::<String, Value>::new()) == Ok(true)
}

/// Reduces `assumptions |= goal` over traces to entailments between state
/// predicates, one per instant class: each instant up to the deepest `next`
/// and one for all later instants.
pub fn lower(assumptions: &[TracePred], goal: &TracePred, max_depth: usize) -> Result<Vec<Lowered>, String> {
    let hyps: Vec<Atom> = assumptions.iter().flat_map(atoms).collect();
    let goals = atoms(goal);
    let horizon = hyps.iter().chain(&goals).map(|a| a.delay).max().unwrap_or(0);
    if horizon > max_depth {
        return Err(format!("`next` nested {horizon} deep exceeds the limit of {max_depth}"));
    }
    let active = |inst: &Instants| -> Vec<StatePred> {
        hyps.iter()
            .filter(|a| match inst {
                Instants::At(n) => (a.always && a.delay <= *n) || (!a.always && a.delay == *n),
                Instants::After(_) | Instants::From(_) => a.always,
            })
            .map(|a| a.pred.clone())
            .collect()
    };
    let mut out: Vec<Lowered> = Vec::new();
    let mut seen: BTreeMap<(Vec<String>, String), usize> = BTreeMap::new();
    for g in &goals {
        let mut classes: Vec<Instants> = if g.always {
            (g.delay..=horizon).map(Instants::At).collect()
        } else {
            vec![Instants::At(g.delay)]
        };
        if g.always {
            classes.push(Instants::After(horizon));
        }
        for inst in classes {
            for conj in split_goal(&g.pred) {
                let (hs, conj) = propagate_constants(active(&inst), conj);
                let mut hs = cone_of_influence(hs, &conj);
                let mut shown = BTreeSet::new();
                hs.retain(|h| !ground_true(h) && shown.insert(h.to_string()));
                let mut key: Vec<String> = hs.iter().map(|h| h.to_string()).collect();
                key.sort();
                key.dedup();
                match seen.get(&(key.clone(), conj.to_string())) {
                    None => {
                        seen.insert((key, conj.to_string()), out.len());
                        out.push(Lowered { instants: inst.clone(), assumptions: hs, goal: conj });
                    }
                    Some(&i) => {
                        // the last instant and the ones after it need the same proof
                        if let (Instants::At(n), Instants::After(m)) = (&out[i].instants, &inst) {
                            if n == m {
                                out[i].instants = Instants::From(*n);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_state_pred, parse_trace_pred};

    fn tp(s: &str) -> TracePred {
        parse_trace_pred(s).unwrap()
    }

    #[test]
    fn normal_form() {
        let a = atoms(&tp("always (p and next q) and next always r"));
        let shown: Vec<(usize, bool, String)> = a.iter().map(|a| (a.delay, a.always, a.pred.to_string())).collect();
        assert_eq!(shown, vec![(0, true, "p".into()), (1, true, "q".into()), (1, true, "r".into())]);
    }

    #[test]
    fn counter_lowering_is_one_obligation() {
        let hyps = [tp("always (x >= 0)"), tp("always (w = x + 1)")];
        let l = lower(&hyps, &tp("always (w >= 0)"), 16).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l[0].assumptions.len(), 2);
    }

    #[test]
    fn instants_before_horizon_are_separate() {
        let hyps = [tp("x = 0 and next always (x = 1)")];
        let l = lower(&hyps, &tp("always (x >= 0)"), 16).unwrap();
        // the point values are propagated into the goal, which leaves the
        // defining equalities outside its cone
        let shown: Vec<String> =
            l.iter().map(|l| format!("{}: {} |- {}", l.instants, l.assumptions.len(), l.goal)).collect();
        assert_eq!(shown, vec!["instant 0: 0 |- 0 >= 0", "instants >= 1: 0 |- 1 >= 0"]);
    }

    #[test]
    fn cone_prunes_unrelated() {
        let hs = vec![parse_state_pred("a > 0").unwrap(), parse_state_pred("b = a").unwrap(), parse_state_pred("c > 0").unwrap()];
        let kept = cone_of_influence(hs, &parse_state_pred("b > 0").unwrap());
        assert_eq!(kept.len(), 2);
    }

    #[test]
    fn goal_splitting() {
        let g = parse_state_pred("c => (a > 0 and b > 0)").unwrap();
        assert_eq!(split_goal(&g).len(), 2);
    }

    #[test]
    fn depth_limit() {
        assert!(lower(&[], &tp("next next next (x = 0)"), 2).is_err());
    }

    #[test]
    fn ackermann_constants_replace_applications() {
        let mut sig = Signature::default();
        sig.vars.insert("x".into(), Sort::Int);
        sig.vars.insert("y".into(), Sort::Int);
        sig.funs.insert("f".into(), FunSig { args: vec![Sort::Int], ret: Sort::Int });
        let h = parse_state_pred("f x >= 0").unwrap();
        let g = parse_state_pred("f y >= 0 or f (f x) = 1").unwrap();
        let (hs, g2, sig2) = ackermannize(&[h], &g, &sig);
        assert!(sig2.funs.is_empty());
        assert_eq!(sig2.vars.len(), 5);
        // One original assumption plus three consistency constraints.
        assert_eq!(hs.len(), 4);
        assert_eq!(g2.to_string(), "f@1 >= 0 or f@2 = 1");
    }

    #[test]
    fn constants_propagate_through_chains() {
        let hs = vec![
            parse_state_pred("a = 2").unwrap(),
            parse_state_pred("b = a").unwrap(),
            parse_state_pred("c = b * b").unwrap(),
        ];
        let (hs, g) = propagate_constants(hs, parse_state_pred("c > a").unwrap());
        assert_eq!(hs[2].to_string(), "c = 2 * 2");
        assert_eq!(g.to_string(), "c > 2");
    }

    #[test]
    fn literal_coercion() {
        let mut sig = Signature::default();
        sig.vars.insert("v".into(), Sort::Real);
        let p = sort_state(&parse_state_pred("v >= -1").unwrap(), &sig).unwrap();
        assert_eq!(p, StatePred::Cmp(CmpOp::Ge, Term::Var("v".into()), Term::Real(-1.0)));
        sig.vars.insert("n".into(), Sort::Int);
        assert!(sort_state(&parse_state_pred("v >= n").unwrap(), &sig).is_err());
    }
}
