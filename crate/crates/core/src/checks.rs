//! Static checks run before typing or evaluation: scoping, base types and
//! causality (no instantaneous self-dependence through `let rec`).

use std::collections::BTreeSet;

use crate::ast::*;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StaticError {
    #[error("unbound variable `{name}` in {context}")]
    Unbound { name: Name, context: String },
    #[error("unknown function `{name}` in {context}")]
    UnknownFunction { name: Name, context: String },
    #[error("`{name}` is a function and cannot be used as a value in {context}")]
    FunctionAsValue { name: Name, context: String },
    #[error("function `{0}` is defined twice")]
    DuplicateFunction(Name),
    #[error("function `{name}`: {message}")]
    BadFunction { name: Name, message: String },
    #[error("type error in {context}: {message}")]
    Type { context: String, message: String },
    #[error("causality error: `{name}` is read in the same instant it is defined ({context})")]
    Causality { name: Name, context: String },
}

/// Runs every static check; see [`elaborate`] for the typed result.
pub fn check_program(p: &Program) -> Result<(), StaticError> {
    check_scopes(p)?;
    check_base_types(p)?;
    check_causality(p)
}

// -------------------------------------------------------------------- scopes

pub fn check_scopes(p: &Program) -> Result<(), StaticError> {
    let mut funs: Vec<&str> = Vec::new();
    for f in &p.funs {
        if funs.contains(&f.name.as_str()) {
            return Err(StaticError::DuplicateFunction(f.name.clone()));
        }
        let mut scope: Vec<&str> = f.param.names();
        let ctx = format!("function `{}`", f.name);
        scope_expr(&f.body, &mut scope, &funs, &ctx)?;
        if !f.body.is_pointwise() {
            return Err(StaticError::BadFunction {
                name: f.name.clone(),
                message: "function bodies must not contain `fby` or `let rec`".into(),
            });
        }
        if contains_models(&f.body) {
            return Err(StaticError::BadFunction {
                name: f.name.clone(),
                message: "function bodies must not contain `models`".into(),
            });
        }
        funs.push(&f.name);
    }
    scope_expr(&p.main, &mut Vec::new(), &funs, "main")
}

fn contains_models(e: &Expr) -> bool {
    match e {
        Expr::Models(..) => true,
        Expr::Const(_) | Expr::Var(_) | Expr::App(..) => false,
        Expr::Let(b) | Expr::LetRec(b) => contains_models(&b.rhs) || contains_models(&b.body),
        Expr::Fby(a, b) | Expr::Binary(_, a, b) | Expr::If(_, a, b) => contains_models(a) || contains_models(b),
        Expr::Delay(a) | Expr::Unary(_, a) => contains_models(a),
        Expr::Tuple(es) => es.iter().any(contains_models),
    }
}

fn scope_var<'a>(x: &str, scope: &[&'a str], funs: &[&str], ctx: &str) -> Result<(), StaticError> {
    if scope.contains(&x) {
        Ok(())
    } else if funs.contains(&x) {
        Err(StaticError::FunctionAsValue { name: x.to_string(), context: ctx.to_string() })
    } else {
        Err(StaticError::Unbound { name: x.to_string(), context: ctx.to_string() })
    }
}

fn scope_expr<'a>(e: &'a Expr, scope: &mut Vec<&'a str>, funs: &[&str], ctx: &str) -> Result<(), StaticError> {
    match e {
        Expr::Const(_) => Ok(()),
        Expr::Var(x) => scope_var(x, scope, funs, ctx),
        Expr::App(f, y) => {
            if !funs.contains(&f.as_str()) {
                return Err(StaticError::UnknownFunction { name: f.clone(), context: ctx.to_string() });
            }
            scope_var(y, scope, funs, ctx)
        }
        Expr::Let(b) => {
            scope_expr(&b.rhs, scope, funs, ctx)?;
            let n = scope.len();
            scope.extend(b.pat.names());
            let r = scope_expr(&b.body, scope, funs, ctx);
            scope.truncate(n);
            r
        }
        Expr::LetRec(b) => {
            let n = scope.len();
            scope.extend(b.pat.names());
            let r = scope_expr(&b.rhs, scope, funs, ctx).and_then(|_| scope_expr(&b.body, scope, funs, ctx));
            scope.truncate(n);
            r
        }
        Expr::Fby(a, b) | Expr::Binary(_, a, b) => {
            scope_expr(a, scope, funs, ctx)?;
            scope_expr(b, scope, funs, ctx)
        }
        Expr::Delay(a) | Expr::Unary(_, a) => scope_expr(a, scope, funs, ctx),
        Expr::Tuple(es) => es.iter().try_for_each(|e| scope_expr(e, scope, funs, ctx)),
        Expr::If(c, a, b) => {
            scope_var(c, scope, funs, ctx)?;
            scope_expr(a, scope, funs, ctx)?;
            scope_expr(b, scope, funs, ctx)
        }
        Expr::Models(a, r) => {
            scope_expr(a, scope, funs, ctx)?;
            match &**r {
                Robot::Get(_) => Ok(()),
                Robot::Str(_, x) => scope_expr(x, scope, funs, ctx),
            }
        }
    }
}

// ---------------------------------------------------------------- base types

#[derive(Debug, Clone, PartialEq)]
enum Ty {
    Var(usize),
    Int,
    Float,
    Bool,
    Prod(Vec<Ty>),
}

impl Ty {
    fn from_base(b: &BaseType) -> Ty {
        match b {
            BaseType::Int => Ty::Int,
            BaseType::Float => Ty::Float,
            BaseType::Bool => Ty::Bool,
            BaseType::Product(ts) => Ty::Prod(ts.iter().map(Ty::from_base).collect()),
        }
    }
}

#[derive(Default)]
struct Unifier {
    subst: Vec<Option<Ty>>,
    numeric: Vec<bool>,
    // Types of binders in traversal order, for elaboration.
    binders: Vec<Ty>,
}

impl Unifier {
    fn fresh(&mut self) -> Ty {
        self.subst.push(None);
        self.numeric.push(false);
        Ty::Var(self.subst.len() - 1)
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match t {
            Ty::Var(v) => match &self.subst[*v] {
                Some(t) => self.resolve(t),
                None => t.clone(),
            },
            Ty::Prod(ts) => Ty::Prod(ts.iter().map(|t| self.resolve(t)).collect()),
            t => t.clone(),
        }
    }

    fn occurs(&self, v: usize, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Var(w) => v == w,
            Ty::Prod(ts) => ts.iter().any(|t| self.occurs(v, t)),
            _ => false,
        }
    }

    fn show(&self, t: &Ty) -> String {
        match self.resolve(t) {
            Ty::Var(_) => "_".into(),
            Ty::Int => "int".into(),
            Ty::Float => "float".into(),
            Ty::Bool => "bool".into(),
            Ty::Prod(ts) => {
                let parts: Vec<String> = ts.iter().map(|t| self.show(t)).collect();
                format!("({})", parts.join(" * "))
            }
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty, ctx: &str) -> Result<(), StaticError> {
        let (a, b) = (self.resolve(a), self.resolve(b));
        let mismatch = |u: &Unifier| StaticError::Type {
            context: ctx.to_string(),
            message: format!("expected {}, found {}", u.show(&a), u.show(&b)),
        };
        match (&a, &b) {
            (Ty::Var(x), Ty::Var(y)) if x == y => Ok(()),
            (Ty::Var(x), t) | (t, Ty::Var(x)) => {
                if self.occurs(*x, t) {
                    return Err(mismatch(self));
                }
                if self.numeric[*x] {
                    match t {
                        Ty::Var(y) => self.numeric[*y] = true,
                        Ty::Int | Ty::Float => {}
                        _ => return Err(mismatch(self)),
                    }
                }
                self.subst[*x] = Some(t.clone());
                Ok(())
            }
            (Ty::Int, Ty::Int) | (Ty::Float, Ty::Float) | (Ty::Bool, Ty::Bool) => Ok(()),
            (Ty::Prod(xs), Ty::Prod(ys)) if xs.len() == ys.len() => {
                xs.iter().zip(ys).try_for_each(|(x, y)| self.unify(x, y, ctx))
            }
            _ => Err(mismatch(self)),
        }
    }

    fn require_numeric(&mut self, t: &Ty, ctx: &str) -> Result<(), StaticError> {
        match self.resolve(t) {
            Ty::Int | Ty::Float => Ok(()),
            Ty::Var(v) => {
                self.numeric[v] = true;
                Ok(())
            }
            t => Err(StaticError::Type {
                context: ctx.to_string(),
                message: format!("expected a number, found {}", self.show(&t)),
            }),
        }
    }

    fn require_scalar(&mut self, t: &Ty, ctx: &str) -> Result<(), StaticError> {
        match self.resolve(t) {
            Ty::Prod(_) => Err(StaticError::Type {
                context: ctx.to_string(),
                message: "equality is only defined on scalars".into(),
            }),
            _ => Ok(()),
        }
    }

    /// Binds the names of `pat` to the parts of `t`, splitting type variables
    /// into products as needed.
    fn bind(&mut self, pat: &Pattern, t: &Ty, env: &mut Vec<(Name, Ty)>, ctx: &str) -> Result<(), StaticError> {
        match pat {
            Pattern::Var(x) => {
                env.push((x.clone(), t.clone()));
                Ok(())
            }
            Pattern::Tuple(ps) => {
                let parts: Vec<Ty> = match self.resolve(t) {
                    Ty::Prod(ts) if ts.len() == ps.len() => ts,
                    Ty::Var(_) => {
                        let parts: Vec<Ty> = ps.iter().map(|_| self.fresh()).collect();
                        self.unify(t, &Ty::Prod(parts.clone()), ctx)?;
                        parts
                    }
                    other => {
                        return Err(StaticError::Type {
                            context: ctx.to_string(),
                            message: format!("pattern `{pat}` does not match type {}", self.show(&other)),
                        })
                    }
                };
                ps.iter().zip(&parts).try_for_each(|(p, t)| self.bind(p, t, env, ctx))
            }
        }
    }

    fn value(&mut self, v: &Value) -> Ty {
        match v {
            Value::Int(_) => Ty::Int,
            Value::Float(_) => Ty::Float,
            Value::Bool(_) => Ty::Bool,
            Value::Tuple(vs) => Ty::Prod(vs.iter().map(|v| self.value(v)).collect()),
            Value::Nil => self.fresh(),
        }
    }
}

fn check_reftype(t: &RefType, ctx: &str) -> Result<(), StaticError> {
    if let RefType::Refined { binder, base, .. } = t {
        if binder.bind_types(base).is_none() {
            return Err(StaticError::Type {
                context: ctx.to_string(),
                message: format!("refinement binder `{binder}` does not match base type {base}"),
            });
        }
    }
    Ok(())
}

struct Infer<'p> {
    u: Unifier,
    funs: &'p [FunDef],
}

impl Infer<'_> {
    fn lookup(env: &[(Name, Ty)], x: &str, ctx: &str) -> Result<Ty, StaticError> {
        env.iter()
            .rev()
            .find(|(n, _)| n == x)
            .map(|(_, t)| t.clone())
            .ok_or_else(|| StaticError::Unbound { name: x.to_string(), context: ctx.to_string() })
    }

    fn fun(&self, f: &str, ctx: &str) -> Result<&FunDef, StaticError> {
        self.funs
            .iter()
            .find(|d| d.name == f)
            .ok_or_else(|| StaticError::UnknownFunction { name: f.to_string(), context: ctx.to_string() })
    }

    fn binding(&mut self, b: &Binding, rec: bool, env: &mut Vec<(Name, Ty)>, ctx: &str) -> Result<Ty, StaticError> {
        let bctx = format!("{ctx}, binding `{}`", b.pat);
        let t = match &b.ty {
            Some(ty) => {
                check_reftype(ty, &bctx)?;
                Ty::from_base(ty.base())
            }
            None => self.u.fresh(),
        };
        self.u.binders.push(t.clone());
        for v in &b.history {
            let vt = self.u.value(v);
            self.u.unify(&t, &vt, &bctx)?;
        }
        let n = env.len();
        if rec {
            self.u.bind(&b.pat, &t, env, &bctx)?;
            let rt = self.expr(&b.rhs, env, &bctx)?;
            self.u.unify(&t, &rt, &bctx)?;
        } else {
            let rt = self.expr(&b.rhs, env, &bctx)?;
            self.u.unify(&t, &rt, &bctx)?;
            self.u.bind(&b.pat, &t, env, &bctx)?;
        }
        let r = self.expr(&b.body, env, ctx);
        env.truncate(n);
        r
    }

    fn expr(&mut self, e: &Expr, env: &mut Vec<(Name, Ty)>, ctx: &str) -> Result<Ty, StaticError> {
        Ok(match e {
            Expr::Const(v) => self.u.value(v),
            Expr::Var(x) => Self::lookup(env, x, ctx)?,
            Expr::Let(b) => self.binding(b, false, env, ctx)?,
            Expr::LetRec(b) => self.binding(b, true, env, ctx)?,
            Expr::App(f, y) => {
                let d = self.fun(f, ctx)?;
                let (arg, ret) = (Ty::from_base(d.arg.base()), Ty::from_base(d.ret.base()));
                let yt = Self::lookup(env, y, ctx)?;
                self.u.unify(&arg, &yt, &format!("{ctx}, argument of `{f}`"))?;
                ret
            }
            Expr::Fby(a, b) => {
                let ta = self.expr(a, env, ctx)?;
                let tb = self.expr(b, env, ctx)?;
                self.u.unify(&ta, &tb, &format!("{ctx}, operands of `fby`"))?;
                ta
            }
            Expr::Delay(a) => self.expr(a, env, ctx)?,
            Expr::Tuple(es) => Ty::Prod(es.iter().map(|e| self.expr(e, env, ctx)).collect::<Result<_, _>>()?),
            Expr::If(c, a, b) => {
                let tc = Self::lookup(env, c, ctx)?;
                self.u.unify(&Ty::Bool, &tc, &format!("{ctx}, condition `{c}`"))?;
                let ta = self.expr(a, env, ctx)?;
                let tb = self.expr(b, env, ctx)?;
                self.u.unify(&ta, &tb, &format!("{ctx}, branches of `if {c}`"))?;
                ta
            }
            Expr::Models(a, r) => {
                let ta = self.expr(a, env, ctx)?;
                if let Robot::Str(_, x) = &**r {
                    self.expr(x, env, ctx)?;
                }
                ta
            }
            Expr::Unary(UnOp::Neg, a) => {
                let t = self.expr(a, env, ctx)?;
                self.u.require_numeric(&t, &format!("{ctx}, operand of `-`"))?;
                t
            }
            Expr::Unary(UnOp::Not, a) => {
                let t = self.expr(a, env, ctx)?;
                self.u.unify(&Ty::Bool, &t, &format!("{ctx}, operand of `not`"))?;
                Ty::Bool
            }
            Expr::Binary(op, a, b) => {
                let octx = format!("{ctx}, operands of `{}`", op.symbol());
                let ta = self.expr(a, env, ctx)?;
                let tb = self.expr(b, env, ctx)?;
                if op.is_logic() {
                    self.u.unify(&Ty::Bool, &ta, &octx)?;
                    self.u.unify(&Ty::Bool, &tb, &octx)?;
                    return Ok(Ty::Bool);
                }
                self.u.unify(&ta, &tb, &octx)?;
                if op.is_arith() {
                    self.u.require_numeric(&ta, &octx)?;
                    ta
                } else {
                    if matches!(op, BinOp::Eq | BinOp::Ne) {
                        self.u.require_scalar(&ta, &octx)?;
                    } else {
                        self.u.require_numeric(&ta, &octx)?;
                    }
                    Ty::Bool
                }
            }
        })
    }

    fn to_base(&self, t: &Ty, what: &str) -> Result<BaseType, StaticError> {
        Ok(match self.u.resolve(t) {
            Ty::Int => BaseType::Int,
            Ty::Float => BaseType::Float,
            Ty::Bool => BaseType::Bool,
            Ty::Prod(ts) => BaseType::Product(ts.iter().map(|t| self.to_base(t, what)).collect::<Result<_, _>>()?),
            Ty::Var(v) if self.u.numeric[v] => BaseType::Int,
            Ty::Var(_) => {
                return Err(StaticError::Type {
                    context: what.to_string(),
                    message: "cannot infer a base type".into(),
                })
            }
        })
    }
}

pub fn check_base_types(p: &Program) -> Result<(), StaticError> {
    elaborate(p).map(|_| ())
}

/// Infers base types and returns a copy of the program in which every
/// unannotated binder carries its inferred base type.
pub fn elaborate(p: &Program) -> Result<Program, StaticError> {
    let mut funs = Vec::new();
    for (i, f) in p.funs.iter().enumerate() {
        let ctx = format!("function `{}`", f.name);
        check_reftype(&f.arg, &ctx)?;
        check_reftype(&f.ret, &ctx)?;
        let mut inf = Infer { u: Unifier::default(), funs: &p.funs[..i] };
        let mut env = Vec::new();
        inf.u.bind(&f.param, &Ty::from_base(f.arg.base()), &mut env, &ctx)?;
        let t = inf.expr(&f.body, &mut env, &ctx)?;
        inf.u.unify(&Ty::from_base(f.ret.base()), &t, &format!("{ctx}, result"))?;
        let body = fill(&f.body, &inf, &mut 0)?;
        funs.push(FunDef { body, ..f.clone() });
    }
    let mut inf = Infer { u: Unifier::default(), funs: &p.funs };
    let t = inf.expr(&p.main, &mut Vec::new(), "main")?;
    if let Some(mt) = &p.main_ty {
        check_reftype(mt, "main annotation")?;
        inf.u.unify(&Ty::from_base(mt.base()), &t, "main annotation")?;
    }
    let main = fill(&p.main, &inf, &mut 0)?;
    Ok(Program { funs, main_ty: p.main_ty.clone(), main })
}

/// Base type of an expression under the given binder types; used by the
/// verifier on pointwise subterms.
pub fn infer_expr(e: &Expr, env: &[(Name, BaseType)], funs: &[FunDef]) -> Result<BaseType, StaticError> {
    let mut inf = Infer { u: Unifier::default(), funs };
    let mut tenv: Vec<(Name, Ty)> = env.iter().map(|(n, b)| (n.clone(), Ty::from_base(b))).collect();
    let t = inf.expr(e, &mut tenv, "expression")?;
    inf.to_base(&t, "expression")
}

fn fill(e: &Expr, inf: &Infer<'_>, k: &mut usize) -> Result<Expr, StaticError> {
    let go = |b: &Binding, k: &mut usize| -> Result<Binding, StaticError> {
        let t = inf.u.binders[*k].clone();
        *k += 1;
        let ty = match &b.ty {
            Some(ty) => ty.clone(),
            None => RefType::Base(inf.to_base(&t, &format!("binding `{}`", b.pat))?),
        };
        let rhs = fill(&b.rhs, inf, k)?;
        let body = fill(&b.body, inf, k)?;
        Ok(Binding { history: b.history.clone(), pat: b.pat.clone(), ty: Some(ty), rhs, body })
    };
    Ok(match e {
        Expr::Let(b) => Expr::Let(Box::new(go(b, k)?)),
        Expr::LetRec(b) => Expr::LetRec(Box::new(go(b, k)?)),
        Expr::Const(_) | Expr::Var(_) | Expr::App(..) => e.clone(),
        Expr::Fby(a, b) => Expr::Fby(Box::new(fill(a, inf, k)?), Box::new(fill(b, inf, k)?)),
        Expr::Binary(op, a, b) => Expr::Binary(*op, Box::new(fill(a, inf, k)?), Box::new(fill(b, inf, k)?)),
        Expr::If(c, a, b) => Expr::If(c.clone(), Box::new(fill(a, inf, k)?), Box::new(fill(b, inf, k)?)),
        Expr::Delay(a) => Expr::Delay(Box::new(fill(a, inf, k)?)),
        Expr::Unary(op, a) => Expr::Unary(*op, Box::new(fill(a, inf, k)?)),
        Expr::Tuple(es) => Expr::Tuple(es.iter().map(|e| fill(e, inf, k)).collect::<Result<_, _>>()?),
        Expr::Models(a, r) => {
            let a = fill(a, inf, k)?;
            let r = match &**r {
                Robot::Get(key) => Robot::Get(key.clone()),
                Robot::Str(key, x) => Robot::Str(key.clone(), fill(x, inf, k)?),
            };
            Expr::Models(Box::new(a), Box::new(r))
        }
    })
}

// ----------------------------------------------------------------- causality

pub fn check_causality(p: &Program) -> Result<(), StaticError> {
    for f in &p.funs {
        inst_deps(&f.body, &format!("function `{}`", f.name))?;
    }
    inst_deps(&p.main, "main").map(|_| ())
}

/// Variables read at the current instant by evaluating `e`.
fn inst_deps(e: &Expr, ctx: &str) -> Result<BTreeSet<Name>, StaticError> {
    Ok(match e {
        Expr::Const(_) | Expr::Delay(_) => BTreeSet::new(),
        Expr::Var(x) | Expr::App(_, x) => BTreeSet::from([x.clone()]),
        Expr::Let(b) => {
            let mut d = inst_deps(&b.rhs, ctx)?;
            let mut body = inst_deps(&b.body, ctx)?;
            for n in b.pat.names() {
                body.remove(n);
            }
            d.extend(body);
            d
        }
        Expr::LetRec(b) => {
            let mut d = inst_deps(&b.rhs, ctx)?;
            if let Some(n) = b.pat.names().into_iter().find(|n| d.contains(*n)) {
                return Err(StaticError::Causality {
                    name: n.to_string(),
                    context: format!("{ctx}, `let rec {}`", b.pat),
                });
            }
            d.extend(inst_deps(&b.body, ctx)?);
            for n in b.pat.names() {
                d.remove(n);
            }
            d
        }
        Expr::Fby(a, _) | Expr::Unary(_, a) => inst_deps(a, ctx)?,
        Expr::Binary(_, a, b) => {
            let mut d = inst_deps(a, ctx)?;
            d.extend(inst_deps(b, ctx)?);
            d
        }
        Expr::If(c, a, b) => {
            let mut d = inst_deps(a, ctx)?;
            d.extend(inst_deps(b, ctx)?);
            d.insert(c.clone());
            d
        }
        Expr::Tuple(es) => {
            let mut d = BTreeSet::new();
            for e in es {
                d.extend(inst_deps(e, ctx)?);
            }
            d
        }
        Expr::Models(a, r) => {
            let mut d = inst_deps(a, ctx)?;
            if let Robot::Str(_, x) = &**r {
                d.extend(inst_deps(x, ctx)?);
            }
            d
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn check(src: &str) -> Result<(), StaticError> {
        check_program(&parse_program(src).unwrap())
    }

    #[test]
    fn accepts_counter_and_pitfall() {
        check("let rec x : {v:int | always (v >= 0)} = 0 fby x + 1 in x").unwrap();
        check("let rec x = (let y = 0 fby 1 in (0 fby x + y)) in x").unwrap();
    }

    #[test]
    fn scope_errors() {
        assert!(matches!(check("let x = y in x"), Err(StaticError::Unbound { .. })));
        assert!(matches!(check("f x"), Err(StaticError::UnknownFunction { .. })));
        assert!(matches!(
            check("let f (x : int) : int = x;; let y = f in y"),
            Err(StaticError::FunctionAsValue { .. })
        ));
        assert!(matches!(
            check("let f (x : int) : int = 0 fby x;; 1"),
            Err(StaticError::BadFunction { .. })
        ));
    }

    #[test]
    fn base_type_errors() {
        assert!(matches!(check("1 + 2.0"), Err(StaticError::Type { .. })));
        assert!(matches!(check("let c = 1 in if c then 1 else 2"), Err(StaticError::Type { .. })));
        assert!(matches!(check("let x : float = 1 in x"), Err(StaticError::Type { .. })));
        assert!(matches!(check("let (a, b) = 1 in a"), Err(StaticError::Type { .. })));
        assert!(matches!(check("(1, 2) = (1, 2)"), Err(StaticError::Type { .. })));
        check("let (a, b) = (1, true) in if b then a else 0").unwrap();
    }

    #[test]
    fn unannotated_rec_is_inferred() {
        let p = parse_program("let rec (f, l) = (0.0, 1.0) fby (f, l + f) in l").unwrap();
        let e = elaborate(&p).unwrap();
        let Expr::LetRec(b) = &e.main else { panic!() };
        assert_eq!(b.ty, Some(RefType::Base(BaseType::Product(vec![BaseType::Float, BaseType::Float]))));
    }

    #[test]
    fn causality_errors() {
        assert!(matches!(check("let rec x = x + 1 in x"), Err(StaticError::Causality { .. })));
        assert!(matches!(check("let rec x = (let y = x in y + 1) in x"), Err(StaticError::Causality { .. })));
        assert!(matches!(check("let rec x = x fby 1 in x"), Err(StaticError::Causality { .. })));
        assert!(matches!(check("let rec (a, b) = (0 fby b, a + 1) in a"), Err(StaticError::Causality { .. })));
        check("let rec (a, b) = (0, 1) fby (b, a) in a").unwrap();
    }
}
