//! SMT-LIB encoding of obligations and an external solver driver.
//!
//! Each obligation becomes one script in QF_UFNIRA: declarations, the
//! negated entailment, `(check-sat)` and `(get-model)`. `unsat` means the
//! obligation is valid.

pub mod model;
pub mod sexp;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::Duration;

use wait_timeout::ChildExt;

use crate::ast::*;
use crate::typing::logic::{self, Signature, Sort};
use crate::typing::Obligation;
pub use model::{Model, Replay};
use sexp::Sexp;

pub const LOGIC: &str = "QF_UFNIRA";

pub fn symbol(name: &str) -> String {
    format!("|{name}|")
}

/// SMT-LIB decimal for the shortest representation of `f`; its value is
/// exactly [`model::decimal_rational`].
pub fn real_literal(f: f64) -> String {
    let s = format!("{:e}", f.abs());
    let (mant, exp) = s.split_once('e').expect("exponent");
    let exp: i64 = exp.parse().expect("exponent");
    let digits: String = mant.chars().filter(|c| *c != '.').collect();
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{digits}", "0".repeat((-point) as usize))
    } else if point as usize >= digits.len() {
        format!("{digits}{}.0", "0".repeat(point as usize - digits.len()))
    } else {
        let (i, fr) = digits.split_at(point as usize);
        format!("{i}.{fr}")
    };
    if f < 0.0 && f != 0.0 {
        format!("(- {body})")
    } else {
        body
    }
}

fn int_literal(i: i64) -> String {
    if i < 0 {
        format!("(- {})", (i as i128).unsigned_abs())
    } else {
        i.to_string()
    }
}

struct Encoder<'a> {
    sig: &'a Signature,
}

impl Encoder<'_> {
    fn sort(&self, t: &Term) -> Sort {
        logic::sort_term(t, self.sig).map(|(_, s)| s).unwrap_or(Sort::Int)
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Int(i) => int_literal(*i),
            Term::Real(r) => real_literal(*r),
            Term::Bool(b) => b.to_string(),
            Term::Var(x) => symbol(x),
            Term::Neg(a) => format!("(- {})", self.term(a)),
            Term::Arith(op, a, b) => {
                let head = match op {
                    ArithOp::Add => "+",
                    ArithOp::Sub => "-",
                    ArithOp::Mul => "*",
                    ArithOp::Div if self.sort(a) == Sort::Int => "div",
                    ArithOp::Div => "/",
                };
                format!("({head} {} {})", self.term(a), self.term(b))
            }
            Term::App(f, args) => {
                let args: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                format!("({} {})", symbol(f), args.join(" "))
            }
            Term::Ite(c, a, b) => format!("(ite {} {} {})", self.pred(c), self.term(a), self.term(b)),
            Term::Pred(p) => self.pred(p),
        }
    }

    fn pred(&self, p: &StatePred) -> String {
        match p {
            StatePred::True => "true".into(),
            StatePred::False => "false".into(),
            StatePred::Atom(t) => self.term(t),
            StatePred::Cmp(CmpOp::Ne, a, b) => format!("(not (= {} {}))", self.term(a), self.term(b)),
            StatePred::Cmp(op, a, b) => {
                let head = match op {
                    CmpOp::Eq => "=",
                    CmpOp::Lt => "<",
                    CmpOp::Le => "<=",
                    CmpOp::Gt => ">",
                    CmpOp::Ge => ">=",
                    CmpOp::Ne => unreachable!(),
                };
                format!("({head} {} {})", self.term(a), self.term(b))
            }
            StatePred::Not(a) => format!("(not {})", self.pred(a)),
            StatePred::And(a, b) => format!("(and {} {})", self.pred(a), self.pred(b)),
            StatePred::Or(a, b) => format!("(or {} {})", self.pred(a), self.pred(b)),
            StatePred::Implies(a, b) => format!("(=> {} {})", self.pred(a), self.pred(b)),
        }
    }
}

/// Renders the validity query for `assumptions |= goal`.
pub fn script(sig: &Signature, assumptions: &[StatePred], goal: &StatePred) -> String {
    let enc = Encoder { sig };
    let mut s = String::new();
    s.push_str("(set-option :produce-models true)\n");
    s.push_str(&format!("(set-logic {LOGIC})\n"));
    for (x, sort) in &sig.vars {
        s.push_str(&format!("(declare-const {} {})\n", symbol(x), sort.smt()));
    }
    for (f, fs) in &sig.funs {
        let args: Vec<&str> = fs.args.iter().map(|a| a.smt()).collect();
        s.push_str(&format!("(declare-fun {} ({}) {})\n", symbol(f), args.join(" "), fs.ret.smt()));
    }
    let hyps: Vec<String> = assumptions.iter().map(|a| enc.pred(a)).collect();
    let lhs = match hyps.len() {
        0 => "true".to_string(),
        1 => hyps[0].clone(),
        _ => format!("(and\n    {})", hyps.join("\n    ")),
    };
    s.push_str(&format!("(assert (not (=> {lhs}\n  {})))\n", enc.pred(goal)));
    s.push_str("(check-sat)\n(get-model)\n");
    s
}

/// The script actually sent to the solver for `ob`: applications of
/// program functions are Ackermannized first.
pub fn obligation_script(ob: &Obligation) -> String {
    let (hyps, goal, sig) = logic::ackermannize(&ob.assumptions, &ob.goal, &ob.sig);
    script(&sig, &hyps, &goal)
}

// ------------------------------------------------------------------- solver

#[derive(Debug, Clone, PartialEq)]
pub enum Answer {
    Unsat,
    Sat(Model),
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("cannot run solver `{program}`: {message}")]
    Spawn { program: String, message: String },
    #[error("solver timed out after {0:?}")]
    Timeout(Duration),
    #[error("solver error: {0}")]
    Crash(String),
}

/// Interprets solver output: errors before the answer are fatal, errors
/// after `unsat` or `unknown` come from `(get-model)` and are ignored.
pub fn parse_response(out: &str) -> Result<Answer, SolverError> {
    let items = sexp::parse_all(out).map_err(|e| SolverError::Crash(format!("unreadable output: {e}")))?;
    let mut it = items.iter();
    while let Some(item) = it.next() {
        if item.is_app("error") {
            return Err(SolverError::Crash(error_text(item)));
        }
        match item.atom() {
            Some("unsat") => return Ok(Answer::Unsat),
            Some("unknown") => return Ok(Answer::Unknown("solver returned unknown".into())),
            Some("sat") => {
                return match it.next() {
                    Some(m) if m.is_app("error") => Err(SolverError::Crash(error_text(m))),
                    Some(m) => Model::from_sexp(m).map(Answer::Sat).map_err(|e| SolverError::Crash(e.to_string())),
                    None => Err(SolverError::Crash("`sat` without a model".into())),
                };
            }
            _ => {}
        }
    }
    Err(SolverError::Crash(format!("no answer in output: {}", out.trim())))
}

fn error_text(e: &Sexp) -> String {
    match e.list() {
        Some([_, Sexp::Str(s)]) => s.clone(),
        _ => e.to_string(),
    }
}

/// An SMT-LIB solver reading a script on standard input.
#[derive(Debug, Clone)]
pub struct Solver {
    pub program: PathBuf,
    pub args: Vec<String>,
    pub timeout: Duration,
}

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

impl Solver {
    /// Solver from a command line such as `z3` or `cvc5 --lang=smt2`.
    /// A bare `z3` gets `-in`.
    pub fn from_command(cmd: &str) -> Solver {
        let mut parts = cmd.split_whitespace().map(str::to_string);
        let program = PathBuf::from(parts.next().unwrap_or_else(|| "z3".into()));
        let mut args: Vec<String> = parts.collect();
        if args.is_empty() && program.file_name().is_some_and(|n| n == "z3") {
            args.push("-in".into());
        }
        Solver { program, args, timeout: DEFAULT_TIMEOUT }
    }

    /// `explicit`, else `$MRV_SOLVER`, else `z3` from `PATH`.
    pub fn resolve(explicit: Option<&str>) -> Solver {
        let cmd = explicit.map(str::to_string).or_else(|| std::env::var("MRV_SOLVER").ok()).unwrap_or_else(|| "z3".into());
        Solver::from_command(&cmd)
    }

    pub fn with_timeout(mut self, t: Duration) -> Solver {
        self.timeout = t;
        self
    }

    pub fn run(&self, script: &str) -> Result<Answer, SolverError> {
        let spawn_err = |e: std::io::Error| SolverError::Spawn { program: self.program.display().to_string(), message: e.to_string() };
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(spawn_err)?;
        let mut stdin = child.stdin.take().expect("piped");
        let input = script.to_string();
        let writer = std::thread::spawn(move || {
            let _ = stdin.write_all(input.as_bytes());
        });
        let mut stdout = child.stdout.take().expect("piped");
        let reader = std::thread::spawn(move || {
            let mut s = String::new();
            let _ = stdout.read_to_string(&mut s);
            s
        });
        let mut stderr = child.stderr.take().expect("piped");
        let err_reader = std::thread::spawn(move || {
            let mut s = String::new();
            let _ = stderr.read_to_string(&mut s);
            s
        });
        let status = match child.wait_timeout(self.timeout).map_err(spawn_err)? {
            Some(status) => status,
            None => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(SolverError::Timeout(self.timeout));
            }
        };
        let _ = writer.join();
        let out = reader.join().unwrap_or_default();
        let err = err_reader.join().unwrap_or_default();
        match parse_response(&out) {
            Err(SolverError::Crash(m)) if !status.success() || !err.trim().is_empty() => {
                Err(SolverError::Crash(format!("{m} (exit {status}; stderr: {})", err.trim())))
            }
            r => r,
        }
    }

    pub fn available(&self) -> bool {
        matches!(self.run("(assert false)\n(check-sat)\n"), Ok(Answer::Unsat))
    }
}

/// Writes one script per obligation into `dir`.
pub fn dump(dir: &Path, obligations: &[Obligation]) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    obligations
        .iter()
        .map(|ob| {
            let path = dir.join(format!("obligation-{:03}.smt2", ob.id));
            let header = format!("; {} at {}, {}\n", ob.rule, ob.location, ob.instants);
            std::fs::write(&path, header + &obligation_script(ob))?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        assert_eq!(real_literal(0.1), "0.1");
        assert_eq!(real_literal(15.0), "15.0");
        assert_eq!(real_literal(1.5e20), "150000000000000000000.0");
        assert_eq!(real_literal(-2.5e-3), "(- 0.0025)");
        assert_eq!(real_literal(123.456), "123.456");
        assert_eq!(real_literal(-0.0), "0.0");
        assert_eq!(int_literal(i64::MIN), "(- 9223372036854775808)");
    }

    #[test]
    fn responses() {
        assert_eq!(parse_response("unsat\n(error \"line 9 column 10: model is not available\")\n"), Ok(Answer::Unsat));
        assert!(matches!(parse_response("sat\n(\n  (define-fun x () Int 3)\n)\n"), Ok(Answer::Sat(_))));
        assert!(matches!(parse_response("(error \"unknown constant x\")\nsat\n()"), Err(SolverError::Crash(_))));
        assert!(matches!(parse_response("unknown\n(error \"no model\")"), Ok(Answer::Unknown(_))));
        assert!(parse_response("").is_err());
    }

    #[test]
    fn script_shape() {
        let mut sig = Signature::default();
        sig.vars.insert("x".into(), Sort::Int);
        let g = crate::syntax::parse_state_pred("x / 2 >= 0").unwrap();
        let s = script(&sig, &[crate::syntax::parse_state_pred("x >= 0").unwrap()], &g);
        assert!(s.contains("(declare-const |x| Int)"));
        assert!(s.contains("(div |x| 2)"));
        assert!(s.contains("(check-sat)"));
    }
}
