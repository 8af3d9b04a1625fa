//! Refinement type checking. [`obligations`] turns a program into
//! verification conditions; [`verify_program`] discharges them with an SMT
//! solver and replays any countermodel.

mod check;
pub mod logic;

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

pub use check::{obligations, uf_name, Obligation, TypeError, MAX_NEXT_DEPTH};
pub use logic::{Instants, Signature, Sort};

use crate::ast::Program;
use crate::smt::{self, model, Answer, Replay, Solver, SolverError};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Outcome {
    Valid,
    /// The solver found a countermodel; `model` maps logic names to values.
    Invalid { model: BTreeMap<String, String>, replay: Replay },
    Unknown { reason: String },
    Timeout,
    Error { message: String },
}

impl Outcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, Outcome::Valid)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Valid => "valid",
            Outcome::Invalid { .. } => "invalid",
            Outcome::Unknown { .. } => "unknown",
            Outcome::Timeout => "timeout",
            Outcome::Error { .. } => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObligationReport {
    pub id: usize,
    pub rule: String,
    pub location: String,
    pub instants: String,
    pub assumptions: Vec<String>,
    pub goal: String,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub verified: bool,
    pub obligations: Vec<ObligationReport>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &ObligationReport> {
        self.obligations.iter().filter(|o| !o.outcome.is_valid())
    }
}

pub struct VerifyOptions {
    pub solver: Solver,
    /// Directory receiving one `.smt2` script per obligation.
    pub smt_dump: Option<PathBuf>,
    /// Solver processes run at once; obligations are independent.
    pub jobs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        VerifyOptions { solver: Solver::resolve(None), smt_dump: None, jobs }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("cannot write SMT dump: {0}")]
    Dump(#[from] std::io::Error),
}

/// Solves one obligation.
pub fn discharge(ob: &Obligation, solver: &Solver) -> Outcome {
    let (hyps, goal, sig) = logic::ackermannize(&ob.assumptions, &ob.goal, &ob.sig);
    match solver.run(&smt::obligation_script(ob)) {
        Ok(Answer::Unsat) => Outcome::Valid,
        Ok(Answer::Sat(m)) => {
            let replay = model::replay(&m, &sig, &hyps, &goal);
            Outcome::Invalid { model: m.assignments(), replay }
        }
        Ok(Answer::Unknown(reason)) => Outcome::Unknown { reason },
        Err(SolverError::Timeout(_)) => Outcome::Timeout,
        Err(e) => Outcome::Error { message: e.to_string() },
    }
}

/// Solves every obligation, at most `jobs` at a time, in order.
pub fn discharge_all(obs: &[Obligation], solver: &Solver, jobs: usize) -> Vec<Outcome> {
    let jobs = jobs.clamp(1, obs.len().max(1));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut out: Vec<Option<Outcome>> = vec![None; obs.len()];
    let done = std::sync::Mutex::new(&mut out);
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(ob) = obs.get(i) else { break };
                let r = discharge(ob, solver);
                done.lock().expect("poisoned")[i] = Some(r);
            });
        }
    });
    out.into_iter().map(|o| o.expect("every obligation discharged")).collect()
}

pub fn verify_program(p: &Program, opts: &VerifyOptions) -> Result<Report, VerifyError> {
    let obs = obligations(p)?;
    if let Some(dir) = &opts.smt_dump {
        smt::dump(dir, &obs)?;
    }
    let outcomes = discharge_all(&obs, &opts.solver, opts.jobs);
    let reports: Vec<ObligationReport> = obs
        .iter()
        .zip(outcomes)
        .map(|(ob, outcome)| ObligationReport {
            id: ob.id,
            rule: ob.rule.clone(),
            location: ob.location.clone(),
            instants: ob.instants.to_string(),
            assumptions: ob.assumptions.iter().map(|a| a.to_string()).collect(),
            goal: ob.goal.to_string(),
            outcome,
        })
        .collect();
    Ok(Report { verified: reports.iter().all(|r| r.outcome.is_valid()), obligations: reports })
}
