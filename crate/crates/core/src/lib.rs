//! Reactive stream programs with temporal refinement types: parser, static
//! checks, small-step interpreter, refinement checker with an SMT backend,
//! and a runtime monitor.

pub mod ast;
pub mod checks;
pub mod corpus;
pub mod devices;
pub mod interp;
pub mod smt;
pub mod syntax;
pub mod temporal;
pub mod trace;
pub mod typing;
