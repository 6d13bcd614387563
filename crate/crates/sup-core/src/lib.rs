//! An interpreter toolkit for propositional logic with a superposition
//! connective: proof terms, a typechecker, a non-deterministic and
//! probabilistic rewrite engine, and a quantum standard library on top of it
//! (bits, qubits, measurement operators, matrices, Deutsch's algorithm).

pub mod graph;
pub mod parse;
pub mod print;
pub mod reduction;
pub mod scalar;
pub mod stdlib;
pub mod syntax;
pub mod typecheck;

pub use reduction::{Config, Distribution, Mode, Nondet, Redex, ReduceError, RuleId, Strategy};
pub use scalar::Scalar;
pub use syntax::{alpha_eq, canonicalize, free_vars, substitute, Prop, Term, Weighted};
pub use typecheck::{check, infer, Context, TypeError};
