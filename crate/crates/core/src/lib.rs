//! Ordered nameless lambda terms with exact environments.
//!
//! Bound variables are anonymous dots. An abstraction records, as a vector of
//! gaps, where its variable sits among the free occurrences of its body, and an
//! application records how many of those occurrences belong to the function
//! part. Environments can therefore be split without a traversal and stay exact:
//! a closure holds values only for variables its code mentions.
//!
//! Modules:
//! - [`named`]: classical named terms, surface syntax and a normal-order oracle.
//! - [`ordered`]: the ordered representation, translation and printing.
//! - [`env`]: persistent substitution lists (linked list and weight-balanced tree).
//! - [`eval`]: values, the call-by-value evaluator and the small-step machine.
//! - [`baselines`]: de Bruijn closures and hereditary-substitution normalization.
//! - [`harness`]: term generation, trace checking and benchmarking.

pub mod baselines;
pub mod env;
pub mod eval;
pub mod harness;
pub mod named;
pub mod ordered;

mod drop_queue;
mod stack;

pub use env::{Backend, EnvSeq};
pub use eval::{whnf, EvalConfig, EvalError, Evaluator, MachineExpr, Value, ValueNode};
pub use named::{parse_surface, print_surface, Name, NamedTerm, ParseError};
pub use ordered::{parse_closed, print_ordered, print_value, to_ordered, KVec, OrderedTerm};

/// Default rule-application budget for evaluators.
pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Environment variable that overrides [`DEFAULT_FUEL`] for the CLI.
pub const FUEL_ENV_VAR: &str = "ORDLAM_FUEL";
