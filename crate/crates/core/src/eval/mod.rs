//! Values and evaluation of ordered terms.
//!
//! [`Evaluator`] is the big-step call-by-value interpreter; [`MachineExpr`]
//! with [`step`] is the matching one-rule-at-a-time rewriting machine used to
//! check each rule against β-reduction on printed terms.

mod evaluator;
mod machine;
mod value;

pub use evaluator::{whnf, whnf_with, EvalConfig, EvalError, Evaluator, NormalForm};
pub use machine::{print_expr, step, weight, MachineExpr, Rule, StepError};
pub use value::{value_node_count, Value, ValueNode};
