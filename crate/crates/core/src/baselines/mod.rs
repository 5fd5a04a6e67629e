//! Comparison strategies over de Bruijn terms: a closure evaluator whose
//! environments cover the whole scope, and eager normalization by hereditary
//! substitution.

mod closures;
mod debruijn;
mod hsub;

pub use closures::{
    db_value_node_count, eval_closures, print_db_value, whnf_closures, ClosureEvaluator, DbValue, DbValueNode,
};
pub use debruijn::{from_debruijn, to_debruijn, DbTerm};
pub use hsub::{normalize_hsub, normalize_hsub_db, normalize_hsub_with};
