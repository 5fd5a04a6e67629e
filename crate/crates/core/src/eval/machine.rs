use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use super::value::{Value, ValueNode};
use crate::env::{Backend, EnvSeq};
use crate::named::NamedTerm;
use crate::ordered::{print_ordered, print_value, OrderedTerm};
use crate::stack;

/// Intermediate state of small-step evaluation: a term awaiting evaluation
/// under its environment, a finished value, or an application of one
/// expression to another.
#[derive(Clone, Debug)]
pub enum MachineExpr {
    Pending(Arc<OrderedTerm>, EnvSeq<Value>),
    Done(Value),
    Pair(Box<MachineExpr>, Box<MachineExpr>),
}

impl MachineExpr {
    /// The initial state for a closed term.
    pub fn start(t: OrderedTerm, backend: Backend) -> Self {
        MachineExpr::Pending(Arc::new(t), EnvSeq::empty(backend))
    }

    pub fn pair(fun: MachineExpr, arg: MachineExpr) -> Self {
        MachineExpr::Pair(Box::new(fun), Box::new(arg))
    }

    pub fn as_value(&self) -> Option<&Value> {
        match self {
            MachineExpr::Done(v) => Some(v),
            _ => None,
        }
    }
}

/// The evaluation rules, numbered as the evaluator applies them: (1) free
/// variable, (2) bound occurrence, (3) application, (4) abstraction,
/// (5) spine applied, (6) closure applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Free = 1,
    Bound = 2,
    Application = 3,
    Abstraction = 4,
    SpineApply = 5,
    ClosureApply = 6,
}

impl Rule {
    pub const ALL: [Rule; 6] = [
        Rule::Free,
        Rule::Bound,
        Rule::Application,
        Rule::Abstraction,
        Rule::SpineApply,
        Rule::ClosureApply,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }

    /// Only closure application corresponds to a β-step on printed terms.
    pub fn is_beta(self) -> bool {
        self == Rule::ClosureApply
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    /// Nothing left to rewrite: the expression is a value.
    #[error("no rule applies")]
    Stuck,
    #[error("internal invariant breach: {0}")]
    Invariant(String),
}

/// Applies exactly one rule at the leftmost-outermost position where one
/// applies. A pair is rewritten once both sides are values; before that its
/// function side is stepped first, then its argument side.
pub fn step(e: &MachineExpr) -> Result<(MachineExpr, Rule), StepError> {
    stack::guard(|| match e {
        MachineExpr::Done(_) => Err(StepError::Stuck),
        MachineExpr::Pending(t, env) => step_pending(t, env),
        MachineExpr::Pair(f, a) => match (&**f, &**a) {
            (MachineExpr::Done(v), MachineExpr::Done(w)) => apply_values(v, w),
            (MachineExpr::Done(_), _) => {
                let (a2, rule) = step(a)?;
                Ok((MachineExpr::Pair(f.clone(), Box::new(a2)), rule))
            }
            _ => {
                let (f2, rule) = step(f)?;
                Ok((MachineExpr::Pair(Box::new(f2), a.clone()), rule))
            }
        },
    })
}

fn step_pending(t: &OrderedTerm, env: &EnvSeq<Value>) -> Result<(MachineExpr, Rule), StepError> {
    let breach = |msg: String| Err(StepError::Invariant(msg));
    match t {
        OrderedTerm::Free(x) => {
            if !env.is_empty() {
                return breach(format!("free `{x}` with {} values", env.len()));
            }
            Ok((MachineExpr::Done(Value::var(x.clone())), Rule::Free))
        }
        OrderedTerm::Dot => match (env.len(), env.get(0)) {
            (1, Some(v)) => Ok((MachineExpr::Done(v.clone()), Rule::Bound)),
            (n, _) => breach(format!("bound occurrence with {n} values")),
        },
        OrderedTerm::App(f, m, a) => {
            if *m > env.len() {
                return breach(format!("split {m} past environment of length {}", env.len()));
            }
            let (fe, ae) = env.split_at(*m);
            let pair = MachineExpr::pair(
                MachineExpr::Pending(f.clone(), fe),
                MachineExpr::Pending(a.clone(), ae),
            );
            Ok((pair, Rule::Application))
        }
        OrderedTerm::Lam(k, b) => Ok((
            MachineExpr::Done(Value::closure(k.clone(), b.clone(), env.clone())),
            Rule::Abstraction,
        )),
    }
}

fn apply_values(v: &Value, w: &Value) -> Result<(MachineExpr, Rule), StepError> {
    match v.node() {
        ValueNode::Spine { head, args } => Ok((
            MachineExpr::Done(Value::from_spine(head.clone(), args.push(w.clone()))),
            Rule::SpineApply,
        )),
        ValueNode::Closure { kvec, body, env } => {
            if kvec.sum() > env.len() {
                return Err(StepError::Invariant(format!(
                    "gaps {kvec:?} exceed environment of length {}",
                    env.len()
                )));
            }
            Ok((
                MachineExpr::Pending(body.clone(), env.multi_insert(kvec, w.clone())),
                Rule::ClosureApply,
            ))
        }
    }
}

/// Pending terms print under their environment, values print as values,
/// pairs as applications.
pub fn print_expr(e: &MachineExpr) -> NamedTerm {
    stack::guard(|| match e {
        MachineExpr::Pending(t, env) => print_ordered(t, &env.to_vec()),
        MachineExpr::Done(v) => print_value(v),
        MachineExpr::Pair(f, a) => NamedTerm::app(print_expr(f), print_expr(a)),
    })
}

/// Termination measure: a pending term weighs 1, a closure 2, a spine with
/// `n` arguments `1 + 2^n` plus its arguments' weights, a pair the sum of
/// its sides.
pub fn weight(e: &MachineExpr) -> BigUint {
    let mut memo = HashMap::new();
    expr_weight(e, &mut memo)
}

fn expr_weight(e: &MachineExpr, memo: &mut HashMap<usize, BigUint>) -> BigUint {
    stack::guard(|| match e {
        MachineExpr::Pending(..) => BigUint::one(),
        MachineExpr::Done(v) => value_weight(v, memo),
        MachineExpr::Pair(f, a) => expr_weight(f, memo) + expr_weight(a, memo),
    })
}

fn value_weight(v: &Value, memo: &mut HashMap<usize, BigUint>) -> BigUint {
    if let Some(w) = memo.get(&v.addr()) {
        return w.clone();
    }
    let w = stack::guard(|| match v.node() {
        ValueNode::Closure { .. } => BigUint::from(2u8),
        ValueNode::Spine { args, .. } => {
            let mut w = BigUint::one() + (BigUint::one() << args.len());
            for a in args.iter_rev() {
                w += value_weight(a, memo);
            }
            w
        }
    });
    memo.insert(v.addr(), w.clone());
    w
}
