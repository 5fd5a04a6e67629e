use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::env::{EnvSeq, SnocList};
use crate::named::Name;
use crate::ordered::{KVec, OrderedTerm};
use crate::drop_queue;

/// Result of evaluation: a free variable applied to argument values, or a
/// closure whose environment covers exactly the unbound dots of its
/// abstraction.
#[derive(Clone)]
pub struct Value(Arc<ValueNode>);

pub enum ValueNode {
    Spine { head: Name, args: SnocList<Value> },
    Closure { kvec: KVec, body: Arc<OrderedTerm>, env: EnvSeq<Value> },
}

impl Value {
    /// A bare variable: a spine with no arguments.
    pub fn var(head: Name) -> Self {
        Value(Arc::new(ValueNode::Spine { head, args: SnocList::new() }))
    }

    pub fn spine(head: Name, args: Vec<Value>) -> Self {
        Value(Arc::new(ValueNode::Spine { head, args: args.into_iter().collect() }))
    }

    pub(crate) fn from_spine(head: Name, args: SnocList<Value>) -> Self {
        Value(Arc::new(ValueNode::Spine { head, args }))
    }

    /// Builds a closure. In debug builds, checks that the environment is
    /// exact: one entry per unbound dot of `Lam(kvec, body)`.
    pub fn closure(kvec: KVec, body: Arc<OrderedTerm>, env: EnvSeq<Value>) -> Self {
        debug_assert_eq!(
            env.len() as i64,
            body.fv_count() - kvec.len() as i64,
            "closure environment is not exact"
        );
        Value(Arc::new(ValueNode::Closure { kvec, body, env }))
    }

    pub fn node(&self) -> &ValueNode {
        &self.0
    }

    pub fn ptr_eq(&self, other: &Value) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn is_closure(&self) -> bool {
        matches!(*self.0, ValueNode::Closure { .. })
    }
}

impl Drop for ValueNode {
    fn drop(&mut self) {
        match self {
            ValueNode::Spine { args, .. } if !args.is_empty() => {
                drop_queue::defer(std::mem::take(args));
            }
            ValueNode::Closure { env, .. } if !env.is_empty() => {
                drop_queue::defer(std::mem::take(env));
            }
            _ => {}
        }
    }
}

// Structural equality: same shape, same names, same code, equal environments.
impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        let mut todo = vec![(self.clone(), other.clone())];
        while let Some((a, b)) = todo.pop() {
            if a.ptr_eq(&b) {
                continue;
            }
            match (a.node(), b.node()) {
                (ValueNode::Spine { head: h1, args: a1 }, ValueNode::Spine { head: h2, args: a2 }) => {
                    if h1 != h2 || a1.len() != a2.len() {
                        return false;
                    }
                    todo.extend(a1.iter_rev().cloned().zip(a2.iter_rev().cloned()));
                }
                (
                    ValueNode::Closure { kvec: k1, body: b1, env: e1 },
                    ValueNode::Closure { kvec: k2, body: b2, env: e2 },
                ) => {
                    if k1 != k2 || e1.len() != e2.len() || !(Arc::ptr_eq(b1, b2) || b1 == b2) {
                        return false;
                    }
                    todo.extend(e1.iter().cloned().zip(e2.iter().cloned()));
                }
                _ => return false,
            }
        }
        true
    }
}

impl Eq for Value {}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            ValueNode::Spine { head, args } => {
                f.debug_tuple("Spine").field(head).field(&args.to_vec_ref()).finish()
            }
            ValueNode::Closure { kvec, body, env } => {
                f.debug_tuple("Closure").field(kvec).field(body).field(env).finish()
            }
        }
    }
}

/// Distinct value nodes reachable from `v`, each shared node counted once.
/// Code is not counted; closures count themselves and their environment.
pub fn value_node_count(v: &Value) -> usize {
    let mut seen = HashSet::new();
    let mut todo = vec![v.clone()];
    while let Some(v) = todo.pop() {
        if !seen.insert(v.addr()) {
            continue;
        }
        match v.node() {
            ValueNode::Spine { args, .. } => todo.extend(args.iter_rev().cloned()),
            ValueNode::Closure { env, .. } => todo.extend(env.iter().cloned()),
        }
    }
    seen.len()
}
