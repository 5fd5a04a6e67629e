use std::collections::HashSet;

use super::OrderedTerm;
use crate::eval::{Value, ValueNode};
use crate::named::{fresh_name, Name, NamedTerm};
use crate::stack;

/// Reads an ordered term back into named syntax, replacing its unbound dots
/// by the printed values of `env`, left to right.
///
/// Panics if `env.len()` differs from the term's unbound-dot count.
pub fn print_ordered(t: &OrderedTerm, env: &[Value]) -> NamedTerm {
    assert_eq!(
        t.fv_count(),
        env.len() as i64,
        "print_ordered: environment of length {} for a term with {} unbound dots",
        env.len(),
        t.fv_count()
    );
    print_term(t, env)
}

/// A spine becomes a left-nested application, a closure its abstraction
/// printed under the closure's environment.
pub fn print_value(v: &Value) -> NamedTerm {
    stack::guard(|| match v.node() {
        ValueNode::Spine { head, args } => NamedTerm::apps(
            NamedTerm::Var(head.clone()),
            args.to_vec_ref().into_iter().map(print_value),
        ),
        ValueNode::Closure { kvec, body, env } => {
            print_lam(kvec, body, &env.to_vec())
        }
    })
}

fn print_term(t: &OrderedTerm, env: &[Value]) -> NamedTerm {
    stack::guard(|| match t {
        OrderedTerm::Free(x) => {
            debug_assert!(env.is_empty());
            NamedTerm::Var(x.clone())
        }
        OrderedTerm::Dot => {
            debug_assert_eq!(env.len(), 1);
            print_value(&env[0])
        }
        OrderedTerm::App(f, m, a) => {
            NamedTerm::app(print_term(f, &env[..*m]), print_term(a, &env[*m..]))
        }
        OrderedTerm::Lam(k, b) => print_lam(k, b, env),
    })
}

fn print_lam(gaps: &[usize], body: &OrderedTerm, env: &[Value]) -> NamedTerm {
    let mut taken = HashSet::new();
    body.free_names(&mut taken);
    value_names(env, &mut taken);
    let z = fresh_name(|n| taken.contains(n));
    let marker = Value::var(z.clone());
    let inner = insert_at_gaps(env, gaps, &marker);
    NamedTerm::Lam(z, Box::new(print_term(body, &inner)))
}

fn insert_at_gaps(env: &[Value], gaps: &[usize], w: &Value) -> Vec<Value> {
    let mut out = Vec::with_capacity(env.len() + gaps.len());
    let mut pos = 0;
    for &g in gaps {
        out.extend_from_slice(&env[pos..pos + g]);
        out.push(w.clone());
        pos += g;
    }
    out.extend_from_slice(&env[pos..]);
    out
}

/// Names that may occur free in the printed form of `values`: spine heads
/// and free names of closure bodies, collected through shared structure once.
pub fn value_names(values: &[Value], out: &mut HashSet<Name>) {
    let mut seen = HashSet::new();
    let mut todo: Vec<Value> = values.to_vec();
    while let Some(v) = todo.pop() {
        if !seen.insert(v.addr()) {
            continue;
        }
        match v.node() {
            ValueNode::Spine { head, args } => {
                out.insert(head.clone());
                todo.extend(args.iter_rev().cloned());
            }
            ValueNode::Closure { body, env, .. } => {
                body.free_names(out);
                todo.extend(env.iter().cloned());
            }
        }
    }
}
