use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::named::Name;
use crate::stack;

/// Gap vector of a binder: its variable is inserted after the first `k1`
/// unbound occurrences of the body, again after the next `k2`, and so on.
/// The empty vector binds nothing.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KVec(Arc<[usize]>);

impl KVec {
    pub fn new(gaps: Vec<usize>) -> Self {
        KVec(gaps.into())
    }

    pub fn empty() -> Self {
        KVec(Arc::new([]))
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }
}

impl Deref for KVec {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for KVec {
    fn from(v: Vec<usize>) -> Self {
        KVec::new(v)
    }
}

impl fmt::Debug for KVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// An ordered preterm. It is an ordered term when [`OrderedTerm::is_ordered`]
/// holds.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum OrderedTerm {
    /// Free variable, referred to by name.
    Free(Name),
    /// Anonymous bound variable occurrence.
    Dot,
    /// Function, number of unbound dots in the function, argument.
    App(Arc<OrderedTerm>, usize, Arc<OrderedTerm>),
    Lam(KVec, Arc<OrderedTerm>),
}

impl OrderedTerm {
    pub fn free(name: &str) -> Self {
        OrderedTerm::Free(Name::from(name))
    }

    pub fn app(fun: OrderedTerm, split: usize, arg: OrderedTerm) -> Self {
        OrderedTerm::App(Arc::new(fun), split, Arc::new(arg))
    }

    pub fn lam(gaps: Vec<usize>, body: OrderedTerm) -> Self {
        OrderedTerm::Lam(KVec::new(gaps), Arc::new(body))
    }

    /// Number of unbound dots. Signed so that it stays total on invalid
    /// preterms, where binders may claim more than their body provides.
    pub fn fv_count(&self) -> i64 {
        stack::guard(|| match self {
            OrderedTerm::Free(_) => 0,
            OrderedTerm::Dot => 1,
            OrderedTerm::App(t, _, u) => t.fv_count() + u.fv_count(),
            OrderedTerm::Lam(k, t) => t.fv_count() - k.len() as i64,
        })
    }

    /// Every application's split equals its function's `fv_count`, and every
    /// binder's `len + sum` fits within its body's `fv_count`.
    pub fn is_ordered(&self) -> bool {
        fn check(t: &OrderedTerm) -> Option<i64> {
            stack::guard(|| match t {
                OrderedTerm::Free(_) => Some(0),
                OrderedTerm::Dot => Some(1),
                OrderedTerm::App(f, m, a) => {
                    let ff = check(f)?;
                    let fa = check(a)?;
                    (ff == *m as i64).then_some(ff + fa)
                }
                OrderedTerm::Lam(k, b) => {
                    let fb = check(b)?;
                    ((k.len() + k.sum()) as i64 <= fb).then_some(fb - k.len() as i64)
                }
            })
        }
        check(self).is_some()
    }

    pub fn size(&self) -> usize {
        stack::guard(|| match self {
            OrderedTerm::Free(_) | OrderedTerm::Dot => 1,
            OrderedTerm::App(t, _, u) => 1 + t.size() + u.size(),
            OrderedTerm::Lam(_, t) => 1 + t.size(),
        })
    }

    pub fn free_names(&self, out: &mut std::collections::HashSet<Name>) {
        stack::guard(|| match self {
            OrderedTerm::Free(x) => {
                out.insert(x.clone());
            }
            OrderedTerm::Dot => {}
            OrderedTerm::App(t, _, u) => {
                t.free_names(out);
                u.free_names(out);
            }
            OrderedTerm::Lam(_, t) => t.free_names(out),
        })
    }
}

impl fmt::Display for OrderedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::write_ordered(self))
    }
}

impl fmt::Debug for OrderedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::write_ordered(self))
    }
}
