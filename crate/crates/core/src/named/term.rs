use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::stack;

/// Identifier shared between terms without copying.
pub type Name = Arc<str>;

/// A lambda term with named variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum NamedTerm {
    Var(Name),
    App(Box<NamedTerm>, Box<NamedTerm>),
    Lam(Name, Box<NamedTerm>),
}

impl NamedTerm {
    pub fn var(name: &str) -> Self {
        NamedTerm::Var(Name::from(name))
    }

    pub fn app(fun: NamedTerm, arg: NamedTerm) -> Self {
        NamedTerm::App(Box::new(fun), Box::new(arg))
    }

    pub fn lam(binder: &str, body: NamedTerm) -> Self {
        NamedTerm::Lam(Name::from(binder), Box::new(body))
    }

    /// Left-nested application of `head` to `args`.
    pub fn apps(head: NamedTerm, args: impl IntoIterator<Item = NamedTerm>) -> Self {
        args.into_iter().fold(head, NamedTerm::app)
    }

    pub fn free_vars(&self) -> HashSet<Name> {
        let mut out = HashSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    pub fn is_free(&self, x: &str) -> bool {
        stack::guard(|| match self {
            NamedTerm::Var(y) => &**y == x,
            NamedTerm::App(f, a) => f.is_free(x) || a.is_free(x),
            NamedTerm::Lam(y, b) => &**y != x && b.is_free(x),
        })
    }

    /// Every name occurring anywhere in the term, bound or free.
    pub fn all_names(&self, out: &mut HashSet<Name>) {
        stack::guard(|| match self {
            NamedTerm::Var(x) => {
                out.insert(x.clone());
            }
            NamedTerm::App(f, a) => {
                f.all_names(out);
                a.all_names(out);
            }
            NamedTerm::Lam(x, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
        })
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        stack::guard(|| match self {
            NamedTerm::Var(_) => 1,
            NamedTerm::App(f, a) => 1 + f.size() + a.size(),
            NamedTerm::Lam(_, b) => 1 + b.size(),
        })
    }

    /// Splits `h a1 … an` into the head and its arguments.
    pub fn spine(&self) -> (&NamedTerm, Vec<&NamedTerm>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let NamedTerm::App(f, a) = cur {
            args.push(&**a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn is_beta_normal(&self) -> bool {
        stack::guard(|| match self {
            NamedTerm::Var(_) => true,
            NamedTerm::Lam(_, b) => b.is_beta_normal(),
            NamedTerm::App(f, a) => {
                !matches!(**f, NamedTerm::Lam(..)) && f.is_beta_normal() && a.is_beta_normal()
            }
        })
    }
}

fn collect_free(t: &NamedTerm, bound: &mut Vec<Name>, out: &mut HashSet<Name>) {
    stack::guard(|| match t {
        NamedTerm::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        NamedTerm::App(f, a) => {
            collect_free(f, bound, out);
            collect_free(a, bound, out);
        }
        NamedTerm::Lam(x, b) => {
            bound.push(x.clone());
            collect_free(b, bound, out);
            bound.pop();
        }
    })
}

impl fmt::Display for NamedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print_surface(self))
    }
}

impl fmt::Debug for NamedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", super::print_surface(self))
    }
}
