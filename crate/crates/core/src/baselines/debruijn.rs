use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::named::{FreshSupply, Name, NamedTerm};
use crate::stack;

/// Lambda term with de Bruijn indices for bound variables and names for free
/// ones. Subterms are shared.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum DbTerm {
    BVar(usize),
    FVar(Name),
    App(Arc<DbTerm>, Arc<DbTerm>),
    Lam(Arc<DbTerm>),
}

impl DbTerm {
    pub fn app(fun: DbTerm, arg: DbTerm) -> Self {
        DbTerm::App(Arc::new(fun), Arc::new(arg))
    }

    pub fn lam(body: DbTerm) -> Self {
        DbTerm::Lam(Arc::new(body))
    }

    pub fn size(&self) -> usize {
        stack::guard(|| match self {
            DbTerm::BVar(_) | DbTerm::FVar(_) => 1,
            DbTerm::App(f, a) => 1 + f.size() + a.size(),
            DbTerm::Lam(b) => 1 + b.size(),
        })
    }

    /// True when every index points at an enclosing binder.
    pub fn is_closed(&self) -> bool {
        self.closed_under(0)
    }

    fn closed_under(&self, depth: usize) -> bool {
        stack::guard(|| match self {
            DbTerm::BVar(i) => *i < depth,
            DbTerm::FVar(_) => true,
            DbTerm::App(f, a) => f.closed_under(depth) && a.closed_under(depth),
            DbTerm::Lam(b) => b.closed_under(depth + 1),
        })
    }

    pub fn free_names(&self, out: &mut HashSet<Name>) {
        stack::guard(|| match self {
            DbTerm::BVar(_) => {}
            DbTerm::FVar(x) => {
                out.insert(x.clone());
            }
            DbTerm::App(f, a) => {
                f.free_names(out);
                a.free_names(out);
            }
            DbTerm::Lam(b) => b.free_names(out),
        })
    }
}

/// Nameless form of `m`; free names stay as [`DbTerm::FVar`].
pub fn to_debruijn(m: &NamedTerm) -> DbTerm {
    fn go(m: &NamedTerm, scope: &mut Vec<Name>) -> DbTerm {
        stack::guard(|| match m {
            NamedTerm::Var(x) => match scope.iter().rev().position(|y| y == x) {
                Some(i) => DbTerm::BVar(i),
                None => DbTerm::FVar(x.clone()),
            },
            NamedTerm::App(f, a) => DbTerm::app(go(f, scope), go(a, scope)),
            NamedTerm::Lam(x, b) => {
                scope.push(x.clone());
                let body = go(b, scope);
                scope.pop();
                DbTerm::lam(body)
            }
        })
    }
    go(m, &mut Vec::new())
}

/// Named form of a closed de Bruijn term, binders drawn from `z0, z1, …`
/// avoiding its free names.
pub fn from_debruijn(t: &DbTerm) -> NamedTerm {
    let mut avoid = HashSet::new();
    t.free_names(&mut avoid);
    let mut supply = FreshSupply::new(avoid);
    named_under(t, &mut Vec::new(), &mut supply)
}

/// Names `t` with `scope` giving the terms bound to its loose indices,
/// innermost last.
pub(crate) fn named_under(t: &DbTerm, scope: &mut Vec<NamedTerm>, supply: &mut FreshSupply) -> NamedTerm {
    stack::guard(|| match t {
        DbTerm::BVar(i) => {
            let n = scope.len();
            assert!(*i < n, "index {i} out of scope of depth {n}");
            scope[n - 1 - i].clone()
        }
        DbTerm::FVar(x) => NamedTerm::Var(x.clone()),
        DbTerm::App(f, a) => NamedTerm::app(named_under(f, scope, supply), named_under(a, scope, supply)),
        DbTerm::Lam(b) => {
            let z = supply.next_name();
            scope.push(NamedTerm::Var(z.clone()));
            let body = named_under(b, scope, supply);
            scope.pop();
            NamedTerm::Lam(z, Box::new(body))
        }
    })
}

fn write_db(t: &DbTerm, out: &mut String) {
    stack::guard(|| match t {
        DbTerm::BVar(i) => out.push_str(&i.to_string()),
        DbTerm::FVar(x) => out.push_str(x),
        DbTerm::App(f, a) => {
            out.push('(');
            write_db(f, out);
            out.push(' ');
            write_db(a, out);
            out.push(')');
        }
        DbTerm::Lam(b) => {
            out.push_str("(\\ ");
            write_db(b, out);
            out.push(')');
        }
    })
}

/// Canonical text: indices as numerals, `(f a)` for application and
/// `(\ b)` for abstraction. α-equivalent terms print identically.
impl fmt::Display for DbTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_db(self, &mut out);
        f.write_str(&out)
    }
}

impl fmt::Debug for DbTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::{alpha_eq, parse_surface};

    fn db(s: &str) -> DbTerm {
        to_debruijn(&parse_surface(s).unwrap())
    }

    #[test]
    fn standard_conversions() {
        assert_eq!(db(r"\x.x"), DbTerm::lam(DbTerm::BVar(0)));
        assert_eq!(db(r"\x.\y. x"), DbTerm::lam(DbTerm::lam(DbTerm::BVar(1))));
        let b = |i| DbTerm::BVar(i);
        let s = DbTerm::lam(DbTerm::lam(DbTerm::lam(DbTerm::app(
            DbTerm::app(b(2), b(0)),
            DbTerm::app(b(1), b(0)),
        ))));
        assert_eq!(db(r"\x.\y.\z. x z (y z)"), s);
    }

    #[test]
    fn free_names_and_shadowing() {
        assert_eq!(db(r"\x. y x"), DbTerm::lam(DbTerm::app(DbTerm::FVar("y".into()), DbTerm::BVar(0))));
        assert_eq!(db(r"\x.\x. x"), DbTerm::lam(DbTerm::lam(DbTerm::BVar(0))));
        assert!(db(r"\x. y x").is_closed());
    }

    #[test]
    fn canonical_text() {
        assert_eq!(db(r"\x.\y. x (y a)").to_string(), r"(\ (\ (1 (0 a))))");
        assert_eq!(db(r"\u. u").to_string(), db(r"\v. v").to_string());
    }

    #[test]
    fn naming_back() {
        for s in [r"\x.\y.\z. x z (y z)", r"\z0. z1 z0", r"(\x. x x) (\y. y)", "a b c"] {
            let m = parse_surface(s).unwrap();
            assert!(alpha_eq(&from_debruijn(&to_debruijn(&m)), &m), "{s}");
        }
    }
}
