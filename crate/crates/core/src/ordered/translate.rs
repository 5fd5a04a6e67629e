use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{KVec, OrderedTerm};
use crate::named::{Name, NamedTerm};
use crate::stack;

/// A translated term together with the context variables standing for its
/// unbound dots, leftmost first. `vars.len()` equals the term's `fv_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseResult {
    pub term: OrderedTerm,
    pub vars: Vec<Name>,
}

struct Scope<'a> {
    gamma: &'a HashSet<Name>,
    binders: HashMap<Name, usize>,
}

impl Scope<'_> {
    fn contains(&self, x: &Name) -> bool {
        self.gamma.contains(x) || self.binders.get(x).is_some_and(|&n| n > 0)
    }

    fn enter(&mut self, x: &Name) {
        *self.binders.entry(x.clone()).or_default() += 1;
    }

    fn leave(&mut self, x: &Name) {
        if let Some(n) = self.binders.get_mut(x) {
            *n -= 1;
        }
    }
}

/// Translates `m` relative to the context `gamma`: names in `gamma` (and
/// names bound inside `m`) become dots, all others stay free.
pub fn to_ordered(m: &NamedTerm, gamma: &HashSet<Name>) -> ParseResult {
    let mut scope = Scope { gamma, binders: HashMap::new() };
    let mut vars = Vec::new();
    let term = translate(m, &mut scope, &mut vars);
    ParseResult { term, vars }
}

/// Translation of a term in the empty context.
pub fn parse_closed(m: &NamedTerm) -> OrderedTerm {
    to_ordered(m, &HashSet::new()).term
}

fn translate(m: &NamedTerm, scope: &mut Scope<'_>, occ: &mut Vec<Name>) -> OrderedTerm {
    stack::guard(|| match m {
        NamedTerm::Var(x) => {
            if scope.contains(x) {
                occ.push(x.clone());
                OrderedTerm::Dot
            } else {
                OrderedTerm::Free(x.clone())
            }
        }
        NamedTerm::App(f, a) => {
            let start = occ.len();
            let fun = translate(f, scope, occ);
            let split = occ.len() - start;
            let arg = translate(a, scope, occ);
            OrderedTerm::App(Arc::new(fun), split, Arc::new(arg))
        }
        NamedTerm::Lam(z, b) => {
            let start = occ.len();
            scope.enter(z);
            let body = translate(b, scope, occ);
            scope.leave(z);
            // Every `z` the body produced refers to this binder, since inner
            // rebinding of `z` would have consumed its own occurrences. Count
            // the other names between consecutive `z`s and drop the `z`s.
            let mut gaps = Vec::new();
            let mut gap = 0;
            let mut kept = start;
            for i in start..occ.len() {
                if occ[i] == *z {
                    gaps.push(gap);
                    gap = 0;
                } else {
                    occ.swap(kept, i);
                    kept += 1;
                    gap += 1;
                }
            }
            occ.truncate(kept);
            OrderedTerm::Lam(KVec::new(gaps), Arc::new(body))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::parse_surface;
    use crate::ordered::term::tests::ordered_s;

    fn p(s: &str) -> NamedTerm {
        parse_surface(s).unwrap()
    }

    #[test]
    fn s_combinator_translates_to_known_form() {
        let r = to_ordered(&p(r"\x.\y.\z. x z (y z)"), &HashSet::new());
        assert_eq!(r.term, ordered_s());
        assert!(r.vars.is_empty());
    }

    #[test]
    fn variables_inside_and_outside_context() {
        let none = HashSet::new();
        assert_eq!(to_ordered(&p("x"), &none), ParseResult { term: OrderedTerm::free("x"), vars: vec![] });
        let gamma: HashSet<Name> = [Name::from("x")].into();
        assert_eq!(to_ordered(&p("x"), &gamma), ParseResult { term: OrderedTerm::Dot, vars: vec!["x".into()] });
    }

    #[test]
    fn motivating_example_follows_the_rules() {
        // the function part is applied to g first, then to f
        let inner = OrderedTerm::lam(
            vec![0],
            OrderedTerm::app(
                OrderedTerm::app(OrderedTerm::free("a"), 0, OrderedTerm::free("b")),
                0,
                OrderedTerm::Dot,
            ),
        );
        let want = OrderedTerm::app(
            OrderedTerm::app(OrderedTerm::lam(vec![], inner), 0, OrderedTerm::free("g")),
            0,
            OrderedTerm::free("f"),
        );
        assert_eq!(parse_closed(&p(r"(\x.\y. a b y) g f")), want);
        assert_eq!(parse_closed(&p("a")), OrderedTerm::free("a"));
    }

    #[test]
    fn shadowing_binders() {
        let t = parse_closed(&p(r"\x. x (\x. x) x"));
        assert_eq!(t.to_string(), "(lam (0 0) (app 1 (app 1 . (lam (0) .)) .))");
        assert!(t.is_ordered());
        let gamma: HashSet<Name> = [Name::from("x")].into();
        let r = to_ordered(&p(r"x (\x. x) x"), &gamma);
        assert_eq!(r.vars, vec![Name::from("x"), Name::from("x")]);
        assert_eq!(r.term.fv_count(), 2);
    }
}
