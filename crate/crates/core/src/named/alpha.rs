use super::{Name, NamedTerm};
use crate::stack;

/// Equality up to consistent renaming of bound variables. Free names are
/// compared literally.
pub fn alpha_eq(t: &NamedTerm, u: &NamedTerm) -> bool {
    let mut left = Vec::new();
    let mut right = Vec::new();
    go(t, u, &mut left, &mut right)
}

// Innermost binding depth of `x`, counted from the top of the binder stack.
fn lookup(stack: &[Name], x: &Name) -> Option<usize> {
    stack.iter().rev().position(|y| y == x)
}

fn go(t: &NamedTerm, u: &NamedTerm, left: &mut Vec<Name>, right: &mut Vec<Name>) -> bool {
    stack::guard(|| match (t, u) {
        (NamedTerm::Var(x), NamedTerm::Var(y)) => match (lookup(left, x), lookup(right, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (NamedTerm::App(f, a), NamedTerm::App(g, b)) => {
            go(f, g, left, right) && go(a, b, left, right)
        }
        (NamedTerm::Lam(x, b), NamedTerm::Lam(y, c)) => {
            left.push(x.clone());
            right.push(y.clone());
            let eq = go(b, c, left, right);
            left.pop();
            right.pop();
            eq
        }
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::parse_surface;

    fn p(s: &str) -> NamedTerm {
        parse_surface(s).unwrap()
    }

    #[test]
    fn identity_renaming() {
        assert!(alpha_eq(&p(r"\x.x"), &p(r"\y.y")));
    }

    #[test]
    fn distinct_free_names() {
        assert!(!alpha_eq(&p(r"\x.a"), &p(r"\x.b")));
    }

    #[test]
    fn shared_free_name_under_renamed_binders() {
        assert!(alpha_eq(&p(r"\x.\y. x z (y z)"), &p(r"\a.\b. a z (b z)")));
        assert!(!alpha_eq(&p(r"\x.\y. x z (y z)"), &p(r"\z.\b. z z (b z)")));
    }

    #[test]
    fn shadowing_is_respected() {
        assert!(alpha_eq(&p(r"\x.\x. x"), &p(r"\a.\b. b")));
        assert!(!alpha_eq(&p(r"\x.\x. x"), &p(r"\a.\b. a")));
        assert!(!alpha_eq(&p(r"\x. y"), &p(r"\y. y")));
    }
}
