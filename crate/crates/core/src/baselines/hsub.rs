use std::sync::Arc;

use super::debruijn::{from_debruijn, to_debruijn, DbTerm};
use crate::named::{Budget, FuelExhausted, NamedTerm};
use crate::stack;

/// β-normal form by hereditary substitution, at most `fuel` contractions.
pub fn normalize_hsub(m: &NamedTerm, fuel: u64) -> Result<NamedTerm, FuelExhausted> {
    normalize_hsub_with(m, &mut Budget::new(fuel))
}

pub fn normalize_hsub_with(m: &NamedTerm, budget: &mut Budget) -> Result<NamedTerm, FuelExhausted> {
    let t = normalize_hsub_db(&Arc::new(to_debruijn(m)), budget)?;
    Ok(from_debruijn(&t))
}

/// Normalizes bottom-up: both sides of an application are normalized first,
/// then a λ in head position is contracted by substituting into its (already
/// normal) body. Substitution contracts on the spot every redex it creates.
pub fn normalize_hsub_db(t: &Arc<DbTerm>, budget: &mut Budget) -> Result<Arc<DbTerm>, FuelExhausted> {
    stack::guard(|| {
        budget.charge(1)?;
        match &**t {
            DbTerm::BVar(_) | DbTerm::FVar(_) => Ok(t.clone()),
            DbTerm::Lam(b) => Ok(Arc::new(DbTerm::Lam(normalize_hsub_db(b, budget)?))),
            DbTerm::App(f, a) => {
                let f = normalize_hsub_db(f, budget)?;
                let a = normalize_hsub_db(a, budget)?;
                app_normal(f, a, budget)
            }
        }
    })
}

// Application of two normal terms, itself normal.
fn app_normal(f: Arc<DbTerm>, a: Arc<DbTerm>, budget: &mut Budget) -> Result<Arc<DbTerm>, FuelExhausted> {
    match &*f {
        DbTerm::Lam(b) => {
            budget.step()?;
            subst_normal(b, 0, &a, budget)
        }
        _ => Ok(Arc::new(DbTerm::App(f, a))),
    }
}

// `t[j := s]` for normal `t` and `s`, where `s` lives outside the `j`
// binders crossed so far; indices above `j` move down by one.
fn subst_normal(t: &Arc<DbTerm>, j: usize, s: &Arc<DbTerm>, budget: &mut Budget) -> Result<Arc<DbTerm>, FuelExhausted> {
    stack::guard(|| {
        budget.charge(1)?;
        match &**t {
            DbTerm::BVar(i) if *i == j => shift(s, j, 0, budget),
            DbTerm::BVar(i) if *i > j => Ok(Arc::new(DbTerm::BVar(i - 1))),
            DbTerm::BVar(_) | DbTerm::FVar(_) => Ok(t.clone()),
            DbTerm::Lam(b) => Ok(Arc::new(DbTerm::Lam(subst_normal(b, j + 1, s, budget)?))),
            DbTerm::App(f, a) => {
                let f = subst_normal(f, j, s, budget)?;
                let a = subst_normal(a, j, s, budget)?;
                app_normal(f, a, budget)
            }
        }
    })
}

// Adds `d` to every index at or above `cutoff`, sharing untouched subterms.
fn shift(t: &Arc<DbTerm>, d: usize, cutoff: usize, budget: &mut Budget) -> Result<Arc<DbTerm>, FuelExhausted> {
    if d == 0 {
        return Ok(t.clone());
    }
    stack::guard(|| {
        budget.charge(1)?;
        Ok(match &**t {
            DbTerm::BVar(i) if *i >= cutoff => Arc::new(DbTerm::BVar(i + d)),
            DbTerm::BVar(_) | DbTerm::FVar(_) => t.clone(),
            DbTerm::Lam(b) => {
                let b2 = shift(b, d, cutoff + 1, budget)?;
                if Arc::ptr_eq(&b2, b) {
                    t.clone()
                } else {
                    Arc::new(DbTerm::Lam(b2))
                }
            }
            DbTerm::App(f, a) => {
                let f2 = shift(f, d, cutoff, budget)?;
                let a2 = shift(a, d, cutoff, budget)?;
                if Arc::ptr_eq(&f2, f) && Arc::ptr_eq(&a2, a) {
                    t.clone()
                } else {
                    Arc::new(DbTerm::App(f2, a2))
                }
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::{alpha_eq, normalize, parse_surface, reduce_once_all};

    fn p(s: &str) -> NamedTerm {
        parse_surface(s).unwrap()
    }

    fn nf(s: &str) -> NamedTerm {
        normalize_hsub(&p(s), 100_000).unwrap()
    }

    #[test]
    fn motivating_example() {
        assert!(alpha_eq(&nf(r"(\x.\y. a b y) g f"), &p("a b f")));
    }

    #[test]
    fn normalizes_under_binders() {
        assert!(alpha_eq(&nf(r"\x. (\y. y) x"), &p(r"\x. x")));
    }

    #[test]
    fn church_exponentiation() {
        let two = r"(\f.\x. f (f x))";
        let three = r"(\f.\x. f (f (f x)))";
        let m = format!(r"(\m.\n. n m) {two} {three}");
        let got = nf(&m);
        let want = normalize(&p(&m), 100_000).unwrap();
        assert!(alpha_eq(&got, &want));
        assert!(alpha_eq(&got, &p(r"\f.\x. f (f (f (f (f (f (f (f x)))))))")));
        assert!(reduce_once_all(&got).is_empty());
    }

    #[test]
    fn indices_are_shifted_under_binders() {
        // the substituted term mentions an outer binder and lands under one
        assert!(alpha_eq(&nf(r"\a. (\x.\y. x y) (a a)"), &p(r"\a.\y. a a y")));
        assert!(alpha_eq(&nf(r"\a. (\x.\b. x) a"), &p(r"\a.\b. a")));
    }

    #[test]
    fn created_redexes_are_contracted() {
        assert!(alpha_eq(&nf(r"(\f. f c) (\x. x x)"), &p("c c")));
        assert!(alpha_eq(&nf(r"(\f.\y. f (f y)) (\x. x) z"), &p("z")));
    }

    #[test]
    fn divergence_exhausts_fuel() {
        assert_eq!(normalize_hsub(&p(r"(\x. x x) (\x. x x)"), 1000), Err(FuelExhausted));
    }
}
