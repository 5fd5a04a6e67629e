use std::collections::HashSet;

use thiserror::Error;

use super::{alpha_eq, fresh_name, Name, NamedTerm};
use crate::stack;

/// Default β-step budget for the reduction oracles.
pub const DEFAULT_ORACLE_FUEL: u64 = 100_000;

/// Default cap on nodes visited or copied while substituting. Terms whose
/// normal form is out of reach within this much work are reported as
/// [`FuelExhausted`], like divergent ones.
pub const DEFAULT_WORK_LIMIT: u64 = 5_000_000;

/// The step or work budget ran out before a normal form was reached. This
/// signals possible divergence, not a malformed input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("fuel exhausted")]
pub struct FuelExhausted;

#[derive(Debug, Clone)]
pub struct Budget {
    fuel: u64,
    steps: u64,
    work: u64,
    work_limit: u64,
}

impl Budget {
    pub fn new(fuel: u64) -> Self {
        Self::with_work_limit(fuel, DEFAULT_WORK_LIMIT)
    }

    pub fn with_work_limit(fuel: u64, work_limit: u64) -> Self {
        Budget { fuel, steps: 0, work: 0, work_limit }
    }

    pub fn unlimited() -> Self {
        Self::with_work_limit(u64::MAX, u64::MAX)
    }

    /// β-contractions performed so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub(crate) fn step(&mut self) -> Result<(), FuelExhausted> {
        if self.steps >= self.fuel {
            return Err(FuelExhausted);
        }
        self.steps += 1;
        Ok(())
    }

    pub(crate) fn charge(&mut self, n: u64) -> Result<(), FuelExhausted> {
        self.work = self.work.saturating_add(n);
        if self.work > self.work_limit {
            Err(FuelExhausted)
        } else {
            Ok(())
        }
    }
}

/// Capture-avoiding `t[s/x]`. Binders that would capture a free name of `s`
/// are renamed to the first `z<i>` free in neither side.
pub fn subst(t: &NamedTerm, x: &str, s: &NamedTerm) -> NamedTerm {
    subst_in(t, x, &mut Replacement::new(s), &mut Budget::unlimited()).expect("unlimited budget")
}

// The term being substituted, with its free names computed on first use.
struct Replacement<'a> {
    term: &'a NamedTerm,
    size: Option<u64>,
    free: Option<HashSet<Name>>,
}

impl<'a> Replacement<'a> {
    fn new(term: &'a NamedTerm) -> Self {
        Replacement { term, size: None, free: None }
    }

    fn size(&mut self) -> u64 {
        *self.size.get_or_insert_with(|| self.term.size() as u64)
    }

    fn captures(&mut self, y: &str, budget: &mut Budget) -> Result<bool, FuelExhausted> {
        if self.free.is_none() {
            budget.charge(self.size())?;
            self.free = Some(self.term.free_vars());
        }
        Ok(self.free.as_ref().is_some_and(|fv| fv.contains(y)))
    }
}

fn subst_in(t: &NamedTerm, x: &str, s: &mut Replacement, budget: &mut Budget) -> Result<NamedTerm, FuelExhausted> {
    stack::guard(|| {
        budget.charge(1)?;
        Ok(match t {
            NamedTerm::Var(y) => {
                if &**y == x {
                    budget.charge(s.size())?;
                    s.term.clone()
                } else {
                    t.clone()
                }
            }
            NamedTerm::App(f, a) => {
                NamedTerm::App(Box::new(subst_in(f, x, s, budget)?), Box::new(subst_in(a, x, s, budget)?))
            }
            NamedTerm::Lam(y, b) => {
                if &**y == x {
                    budget.charge(b.size() as u64)?;
                    t.clone()
                } else if s.captures(y, budget)? && {
                    budget.charge(b.size() as u64)?;
                    b.is_free(x)
                } {
                    let fv_b = b.free_vars();
                    let z = fresh_name(|n| {
                        n == x || fv_b.contains(n) || s.free.as_ref().is_some_and(|fv| fv.contains(n))
                    });
                    let var_z = NamedTerm::Var(z.clone());
                    let renamed = subst_in(b, y, &mut Replacement::new(&var_z), budget)?;
                    NamedTerm::Lam(z, Box::new(subst_in(&renamed, x, s, budget)?))
                } else {
                    NamedTerm::Lam(y.clone(), Box::new(subst_in(b, x, s, budget)?))
                }
            }
        })
    })
}

fn unspine(t: NamedTerm) -> (NamedTerm, Vec<NamedTerm>) {
    let mut args = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            NamedTerm::App(f, a) => {
                args.push(*a);
                cur = *f;
            }
            head => {
                args.reverse();
                return (head, args);
            }
        }
    }
}

// Contracts the head redex of `(\x. body) a0 a1 … an`.
fn contract_head(
    x: &Name,
    body: &NamedTerm,
    args: Vec<NamedTerm>,
    budget: &mut Budget,
) -> Result<NamedTerm, FuelExhausted> {
    budget.step()?;
    let mut args = args.into_iter();
    let first = args.next().expect("head redex has an argument");
    let reduced = subst_in(body, x, &mut Replacement::new(&first), budget)?;
    Ok(NamedTerm::apps(reduced, args))
}

/// Leftmost-outermost reduction to β-normal form within `fuel` steps.
pub fn normalize(t: &NamedTerm, fuel: u64) -> Result<NamedTerm, FuelExhausted> {
    normalize_with(t, &mut Budget::new(fuel))
}

pub fn normalize_with(t: &NamedTerm, budget: &mut Budget) -> Result<NamedTerm, FuelExhausted> {
    normal_order(t.clone(), budget)
}

// Normal order: contract the head redex until the head is a variable, then
// normalize the arguments from left to right; under a binder, the body.
fn normal_order(t: NamedTerm, budget: &mut Budget) -> Result<NamedTerm, FuelExhausted> {
    stack::guard(|| {
        let mut t = t;
        loop {
            budget.charge(1)?;
            match t {
                NamedTerm::Var(_) => return Ok(t),
                NamedTerm::Lam(x, body) => {
                    return Ok(NamedTerm::Lam(x, Box::new(normal_order(*body, budget)?)))
                }
                app @ NamedTerm::App(..) => {
                    let (head, args) = unspine(app);
                    budget.charge(args.len() as u64)?;
                    if let NamedTerm::Lam(x, body) = &head {
                        t = contract_head(x, body, args, budget)?;
                        continue;
                    }
                    let mut out = head;
                    for arg in args {
                        out = NamedTerm::app(out, normal_order(arg, budget)?);
                    }
                    return Ok(out);
                }
            }
        }
    })
}

/// Head reduction to weak head normal form: stops at an abstraction or at an
/// application headed by a free variable, whose arguments are left alone.
pub fn whnf_oracle(t: &NamedTerm, fuel: u64) -> Result<NamedTerm, FuelExhausted> {
    whnf_oracle_with(t, &mut Budget::new(fuel))
}

pub fn whnf_oracle_with(t: &NamedTerm, budget: &mut Budget) -> Result<NamedTerm, FuelExhausted> {
    let mut t = t.clone();
    loop {
        budget.charge(1)?;
        if !matches!(t, NamedTerm::App(..)) {
            return Ok(t);
        }
        let (head, args) = unspine(t);
        budget.charge(args.len() as u64)?;
        match &head {
            NamedTerm::Lam(x, body) => t = contract_head(x, body, args, budget)?,
            _ => return Ok(NamedTerm::apps(head, args)),
        }
    }
}

/// All one-step β-reducts of `t`, one representative per α-class.
pub fn reduce_once_all(t: &NamedTerm) -> Vec<NamedTerm> {
    let mut all = Vec::new();
    reducts(t, &mut |r| all.push(r));
    let mut distinct: Vec<NamedTerm> = Vec::with_capacity(all.len());
    for r in all {
        if !distinct.iter().any(|d| alpha_eq(d, &r)) {
            distinct.push(r);
        }
    }
    distinct
}

fn reducts(t: &NamedTerm, emit: &mut dyn FnMut(NamedTerm)) {
    stack::guard(|| match t {
        NamedTerm::Var(_) => {}
        NamedTerm::Lam(x, b) => {
            reducts(b, &mut |r| emit(NamedTerm::Lam(x.clone(), Box::new(r))));
        }
        NamedTerm::App(f, a) => {
            if let NamedTerm::Lam(x, body) = &**f {
                emit(subst(body, x, a));
            }
            reducts(f, &mut |r| emit(NamedTerm::App(Box::new(r), a.clone())));
            reducts(a, &mut |r| emit(NamedTerm::App(f.clone(), Box::new(r))));
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::parse_surface;

    fn p(s: &str) -> NamedTerm {
        parse_surface(s).unwrap()
    }

    fn church(n: usize) -> NamedTerm {
        let body = (0..n).fold(NamedTerm::var("x"), |acc, _| NamedTerm::app(NamedTerm::var("f"), acc));
        NamedTerm::lam("f", NamedTerm::lam("x", body))
    }

    #[test]
    fn subst_replaces_free_occurrences() {
        assert_eq!(subst(&p("x y"), "x", &p("g")), p("g y"));
    }

    #[test]
    fn subst_avoids_capture() {
        let out = subst(&p(r"\x. x y"), "y", &p("x"));
        assert!(alpha_eq(&out, &p(r"\x'. x' x")));
        assert_eq!(out, p(r"\z0. z0 x"));
        let fv: Vec<_> = out.free_vars().into_iter().collect();
        assert_eq!(fv, vec![Name::from("x")]);
    }

    #[test]
    fn subst_drops_unused_substitution() {
        assert_eq!(subst(&p(r"\y. a b y"), "x", &p("g")), p(r"\y. a b y"));
        assert_eq!(subst(&p(r"\x. x"), "x", &p("g")), p(r"\x. x"));
    }

    #[test]
    fn one_step_reducts() {
        assert_eq!(reduce_once_all(&p(r"(\x.x) a")), vec![p("a")]);
        assert!(reduce_once_all(&p("a b")).is_empty());
        let got = reduce_once_all(&p(r"(\x. x x)((\y.y) z)"));
        assert_eq!(got.len(), 2);
        for want in [p(r"((\y.y) z)((\y.y) z)"), p(r"(\x. x x) z")] {
            assert!(got.iter().any(|g| alpha_eq(g, &want)), "missing {want}");
        }
    }

    #[test]
    fn alpha_equal_reducts_are_merged() {
        // the outer and the inner redex contract to the same term
        let got = reduce_once_all(&p(r"(\x. x) ((\x. x) a)"));
        assert_eq!(got.len(), 1);
        assert!(alpha_eq(&got[0], &p(r"(\y. y) a")));
    }

    #[test]
    fn normalizes_motivating_example() {
        assert_eq!(normalize(&p(r"(\x.\y. a b y) g f"), 100).unwrap(), p("a b f"));
        assert_eq!(normalize(&p("a"), 1).unwrap(), p("a"));
    }

    #[test]
    fn church_exponentiation() {
        let two = church(2);
        let exp = NamedTerm::apps(p(r"\m.\n. n m"), [two.clone(), two]);
        let nf = normalize(&exp, DEFAULT_ORACLE_FUEL).unwrap();
        assert!(alpha_eq(&nf, &church(4)), "{nf}");
    }

    #[test]
    fn omega_runs_out_of_fuel() {
        let omega = p(r"(\x. x x) (\x. x x)");
        assert_eq!(normalize(&omega, 1000), Err(FuelExhausted));
        assert_eq!(whnf_oracle(&omega, 1000), Err(FuelExhausted));
    }

    #[test]
    fn growth_is_bounded_by_work_limit() {
        // each step doubles the term; the work cap stops it long before the fuel
        let blowup = p(r"(\x. x x x) (\x. x x x)");
        let mut budget = Budget::with_work_limit(u64::MAX, 100_000);
        assert_eq!(normalize_with(&blowup, &mut budget), Err(FuelExhausted));
    }

    #[test]
    fn head_reduction_stops_at_whnf() {
        assert_eq!(whnf_oracle(&p(r"(\x.\y. x) a"), 10).unwrap(), p(r"\y. a"));
        assert_eq!(whnf_oracle(&p(r"a ((\x.x) b)"), 10).unwrap(), p(r"a ((\x.x) b)"));
        let s = r"(\x.\y.\z. x z (y z))";
        assert_eq!(whnf_oracle(&p(&format!("{s} g f n")), 10).unwrap(), p("g n (f n)"));
    }

    #[test]
    fn normal_forms_have_no_redex() {
        let nf = normalize(&p(r"(\f. f (f a)) (\y. (\z. z) y)"), 100).unwrap();
        assert!(nf.is_beta_normal());
        assert!(reduce_once_all(&nf).is_empty());
        assert_eq!(nf, p("a"));
    }
}
