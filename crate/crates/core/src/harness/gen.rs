use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::named::{Name, NamedTerm};

const BINDERS: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
// `z0` collides with the names chosen for fresh binders, which exercises
// capture avoidance when terms are printed back.
const FREE: [&str; 4] = ["a", "b", "c", "z0"];

/// A generated term and whether it came from the simply typed generator.
#[derive(Debug, Clone)]
pub struct GeneratedTerm {
    pub term: NamedTerm,
    pub typed: bool,
}

/// `count` pseudo-random terms of at most `max_size` nodes, fully determined
/// by `seed`. A `typed_bias` fraction of them, spread evenly through the
/// list, are simply typed under typed free variables and so normalize; the
/// rest are unrestricted.
pub fn gen_terms(seed: u64, count: usize, max_size: usize, typed_bias: f64) -> Vec<NamedTerm> {
    gen_corpus(seed, count, max_size, typed_bias).into_iter().map(|g| g.term).collect()
}

pub fn gen_corpus(seed: u64, count: usize, max_size: usize, typed_bias: f64) -> Vec<GeneratedTerm> {
    let max_size = max_size.max(1);
    let bias = typed_bias.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let typed = ((i + 1) as f64 * bias).floor() > (i as f64 * bias).floor();
            let budget = rng.gen_range(1..=max_size);
            let term = if typed {
                TypedGen::new(&mut rng).term(budget)
            } else {
                untyped(&mut rng, budget, &mut Vec::new())
            };
            debug_assert!(term.size() <= max_size);
            GeneratedTerm { term, typed }
        })
        .collect()
}

fn pick_name(rng: &mut ChaCha8Rng, pool: &[&str]) -> Name {
    Name::from(*pool.choose(rng).expect("non-empty pool"))
}

// Exactly `size` nodes.
fn untyped(rng: &mut ChaCha8Rng, size: usize, scope: &mut Vec<Name>) -> NamedTerm {
    if size <= 1 {
        return match scope.choose(rng) {
            Some(x) if rng.gen_bool(0.8) => NamedTerm::Var(x.clone()),
            _ => NamedTerm::Var(pick_name(rng, &FREE)),
        };
    }
    if size == 2 || rng.gen_bool(0.35) {
        let x = pick_name(rng, &BINDERS);
        scope.push(x.clone());
        let body = untyped(rng, size - 1, scope);
        scope.pop();
        NamedTerm::Lam(x, Box::new(body))
    } else {
        let left = rng.gen_range(1..size - 1);
        let f = untyped(rng, left, scope);
        let a = untyped(rng, size - 1 - left, scope);
        NamedTerm::app(f, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Ty {
    Base,
    Arrow(Arc<Ty>, Arc<Ty>),
}

impl Ty {
    fn arrow(a: Ty, b: Ty) -> Ty {
        Ty::Arrow(Arc::new(a), Arc::new(b))
    }

    // Argument types of a variable of type `self` used to produce `goal`.
    fn args_to(&self, goal: &Ty) -> Option<Vec<Ty>> {
        let mut args = Vec::new();
        let mut t = self;
        loop {
            if t == goal {
                return Some(args);
            }
            match t {
                Ty::Arrow(a, b) => {
                    args.push((**a).clone());
                    t = b;
                }
                Ty::Base => return None,
            }
        }
    }
}

struct TypedGen<'r> {
    rng: &'r mut ChaCha8Rng,
    // Free variables, one name per type.
    free: HashMap<Ty, Name>,
    scope: Vec<(Name, Ty)>,
}

impl<'r> TypedGen<'r> {
    fn new(rng: &'r mut ChaCha8Rng) -> Self {
        TypedGen { rng, free: HashMap::new(), scope: Vec::new() }
    }

    fn term(mut self, budget: usize) -> NamedTerm {
        let ty = self.ty(2);
        self.of_type(&ty, budget)
    }

    fn ty(&mut self, depth: u32) -> Ty {
        if depth == 0 || self.rng.gen_bool(0.5) {
            Ty::Base
        } else {
            Ty::arrow(self.ty(depth - 1), self.ty(depth - 1))
        }
    }

    fn free_var(&mut self, ty: &Ty) -> NamedTerm {
        let n = self.free.len();
        let name = self.free.entry(ty.clone()).or_insert_with(|| {
            let letter = (b'a' + (n % 20) as u8) as char;
            Name::from(if n < 20 { letter.to_string() } else { format!("{letter}{}", n / 20) })
        });
        NamedTerm::Var(name.clone())
    }

    // Bound variables not shadowed by a later binder of the same name.
    fn visible(&self) -> Vec<(Name, Ty)> {
        let mut out: Vec<(Name, Ty)> = Vec::new();
        for (x, t) in self.scope.iter().rev() {
            if !out.iter().any(|(y, _)| y == x) {
                out.push((x.clone(), t.clone()));
            }
        }
        out
    }

    // At most `budget` nodes, never fewer than one.
    fn of_type(&mut self, ty: &Ty, budget: usize) -> NamedTerm {
        crate::stack::guard(|| {
            let vars = self.visible();
            if budget <= 1 {
                let exact: Vec<&Name> = vars.iter().filter(|(_, t)| t == ty).map(|(x, _)| x).collect();
                return match exact.choose(self.rng) {
                    Some(x) if self.rng.gen_bool(0.8) => NamedTerm::Var((*x).clone()),
                    _ => self.free_var(ty),
                };
            }
            let roll: f64 = self.rng.gen();
            if budget >= 4 && roll < 0.25 {
                return self.redex(ty, budget);
            }
            if let (Ty::Arrow(a, b), true) = (ty, roll < 0.6) {
                let x = Name::from(*BINDERS.choose(self.rng).expect("non-empty"));
                self.scope.push((x.clone(), (**a).clone()));
                let body = self.of_type(b, budget - 1);
                self.scope.pop();
                return NamedTerm::Lam(x, Box::new(body));
            }
            self.neutral(ty, budget, &vars)
        })
    }

    // (\x. body) arg with both sides typed.
    fn redex(&mut self, ty: &Ty, budget: usize) -> NamedTerm {
        let arg_ty = self.ty(1);
        let body_budget = self.rng.gen_range(1..=budget - 3);
        let x = Name::from(*BINDERS.choose(self.rng).expect("non-empty"));
        self.scope.push((x.clone(), arg_ty.clone()));
        let body = self.of_type(ty, body_budget);
        self.scope.pop();
        let arg = self.of_type(&arg_ty, budget - 2 - body.size());
        NamedTerm::app(NamedTerm::Lam(x, Box::new(body)), arg)
    }

    // A variable applied to enough arguments to reach `ty`.
    fn neutral(&mut self, ty: &Ty, budget: usize, vars: &[(Name, Ty)]) -> NamedTerm {
        let heads: Vec<(NamedTerm, Vec<Ty>)> = vars
            .iter()
            .filter_map(|(x, t)| t.args_to(ty).map(|args| (NamedTerm::Var(x.clone()), args)))
            .filter(|(_, args)| 2 * args.len() < budget)
            .collect();
        let (head, args) = match heads.choose(self.rng) {
            Some(h) if self.rng.gen_bool(0.7) => h.clone(),
            _ => {
                let arity = if budget >= 3 { self.rng.gen_range(0..=((budget - 1) / 2).min(2)) } else { 0 };
                let args: Vec<Ty> = (0..arity).map(|_| self.ty(1)).collect();
                let head_ty = args.iter().rev().fold(ty.clone(), |acc, a| Ty::arrow(a.clone(), acc));
                (self.free_var(&head_ty), args)
            }
        };
        // Each argument gets at least one node; spare nodes are dealt out in order.
        let mut spare = budget - 1 - 2 * args.len();
        let mut out = head;
        for a in &args {
            let extra = if spare > 0 { self.rng.gen_range(0..=spare) } else { 0 };
            let arg = self.of_type(a, 1 + extra);
            spare -= arg.size() - 1;
            out = NamedTerm::app(out, arg);
        }
        out
    }
}
