use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use super::debruijn::{named_under, to_debruijn, DbTerm};
use crate::env::{ConsList, SnocList};
use crate::eval::{EvalConfig, EvalError, NormalForm};
use crate::named::{FreshSupply, Name, NamedTerm};
use crate::{drop_queue, stack};

/// Value of the closure baseline. A closure keeps the environment of its
/// whole scope, whether or not its body refers to every entry.
#[derive(Clone)]
pub struct DbValue(Arc<DbValueNode>);

pub enum DbValueNode {
    Spine { head: Name, args: SnocList<DbValue> },
    Closure { body: Arc<DbTerm>, env: ConsList<DbValue> },
}

impl DbValue {
    pub fn var(head: Name) -> Self {
        DbValue(Arc::new(DbValueNode::Spine { head, args: SnocList::new() }))
    }

    pub fn node(&self) -> &DbValueNode {
        &self.0
    }

    pub fn is_closure(&self) -> bool {
        matches!(*self.0, DbValueNode::Closure { .. })
    }

    fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }
}

impl Drop for DbValueNode {
    fn drop(&mut self) {
        match self {
            DbValueNode::Spine { args, .. } if !args.is_empty() => drop_queue::defer(std::mem::take(args)),
            DbValueNode::Closure { env, .. } if !env.is_empty() => drop_queue::defer(std::mem::take(env)),
            _ => {}
        }
    }
}

impl fmt::Debug for DbValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            DbValueNode::Spine { head, args } => f.debug_tuple("Spine").field(head).field(&args.to_vec_ref()).finish(),
            DbValueNode::Closure { body, env } => {
                f.debug_tuple("Closure").field(body).field(&env.iter().collect::<Vec<_>>()).finish()
            }
        }
    }
}

/// Distinct value nodes reachable from `v`, shared nodes counted once.
pub fn db_value_node_count(v: &DbValue) -> usize {
    let mut seen = HashSet::new();
    let mut todo = vec![v.clone()];
    while let Some(v) = todo.pop() {
        if !seen.insert(v.addr()) {
            continue;
        }
        match v.node() {
            DbValueNode::Spine { args, .. } => todo.extend(args.iter_rev().cloned()),
            DbValueNode::Closure { env, .. } => todo.extend(env.iter().cloned()),
        }
    }
    seen.len()
}

/// Call-by-value evaluator over de Bruijn terms with scope-wide closures.
/// Rule applications are counted the same way as for ordered terms: one per
/// evaluated node and one per application of a value.
#[derive(Debug)]
pub struct ClosureEvaluator {
    fuel: u64,
    steps: u64,
}

impl ClosureEvaluator {
    pub fn new(fuel: u64) -> Self {
        ClosureEvaluator { fuel, steps: 0 }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        if self.steps >= self.fuel {
            return Err(EvalError::FuelExhausted { steps: self.steps });
        }
        self.steps += 1;
        Ok(())
    }

    /// Evaluates `t` with index `i` bound to `env[i]`.
    pub fn eval(&mut self, t: &Arc<DbTerm>, env: &ConsList<DbValue>) -> Result<DbValue, EvalError> {
        stack::guard(|| {
            self.tick()?;
            match &**t {
                DbTerm::BVar(i) => env
                    .get(*i)
                    .cloned()
                    .ok_or_else(|| EvalError::Invariant(format!("index {i} outside environment of length {}", env.len()))),
                DbTerm::FVar(x) => Ok(DbValue::var(x.clone())),
                DbTerm::App(f, a) => {
                    let v = self.eval(f, env)?;
                    let w = self.eval(a, env)?;
                    self.apply(v, w)
                }
                DbTerm::Lam(b) => Ok(DbValue(Arc::new(DbValueNode::Closure { body: b.clone(), env: env.clone() }))),
            }
        })
    }

    pub fn apply(&mut self, v: DbValue, w: DbValue) -> Result<DbValue, EvalError> {
        self.tick()?;
        let (body, env) = match v.node() {
            DbValueNode::Spine { head, args } => {
                return Ok(DbValue(Arc::new(DbValueNode::Spine { head: head.clone(), args: args.push(w) })))
            }
            DbValueNode::Closure { body, env } => (body.clone(), env.push_front(w)),
        };
        drop(v);
        self.eval(&body, &env)
    }

    /// Full normal form, reading closures back by applying them to fresh
    /// variables.
    pub fn normal_form(&mut self, v: &DbValue) -> Result<NamedTerm, EvalError> {
        let mut supply = FreshSupply::new(db_value_names(v));
        self.read_back(v, &mut supply, &mut None)
    }

    /// Like [`ClosureEvaluator::normal_form`], also reporting the largest
    /// [`db_value_node_count`] among `v` and every value produced on the way.
    pub fn normal_form_tracked(&mut self, v: &DbValue) -> Result<NormalForm, EvalError> {
        let mut supply = FreshSupply::new(db_value_names(v));
        let mut peak = Some(db_value_node_count(v));
        let term = self.read_back(v, &mut supply, &mut peak)?;
        Ok(NormalForm { term, peak_live_nodes: peak.unwrap_or(0) })
    }

    fn read_back(&mut self, v: &DbValue, supply: &mut FreshSupply, peak: &mut Option<usize>) -> Result<NamedTerm, EvalError> {
        stack::guard(|| match v.node() {
            DbValueNode::Spine { head, args } => {
                let mut out = NamedTerm::Var(head.clone());
                for arg in args.to_vec_ref() {
                    out = NamedTerm::app(out, self.read_back(arg, supply, peak)?);
                }
                Ok(out)
            }
            DbValueNode::Closure { .. } => {
                let z = supply.next_name();
                let w = self.apply(v.clone(), DbValue::var(z.clone()))?;
                if let Some(p) = peak.as_mut() {
                    *p = (*p).max(db_value_node_count(&w));
                }
                Ok(NamedTerm::Lam(z, Box::new(self.read_back(&w, supply, peak)?)))
            }
        })
    }
}

fn db_value_names(v: &DbValue) -> HashSet<Name> {
    let mut out = HashSet::new();
    let mut seen = HashSet::new();
    let mut todo = vec![v.clone()];
    while let Some(v) = todo.pop() {
        if !seen.insert(v.addr()) {
            continue;
        }
        match v.node() {
            DbValueNode::Spine { head, args } => {
                out.insert(head.clone());
                todo.extend(args.iter_rev().cloned());
            }
            DbValueNode::Closure { body, env } => {
                body.free_names(&mut out);
                todo.extend(env.iter().cloned());
            }
        }
    }
    out
}

/// Evaluates `t` under `env` with at most `fuel` rule applications.
pub fn eval_closures(t: &DbTerm, env: &[DbValue], fuel: u64) -> Result<DbValue, EvalError> {
    let mut ev = ClosureEvaluator::new(fuel);
    ev.eval(&Arc::new(t.clone()), &ConsList::from_vec(env.to_vec()))
}

/// Weak head normal form of a named term under the closure baseline.
pub fn whnf_closures(m: &NamedTerm, config: EvalConfig) -> Result<DbValue, EvalError> {
    eval_closures(&to_debruijn(m), &[], config.fuel)
}

/// Surface form of a value: closures print as abstractions whose body has
/// the environment substituted in.
pub fn print_db_value(v: &DbValue) -> NamedTerm {
    let mut supply = FreshSupply::new(db_value_names(v));
    print_with(v, &mut supply)
}

fn print_with(v: &DbValue, supply: &mut FreshSupply) -> NamedTerm {
    stack::guard(|| match v.node() {
        DbValueNode::Spine { head, args } => {
            NamedTerm::apps(NamedTerm::Var(head.clone()), args.to_vec_ref().into_iter().map(|a| print_with(a, supply)))
        }
        DbValueNode::Closure { body, env } => {
            let mut scope: Vec<NamedTerm> = env.iter().map(|w| print_with(w, supply)).collect();
            scope.reverse();
            let z = supply.next_name();
            scope.push(NamedTerm::Var(z.clone()));
            NamedTerm::Lam(z, Box::new(named_under(body, &mut scope, supply)))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::{alpha_eq, parse_surface};

    fn p(s: &str) -> NamedTerm {
        parse_surface(s).unwrap()
    }

    fn whnf_print(s: &str) -> NamedTerm {
        print_db_value(&whnf_closures(&p(s), EvalConfig::default()).unwrap())
    }

    #[test]
    fn motivating_example() {
        assert_eq!(whnf_print(r"(\x.\y. a b y) g f"), p("a b f"));
    }

    #[test]
    fn s_applied() {
        assert_eq!(whnf_print(r"(\x.\y.\z. x z (y z)) g f n"), p("g n (f n)"));
        assert!(alpha_eq(&whnf_print(r"(\x.\y.\z. x z (y z)) g f"), &p(r"\z. g z (f z)")));
    }

    #[test]
    fn closure_keeps_whole_scope() {
        let v = whnf_closures(&p(r"(\big. (\x.\y. y) big) (c d d d)"), EvalConfig::default()).unwrap();
        match v.node() {
            DbValueNode::Closure { env, .. } => assert_eq!(env.len(), 2),
            _ => panic!("expected a closure"),
        }
        // closure, the spine and its three arguments, twice referenced
        assert_eq!(db_value_node_count(&v), 5);
    }

    #[test]
    fn fresh_names_avoid_captured_values() {
        let printed = whnf_print(r"(\x.\y. x y) z0");
        assert!(alpha_eq(&printed, &p(r"\w. z0 w")), "{printed}");
    }

    #[test]
    fn normal_forms() {
        let m = p(r"(\m.\n.\f.\x. m f (n f x)) (\f.\x. f (f x)) (\f.\x. f x)");
        let mut ev = ClosureEvaluator::new(10_000);
        let v = ev.eval(&Arc::new(to_debruijn(&m)), &ConsList::new()).unwrap();
        let nf = ev.normal_form_tracked(&v).unwrap();
        assert!(alpha_eq(&nf.term, &p(r"\f.\x. f (f (f x))")));
        assert!(nf.peak_live_nodes >= 1);
    }

    #[test]
    fn fuel_runs_out_on_omega() {
        let err = whnf_closures(&p(r"(\x. x x) (\x. x x)"), EvalConfig::new(Default::default(), 500)).unwrap_err();
        assert_eq!(err, EvalError::FuelExhausted { steps: 500 });
    }

    #[test]
    fn same_step_count_as_ordered() {
        for s in [r"(\x.\y.\z. x z (y z)) g f n", r"(\x.\y. a b y) g f", "a b", r"(\x. x) (\y. y y) c"] {
            let m = p(s);
            let mut ord = crate::Evaluator::new(EvalConfig::default());
            crate::eval::whnf_with(&m, &mut ord).unwrap();
            let mut clo = ClosureEvaluator::new(crate::DEFAULT_FUEL);
            clo.eval(&Arc::new(to_debruijn(&m)), &ConsList::new()).unwrap();
            assert_eq!(ord.steps(), clo.steps(), "{s}");
        }
    }
}
