use thiserror::Error;

use super::value::{value_node_count, Value, ValueNode};
use crate::env::{Backend, EnvSeq};
use crate::named::{FreshSupply, NamedTerm};
use crate::ordered::{parse_closed, value_names, OrderedTerm};
use crate::{stack, DEFAULT_FUEL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    pub backend: Backend,
    /// Maximum number of rule applications.
    pub fuel: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { backend: Backend::List, fuel: DEFAULT_FUEL }
    }
}

impl EvalConfig {
    pub fn new(backend: Backend, fuel: u64) -> Self {
        EvalConfig { backend, fuel }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("fuel exhausted after {steps} steps")]
    FuelExhausted { steps: u64 },
    #[error("internal invariant breach: {0}")]
    Invariant(String),
}

/// A normal form read back from a value, with the largest value held while
/// reading it back.
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub term: NamedTerm,
    pub peak_live_nodes: usize,
}

/// Call-by-value evaluator for ordered terms.
///
/// Each rule application costs one unit of fuel. The function part of an
/// application is evaluated before the argument part.
#[derive(Debug)]
pub struct Evaluator {
    config: EvalConfig,
    steps: u64,
}

impl Evaluator {
    pub fn new(config: EvalConfig) -> Self {
        Evaluator { config, steps: 0 }
    }

    pub fn config(&self) -> EvalConfig {
        self.config
    }

    /// Rule applications performed so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        if self.steps >= self.config.fuel {
            return Err(EvalError::FuelExhausted { steps: self.steps });
        }
        self.steps += 1;
        Ok(())
    }

    /// Evaluates `t` under `env`, which must hold exactly one value per
    /// unbound dot of `t`.
    pub fn eval(&mut self, t: &OrderedTerm, env: EnvSeq<Value>) -> Result<Value, EvalError> {
        if !t.is_ordered() {
            return Err(EvalError::Invariant(format!("not an ordered term: {t}")));
        }
        if t.fv_count() != env.len() as i64 {
            return Err(EvalError::Invariant(format!(
                "environment of length {} for a term with {} unbound dots",
                env.len(),
                t.fv_count()
            )));
        }
        self.eval_in(t, env)
    }

    fn eval_in(&mut self, t: &OrderedTerm, env: EnvSeq<Value>) -> Result<Value, EvalError> {
        stack::guard(|| {
            self.tick()?;
            match t {
                OrderedTerm::Free(x) => {
                    if !env.is_empty() {
                        return Err(EvalError::Invariant(format!("free `{x}` evaluated with {} values", env.len())));
                    }
                    Ok(Value::var(x.clone()))
                }
                OrderedTerm::Dot => match (env.len(), env.get(0)) {
                    (1, Some(v)) => Ok(v.clone()),
                    (n, _) => Err(EvalError::Invariant(format!("bound occurrence evaluated with {n} values"))),
                },
                OrderedTerm::App(f, m, a) => {
                    if *m > env.len() {
                        return Err(EvalError::Invariant(format!("split {m} past environment of length {}", env.len())));
                    }
                    let (fun_env, arg_env) = env.split_at(*m);
                    drop(env);
                    let v = self.eval_in(f, fun_env)?;
                    let w = self.eval_in(a, arg_env)?;
                    self.apply(v, w)
                }
                OrderedTerm::Lam(k, b) => Ok(Value::closure(k.clone(), b.clone(), env)),
            }
        })
    }

    /// Applies a value to an argument: spines grow by one argument, closures
    /// insert the argument into their environment and evaluate their body.
    pub fn apply(&mut self, v: Value, w: Value) -> Result<Value, EvalError> {
        self.tick()?;
        let (body, env) = match v.node() {
            ValueNode::Spine { head, args } => return Ok(Value::from_spine(head.clone(), args.push(w))),
            ValueNode::Closure { kvec, body, env } => {
                if kvec.sum() > env.len() {
                    return Err(EvalError::Invariant(format!(
                        "gaps {kvec:?} exceed closure environment of length {}",
                        env.len()
                    )));
                }
                (body.clone(), env.multi_insert(kvec, w))
            }
        };
        drop(v);
        self.eval_in(&body, env)
    }

    /// Full normal form of `v`: spines are read back argument by argument,
    /// closures are applied to fresh variables and read back under a binder.
    pub fn normal_form(&mut self, v: &Value) -> Result<NamedTerm, EvalError> {
        let mut supply = fresh_supply(v);
        self.read_back(v, &mut supply, &mut None)
    }

    /// Like [`Evaluator::normal_form`], also reporting the largest
    /// [`value_node_count`] among `v` and every value produced on the way.
    pub fn normal_form_tracked(&mut self, v: &Value) -> Result<NormalForm, EvalError> {
        let mut supply = fresh_supply(v);
        let mut peak = Some(value_node_count(v));
        let term = self.read_back(v, &mut supply, &mut peak)?;
        Ok(NormalForm { term, peak_live_nodes: peak.unwrap_or(0) })
    }

    fn read_back(
        &mut self,
        v: &Value,
        supply: &mut FreshSupply,
        peak: &mut Option<usize>,
    ) -> Result<NamedTerm, EvalError> {
        stack::guard(|| match v.node() {
            ValueNode::Spine { head, args } => {
                let mut out = NamedTerm::Var(head.clone());
                for arg in args.to_vec_ref() {
                    out = NamedTerm::app(out, self.read_back(arg, supply, peak)?);
                }
                Ok(out)
            }
            ValueNode::Closure { .. } => {
                let z = supply.next_name();
                let w = self.apply(v.clone(), Value::var(z.clone()))?;
                if let Some(p) = peak.as_mut() {
                    *p = (*p).max(value_node_count(&w));
                }
                Ok(NamedTerm::Lam(z, Box::new(self.read_back(&w, supply, peak)?)))
            }
        })
    }
}

fn fresh_supply(v: &Value) -> FreshSupply {
    let mut avoid = Default::default();
    value_names(std::slice::from_ref(v), &mut avoid);
    FreshSupply::new(avoid)
}

/// Weak head normal form of a named term: translate it in the empty context
/// and evaluate it under the empty environment.
pub fn whnf(m: &NamedTerm, config: EvalConfig) -> Result<Value, EvalError> {
    whnf_with(m, &mut Evaluator::new(config))
}

pub fn whnf_with(m: &NamedTerm, evaluator: &mut Evaluator) -> Result<Value, EvalError> {
    let t = parse_closed(m);
    let env = EnvSeq::empty(evaluator.config().backend);
    evaluator.eval(&t, env)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::named::{alpha_eq, normalize, parse_surface, Name};
    use crate::ordered::{print_value, KVec};

    const S: &str = r"(\x.\y.\z. x z (y z))";

    fn p(s: &str) -> NamedTerm {
        parse_surface(s).unwrap()
    }

    fn var(x: &str) -> Value {
        Value::var(Name::from(x))
    }

    fn both(mut f: impl FnMut(EvalConfig)) {
        for backend in [Backend::List, Backend::Tree] {
            f(EvalConfig::new(backend, 10_000));
        }
    }

    fn s_body() -> OrderedTerm {
        OrderedTerm::app(
            OrderedTerm::app(OrderedTerm::Dot, 1, OrderedTerm::Dot),
            2,
            OrderedTerm::app(OrderedTerm::Dot, 1, OrderedTerm::Dot),
        )
    }

    #[test]
    fn s_applied_to_three_variables() {
        both(|cfg| {
            let v = whnf(&p(&format!("{S} g f n")), cfg).unwrap();
            let n = var("n");
            assert_eq!(v, Value::spine("g".into(), vec![n.clone(), Value::spine("f".into(), vec![n])]));
            assert_eq!(print_value(&v), p("g n (f n)"));
        });
    }

    #[test]
    fn s_applied_to_two_variables_is_a_closure() {
        both(|cfg| {
            let v = whnf(&p(&format!("{S} g f")), cfg).unwrap();
            match v.node() {
                ValueNode::Closure { kvec, body, env } => {
                    assert_eq!(**kvec, [1, 1]);
                    assert_eq!(**body, s_body());
                    assert_eq!(env.to_vec(), vec![var("g"), var("f")]);
                    assert_eq!(env.backend(), cfg.backend);
                }
                _ => panic!("expected a closure, got {:?}", v),
            }
        });
    }

    #[test]
    fn free_variable_evaluates_to_bare_spine() {
        both(|cfg| {
            let mut ev = Evaluator::new(cfg);
            assert_eq!(ev.eval(&OrderedTerm::free("a"), EnvSeq::empty(cfg.backend)).unwrap(), var("a"));
            assert_eq!(ev.steps(), 1);
        });
    }

    #[test]
    fn apply_rules() {
        both(|cfg| {
            let mut ev = Evaluator::new(cfg);
            let w = var("w");
            assert_eq!(ev.apply(var("x"), w.clone()).unwrap(), Value::spine("x".into(), vec![w.clone()]));

            let env = EnvSeq::from_vec(cfg.backend, vec![var("g"), var("f")]);
            let closure = Value::closure(KVec::new(vec![1, 1]), Arc::new(s_body()), env);
            let direct = ev
                .eval(&s_body(), EnvSeq::from_vec(cfg.backend, vec![var("g"), var("n"), var("f"), var("n")]))
                .unwrap();
            assert_eq!(ev.apply(closure, var("n")).unwrap(), direct);

            // an abstraction that ignores its argument keeps an empty environment
            let k = Value::closure(KVec::empty(), Arc::new(OrderedTerm::free("a")), EnvSeq::empty(cfg.backend));
            assert_eq!(ev.apply(k, w).unwrap(), var("a"));
        });
    }

    #[test]
    fn motivating_example_reaches_a_b_f() {
        both(|cfg| {
            let v = whnf(&p(r"(\x.\y. a b y) g f"), cfg).unwrap();
            assert_eq!(print_value(&v), p("a b f"));
        });
    }

    #[test]
    fn no_reduction_under_binders() {
        let v = whnf(&p(r"\x. (\y. y y) (\y. y y)"), EvalConfig::default()).unwrap();
        assert!(v.is_closure());
    }

    #[test]
    fn omega_exhausts_fuel() {
        both(|cfg| {
            let err = whnf(&p(r"(\x. x x) (\x. x x)"), cfg).unwrap_err();
            assert_eq!(err, EvalError::FuelExhausted { steps: cfg.fuel });
        });
    }

    #[test]
    fn mismatched_environment_is_rejected() {
        let mut ev = Evaluator::new(EvalConfig::default());
        let err = ev.eval(&OrderedTerm::Dot, EnvSeq::empty(Backend::List)).unwrap_err();
        assert!(matches!(err, EvalError::Invariant(_)));
        let bad = OrderedTerm::app(OrderedTerm::Dot, 0, OrderedTerm::Dot);
        let env = EnvSeq::from_vec(Backend::List, vec![var("a"), var("b")]);
        assert!(matches!(ev.eval(&bad, env), Err(EvalError::Invariant(_))));
    }

    #[test]
    fn normal_form_goes_under_binders() {
        both(|cfg| {
            let mut ev = Evaluator::new(cfg);
            let m = p(r"(\m.\n.\f.\x. m f (n f x)) (\f.\x. f (f x)) (\f.\x. f x)");
            let v = whnf_with(&m, &mut ev).unwrap();
            let nf = ev.normal_form(&v).unwrap();
            assert!(alpha_eq(&nf, &p(r"\f.\x. f (f (f x))")), "{nf}");
            assert!(alpha_eq(&nf, &normalize(&m, 1000).unwrap()));
        });
    }

    #[test]
    fn read_back_names_avoid_free_names() {
        let m = p(r"\x. z0 x");
        let mut ev = Evaluator::new(EvalConfig::default());
        let v = whnf_with(&m, &mut ev).unwrap();
        let nf = ev.normal_form(&v).unwrap();
        assert_eq!(nf, p(r"\z1. z0 z1"));
    }
}
