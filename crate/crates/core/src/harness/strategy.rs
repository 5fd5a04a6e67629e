use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::baselines::{from_debruijn, normalize_hsub_db, to_debruijn, ClosureEvaluator, DbTerm, DbValue};
use crate::env::{Backend, ConsList, EnvSeq};
use crate::eval::{EvalConfig, EvalError, Evaluator, Value};
use crate::named::{Budget, NamedTerm, DEFAULT_WORK_LIMIT};
use crate::ordered::parse_closed;

/// The four ways of computing a normal form that the harness compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    OrderedList,
    OrderedTree,
    Closures,
    BetaNormal,
}

impl Strategy {
    pub const ALL: [Strategy; 4] =
        [Strategy::OrderedList, Strategy::OrderedTree, Strategy::Closures, Strategy::BetaNormal];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::OrderedList => "ordered-list",
            Strategy::OrderedTree => "ordered-tree",
            Strategy::Closures => "closures",
            Strategy::BetaNormal => "beta-normal",
        }
    }

    /// Substitution-list backend, for the ordered strategies.
    pub fn backend(self) -> Option<Backend> {
        match self {
            Strategy::OrderedList => Some(Backend::List),
            Strategy::OrderedTree => Some(Backend::Tree),
            Strategy::Closures | Strategy::BetaNormal => None,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown strategy `{s}` (expected ordered-list, ordered-tree, closures or beta-normal)"))
    }
}

/// A normal form with the cost of reaching it.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub normal_form: NamedTerm,
    /// Rule applications for the evaluators, β-contractions for
    /// hereditary substitution.
    pub steps: u64,
    /// Largest value held while computing the normal form; for hereditary
    /// substitution, the size of the normal form itself.
    pub peak_live_nodes: usize,
}

/// Full normal form of `m` under `strategy`, with at most `fuel` steps.
pub fn run_strategy(m: &NamedTerm, strategy: Strategy, fuel: u64) -> Result<RunOutcome, EvalError> {
    match strategy {
        Strategy::OrderedList | Strategy::OrderedTree => {
            let backend = strategy.backend().expect("ordered strategy");
            let mut ev = Evaluator::new(EvalConfig::new(backend, fuel));
            let v = ev.eval(&parse_closed(m), EnvSeq::empty(backend))?;
            let nf = ev.normal_form_tracked(&v)?;
            Ok(RunOutcome { normal_form: nf.term, steps: ev.steps(), peak_live_nodes: nf.peak_live_nodes })
        }
        Strategy::Closures => {
            let mut ev = ClosureEvaluator::new(fuel);
            let v = ev.eval(&Arc::new(to_debruijn(m)), &ConsList::new())?;
            let nf = ev.normal_form_tracked(&v)?;
            Ok(RunOutcome { normal_form: nf.term, steps: ev.steps(), peak_live_nodes: nf.peak_live_nodes })
        }
        Strategy::BetaNormal => {
            let mut budget = Budget::with_work_limit(fuel, hsub_work_limit(fuel));
            let t = normalize_hsub_db(&Arc::new(to_debruijn(m)), &mut budget)
                .map_err(|_| EvalError::FuelExhausted { steps: budget.steps() })?;
            Ok(RunOutcome { normal_form: from_debruijn(&t), steps: budget.steps(), peak_live_nodes: t.size() })
        }
    }
}

/// What a strategy computes on its own terms: a weak head value for the
/// evaluators, the β-normal form for hereditary substitution. Nothing is
/// read back or named.
#[derive(Debug, Clone)]
pub enum NativeResult {
    Ordered(Value),
    Closures(DbValue),
    BetaNormal(Arc<DbTerm>),
}

/// Runs `strategy` on `m` up to its native result, translation included,
/// returning the result with the steps spent.
pub fn run_native(m: &NamedTerm, strategy: Strategy, fuel: u64) -> Result<(NativeResult, u64), EvalError> {
    match strategy {
        Strategy::OrderedList | Strategy::OrderedTree => {
            let backend = strategy.backend().expect("ordered strategy");
            let mut ev = Evaluator::new(EvalConfig::new(backend, fuel));
            let v = ev.eval(&parse_closed(m), EnvSeq::empty(backend))?;
            Ok((NativeResult::Ordered(v), ev.steps()))
        }
        Strategy::Closures => {
            let mut ev = ClosureEvaluator::new(fuel);
            let v = ev.eval(&Arc::new(to_debruijn(m)), &ConsList::new())?;
            Ok((NativeResult::Closures(v), ev.steps()))
        }
        Strategy::BetaNormal => {
            let mut budget = Budget::with_work_limit(fuel, hsub_work_limit(fuel));
            let t = normalize_hsub_db(&Arc::new(to_debruijn(m)), &mut budget)
                .map_err(|_| EvalError::FuelExhausted { steps: budget.steps() })?;
            Ok((NativeResult::BetaNormal(t), budget.steps()))
        }
    }
}

// Substitution work allowed alongside `fuel` contractions.
fn hsub_work_limit(fuel: u64) -> u64 {
    fuel.saturating_mul(64).max(DEFAULT_WORK_LIMIT)
}

/// Hex SHA-256 of the canonical de Bruijn text of `nf`; α-equivalent terms
/// share a digest.
pub fn digest(nf: &NamedTerm) -> String {
    let text = to_debruijn(nf).to_string();
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::{alpha_eq, parse_surface};

    #[test]
    fn names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("ordered".parse::<Strategy>().is_err());
    }

    #[test]
    fn strategies_agree_on_church_addition() {
        let m = parse_surface(r"(\m.\n.\f.\x. m f (n f x)) (\f.\x. f (f x)) (\f.\x. f x)").unwrap();
        let want = parse_surface(r"\f.\x. f (f (f x))").unwrap();
        let outs: Vec<_> = Strategy::ALL.iter().map(|&s| run_strategy(&m, s, 100_000).unwrap()).collect();
        for o in &outs {
            assert!(alpha_eq(&o.normal_form, &want));
            assert_eq!(digest(&o.normal_form), digest(&want));
        }
        assert_eq!(outs[0].steps, outs[1].steps);
        assert_eq!(outs[0].steps, outs[2].steps);
    }

    #[test]
    fn digest_ignores_binder_names() {
        let a = parse_surface(r"\x.\y. x y").unwrap();
        let b = parse_surface(r"\p.\q. p q").unwrap();
        let c = parse_surface(r"\p.\q. q p").unwrap();
        assert_eq!(digest(&a), digest(&b));
        assert_ne!(digest(&a), digest(&c));
        assert_eq!(digest(&a).len(), 64);
    }

    #[test]
    fn native_results() {
        let m = parse_surface(r"(\m.\n. n m) (\f.\x. f (f x)) (\f.\x. f (f (f x)))").unwrap();
        assert!(matches!(run_native(&m, Strategy::OrderedTree, 1000).unwrap().0, NativeResult::Ordered(v) if v.is_closure()));
        assert!(matches!(run_native(&m, Strategy::Closures, 1000).unwrap().0, NativeResult::Closures(v) if v.is_closure()));
        match run_native(&m, Strategy::BetaNormal, 1000).unwrap().0 {
            NativeResult::BetaNormal(t) => assert_eq!(t.size(), 2 + 2 * 8 + 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fuel_is_reported() {
        let omega = parse_surface(r"(\x. x x) (\x. x x)").unwrap();
        for s in Strategy::ALL {
            assert!(matches!(run_strategy(&omega, s, 1000), Err(EvalError::FuelExhausted { .. })), "{s}");
        }
    }
}
