use std::fmt;

use crate::env::Backend;
use crate::eval::{print_expr, step, weight, MachineExpr, Rule, StepError};
use crate::named::{alpha_eq, print_surface, reduce_once_all, NamedTerm};
use crate::ordered::parse_closed;

/// Outcome of running the small-step machine with per-step obligations:
/// rules 1–5 keep the printed term up to α and strictly raise the weight,
/// rule 6 performs exactly one β-step on the printed term.
#[derive(Debug, Clone, Default)]
pub struct CheckReport {
    pub steps: u64,
    /// Steps taken per rule, indexed by rule number minus one.
    pub rule_counts: [u64; 6],
    pub alpha_checked: u64,
    pub beta_checked: u64,
    /// Step indices (from 0) whose obligation failed.
    pub alpha_failures: Vec<u64>,
    pub beta_failures: Vec<u64>,
    pub weight_failures: Vec<u64>,
    pub fuel_exhausted: bool,
    pub invariant_breach: Option<String>,
    /// Printed final value, when the machine stopped on one.
    pub result: Option<NamedTerm>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.alpha_failures.is_empty()
            && self.beta_failures.is_empty()
            && self.weight_failures.is_empty()
            && self.invariant_breach.is_none()
    }
}

/// Runs the machine on the closed translation of `m` for at most `fuel`
/// steps, checking every step.
pub fn check_trace(m: &NamedTerm, fuel: u64, backend: Backend) -> CheckReport {
    let mut report = CheckReport::default();
    let mut e = MachineExpr::start(parse_closed(m), backend);
    let mut printed = print_expr(&e);
    let mut w = weight(&e);
    loop {
        let (next, rule) = match step(&e) {
            Ok(r) => r,
            Err(StepError::Stuck) => {
                report.result = Some(printed);
                return report;
            }
            Err(StepError::Invariant(msg)) => {
                report.invariant_breach = Some(msg);
                return report;
            }
        };
        if report.steps >= fuel {
            report.fuel_exhausted = true;
            return report;
        }
        let i = report.steps;
        report.steps += 1;
        report.rule_counts[rule.number() as usize - 1] += 1;
        let next_printed = print_expr(&next);
        let next_w = weight(&next);
        if rule.is_beta() {
            report.beta_checked += 1;
            if !reduce_once_all(&printed).iter().any(|r| alpha_eq(r, &next_printed)) {
                report.beta_failures.push(i);
            }
        } else {
            report.alpha_checked += 1;
            if !alpha_eq(&printed, &next_printed) {
                report.alpha_failures.push(i);
            }
            if next_w <= w {
                report.weight_failures.push(i);
            }
        }
        e = next;
        printed = next_printed;
        w = next_w;
    }
}

fn verdict(failures: &[u64]) -> String {
    match failures {
        [] => "PASS".to_string(),
        [first, ..] => format!("FAIL ({} steps, first at step {first})", failures.len()),
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "steps: {}", self.steps)?;
        for rule in Rule::ALL {
            writeln!(f, "rule {}: {}", rule.number(), self.rule_counts[rule.number() as usize - 1])?;
        }
        writeln!(f, "alpha-preserved (rules 1-5, {} steps): {}", self.alpha_checked, verdict(&self.alpha_failures))?;
        writeln!(f, "weight-increased (rules 1-5, {} steps): {}", self.alpha_checked, verdict(&self.weight_failures))?;
        writeln!(f, "single-beta (rule 6, {} steps): {}", self.beta_checked, verdict(&self.beta_failures))?;
        if let Some(msg) = &self.invariant_breach {
            writeln!(f, "invariant breach: {msg}")?;
        }
        match (&self.result, self.fuel_exhausted) {
            (Some(v), _) => writeln!(f, "result: {}", print_surface(v))?,
            (None, true) => writeln!(f, "result: fuel exhausted")?,
            (None, false) => {}
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}
