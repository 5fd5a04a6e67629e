//! C interface to `ordlam`.
//!
//! Terms are opaque handles created by [`ordlam_parse`] or
//! [`ordlam_parse_ordered`] and released with [`ordlam_term_free`]. Every
//! fallible function returns one of the `ORDLAM_*` status codes; on failure
//! [`ordlam_last_error`] describes the problem. Strings handed out by the
//! library are NUL-terminated UTF-8 and must be released with
//! [`ordlam_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ordlam::baselines::{from_debruijn, print_db_value};
use ordlam::harness::{check_trace, run_native, run_strategy, with_big_stack, NativeResult, Strategy};
use ordlam::ordered::{read_ordered, write_ordered};
use ordlam::{
    parse_closed, parse_surface, print_ordered, print_surface, print_value, Backend, EvalError,
    NamedTerm, DEFAULT_FUEL,
};

pub const ORDLAM_OK: i32 = 0;
pub const ORDLAM_ERR_PARSE: i32 = 1;
pub const ORDLAM_ERR_FUEL: i32 = 2;
pub const ORDLAM_ERR_INTERNAL: i32 = 3;
pub const ORDLAM_ERR_NOT_ORDERED: i32 = 4;
pub const ORDLAM_ERR_INVALID_ARG: i32 = 5;
pub const ORDLAM_ERR_UTF8: i32 = 6;

pub const ORDLAM_STRATEGY_ORDERED_LIST: i32 = 0;
pub const ORDLAM_STRATEGY_ORDERED_TREE: i32 = 1;
pub const ORDLAM_STRATEGY_CLOSURES: i32 = 2;
pub const ORDLAM_STRATEGY_BETA_NORMAL: i32 = 3;

/// Print the weak head normal form (beta-normal prints its normal form).
pub const ORDLAM_MODE_WHNF: i32 = 0;
/// Print the full normal form.
pub const ORDLAM_MODE_NF: i32 = 1;

/// A lambda term.
pub struct OrdlamTerm {
    term: NamedTerm,
}

/// Result of [`ordlam_check`].
#[repr(C)]
#[derive(Debug, Default, Clone, Copy)]
pub struct OrdlamCheckReport {
    pub steps: u64,
    /// Steps per rule; entry `i` counts rule `i + 1`.
    pub rule_counts: [u64; 6],
    pub alpha_checked: u64,
    pub beta_checked: u64,
    pub alpha_failures: u64,
    pub beta_failures: u64,
    pub weight_failures: u64,
    pub fuel_exhausted: bool,
    pub passed: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

type Outcome<T> = Result<T, (i32, String)>;

fn fail<T>(code: i32, msg: impl Into<String>) -> Outcome<T> {
    Err((code, msg.into()))
}

// Runs `f`, turning panics into ORDLAM_ERR_INTERNAL and recording errors.
fn guarded(f: impl FnOnce() -> Outcome<()>) -> i32 {
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(ORDLAM_ERR_INTERNAL, "internal panic"));
    match result {
        Ok(()) => {
            set_error("");
            ORDLAM_OK
        }
        Err((code, msg)) => {
            set_error(msg);
            code
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Outcome<&'a str> {
    if s.is_null() {
        return fail(ORDLAM_ERR_INVALID_ARG, "null string");
    }
    CStr::from_ptr(s).to_str().or_else(|e| fail(ORDLAM_ERR_UTF8, e.to_string()))
}

unsafe fn term_ref<'a>(t: *const OrdlamTerm) -> Outcome<&'a NamedTerm> {
    t.as_ref().map(|t| &t.term).ok_or((ORDLAM_ERR_INVALID_ARG, "null term".to_string()))
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> Outcome<()> {
    let c = CString::new(s).or_else(|_| fail(ORDLAM_ERR_INTERNAL, "output contains NUL"))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn give_term(out: *mut *mut OrdlamTerm, term: NamedTerm) {
    *out = Box::into_raw(Box::new(OrdlamTerm { term }));
}

fn eval_error(e: EvalError) -> (i32, String) {
    match e {
        EvalError::FuelExhausted { .. } => (ORDLAM_ERR_FUEL, e.to_string()),
        EvalError::Invariant(_) => (ORDLAM_ERR_INTERNAL, e.to_string()),
    }
}

fn strategy(code: i32) -> Outcome<Strategy> {
    match code {
        ORDLAM_STRATEGY_ORDERED_LIST => Ok(Strategy::OrderedList),
        ORDLAM_STRATEGY_ORDERED_TREE => Ok(Strategy::OrderedTree),
        ORDLAM_STRATEGY_CLOSURES => Ok(Strategy::Closures),
        ORDLAM_STRATEGY_BETA_NORMAL => Ok(Strategy::BetaNormal),
        other => fail(ORDLAM_ERR_INVALID_ARG, format!("unknown strategy {other}")),
    }
}

fn on_big_stack<T: Send + 'static>(f: impl FnOnce() -> Outcome<T> + Send + 'static) -> Outcome<T> {
    with_big_stack(f).unwrap_or_else(|panic| fail(ORDLAM_ERR_INTERNAL, panic))
}

/// Parses surface syntax (`\x. x`, application by juxtaposition).
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ordlam_parse(src: *const c_char, out: *mut *mut OrdlamTerm) -> i32 {
    guarded(|| {
        if out.is_null() {
            return fail(ORDLAM_ERR_INVALID_ARG, "null output pointer");
        }
        let text = read_str(src)?;
        let term = parse_surface(text).or_else(|e| fail(ORDLAM_ERR_PARSE, e.to_string()))?;
        give_term(out, term);
        Ok(())
    })
}

/// Parses an ordered term in s-expression form. The term must be ordered
/// and have no unbound dots, otherwise `ORDLAM_ERR_NOT_ORDERED` is returned.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ordlam_parse_ordered(src: *const c_char, out: *mut *mut OrdlamTerm) -> i32 {
    guarded(|| {
        if out.is_null() {
            return fail(ORDLAM_ERR_INVALID_ARG, "null output pointer");
        }
        let text = read_str(src)?;
        let t = read_ordered(text).or_else(|e| fail(ORDLAM_ERR_PARSE, e.to_string()))?;
        if !t.is_ordered() || t.fv_count() != 0 {
            return fail(ORDLAM_ERR_NOT_ORDERED, "not a closed ordered term");
        }
        give_term(out, print_ordered(&t, &[]));
        Ok(())
    })
}

/// Releases a term. Null is ignored.
///
/// # Safety
/// `term` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ordlam_term_free(term: *mut OrdlamTerm) {
    if !term.is_null() {
        drop(Box::from_raw(term));
    }
}

/// Surface syntax of `term`.
///
/// # Safety
/// `term` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ordlam_term_print(term: *const OrdlamTerm, out: *mut *mut c_char) -> i32 {
    guarded(|| {
        if out.is_null() {
            return fail(ORDLAM_ERR_INVALID_ARG, "null output pointer");
        }
        give_string(out, print_surface(term_ref(term)?))
    })
}

/// Ordered s-expression form of `term`.
///
/// # Safety
/// `term` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ordlam_term_to_ordered(term: *const OrdlamTerm, out: *mut *mut c_char) -> i32 {
    guarded(|| {
        if out.is_null() {
            return fail(ORDLAM_ERR_INVALID_ARG, "null output pointer");
        }
        give_string(out, write_ordered(&parse_closed(term_ref(term)?)))
    })
}

/// Evaluates `term` with one of the `ORDLAM_STRATEGY_*` strategies and
/// prints the result according to `mode` (`ORDLAM_MODE_*`). A `fuel` of 0
/// selects the default budget. When `steps` is not null it receives the
/// number of steps taken to reach the normal form (`ORDLAM_MODE_NF`) or the
/// weak head value.
///
/// # Safety
/// `term` must be a live handle, `out` a valid pointer, `steps` null or valid.
#[no_mangle]
pub unsafe extern "C" fn ordlam_eval(
    term: *const OrdlamTerm,
    strategy_code: i32,
    mode: i32,
    fuel: u64,
    out: *mut *mut c_char,
    steps: *mut u64,
) -> i32 {
    guarded(|| {
        if out.is_null() {
            return fail(ORDLAM_ERR_INVALID_ARG, "null output pointer");
        }
        let m = term_ref(term)?.clone();
        let strategy = strategy(strategy_code)?;
        if mode != ORDLAM_MODE_WHNF && mode != ORDLAM_MODE_NF {
            return fail(ORDLAM_ERR_INVALID_ARG, format!("unknown mode {mode}"));
        }
        let fuel = if fuel == 0 { DEFAULT_FUEL } else { fuel };
        let (text, taken) = on_big_stack(move || evaluate(&m, strategy, mode, fuel))?;
        if let Some(s) = steps.as_mut() {
            *s = taken;
        }
        give_string(out, text)
    })
}

fn evaluate(m: &NamedTerm, strategy: Strategy, mode: i32, fuel: u64) -> Outcome<(String, u64)> {
    if mode == ORDLAM_MODE_NF || strategy == Strategy::BetaNormal {
        let o = run_strategy(m, strategy, fuel).map_err(eval_error)?;
        return Ok((print_surface(&o.normal_form), o.steps));
    }
    let (value, steps) = run_native(m, strategy, fuel).map_err(eval_error)?;
    let text = match value {
        NativeResult::Ordered(v) => print_surface(&print_value(&v)),
        NativeResult::Closures(v) => print_surface(&print_db_value(&v)),
        NativeResult::BetaNormal(t) => print_surface(&from_debruijn(&t)),
    };
    Ok((text, steps))
}

/// Runs the small-step machine on `term`, checking every step, and fills
/// `report`. Returns `ORDLAM_ERR_FUEL` when the budget ran out (the report is
/// still filled) and `ORDLAM_ERR_INTERNAL` when a check failed.
///
/// # Safety
/// `term` must be a live handle and `report` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ordlam_check(term: *const OrdlamTerm, fuel: u64, report: *mut OrdlamCheckReport) -> i32 {
    guarded(|| {
        let m = term_ref(term)?.clone();
        let Some(report) = report.as_mut() else {
            return fail(ORDLAM_ERR_INVALID_ARG, "null report pointer");
        };
        let fuel = if fuel == 0 { DEFAULT_FUEL } else { fuel };
        let r = on_big_stack(move || Ok(check_trace(&m, fuel, Backend::List)))?;
        *report = OrdlamCheckReport {
            steps: r.steps,
            rule_counts: r.rule_counts,
            alpha_checked: r.alpha_checked,
            beta_checked: r.beta_checked,
            alpha_failures: r.alpha_failures.len() as u64,
            beta_failures: r.beta_failures.len() as u64,
            weight_failures: r.weight_failures.len() as u64,
            fuel_exhausted: r.fuel_exhausted,
            passed: r.passed(),
        };
        if !r.passed() {
            fail(ORDLAM_ERR_INTERNAL, r.invariant_breach.unwrap_or_else(|| "a step failed its check".into()))
        } else if r.fuel_exhausted {
            fail(ORDLAM_ERR_FUEL, "fuel exhausted")
        } else {
            Ok(())
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ordlam_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, empty after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn ordlam_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ordlam_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
