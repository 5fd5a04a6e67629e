use std::ffi::{c_char, CStr, CString};
use std::ptr;

use ordlam_ffi::*;

fn parse(src: &str) -> *mut OrdlamTerm {
    let src = CString::new(src).unwrap();
    let mut term = ptr::null_mut();
    assert_eq!(unsafe { ordlam_parse(src.as_ptr(), &mut term) }, ORDLAM_OK);
    assert!(!term.is_null());
    term
}

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ordlam_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ordlam_last_error()) }.to_str().unwrap().to_owned()
}

fn eval(term: *const OrdlamTerm, strategy: i32, mode: i32) -> (i32, String, u64) {
    let mut out = ptr::null_mut();
    let mut steps = 0;
    let code = unsafe { ordlam_eval(term, strategy, mode, 0, &mut out, &mut steps) };
    let text = if out.is_null() { String::new() } else { take(out) };
    (code, text, steps)
}

#[test]
fn print_and_convert() {
    let t = parse(r"\x.\y.\z. x z (y z)");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ordlam_term_to_ordered(t, &mut out) }, ORDLAM_OK);
    let ord = take(out);
    assert_eq!(ord, "(lam (0) (lam (1) (lam (1 1) (app 2 (app 1 . .) (app 1 . .)))))");
    unsafe { ordlam_term_free(t) };

    let src = CString::new(ord).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { ordlam_parse_ordered(src.as_ptr(), &mut back) }, ORDLAM_OK);
    let mut printed = ptr::null_mut();
    assert_eq!(unsafe { ordlam_term_print(back, &mut printed) }, ORDLAM_OK);
    let printed = take(printed);
    unsafe { ordlam_term_free(back) };

    // the printed term parses back to the same ordered form
    let again = parse(&printed);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ordlam_term_to_ordered(again, &mut out) }, ORDLAM_OK);
    assert_eq!(take(out), "(lam (0) (lam (1) (lam (1 1) (app 2 (app 1 . .) (app 1 . .)))))");
    unsafe { ordlam_term_free(again) };
}

#[test]
fn strategies_agree_on_normal_forms() {
    let t = parse(r"(\m.\n.\f.\x. m f (n f x)) (\f.\x. f (f x)) (\f.\x. f x)");
    let expected = eval(t, ORDLAM_STRATEGY_BETA_NORMAL, ORDLAM_MODE_NF);
    assert_eq!(expected.0, ORDLAM_OK);
    assert_eq!(expected.1, r"\z0. \z1. z0 (z0 (z0 z1))");
    for s in [ORDLAM_STRATEGY_ORDERED_LIST, ORDLAM_STRATEGY_ORDERED_TREE, ORDLAM_STRATEGY_CLOSURES] {
        let (code, text, steps) = eval(t, s, ORDLAM_MODE_NF);
        assert_eq!(code, ORDLAM_OK, "{s}");
        assert_eq!(text, expected.1, "{s}");
        assert!(steps > 0);
    }
    unsafe { ordlam_term_free(t) };
}

#[test]
fn whnf_mode_stops_at_a_lambda() {
    let t = parse(r"(\x.\y. x) ((\z. z) a)");
    let (code, text, _) = eval(t, ORDLAM_STRATEGY_ORDERED_LIST, ORDLAM_MODE_WHNF);
    assert_eq!(code, ORDLAM_OK);
    assert!(text.starts_with('\\'), "{text}");
    let (_, nf, _) = eval(t, ORDLAM_STRATEGY_ORDERED_LIST, ORDLAM_MODE_NF);
    assert_eq!(nf, r"\z0. a");
    unsafe { ordlam_term_free(t) };
}

#[test]
fn parse_errors_are_reported() {
    let src = CString::new(r"(\x. x").unwrap();
    let mut term = ptr::null_mut();
    assert_eq!(unsafe { ordlam_parse(src.as_ptr(), &mut term) }, ORDLAM_ERR_PARSE);
    assert!(term.is_null());
    assert!(last_error().contains("expected"), "{}", last_error());

    let src = CString::new("(app 0 . .)").unwrap();
    assert_eq!(unsafe { ordlam_parse_ordered(src.as_ptr(), &mut term) }, ORDLAM_ERR_NOT_ORDERED);
    let src = CString::new("(lam (0").unwrap();
    assert_eq!(unsafe { ordlam_parse_ordered(src.as_ptr(), &mut term) }, ORDLAM_ERR_PARSE);

    let bad = [0xff_u8, 0];
    assert_eq!(unsafe { ordlam_parse(bad.as_ptr().cast(), &mut term) }, ORDLAM_ERR_UTF8);
}

#[test]
fn divergence_runs_out_of_fuel() {
    let t = parse(r"(\x. x x) (\x. x x)");
    let mut out = ptr::null_mut();
    let code = unsafe { ordlam_eval(t, ORDLAM_STRATEGY_ORDERED_TREE, ORDLAM_MODE_WHNF, 1000, &mut out, ptr::null_mut()) };
    assert_eq!(code, ORDLAM_ERR_FUEL);
    assert!(out.is_null());
    assert!(!last_error().is_empty());

    let mut report = OrdlamCheckReport::default();
    assert_eq!(unsafe { ordlam_check(t, 200, &mut report) }, ORDLAM_ERR_FUEL);
    assert!(report.fuel_exhausted);
    assert!(report.passed);
    unsafe { ordlam_term_free(t) };
}

#[test]
fn check_fills_the_report() {
    let t = parse(r"(\x. x) a");
    let mut report = OrdlamCheckReport::default();
    assert_eq!(unsafe { ordlam_check(t, 0, &mut report) }, ORDLAM_OK);
    assert!(report.passed && !report.fuel_exhausted);
    assert_eq!(report.rule_counts.iter().sum::<u64>(), report.steps);
    assert_eq!(report.rule_counts[5], 1);
    assert_eq!(report.beta_checked, 1);
    assert_eq!(report.alpha_failures + report.beta_failures + report.weight_failures, 0);
    assert!(last_error().is_empty());
    unsafe { ordlam_term_free(t) };
}

#[test]
fn invalid_arguments() {
    let t = parse("a");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ordlam_eval(t, 9, ORDLAM_MODE_NF, 0, &mut out, ptr::null_mut()) }, ORDLAM_ERR_INVALID_ARG);
    assert_eq!(unsafe { ordlam_eval(t, 0, 7, 0, &mut out, ptr::null_mut()) }, ORDLAM_ERR_INVALID_ARG);
    assert_eq!(unsafe { ordlam_term_print(ptr::null(), &mut out) }, ORDLAM_ERR_INVALID_ARG);
    assert_eq!(unsafe { ordlam_term_print(t, ptr::null_mut()) }, ORDLAM_ERR_INVALID_ARG);
    assert_eq!(unsafe { ordlam_check(t, 0, ptr::null_mut()) }, ORDLAM_ERR_INVALID_ARG);
    assert_eq!(unsafe { ordlam_parse(ptr::null(), &mut out.cast()) }, ORDLAM_ERR_INVALID_ARG);
    unsafe {
        ordlam_term_free(t);
        ordlam_term_free(ptr::null_mut());
        ordlam_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(ordlam_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ordlam.h")).unwrap();
    for item in [
        "typedef struct OrdlamTerm OrdlamTerm;",
        "typedef struct OrdlamCheckReport",
        "#define ORDLAM_ERR_FUEL 2",
        "#define ORDLAM_STRATEGY_BETA_NORMAL 3",
        "int32_t ordlam_parse(const char *src, struct OrdlamTerm **out);",
        "void ordlam_string_free(char *s);",
        "const char *ordlam_last_error(void);",
    ] {
        assert!(header.contains(item), "missing {item}");
    }
}
