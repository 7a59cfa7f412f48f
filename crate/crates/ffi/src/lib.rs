//! C ABI over `poisson-forge`.
//!
//! Algebras are opaque handles. Every function returns a [`PfStatus`]; on
//! anything other than `PF_STATUS_OK` a message is available from
//! [`pf_last_error`] until the next call on the same thread. Strings handed
//! out through `out` parameters must be released with [`pf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use poisson_forge::quotient::{Params, Quotient};
use poisson_forge::suites::{self, Options};
use poisson_forge::{parse_expr, Algebra, AlgebraError};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PfStatus {
    Ok = 0,
    /// The computation ran and a verification failed.
    Failed = 1,
    InvalidArgument = 2,
    ParseError = 3,
    SchemaError = 4,
    NullPointer = 5,
    Internal = 6,
}

/// Opaque algebra handle.
pub struct PfAlgebra {
    inner: Algebra,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: PfStatus, msg: impl Into<String>) -> PfStatus {
    set_error(msg);
    status
}

fn status_of(e: &AlgebraError) -> PfStatus {
    match e {
        AlgebraError::Syntax { .. } | AlgebraError::UnknownIdentifier(_) | AlgebraError::NotInvertible(_) => {
            PfStatus::ParseError
        }
        AlgebraError::Input(_) => PfStatus::SchemaError,
        _ => PfStatus::InvalidArgument,
    }
}

fn from_error(e: AlgebraError) -> PfStatus {
    fail(status_of(&e), e.to_string())
}

/// Run `f`, mapping panics to `Internal` and clearing the error slot first.
fn guard(f: impl FnOnce() -> PfStatus) -> PfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(PfStatus::Internal, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, PfStatus> {
    if p.is_null() {
        return Err(fail(PfStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(PfStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn write_str(out: *mut *mut c_char, s: String) -> PfStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            PfStatus::Ok
        }
        Err(_) => fail(PfStatus::Internal, "output contains a nul byte"),
    }
}

/// The built-in algebra. Free with [`pf_algebra_free`].
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_algebra_builtin(out: *mut *mut PfAlgebra) -> PfStatus {
    guard(|| {
        if out.is_null() {
            return fail(PfStatus::NullPointer, "out is null");
        }
        *out = Box::into_raw(Box::new(PfAlgebra { inner: Algebra::builtin() }));
        PfStatus::Ok
    })
}

/// Load an algebra from its JSON definition.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_algebra_from_json(json: *const c_char, out: *mut *mut PfAlgebra) -> PfStatus {
    guard(|| {
        if out.is_null() {
            return fail(PfStatus::NullPointer, "out is null");
        }
        let text = match read_str(json, "json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Algebra::from_json(text) {
            Ok(a) => {
                *out = Box::into_raw(Box::new(PfAlgebra { inner: a }));
                PfStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `alg` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pf_algebra_free(alg: *mut PfAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// `{f, g}` in `alg`, with every generator allowed a negative exponent.
///
/// # Safety
/// Pointers must be valid; `f`, `g` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn pf_bracket(
    alg: *const PfAlgebra,
    f: *const c_char,
    g: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    guard(|| {
        if alg.is_null() || out.is_null() {
            return fail(PfStatus::NullPointer, "algebra or out is null");
        }
        let (f, g) = match (read_str(f, "f"), read_str(g, "g")) {
            (Ok(f), Ok(g)) => (f, g),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let a = &(*alg).inner;
        let ctx = a.context();
        let gens: Vec<&str> = ctx.generators().map(|i| ctx.name(i)).collect();
        let result = a.structure.localized(&gens).and_then(|s| {
            let f = parse_expr(f, s.context())?;
            let g = parse_expr(g, s.context())?;
            Ok(s.bracket(&f, &g).to_string())
        });
        match result {
            Ok(r) => write_str(out, r),
            Err(e) => from_error(e),
        }
    })
}

/// Normal form in the quotient of the built-in algebra. `alpha`/`beta` may
/// be null (symbolic) or a rational such as `"3/2"`.
///
/// # Safety
/// `expr` must be nul-terminated, `alpha`/`beta` null or nul-terminated,
/// `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pf_normal_form(
    expr: *const c_char,
    alpha: *const c_char,
    beta: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    guard(|| {
        if out.is_null() {
            return fail(PfStatus::NullPointer, "out is null");
        }
        let expr = match read_str(expr, "expr") {
            Ok(e) => e,
            Err(s) => return s,
        };
        let mut params = Params::symbolic();
        for (p, slot, name) in [(alpha, &mut params.alpha, "alpha"), (beta, &mut params.beta, "beta")] {
            if p.is_null() {
                continue;
            }
            match read_str(p, name).map(str::parse) {
                Ok(Ok(v)) => *slot = Some(v),
                Ok(Err(e)) => return from_error(e),
                Err(s) => return s,
            }
        }
        let q = Quotient::new();
        match q.parse(expr).and_then(|p| q.reduce(&p, &params)) {
            Ok(r) => write_str(out, r.to_string()),
            Err(e) => from_error(e),
        }
    })
}

/// Run one verification suite (or `"all"`) and write its JSON report.
/// Returns `PF_STATUS_FAILED` when the report is written but some item failed.
///
/// # Safety
/// `name` must be nul-terminated and `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn pf_verify_suite(name: *const c_char, seed: u64, out_json: *mut *mut c_char) -> PfStatus {
    guard(|| {
        if out_json.is_null() {
            return fail(PfStatus::NullPointer, "out_json is null");
        }
        let name = match read_str(name, "name") {
            Ok(n) => n,
            Err(s) => return s,
        };
        let names = match suites::resolve(&[name.to_string()]) {
            Ok(n) => n,
            Err(e) => return fail(PfStatus::InvalidArgument, e.to_string()),
        };
        let opts = Options { seed, ..Options::default() };
        match suites::run(&names, &opts) {
            Ok(report) => {
                let passed = report.passed();
                let s = write_str(out_json, report.to_json());
                if s != PfStatus::Ok {
                    s
                } else if passed {
                    PfStatus::Ok
                } else {
                    fail(PfStatus::Failed, "some items failed")
                }
            }
            Err(e) => from_error(e),
        }
    })
}

/// Message for the last non-OK status on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn pf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
