//! C interface. Groups are opaque handles; results come back as JSON
//! strings owned by the library and released with `srl_string_free`.
//!
//! Every function returns an `SrlStatus`. On failure a description is kept
//! per thread and can be read with `srl_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::json;
use srl_core::atlas::{build, parse_group_spec, BuiltGroup};
use srl_core::conjugacy::{conjugacy_class, solvable_radical};
use srl_core::counting::{field_auto_bound_audit, AuditFamily};
use srl_core::perm::Permutation;
use srl_core::verifier::{find_witness, theorem_a_survey, SearchMode, SurveyOptions, WitnessQuery};
use srl_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrlStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    Unsupported = 4,
    Infeasible = 5,
    InvalidArgument = 6,
    Internal = 7,
}

/// A built group.
pub struct SrlGroup {
    built: BuiltGroup,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SrlStatus {
    match e {
        Error::Parse(_) | Error::InvalidPermutation(_) => SrlStatus::ParseError,
        Error::UnsupportedSpec(_) | Error::NotApplicable(_) => SrlStatus::Unsupported,
        Error::ActionTooLarge { .. }
        | Error::ClassTooLarge { .. }
        | Error::RadicalInfeasible(_)
        | Error::Infeasible(_)
        | Error::SubgroupOrbitTooLarge { .. } => SrlStatus::Infeasible,
        Error::WitnessNotVerified(_) | Error::Io(_) | Error::Json(_) => SrlStatus::Internal,
        _ => SrlStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), (SrlStatus, String)>) -> SrlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SrlStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SrlStatus::Internal
        }
    }
}

fn core(e: Error) -> (SrlStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, (SrlStatus, String)> {
    if p.is_null() {
        return Err((SrlStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (SrlStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn group_ref<'a>(g: *const SrlGroup) -> Result<&'a SrlGroup, (SrlStatus, String)> {
    g.as_ref().ok_or((SrlStatus::NullArgument, "null group handle".into()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (SrlStatus, String)> {
    if out.is_null() {
        return Err((SrlStatus::NullArgument, "null output pointer".into()));
    }
    let c = CString::new(s).map_err(|_| (SrlStatus::Internal, "interior NUL in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Builds the group named by `spec`, e.g. `"PSL(2,7)"`. On success `*out`
/// owns a handle to release with `srl_group_free`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn srl_group_new(spec: *const c_char, out: *mut *mut SrlGroup) -> SrlStatus {
    guard(|| {
        if out.is_null() {
            return Err((SrlStatus::NullArgument, "null output pointer".into()));
        }
        *out = ptr::null_mut();
        let spec = parse_group_spec(read_str(spec)?).map_err(core)?;
        let built = build(&spec).map_err(core)?;
        *out = Box::into_raw(Box::new(SrlGroup { built }));
        Ok(())
    })
}

/// # Safety
/// `g` must come from `srl_group_new` and not be used afterwards. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn srl_group_free(g: *mut SrlGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of points the group acts on.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn srl_group_degree(g: *const SrlGroup, out: *mut usize) -> SrlStatus {
    guard(|| {
        let g = group_ref(g)?;
        if out.is_null() {
            return Err((SrlStatus::NullArgument, "null output pointer".into()));
        }
        *out = g.built.group.degree();
        Ok(())
    })
}

/// Group order as a decimal string.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn srl_group_order(g: *const SrlGroup, out: *mut *mut c_char) -> SrlStatus {
    guard(|| {
        let g = group_ref(g)?;
        write_string(out, g.built.group.order().to_string())
    })
}

/// Per-class verdicts as a JSON report.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn srl_survey_json(g: *const SrlGroup, seed: u64, out: *mut *mut c_char) -> SrlStatus {
    guard(|| {
        let g = group_ref(g)?;
        let opts = SurveyOptions {
            seed,
            ..SurveyOptions::default()
        };
        let report = theorem_a_survey(&g.built, &opts).map_err(core)?;
        write_string(out, serde_json::to_string(&report).map_err(|e| core(e.into()))?)
    })
}

/// Witness search for the element given in 1-based cycle notation. A
/// `budget` of zero searches exhaustively; otherwise `budget` random tuples
/// are drawn from `seed`.
///
/// # Safety
/// `g` must be a live handle, `cycles` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn srl_witness_json(
    g: *const SrlGroup,
    cycles: *const c_char,
    k: usize,
    budget: u64,
    seed: u64,
    out: *mut *mut c_char,
) -> SrlStatus {
    guard(|| {
        let g = group_ref(g)?;
        let group = &g.built.group;
        let x = Permutation::parse_cycles(read_str(cycles)?, group.degree()).map_err(core)?;
        if !group.contains(&x) {
            return Err((SrlStatus::InvalidArgument, "element is not in the group".into()));
        }
        let class = conjugacy_class(group, &x).map_err(core)?;
        let mode = if budget == 0 {
            SearchMode::Exhaustive
        } else {
            SearchMode::Random { budget, seed }
        };
        let report = find_witness(group, &x, Some(&class), &WitnessQuery::new(k, mode)).map_err(core)?;
        write_string(out, serde_json::to_string(&report).map_err(|e| core(e.into()))?)
    })
}

/// The solvable radical as JSON.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn srl_radical_json(g: *const SrlGroup, out: *mut *mut c_char) -> SrlStatus {
    guard(|| {
        let g = group_ref(g)?;
        let radical = solvable_radical(&g.built.group).map_err(core)?;
        write_string(out, serde_json::to_string(&radical.summary()).map_err(|e| core(e.into()))?)
    })
}

/// Field-automorphism bound audit for `family` in {"psl2", "sz", "ree"}.
///
/// # Safety
/// `family` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn srl_audit_json(family: *const c_char, q0: u64, p: u64, out: *mut *mut c_char) -> SrlStatus {
    guard(|| {
        let name = read_str(family)?;
        let family = AuditFamily::parse(name)
            .ok_or_else(|| (SrlStatus::InvalidArgument, format!("unknown family {name}")))?;
        let audit = field_auto_bound_audit(family, q0, p).map_err(core)?;
        write_string(out, serde_json::to_string(&audit).map_err(|e| core(e.into()))?)
    })
}

/// Canonical form of a group spec, as JSON `{"canonical": ...}`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn srl_parse_json(spec: *const c_char, out: *mut *mut c_char) -> SrlStatus {
    guard(|| {
        let spec = parse_group_spec(read_str(spec)?).map_err(core)?;
        write_string(out, json!({"canonical": spec.to_string()}).to_string())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn srl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread; empty if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn srl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code; unknown codes give "unknown".
#[no_mangle]
pub extern "C" fn srl_status_message(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null argument",
        2 => c"invalid UTF-8",
        3 => c"parse error",
        4 => c"unsupported",
        5 => c"infeasible",
        6 => c"invalid argument",
        7 => c"internal error",
        _ => c"unknown",
    };
    s.as_ptr()
}
