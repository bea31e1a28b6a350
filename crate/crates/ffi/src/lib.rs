//! C ABI for parsing, encoding, synthesis and repair.
//!
//! Specifications and strategies are opaque handles released with their
//! `_free` function. Functions return an [`SsStatus`]; on failure the
//! message is available from [`ss_last_error`] on the same thread.
//! Strings returned through out-parameters are owned by the caller and
//! released with [`ss_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use skillsynth::abstraction::Abstraction;
use skillsynth::encoder::{annotate, assemble, is_encoded, Domain, EncodeOptions};
use skillsynth::logic::Gr1Spec;
use skillsynth::repair_enum::{self, EnumConfig};
use skillsynth::repair_synth::{self, RepairConfig};
use skillsynth::specformat::{parse, parse_task, serialize};
use skillsynth::synthesis::{build_game, solve, Outcome, Strategy};
use skillsynth::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidSpec = 4,
    /// The specification has no winning strategy.
    Unrealizable = 5,
    /// Repair was asked for a specification that needs none.
    Realizable = 6,
    Json = 7,
    Internal = 8,
}

/// A parsed specification.
pub struct SsSpec {
    spec: Gr1Spec,
}

/// A synthesized strategy.
pub struct SsStrategy {
    strategy: Strategy,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SsStatus {
    match e {
        Error::Parse(_) => SsStatus::Parse,
        Error::SpecUnrealizable => SsStatus::Unrealizable,
        Error::SpecRealizable => SsStatus::Realizable,
        Error::Json(_) => SsStatus::Json,
        Error::InvalidSpec(_) | Error::UnknownProposition(_) | Error::UnmappedAtom(_) => SsStatus::InvalidSpec,
        _ => SsStatus::Internal,
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), (SsStatus, String)>) -> SsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SsStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            SsStatus::Internal
        }
    }
}

fn lib(e: Error) -> (SsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (SsStatus, String) {
    (SsStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, (SsStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|e| (SsStatus::InvalidUtf8, e.to_string()))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), (SsStatus, String)> {
    let c = CString::new(s).map_err(|e| (SsStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread; empty after success.
/// Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn ss_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a full specification.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_spec_parse(text_ptr: *const c_char, out: *mut *mut SsSpec) -> SsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let mut spec = parse(text(text_ptr)?).map_err(|e| lib(e.into()))?;
        if is_encoded(&spec) {
            annotate(&mut spec);
        }
        *out = Box::into_raw(Box::new(SsSpec { spec }));
        Ok(())
    })
}

/// Encodes an abstraction (JSON) with a task file into a specification.
///
/// # Safety
/// String arguments must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_spec_encode(abstraction_json: *const c_char, task: *const c_char, out: *mut *mut SsSpec) -> SsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let a = Abstraction::from_json(text(abstraction_json)?).map_err(lib)?;
        let t = parse_task(text(task)?).map_err(|e| lib(e.into()))?;
        let spec = assemble(&Domain::from_abstraction(&a), &t, EncodeOptions::default()).map_err(lib)?;
        *out = Box::into_raw(Box::new(SsSpec { spec }));
        Ok(())
    })
}

/// Serializes a specification to text.
///
/// # Safety
/// `spec` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_spec_to_string(spec: *const SsSpec, out: *mut *mut c_char) -> SsStatus {
    guard(|| {
        let (Some(s), false) = (spec.as_ref(), out.is_null()) else { return Err(null()) };
        put_string(out, serialize(&s.spec))
    })
}

/// Decides realizability.
///
/// # Safety
/// `spec` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_spec_is_realizable(spec: *const SsSpec, out: *mut bool) -> SsStatus {
    guard(|| {
        let (Some(s), false) = (spec.as_ref(), out.is_null()) else { return Err(null()) };
        *out = build_game(&s.spec).map_err(lib)?.realizable();
        Ok(())
    })
}

/// Synthesizes a strategy. Returns `SS_STATUS_UNREALIZABLE` and leaves
/// `out` untouched when none exists.
///
/// # Safety
/// `spec` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_synthesize(spec: *const SsSpec, out: *mut *mut SsStrategy) -> SsStatus {
    guard(|| {
        let (Some(s), false) = (spec.as_ref(), out.is_null()) else { return Err(null()) };
        match solve(&s.spec).map_err(lib)? {
            Outcome::Realizable(strategy) => {
                *out = Box::into_raw(Box::new(SsStrategy { strategy }));
                Ok(())
            }
            Outcome::Unrealizable(cs) => Err((SsStatus::Unrealizable, format!("unrealizable; counter-strategy has {} states", cs.states.len()))),
        }
    })
}

/// Number of states of a strategy; 0 for a null handle.
///
/// # Safety
/// `strategy` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn ss_strategy_num_states(strategy: *const SsStrategy) -> usize {
    strategy.as_ref().map_or(0, |s| s.strategy.states.len())
}

/// Strategy as JSON.
///
/// # Safety
/// `strategy` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_strategy_to_json(strategy: *const SsStrategy, out: *mut *mut c_char) -> SsStatus {
    guard(|| {
        let (Some(s), false) = (strategy.as_ref(), out.is_null()) else { return Err(null()) };
        put_string(out, s.strategy.to_json().map_err(lib)?)
    })
}

/// Enumeration-based repair; writes the suggestions as a JSON array.
/// `max_suggestions` of 0 means no limit.
///
/// # Safety
/// `spec` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_repair_enum(spec: *const SsSpec, n_new_skills: usize, max_suggestions: usize, out: *mut *mut c_char) -> SsStatus {
    guard(|| {
        let (Some(s), false) = (spec.as_ref(), out.is_null()) else { return Err(null()) };
        let cfg = EnumConfig { n_new_skills, max_suggestions: (max_suggestions > 0).then_some(max_suggestions), budget: None };
        let r = repair_enum::repair(&s.spec, &cfg).map_err(lib)?;
        put_string(out, serde_json::to_string(&r.suggestions).map_err(|e| lib(e.into()))?)
    })
}

/// Synthesis-based repair; writes the suggestions as a JSON array.
/// `max_suggestions` of 0 means no limit.
///
/// # Safety
/// `spec` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_repair_synth(spec: *const SsSpec, n_extra_skills: usize, max_suggestions: usize, out: *mut *mut c_char) -> SsStatus {
    guard(|| {
        let (Some(s), false) = (spec.as_ref(), out.is_null()) else { return Err(null()) };
        let cfg = RepairConfig { n_extra_skills, max_suggestions: (max_suggestions > 0).then_some(max_suggestions), ..Default::default() };
        let r = repair_synth::enumerate_suggestions(&s.spec, &cfg).map_err(lib)?;
        put_string(out, serde_json::to_string(&r.suggestions).map_err(|e| lib(e.into()))?)
    })
}

/// # Safety
/// `spec` must be null or come from this library, and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ss_spec_free(spec: *mut SsSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// # Safety
/// `strategy` must be null or come from this library, and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ss_strategy_free(strategy: *mut SsStrategy) {
    if !strategy.is_null() {
        drop(Box::from_raw(strategy));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn ss_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

