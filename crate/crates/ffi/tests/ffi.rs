use std::ffi::{CStr, CString};
use std::ptr;

use skillsynth::worlds::{blocks, plates};
use skillsynth_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ss_last_error()) }.to_string_lossy().into_owned()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    ss_string_free(s);
    out
}

unsafe fn encoded(w: &skillsynth::worlds::World) -> *mut SsSpec {
    let a = c(&w.abstraction.to_json().unwrap());
    let t = c(&w.task);
    let mut spec = ptr::null_mut();
    assert_eq!(ss_spec_encode(a.as_ptr(), t.as_ptr(), &mut spec), SsStatus::Ok, "{}", last_error());
    spec
}

#[test]
fn synthesize_through_handles() {
    unsafe {
        let spec = encoded(&plates::world(plates::Variant::Base));
        let mut ok = false;
        assert_eq!(ss_spec_is_realizable(spec, &mut ok), SsStatus::Ok);
        assert!(ok);
        let mut st = ptr::null_mut();
        assert_eq!(ss_synthesize(spec, &mut st), SsStatus::Ok);
        assert!(ss_strategy_num_states(st) > 0);
        let mut json = ptr::null_mut();
        assert_eq!(ss_strategy_to_json(st, &mut json), SsStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["states"].as_array().unwrap().len(), ss_strategy_num_states(st));
        ss_strategy_free(st);

        // Text round trip through a second handle.
        let mut text = ptr::null_mut();
        assert_eq!(ss_spec_to_string(spec, &mut text), SsStatus::Ok);
        let text = c(&take(text));
        let mut again = ptr::null_mut();
        assert_eq!(ss_spec_parse(text.as_ptr(), &mut again), SsStatus::Ok);
        assert_eq!(ss_spec_is_realizable(again, &mut ok), SsStatus::Ok);
        assert!(ok);
        ss_spec_free(again);
        ss_spec_free(spec);
    }
}

#[test]
fn unrealizable_and_repair() {
    unsafe {
        let spec = encoded(&blocks::world(blocks::Variant::NoB));
        let mut st = ptr::null_mut();
        assert_eq!(ss_synthesize(spec, &mut st), SsStatus::Unrealizable);
        assert!(st.is_null());
        assert!(last_error().contains("counter-strategy"));
        let mut out = ptr::null_mut();
        assert_eq!(ss_repair_synth(spec, 2, 1, &mut out), SsStatus::Ok, "{}", last_error());
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 1);
        assert_eq!(ss_repair_enum(spec, 1, 1, &mut out), SsStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v[0]["provenance"], "enumeration");
        ss_spec_free(spec);

        let ok = encoded(&plates::world(plates::Variant::Base));
        assert_eq!(ss_repair_synth(ok, 1, 1, &mut out), SsStatus::Realizable);
        ss_spec_free(ok);
    }
}

#[test]
fn errors_are_codes_with_messages() {
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(ss_spec_parse(ptr::null(), &mut spec), SsStatus::NullPointer);
        let bad = c("[INPUT]\na\n[SYS_TRANS]\na &\n");
        assert_eq!(ss_spec_parse(bad.as_ptr(), &mut spec), SsStatus::Parse);
        assert!(last_error().contains("line"));
        assert!(spec.is_null());
        let undeclared = c("[INPUT]\na\n[SYS_TRANS]\nb\n");
        assert_ne!(ss_spec_parse(undeclared.as_ptr(), &mut spec), SsStatus::Ok);
        let bytes = [0xffu8, 0];
        assert_eq!(ss_spec_parse(bytes.as_ptr().cast(), &mut spec), SsStatus::InvalidUtf8);
        let mut flag = false;
        assert_eq!(ss_spec_is_realizable(ptr::null(), &mut flag), SsStatus::NullPointer);
        assert_eq!(ss_strategy_num_states(ptr::null()), 0);
        ss_spec_free(ptr::null_mut());
        ss_strategy_free(ptr::null_mut());
        ss_string_free(ptr::null_mut());
        let good = c("[INPUT]\na\n[OUTPUT]\nx\n");
        assert_eq!(ss_spec_parse(good.as_ptr(), &mut spec), SsStatus::Ok);
        assert_eq!(last_error(), "");
        ss_spec_free(spec);
    }
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/skillsynth.h")).unwrap();
    for name in ["ss_spec_parse", "ss_synthesize", "ss_repair_synth", "ss_string_free", "ss_last_error", "typedef struct SsSpec SsSpec", "SS_STATUS_UNREALIZABLE"] {
        assert!(h.contains(name), "{name}");
    }
}
