use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use tfb_ffi::*;

const EXAMPLE6: &str = r#"{"frame":["A","B"],"masses":{"A":0.2,"B":0.2,"A,B":0.6}}"#;

fn handle(json: &str) -> *mut TfbMass {
    let json = CString::new(json).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { tfb_mass_from_json(json.as_ptr(), &mut m) }, TfbStatus::Ok);
    assert!(!m.is_null());
    m
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let n = unsafe { tfb_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn entropies_through_handles() {
    let m = handle(EXAMPLE6);
    let mut v = 0.0;
    unsafe {
        assert_eq!(tfb_mass_frame_size(m), 2);
        assert_eq!(tfb_deng_entropy(m, &mut v), TfbStatus::Ok);
        assert!((v - 5f64.log2()).abs() < 1e-12);
        assert_eq!(tfb_tfb_entropy(m, 1, &mut v), TfbStatus::Ok);
        assert!((v - 5f64.log2()).abs() < 1e-12);
        let mut split = 0.0;
        assert_eq!(tfb_tfb_entropy(m, 3, &mut v), TfbStatus::Ok);
        assert_eq!(tfb_split_tree_entropy(m, 3, &mut split), TfbStatus::Ok);
        assert!((v - split).abs() < 1e-9);
        assert_eq!(tfb_fb_entropy(m, &mut v), TfbStatus::Ok);
        assert!(v > 0.0);
        tfb_mass_free(m);
    }
}

#[test]
fn closed_forms() {
    let mut v = 0.0;
    let mut count = 0u64;
    unsafe {
        assert_eq!(tfb_hoivmf_value(4, 3, &mut v), TfbStatus::Ok);
        assert!((v - 369f64.log2()).abs() < 1e-12);
        assert_eq!(tfb_tfb_vacuous(2, 1, &mut v), TfbStatus::Ok);
        assert!((v - 3f64.log2()).abs() < 1e-12);
        assert_eq!(tfb_leaf_count(3, 2, &mut count), TfbStatus::Ok);
        assert_eq!(count, 19);
        assert_eq!(tfb_leaf_count(64, 1, &mut count), TfbStatus::Overflow);
        assert_eq!(tfb_hoivmf_value(2, 0, &mut v), TfbStatus::InvalidOrder);
        let p = [0.5, 0.5];
        assert_eq!(tfb_shannon(p.as_ptr(), 2, &mut v), TfbStatus::Ok);
        assert_eq!(v, 1.0);
        let bad = [0.5, 0.6];
        assert_eq!(tfb_shannon(bad.as_ptr(), 2, &mut v), TfbStatus::InvalidInput);
    }
}

#[test]
fn maximizer_and_vacuous_handles() {
    let labels: Vec<CString> = ["A", "B"].iter().map(|s| CString::new(*s).unwrap()).collect();
    let ptrs: Vec<*const c_char> = labels.iter().map(|s| s.as_ptr()).collect();
    let mut m = ptr::null_mut();
    let mut v = 0.0;
    let mut volume = 0.0;
    unsafe {
        assert_eq!(tfb_max_tfb_bpa(ptrs.as_ptr(), 2, 3, &mut m), TfbStatus::Ok);
        assert_eq!(tfb_tfb_entropy(m, 3, &mut v), TfbStatus::Ok);
        assert_eq!(tfb_hoivmf_value(2, 3, &mut volume), TfbStatus::Ok);
        assert!((v - volume).abs() < 1e-10);
        let mut json = ptr::null_mut();
        assert_eq!(tfb_mass_to_json(m, &mut json), TfbStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        tfb_string_free(json);
        assert!(text.starts_with(r#"{"frame":["A","B"],"masses":{"A":"#));
        tfb_mass_free(m);

        assert_eq!(tfb_mass_vacuous(ptrs.as_ptr(), 2, &mut m), TfbStatus::Ok);
        assert_eq!(tfb_fb_entropy(m, &mut v), TfbStatus::Ok);
        assert!((v - 3f64.log2()).abs() < 1e-12);
        tfb_mass_free(m);
    }
}

#[test]
fn deng_volume_buffer_protocol() {
    let m = handle(EXAMPLE6);
    let mut buf = [0.0; 32];
    let mut len = 0usize;
    unsafe {
        assert_eq!(tfb_deng_volume(m, 1e-3, 100, buf.as_mut_ptr(), 4, &mut len), TfbStatus::BufferTooSmall);
        assert_eq!(len, 14);
        assert_eq!(tfb_deng_volume(m, 1e-3, 100, buf.as_mut_ptr(), buf.len(), &mut len), TfbStatus::Ok);
        assert_eq!(len, 14);
        assert!((buf[13] - 3.4259).abs() < 5e-4);
        assert_eq!(tfb_deng_volume(m, 1e-9, 5, buf.as_mut_ptr(), buf.len(), &mut len), TfbStatus::NotConverged);
        assert_eq!(len, 5);
        assert!((buf[1] - 2.7641).abs() < 5e-4);
        tfb_mass_free(m);
    }
}

#[test]
fn errors_are_reported() {
    let mut m = ptr::null_mut();
    let mut v = 0.0;
    unsafe {
        let bad = CString::new(r#"{"frame":["A","B"],"masses":{"A":0.5,"B":0.6}}"#).unwrap();
        assert_eq!(tfb_mass_from_json(bad.as_ptr(), &mut m), TfbStatus::InvalidInput);
        assert!(m.is_null());
        assert!(last_error().contains("sum"));

        let unknown = CString::new(r#"{"frame":["A"],"masses":{"A,B":1.0}}"#).unwrap();
        assert_eq!(tfb_mass_from_json(unknown.as_ptr(), &mut m), TfbStatus::InvalidInput);
        assert!(last_error().contains("\"B\""));

        assert_eq!(tfb_mass_from_json(ptr::null(), &mut m), TfbStatus::NullPointer);
        assert_eq!(tfb_deng_entropy(ptr::null(), &mut v), TfbStatus::NullPointer);
        let h = handle(EXAMPLE6);
        assert_eq!(tfb_deng_entropy(h, ptr::null_mut()), TfbStatus::NullPointer);
        assert_eq!(tfb_tfb_entropy(h, 0, &mut v), TfbStatus::InvalidOrder);
        tfb_mass_free(h);
        tfb_mass_free(ptr::null_mut());
        assert_eq!(tfb_mass_frame_size(ptr::null()), 0);

        let invalid = [0xffu8 as c_char, 0];
        assert_eq!(tfb_mass_from_json(invalid.as_ptr(), &mut m), TfbStatus::InvalidUtf8);
    }
}

#[test]
fn split_guard_maps_to_status() {
    let labels: Vec<CString> = (0..12).map(|i| CString::new(format!("e{i}")).unwrap()).collect();
    let ptrs: Vec<*const c_char> = labels.iter().map(|s| s.as_ptr()).collect();
    let mut m = ptr::null_mut();
    let mut v = 0.0;
    unsafe {
        assert_eq!(tfb_mass_vacuous(ptrs.as_ptr(), 12, &mut m), TfbStatus::Ok);
        assert_eq!(tfb_split_tree_entropy(m, 6, &mut v), TfbStatus::TreeTooLarge);
        tfb_mass_free(m);
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

#[test]
fn header_is_valid_c() {
    if !have_cc() {
        eprintln!("cc not found; skipping header check");
        return;
    }
    let include = crate_dir().join("include");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(crate_dir().join("tests/c/smoke.c"))
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn c_program_links_against_staticlib() {
    // the staticlib sits next to the test binary's deps directory
    let target = Path::new(env!("CARGO_TARGET_TMPDIR")).parent().unwrap().to_path_buf();
    let lib = ["debug", "release"].iter().map(|p| target.join(p).join("libtfb_ffi.a")).find(|p| p.exists());
    let (Some(lib), true) = (lib, have_cc()) else {
        eprintln!("staticlib or cc not available; skipping link check");
        return;
    };
    let exe = Path::new(env!("CARGO_TARGET_TMPDIR")).join("tfb_smoke");
    let status = Command::new("cc")
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "smoke exited with {:?}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "3.4259");
}
