use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use underbarrier::critical::find_critical_width;
use underbarrier::trajectory::{find_threshold, penetration};
use underbarrier::BarrierParams;
use underbarrier_ffi::*;

fn nominal() -> *mut UbBarrier {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ub_barrier_new(30.0, 0.2, 0.03, 2.0, &mut h) }, UbStatus::Ok);
    h
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ub_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn results_match_the_rust_api() {
    let p = BarrierParams::with_alpha0_sq(30.0, 0.2, 0.03, 2.0).unwrap();
    let h = nominal();
    let mut w = UbCriticalWidth::default();
    let mut pen = UbPenetration::default();
    let mut th = UbThreshold::default();
    unsafe {
        assert_eq!(ub_critical_width(h, &mut w), UbStatus::Ok);
        assert_eq!(ub_penetration(h, &mut pen), UbStatus::Ok);
        assert_eq!(ub_threshold(h, &mut th), UbStatus::Ok);
        ub_barrier_free(h);
    }
    assert_eq!(w.a0, find_critical_width(&p).unwrap().a0);
    let r = penetration(&p).unwrap();
    assert_eq!((pen.action_a0, pen.action_a1, pen.x_b), (r.action_a0, r.action_a1, r.x_b));
    assert_eq!(th.a_r, find_threshold(&p).unwrap().a_r);
}

#[test]
fn errors_carry_status_and_message() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(ub_barrier_new(30.0, 0.2, 0.03, -1.0, &mut h), UbStatus::InvalidParams);
        assert!(h.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(ub_barrier_new(30.0, 0.2, 0.03, 2.0, ptr::null_mut()), UbStatus::NullPointer);
        let mut out = UbPenetration::default();
        assert_eq!(ub_penetration(ptr::null(), &mut out), UbStatus::NullPointer);
        let h = nominal();
        assert_eq!(ub_penetration(h, ptr::null_mut()), UbStatus::NullPointer);
        ub_barrier_free(h);
        ub_barrier_free(ptr::null_mut());
    }
}

#[test]
fn run_config_renders_and_reports_config_errors() {
    let good = CString::new("[pen]\nkind = \"penetration\"\nB = 30.0\ngamma = 0.2\nalpha0_sq = 0.03\na = 2.0\n").unwrap();
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(ub_run_config(good.as_ptr(), &mut t), UbStatus::Ok);
        let text = CStr::from_ptr(ub_text_data(t)).to_str().unwrap().to_owned();
        ub_text_free(t);
        assert!(text.lines().any(|l| l.starts_with("A0_over_B")));
        let bad = CString::new("[x]\nkind = \"nope\"\n").unwrap();
        let mut t = ptr::null_mut();
        assert_eq!(ub_run_config(bad.as_ptr(), &mut t), UbStatus::Config);
        assert!(t.is_null());
        assert!(ub_text_data(ptr::null()).is_null());
    }
}

fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/underbarrier.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["ub_barrier_new", "ub_barrier_free", "ub_critical_width", "ub_penetration", "ub_threshold", "ub_run_config", "ub_last_error_message"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    // the test harness builds only the rlib; produce the staticlib for this profile
    let dir = artifact_dir();
    let mut build = Command::new(std::env::var("CARGO").unwrap_or_else(|_| "cargo".into()));
    build.args(["build", "--quiet", "-p", "underbarrier-ffi", "--lib", "--target-dir"]).arg(dir.parent().unwrap());
    if dir.file_name().is_some_and(|n| n == "release") {
        build.arg("--release");
    }
    assert!(build.status().unwrap().success());
    let lib = dir.join("libunderbarrier_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c_smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "smoke exited with {:?}", out.status.code());
    let line = String::from_utf8(out.stdout).unwrap();
    let a0: f64 = line.split_whitespace().next().unwrap().parse().unwrap();
    assert!((a0 - 1.72349).abs() < 1e-5, "{line}");
}
