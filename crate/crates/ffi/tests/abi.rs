use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use maxmean_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(mm_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn series_round_trip() {
    let values = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0];
    let mut x = ptr::null_mut();
    unsafe {
        assert_eq!(mm_series_new(values.as_ptr(), values.len(), 0.5, &mut x), MmStatus::Ok);
        assert_eq!(mm_series_len(x), 7);

        let mut r = MmWindowedNorm::default();
        assert_eq!(mm_windowed_pnorm(x, 2.0, 4, &mut r), MmStatus::Ok);
        assert!((r.value_pow_p - 0.5).abs() < 1e-15);
        assert!((r.value - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.arg_start, 0);

        let mut sup = 0.0;
        assert_eq!(mm_sup_norm(x, &mut sup), MmStatus::Ok);
        assert_eq!(sup, 1.0);

        let mut c = MmCheck::default();
        assert_eq!(mm_check_multiple_ordering(x, 1.0, 3, 2, &mut c), MmStatus::Ok);
        assert!(c.passed);
        assert!(c.factor.is_nan());

        mm_series_free(x);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut x = ptr::null_mut();
    unsafe {
        let bad = [1.0, f64::NAN];
        assert_eq!(mm_series_new(bad.as_ptr(), 2, 1.0, &mut x), MmStatus::InvalidArgument);
        assert!(x.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(mm_series_new(ptr::null(), 3, 1.0, &mut x), MmStatus::NullPointer);
        let mut r = MmWindowedNorm::default();
        assert_eq!(mm_windowed_pnorm(ptr::null(), 1.0, 1, &mut r), MmStatus::NullPointer);

        assert_eq!(mm_impulse_train(3, 9, &mut x), MmStatus::Ok);
        assert!(last_error().is_empty());
        assert_eq!(mm_windowed_pnorm(x, 0.0, 1, &mut r), MmStatus::InvalidArgument);
        assert_eq!(mm_windowed_pnorm(x, 1.0, 0, &mut r), MmStatus::InvalidArgument);
        mm_series_free(x);

        let mut f = ptr::null_mut();
        assert_eq!(
            mm_bump_train(1.0, 3.0, 1.0, &mut f, ptr::null_mut()),
            MmStatus::NotACounterexample
        );
        assert!(f.is_null());

        mm_series_free(ptr::null_mut());
        mm_step_free(ptr::null_mut());
        assert_eq!(mm_series_len(ptr::null()), 0);
    }
}

#[test]
fn step_functions() {
    let bps = [0.0, 1.0, 2.0, 3.0];
    let vals = [2.0, 2.0, -1.0];
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(mm_step_new(bps.as_ptr(), 4, vals.as_ptr(), 3, &mut f), MmStatus::Ok);
        assert_eq!(mm_step_pieces(f), 2);
        let mut r = MmIntervalNorm::default();
        assert_eq!(mm_interval_pnorm(f, 1.0, 1.0, &mut r), MmStatus::Ok);
        assert_eq!(r.value_pow_p, 2.0);
        assert_eq!(r.arg_left, 0.0);
        mm_step_free(f);

        assert_eq!(
            mm_step_new(bps.as_ptr(), 4, vals.as_ptr(), 2, &mut f),
            MmStatus::InvalidArgument
        );

        assert_eq!(mm_single_bump(0.5, 1.0, &mut f), MmStatus::Ok);
        assert_eq!(mm_interval_pnorm(f, 1.0, 1.0, &mut r), MmStatus::Ok);
        assert!((r.value_pow_p - 1.0).abs() < 1e-15);
        mm_step_free(f);

        let mut d = 0;
        assert_eq!(mm_bump_train(1.0, 2.5, 1.0, &mut f, &mut d), MmStatus::Ok);
        assert_eq!(d, 2);
        let mut c = MmCheck::default();
        assert_eq!(mm_check_two_scale_bound_cont(f, 1.0, 1.0, 2.5, &mut c), MmStatus::Ok);
        assert!(c.passed);
        assert!((c.lhs - c.rhs).abs() <= 1e-12 * c.rhs);
        assert!((c.factor - 1.2).abs() < 1e-12);
        mm_step_free(f);
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(crate_dir().join("include/maxmean.h")).unwrap();
    for name in [
        "MAXMEAN_H",
        "typedef struct MmSeries MmSeries;",
        "typedef struct MmStepFunction MmStepFunction;",
        "MM_STATUS_OK = 0",
        "MM_STATUS_NOT_A_COUNTEREXAMPLE = 3",
        "mm_last_error(void)",
        "mm_series_new(",
        "mm_series_free(",
        "mm_impulse_train(",
        "mm_windowed_pnorm(",
        "mm_sup_norm(",
        "mm_check_two_scale_bound(",
        "mm_check_multiple_ordering(",
        "mm_step_new(",
        "mm_step_free(",
        "mm_interval_pnorm(",
        "mm_single_bump(",
        "mm_bump_train(",
        "mm_check_two_scale_bound_cont(",
        "mm_status_str(",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

/// Directory holding the library artifacts of this build (`target/<profile>`).
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let lib = artifact_dir().join("libmaxmean_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("smoke");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(crate_dir().join("include"))
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke program failed to build");
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
