use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use rashomon_ffi::*;

fn last_error() -> String {
    let p = grs_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn linear_model_predicts_and_scores() {
    unsafe {
        let w = [1.0, 0.0, 0.0, 2.0];
        let b = [0.5, -0.5];
        let mut m = ptr::null_mut();
        assert_eq!(grs_model_linear(w.as_ptr(), b.as_ptr(), 2, 2, &mut m), GrsStatus::Ok);
        assert_eq!((grs_model_input_dim(m), grs_model_output_dim(m)), (2, 2));

        let x = [1.0, 1.0, 2.0, 3.0];
        let mut out = [0.0; 4];
        assert_eq!(grs_model_predict(m, x.as_ptr(), 2, out.as_mut_ptr(), 4), GrsStatus::Ok);
        assert_eq!(out, [1.5, 1.5, 2.5, 5.5]);

        let mut d = ptr::null_mut();
        assert_eq!(grs_dataset_new(x.as_ptr(), out.as_ptr(), 2, 2, 2, &mut d), GrsStatus::Ok);
        assert_eq!(grs_dataset_rows(d), 2);
        let mut loss = f64::NAN;
        assert_eq!(grs_model_loss(m, d, GrsLoss::MeanSquaredError, &mut loss), GrsStatus::Ok);
        assert_eq!(loss, 0.0);
        grs_dataset_free(d);
        grs_model_free(m);
    }
}

#[test]
fn errors_set_code_and_message() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(grs_model_linear(ptr::null(), ptr::null(), 2, 2, &mut m), GrsStatus::NullPointer);
        assert!(m.is_null());
        assert!(last_error().contains("weights"));

        let w = [1.0; 4];
        let b = [0.0; 2];
        grs_model_linear(w.as_ptr(), b.as_ptr(), 2, 2, &mut m);
        let x = [1.0, 2.0];
        let mut out = [0.0; 1];
        assert_eq!(grs_model_predict(m, x.as_ptr(), 1, out.as_mut_ptr(), 1), GrsStatus::InvalidArgument);
        assert!(last_error().contains("2 needed"));
        grs_model_free(m);

        let path = CString::new("/nonexistent/model.json").unwrap();
        assert_eq!(grs_model_load(path.as_ptr(), &mut m), GrsStatus::Io);

        let bad = CString::new("[rashomon]\nepsilon = -1.0\n").unwrap();
        let mut c = ptr::null_mut();
        assert_eq!(grs_config_parse(bad.as_ptr(), &mut c), GrsStatus::Config);
        assert!(last_error().contains("epsilon"));

        let mut d = ptr::null_mut();
        assert_eq!(grs_dataset_quadratic(10, 0, &mut d), GrsStatus::Ok);
        assert!(grs_last_error().is_null());
        grs_dataset_free(d);
    }
}

#[test]
fn free_accepts_null() {
    unsafe {
        grs_dataset_free(ptr::null_mut());
        grs_model_free(ptr::null_mut());
        grs_config_free(ptr::null_mut());
        grs_report_free(ptr::null_mut());
        grs_string_free(ptr::null_mut());
    }
}

#[test]
fn oracle_importance_orders_features() {
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(grs_dataset_quadratic(400, 3, &mut d), GrsStatus::Ok);
        let mut oracle = ptr::null_mut();
        assert_eq!(grs_model_quadratic(&mut oracle), GrsStatus::Ok);
        let mut scores = [0.0; 3];
        for (k, score) in scores.iter_mut().enumerate() {
            let mut se = f64::NAN;
            let status = grs_permutation_importance(oracle, d, &k, 1, GrsLoss::MeanSquaredError, 20, 0, score, &mut se);
            assert_eq!(status, GrsStatus::Ok);
            assert!(se > 0.0);
        }
        assert!(scores[0] > scores[1] && scores[1] > scores[2] && scores[2] > 0.0, "{scores:?}");

        let bad = [7usize];
        let (mut mean, mut se) = (f64::NAN, f64::NAN);
        let status = grs_permutation_importance(oracle, d, bad.as_ptr(), 1, GrsLoss::MeanSquaredError, 10, 0, &mut mean, &mut se);
        assert_eq!(status, GrsStatus::InvalidArgument);
        assert!(mean.is_nan());
        grs_model_free(oracle);
        grs_dataset_free(d);
    }
}

#[test]
fn run_reports_metrics_and_emits_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = CString::new(
        "[data]\nn = 150\n[reference]\nkind = \"train-linear\"\n[rashomon]\nepsilon = 0.1\n[sampler]\nlevels = 2\n[attribution]\nrepeats = 4\n",
    )
    .unwrap();
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(grs_config_parse(cfg.as_ptr(), &mut c), GrsStatus::Ok);
        let out = CString::new(dir.path().to_str().unwrap()).unwrap();
        assert_eq!(grs_config_set_output_dir(c, out.as_ptr()), GrsStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(grs_run(c, &mut r), GrsStatus::Ok);

        assert_eq!(grs_report_metrics_len(r), 1);
        let mut row = GrsMetrics::default();
        let mut method = ptr::null_mut();
        assert_eq!(grs_report_metrics(r, 0, &mut row, &mut method), GrsStatus::Ok);
        assert_eq!(CStr::from_ptr(method).to_str().unwrap(), "grs");
        grs_string_free(method);
        assert_eq!(row.epsilon, 0.1);
        assert_eq!(row.ser, 1.0);
        assert!(row.n_members >= 1);
        assert_eq!(grs_report_metrics(r, 1, &mut row, ptr::null_mut()), GrsStatus::InvalidArgument);

        let mut json = ptr::null_mut();
        assert_eq!(grs_report_json(r, &mut json), GrsStatus::Ok);
        assert!(CStr::from_ptr(json).to_str().unwrap().contains("\"methods\""));
        grs_string_free(json);

        assert_eq!(grs_report_emit(r, ptr::null()), GrsStatus::Ok);
        assert!(dir.path().join("report.json").exists());
        grs_report_free(r);
        grs_config_free(c);
    }
}

/// The test binary sits next to the freshly built shared library.
fn library_dir() -> PathBuf {
    std::env::current_exe().unwrap().parent().unwrap().to_path_buf()
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "rashomon.h"

int main(void) {
    GrsDataset *d = NULL;
    if (grs_dataset_quadratic(50, 1, &d) != GRS_STATUS_OK) return 1;
    GrsModel *m = NULL;
    double w[12] = {0}, b[4] = {0};
    if (grs_model_linear(w, b, 3, 4, &m) != GRS_STATUS_OK) return 2;
    double loss = -1.0;
    if (grs_model_loss(m, d, GRS_LOSS_MEAN_SQUARED_ERROR, &loss) != GRS_STATUS_OK) return 3;
    if (grs_model_linear(NULL, b, 3, 4, &m) != GRS_STATUS_NULL_POINTER) return 4;
    printf("%s %zu %.6f %s\n", grs_version(), grs_dataset_rows(d), loss, grs_last_error());
    grs_model_free(m);
    grs_dataset_free(d);
    return 0;
}
"#;

#[test]
fn c_program_links_against_header() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let lib = library_dir();
    if !lib.join("librashomon_ffi.so").exists() {
        eprintln!("shared library not built; skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg(format!("-I{}", include.display()))
        .arg(format!("-L{}", lib.display()))
        .arg("-lrashomon_ffi")
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).env("LD_LIBRARY_PATH", &lib).output().unwrap();
    assert!(out.status.success(), "{out:?}");
    let line = String::from_utf8(out.stdout).unwrap();
    assert!(line.starts_with(env!("CARGO_PKG_VERSION")), "{line}");
    assert!(line.contains(" 50 ") && line.contains("weights is null"), "{line}");
}
