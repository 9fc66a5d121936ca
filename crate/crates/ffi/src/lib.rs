//! C ABI over the `rashomon` crate.
//!
//! Objects cross the boundary as opaque handles created by `grs_*_new` or
//! `grs_*_load` style functions and released with the matching `*_free`.
//! Every fallible function returns a [`GrsStatus`]; on failure the message
//! is available from [`grs_last_error`] on the same thread. Output
//! pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use ndarray::{Array1, Array2};
use rashomon::config::{validate_config, RunConfig};
use rashomon::data::{model_loss, permuted_loss_mc, Dataset, LossKind, SubsetIndex};
use rashomon::models::{gen_quadratic, load_bundle, LinearModel, Model, Predictor, QuadraticOracle};
use rashomon::pipeline::{emit_report, run_in_memory, RunReport};
use rashomon::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Io = 4,
    Data = 5,
    Model = 6,
    Runtime = 7,
    Panic = 8,
}

/// Loss used by evaluation helpers.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrsLoss {
    MeanSquaredError = 0,
    MeanAbsoluteError = 1,
    LogisticLoss = 2,
    ZeroOne = 3,
}

impl From<GrsLoss> for LossKind {
    fn from(l: GrsLoss) -> Self {
        match l {
            GrsLoss::MeanSquaredError => LossKind::MeanSquaredError,
            GrsLoss::MeanAbsoluteError => LossKind::MeanAbsoluteError,
            GrsLoss::LogisticLoss => LossKind::LogisticLoss,
            GrsLoss::ZeroOne => LossKind::ZeroOne,
        }
    }
}

/// Opaque dataset handle.
pub struct GrsDataset(Dataset);

/// Opaque model handle.
pub struct GrsModel(Model);

/// Opaque run configuration handle.
pub struct GrsConfig(RunConfig);

/// Opaque report handle.
pub struct GrsReport(RunReport);

/// One metrics row of a report.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GrsMetrics {
    pub epsilon: f64,
    pub ser: f64,
    pub fer_first_order: f64,
    pub fer_second_order: f64,
    pub n_members: usize,
    pub n_searched: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GrsStatus {
    match e {
        Error::Stage { source, .. } => status_of(source),
        Error::Config { .. } | Error::ConfigParse(_) => GrsStatus::Config,
        Error::Io { .. } | Error::Csv { .. } | Error::Json(_) => GrsStatus::Io,
        Error::Dataset(_) | Error::Shape(_) | Error::NonFinite(_) => GrsStatus::Data,
        Error::Bundle(_) | Error::Singular => GrsStatus::Model,
        Error::Diverged { .. } => GrsStatus::Runtime,
        Error::InvalidArgument(_) | Error::TooManyRows { .. } => GrsStatus::InvalidArgument,
    }
}

struct Fail(GrsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(GrsStatus::NullPointer, format!("{what} is null"))
}

fn invalid(message: impl Into<String>) -> Fail {
    Fail(GrsStatus::InvalidArgument, message.into())
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GrsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            GrsStatus::Ok
        }
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {message}"));
            GrsStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn matrix(p: *const f64, rows: usize, cols: usize, what: &str) -> Result<Array2<f64>, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    let len = rows.checked_mul(cols).ok_or_else(|| invalid(format!("{what}: size overflows")))?;
    let data = std::slice::from_raw_parts(p, len).to_vec();
    Ok(Array2::from_shape_vec((rows, cols), data).expect("length matches shape"))
}

unsafe fn put<T>(out: *mut *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, or null after a
/// success. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn grs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn grs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn grs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Synthetic quadratic-roots dataset with `n` rows.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn grs_dataset_quadratic(n: usize, seed: u64, out: *mut *mut GrsDataset) -> GrsStatus {
    guard(|| {
        if n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        put(out, GrsDataset(gen_quadratic(n, seed)), "out")
    })
}

/// Dataset from row-major `x` (`rows * n_features`) and `y`
/// (`rows * n_targets`). Columns are named `x0..` and `y0..`.
///
/// # Safety
/// `x` and `y` must point to arrays of the stated sizes; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn grs_dataset_new(
    x: *const f64,
    y: *const f64,
    rows: usize,
    n_features: usize,
    n_targets: usize,
    out: *mut *mut GrsDataset,
) -> GrsStatus {
    guard(|| {
        let x = matrix(x, rows, n_features, "x")?;
        let y = matrix(y, rows, n_targets, "y")?;
        let names = |p: &str, k: usize| (0..k).map(|i| format!("{p}{i}")).collect();
        let d = Dataset::new(x, y, names("x", n_features), names("y", n_targets))?;
        put(out, GrsDataset(d), "out")
    })
}

/// # Safety
/// `d` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn grs_dataset_rows(d: *const GrsDataset) -> usize {
    d.as_ref().map_or(0, |d| d.0.n_rows())
}

/// # Safety
/// `d` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn grs_dataset_features(d: *const GrsDataset) -> usize {
    d.as_ref().map_or(0, |d| d.0.n_features())
}

/// # Safety
/// `d` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn grs_dataset_targets(d: *const GrsDataset) -> usize {
    d.as_ref().map_or(0, |d| d.0.n_targets())
}

/// # Safety
/// `d` must come from this library or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn grs_dataset_free(d: *mut GrsDataset) {
    release(d);
}

/// Linear model `y = x W + b` with row-major `weights` (`n_in * n_out`).
///
/// # Safety
/// `weights` and `bias` must point to arrays of the stated sizes.
#[no_mangle]
pub unsafe extern "C" fn grs_model_linear(
    weights: *const f64,
    bias: *const f64,
    n_in: usize,
    n_out: usize,
    out: *mut *mut GrsModel,
) -> GrsStatus {
    guard(|| {
        let w = matrix(weights, n_in, n_out, "weights")?;
        let b = matrix(bias, 1, n_out, "bias")?;
        let model = LinearModel::new(w, Array1::from_iter(b))?;
        put(out, GrsModel(Model::Linear(model)), "out")
    })
}

/// Closed-form root oracle for the quadratic dataset.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn grs_model_quadratic(out: *mut *mut GrsModel) -> GrsStatus {
    guard(|| put(out, GrsModel(Model::Quadratic(QuadraticOracle::default())), "out"))
}

/// Loads a model bundle written by the `rashomon train` command.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn grs_model_load(path: *const c_char, out: *mut *mut GrsModel) -> GrsStatus {
    guard(|| {
        let path = text(path, "path")?;
        let (model, _) = load_bundle(path)?;
        put(out, GrsModel(model), "out")
    })
}

/// # Safety
/// `m` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn grs_model_input_dim(m: *const GrsModel) -> usize {
    m.as_ref().map_or(0, |m| m.0.input_dim())
}

/// # Safety
/// `m` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn grs_model_output_dim(m: *const GrsModel) -> usize {
    m.as_ref().map_or(0, |m| m.0.output_dim())
}

/// Predicts `rows` inputs from row-major `x` into `out`, which must hold
/// `rows * output_dim` values.
///
/// # Safety
/// Pointers must reference arrays of the stated sizes.
#[no_mangle]
pub unsafe extern "C" fn grs_model_predict(
    m: *const GrsModel,
    x: *const f64,
    rows: usize,
    out: *mut f64,
    out_len: usize,
) -> GrsStatus {
    guard(|| {
        let m = &borrow(m, "model")?.0;
        let x = matrix(x, rows, m.input_dim(), "x")?;
        let pred = m.predict(x.view())?;
        if out.is_null() {
            return Err(null("out"));
        }
        if out_len < pred.len() {
            return Err(invalid(format!("out holds {out_len} values, {} needed", pred.len())));
        }
        let dst = std::slice::from_raw_parts_mut(out, pred.len());
        for (d, v) in dst.iter_mut().zip(pred.iter()) {
            *d = *v;
        }
        Ok(())
    })
}

/// Empirical loss of `m` on `d`.
///
/// # Safety
/// Handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn grs_model_loss(
    m: *const GrsModel,
    d: *const GrsDataset,
    loss: GrsLoss,
    out: *mut f64,
) -> GrsStatus {
    guard(|| {
        let v = model_loss(&borrow(m, "model")?.0, &borrow(d, "dataset")?.0, loss.into())?;
        *out.as_mut().ok_or_else(|| null("out"))? = v;
        Ok(())
    })
}

/// Monte Carlo permutation importance of the feature columns in
/// `features` (one or two indices): mean increase in loss over `repeats`
/// shuffles and its standard error.
///
/// # Safety
/// `features` must point to `n_features` indices; outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn grs_permutation_importance(
    m: *const GrsModel,
    d: *const GrsDataset,
    features: *const usize,
    n_features: usize,
    loss: GrsLoss,
    repeats: usize,
    seed: u64,
    out_mean: *mut f64,
    out_std_error: *mut f64,
) -> GrsStatus {
    guard(|| {
        let (m, d) = (&borrow(m, "model")?.0, &borrow(d, "dataset")?.0);
        if features.is_null() {
            return Err(null("features"));
        }
        let s = SubsetIndex::new(std::slice::from_raw_parts(features, n_features).to_vec(), d.n_features())?;
        let kind = LossKind::from(loss);
        let base = model_loss(m, d, kind)?;
        let est = permuted_loss_mc(m, d, &s, kind, repeats, seed)?;
        *out_mean.as_mut().ok_or_else(|| null("out_mean"))? = est.mean - base;
        *out_std_error.as_mut().ok_or_else(|| null("out_std_error"))? = est.std_error;
        Ok(())
    })
}

/// # Safety
/// `m` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn grs_model_free(m: *mut GrsModel) {
    release(m);
}

/// Parses and validates a TOML run configuration.
///
/// # Safety
/// `toml` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn grs_config_parse(toml: *const c_char, out: *mut *mut GrsConfig) -> GrsStatus {
    guard(|| {
        let config = validate_config(text(toml, "toml")?)?;
        put(out, GrsConfig(config), "out")
    })
}

/// Sets the configured output directory, which [`grs_report_emit`] uses
/// when given a null directory.
///
/// # Safety
/// `c` must be a live handle; `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn grs_config_set_output_dir(c: *mut GrsConfig, dir: *const c_char) -> GrsStatus {
    guard(|| {
        let dir = PathBuf::from(text(dir, "dir")?);
        c.as_mut().ok_or_else(|| null("config"))?.0.output.dir = dir;
        Ok(())
    })
}

/// # Safety
/// `c` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn grs_config_free(c: *mut GrsConfig) {
    release(c);
}

/// Runs every stage in memory. Nothing is written to disk.
///
/// # Safety
/// `c` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn grs_run(c: *const GrsConfig, out: *mut *mut GrsReport) -> GrsStatus {
    guard(|| {
        let report = run_in_memory(&borrow(c, "config")?.0)?;
        put(out, GrsReport(report), "out")
    })
}

/// Writes the report files into `dir`, or into the configured output
/// directory when `dir` is null.
///
/// # Safety
/// `r` must be a live handle; `dir` null or a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn grs_report_emit(r: *const GrsReport, dir: *const c_char) -> GrsStatus {
    guard(|| {
        let r = &borrow(r, "report")?.0;
        let dir = if dir.is_null() {
            r.config.output.dir.clone()
        } else {
            PathBuf::from(text(dir, "dir")?)
        };
        emit_report(r, &dir)?;
        Ok(())
    })
}

/// The report as JSON. Free the string with [`grs_string_free`].
///
/// # Safety
/// `r` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn grs_report_json(r: *const GrsReport, out: *mut *mut c_char) -> GrsStatus {
    guard(|| {
        let json = serde_json::to_string_pretty(&borrow(r, "report")?.0).map_err(Error::from)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = CString::new(json).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// Number of metrics rows (one per method and tolerance).
///
/// # Safety
/// `r` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn grs_report_metrics_len(r: *const GrsReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.metrics.len())
}

/// Metrics row `index`. Its method name is written to `method` (freed with
/// [`grs_string_free`]) unless `method` is null.
///
/// # Safety
/// `r` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn grs_report_metrics(
    r: *const GrsReport,
    index: usize,
    out: *mut GrsMetrics,
    method: *mut *mut c_char,
) -> GrsStatus {
    guard(|| {
        let rows = &borrow(r, "report")?.0.metrics;
        let row = rows
            .get(index)
            .ok_or_else(|| invalid(format!("index {index} out of range for {} rows", rows.len())))?;
        let m = &row.metrics;
        *out.as_mut().ok_or_else(|| null("out"))? = GrsMetrics {
            epsilon: row.epsilon,
            ser: m.ser,
            fer_first_order: m.fer_first_order,
            fer_second_order: m.fer_second_order,
            n_members: m.n_members,
            n_searched: m.n_searched,
        };
        if !method.is_null() {
            *method = CString::new(row.method.clone()).expect("method has no NUL").into_raw();
        }
        Ok(())
    })
}

/// # Safety
/// `r` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn grs_report_free(r: *mut GrsReport) {
    release(r);
}
