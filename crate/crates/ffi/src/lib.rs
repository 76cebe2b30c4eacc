//! C ABI for the `mcfe` library.
//!
//! Objects are exposed as opaque handles created by `mcfe_*_new`-style
//! constructors and released with the matching `*_free` function. Every
//! fallible call returns an [`McfeStatus`]; on failure a description is
//! available from [`mcfe_last_error_message`] on the same thread. Panics
//! never cross the boundary; they are reported as `MCFE_STATUS_PANIC`.
//!
//! Strings returned through `char **` out-parameters are owned by the caller
//! and must be released with [`mcfe_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use mcfe::bench::{
    estimate_circuit_fidelity, qaoa_circuit, sample_er_graph, QaoaParams, SimMode, WeightRange,
};
use mcfe::circuit::{parse_circuit, random_circuit, serialize_circuit, to_alternating_form};
use mcfe::estimator::{chi_f, DEFAULT_RESAMPLES};
use mcfe::randomization::{build_mirror, MirrorKind, MirrorSample};
use mcfe::seed::{rng_from_seed, split_seed, streams};
use mcfe::simulator::{
    circuit_fidelity_oracle, ideal_output_distribution, output_distribution, ErrorModel, Family,
};
use mcfe::{Circuit, Error};

/// Result of every fallible call.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum McfeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    WidthLimit = 4,
    EstimateUndefined = 5,
    DataError = 6,
    Panic = 7,
}

/// A circuit.
pub struct McfeCircuit(Circuit);

/// A sampled error model.
pub struct McfeErrorModel(ErrorModel);

/// A mirror circuit with its expected noiseless outcome.
pub struct McfeMirrorSample(MirrorSample);

/// Fidelity estimate returned by [`mcfe_estimate_fidelity`].
#[repr(C)]
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct McfeEstimate {
    pub chi_f: f64,
    pub gamma: [f64; 3],
    pub bootstrap_sd: f64,
    /// Nonzero when `chi_f` lies outside `[0, 1]`.
    pub out_of_range: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(McfeStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } | Error::UnsupportedGate(_) => McfeStatus::ParseError,
            Error::WidthLimit { .. } => McfeStatus::WidthLimit,
            Error::EstimateUndefined(_) => McfeStatus::EstimateUndefined,
            Error::Data(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_) => McfeStatus::DataError,
            _ => McfeStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(McfeStatus::InvalidArgument, msg.into())
}

fn null(what: &str) -> Failure {
    Failure(McfeStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> McfeStatus {
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            McfeStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            McfeStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn obj<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = CString::new(s)
        .map_err(|_| invalid("string contains NUL"))?
        .into_raw();
    Ok(())
}

/// Message describing the last failed call on this thread, or an empty
/// string. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn mcfe_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mcfe_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mcfe_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a circuit from its text form.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcfe_circuit_parse(
    text: *const c_char,
    out: *mut *mut McfeCircuit,
) -> McfeStatus {
    guard(|| {
        let c = parse_circuit(str_arg(text, "text")?)?;
        put(out, McfeCircuit(c))
    })
}

/// Random circuit of `depth` layers on `n` qubits.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcfe_circuit_random(
    n: usize,
    depth: usize,
    seed: u64,
    out: *mut *mut McfeCircuit,
) -> McfeStatus {
    guard(|| {
        if n == 0 || n > mcfe::simulator::SIM_LIMIT {
            return Err(invalid(format!(
                "width {n} outside 1..={}",
                mcfe::simulator::SIM_LIMIT
            )));
        }
        put(
            out,
            McfeCircuit(random_circuit(n, depth, &mut rng_from_seed(seed))),
        )
    })
}

/// MaxCut QAOA circuit on a random graph with uniform `[0, 1]` weights and
/// random angles, derived from `seed` the same way as `mcfe generate`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcfe_circuit_qaoa(
    n: usize,
    layers: usize,
    edge_probability: f64,
    seed: u64,
    out: *mut *mut McfeCircuit,
) -> McfeStatus {
    guard(|| {
        let mut grng = rng_from_seed(split_seed(seed, streams::GRAPH, 0));
        let g = sample_er_graph(n, edge_probability, WeightRange::default(), &mut grng)?;
        let params = QaoaParams::random(
            layers,
            &mut rng_from_seed(split_seed(seed, streams::QAOA_ANGLES, 0)),
        )?;
        put(out, McfeCircuit(qaoa_circuit(&g, &params)?))
    })
}

/// # Safety
/// `c` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn mcfe_circuit_free(c: *mut McfeCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcfe_circuit_width(c: *const McfeCircuit, out: *mut usize) -> McfeStatus {
    guard(|| {
        let c = obj(c, "circuit")?;
        *out.as_mut().ok_or_else(|| null("output pointer"))? = c.0.width();
        Ok(())
    })
}

/// Text form of a circuit; free the result with [`mcfe_string_free`].
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcfe_circuit_to_text(
    c: *const McfeCircuit,
    out: *mut *mut c_char,
) -> McfeStatus {
    guard(|| put_string(out, serialize_circuit(&obj(c, "circuit")?.0)))
}

/// Samples an error model of the named family (`"S"`, `"H"`, `"S+H"`,
/// `"H-2Q"`, `"none"` or `"depolarizing"`).
///
/// # Safety
/// `family` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcfe_error_model_sample(
    family: *const c_char,
    n: usize,
    seed: u64,
    out: *mut *mut McfeErrorModel,
) -> McfeStatus {
    guard(|| {
        let fam: Family = str_arg(family, "family")?.parse()?;
        if n == 0 {
            return Err(invalid("error model needs at least one qubit"));
        }
        put(
            out,
            McfeErrorModel(ErrorModel::sample(fam, n, &mut rng_from_seed(seed))),
        )
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcfe_error_model_from_json(
    json: *const c_char,
    out: *mut *mut McfeErrorModel,
) -> McfeStatus {
    guard(|| {
        put(
            out,
            McfeErrorModel(ErrorModel::from_json(str_arg(json, "json")?)?),
        )
    })
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcfe_error_model_to_json(
    m: *const McfeErrorModel,
    out: *mut *mut c_char,
) -> McfeStatus {
    guard(|| put_string(out, obj(m, "error model")?.0.to_json()?))
}

/// # Safety
/// `m` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn mcfe_error_model_free(m: *mut McfeErrorModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Samples one mirror circuit of `kind` (1, 2 or 3) for `c`.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcfe_mirror_sample(
    c: *const McfeCircuit,
    kind: u8,
    seed: u64,
    out: *mut *mut McfeMirrorSample,
) -> McfeStatus {
    guard(|| {
        let c = &obj(c, "circuit")?.0;
        let kind = MirrorKind::try_from(kind)?;
        let ct = to_alternating_form(c)?;
        put(out, McfeMirrorSample(build_mirror(kind, c, &ct, seed)?))
    })
}

/// Copies the mirror circuit into a new circuit handle.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcfe_mirror_circuit(
    s: *const McfeMirrorSample,
    out: *mut *mut McfeCircuit,
) -> McfeStatus {
    guard(|| put(out, McfeCircuit(obj(s, "mirror sample")?.0.circuit.clone())))
}

/// Basis index of the noiseless outcome (qubit 0 most significant).
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcfe_mirror_target(
    s: *const McfeMirrorSample,
    out: *mut u64,
) -> McfeStatus {
    guard(|| {
        let s = obj(s, "mirror sample")?;
        *out.as_mut().ok_or_else(|| null("output pointer"))? = s.0.target.index();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn mcfe_mirror_sample_free(s: *mut McfeMirrorSample) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Writes the `2^n` outcome probabilities of `c` run on `|0…0⟩` into
/// `probs`. A null `model` means noiseless.
///
/// # Safety
/// `c` must be a live handle, `model` null or a live handle, and `probs`
/// must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mcfe_output_distribution(
    c: *const McfeCircuit,
    model: *const McfeErrorModel,
    probs: *mut f64,
    len: usize,
) -> McfeStatus {
    guard(|| {
        let c = &obj(c, "circuit")?.0;
        if probs.is_null() {
            return Err(null("probs"));
        }
        let d = match model.as_ref() {
            Some(m) => output_distribution(c, &m.0)?,
            None => ideal_output_distribution(c)?,
        };
        let p = d.probabilities();
        if len != p.len() {
            return Err(invalid(format!(
                "probs holds {len} values, need {}",
                p.len()
            )));
        }
        ptr::copy_nonoverlapping(p.as_ptr(), probs, len);
        Ok(())
    })
}

/// Exact entanglement fidelity of `c` under `model`.
///
/// # Safety
/// `c` and `model` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcfe_circuit_fidelity(
    c: *const McfeCircuit,
    model: *const McfeErrorModel,
    out: *mut f64,
) -> McfeStatus {
    guard(|| {
        let f = circuit_fidelity_oracle(&obj(c, "circuit")?.0, &obj(model, "error model")?.0)?;
        *out.as_mut().ok_or_else(|| null("output pointer"))? = f;
        Ok(())
    })
}

/// Simulates `samples` mirror circuits per kind and estimates the fidelity
/// of `c`. `shots == 0` uses exact outcome distributions.
///
/// # Safety
/// `c` and `model` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcfe_estimate_fidelity(
    c: *const McfeCircuit,
    model: *const McfeErrorModel,
    samples: usize,
    shots: u64,
    seed: u64,
    out: *mut McfeEstimate,
) -> McfeStatus {
    guard(|| {
        let c = &obj(c, "circuit")?.0;
        let m = &obj(model, "error model")?.0;
        let out = out.as_mut().ok_or_else(|| null("output pointer"))?;
        let mode = if shots == 0 {
            SimMode::Exact
        } else {
            SimMode::Shots(shots)
        };
        let est = estimate_circuit_fidelity(c, m, samples, mode, DEFAULT_RESAMPLES, seed)?;
        *out = McfeEstimate {
            chi_f: est.chi_f,
            gamma: est.gamma_hats,
            bootstrap_sd: est.bootstrap_sd,
            out_of_range: est.out_of_range as i32,
        };
        Ok(())
    })
}

/// The fidelity estimate from three ensemble polarizations on `n` qubits.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcfe_chi_f(
    g1: f64,
    g2: f64,
    g3: f64,
    n: usize,
    out: *mut f64,
) -> McfeStatus {
    guard(|| {
        let v = chi_f(g1, g2, g3, n)?;
        *out.as_mut().ok_or_else(|| null("output pointer"))? = v;
        Ok(())
    })
}
