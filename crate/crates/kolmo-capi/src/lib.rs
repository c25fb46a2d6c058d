//! C ABI for `kolmo`.
//!
//! Every function returns a [`KolmoStatus`]. On failure the message is kept
//! in thread-local storage and can be read with
//! [`kolmo_last_error_message`]. Objects are opaque handles created by a
//! `*_new`/`*_build`/`*_from_json` function and released by the matching
//! `*_free`. Strings returned through `char **` belong to the caller and
//! must be released with [`kolmo_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kolmo::extension::{build_unified_space_with, BuildOptions, MeasurementSetup, SetupFile, UnifiedSpace};
use kolmo::hilbert::{gleason_measure, matrix_from_pairs, DensityOperator, Projector};
use kolmo::polytope::{is_member, CorrelationVector, MembershipCertificate, PairSet};
use kolmo::rational::{format_rational, round_sig, to_f64};
use kolmo::Error;

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KolmoStatus {
    Ok = 0,
    /// Null pointer, invalid UTF-8 or malformed JSON.
    InvalidArgument = 1,
    Dimension = 2,
    Numerical = 3,
    Domain = 4,
    Precondition = 5,
    Layout = 6,
    Size = 7,
    Ownership = 8,
    Conditioning = 9,
    Normalization = 10,
    Rationalization = 11,
    InvalidInput = 12,
    /// A Rust panic was caught at the boundary.
    Panic = 13,
}

impl From<&Error> for KolmoStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Dimension(_) => KolmoStatus::Dimension,
            Error::Numerical(_) => KolmoStatus::Numerical,
            Error::Domain(_) => KolmoStatus::Domain,
            Error::Precondition(_) => KolmoStatus::Precondition,
            Error::Layout(_) => KolmoStatus::Layout,
            Error::Size(_) => KolmoStatus::Size,
            Error::Ownership(_) => KolmoStatus::Ownership,
            Error::Conditioning(_) => KolmoStatus::Conditioning,
            Error::Normalization(_) => KolmoStatus::Normalization,
            Error::Rationalization(_) => KolmoStatus::Rationalization,
            Error::InvalidInput(_) => KolmoStatus::InvalidInput,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(msg).ok());
}

struct Failure(KolmoStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(KolmoStatus::from(&e), e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(KolmoStatus::InvalidArgument, msg.into())
}

/// Runs `f`, records any error or panic and converts it to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> KolmoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            KolmoStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside kolmo");
            KolmoStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(invalid(format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| invalid(format!("{what} is null")))
}

unsafe fn in_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| invalid(format!("{what} is null")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(invalid(format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|_| invalid("string contains a NUL byte"))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn kolmo_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn kolmo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// Pair sets and membership

/// The index set `S` of a correlation polytope `C(n, S)`.
pub struct KolmoPairSet(PairSet);

/// `n` events and `pair_count` pairs given as `2 * pair_count` one-based
/// indices `i0, j0, i1, j1, ...`.
///
/// # Safety
/// `pairs` must point to `2 * pair_count` integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kolmo_pair_set_new(
    n: usize,
    pairs: *const u32,
    pair_count: usize,
    out: *mut *mut KolmoPairSet,
) -> KolmoStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let flat = slice(pairs, 2 * pair_count, "pairs")?;
        let list: Vec<(usize, usize)> = flat.chunks(2).map(|c| (c[0] as usize, c[1] as usize)).collect();
        *out = Box::into_raw(Box::new(KolmoPairSet(PairSet::new(n, list)?)));
        Ok(())
    })
}

/// The Clauser–Horne layout `n = 4`, `S = {13, 14, 23, 24}`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kolmo_pair_set_s4(out: *mut *mut KolmoPairSet) -> KolmoStatus {
    guard(|| {
        *out_ptr(out, "out")? = Box::into_raw(Box::new(KolmoPairSet(PairSet::s4())));
        Ok(())
    })
}

/// Number of coordinates `n + |S|`.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kolmo_pair_set_len(set: *const KolmoPairSet, out: *mut usize) -> KolmoStatus {
    guard(|| {
        *out_ptr(out, "out")? = in_ref(set, "set")?.0.len();
        Ok(())
    })
}

/// # Safety
/// `set` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kolmo_pair_set_free(set: *mut KolmoPairSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Outcome of a membership query, with its certificate.
pub struct KolmoMembership(MembershipCertificate, PairSet);

/// Decides `p ∈ C(n, S)` for `values` laid out as singles `p1..pn` then the
/// pairs of `set` in lexicographic order.
///
/// # Safety
/// `set` must be live, `values` must hold `len` doubles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kolmo_check_membership(
    set: *const KolmoPairSet,
    values: *const f64,
    len: usize,
    out: *mut *mut KolmoMembership,
) -> KolmoStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let layout = in_ref(set, "set")?.0.clone();
        let p = CorrelationVector::from_flat(layout.clone(), slice(values, len, "values")?.to_vec())?;
        let cert = is_member(&p)?;
        *out = Box::into_raw(Box::new(KolmoMembership(cert, layout)));
        Ok(())
    })
}

/// # Safety
/// `m` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kolmo_membership_is_member(m: *const KolmoMembership, out: *mut bool) -> KolmoStatus {
    guard(|| {
        *out_ptr(out, "out")? = in_ref(m, "membership")?.0.member;
        Ok(())
    })
}

/// Reconstruction residual for members, phase-one infeasibility otherwise.
///
/// # Safety
/// `m` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kolmo_membership_residual(m: *const KolmoMembership, out: *mut f64) -> KolmoStatus {
    guard(|| {
        *out_ptr(out, "out")? = in_ref(m, "membership")?.0.residual;
        Ok(())
    })
}

/// JSON with `member`, `residual`, certificate `weights` keyed by vertex
/// bit string and, for rejected `(4, S4)` vectors, the `violated_facet`.
///
/// # Safety
/// `m` must be live; `out` writable. Free the string with
/// [`kolmo_string_free`].
#[no_mangle]
pub unsafe extern "C" fn kolmo_membership_to_json(m: *const KolmoMembership, out: *mut *mut c_char) -> KolmoStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let KolmoMembership(cert, layout) = in_ref(m, "membership")?;
        let weights: serde_json::Map<String, serde_json::Value> =
            cert.weights.iter().map(|(v, w)| (v.to_string(), serde_json::json!(round_sig(*w)))).collect();
        let facet = cert
            .violated_facet
            .as_ref()
            .map(|f| serde_json::json!({ "name": f.name, "excess": round_sig(f.value) }));
        let value = serde_json::json!({
            "layout": layout.to_string(),
            "member": cert.member,
            "residual": round_sig(cert.residual),
            "weights": weights,
            "violated_facet": facet,
        });
        *out = into_c_string(value.to_string())?;
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kolmo_membership_free(m: *mut KolmoMembership) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

// ---------------------------------------------------------------------------
// Setups and unified spaces

/// A validated measurement setup.
pub struct KolmoSetup(MeasurementSetup);

/// Parses a setup file (the JSON accepted by `kolmo build`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kolmo_setup_from_json(json: *const c_char, out: *mut *mut KolmoSetup) -> KolmoStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let text = read_str(json, "json")?;
        let file: SetupFile = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        *out = Box::into_raw(Box::new(KolmoSetup(file.to_setup()?)));
        Ok(())
    })
}

/// # Safety
/// `setup` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kolmo_setup_free(setup: *mut KolmoSetup) {
    if !setup.is_null() {
        drop(Box::from_raw(setup));
    }
}

/// The classical space reproducing a setup's quantum probabilities.
pub struct KolmoUnifiedSpace(UnifiedSpace);

/// Builds the unified space; `full_table` keeps zero-probability patterns.
///
/// # Safety
/// `setup` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kolmo_unified_space_build(
    setup: *const KolmoSetup,
    full_table: bool,
    out: *mut *mut KolmoUnifiedSpace,
) -> KolmoStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let setup = &in_ref(setup, "setup")?.0;
        let unified = build_unified_space_with(setup, BuildOptions { include_zero_patterns: full_table })?;
        *out = Box::into_raw(Box::new(KolmoUnifiedSpace(unified)));
        Ok(())
    })
}

/// Number of elementary events, and how many have positive weight.
///
/// # Safety
/// `space` must be live; both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn kolmo_unified_space_counts(
    space: *const KolmoUnifiedSpace,
    points: *mut usize,
    positive: *mut usize,
) -> KolmoStatus {
    guard(|| {
        let u = &in_ref(space, "space")?.0;
        *out_ptr(points, "points")? = u.points.len();
        *out_ptr(positive, "positive")? = u.positive_points().count();
        Ok(())
    })
}

/// Probability of a named event (`pattern:1010`, `a=up`, `performed:a`),
/// as an exact `"num/den"` string and as a double.
///
/// # Safety
/// `space` must be live, `event` NUL-terminated, outputs writable. Free
/// `out_exact` with [`kolmo_string_free`].
#[no_mangle]
pub unsafe extern "C" fn kolmo_unified_space_probability(
    space: *const KolmoUnifiedSpace,
    event: *const c_char,
    out_exact: *mut *mut c_char,
    out_value: *mut f64,
) -> KolmoStatus {
    guard(|| {
        let u = &in_ref(space, "space")?.0;
        let name = read_str(event, "event")?;
        let exact_slot = out_ptr(out_exact, "out_exact")?;
        let value_slot = out_ptr(out_value, "out_value")?;
        let p = u.space.probability_of(name)?;
        *value_slot = to_f64(&p);
        *exact_slot = into_c_string(format_rational(&p))?;
        Ok(())
    })
}

/// The space as JSON: points with `"num/den"` weights and named events.
///
/// # Safety
/// `space` must be live; `out` writable. Free with [`kolmo_string_free`].
#[no_mangle]
pub unsafe extern "C" fn kolmo_unified_space_to_json(
    space: *const KolmoUnifiedSpace,
    out: *mut *mut c_char,
) -> KolmoStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let u = &in_ref(space, "space")?.0;
        let text = serde_json::to_string(&u.space.to_json_model()).map_err(|e| invalid(e.to_string()))?;
        *out = into_c_string(text)?;
        Ok(())
    })
}

/// # Safety
/// `space` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kolmo_unified_space_free(space: *mut KolmoUnifiedSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

// ---------------------------------------------------------------------------
// Stateless helpers

/// Runs a named scenario (`example-one`, `double-slit`, `coin`, `epr`) and
/// returns its JSON report and overall verdict.
///
/// # Safety
/// `name` must be NUL-terminated; outputs writable. Free `out_json` with
/// [`kolmo_string_free`].
#[no_mangle]
pub unsafe extern "C" fn kolmo_run_scenario(
    name: *const c_char,
    out_json: *mut *mut c_char,
    out_passed: *mut bool,
) -> KolmoStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        let json_slot = out_ptr(out_json, "out_json")?;
        let passed_slot = out_ptr(out_passed, "out_passed")?;
        let report = kolmo::scenarios::run_scenario(name)?;
        *passed_slot = report.passed();
        *json_slot = into_c_string(report.to_json().to_string())?;
        Ok(())
    })
}

fn read_matrix(data: &[f64], dim: usize) -> Vec<Vec<[f64; 2]>> {
    (0..dim)
        .map(|r| (0..dim).map(|c| [data[2 * (r * dim + c)], data[2 * (r * dim + c) + 1]]).collect())
        .collect()
}

/// `tr(W E)` for a density matrix and a projector of size `dim`, both
/// row-major with interleaved real and imaginary parts (`2 * dim * dim`
/// doubles each).
///
/// # Safety
/// `density` and `projector` must each hold `2 * dim * dim` doubles; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn kolmo_gleason_measure(
    dim: usize,
    density: *const f64,
    projector: *const f64,
    out: *mut f64,
) -> KolmoStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let n = dim.checked_mul(dim).and_then(|x| x.checked_mul(2)).ok_or_else(|| invalid("dim too large"))?;
        let w = DensityOperator::new(matrix_from_pairs(&read_matrix(slice(density, n, "density")?, dim))?)?;
        let e = Projector::new(matrix_from_pairs(&read_matrix(slice(projector, n, "projector")?, dim))?)?;
        *out = gleason_measure(&w, &e)?;
        Ok(())
    })
}
