//! C ABI over `resolvent-lab`.
//!
//! Matrices and graphs cross the boundary as opaque handles created by
//! `rl_*_new`/`rl_*_from_json` and released by the matching `rl_*_free`.
//! Every fallible call returns an [`RlStatus`]; on failure the message is
//! available from [`rl_last_error`] on the same thread until the next failing
//! call. Outputs are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use resolvent_lab::correspond::{correspondence_report, Regime};
use resolvent_lab::graph::resolvent_graph;
use resolvent_lab::hypoconvex::{lambert_w0, prox_exp_family, prox_indicator_quadratic, ExpFamily};
use resolvent_lab::iterate::{proximal_point, Status};
use resolvent_lab::linear::{
    optimal_comonotone_modulus_linear, optimal_monotone_modulus_linear, resolvent_linear,
};
use resolvent_lab::monotone::{check_rho_comonotone, check_rho_monotone, check_single_valued};
use resolvent_lab::resolvent::{certify_map, MapProperty};
use resolvent_lab::sets::BoxSet;
use resolvent_lab::{CertReport, Error, LinearOp, OperatorGraph, PairSampler, PointMap, Vector};

/// Opaque square matrix.
pub struct RlMatrix(LinearOp);

/// Opaque operator graph.
pub struct RlGraph(OperatorGraph);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    Domain = 4,
    Regime = 5,
    ResolventUndefined = 6,
    Bracket = 7,
    Parse = 8,
    Panic = 9,
}

/// Table row of a matrix's optimal comonotonicity modulus.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlRegime {
    Cocoercive = 0,
    Monotone = 1,
    Averaged = 2,
    Nonexpansive = 3,
    Conic = 4,
    MaybeMultivalued = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlIterStatus {
    Converged = 0,
    MaxIter = 1,
    Diverged = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlMapProperty {
    Conic = 0,
    Averaged = 1,
    Nonexpansive = 2,
    Cocoercive = 3,
    Lipschitz = 4,
    StronglyMonotone = 5,
}

/// Summary of a certification report.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RlCert {
    pub passed: bool,
    pub worst_margin: f64,
    pub samples_used: usize,
}

/// Summary of a proximal-point run.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RlTrace {
    pub status: RlIterStatus,
    pub iterations: usize,
    pub last: f64,
    pub last_residual: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RlStatus {
    match e {
        Error::MalformedGraph(_) | Error::Parse(_) | Error::Io(_) => RlStatus::Parse,
        Error::Dimension { .. } => RlStatus::Dimension,
        Error::Parameter(_) => RlStatus::InvalidArgument,
        Error::Domain(_) => RlStatus::Domain,
        Error::Regime(_) => RlStatus::Regime,
        Error::ResolventUndefined => RlStatus::ResolventUndefined,
        Error::Bracket(_) => RlStatus::Bracket,
    }
}

struct Fail(RlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(RlStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, mapping errors and panics onto a status and the last-error slot.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RlStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            RlStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    // SAFETY: caller passes either null or a live pointer.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    // SAFETY: caller passes either null or a writable pointer.
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: caller guarantees `len` readable doubles at `p`.
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null("json"));
    }
    // SAFETY: caller guarantees a NUL-terminated string.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Fail(RlStatus::Parse, "json is not UTF-8".into()))
}

fn cert(r: &CertReport) -> RlCert {
    RlCert { passed: r.passed, worst_margin: r.worst_margin, samples_used: r.samples_used }
}

/// Message of the last failing call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds an `n × n` matrix from `n*n` row-major doubles.
///
/// # Safety
/// `data` must point to `n*n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_matrix_new(n: usize, data: *const f64, out_m: *mut *mut RlMatrix) -> RlStatus {
    guard(|| {
        let len = n.checked_mul(n).ok_or_else(|| Fail(RlStatus::InvalidArgument, "n overflows".into()))?;
        let data = unsafe { slice(data, len, "data") }?;
        let m = LinearOp::from_row_major(n, data.to_vec())?;
        *unsafe { out(out_m, "out") }? = Box::into_raw(Box::new(RlMatrix(m)));
        Ok(())
    })
}

/// Parses a matrix file `{"n": k, "rows": [[..], ..]}`.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_matrix_from_json(json: *const c_char, out_m: *mut *mut RlMatrix) -> RlStatus {
    guard(|| {
        let m = LinearOp::from_json(unsafe { text(json) }?)?;
        *unsafe { out(out_m, "out") }? = Box::into_raw(Box::new(RlMatrix(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn rl_matrix_free(m: *mut RlMatrix) {
    if !m.is_null() {
        // SAFETY: `m` came from Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(m) });
    }
}

/// Side length of the matrix, 0 for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_matrix_dim(m: *const RlMatrix) -> usize {
    unsafe { m.as_ref() }.map_or(0, |m| m.0.n())
}

/// `y = M x` for vectors of length `rl_matrix_dim(m)`.
///
/// # Safety
/// `x` and `y` must hold `rl_matrix_dim(m)` doubles.
#[no_mangle]
pub unsafe extern "C" fn rl_matrix_apply(m: *const RlMatrix, x: *const f64, y: *mut f64) -> RlStatus {
    guard(|| {
        let m = unsafe { deref(m, "matrix") }?;
        let n = m.0.n();
        let x = unsafe { slice(x, n, "x") }?;
        if y.is_null() {
            return Err(null("y"));
        }
        let r = m.0.apply_slice(x);
        // SAFETY: caller guarantees `n` writable doubles at `y`.
        unsafe { std::slice::from_raw_parts_mut(y, n) }.copy_from_slice(&r);
        Ok(())
    })
}

/// Largest ρ with `A` ρ-monotone.
///
/// # Safety
/// `m` must be a live handle; `rho` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_matrix_optimal_monotone(m: *const RlMatrix, rho: *mut f64) -> RlStatus {
    guard(|| {
        let v = optimal_monotone_modulus_linear(&unsafe { deref(m, "matrix") }?.0);
        *unsafe { out(rho, "rho") }? = v;
        Ok(())
    })
}

/// Largest ρ with `A` ρ-comonotone; `+INFINITY` for the zero matrix.
///
/// # Safety
/// `m` must be a live handle; `rho` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_matrix_optimal_comonotone(m: *const RlMatrix, rho: *mut f64) -> RlStatus {
    guard(|| {
        let v = optimal_comonotone_modulus_linear(&unsafe { deref(m, "matrix") }?.0);
        *unsafe { out(rho, "rho") }? = v.value();
        Ok(())
    })
}

/// `(I + A)⁻¹` as a new handle.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_matrix_resolvent(m: *const RlMatrix, out_m: *mut *mut RlMatrix) -> RlStatus {
    guard(|| {
        let j = resolvent_linear(&unsafe { deref(m, "matrix") }?.0)?;
        *unsafe { out(out_m, "out") }? = Box::into_raw(Box::new(RlMatrix(j)));
        Ok(())
    })
}

/// Certifies a map property of the matrix viewed as `x ↦ Mx` on sampled pairs.
///
/// # Safety
/// `m` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_matrix_certify(
    m: *const RlMatrix,
    property: RlMapProperty,
    param: f64,
    seed: u64,
    tol: f64,
    result: *mut RlCert,
) -> RlStatus {
    guard(|| {
        let m = unsafe { deref(m, "matrix") }?;
        let prop = match property {
            RlMapProperty::Conic => MapProperty::Conic(param),
            RlMapProperty::Averaged => MapProperty::Averaged(param),
            RlMapProperty::Nonexpansive => MapProperty::Nonexpansive,
            RlMapProperty::Cocoercive => MapProperty::Cocoercive(param),
            RlMapProperty::Lipschitz => MapProperty::Lipschitz(param),
            RlMapProperty::StronglyMonotone => MapProperty::StronglyMonotone(param),
        };
        let r = certify_map(&m.0, prop, &PairSampler::with_seed(seed), tol)?;
        *unsafe { out(result, "result") }? = cert(&r);
        Ok(())
    })
}

/// Regime of the matrix and whether every claim of its row certified.
///
/// # Safety
/// `m` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_matrix_correspond(
    m: *const RlMatrix,
    seed: u64,
    tol: f64,
    regime: *mut RlRegime,
    passed: *mut bool,
) -> RlStatus {
    guard(|| {
        let m = unsafe { deref(m, "matrix") }?;
        let r = correspondence_report(&m.0, &PairSampler::with_seed(seed), tol)?;
        *unsafe { out(regime, "regime") }? = match r.regime {
            Regime::Cocoercive => RlRegime::Cocoercive,
            Regime::Monotone => RlRegime::Monotone,
            Regime::Averaged => RlRegime::Averaged,
            Regime::Nonexpansive => RlRegime::Nonexpansive,
            Regime::Conic => RlRegime::Conic,
            Regime::MaybeMultivalued => RlRegime::MaybeMultivalued,
        };
        *unsafe { out(passed, "passed") }? = r.passed;
        Ok(())
    })
}

/// Parses a graph file `{"dim": n, "pairs": [{"x": [..], "u": [..]}, ..]}`.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_graph_from_json(json: *const c_char, out_g: *mut *mut RlGraph) -> RlStatus {
    guard(|| {
        let g = OperatorGraph::from_json(unsafe { text(json) }?)?;
        *unsafe { out(out_g, "out") }? = Box::into_raw(Box::new(RlGraph(g)));
        Ok(())
    })
}

/// Graph of `{(x, Mx)}` at the given `count` points of dimension `rl_matrix_dim(m)`.
///
/// # Safety
/// `points` must hold `count * rl_matrix_dim(m)` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_graph_from_matrix(
    m: *const RlMatrix,
    points: *const f64,
    count: usize,
    out_g: *mut *mut RlGraph,
) -> RlStatus {
    guard(|| {
        let m = unsafe { deref(m, "matrix") }?;
        let n = m.0.n();
        let len = count.checked_mul(n).ok_or_else(|| Fail(RlStatus::InvalidArgument, "count overflows".into()))?;
        let flat = unsafe { slice(points, len, "points") }?;
        let pts = flat
            .chunks(n.max(1))
            .take(count)
            .map(|c| Vector::new(c.to_vec()))
            .collect::<resolvent_lab::Result<Vec<_>>>()?;
        let g = OperatorGraph::from_map(n, &pts, |x| m.0.apply(x))?;
        *unsafe { out(out_g, "out") }? = Box::into_raw(Box::new(RlGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn rl_graph_free(g: *mut RlGraph) {
    if !g.is_null() {
        // SAFETY: `g` came from Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Number of graph points, 0 for null.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_graph_len(g: *const RlGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.len())
}

/// Resolvent graph `{(x + u, x)}` as a new handle.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_graph_resolvent(g: *const RlGraph, out_g: *mut *mut RlGraph) -> RlStatus {
    guard(|| {
        let r = resolvent_graph(&unsafe { deref(g, "graph") }?.0);
        *unsafe { out(out_g, "out") }? = Box::into_raw(Box::new(RlGraph(r)));
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_graph_check_rho_monotone(g: *const RlGraph, rho: f64, tol: f64, result: *mut RlCert) -> RlStatus {
    guard(|| {
        let r = check_rho_monotone(&unsafe { deref(g, "graph") }?.0, rho, tol)?;
        *unsafe { out(result, "result") }? = cert(&r);
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_graph_check_rho_comonotone(g: *const RlGraph, rho: f64, tol: f64, result: *mut RlCert) -> RlStatus {
    guard(|| {
        let r = check_rho_comonotone(&unsafe { deref(g, "graph") }?.0, rho, tol)?;
        *unsafe { out(result, "result") }? = cert(&r);
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_graph_check_single_valued(g: *const RlGraph, result: *mut RlCert) -> RlStatus {
    guard(|| {
        let r = check_single_valued(&unsafe { deref(g, "graph") }?.0);
        *unsafe { out(result, "result") }? = cert(&r);
        Ok(())
    })
}

/// Principal branch of the Lambert W function, `z ≥ −1/e`.
///
/// # Safety
/// `w` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_lambert_w0(z: f64, w: *mut f64) -> RlStatus {
    guard(|| {
        let v = lambert_w0(z)?;
        *unsafe { out(w, "w") }? = v;
        Ok(())
    })
}

/// Closed-form prox of `e^y − y²/(2λ)` with step `μ ≤ λ`.
///
/// # Safety
/// `y` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_prox_exp(lambda: f64, mu: f64, x: f64, y: *mut f64) -> RlStatus {
    guard(|| {
        let r = prox_exp_family(lambda, mu, x)?;
        *unsafe { out(y, "y") }? = r.point;
        Ok(())
    })
}

/// Prox of `ι_[lo,hi] − y²/(2λ)` with step `μ < λ`; infinite bounds allowed.
///
/// # Safety
/// `y` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_prox_indicator_quadratic(
    lambda: f64,
    mu: f64,
    lo: f64,
    hi: f64,
    x: f64,
    y: *mut f64,
) -> RlStatus {
    guard(|| {
        let set = BoxSet::interval(lo, hi)?;
        let r = prox_indicator_quadratic(lambda, mu, &set, &Vector::scalar(x))?;
        *unsafe { out(y, "y") }? = r[0];
        Ok(())
    })
}

/// Proximal-point iteration on the exp family from `x0`.
///
/// # Safety
/// `trace` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_proximal_point_exp(
    lambda: f64,
    mu: f64,
    x0: f64,
    max_iter: usize,
    tol: f64,
    trace: *mut RlTrace,
) -> RlStatus {
    guard(|| {
        let f = ExpFamily::new(lambda)?;
        let t = proximal_point(&f, mu, x0, max_iter, tol)?;
        *unsafe { out(trace, "trace") }? = RlTrace {
            status: match t.status {
                Status::Converged => RlIterStatus::Converged,
                Status::MaxIter => RlIterStatus::MaxIter,
                Status::Diverged => RlIterStatus::Diverged,
            },
            iterations: t.iterations(),
            last: t.last()[0],
            last_residual: t.residuals.last().copied().unwrap_or(f64::NAN),
        };
        Ok(())
    })
}
