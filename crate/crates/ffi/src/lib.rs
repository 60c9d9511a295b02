//! C interface to periodforge.
//!
//! Objects are opaque handles created by `pf_*_parse` or `pf_*_named`
//! functions and released with the matching `pf_*_free`. Every fallible
//! call returns a [`PfStatus`]; the message of the most recent failure on
//! the calling thread is available from [`pf_last_error`].

#![allow(clippy::missing_safety_doc)]

use periodforge::forms::FormSpec;
use periodforge::gc::homology_report;
use periodforge::graph::{named_graph, Graph};
use periodforge::period::{integrate_canonical, integrate_residue, zeta, IntegralEstimate, IntegrationOptions, Target};
use periodforge::poly::graph_polynomial;
use periodforge::voronoi::{minimal_vectors, QuadraticForm};
use periodforge::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidGraph = 3,
    Parse = 4,
    Dimension = 5,
    Divergent = 6,
    NotProjective = 7,
    OutOfRange = 8,
    Numeric = 9,
    Expression = 10,
    NotPositiveDefinite = 11,
    BufferTooSmall = 12,
    Internal = 13,
}

/// Monte Carlo estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl From<&IntegralEstimate> for PfEstimate {
    fn from(e: &IntegralEstimate) -> PfEstimate {
        PfEstimate { mean: e.mean, stderr: e.stderr, samples: e.samples, seed: e.seed }
    }
}

/// Opaque graph handle.
pub struct PfGraph(Graph);

/// Opaque quadratic form handle.
pub struct PfForm(QuadraticForm);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> PfStatus {
    match e {
        Error::UnknownEdge(_) | Error::UnknownVertex(_) | Error::InvalidGraph(_) | Error::InvalidBuilder(_) => PfStatus::InvalidGraph,
        Error::Parse { .. } => PfStatus::Parse,
        Error::Dimension(_) | Error::DegreeMismatch(_) | Error::TooManyVariables(..) => PfStatus::Dimension,
        Error::Divergent(_) => PfStatus::Divergent,
        Error::NonProjective(_) => PfStatus::NotProjective,
        Error::OutOfRange(_) => PfStatus::OutOfRange,
        Error::SingularDeterminant | Error::SingularPoint | Error::Overflow | Error::NonFinite(_) | Error::ZeroStderr => PfStatus::Numeric,
        Error::Expression(_) => PfStatus::Expression,
        Error::NotPositiveDefinite => PfStatus::NotPositiveDefinite,
        Error::Certificate(_) => PfStatus::Internal,
    }
}

fn guard<F: FnOnce() -> Result<(), PfStatus>>(f: F) -> PfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PfStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            PfStatus::Internal
        }
    }
}

fn fail(e: Error) -> PfStatus {
    set_error(e.to_string());
    status_of(&e)
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, PfStatus> {
    if p.is_null() {
        set_error("null string argument".into());
        return Err(PfStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        PfStatus::InvalidUtf8
    })
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, PfStatus> {
    p.as_mut().ok_or_else(|| {
        set_error("null output pointer".into());
        PfStatus::NullPointer
    })
}

unsafe fn graph_ref<'a>(g: *const PfGraph) -> Result<&'a Graph, PfStatus> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| {
        set_error("null graph handle".into());
        PfStatus::NullPointer
    })
}

/// Copies `s` with a terminating NUL into `buf`. `needed` receives the
/// required size including the terminator.
unsafe fn write_string(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), PfStatus> {
    let bytes = s.as_bytes();
    if let Some(n) = needed.as_mut() {
        *n = bytes.len() + 1;
    }
    if buf.is_null() || len < bytes.len() + 1 {
        return Err(PfStatus::BufferTooSmall);
    }
    std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, bytes.len());
    *buf.add(bytes.len()) = 0;
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copies the last error message of this thread into `buf`. The message is
/// kept, so a sizing call with a null buffer can be followed by a real one.
#[no_mangle]
pub unsafe extern "C" fn pf_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> PfStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match write_string(&msg, buf, len, needed) {
        Ok(()) => PfStatus::Ok,
        Err(s) => s,
    }
}

/// Parses a graph in the `v`/`e` line format.
#[no_mangle]
pub unsafe extern "C" fn pf_graph_parse(text: *const c_char, out: *mut *mut PfGraph) -> PfStatus {
    guard(|| {
        let text = read_str(text)?;
        let out = out_ref(out)?;
        let g = Graph::parse(text).map_err(fail)?;
        *out = Box::into_raw(Box::new(PfGraph(g)));
        Ok(())
    })
}

/// Builds a named graph such as `wheel3`, `zigzag5` or `sunrise`.
#[no_mangle]
pub unsafe extern "C" fn pf_graph_named(name: *const c_char, out: *mut *mut PfGraph) -> PfStatus {
    guard(|| {
        let name = read_str(name)?;
        let out = out_ref(out)?;
        let g = named_graph(name).map_err(fail)?;
        *out = Box::into_raw(Box::new(PfGraph(g)));
        Ok(())
    })
}

/// Releases a graph handle; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pf_graph_free(g: *mut PfGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

#[no_mangle]
pub unsafe extern "C" fn pf_graph_num_edges(g: *const PfGraph, out: *mut usize) -> PfStatus {
    guard(|| {
        *out_ref(out)? = graph_ref(g)?.num_edges();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pf_graph_num_vertices(g: *const PfGraph, out: *mut usize) -> PfStatus {
    guard(|| {
        *out_ref(out)? = graph_ref(g)?.num_vertices();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pf_graph_loop_number(g: *const PfGraph, out: *mut usize) -> PfStatus {
    guard(|| {
        *out_ref(out)? = graph_ref(g)?.loop_number();
        Ok(())
    })
}

/// Writes the graph polynomial as text, e.g. `x1*x2 + x1*x3 + x2*x3`.
#[no_mangle]
pub unsafe extern "C" fn pf_graph_polynomial(g: *const PfGraph, buf: *mut c_char, len: usize, needed: *mut usize) -> PfStatus {
    guard(|| {
        let psi = graph_polynomial(graph_ref(g)?).map_err(fail)?;
        write_string(&psi.to_string(), buf, len, needed).inspect_err(|_| set_error("output buffer too small".into()))
    })
}

/// Monte Carlo estimate of the Feynman residue.
#[no_mangle]
pub unsafe extern "C" fn pf_residue(g: *const PfGraph, samples: u64, seed: u64, out: *mut PfEstimate) -> PfStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let out = out_ref(out)?;
        let est = integrate_residue(g, &IntegrationOptions::new(samples, seed)).map_err(fail)?;
        *out = PfEstimate::from(&est);
        Ok(())
    })
}

/// Monte Carlo estimate of a canonical integral; `form` lists the degrees,
/// e.g. `"5"` or `"5,9"`.
#[no_mangle]
pub unsafe extern "C" fn pf_canonical_integral(
    g: *const PfGraph,
    form: *const c_char,
    samples: u64,
    seed: u64,
    out: *mut PfEstimate,
) -> PfStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let spec = FormSpec::parse(read_str(form)?).map_err(fail)?;
        let out = out_ref(out)?;
        let est = integrate_canonical(g, &spec, &IntegrationOptions::new(samples, seed)).map_err(fail)?;
        *out = PfEstimate::from(&est);
        Ok(())
    })
}

/// `zeta(s)` for `s >= 2`.
#[no_mangle]
pub unsafe extern "C" fn pf_zeta(s: u32, out: *mut f64) -> PfStatus {
    guard(|| {
        if s < 2 {
            return Err(fail(Error::OutOfRange(format!("zeta({s}) needs s >= 2"))));
        }
        *out_ref(out)? = zeta(s);
        Ok(())
    })
}

/// Evaluates a target expression such as `"441/8*zeta(7)"`.
#[no_mangle]
pub unsafe extern "C" fn pf_target_value(expr: *const c_char, out: *mut f64) -> PfStatus {
    guard(|| {
        let t = Target::parse(read_str(expr)?).map_err(fail)?;
        *out_ref(out)? = t.value();
        Ok(())
    })
}

/// Dimension of graph complex homology at `loops` and degree
/// `edges - 2 loops`.
#[no_mangle]
pub unsafe extern "C" fn pf_gc_homology_dim(loops: usize, degree: i64, out: *mut usize) -> PfStatus {
    guard(|| {
        let report = homology_report(loops).map_err(fail)?;
        *out_ref(out)? = report.dims().get(&degree).copied().unwrap_or(0);
        Ok(())
    })
}

/// Parses a quadratic form: the dimension followed by the entries.
#[no_mangle]
pub unsafe extern "C" fn pf_form_parse(text: *const c_char, out: *mut *mut PfForm) -> PfStatus {
    guard(|| {
        let text = read_str(text)?;
        let out = out_ref(out)?;
        let q = QuadraticForm::parse(text).map_err(fail)?;
        *out = Box::into_raw(Box::new(PfForm(q)));
        Ok(())
    })
}

/// Releases a form handle; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pf_form_free(q: *mut PfForm) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// Writes the minimal vectors row by row into `buf` (`count * dim`
/// integers). `count` receives the number of vectors even when `buf` is too
/// small.
#[no_mangle]
pub unsafe extern "C" fn pf_form_minimal_vectors(q: *const PfForm, buf: *mut i64, cap: usize, count: *mut usize) -> PfStatus {
    guard(|| {
        let q = q.as_ref().map(|q| &q.0).ok_or_else(|| {
            set_error("null form handle".into());
            PfStatus::NullPointer
        })?;
        let mv = minimal_vectors(q).map_err(fail)?;
        *out_ref(count)? = mv.len();
        let flat: Vec<i64> = mv.into_iter().flatten().collect();
        if buf.is_null() || cap < flat.len() {
            set_error(format!("buffer holds {cap} integers, {} needed", flat.len()));
            return Err(PfStatus::BufferTooSmall);
        }
        std::ptr::copy_nonoverlapping(flat.as_ptr(), buf, flat.len());
        Ok(())
    })
}
