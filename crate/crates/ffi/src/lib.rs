//! C ABI for the diamdet estimators.
//!
//! Graphs are opaque handles created by one of the `diamdet_graph_*`
//! constructors and released with [`diamdet_graph_free`]. Every fallible
//! function returns a [`DiamdetStatus`]; on failure a message is available
//! from [`diamdet_last_error`] on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use diamdet::cgr::cgr_sweep;
use diamdet::generate::{generate, GenSpec};
use diamdet::graph::{load_graph, load_graph_str};
use diamdet::report::{run_estimator, Algo, Params, DEFAULT_K};
use diamdet::{Error, Graph, GraphFormat};

/// Opaque graph handle.
pub struct DiamdetGraph {
    graph: Graph,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiamdetStatus {
    Ok = 0,
    /// A required pointer argument was null.
    Null = 1,
    /// Malformed graph text.
    Parse = 2,
    /// The estimator cannot run on this graph (directedness, weights,
    /// connectivity, oracle size cap).
    Precondition = 3,
    InvalidArgument = 4,
    Io = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
    /// The caller's buffer is shorter than the number of vertices.
    BufferTooSmall = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiamdetFormat {
    /// `n m directed|undirected` header, then `u v [w]` lines.
    Canonical = 0,
    /// DIMACS `.gr` (directed, 1-indexed).
    DimacsGr = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiamdetAlgo {
    Cgr = 0,
    ThreeHalves = 1,
    FiveThirds = 2,
    RadiusEcc = 3,
    Exact = 4,
}

/// Estimator parameters. Zero in any field selects the default.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DiamdetParams {
    pub k: u32,
    pub q: u32,
    pub ell: u32,
    pub big_l: u32,
    pub oracle_cap: u32,
}

/// Summary of one run. Fields an algorithm does not produce are set to
/// `DIAMDET_NONE` (64-bit) or `DIAMDET_NO_VERTEX` (32-bit).
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiamdetEstimate {
    /// Diameter estimate, or the exact diameter for `DIAMDET_ALGO_EXACT`.
    pub diameter: u64,
    pub witness_u: u32,
    pub witness_v: u32,
    /// Radius estimate (radius-ecc) or exact radius (exact).
    pub radius: u64,
    pub center: u32,
    pub searches: u64,
}

pub const DIAMDET_NONE: u64 = u64::MAX;
pub const DIAMDET_NO_VERTEX: u32 = u32::MAX;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> DiamdetStatus {
    match e {
        Error::Parse { .. } | Error::NegativeWeight { .. } | Error::VertexOutOfRange { .. } | Error::ConflictingEdge { .. } => {
            DiamdetStatus::Parse
        }
        Error::Io(_) => DiamdetStatus::Io,
        e if e.is_precondition() => DiamdetStatus::Precondition,
        _ => DiamdetStatus::InvalidArgument,
    }
}

struct Failure(DiamdetStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f` behind a panic guard and records any failure message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DiamdetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DiamdetStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| payload.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            set_error(&format!("internal panic: {msg}"));
            DiamdetStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(DiamdetStatus::Null, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(DiamdetStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

fn graph_format(f: DiamdetFormat) -> GraphFormat {
    match f {
        DiamdetFormat::Canonical => GraphFormat::Canonical,
        DiamdetFormat::DimacsGr => GraphFormat::DimacsGr,
    }
}

fn format_arg(raw: i32) -> Result<DiamdetFormat, Failure> {
    match raw {
        0 => Ok(DiamdetFormat::Canonical),
        1 => Ok(DiamdetFormat::DimacsGr),
        _ => Err(Failure(DiamdetStatus::InvalidArgument, format!("unknown format {raw}"))),
    }
}

fn algo_arg(raw: i32) -> Result<Algo, Failure> {
    Ok(match raw {
        0 => Algo::Cgr,
        1 => Algo::ThreeHalves,
        2 => Algo::FiveThirds,
        3 => Algo::RadiusEcc,
        4 => Algo::Exact,
        _ => return Err(Failure(DiamdetStatus::InvalidArgument, format!("unknown algorithm {raw}"))),
    })
}

/// Maps C parameters onto the overrides the algorithm accepts; zero fields
/// and fields the algorithm does not use are left at their defaults.
fn params_for(algo: Algo, p: Option<&DiamdetParams>) -> Params {
    let p = p.copied().unwrap_or_default();
    let nz = |v: u32| (v != 0).then_some(v as usize);
    let mut out = Params::default();
    if p.oracle_cap != 0 {
        out.oracle_cap = p.oracle_cap as usize;
    }
    match algo {
        Algo::Cgr | Algo::RadiusEcc => {
            out.k = nz(p.k);
            out.q = nz(p.q);
        }
        Algo::ThreeHalves => out.ell = nz(p.ell),
        Algo::FiveThirds => {
            out.ell = nz(p.ell);
            out.big_l = nz(p.big_l);
        }
        Algo::Exact => {}
    }
    out
}

unsafe fn write_handle(out: *mut *mut DiamdetGraph, graph: Graph) {
    *out = Box::into_raw(Box::new(DiamdetGraph { graph }));
}

unsafe fn graph_arg<'a>(g: *const DiamdetGraph) -> Result<&'a Graph, Failure> {
    g.as_ref().map(|h| &h.graph).ok_or_else(|| null("graph"))
}

/// Parses graph text. `format` is a `DiamdetFormat` value.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn diamdet_graph_parse(text: *const c_char, format: i32, out: *mut *mut DiamdetGraph) -> DiamdetStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = str_arg(text, "text")?;
        let g = load_graph_str(text, graph_format(format_arg(format)?))?;
        write_handle(out, g);
        Ok(())
    })
}

/// Reads a graph file. `format` is a `DiamdetFormat` value.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn diamdet_graph_load_file(path: *const c_char, format: i32, out: *mut *mut DiamdetGraph) -> DiamdetStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = str_arg(path, "path")?;
        let format = graph_format(format_arg(format)?);
        let file = std::fs::File::open(path).map_err(|e| Failure(DiamdetStatus::Io, format!("{path}: {e}")))?;
        let g = load_graph(std::io::BufReader::new(file), format)?;
        write_handle(out, g);
        Ok(())
    })
}

/// Generates a graph from a spec such as `gnm:n=50,m=200,w=10:7`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn diamdet_graph_generate(spec: *const c_char, out: *mut *mut DiamdetGraph) -> DiamdetStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec: GenSpec = str_arg(spec, "spec")?.parse()?;
        write_handle(out, generate(&spec)?);
        Ok(())
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `graph` must come from a `diamdet_graph_*` constructor and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn diamdet_graph_free(graph: *mut DiamdetGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of vertices, 0 for null.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn diamdet_graph_n(graph: *const DiamdetGraph) -> usize {
    graph.as_ref().map_or(0, |h| h.graph.n())
}

/// Number of edges, 0 for null.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn diamdet_graph_m(graph: *const DiamdetGraph) -> usize {
    graph.as_ref().map_or(0, |h| h.graph.m())
}

/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn diamdet_graph_is_directed(graph: *const DiamdetGraph) -> bool {
    graph.as_ref().is_some_and(|h| h.graph.is_directed())
}

/// Runs an estimator and fills `out`. `algo` is a `DiamdetAlgo` value;
/// `params` may be null for defaults.
///
/// # Safety
/// `graph` must be a live handle, `params` null or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn diamdet_estimate(
    graph: *const DiamdetGraph,
    algo: i32,
    params: *const DiamdetParams,
    out: *mut DiamdetEstimate,
) -> DiamdetStatus {
    guard(|| {
        let g = graph_arg(graph)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let algo = algo_arg(algo)?;
        let r = run_estimator(g, algo, &params_for(algo, params.as_ref()))?;
        let (wu, wv) = r.witness.unwrap_or((DIAMDET_NO_VERTEX, DIAMDET_NO_VERTEX));
        *out = DiamdetEstimate {
            diameter: r.estimate.or(r.diameter).unwrap_or(DIAMDET_NONE),
            witness_u: wu,
            witness_v: wv,
            radius: r.radius_estimate.or(r.radius).unwrap_or(DIAMDET_NONE),
            center: r.center.unwrap_or(DIAMDET_NO_VERTEX),
            searches: r.searches.map_or(DIAMDET_NONE, |s| s as u64),
        };
        Ok(())
    })
}

/// Runs an estimator and returns its full JSON report in `*out`. Release
/// the string with [`diamdet_string_free`].
///
/// # Safety
/// As [`diamdet_estimate`]; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn diamdet_report_json(
    graph: *const DiamdetGraph,
    algo: i32,
    params: *const DiamdetParams,
    out: *mut *mut c_char,
) -> DiamdetStatus {
    guard(|| {
        let g = graph_arg(graph)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let algo = algo_arg(algo)?;
        let r = run_estimator(g, algo, &params_for(algo, params.as_ref()))?;
        let json = CString::new(r.to_json()).expect("JSON has no interior NUL");
        *out = json.into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from [`diamdet_report_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn diamdet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Eccentricity estimates of every vertex from the CGR sweep with the given
/// `k` (0 for the default). `buf` must hold at least `n` entries.
///
/// # Safety
/// `graph` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn diamdet_eccentricities(graph: *const DiamdetGraph, k: u32, buf: *mut u64, len: usize) -> DiamdetStatus {
    guard(|| {
        let g = graph_arg(graph)?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < g.n() {
            return Err(Failure(
                DiamdetStatus::BufferTooSmall,
                format!("buffer holds {len} entries, graph has {} vertices", g.n()),
            ));
        }
        let k = if k == 0 { DEFAULT_K } else { k as usize };
        let r = cgr_sweep(g, k, None)?;
        ptr::copy_nonoverlapping(r.eccentricities.as_ptr(), buf, r.eccentricities.len());
        Ok(())
    })
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call into this library on the thread.
#[no_mangle]
pub extern "C" fn diamdet_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn diamdet_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
