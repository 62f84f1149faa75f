//! C interface to the curvature and rewiring engine.
//!
//! Graphs and curvature maps are opaque handles owned by the caller and
//! released with their `_free` function. Every fallible call returns an
//! [`AfrcStatus`]; on failure a message for the calling thread is available
//! from [`afrc_last_error_message`] until the next failing call.
//!
//! Panics never cross the boundary; they are reported as
//! `AFRC_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use afrc::curvature::{compute_all_with, CurvatureOptions};
use afrc::rewiring::{afr_rewire, Iterations, RewireConfig};
use afrc::{CurvatureKind, CurvatureMap, Error, Graph, NodeId};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AfrcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    /// The exact transport reference refused an edge above its degree guard.
    Capability = 5,
    Hypothesis = 6,
    /// The output buffer is shorter than required; nothing was written.
    BufferTooSmall = 7,
    /// The curvature map belongs to a different graph state.
    Stale = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AfrcCurvatureKind {
    Af3 = 0,
    Af4 = 1,
    OrcRef = 2,
}

impl From<AfrcCurvatureKind> for CurvatureKind {
    fn from(k: AfrcCurvatureKind) -> Self {
        match k {
            AfrcCurvatureKind::Af3 => CurvatureKind::Af3,
            AfrcCurvatureKind::Af4 => CurvatureKind::Af4,
            AfrcCurvatureKind::OrcRef => CurvatureKind::OrcRef,
        }
    }
}

/// Rewiring settings. With `heuristic` set, `add` and `remove` are ignored
/// and the budgets come from the curvature distribution. `iterations == 0`
/// repeats until a round changes nothing.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct AfrcRewireOptions {
    pub kind: AfrcCurvatureKind,
    pub heuristic: bool,
    pub add: usize,
    pub remove: usize,
    pub iterations: usize,
    pub seed: u64,
}

/// Opaque graph handle.
pub struct AfrcGraph {
    inner: Graph,
}

/// Opaque curvature map handle.
pub struct AfrcCurvatureMap {
    inner: CurvatureMap,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AfrcStatus {
    match e {
        Error::Parse { .. } | Error::SelfLoopInput { .. } => AfrcStatus::Parse,
        Error::Io { .. } => AfrcStatus::Io,
        Error::Capability { .. } => AfrcStatus::Capability,
        Error::Hypothesis(_) => AfrcStatus::Hypothesis,
        Error::Stale { .. } => AfrcStatus::Stale,
        _ => AfrcStatus::InvalidArgument,
    }
}

/// Runs `f`, recording the error message and mapping panics.
fn guarded(f: impl FnOnce() -> Result<(), (AfrcStatus, String)>) -> AfrcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AfrcStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            AfrcStatus::Internal
        }
    }
}

fn fail(e: Error) -> (AfrcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (AfrcStatus, String) {
    (AfrcStatus::NullPointer, format!("{what} is null"))
}

/// Message of the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn afrc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn afrc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// A graph with `node_count` nodes labelled `0..node_count` and no edges.
#[no_mangle]
pub extern "C" fn afrc_graph_new(node_count: u32) -> *mut AfrcGraph {
    Box::into_raw(Box::new(AfrcGraph {
        inner: Graph::with_nodes(node_count as usize),
    }))
}

/// # Safety
/// `graph` is null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn afrc_graph_free(graph: *mut AfrcGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Loads a whitespace-separated edge list.
///
/// # Safety
/// `path` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn afrc_graph_load(path: *const c_char, out: *mut *mut AfrcGraph) -> AfrcStatus {
    guarded(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| (AfrcStatus::InvalidArgument, "path is not UTF-8".to_string()))?;
        let g = afrc::io::load_edge_list(path).map_err(fail)?;
        *out = Box::into_raw(Box::new(AfrcGraph { inner: g }));
        Ok(())
    })
}

/// Adds the undirected edge `(u, v)`. `added` (optional) receives whether
/// the edge was new.
///
/// # Safety
/// `graph` is a live handle; `added` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn afrc_graph_add_edge(graph: *mut AfrcGraph, u: u32, v: u32, added: *mut bool) -> AfrcStatus {
    guarded(|| {
        let g = graph.as_mut().ok_or_else(|| null("graph"))?;
        let new = g.inner.add_edge(NodeId(u), NodeId(v)).map_err(fail)?;
        if !added.is_null() {
            *added = new;
        }
        Ok(())
    })
}

/// # Safety
/// `graph` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn afrc_graph_node_count(graph: *const AfrcGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.inner.node_count())
}

/// # Safety
/// `graph` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn afrc_graph_edge_count(graph: *const AfrcGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.inner.edge_count())
}

/// Copies the canonical edge list (`us[i] < vs[i]`, sorted) into two
/// arrays of length at least `capacity`.
///
/// # Safety
/// `us` and `vs` point to `capacity` writable elements.
#[no_mangle]
pub unsafe extern "C" fn afrc_graph_edges(graph: *const AfrcGraph, us: *mut u32, vs: *mut u32, capacity: usize) -> AfrcStatus {
    guarded(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        let edges = g.inner.edges();
        if capacity < edges.len() {
            return Err((
                AfrcStatus::BufferTooSmall,
                format!("need {} slots, got {capacity}", edges.len()),
            ));
        }
        if us.is_null() || vs.is_null() {
            return Err(null("output buffer"));
        }
        for (i, e) in edges.iter().enumerate() {
            *us.add(i) = e.u.0;
            *vs.add(i) = e.v.0;
        }
        Ok(())
    })
}

/// Curvature of every edge, in canonical edge order.
///
/// # Safety
/// `graph` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn afrc_curvature_compute(
    graph: *const AfrcGraph,
    kind: AfrcCurvatureKind,
    out: *mut *mut AfrcCurvatureMap,
) -> AfrcStatus {
    guarded(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let map = compute_all_with(&g.inner, kind.into(), &CurvatureOptions::default()).map_err(fail)?;
        *out = Box::into_raw(Box::new(AfrcCurvatureMap { inner: map }));
        Ok(())
    })
}

/// # Safety
/// `map` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn afrc_curvature_map_len(map: *const AfrcCurvatureMap) -> usize {
    map.as_ref().map_or(0, |m| m.inner.len())
}

/// Copies the values into `out`, which must hold `afrc_curvature_map_len`
/// doubles. Fails with `AFRC_STATUS_STALE` when `graph` has changed since
/// the map was computed.
///
/// # Safety
/// Handles are live; `out` points to `capacity` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn afrc_curvature_map_values(
    map: *const AfrcCurvatureMap,
    graph: *const AfrcGraph,
    out: *mut f64,
    capacity: usize,
) -> AfrcStatus {
    guarded(|| {
        let m = map.as_ref().ok_or_else(|| null("map"))?;
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        m.inner.ensure_fresh(&g.inner).map_err(fail)?;
        if capacity < m.inner.len() {
            return Err((
                AfrcStatus::BufferTooSmall,
                format!("need {} slots, got {capacity}", m.inner.len()),
            ));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(m.inner.values.as_ptr(), out, m.inner.len());
        Ok(())
    })
}

/// # Safety
/// `map` is null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn afrc_curvature_map_free(map: *mut AfrcCurvatureMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Rewires a copy of `graph`. On success `out_graph` receives a new handle
/// and, when `out_report` is not null, a JSON report to release with
/// [`afrc_string_free`].
///
/// # Safety
/// `graph` and `options` are valid; `out_graph` is writable; `out_report`
/// is null or writable.
#[no_mangle]
pub unsafe extern "C" fn afrc_rewire(
    graph: *const AfrcGraph,
    options: *const AfrcRewireOptions,
    out_graph: *mut *mut AfrcGraph,
    out_report: *mut *mut c_char,
) -> AfrcStatus {
    guarded(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        let o = options.as_ref().ok_or_else(|| null("options"))?;
        if out_graph.is_null() {
            return Err(null("out_graph"));
        }
        let config = if o.heuristic {
            RewireConfig::heuristic(o.kind.into(), o.seed)
        } else {
            RewireConfig::fixed(o.kind.into(), o.add, o.remove, o.seed)
        }
        .with_iterations(match o.iterations {
            0 => Iterations::UntilStable,
            n => Iterations::Count(n),
        });
        let (rewired, report) = afr_rewire(&g.inner, &config).map_err(fail)?;
        if !out_report.is_null() {
            let json = CString::new(report.to_json()).expect("JSON has no interior NUL");
            *out_report = json.into_raw();
        }
        *out_graph = Box::into_raw(Box::new(AfrcGraph { inner: rewired }));
        Ok(())
    })
}

/// # Safety
/// `s` is null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn afrc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
