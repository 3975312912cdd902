//! C ABI over the `ftoracle` oracles.
//!
//! All objects are opaque handles created by `*_build`, `*_parse` or `*_load`
//! functions and released with the matching `*_free`. Every fallible function
//! returns an [`FtStatus`]; on failure [`ft_last_error`] gives a message for
//! the calling thread. Output pointers are written only on success.
//!
//! Failure sets are passed as two arrays of ids (edges and nodes); a null
//! pointer is accepted when the matching length is zero.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use ftoracle::dso::{build_bounded_diameter_dso, build_dso_with_params, HopDso};
use ftoracle::motif::{build_motif_oracle, MotifKind, MotifOracle, MotifSpec};
use ftoracle::rpc::{build_family, compute_params, FailureMode, RpcFamily};
use ftoracle::{cli, Error, FailureSet, Graph};

/// Status codes; the non-negative values match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FtStatus {
    Ok = 0,
    NotFound = 1,
    InvalidArgument = 2,
    ParseError = 3,
    CapExceeded = 4,
    NullPointer = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FtMotifKind {
    Path = 0,
    Clique = 1,
}

pub struct FtGraph(Graph);
pub struct FtRpc(RpcFamily);
pub struct FtDso(HopDso);
pub struct FtMotif(MotifOracle);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn ft_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

struct Fail(FtStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match cli::exit_code(&e) {
            cli::EXIT_PARSE => FtStatus::ParseError,
            cli::EXIT_CAP => FtStatus::CapExceeded,
            _ => FtStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(FtStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<FtStatus, Fail>) -> FtStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            FtStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Fail> {
    ptr.as_ref().ok_or_else(|| null(what))
}

unsafe fn c_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| Fail(FtStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn ids<'a>(ptr: *const usize, len: usize, what: &str) -> Result<&'a [usize], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn failure_set(edges: *const usize, n_edges: usize, nodes: *const usize, n_nodes: usize) -> Result<FailureSet, Fail> {
    Ok(FailureSet::new(ids(edges, n_edges, "edges")?.to_vec(), ids(nodes, n_nodes, "nodes")?.to_vec()))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<FtStatus, Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(FtStatus::Ok)
}

unsafe fn write<T>(out: *mut T, value: T) {
    if !out.is_null() {
        *out = value;
    }
}

unsafe fn free<T>(ptr: *mut T) {
    if !ptr.is_null() {
        drop(Box::from_raw(ptr));
    }
}

fn save(path: *const c_char, bytes: Vec<u8>) -> Result<FtStatus, Fail> {
    let path = unsafe { c_str(path, "path")? };
    cli::write_atomic(Path::new(path), &bytes)?;
    Ok(FtStatus::Ok)
}

fn load(path: *const c_char) -> Result<Vec<u8>, Fail> {
    let path = unsafe { c_str(path, "path")? };
    Ok(std::fs::read(path).map_err(Error::from)?)
}

/// Parses an edge list (`u v [w]` per line, `#` comments).
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_graph_parse(text: *const c_char, directed: bool, out: *mut *mut FtGraph) -> FtStatus {
    guard(|| {
        let text = c_str(text, "text")?;
        emit(out, FtGraph(ftoracle::parse_edge_list_str(text, directed)?))
    })
}

/// Reads an edge-list file.
///
/// # Safety
/// `path` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_graph_load(path: *const c_char, directed: bool, out: *mut *mut FtGraph) -> FtStatus {
    guard(|| {
        let path = c_str(path, "path")?;
        emit(out, FtGraph(cli::read_graph(Path::new(path), directed)?))
    })
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn ft_graph_node_count(g: *const FtGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.node_count())
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn ft_graph_edge_count(g: *const FtGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// # Safety
/// `g` must be null or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ft_graph_free(g: *mut FtGraph) {
    free(g)
}

/// Builds an `(L, f)` covering family for edge or node failures.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_rpc_build(
    g: *const FtGraph,
    f: usize,
    max_hops: usize,
    c: f64,
    seed: u64,
    node_failures: bool,
    out: *mut *mut FtRpc,
) -> FtStatus {
    guard(|| {
        let g = &borrow(g, "graph")?.0;
        let mode = if node_failures { FailureMode::Nodes } else { FailureMode::Edges };
        let params = compute_params(f, max_hops, g.node_count(), c, mode)?;
        emit(out, FtRpc(build_family(g, &params, seed)?))
    })
}

/// Runs the tree walk for a failure set. Writes `|𝒢_F|` and the number of
/// child tests; returns `NotFound` when `𝒢_F` is empty.
///
/// # Safety
/// `rpc` must be a live handle; id arrays must hold the given lengths.
#[no_mangle]
pub unsafe extern "C" fn ft_rpc_query(
    rpc: *const FtRpc,
    edges: *const usize,
    n_edges: usize,
    nodes: *const usize,
    n_nodes: usize,
    out_leaves: *mut usize,
    out_nodes_touched: *mut usize,
) -> FtStatus {
    guard(|| {
        let rpc = &borrow(rpc, "rpc")?.0;
        let result = rpc.query(&failure_set(edges, n_edges, nodes, n_nodes)?)?;
        write(out_leaves, result.leaves.len());
        write(out_nodes_touched, result.nodes_touched);
        Ok(if result.leaves.is_empty() { FtStatus::NotFound } else { FtStatus::Ok })
    })
}

/// # Safety
/// `rpc` must be a live handle; `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ft_rpc_save(rpc: *const FtRpc, path: *const c_char) -> FtStatus {
    guard(|| save(path, borrow(rpc, "rpc")?.0.to_bytes()))
}

/// # Safety
/// `path` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_rpc_load(path: *const c_char, out: *mut *mut FtRpc) -> FtStatus {
    guard(|| emit(out, FtRpc(RpcFamily::from_bytes(&load(path)?)?)))
}

/// # Safety
/// `rpc` must be null or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ft_rpc_free(rpc: *mut FtRpc) {
    free(rpc)
}

/// Builds an `L`-hop distance oracle; `max_bytes` caps the table memory.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_dso_build(
    g: *const FtGraph,
    f: usize,
    max_hops: usize,
    c: f64,
    seed: u64,
    node_failures: bool,
    max_bytes: u64,
    out: *mut *mut FtDso,
) -> FtStatus {
    guard(|| {
        let g = &borrow(g, "graph")?.0;
        let mode = if node_failures { FailureMode::Nodes } else { FailureMode::Edges };
        let params = compute_params(f, max_hops, g.node_count(), c, mode)?;
        emit(out, FtDso(build_dso_with_params(g, &params, seed, max_bytes as u128)?))
    })
}

/// Builds the bounded-diameter oracle, `L = (f + 1) D`.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_dso_build_bounded(
    g: *const FtGraph,
    f: usize,
    c: f64,
    seed: u64,
    max_bytes: u64,
    out: *mut *mut FtDso,
) -> FtStatus {
    guard(|| {
        let g = &borrow(g, "graph")?.0;
        emit(out, FtDso(build_bounded_diameter_dso(g, f, c, seed, max_bytes as u128)?))
    })
}

/// Distance from `s` to `t` avoiding the failures. Unreachable writes
/// `INFINITY` and `UINT32_MAX` hops and returns `NotFound`.
///
/// # Safety
/// `dso` must be a live handle; id arrays must hold the given lengths.
#[no_mangle]
pub unsafe extern "C" fn ft_dso_query(
    dso: *const FtDso,
    s: usize,
    t: usize,
    edges: *const usize,
    n_edges: usize,
    nodes: *const usize,
    n_nodes: usize,
    out_distance: *mut f64,
    out_hops: *mut u32,
) -> FtStatus {
    guard(|| {
        let dso = &borrow(dso, "dso")?.0;
        let answer = dso.query(s, t, &failure_set(edges, n_edges, nodes, n_nodes)?)?;
        write(out_distance, answer.distance.value);
        write(out_hops, answer.distance.hops.unwrap_or(u32::MAX));
        Ok(if answer.distance.is_finite() { FtStatus::Ok } else { FtStatus::NotFound })
    })
}

/// # Safety
/// `dso` must be a live handle; `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ft_dso_save(dso: *const FtDso, path: *const c_char) -> FtStatus {
    guard(|| save(path, borrow(dso, "dso")?.0.to_bytes()))
}

/// # Safety
/// `path` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_dso_load(path: *const c_char, out: *mut *mut FtDso) -> FtStatus {
    guard(|| emit(out, FtDso(HopDso::from_bytes(&load(path)?)?)))
}

/// # Safety
/// `dso` must be null or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ft_dso_free(dso: *mut FtDso) {
    free(dso)
}

/// Builds a `k`-path or `k`-clique oracle for edge failures.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_motif_build(
    g: *const FtGraph,
    kind: FtMotifKind,
    k: usize,
    f: usize,
    c: f64,
    seed: u64,
    out: *mut *mut FtMotif,
) -> FtStatus {
    guard(|| {
        let g = &borrow(g, "graph")?.0;
        let kind = match kind {
            FtMotifKind::Path => MotifKind::Path,
            FtMotifKind::Clique => MotifKind::Clique,
        };
        let spec = MotifSpec::new(kind, k)?;
        emit(out, FtMotif(build_motif_oracle(g, spec, f, c, seed)?))
    })
}

/// Looks up a motif avoiding the failed edges. On success copies its edge
/// ids into `out_edges` (capacity `cap`, at least the edge budget) and writes
/// the count; returns `NotFound` when none is stored.
///
/// # Safety
/// `motif` must be a live handle; `edges` must hold `n_edges` ids and
/// `out_edges` room for `cap`.
#[no_mangle]
pub unsafe extern "C" fn ft_motif_query(
    motif: *const FtMotif,
    edges: *const usize,
    n_edges: usize,
    out_edges: *mut usize,
    cap: usize,
    out_len: *mut usize,
) -> FtStatus {
    guard(|| {
        let motif = &borrow(motif, "motif")?.0;
        let answer = motif.query(&failure_set(edges, n_edges, std::ptr::null(), 0)?)?;
        let Some(found) = answer.edges else {
            write(out_len, 0);
            return Ok(FtStatus::NotFound);
        };
        if out_edges.is_null() {
            return Err(null("out_edges"));
        }
        if cap < found.len() {
            return Err(Fail(FtStatus::InvalidArgument, format!("output capacity {cap} below motif size {}", found.len())));
        }
        std::slice::from_raw_parts_mut(out_edges, found.len()).copy_from_slice(&found);
        write(out_len, found.len());
        Ok(FtStatus::Ok)
    })
}

/// # Safety
/// `motif` must be a live handle; `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ft_motif_save(motif: *const FtMotif, path: *const c_char) -> FtStatus {
    guard(|| save(path, borrow(motif, "motif")?.0.to_bytes()))
}

/// # Safety
/// `path` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_motif_load(path: *const c_char, out: *mut *mut FtMotif) -> FtStatus {
    guard(|| emit(out, FtMotif(MotifOracle::from_bytes(&load(path)?)?)))
}

/// # Safety
/// `motif` must be null or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ft_motif_free(motif: *mut FtMotif) {
    free(motif)
}
