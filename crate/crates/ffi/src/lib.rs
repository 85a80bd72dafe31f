//! C ABI over the dynamic engine.
//!
//! Every entry point returns a [`DynapspStatus`]; results are written
//! through out-pointers. On failure a message is available from
//! [`dynapsp_last_error`] on the calling thread until the next call.
//! Engines are opaque handles created by [`dynapsp_engine_new`] and released
//! with [`dynapsp_engine_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use dynapsp::{DynamicApsp, EngineConfig, Error, Graph, UpdateEvent, Variant, INFINITY};

/// Distance reported for unreachable pairs.
pub const DYNAPSP_INFINITY: i64 = i64::MAX;

const _: () = assert!(DYNAPSP_INFINITY == INFINITY);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynapspStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Event rejected against the current graph (dead node, reused id,
    /// weight overflow risk).
    InvalidEvent = 3,
    NegativeCycle = 4,
    NegativeCycleIntroduced = 5,
    DeadEndpoint = 6,
    PathUnavailable = 7,
    /// The output buffer is too small; the required length was written.
    BufferTooSmall = 8,
    /// Unit weights required by the unweighted variant.
    WeightedInput = 9,
    Internal = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynapspVariant {
    RandWeighted = 0,
    Unweighted = 1,
    Deterministic = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DynapspConfig {
    pub variant: DynapspVariant,
    /// Confidence parameter, at least 1.
    pub c: f64,
    pub seed: u64,
    /// Rebuild period; 0 selects the variant default.
    pub delta: u64,
}

/// Opaque engine handle.
pub struct DynapspEngine {
    inner: DynamicApsp,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> DynapspStatus {
    match e {
        Error::NegativeCycle => DynapspStatus::NegativeCycle,
        Error::NegativeCycleIntroduced(_) => DynapspStatus::NegativeCycleIntroduced,
        Error::DeadEndpoint(_) => DynapspStatus::DeadEndpoint,
        Error::PathUnavailable(..) => DynapspStatus::PathUnavailable,
        Error::WeightedInput { .. } => DynapspStatus::WeightedInput,
        Error::DeleteMissing(_) | Error::InsertDuplicate(_) | Error::EdgeToDeadNode(_) | Error::OverflowRisk { .. } => {
            DynapspStatus::InvalidEvent
        }
        Error::InternalInconsistency(_) => DynapspStatus::Internal,
        _ => DynapspStatus::InvalidArgument,
    }
}

/// Runs `f`, recording the message of any error or panic.
fn guard(f: impl FnOnce() -> Result<(), (DynapspStatus, String)>) -> DynapspStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DynapspStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside dynapsp".into());
            DynapspStatus::Panic
        }
    }
}

fn engine_err(e: Error) -> (DynapspStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (DynapspStatus, String) {
    (DynapspStatus::NullPointer, format!("{what} is null"))
}

/// Borrows `len` elements at `p`; a null pointer is allowed when `len` is 0.
unsafe fn view<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], (DynapspStatus, String)> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(null(what))
    } else {
        // SAFETY: the caller guarantees `len` readable elements at `p`.
        Ok(unsafe { slice::from_raw_parts(p, len) })
    }
}

unsafe fn engine_ref<'a>(e: *const DynapspEngine) -> Result<&'a DynamicApsp, (DynapspStatus, String)> {
    // SAFETY: non-null handles come from `dynapsp_engine_new`.
    unsafe { e.as_ref() }.map(|e| &e.inner).ok_or_else(|| null("engine"))
}

unsafe fn engine_mut<'a>(e: *mut DynapspEngine) -> Result<&'a mut DynamicApsp, (DynapspStatus, String)> {
    // SAFETY: non-null handles come from `dynapsp_engine_new`.
    unsafe { e.as_mut() }
        .map(|e| &mut e.inner)
        .ok_or_else(|| null("engine"))
}

fn pairs(ids: &[u64], ws: &[i64]) -> Vec<(usize, i64)> {
    ids.iter().zip(ws).map(|(&v, &w)| (v as usize, w)).collect()
}

/// Default configuration: randomized weighted variant, `c = 3`, seed 0.
#[no_mangle]
pub extern "C" fn dynapsp_config_default() -> DynapspConfig {
    DynapspConfig {
        variant: DynapspVariant::RandWeighted,
        c: 3.0,
        seed: 0,
        delta: 0,
    }
}

/// Builds an engine over nodes `0..n` and `m` edges `src[i] -> dst[i]` of
/// weight `weight[i]`. On success `*out` receives the handle.
///
/// # Safety
/// `src`, `dst` and `weight` must each point to `m` readable elements (or be
/// null with `m == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dynapsp_engine_new(
    n: u64,
    src: *const u64,
    dst: *const u64,
    weight: *const i64,
    m: usize,
    config: DynapspConfig,
    out: *mut *mut DynapspEngine,
) -> DynapspStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (src, dst, weight) = unsafe { (view(src, m, "src")?, view(dst, m, "dst")?, view(weight, m, "weight")?) };
        let n = usize::try_from(n).map_err(|_| (DynapspStatus::InvalidArgument, "n too large".into()))?;
        if let Some(&bad) = src.iter().chain(dst).find(|&&v| v >= n as u64) {
            return Err((
                DynapspStatus::InvalidArgument,
                format!("edge endpoint {bad} out of range"),
            ));
        }
        let edges: Vec<_> = (0..m).map(|i| (src[i] as usize, dst[i] as usize, weight[i])).collect();
        let g = Graph::from_edges(n, &edges).map_err(engine_err)?;
        let cfg = EngineConfig {
            variant: match config.variant {
                DynapspVariant::RandWeighted => Variant::RandWeighted,
                DynapspVariant::Unweighted => Variant::Unweighted,
                DynapspVariant::Deterministic => Variant::Deterministic,
            },
            c: config.c,
            seed: config.seed,
            delta_override: (config.delta > 0).then_some(config.delta as usize),
        };
        let inner = DynamicApsp::new(&g, cfg).map_err(engine_err)?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(DynapspEngine { inner })) };
        Ok(())
    })
}

/// Releases an engine. Null is ignored.
///
/// # Safety
/// `engine` must be null or a handle from [`dynapsp_engine_new`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn dynapsp_engine_free(engine: *mut DynapspEngine) {
    if !engine.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { Box::from_raw(engine) });
    }
}

/// Deletes a node and all its edges.
///
/// # Safety
/// `engine` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dynapsp_delete_node(engine: *mut DynapspEngine, node: u64) -> DynapspStatus {
    guard(|| {
        let e = unsafe { engine_mut(engine)? };
        e.update(&UpdateEvent::DeleteNode { node: node as usize })
            .map_err(engine_err)?;
        Ok(())
    })
}

/// Inserts a node with edges `in_src[i] -> node` and `node -> out_dst[i]`.
/// A rejected insertion leaves the engine unchanged.
///
/// # Safety
/// `engine` must be a live handle; each array must hold its stated length.
#[no_mangle]
pub unsafe extern "C" fn dynapsp_insert_node(
    engine: *mut DynapspEngine,
    node: u64,
    in_src: *const u64,
    in_weight: *const i64,
    in_len: usize,
    out_dst: *const u64,
    out_weight: *const i64,
    out_len: usize,
) -> DynapspStatus {
    guard(|| {
        let e = unsafe { engine_mut(engine)? };
        let (a, aw, b, bw) = unsafe {
            (
                view(in_src, in_len, "in_src")?,
                view(in_weight, in_len, "in_weight")?,
                view(out_dst, out_len, "out_dst")?,
                view(out_weight, out_len, "out_weight")?,
            )
        };
        let ev = UpdateEvent::InsertNode {
            node: node as usize,
            in_edges: pairs(a, aw),
            out_edges: pairs(b, bw),
        };
        e.update(&ev).map_err(engine_err)?;
        Ok(())
    })
}

/// Writes the distance from `s` to `t`, [`DYNAPSP_INFINITY`] if unreachable.
///
/// # Safety
/// `engine` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dynapsp_query_dist(
    engine: *const DynapspEngine,
    s: u64,
    t: u64,
    out: *mut i64,
) -> DynapspStatus {
    guard(|| {
        let e = unsafe { engine_ref(engine)? };
        if out.is_null() {
            return Err(null("out"));
        }
        let d = e.query_dist(s as usize, t as usize).map_err(engine_err)?;
        // SAFETY: checked non-null above.
        unsafe { *out = d };
        Ok(())
    })
}

/// Writes a shortest `s -> t` path into `buf` and its node count into
/// `*len`. With a short buffer, returns `BufferTooSmall` after writing the
/// required count.
///
/// # Safety
/// `engine` must be a live handle, `len` writable and `buf` must have room
/// for `cap` elements (or be null with `cap == 0`).
#[no_mangle]
pub unsafe extern "C" fn dynapsp_query_path(
    engine: *const DynapspEngine,
    s: u64,
    t: u64,
    buf: *mut u64,
    cap: usize,
    len: *mut usize,
) -> DynapspStatus {
    guard(|| {
        let e = unsafe { engine_ref(engine)? };
        if len.is_null() {
            return Err(null("len"));
        }
        let path = e.query_path(s as usize, t as usize).map_err(engine_err)?;
        // SAFETY: checked non-null above.
        unsafe { *len = path.len() };
        if path.len() > cap {
            return Err((
                DynapspStatus::BufferTooSmall,
                format!("path needs {} slots", path.len()),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        // SAFETY: `buf` has room for `cap >= path.len()` elements.
        let dst = unsafe { slice::from_raw_parts_mut(buf, path.len()) };
        for (d, &v) in dst.iter_mut().zip(&path) {
            *d = v as u64;
        }
        Ok(())
    })
}

/// Number of alive nodes.
///
/// # Safety
/// `engine` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dynapsp_node_count(engine: *const DynapspEngine, out: *mut u64) -> DynapspStatus {
    guard(|| {
        let e = unsafe { engine_ref(engine)? };
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: checked non-null above.
        unsafe { *out = e.graph().node_count() as u64 };
        Ok(())
    })
}

/// Message of the last failed call on this thread; empty after success is
/// not guaranteed. The pointer stays valid until the next call on this
/// thread.
#[no_mangle]
pub extern "C" fn dynapsp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn dynapsp_status_name(status: DynapspStatus) -> *const c_char {
    let s: &'static CStr = match status {
        DynapspStatus::Ok => c"ok",
        DynapspStatus::NullPointer => c"null pointer",
        DynapspStatus::InvalidArgument => c"invalid argument",
        DynapspStatus::InvalidEvent => c"invalid event",
        DynapspStatus::NegativeCycle => c"negative cycle",
        DynapspStatus::NegativeCycleIntroduced => c"negative cycle introduced",
        DynapspStatus::DeadEndpoint => c"dead endpoint",
        DynapspStatus::PathUnavailable => c"path unavailable",
        DynapspStatus::BufferTooSmall => c"buffer too small",
        DynapspStatus::WeightedInput => c"weighted input",
        DynapspStatus::Internal => c"internal error",
        DynapspStatus::Panic => c"panic",
    };
    s.as_ptr()
}
