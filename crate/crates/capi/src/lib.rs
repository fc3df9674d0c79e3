//! C ABI for the hyperdesign library: opaque handles, integer status codes,
//! and JSON bridges for the structured results. The matching header lives in
//! include/hyperdesign.h and is kept in sync by hand.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use hyperdesign::error::Error;
use hyperdesign::hypergraph::{div_vector, is_divisible, is_weakly_regular, RGraph};
use hyperdesign::json::{HypergraphJson, PackingJson, ResolvableJson};
use hyperdesign::packing::{greedy_nibble, verify_packing, NibbleOpts};
use hyperdesign::partite::{resolvable_decomposition, verify_resolvable};
use hyperdesign::regularise::regularise;

/// Status codes returned by every fallible call.
pub const HD_OK: i32 = 0;
pub const HD_ERR_NULL: i32 = 1;
pub const HD_ERR_UTF8: i32 = 2;
pub const HD_ERR_INVALID: i32 = 3;
pub const HD_ERR_VERIFY: i32 = 4;
pub const HD_ERR_RESOURCE: i32 = 5;
pub const HD_ERR_BUFFER: i32 = 6;
pub const HD_ERR_INTERNAL: i32 = 7;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) | Error::Json(_) => HD_ERR_INVALID,
        Error::ResourceBudget(_) => HD_ERR_RESOURCE,
        Error::DivisionByZero { .. } | Error::SingularMatrix => HD_ERR_INVALID,
        _ => HD_ERR_INTERNAL,
    }
}

/// Opaque hypergraph handle.
pub struct HdGraph(RGraph);

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, i32> {
    if ptr.is_null() {
        set_error("null pointer".to_string());
        return Err(HD_ERR_NULL);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error("invalid utf-8".to_string());
        HD_ERR_UTF8
    })
}

fn out_string(s: String, out: *mut *mut c_char) -> i32 {
    if out.is_null() {
        set_error("null output pointer".to_string());
        return HD_ERR_NULL;
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            HD_OK
        }
        Err(_) => {
            set_error("interior NUL in output".to_string());
            HD_ERR_INTERNAL
        }
    }
}

/// Last error message for this thread, or null. The returned string must be
/// released with hd_string_free.
#[no_mangle]
pub extern "C" fn hd_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        Some(c) => c.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Release a string allocated by this library.
///
/// # Safety
/// `s` must have been returned by a hyperdesign call and not freed before.
#[no_mangle]
pub unsafe extern "C" fn hd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parse a hypergraph from its JSON form. Returns null on error; consult
/// hd_last_error.
///
/// # Safety
/// `json` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hd_graph_parse(json: *const c_char) -> *mut HdGraph {
    let text = match unsafe { read_str(json) } {
        Ok(t) => t,
        Err(_) => return ptr::null_mut(),
    };
    let parsed: Result<HypergraphJson, _> = serde_json::from_str(text);
    match parsed.map_err(Error::from).and_then(|j| j.to_graph()) {
        Ok(g) => Box::into_raw(Box::new(HdGraph(g))),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// Release a graph handle.
///
/// # Safety
/// `g` must come from hd_graph_parse and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hd_graph_free(g: *mut HdGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Serialize a graph back to JSON into *out.
///
/// # Safety
/// `g` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_graph_to_json(g: *const HdGraph, out: *mut *mut c_char) -> i32 {
    if g.is_null() {
        set_error("null graph".to_string());
        return HD_ERR_NULL;
    }
    let g = unsafe { &*g };
    let text = serde_json::to_string(&HypergraphJson::from_graph(&g.0)).unwrap();
    out_string(text, out)
}

/// Uniformity, vertex count, and edge count of a graph.
///
/// # Safety
/// `g` must be a live handle; out pointers valid or null.
#[no_mangle]
pub unsafe extern "C" fn hd_graph_shape(
    g: *const HdGraph,
    out_r: *mut u64,
    out_n: *mut u64,
    out_edges: *mut u64,
) -> i32 {
    if g.is_null() {
        set_error("null graph".to_string());
        return HD_ERR_NULL;
    }
    let g = unsafe { &*g };
    unsafe {
        if !out_r.is_null() {
            *out_r = g.0.r() as u64;
        }
        if !out_n.is_null() {
            *out_n = g.0.n() as u64;
        }
        if !out_edges.is_null() {
            *out_edges = g.0.len() as u64;
        }
    }
    HD_OK
}

/// Divisibility vector into a caller buffer of capacity `cap`; the needed
/// length (the uniformity) is written to *out_len.
///
/// # Safety
/// `g` live; `buf` must point to at least `cap` u64 slots.
#[no_mangle]
pub unsafe extern "C" fn hd_deg(
    g: *const HdGraph,
    buf: *mut u64,
    cap: usize,
    out_len: *mut usize,
) -> i32 {
    if g.is_null() || out_len.is_null() {
        set_error("null pointer".to_string());
        return HD_ERR_NULL;
    }
    let g = unsafe { &*g };
    match div_vector(&g.0) {
        Ok(d) => {
            unsafe { *out_len = d.0.len() };
            if d.0.len() > cap {
                set_error(format!("buffer holds {}, need {}", cap, d.0.len()));
                return HD_ERR_BUFFER;
            }
            for (i, v) in d.0.iter().enumerate() {
                unsafe { *buf.add(i) = *v };
            }
            HD_OK
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// (pattern, lambda)-divisibility of a host; writes 1 or 0 to *out.
///
/// # Safety
/// Handles live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hd_divisible(
    host: *const HdGraph,
    pattern: *const HdGraph,
    lambda: u64,
    out: *mut i32,
) -> i32 {
    if host.is_null() || pattern.is_null() || out.is_null() {
        set_error("null pointer".to_string());
        return HD_ERR_NULL;
    }
    let (host, pattern) = unsafe { (&*host, &*pattern) };
    match is_divisible(&host.0.to_multi(), &pattern.0, lambda) {
        Ok(v) => {
            unsafe { *out = v.is_divisible() as i32 };
            HD_OK
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Weak regularity; writes 1 or 0 to *out_regular and, when regular, the
/// s-vector into the buffer.
///
/// # Safety
/// As hd_deg.
#[no_mangle]
pub unsafe extern "C" fn hd_weakly_regular(
    g: *const HdGraph,
    out_regular: *mut i32,
    buf: *mut u64,
    cap: usize,
    out_len: *mut usize,
) -> i32 {
    if g.is_null() || out_regular.is_null() || out_len.is_null() {
        set_error("null pointer".to_string());
        return HD_ERR_NULL;
    }
    let g = unsafe { &*g };
    match is_weakly_regular(&g.0) {
        Ok(w) => {
            unsafe { *out_regular = w.regular as i32 };
            let s = w.s.unwrap_or_default();
            unsafe { *out_len = s.len() };
            if s.len() > cap {
                set_error(format!("buffer holds {}, need {}", cap, s.len()));
                return HD_ERR_BUFFER;
            }
            for (i, v) in s.iter().enumerate() {
                unsafe { *buf.add(i) = *v };
            }
            HD_OK
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Resolvable partite clique decomposition as JSON into *out.
///
/// # Safety
/// `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hd_partite_generate(
    q: u64,
    f: u64,
    r: u64,
    out: *mut *mut c_char,
) -> i32 {
    match resolvable_decomposition(q, f as usize, r as usize) {
        Ok(d) => out_string(
            serde_json::to_string(&ResolvableJson::from_decomposition(&d)).unwrap(),
            out,
        ),
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Verify a resolvable decomposition from its JSON form. HD_OK on pass,
/// HD_ERR_VERIFY on a verification failure (message via hd_last_error).
///
/// # Safety
/// `json` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hd_partite_verify(json: *const c_char) -> i32 {
    let text = match unsafe { read_str(json) } {
        Ok(t) => t,
        Err(code) => return code,
    };
    let parsed: Result<ResolvableJson, _> = serde_json::from_str(text);
    let d = match parsed.map_err(Error::from).and_then(|j| j.to_decomposition()) {
        Ok(d) => d,
        Err(e) => {
            set_error(e.to_string());
            return status_of(&e);
        }
    };
    match verify_resolvable(&d) {
        v if v.passed() => HD_OK,
        v => {
            set_error(format!("{:?}", v));
            HD_ERR_VERIFY
        }
    }
}

/// Regularise a pattern; the full certificate (q, s, host, decomposition)
/// is returned as JSON.
///
/// # Safety
/// `pattern` live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hd_regularise(
    pattern: *const HdGraph,
    edge_budget: u64,
    out: *mut *mut c_char,
) -> i32 {
    if pattern.is_null() {
        set_error("null graph".to_string());
        return HD_ERR_NULL;
    }
    let pattern = unsafe { &*pattern };
    match regularise(&pattern.0, edge_budget) {
        Ok(reg) => {
            let value = serde_json::json!({
                "q": reg.q,
                "s": reg.s,
                "fstar": HypergraphJson::from_graph(&reg.fstar),
                "decomposition": PackingJson::from_packing(&reg.decomposition),
            });
            out_string(value.to_string(), out)
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Random greedy packing; the packing and leftover are returned as JSON.
///
/// # Safety
/// Handles live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hd_nibble(
    host: *const HdGraph,
    pattern: *const HdGraph,
    seed: u64,
    out: *mut *mut c_char,
) -> i32 {
    if host.is_null() || pattern.is_null() {
        set_error("null graph".to_string());
        return HD_ERR_NULL;
    }
    let (host, pattern) = unsafe { (&*host, &*pattern) };
    match greedy_nibble(&host.0, &pattern.0, seed, &NibbleOpts::default()) {
        Ok((p, leftover)) => {
            debug_assert!(verify_packing(&host.0, &p).is_valid());
            let value = serde_json::json!({
                "seed": seed,
                "packing": PackingJson::from_packing(&p),
                "leftover": HypergraphJson::from_graph(&leftover),
            });
            out_string(value.to_string(), out)
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Verify a packing (JSON) against a host. HD_OK when it is a valid packing;
/// *out_decomposition tells whether it covers the host exactly.
///
/// # Safety
/// `host` live; `packing_json` a valid string; `out_decomposition` valid or null.
#[no_mangle]
pub unsafe extern "C" fn hd_pack_verify(
    host: *const HdGraph,
    packing_json: *const c_char,
    out_decomposition: *mut i32,
) -> i32 {
    if host.is_null() {
        set_error("null graph".to_string());
        return HD_ERR_NULL;
    }
    let host = unsafe { &*host };
    let text = match unsafe { read_str(packing_json) } {
        Ok(t) => t,
        Err(code) => return code,
    };
    let parsed: Result<PackingJson, _> = serde_json::from_str(text);
    let p = match parsed.map_err(Error::from).and_then(|j| j.to_packing()) {
        Ok(p) => p,
        Err(e) => {
            set_error(e.to_string());
            return status_of(&e);
        }
    };
    let verdict = verify_packing(&host.0, &p);
    if !out_decomposition.is_null() {
        unsafe { *out_decomposition = verdict.is_decomposition() as i32 };
    }
    if verdict.is_valid() {
        HD_OK
    } else {
        set_error(format!("{:?}", verdict));
        HD_ERR_VERIFY
    }
}

/// Smallest complete-host order divisible by the pattern for the given
/// multiplier, written to *out.
///
/// # Safety
/// `pattern` live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hd_divisible_order(
    pattern: *const HdGraph,
    a: u64,
    out: *mut u64,
) -> i32 {
    if pattern.is_null() || out.is_null() {
        set_error("null pointer".to_string());
        return HD_ERR_NULL;
    }
    let pattern = unsafe { &*pattern };
    match hyperdesign::hypergraph::find_divisible_order(&pattern.0, a) {
        Ok(n) => {
            unsafe { *out = n };
            HD_OK
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn parse_deg_roundtrip() {
        let json = cstr(r#"{"r":3,"n":7,"edges":[[0,1,3],[1,2,4],[2,3,5],[3,4,6],[0,4,5],[1,5,6],[0,2,6]]}"#);
        let g = unsafe { hd_graph_parse(json.as_ptr()) };
        assert!(!g.is_null());
        let mut buf = [0u64; 8];
        let mut len = 0usize;
        let rc = unsafe { hd_deg(g, buf.as_mut_ptr(), buf.len(), &mut len) };
        assert_eq!(rc, HD_OK);
        assert_eq!(&buf[..len], &[7, 3, 1]);
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { hd_graph_to_json(g, &mut out) }, HD_OK);
        unsafe { hd_string_free(out) };
        unsafe { hd_graph_free(g) };
    }

    #[test]
    fn parse_error_sets_message() {
        let json = cstr(r#"{"r":2,"n":3,"edges":[[1,0]]}"#);
        let g = unsafe { hd_graph_parse(json.as_ptr()) };
        assert!(g.is_null());
        let msg = hd_last_error();
        assert!(!msg.is_null());
        unsafe { hd_string_free(msg) };
    }

    #[test]
    fn partite_roundtrip_through_ffi() {
        let mut out = ptr::null_mut();
        let rc = unsafe { hd_partite_generate(7, 3, 2, &mut out) };
        assert_eq!(rc, HD_OK);
        let rc = unsafe { hd_partite_verify(out) };
        assert_eq!(rc, HD_OK);
        unsafe { hd_string_free(out) };
        // invalid parameters
        let mut out2 = ptr::null_mut();
        let rc = unsafe { hd_partite_generate(5, 3, 1, &mut out2) };
        assert_eq!(rc, HD_ERR_INVALID);
    }

    #[test]
    fn regularise_and_nibble_through_ffi() {
        let pat = cstr(r#"{"r":2,"n":3,"edges":[[0,1],[0,2],[1,2]]}"#);
        let gp = unsafe { hd_graph_parse(pat.as_ptr()) };
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { hd_regularise(gp, 10_000_000, &mut out) }, HD_OK);
        let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(text).unwrap();
        assert_eq!(v["q"], 7);
        assert_eq!(v["s"], serde_json::json!([126, 12]));
        // the emitted decomposition verifies against the emitted host
        let host_json = cstr(&v["fstar"].to_string());
        let gh = unsafe { hd_graph_parse(host_json.as_ptr()) };
        assert!(!gh.is_null());
        let packing = cstr(&v["decomposition"].to_string());
        let mut is_dec = 0;
        assert_eq!(
            unsafe { hd_pack_verify(gh, packing.as_ptr(), &mut is_dec) },
            HD_OK
        );
        assert_eq!(is_dec, 1);
        unsafe { hd_string_free(out) };
        unsafe { hd_graph_free(gh) };

        // nibble on a small complete host
        let host = cstr(
            r#"{"r":2,"n":9,"edges":[[0,1],[0,2],[0,3],[0,4],[0,5],[0,6],[0,7],[0,8],[1,2],[1,3],[1,4],[1,5],[1,6],[1,7],[1,8],[2,3],[2,4],[2,5],[2,6],[2,7],[2,8],[3,4],[3,5],[3,6],[3,7],[3,8],[4,5],[4,6],[4,7],[4,8],[5,6],[5,7],[5,8],[6,7],[6,8],[7,8]]}"#,
        );
        let gh = unsafe { hd_graph_parse(host.as_ptr()) };
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { hd_nibble(gh, gp, 4, &mut out) }, HD_OK);
        let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(text).unwrap();
        assert_eq!(v["seed"], 4);
        let packing = cstr(&v["packing"].to_string());
        let mut is_dec = -1;
        assert_eq!(
            unsafe { hd_pack_verify(gh, packing.as_ptr(), &mut is_dec) },
            HD_OK
        );
        unsafe { hd_string_free(out) };
        unsafe { hd_graph_free(gh) };
        unsafe { hd_graph_free(gp) };
    }

    #[test]
    fn divisibility_through_ffi() {
        let host = cstr(r#"{"r":2,"n":4,"edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#);
        let pat = cstr(r#"{"r":2,"n":3,"edges":[[0,1],[0,2],[1,2]]}"#);
        let gh = unsafe { hd_graph_parse(host.as_ptr()) };
        let gp = unsafe { hd_graph_parse(pat.as_ptr()) };
        let mut out = -1;
        assert_eq!(unsafe { hd_divisible(gh, gp, 1, &mut out) }, HD_OK);
        assert_eq!(out, 0); // K_4 is not triangle-divisible
        let mut n = 0u64;
        assert_eq!(unsafe { hd_divisible_order(gp, 1, &mut n) }, HD_OK);
        assert_eq!(n, 13);
        unsafe { hd_graph_free(gh) };
        unsafe { hd_graph_free(gp) };
    }
}
