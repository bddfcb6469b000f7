//! C ABI for the arsys library: parse input documents, build semi-Cartan
//! graphs, enumerate roots, classify diagrams, and re-verify the built-in
//! rank-4 tables.
//!
//! Conventions: handles are opaque pointers freed with the matching `_free`
//! function; strings returned through out-parameters are NUL-terminated,
//! owned by the caller, and freed with [`arsys_string_free`]; every fallible
//! call returns an [`ArsysStatus`], and on failure a message is available
//! from [`arsys_last_error`] until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use arsys::braiding::dynkin_of;
use arsys::cartangraph::{build_graph, CartanGraph, DEFAULT_MAX_POINTS};
use arsys::classification::{builtin_rows, canonical_assignments, match_diagram, verify_row};
use arsys::rootsystem::{enumerate_roots, DEFAULT_MAX_POS_ROOTS};
use arsys::textio::{
    export_dot, graph_json, matches_json, parse_input, reports_json, roots_json, ParsedInput,
};

/// Call outcome; mirrors the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArsysStatus {
    /// Success / finite / match found.
    ArsysOk = 0,
    /// Negative verdict: not i-finite, limits exceeded, or no match.
    ArsysNegative = 1,
    /// Invalid argument or unparsable input.
    ArsysInvalid = 2,
    /// Internal invariant violation.
    ArsysInternal = 3,
}

use ArsysStatus::*;

/// Opaque semi-Cartan graph handle.
pub struct ArsysGraph {
    graph: CartanGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next library call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn arsys_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned through an out-parameter.
///
/// # Safety
/// `s` must be a pointer previously returned by this library and not yet
/// freed, or null.
#[no_mangle]
pub unsafe extern "C" fn arsys_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

fn give_string(out: *mut *mut c_char, text: String) -> ArsysStatus {
    let Ok(c) = CString::new(text) else {
        set_error("output contained an interior NUL");
        return ArsysInternal;
    };
    unsafe { *out = c.into_raw() };
    ArsysOk
}

fn guarded(f: impl FnOnce() -> ArsysStatus) -> ArsysStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            ArsysInternal
        }
    }
}

unsafe fn parse_arg(text: *const c_char) -> Result<ParsedInput, ArsysStatus> {
    if text.is_null() {
        set_error("input text is null");
        return Err(ArsysInvalid);
    }
    let Ok(text) = unsafe { CStr::from_ptr(text) }.to_str() else {
        set_error("input text is not valid UTF-8");
        return Err(ArsysInvalid);
    };
    parse_input(text).map_err(|e| {
        set_error(&e.to_string());
        ArsysInvalid
    })
}

/// Parses an input document and builds its semi-Cartan graph.
/// `max_points = 0` selects the default cap.
///
/// # Safety
/// `input_text` must be a NUL-terminated string or null; `out` must point
/// to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn arsys_graph_build(
    input_text: *const c_char,
    max_points: usize,
    out: *mut *mut ArsysGraph,
) -> ArsysStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out pointer is null");
            return ArsysInvalid;
        }
        let parsed = match unsafe { parse_arg(input_text) } {
            Ok(p) => p,
            Err(s) => return s,
        };
        let cap = if max_points == 0 {
            DEFAULT_MAX_POINTS
        } else {
            max_points
        };
        match build_graph(&parsed.object.to_braiding(), cap) {
            Ok(graph) => {
                let handle = Box::new(ArsysGraph { graph });
                unsafe { *out = Box::into_raw(handle) };
                ArsysOk
            }
            Err(e) => {
                set_error(&e.to_string());
                ArsysNegative
            }
        }
    })
}

/// Frees a graph handle.
///
/// # Safety
/// `g` must come from [`arsys_graph_build`] and not be freed twice; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn arsys_graph_free(g: *mut ArsysGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn arsys_graph_point_count(g: *const ArsysGraph) -> usize {
    if g.is_null() {
        return 0;
    }
    unsafe { &*g }.graph.points().len()
}

/// JSON rendering of the graph (points, diagrams, Cartan matrices,
/// neighbors).
///
/// # Safety
/// `g` must be a live handle; `out` must point to writable memory for one
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn arsys_graph_json(
    g: *const ArsysGraph,
    out: *mut *mut c_char,
) -> ArsysStatus {
    guarded(|| {
        if g.is_null() || out.is_null() {
            set_error("null argument");
            return ArsysInvalid;
        }
        give_string(out, graph_json(&unsafe { &*g }.graph).to_string())
    })
}

/// DOT rendering of the exchange graph.
///
/// # Safety
/// Same contract as [`arsys_graph_json`].
#[no_mangle]
pub unsafe extern "C" fn arsys_graph_dot(
    g: *const ArsysGraph,
    out: *mut *mut c_char,
) -> ArsysStatus {
    guarded(|| {
        if g.is_null() || out.is_null() {
            set_error("null argument");
            return ArsysInvalid;
        }
        give_string(out, export_dot(&unsafe { &*g }.graph))
    })
}

/// Enumerates real roots; writes the verdict JSON and returns `ArsysOk` for
/// a finite system, `ArsysNegative` otherwise. `max_roots = 0` selects the
/// default cap.
///
/// # Safety
/// Same contract as [`arsys_graph_json`].
#[no_mangle]
pub unsafe extern "C" fn arsys_roots_json(
    g: *const ArsysGraph,
    max_roots: usize,
    out: *mut *mut c_char,
) -> ArsysStatus {
    guarded(|| {
        if g.is_null() || out.is_null() {
            set_error("null argument");
            return ArsysInvalid;
        }
        let graph = &unsafe { &*g }.graph;
        let cap = if max_roots == 0 {
            DEFAULT_MAX_POS_ROOTS
        } else {
            max_roots
        };
        let verdict = enumerate_roots(graph, cap);
        let finite = verdict.is_finite();
        let status = give_string(out, roots_json(graph, &verdict).to_string());
        if status != ArsysOk {
            return status;
        }
        if finite {
            ArsysOk
        } else {
            set_error("root system is not finite at these limits");
            ArsysNegative
        }
    })
}

/// Matches an input document against the built-in rank-4 classification;
/// writes the match-list JSON and returns `ArsysNegative` when nothing
/// matches.
///
/// # Safety
/// `input_text` must be a NUL-terminated string or null; `out` must point
/// to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn arsys_classify_json(
    input_text: *const c_char,
    out: *mut *mut c_char,
) -> ArsysStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out pointer is null");
            return ArsysInvalid;
        }
        let parsed = match unsafe { parse_arg(input_text) } {
            Ok(p) => p,
            Err(s) => return s,
        };
        let d = dynkin_of(&parsed.object.to_braiding());
        let matches = match_diagram(&d, &parsed.spec);
        let empty = matches.is_empty();
        let status = give_string(out, matches_json(&matches).to_string());
        if status != ArsysOk {
            return status;
        }
        if empty {
            set_error("no classification row matches");
            ArsysNegative
        } else {
            ArsysOk
        }
    })
}

/// Re-verifies every built-in table row under its canonical assignments and
/// writes the per-row report JSON; `ArsysNegative` if any row fails.
///
/// # Safety
/// `out` must point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn arsys_verify_tables_json(out: *mut *mut c_char) -> ArsysStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out pointer is null");
            return ArsysInvalid;
        }
        let mut reports = Vec::new();
        let mut all_ok = true;
        for row in builtin_rows() {
            for (spec, value) in canonical_assignments(row) {
                let p = spec.characteristic();
                match verify_row(row, &spec, value.as_ref()) {
                    Ok(report) => {
                        all_ok &= report.ok();
                        reports.push((p, report));
                    }
                    Err(e) => {
                        set_error(&format!(
                            "row {} rejects its canonical assignment: {e}",
                            row.id
                        ));
                        return ArsysInternal;
                    }
                }
            }
        }
        let status = give_string(out, reports_json(&reports).to_string());
        if status != ArsysOk {
            return status;
        }
        if all_ok {
            ArsysOk
        } else {
            set_error("at least one table row failed verification");
            ArsysNegative
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    const ROW1_DOC: &str = "p = 7\ngen q order 0\nrank = 4\nv1 = q\nv2 = q\nv3 = q\nv4 = q\ne12 = q^-1\ne23 = q^-1\ne34 = q^-1\n";

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take(out: *mut c_char) -> String {
        let s = CStr::from_ptr(out).to_str().unwrap().to_string();
        arsys_string_free(out);
        s
    }

    #[test]
    fn build_query_and_free() {
        unsafe {
            let doc = cstr(ROW1_DOC);
            let mut g: *mut ArsysGraph = ptr::null_mut();
            assert_eq!(arsys_graph_build(doc.as_ptr(), 0, &mut g), ArsysOk);
            assert_eq!(arsys_graph_point_count(g), 1);

            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(arsys_graph_dot(g, &mut s), ArsysOk);
            assert!(take(s).starts_with("graph exchange {"));

            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(arsys_roots_json(g, 0, &mut s), ArsysOk);
            let json = take(s);
            assert!(json.contains("\"positive_root_count\":[10]"), "{json}");

            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(arsys_graph_json(g, &mut s), ArsysOk);
            assert!(take(s).contains("\"groupspec\""));

            arsys_graph_free(g);
        }
    }

    #[test]
    fn classify_row1_and_no_match() {
        unsafe {
            let doc = cstr(ROW1_DOC);
            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(arsys_classify_json(doc.as_ptr(), &mut s), ArsysOk);
            assert!(take(s).contains("\"row\":\"1\""));

            // A free edge label matches no table row.
            let doc = cstr("p = 5\ngen g order 0\nrank = 4\nv1 = g\nv2 = g\nv3 = g\nv4 = g\ne12 = g\ne23 = g\ne34 = g\n");
            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(arsys_classify_json(doc.as_ptr(), &mut s), ArsysNegative);
            assert!(take(s).contains("\"matches\":[]"));
        }
    }

    #[test]
    fn error_paths_report_messages() {
        unsafe {
            let mut g: *mut ArsysGraph = ptr::null_mut();
            assert_eq!(arsys_graph_build(ptr::null(), 0, &mut g), ArsysInvalid);
            let msg = CStr::from_ptr(arsys_last_error()).to_str().unwrap();
            assert!(msg.contains("null"));

            let doc = cstr("p = 6\nrank = 1\nv1 = 1\n");
            assert_eq!(arsys_graph_build(doc.as_ptr(), 0, &mut g), ArsysInvalid);

            // Non-i-finite input: build fails with a negative verdict.
            let doc = cstr("p = 0\ngen q order 0\nrank = 2\nv1 = q\nv2 = q^2\ne12 = q\n");
            assert_eq!(arsys_graph_build(doc.as_ptr(), 0, &mut g), ArsysNegative);
            let msg = CStr::from_ptr(arsys_last_error()).to_str().unwrap();
            assert!(msg.contains("not i-finite"), "{msg}");

            // Null tolerance.
            arsys_graph_free(ptr::null_mut());
            arsys_string_free(ptr::null_mut());
            assert_eq!(arsys_graph_point_count(ptr::null()), 0);
        }
    }

    #[test]
    fn verify_tables_all_pass() {
        unsafe {
            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(arsys_verify_tables_json(&mut s), ArsysOk);
            let json = take(s);
            assert!(!json.contains("\"ok\":false"), "{json}");
        }
    }

    #[test]
    fn generated_header_covers_the_surface() {
        let header = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/include/arsys.h"
        ))
        .expect("build script generates include/arsys.h");
        for name in [
            "ArsysStatus",
            "ArsysGraph",
            "arsys_graph_build",
            "arsys_graph_free",
            "arsys_graph_json",
            "arsys_graph_dot",
            "arsys_graph_point_count",
            "arsys_roots_json",
            "arsys_classify_json",
            "arsys_verify_tables_json",
            "arsys_last_error",
            "arsys_string_free",
        ] {
            assert!(header.contains(name), "header is missing {name}");
        }
    }
}
