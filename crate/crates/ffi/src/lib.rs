//! C ABI over the morse-orbits pipeline.
//!
//! Every entry point returns an [`MoStatus`]. On failure a message is kept
//! per thread and can be read with [`mo_last_error_message`]. Strings handed
//! out by the library are released with [`mo_string_free`], analyses with
//! [`mo_analysis_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use morse_orbits::analysis::{analyze, AnalysisError, AnalysisOptions};
use morse_orbits::io::{declared_codomain, parse_field_for, parse_mesh};
use morse_orbits::plmorse::Codomain;
use morse_orbits::report::Report;

/// Status codes; the nonzero analysis codes match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Surface = 4,
    Morse = 5,
    Reeb = 6,
    Homology = 7,
    Orbit = 8,
    Panic = 10,
}

impl From<&AnalysisError> for MoStatus {
    fn from(e: &AnalysisError) -> Self {
        match e.code() {
            3 => MoStatus::Parse,
            4 => MoStatus::Surface,
            5 => MoStatus::Morse,
            6 => MoStatus::Reeb,
            7 => MoStatus::Homology,
            _ => MoStatus::Orbit,
        }
    }
}

/// Codomain of the field. `Auto` reads a `# codomain:` line and falls back to the real line.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoCodomain {
    Auto = 0,
    Real = 1,
    Circle = 2,
}

/// Numeric summary of an analysis. Unknown values are -1.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MoSummary {
    pub orientable: bool,
    pub genus: u32,
    pub boundary_components: u32,
    pub euler_characteristic: i64,
    pub c0: usize,
    pub c1: usize,
    pub c2: usize,
    pub reeb_nodes: usize,
    pub reeb_edges: usize,
    pub internal_edges: usize,
    /// Exact free rank of the stabilizer component group, or -1.
    pub k: i64,
    /// Upper bound on that rank, or -1.
    pub k_upper: i64,
    pub codim_orbit: usize,
    pub codim_orbit_cr: usize,
}

/// Opaque analysis handle.
pub struct MoAnalysis {
    report: Report,
    dot: String,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let c = CString::new(message.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), (MoStatus, String)>) -> MoStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MoStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MoStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (MoStatus, String)> {
    if p.is_null() {
        return Err((MoStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (MoStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn to_c(s: &str) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

fn run(mesh: &str, field: &str, codomain: MoCodomain, homology: bool) -> Result<MoAnalysis, AnalysisError> {
    let s = parse_mesh(mesh)?;
    let codomain = match codomain {
        MoCodomain::Real => Codomain::Real,
        MoCodomain::Circle => Codomain::Circle,
        MoCodomain::Auto => declared_codomain(field).unwrap_or(Codomain::Real),
    };
    let f = parse_field_for(field, codomain, &s)?;
    let a = analyze(&s, &f, AnalysisOptions { homology, ..Default::default() })?;
    Ok(MoAnalysis { report: Report::from_analysis(&a), dot: a.graph.to_dot() })
}

/// Analyzes a mesh (OFF or JSON text) and a field (one value per vertex).
///
/// On success `*out` owns a new handle.
///
/// # Safety
/// `mesh` and `field` must be nul-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mo_analyze(
    mesh: *const c_char,
    field: *const c_char,
    codomain: MoCodomain,
    homology: bool,
    out: *mut *mut MoAnalysis,
) -> MoStatus {
    guard(|| {
        if out.is_null() {
            return Err((MoStatus::NullPointer, "out is null".into()));
        }
        *out = ptr::null_mut();
        let mesh = text(mesh, "mesh")?;
        let field = text(field, "field")?;
        let a = run(mesh, field, codomain, homology).map_err(|e| (MoStatus::from(&e), e.to_string()))?;
        *out = Box::into_raw(Box::new(a));
        Ok(())
    })
}

/// Writes the JSON report into `*out`; free it with `mo_string_free`.
///
/// # Safety
/// `analysis` must come from `mo_analyze`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mo_analysis_report_json(analysis: *const MoAnalysis, out: *mut *mut c_char) -> MoStatus {
    guard(|| {
        if analysis.is_null() || out.is_null() {
            return Err((MoStatus::NullPointer, "analysis or out is null".into()));
        }
        *out = to_c(&(*analysis).report.to_json());
        Ok(())
    })
}

/// Writes the Reeb graph in DOT format into `*out`; free it with `mo_string_free`.
///
/// # Safety
/// `analysis` must come from `mo_analyze`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mo_analysis_reeb_dot(analysis: *const MoAnalysis, out: *mut *mut c_char) -> MoStatus {
    guard(|| {
        if analysis.is_null() || out.is_null() {
            return Err((MoStatus::NullPointer, "analysis or out is null".into()));
        }
        *out = to_c(&(*analysis).dot);
        Ok(())
    })
}

/// Writes the homotopy type of the orbit, e.g. `(S1)^3`, into `*out`.
///
/// # Safety
/// `analysis` must come from `mo_analyze`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mo_analysis_orbit_type(analysis: *const MoAnalysis, out: *mut *mut c_char) -> MoStatus {
    guard(|| {
        if analysis.is_null() || out.is_null() {
            return Err((MoStatus::NullPointer, "analysis or out is null".into()));
        }
        *out = to_c(&(*analysis).report.homotopy.orbit);
        Ok(())
    })
}

/// Fills `*out` with the numeric summary.
///
/// # Safety
/// `analysis` must come from `mo_analyze`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mo_analysis_summary(analysis: *const MoAnalysis, out: *mut MoSummary) -> MoStatus {
    guard(|| {
        if analysis.is_null() || out.is_null() {
            return Err((MoStatus::NullPointer, "analysis or out is null".into()));
        }
        let r = &(*analysis).report;
        *out = MoSummary {
            orientable: r.surface.orientable,
            genus: r.surface.genus,
            boundary_components: r.surface.b,
            euler_characteristic: r.surface.chi,
            c0: r.morse.c0,
            c1: r.morse.c1,
            c2: r.morse.c2,
            reeb_nodes: r.reeb.nodes,
            reeb_edges: r.reeb.edges,
            internal_edges: r.reeb.l,
            k: r.k.and_then(|k| k.exact()).map_or(-1, |k| k as i64),
            k_upper: r.k.map_or(-1, |k| k.upper() as i64),
            codim_orbit: r.codim.orbit,
            codim_orbit_cr: r.codim.orbit_cr,
        };
        Ok(())
    })
}

/// Releases a handle from `mo_analyze`. Null is ignored.
///
/// # Safety
/// `analysis` must be null or come from `mo_analyze`, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mo_analysis_free(analysis: *mut MoAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn mo_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn mo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
