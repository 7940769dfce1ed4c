//! C ABI over `heisenberg-homology`.
//!
//! Objects are handed out as opaque pointers and must be released with the
//! matching `*_free` function. Every fallible call returns an `HhStatus`; on
//! failure `hh_last_error()` describes the problem until the next call on the
//! same thread. Strings returned through out-parameters are owned by the
//! caller and released with `hh_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use heisenberg_homology::config_complex::{build_complex, BMComplex, CoefficientOracle};
use heisenberg_homology::heisenberg::{phi_eval, BraidWord, SurfaceParams};
use heisenberg_homology::homology::{bm_homology, Specialization};
use heisenberg_homology::mcg_action::{render_matrix, twist_matrix, verify_identities, Twist};
use heisenberg_homology::ribbon_graph::{standard_model, surface_invariants, validate_relative, RelativeSubgraph, RibbonGraph};
use heisenberg_homology::Error;

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    InvalidGraph = 4,
    Computation = 5,
    Unsupported = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Which coefficient oracle a complex is built with.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HhOracle {
    Trivial = 0,
    Standard = 1,
}

/// Twists of the one-holed torus.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HhTwist {
    Ta = 0,
    Tb = 1,
    TaInverse = 2,
    TbInverse = 3,
}

/// A ribbon graph with its (possibly empty) distinguished subgraph.
pub struct HhGraph {
    graph: RibbonGraph,
    relative: RelativeSubgraph,
}

/// A built Borel–Moore chain complex.
pub struct HhComplex {
    complex: BMComplex,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> HhStatus {
    match e {
        Error::Parse { .. } | Error::BadSpecialization(_) => HhStatus::Parse,
        Error::MalformedGraph(_) | Error::Disconnected | Error::InvalidRelative(_) => HhStatus::InvalidGraph,
        Error::InvalidParams(_) | Error::OutOfRange(_) | Error::DimensionMismatch { .. } => HhStatus::InvalidArgument,
        Error::Unsupported(_) | Error::OracleMismatch(_) => HhStatus::Unsupported,
        _ => HhStatus::Computation,
    }
}

/// Run `f`, translating errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), (HhStatus, String)>>(f: F) -> HhStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HhStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            HhStatus::Panic
        }
    }
}

fn lib(e: Error) -> (HhStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (HhStatus, String) {
    (HhStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (HhStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (HhStatus::InvalidArgument, format!("`{what}` is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (HhStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(s).map_err(|_| (HhStatus::Computation, "string contains nul".to_string()))?.into_raw();
    Ok(())
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn hh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be null or a string produced by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a graph in the text interchange format.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hh_graph_parse(text: *const c_char, out: *mut *mut HhGraph) -> HhStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let (graph, relative) = RibbonGraph::parse(text).map_err(lib)?;
        if !relative.is_empty() {
            validate_relative(&graph, &relative).map_err(lib)?;
        }
        *out = Box::into_raw(Box::new(HhGraph { graph, relative }));
        Ok(())
    })
}

/// The standard relative model of genus `g` with `m` boundary components.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hh_graph_standard_model(g: usize, m: usize, out: *mut *mut HhGraph) -> HhStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (graph, relative) = standard_model(g, m).map_err(lib)?;
        *out = Box::into_raw(Box::new(HhGraph { graph, relative }));
        Ok(())
    })
}

/// # Safety
/// `graph` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hh_graph_free(graph: *mut HhGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Genus and number of boundary components of the thickened surface.
///
/// # Safety
/// `graph` must be a live handle; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn hh_graph_invariants(graph: *const HhGraph, genus: *mut usize, boundary: *mut usize) -> HhStatus {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        if genus.is_null() || boundary.is_null() {
            return Err(null("genus/boundary"));
        }
        let inv = surface_invariants(&g.graph).map_err(lib)?;
        *genus = inv.genus;
        *boundary = inv.boundary_components;
        Ok(())
    })
}

/// Build the complex of `n` points, relative to the distinguished subgraph
/// when `relative` is nonzero.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hh_complex_build(
    graph: *const HhGraph,
    n: usize,
    relative: bool,
    oracle: HhOracle,
    out: *mut *mut HhComplex,
) -> HhStatus {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let oracle = match oracle {
            HhOracle::Trivial => CoefficientOracle::Trivial,
            HhOracle::Standard => CoefficientOracle::StandardWedge,
        };
        let complex = build_complex(&g.graph, relative.then_some(&g.relative), n, oracle).map_err(lib)?;
        *out = Box::into_raw(Box::new(HhComplex { complex }));
        Ok(())
    })
}

/// # Safety
/// `complex` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hh_complex_free(complex: *mut HhComplex) {
    if !complex.is_null() {
        drop(Box::from_raw(complex));
    }
}

/// Number of cells in `degree` (zero above the top degree).
///
/// # Safety
/// `complex` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hh_complex_cell_count(complex: *const HhComplex, degree: usize, out: *mut usize) -> HhStatus {
    guard(|| {
        let c = complex.as_ref().ok_or_else(|| null("complex"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = c.complex.cells.get(degree).map_or(0, |v| v.len());
        Ok(())
    })
}

/// Whether all composites of consecutive boundary maps vanish.
///
/// # Safety
/// `complex` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hh_complex_is_chain_complex(complex: *const HhComplex, out: *mut bool) -> HhStatus {
    guard(|| {
        let c = complex.as_ref().ok_or_else(|| null("complex"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = c.complex.is_chain_complex().map_err(lib)?;
        Ok(())
    })
}

/// Ranks of homology in degrees `0..=n` under the specialisation `coeff`
/// (`"trivial"`, `"linearized"` or `"scalar:u=-1,a1=2,..."`). `ranks` must
/// hold `len ≥ n + 1` entries; the number written goes to `written`.
///
/// # Safety
/// `complex` must be a live handle, `coeff` a nul-terminated string and
/// `ranks` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn hh_homology_ranks(
    complex: *const HhComplex,
    coeff: *const c_char,
    ranks: *mut usize,
    len: usize,
    written: *mut usize,
) -> HhStatus {
    guard(|| {
        let c = complex.as_ref().ok_or_else(|| null("complex"))?;
        let coeff = read_str(coeff, "coeff")?;
        if ranks.is_null() || written.is_null() {
            return Err(null("ranks/written"));
        }
        let spec = Specialization::parse(c.complex.params, coeff).map_err(lib)?;
        let r = bm_homology(&c.complex, &spec).map_err(lib)?.ranks();
        if r.len() > len {
            return Err((HhStatus::BufferTooSmall, format!("need {} entries, got {len}", r.len())));
        }
        ptr::copy_nonoverlapping(r.as_ptr(), ranks, r.len());
        *written = r.len();
        Ok(())
    })
}

/// φ of a braid word (e.g. `"a1 s1 b1"`) for `n` points on the surface of
/// genus `g` with `m` boundary components, in normal form.
///
/// # Safety
/// `word` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hh_phi(g: usize, m: usize, n: usize, word: *const c_char, out: *mut *mut c_char) -> HhStatus {
    guard(|| {
        let word = BraidWord::parse(read_str(word, "word")?).map_err(lib)?;
        let params = SurfaceParams::new(g, m).map_err(lib)?;
        let h = phi_eval(&word, params, n).map_err(lib)?;
        write_string(out, h.to_string())
    })
}

/// Rendered 3×3 matrix of a twist: rows on lines, entries separated by `&`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hh_twist_matrix(twist: HhTwist, out: *mut *mut c_char) -> HhStatus {
    guard(|| {
        let t = match twist {
            HhTwist::Ta => Twist::Ta,
            HhTwist::Tb => Twist::Tb,
            HhTwist::TaInverse => Twist::TaInv,
            HhTwist::TbInverse => Twist::TbInv,
        };
        let m = twist_matrix(t).map_err(lib)?;
        write_string(out, render_matrix(&m))
    })
}

/// Whether the braid relation and the boundary-twist commutations hold.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hh_verify_twist_identities(out: *mut bool) -> HhStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = verify_identities().map_err(lib)?.iter().all(|c| c.passed);
        Ok(())
    })
}
