use std::ffi::{CStr, CString};
use std::ptr;

use heisenberg_homology_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { hh_string_free(p) };
    s
}

#[test]
fn relative_torus_homology_through_handles() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { hh_graph_standard_model(1, 1, &mut g) }, HhStatus::Ok);
    let (mut genus, mut boundary) = (0, 0);
    assert_eq!(unsafe { hh_graph_invariants(g, &mut genus, &mut boundary) }, HhStatus::Ok);
    assert_eq!((genus, boundary), (1, 1));

    let mut c = ptr::null_mut();
    assert_eq!(unsafe { hh_complex_build(g, 2, true, HhOracle::Standard, &mut c) }, HhStatus::Ok);
    let mut top = 0;
    assert_eq!(unsafe { hh_complex_cell_count(c, 2, &mut top) }, HhStatus::Ok);
    assert_eq!(top, 3);
    let mut ok = false;
    assert_eq!(unsafe { hh_complex_is_chain_complex(c, &mut ok) }, HhStatus::Ok);
    assert!(ok);

    let coeff = CString::new("linearized").unwrap();
    let mut ranks = [usize::MAX; 4];
    let mut written = 0;
    assert_eq!(unsafe { hh_homology_ranks(c, coeff.as_ptr(), ranks.as_mut_ptr(), ranks.len(), &mut written) }, HhStatus::Ok);
    assert_eq!(&ranks[..written], &[0, 0, 12]);

    let mut small = [0usize; 1];
    assert_eq!(
        unsafe { hh_homology_ranks(c, coeff.as_ptr(), small.as_mut_ptr(), 1, &mut written) },
        HhStatus::BufferTooSmall
    );
    unsafe {
        hh_complex_free(c);
        hh_graph_free(g);
    }
}

#[test]
fn parse_errors_set_the_message() {
    let text = CString::new("vertex v\nvertex w\nedge e v w\nedge f v w\nedge g v w\norder v e+ f+\norder w e- f- g-\n").unwrap();
    let mut g = ptr::null_mut();
    let st = unsafe { hh_graph_parse(text.as_ptr(), &mut g) };
    assert_ne!(st, HhStatus::Ok);
    assert!(g.is_null());
    let msg = unsafe { CStr::from_ptr(hh_last_error()) }.to_str().unwrap();
    assert!(msg.contains("g+"), "{msg}");

    let empty = CString::new("").unwrap();
    assert_eq!(unsafe { hh_graph_parse(empty.as_ptr(), &mut g) }, HhStatus::Parse);
    let msg = unsafe { CStr::from_ptr(hh_last_error()) }.to_str().unwrap();
    assert!(msg.contains("no vertices"), "{msg}");
}

#[test]
fn null_arguments_are_rejected() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hh_graph_parse(ptr::null(), &mut out) }, HhStatus::NullPointer);
    assert_eq!(unsafe { hh_graph_invariants(ptr::null(), ptr::null_mut(), ptr::null_mut()) }, HhStatus::NullPointer);
    unsafe {
        hh_graph_free(ptr::null_mut());
        hh_string_free(ptr::null_mut());
    }
}

#[test]
fn phi_and_twists() {
    let word = CString::new("a1 s1 b1").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { hh_phi(1, 1, 2, word.as_ptr(), &mut s) }, HhStatus::Ok);
    assert_eq!(take_string(s), "u·a1·b1");

    let bad = CString::new("s5").unwrap();
    assert_eq!(unsafe { hh_phi(1, 1, 2, bad.as_ptr(), &mut s) }, HhStatus::InvalidArgument);

    assert_eq!(unsafe { hh_twist_matrix(HhTwist::Ta, &mut s) }, HhStatus::Ok);
    assert_eq!(take_string(s), "1 & 1 & -u + 1\n0 & u^2·a1^2 & 0\n0 & a1 & a1");

    let mut ok = false;
    assert_eq!(unsafe { hh_verify_twist_identities(&mut ok) }, HhStatus::Ok);
    assert!(ok);
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/heisenberg_homology.h")).unwrap();
    for f in ["hh_graph_parse", "hh_complex_build", "hh_homology_ranks", "hh_last_error", "hh_twist_matrix"] {
        assert!(header.contains(f), "{f} missing from header");
    }
    assert!(header.contains("typedef struct hh_graph hh_graph;"));
}
