use std::ffi::CStr;
use std::ptr;

use orbitlab_ffi::*;

fn last_error() -> String {
    let p = orbitlab_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn ds(h: i64, z: i64) -> *mut OrbitlabDiscreteSeries {
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { orbitlab_ds_new(h, z, &mut d) }, OrbitlabStatus::Ok);
    d
}

#[test]
fn parameters_round_trip() {
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { orbitlab_ds_from_harish_chandra(3, 1, 3, &mut d) }, OrbitlabStatus::Ok);
    let (mut h, mut z, mut c) = (0, 0, OrbitlabClass::Holo);
    assert_eq!(unsafe { orbitlab_ds_params(d, &mut h, &mut z, &mut c) }, OrbitlabStatus::Ok);
    assert_eq!((h, z, c), (3, -1, OrbitlabClass::Neither));
    unsafe { orbitlab_ds_free(d) };

    let mut d = ptr::null_mut();
    assert_eq!(unsafe { orbitlab_ds_from_harish_chandra(0, 1, 1, &mut d) }, OrbitlabStatus::InvalidParameter);
    assert!(d.is_null());
    assert!(last_error().contains("n1"));
    assert_eq!(unsafe { orbitlab_ds_from_harish_chandra(1, 1, 7, &mut d) }, OrbitlabStatus::InvalidParameter);
}

#[test]
fn branching_entries() {
    let d = ds(3, 1);
    let mut br = ptr::null_mut();
    assert_eq!(unsafe { orbitlab_branch_b(d, 3, &mut br) }, OrbitlabStatus::Ok);
    let (mut len, mut adm) = (0usize, false);
    assert_eq!(unsafe { orbitlab_branching_info(br, &mut len, &mut adm) }, OrbitlabStatus::Ok);
    assert_eq!(len, 6);
    let mut ms = Vec::new();
    for i in 0..len {
        let (mut has_m, mut m, mut s, mut mult) = (false, 0i64, 0i32, 0u64);
        assert_eq!(unsafe { orbitlab_branching_entry(br, i, &mut has_m, &mut m, &mut s, &mut mult) }, OrbitlabStatus::Ok);
        assert!(has_m);
        assert_eq!(mult, 1);
        ms.push(m * i64::from(s));
    }
    assert_eq!(ms, [4, 7, 10, 5, 8, 11]);
    let (mut has_m, mut m, mut s, mut mult) = (false, 0i64, 0i32, 0u64);
    assert_eq!(unsafe { orbitlab_branching_entry(br, 6, &mut has_m, &mut m, &mut s, &mut mult) }, OrbitlabStatus::IndexOutOfRange);
    unsafe { orbitlab_branching_free(br) };

    let mut br = ptr::null_mut();
    assert_eq!(unsafe { orbitlab_branch_b1(d, &mut br) }, OrbitlabStatus::Ok);
    assert_eq!(unsafe { orbitlab_branching_info(br, &mut len, &mut adm) }, OrbitlabStatus::Ok);
    assert!(!adm);
    assert_eq!(unsafe { orbitlab_branching_entry(br, 0, &mut has_m, &mut m, &mut s, &mut mult) }, OrbitlabStatus::Ok);
    assert!(!has_m);
    assert_eq!(mult, ORBITLAB_MULT_INFINITE);
    unsafe { orbitlab_branching_free(br) };

    let mut sel = false;
    assert_eq!(unsafe { orbitlab_central_character_selects(d, 4, &mut sel) }, OrbitlabStatus::Ok);
    assert!(sel);
    unsafe { orbitlab_ds_free(d) };
}

#[test]
fn system_matrices_and_dimension() {
    let d = ds(2, 0);
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { orbitlab_system_build(d, 2, 1, &mut sys) }, OrbitlabStatus::Ok);
    let mut n = 0usize;
    assert_eq!(unsafe { orbitlab_system_size(sys, &mut n) }, OrbitlabStatus::Ok);
    let mut re = vec![0.0; n * n];
    let mut im = vec![0.0; n * n];
    for which in 0..3 {
        assert_eq!(unsafe { orbitlab_system_matrix(sys, which, re.as_mut_ptr(), im.as_mut_ptr()) }, OrbitlabStatus::Ok);
    }
    assert_eq!(unsafe { orbitlab_system_matrix(sys, 3, re.as_mut_ptr(), im.as_mut_ptr()) }, OrbitlabStatus::IndexOutOfRange);
    let mut dim = 0usize;
    assert_eq!(unsafe { orbitlab_l2_dimension(sys, ptr::null(), &mut dim) }, OrbitlabStatus::Ok);
    assert_eq!(dim, 1);
    let mut cfg = orbitlab_config_default();
    cfg.z1 = cfg.z0 / 2.0;
    assert_eq!(unsafe { orbitlab_l2_dimension(sys, &cfg, &mut dim) }, OrbitlabStatus::InvalidParameter);
    unsafe { orbitlab_system_free(sys) };

    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { orbitlab_system_build(d, 2, 0, &mut sys) }, OrbitlabStatus::InvalidParameter);
    unsafe { orbitlab_ds_free(d) };

    // Holomorphic parameters have no system.
    let h = ds(2, -6);
    assert_ne!(unsafe { orbitlab_system_build(h, 0, 1, &mut sys) }, OrbitlabStatus::Ok);
    assert!(sys.is_null());
    unsafe { orbitlab_ds_free(h) };
}

#[test]
fn null_pointers_are_reported() {
    assert_eq!(unsafe { orbitlab_ds_new(2, -6, ptr::null_mut()) }, OrbitlabStatus::NullPointer);
    let mut v = 0.0;
    assert_eq!(unsafe { orbitlab_reduced_volume(2.0, -6.0, 2000, ptr::null_mut()) }, OrbitlabStatus::NullPointer);
    assert_eq!(unsafe { orbitlab_reduced_volume(2.0, -6.0, 2000, &mut v) }, OrbitlabStatus::Ok);
    assert!(orbitlab_last_error().is_null());
    let mut len = 0usize;
    let mut adm = false;
    assert_eq!(unsafe { orbitlab_branching_info(ptr::null(), &mut len, &mut adm) }, OrbitlabStatus::NullPointer);
    unsafe {
        orbitlab_ds_free(ptr::null_mut());
        orbitlab_string_free(ptr::null_mut());
    }
}

#[test]
fn check_detail_string() {
    let mut passed = false;
    let mut detail = ptr::null_mut();
    assert_eq!(unsafe { orbitlab_run_check(1, &mut passed, &mut detail) }, OrbitlabStatus::Ok);
    assert!(passed);
    let text = unsafe { CStr::from_ptr(detail) }.to_string_lossy().into_owned();
    assert!(text.starts_with("PASS"), "{text}");
    unsafe { orbitlab_string_free(detail) };
    assert_eq!(unsafe { orbitlab_run_check(11, &mut passed, ptr::null_mut()) }, OrbitlabStatus::InvalidParameter);
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(orbitlab_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
