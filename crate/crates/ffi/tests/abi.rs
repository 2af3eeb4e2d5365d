use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ffpage_ffi::*;

fn last_error() -> String {
    let p = ffp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(ffp_version()) };
    assert_eq!(v.to_str().unwrap(), ffpage::VERSION);
}

#[test]
fn covariance_round_trip_and_entropy() {
    unsafe {
        let re = [0.5, 0.5, 0.5, 0.5];
        let mut c = ptr::null_mut();
        assert_eq!(ffp_covariance_new(2, re.as_ptr(), ptr::null(), &mut c), FfpStatus::Ok);
        let mut dim = 0;
        assert_eq!(ffp_covariance_dim(c, &mut dim), FfpStatus::Ok);
        assert_eq!(dim, 2);
        let (mut r, mut i) = ([0.0; 4], [1.0; 4]);
        assert_eq!(ffp_covariance_entries(c, r.as_mut_ptr(), i.as_mut_ptr(), 4), FfpStatus::Ok);
        assert_eq!(r, re);
        assert_eq!(i, [0.0; 4]);
        assert_eq!(ffp_covariance_entries(c, r.as_mut_ptr(), ptr::null_mut(), 3), FfpStatus::BufferTooSmall);

        let mut a = ptr::null_mut();
        let idx = [0usize];
        assert_eq!(ffp_covariance_reduce(c, idx.as_ptr(), 1, &mut a), FfpStatus::Ok);
        let mut s = 0.0;
        assert_eq!(ffp_entropy(a, &mut s), FfpStatus::Ok);
        assert!((s - 1.0).abs() < 1e-12);
        // The pure state of the whole pair has zero entropy.
        assert_eq!(ffp_entropy(c, &mut s), FfpStatus::Ok);
        assert!(s.abs() < 1e-9);
        ffp_covariance_free(a);
        ffp_covariance_free(c);
    }
}

#[test]
fn invalid_inputs_map_to_status_codes() {
    unsafe {
        let re = [1.5, 0.0, 0.0, 0.0];
        let mut c = ptr::null_mut();
        assert_eq!(ffp_covariance_new(2, re.as_ptr(), ptr::null(), &mut c), FfpStatus::InvalidArgument);
        assert!(c.is_null());
        assert!(last_error().contains("validation"));
        assert_eq!(ffp_covariance_new(2, ptr::null(), ptr::null(), &mut c), FfpStatus::NullPointer);
        assert!(last_error().contains("re"));
        let mut s = 0.0;
        assert_eq!(ffp_entropy(ptr::null(), &mut s), FfpStatus::NullPointer);
        let mut v = 0.0;
        assert_eq!(ffp_series_rfg(0.7, &mut v), FfpStatus::InvalidArgument);
        assert_eq!(ffp_moment_prediction(4, 200, 50, &mut v), FfpStatus::InvalidArgument);
        let mut h = ptr::null_mut();
        assert_eq!(ffp_hamiltonian_new(8, &mut h), FfpStatus::Ok);
        assert_eq!(ffp_hamiltonian_add_hopping(h, 8, 1.0, 0.0, 1.0, 0.0), FfpStatus::InvalidArgument);
        ffp_hamiltonian_free(h);
        ffp_covariance_free(ptr::null_mut());
    }
}

#[test]
fn series_and_bounds() {
    unsafe {
        let mut v = 0.0;
        assert_eq!(ffp_moment_prediction(2, 200, 50, &mut v), FfpStatus::Ok);
        assert!((v - 5.46875).abs() < 1e-12);
        assert_eq!(ffp_series_rfg(0.0, &mut v), FfpStatus::Ok);
        assert_eq!(v, 0.0);
        assert_eq!(ffp_series_dyn(0.5, &mut v), FfpStatus::Ok);
        assert!(v > 0.0 && v < 0.5);
        assert_eq!(ffp_concentration_bound(FfpBound::CovarianceTypicality, 200, 3, 1.0, &mut v), FfpStatus::Ok);
        assert!((v - 2.0 * (-200.0f64 / 12.0).exp()).abs() < 1e-15);
        // Below xi^2 the entropy-typicality bound is undefined.
        assert_eq!(ffp_concentration_bound(FfpBound::EntropyTypicality, 200, 100, 1.0, &mut v), FfpStatus::Ok);
        assert!(v.is_nan());
    }
}

#[test]
fn quench_through_handles_matches_library() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(ffp_hamiltonian_new(8, &mut h), FfpStatus::Ok);
        assert_eq!(ffp_hamiltonian_add_hopping(h, 1, 1.0, 0.0, 1.0, 0.0), FfpStatus::Ok);
        let mut c0 = ptr::null_mut();
        assert_eq!(ffp_covariance_density_wave(8, &mut c0), FfpStatus::Ok);
        let mut ct = ptr::null_mut();
        assert_eq!(ffp_evolve(h, c0, 2.5, &mut ct), FfpStatus::Ok);

        let spec = ffpage::quench::HamiltonianSpec::minimal(8).unwrap();
        let hm = ffpage::quench::build_single_particle(&spec).unwrap();
        let c0r = ffpage::quench::density_wave_covariance(8).unwrap();
        let want = ffpage::quench::evolve_covariance(&hm, &c0r, 2.5).unwrap();
        let (mut re, mut im) = ([0.0; 64], [0.0; 64]);
        assert_eq!(ffp_covariance_entries(ct, re.as_mut_ptr(), im.as_mut_ptr(), 64), FfpStatus::Ok);
        for i in 0..8 {
            for j in 0..8 {
                let z = want.get(i, j);
                assert!((re[i * 8 + j] - z.re).abs() < 1e-13 && (im[i * 8 + j] - z.im).abs() < 1e-13);
            }
        }

        let mut occ = ptr::null_mut();
        assert_eq!(ffp_conserved_occupations(h, &mut occ), FfpStatus::Ok);
        let mut n = 0;
        assert_eq!(ffp_occupations_len(occ, &mut n), FfpStatus::Ok);
        assert_eq!(n, 8);
        let mut eta = vec![0.0; n];
        assert_eq!(ffp_occupations_values(occ, ptr::null_mut(), ptr::null_mut(), eta.as_mut_ptr(), n), FfpStatus::Ok);
        let mut all_half = false;
        assert_eq!(ffp_occupations_all_half(occ, &mut all_half), FfpStatus::Ok);
        assert!(all_half);

        let sizes = [1usize, 2, 4];
        let (mut mean, mut se) = ([0.0; 3], [0.0; 3]);
        assert_eq!(ffp_dynamical_page_curve(h, 10.0, 100.0, 64, 7, sizes.as_ptr(), 3, mean.as_mut_ptr(), se.as_mut_ptr()), FfpStatus::Ok);
        assert!(mean[0] > 0.0 && mean[0] <= 1.0 && mean[2] > mean[0]);
        ffp_occupations_free(occ);
        ffp_covariance_free(ct);
        ffp_covariance_free(c0);
        ffp_hamiltonian_free(h);
    }
}

#[test]
fn random_covariance_is_reproducible() {
    unsafe {
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(ffp_covariance_random(10, 5, 3, 0, &mut a), FfpStatus::Ok);
        assert_eq!(ffp_covariance_random(10, 5, 3, 0, &mut b), FfpStatus::Ok);
        let mut d = 1.0;
        assert_eq!(ffp_hs_distance(a, b, &mut d), FfpStatus::Ok);
        assert_eq!(d, 0.0);
        let sizes = [2usize, 5];
        let (mut mean, mut se) = ([0.0; 2], [0.0; 2]);
        assert_eq!(ffp_rfg_page_curve(10, 5, 50, 3, sizes.as_ptr(), 2, mean.as_mut_ptr(), se.as_mut_ptr()), FfpStatus::Ok);
        assert!(mean[1] > mean[0] && se[0] > 0.0);
        ffp_covariance_free(a);
        ffp_covariance_free(b);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/ffpage.h")).unwrap();
    let src = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let mut count = 0;
    for line in src.lines() {
        if let Some(rest) = line.split("extern \"C\" fn ").nth(1) {
            let name = rest.split('(').next().unwrap();
            assert!(header.contains(&format!("{name}(")), "{name} missing from header");
            count += 1;
        }
    }
    assert!(count >= 20);
}

/// Compiles the C smoke program against the header and static library.
/// Skipped when no C compiler is on PATH.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libffpage_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with(&format!("ffpage {}", ffpage::VERSION)));
}
