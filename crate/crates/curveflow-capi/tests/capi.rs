//! Exercises the C entry points the way a foreign binding would: through
//! raw pointers and status codes.

use curveflow_capi::*;
use std::ptr;

#[test]
fn soliton_build_query_and_residual() {
    unsafe {
        let mut handle: *mut CfCurve = ptr::null_mut();
        let status = cf_soliton_build(false, 1.0, 0.0, 1.0, 6.0, 1e-10, &mut handle);
        assert_eq!(status, CfStatus::Ok);
        assert!(!handle.is_null());

        let n = cf_curve_len(handle);
        assert!(n > 100);
        assert!(!cf_curve_is_closed(handle));

        let mut arc = vec![0.0f64; n];
        let mut xs = vec![0.0f64; n];
        let mut ys = vec![0.0f64; n];
        let mut ks = vec![0.0f64; n];
        let status = cf_curve_samples(
            handle,
            arc.as_mut_ptr(),
            xs.as_mut_ptr(),
            ys.as_mut_ptr(),
            ks.as_mut_ptr(),
            n,
        );
        assert_eq!(status, CfStatus::Ok);
        // grim reaper: curvature is sech of the arc coordinate
        for i in (0..n).step_by(97) {
            assert!((ks[i] - 1.0 / arc[i].cosh()).abs() < 1e-7);
        }
        // undersized buffer is rejected
        assert_eq!(
            cf_curve_samples(
                handle,
                arc.as_mut_ptr(),
                ptr::null_mut(),
                ptr::null_mut(),
                ptr::null_mut(),
                n - 1
            ),
            CfStatus::Invalid
        );

        let mut residual = f64::NAN;
        let status = cf_soliton_residual(handle, false, 1.0, 1.0, 0.0, 0.0, 1.0, &mut residual);
        assert_eq!(status, CfStatus::Ok);
        assert!(residual < 1e-7, "residual {residual:.3e}");

        cf_curve_free(handle);
    }
}

#[test]
fn degenerate_constants_report_no_soliton() {
    unsafe {
        let mut handle: *mut CfCurve = ptr::null_mut();
        let status = cf_soliton_build(false, 0.0, 1.0, 1.0, 4.0, 1e-10, &mut handle);
        assert_eq!(status, CfStatus::NoSoliton);
        assert!(handle.is_null());
        let msg = std::ffi::CStr::from_ptr(cf_status_message(status));
        assert!(msg.to_str().unwrap().contains("soliton"));
    }
}

#[test]
fn curve_from_points_and_shrinking_flow() {
    let n = 256;
    let xs: Vec<f64> = (0..n)
        .map(|i| (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
        .collect();
    let ys: Vec<f64> = (0..n)
        .map(|i| (2.0 * std::f64::consts::PI * i as f64 / n as f64).sin())
        .collect();
    unsafe {
        let mut circle: *mut CfCurve = ptr::null_mut();
        let status = cf_curve_from_points(xs.as_ptr(), ys.as_ptr(), n, true, &mut circle);
        assert_eq!(status, CfStatus::Ok);
        assert!(cf_curve_is_closed(circle));

        let mut final_state: *mut CfCurve = ptr::null_mut();
        let mut fit = CfFit {
            vx: 0.0,
            vy: 0.0,
            shape_residual: 0.0,
            linearity_residual: 0.0,
        };
        let status = cf_flow_evolve(
            circle,
            false,
            1.0,
            1.0,
            0.0,
            0.4,
            0.25,
            0.15,
            &mut final_state,
            &mut fit,
        );
        assert_eq!(status, CfStatus::Ok);
        assert!(fit.shape_residual > 0.1, "circle is not a translator");

        let m = cf_curve_len(final_state);
        let mut fx = vec![0.0f64; m];
        let mut fy = vec![0.0f64; m];
        assert_eq!(
            cf_curve_samples(
                final_state,
                ptr::null_mut(),
                fx.as_mut_ptr(),
                fy.as_mut_ptr(),
                ptr::null_mut(),
                m
            ),
            CfStatus::Ok
        );
        let r_mean: f64 = fx.iter().zip(&fy).map(|(x, y)| x.hypot(*y)).sum::<f64>() / m as f64;
        let exact = (1.0f64 - 0.8).sqrt();
        assert!((r_mean - exact).abs() / exact < 0.01, "R {r_mean}");

        cf_curve_free(circle);
        cf_curve_free(final_state);
    }
}

#[test]
fn energy_jet_matches_polynomial() {
    unsafe {
        let mut jet = CfJet {
            value: 0.0,
            d1: 0.0,
            d2: 0.0,
            d3: 0.0,
        };
        assert_eq!(cf_energy_evaluate(0, 2.0, 0.0, 3.0, &mut jet), CfStatus::Ok);
        assert_eq!(jet.value, 9.0);
        assert_eq!(jet.d1, 6.0);
        assert_eq!(jet.d2, 2.0);
        assert_eq!(jet.d3, 0.0);
        // entropy at kappa <= 0 is a domain error
        assert_eq!(
            cf_energy_evaluate(1, 0.0, 0.0, -1.0, &mut jet),
            CfStatus::Domain
        );
        // unknown family
        assert_eq!(
            cf_energy_evaluate(9, 0.0, 0.0, 1.0, &mut jet),
            CfStatus::Invalid
        );
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        assert_eq!(
            cf_soliton_build(false, 1.0, 0.0, 1.0, 4.0, 1e-10, ptr::null_mut()),
            CfStatus::Invalid
        );
        assert_eq!(cf_curve_len(ptr::null()), 0);
        cf_curve_free(ptr::null_mut()); // must be a no-op
        let mut out = 0.0;
        assert_eq!(
            cf_soliton_residual(ptr::null(), false, 1.0, 1.0, 0.0, 0.0, 1.0, &mut out),
            CfStatus::Invalid
        );
    }
}

#[test]
fn generated_header_exists_and_names_the_api() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/curveflow.h");
    let text = std::fs::read_to_string(header).expect("header generated at build time");
    for symbol in [
        "cf_soliton_build",
        "cf_curve_from_points",
        "cf_curve_free",
        "cf_curve_samples",
        "cf_soliton_residual",
        "cf_flow_evolve",
        "cf_energy_evaluate",
        "cf_status_message",
        "CfStatus",
        "CfFit",
        "CfJet",
    ] {
        assert!(text.contains(symbol), "header misses {symbol}");
    }
    assert!(text.contains("CURVEFLOW_H"));
}
