use hypres::asymptotics::*;
use hypres::legendre::turning_data;
use hypres::models::{eta_k, ModelSpec};
use hypres::C64;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

fn xlog(a: C64) -> C64 {
    if a.norm() == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        a * a.ln()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn three_expressions_agree(x in 0.05f64..5.0, th in 0.0f64..FRAC_PI_2, r in 0.1f64..4.0) {
        let a = C64::from_polar(x, th);
        prop_assume!((a - 1.0).norm() > 1e-4);
        let h = h_fn(a, r).unwrap();
        let t = turning_data(a, r).unwrap();
        let e1 = (2.0 * t.phi - 2.0 * t.p + xlog(a + 1.0) - xlog(a - 1.0)).re;
        let e2 = (2.0 * t.phi - t.p - t.q + xlog(a) - xlog(a - 1.0)).re;
        let scale = 1.0 + h.abs();
        prop_assert!((h - e1).abs() <= 1e-10 * scale, "{} vs {}", h, e1);
        prop_assert!((h - e2).abs() <= 1e-10 * scale, "{} vs {}", h, e2);
        // conjugation
        prop_assert!((h_fn(a.conj(), r).unwrap() - h).abs() <= 1e-12 * scale);
    }

    #[test]
    fn h_increasing_in_r_and_along_rays(x in 0.05f64..4.0, th in -1.5f64..1.5) {
        let a = C64::from_polar(x, th);
        let mut last = f64::NEG_INFINITY;
        for i in 1..40 {
            let v = h_fn(a, 0.1 * i as f64).unwrap();
            prop_assert!(v > last);
            last = v;
        }
        let mut last = f64::NEG_INFINITY;
        for i in 1..60 {
            let v = h_fn(C64::from_polar(0.1 * i as f64, th), 1.3).unwrap();
            prop_assert!(v > last, "ray {} at x = {}", th, 0.1 * i as f64);
            last = v;
        }
    }
}

#[test]
fn zero_curve() {
    let r = 1.0;
    let a0 = a_theta(0.0, r).unwrap().unwrap();
    assert!(a0 > 0.1 && a0 < 10.0);
    let mut prev = a0;
    for i in 1..1570 {
        let th = 1e-3 * i as f64;
        let a = a_theta(th, r).unwrap().unwrap();
        assert!((a - prev).abs() <= 0.1);
        let d = C64::from_polar(1.0, th);
        assert!(h_fn(d * (a - 1e-6), r).unwrap() < 0.0);
        assert!(h_fn(d * (a + 1e-6), r).unwrap() > 0.0);
        prev = a;
    }
    assert!(a_theta(2.0, r).is_err());
}

#[test]
fn b_theta_shape() {
    for th in [0.0, 0.4, 0.9, 1.3, 1.55] {
        let b = b_theta(th, 1.0, 1).unwrap();
        assert!(b > 0.0);
        assert!((b - b_theta(-th, 1.0, 1).unwrap()).abs() <= 1e-12 * b);
        assert!(b_theta(th, 1.5, 1).unwrap() > b);
        assert!(b_theta(th, 0.5, 1).unwrap() < b);
    }
}

/// Fixed-grid midpoint double sum in (theta, u = 1/x), no root finding.
fn brute_b2(r0: f64) -> f64 {
    let (nt, nu) = (400, 8000);
    let umax = 20.0;
    let mut total = 0.0;
    for i in 0..nt {
        let th = -FRAC_PI_2 + PI * (i as f64 + 0.5) / nt as f64;
        let d = C64::from_polar(1.0, th);
        let mut inner = 0.0;
        for j in 0..nu {
            let u = umax * (j as f64 + 0.5) / nu as f64;
            inner += h_fn(d / u, r0).unwrap().max(0.0) * u;
        }
        total += inner * umax / nu as f64;
    }
    // (n+1)/(pi Gamma(n)) with n = 1
    2.0 / PI * total * PI / nt as f64
}

#[test]
fn b2_reference_values() {
    for (r0, want, tol) in [(0.5, 0.577, 0.02), (1.0, 2.153, 0.02), (2.0, 9.26, 0.08)] {
        let (b2, err) = b2_const_err(r0, 1).unwrap();
        assert!((b2 - want).abs() <= tol, "r0 = {r0}: {b2}");
        assert!(err < 1e-6);
        let brute = brute_b2(r0);
        assert!((b2 - brute).abs() < 2e-3 * b2, "r0 = {r0}: {b2} vs brute {brute}");
    }
    // growth with r0
    let v: Vec<f64> = [0.5, 1.0, 2.0, 3.0].iter().map(|&r| b2_const(r, 1).unwrap()).collect();
    assert!(v.windows(2).all(|w| w[1] > w[0]));
    assert!(b2_const(1.0, 3).unwrap() > 0.0);
}

#[test]
fn sharp_constants() {
    let cases = [
        (ModelSpec::obstacle(1, 0.5), 1.45, 0.03),
        (ModelSpec::obstacle(1, 1.0), 2.61, 0.03),
        (ModelSpec::obstacle(1, 2.0), 7.50, 0.08),
        (ModelSpec::step(1.0, 1.0), 3.15, 0.03),
        (ModelSpec::transparent(1.0, 0.5), 2.75, 0.03),
        (ModelSpec::transparent(1.0, 2f64.sqrt()), 3.70, 0.03),
    ];
    for (m, want, tol) in cases {
        let c = bp_total(&m).unwrap();
        assert!((c.bp - want).abs() <= tol, "{m:?}: {}", c.bp);
        assert!((c.b0 + c.b1 + c.b2 - c.bp).abs() < 1e-15);
    }
    assert!(bp_total(&ModelSpec::background(1)).is_err());
}

#[test]
fn eta_grows_at_rate_h() {
    // log|eta_k(alpha)| = k H(alpha, r0) + O(log k)
    let (r0, alpha) = (1.0, C64::from_polar(1.5, PI / 6.0));
    let h = h_fn(alpha, r0).unwrap();
    assert!(h > 0.0);
    let d: Vec<f64> = [20.0, 40.0, 80.0, 160.0]
        .iter()
        .map(|&k| eta_k(k, alpha, r0).unwrap().ln_abs() - k * h)
        .collect();
    for (i, k) in [20.0f64, 40.0, 80.0, 160.0].iter().enumerate() {
        assert!(d[i].abs() <= 2.0 * k.ln(), "k = {k}: {}", d[i]);
    }
    // slope between 80 and 160 approaches H
    let slope = (d[3] - d[2]) / 80.0;
    assert!(slope.abs() < 0.02 * h, "slope defect {slope}");
    // inside the zero curve the element is exponentially small
    let small = C64::new(0.3, 0.2);
    assert!(h_fn(small, r0).unwrap() < 0.0);
    assert!(eta_k(60.0, small, r0).unwrap().ln_abs() < -5.0);
}
