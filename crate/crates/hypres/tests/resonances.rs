use hypres::models::{secular, ModelSpec};
use hypres::resonances::*;
use hypres::C64;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Winding by a fixed fine step along the boundary, no adaptivity.
fn brute_winding(m: &ModelSpec, l: u32, r: &SearchRegion, h: f64) -> i64 {
    let corners = [c(r.re_lo, r.im_lo), c(r.re_hi, r.im_lo), c(r.re_hi, r.im_hi), c(r.re_lo, r.im_hi)];
    let mut total = 0.0;
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        let n = ((b - a).norm() / h).ceil() as usize;
        let mut prev = secular(m, l, a).unwrap();
        for j in 1..=n {
            let v = secular(m, l, a + (b - a) * (j as f64 / n as f64)).unwrap();
            let d = (v.m / prev.m).arg();
            assert!(d.abs() < 1.0, "fixed step too coarse at {}", a + (b - a) * (j as f64 / n as f64));
            total += d;
            prev = v;
        }
    }
    (total / (2.0 * PI)).round() as i64
}

#[test]
fn winding_is_additive() {
    let m = ModelSpec::obstacle(1, 1.0);
    let r = SearchRegion::new(-8.0, 0.4, -7.0, 7.3);
    let (xm, ym) = (-2.83, 0.37);
    let quads = [
        SearchRegion::new(r.re_lo, xm, r.im_lo, ym),
        SearchRegion::new(xm, r.re_hi, r.im_lo, ym),
        SearchRegion::new(r.re_lo, xm, ym, r.im_hi),
        SearchRegion::new(xm, r.re_hi, ym, r.im_hi),
    ];
    for l in [0, 4, 9] {
        let w = winding(&m, l, &r).unwrap();
        let parts: i64 = quads.iter().map(|q| winding(&m, l, q).unwrap()).sum();
        assert_eq!(w, parts, "l = {l}");
    }
}

#[test]
fn obstacle_l0_against_fixed_step_oracle() {
    let m = ModelSpec::obstacle(1, 1.0);
    let r = SearchRegion::new(-10.0, 0.49, -10.0, 10.0);
    let w = winding(&m, 0, &r).unwrap();
    let zs = find_zeros(&m, 0, &r).unwrap();
    let inside: u32 = zs.iter().filter(|(s, _)| r.contains(*s)).map(|z| z.1).sum();
    assert_eq!(w, inside as i64);
    assert_eq!(w, brute_winding(&m, 0, &r, 2e-3));
    // mpmath findroot on Q^0_{s-1}(cosh 1)/Gamma(s), 30 digits
    for z in [c(-0.466_614_795_216_761_7, 0.0), c(-1.495_073_740_807_530_9, 0.0)] {
        assert!(zs.iter().any(|(s, _)| (s - z).norm() < 1e-10), "{z} missing");
    }
}

#[test]
fn polished_zeros_are_zeros() {
    let m = ModelSpec::obstacle(1, 1.0);
    let r = SearchRegion::new(-9.0, 0.5, -0.3, 9.0);
    let zs = find_zeros(&m, 7, &r).unwrap();
    // mpmath reference for l = 7
    let z7 = c(-5.656_972_377_027_706_5, 0.605_962_960_691_863_5);
    assert!(zs.iter().any(|(s, _)| (s - z7).norm() < 1e-10));
    for (s, _) in &zs {
        // distance to the zero from a centred difference quotient
        let h = 1e-5;
        let f = secular(&m, 7, *s).unwrap();
        let d = (secular(&m, 7, s + h).unwrap() - secular(&m, 7, s - h).unwrap()) * (1.0 / (2.0 * h));
        assert!(f.abs_ratio(d) < 1e-8, "{s}");
    }
    // zeros do not depend on the box they were found in
    let r2 = SearchRegion::new(-9.31, 0.62, -0.41, 9.17);
    let zs2 = find_zeros(&m, 7, &r2).unwrap();
    for (s, _) in zs.iter().filter(|(s, _)| r2.contains(*s)) {
        assert!(zs2.iter().any(|(t, _)| (s - t).norm() < 1e-8), "{s}");
    }
}

#[test]
fn unperturbed_windings_match_background_poles() {
    // the entire secular functions of the trivial step and transparent
    // models vanish exactly at s = -k - j
    for m in [ModelSpec::step(1.0, 0.0), ModelSpec::transparent(1.0, 1.0)] {
        for l in [0u32, 2, 5] {
            let r = SearchRegion::new(-9.7, 0.5, -3.1, 2.9);
            let expected = (0..20).filter(|j| r.contains(c(-(l as f64) - *j as f64, 0.0))).count() as i64;
            assert_eq!(winding(&m, l, &r).unwrap(), expected);
            let off = SearchRegion::new(-9.7, 0.5, 0.2, 6.0);
            assert_eq!(winding(&m, l, &off).unwrap(), 0);
        }
    }
}

#[test]
fn obstacle_set_structure() {
    let m = ModelSpec::obstacle(1, 1.0);
    let set = build_set(&m, 10.0).unwrap();
    assert!(!set.entries.is_empty());
    for r in &set.entries {
        assert!(r.s.re <= 0.5);
        assert!((r.s - 0.5).norm() <= 10.0);
        if r.s.im != 0.0 {
            assert_eq!(r.weight, 2, "off-axis entry {} in mode {}", r.s, r.l);
            assert!(set.entries.iter().any(|q| q.l == r.l && q.s == r.s.conj()));
        }
    }
    // sorted by distance from 1/2
    for w in set.entries.windows(2) {
        assert!((w[0].s - 0.5).norm() <= (w[1].s - 0.5).norm());
    }
    // no zeros in the right half disk for any scanned mode
    let right = SearchRegion::new(0.5, 12.5, -12.0, 12.0);
    for l in 0..=set.l_max {
        assert_eq!(winding(&m, l, &right).unwrap(), 0, "l = {l}");
    }
    // counting function: nondecreasing, range-checked
    let mut last = 0;
    for i in 0..=40 {
        let n = count_np(&set, 0.25 * i as f64).unwrap();
        assert!(n >= last);
        last = n;
    }
    assert!(count_np(&set, 10.5).is_err());
    assert_eq!(build_set(&m, 10.0).unwrap(), set);
}

#[test]
fn master_region_audit() {
    let m = ModelSpec::obstacle(1, 1.0);
    let t = 6.0;
    let master = SearchRegion::master(1, t);
    let tol = SearchTolerances::default();
    for l in [0, 3, 6] {
        let w = winding(&m, l, &master).unwrap();
        let zs = find_zeros(&m, l, &master).unwrap();
        let orders: u32 = zs.iter().map(|z| z.1).sum();
        assert_eq!(w, orders as i64, "l = {l}");
        // the symmetric half-box search sees the same zeros in the disk
        let mut full: Vec<C64> = zs.iter().map(|z| z.0).filter(|s| (s - 0.5).norm() <= t).collect();
        let half = mode_resonances(&m, l, t, &tol).unwrap();
        assert_eq!(full.len(), half.len(), "l = {l}");
        for r in &half {
            let i = full.iter().position(|s| (s - r.s).norm() < 1e-8).expect("zero missing from full search");
            full.remove(i);
        }
    }
}

#[test]
fn higher_dimension_obstacle() {
    let m = ModelSpec::obstacle(3, 0.5);
    let set = build_set(&m, 6.0).unwrap();
    for r in &set.entries {
        assert!(r.s.re <= 1.5);
        assert_eq!(r.weight % ((r.l as u64 + 1) * (r.l as u64 + 1)), 0);
    }
    assert!(!set.entries.is_empty());
}

#[test]
fn background_rejected() {
    assert!(build_set(&ModelSpec::background(1), 5.0).is_err());
    assert!(build_set(&ModelSpec::obstacle(1, 1.0), -1.0).is_err());
}

#[test]
fn background_netting() {
    for m in [ModelSpec::step(1.0, 0.0), ModelSpec::transparent(1.0, 1.0)] {
        let set = build_set(&m, 5.0).unwrap();
        assert!(!set.entries.is_empty());
        assert!(net_of_background(&set).is_empty());
    }
    let set = build_set(&ModelSpec::obstacle(1, 1.0), 6.0).unwrap();
    assert_eq!(net_of_background(&set), set.entries);
}
