use tmprod_core::{abel_tail_bound, tm_sign, tm_weighted_sum, truncated_sum, Kernel};

fn brute(g: impl Fn(u64) -> f64, from: u64, to: u64) -> f64 {
    // pairwise-free Kahan sum; the oracle must not share code with the engine
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for n in from..=to {
        let y = f64::from(tm_sign(n)) * g(n) - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
    }
    s
}

#[test]
fn inverse_squares_against_long_brute_force() {
    // brute force to 1e8 plus an Abel tail of 2/(1e8+1+a)^2 < 2e-16
    for a in [0.0, 0.5] {
        let g = move |n: u64| (n as f64 + a).powi(-2);
        let oracle = brute(g, 1, 100_000_000);
        let k = Kernel::new(1, g);
        let v = tm_weighted_sum(&k, 3, 1e-13, 1 << 26).unwrap();
        assert!(v.certified);
        assert!((v.value - oracle).abs() <= v.abs_error + 1e-14, "a = {a}: {v:?} vs {oracle}");
    }
}

#[test]
fn shifted_start_against_brute_force() {
    let g = |n: u64| ((n + 1) as f64).powi(-2);
    let oracle = brute(g, 2, 10_000_000);
    let tail = 2.0 * g(10_000_001);
    let v = tm_weighted_sum(&Kernel::new(2, g), 3, 1e-12, 1 << 26).unwrap();
    assert!((v.value - oracle).abs() <= v.abs_error + tail + 1e-15);
}

#[test]
fn levels_agree() {
    let g = |n: u64| 1.0 / (n as f64 + 0.25);
    let k = Kernel::new(1, g);
    let results: Vec<_> = (0..=3).map(|l| tm_weighted_sum(&k, l, 1e-9, 1 << 26).unwrap()).collect();
    for (l, r) in results.iter().enumerate() {
        assert_eq!(r.level, l as u32);
        for s in &results {
            assert!((r.value - s.value).abs() <= r.abs_error + s.abs_error);
        }
    }
    // higher levels reach the same tolerance with far fewer terms
    assert!(results[3].terms_used * 100 < results[0].terms_used);
}

#[test]
fn conditionally_convergent_log_kernel() {
    // Woods-Robbins with the n = 0 factor (1/2) removed: log(1/sqrt2) - log(1/2)
    let g = |n: u64| (-1.0 / (2.0 * n as f64 + 2.0)).ln_1p();
    let v = tm_weighted_sum(&Kernel::new(1, g), 3, 1e-12, 1 << 26).unwrap();
    let expected = 0.5 * std::f64::consts::LN_2;
    assert!(v.certified);
    assert!(v.abs_error <= 1e-12);
    assert!((v.value - expected).abs() <= v.abs_error, "{v:?}");
}

#[test]
fn direct_method_tail_is_sound() {
    let g = |n: u64| 1.0 / (n as f64 + 2.0);
    let k = Kernel::new(1, g);
    let bound = abel_tail_bound(&k, 1_000_000).unwrap();
    let direct = truncated_sum(&k, 1_000_000).unwrap();
    let blocked = tm_weighted_sum(&k, 4, 1e-13, 1 << 26).unwrap();
    assert!(direct.certified && direct.abs_error >= bound);
    assert!((direct.value - blocked.value).abs() <= direct.abs_error + blocked.abs_error);
    // the actual truncation error is well inside the bound
    assert!((direct.value - blocked.value).abs() < bound);
}
