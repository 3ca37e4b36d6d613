use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::SQRT_2;
use tmprod_core::{
    emit_plot_grid, eval_h, eval_h_unpaired, fe_residual, log_h_derivative, EvalConfig,
    ValueWithError,
};

fn cfg() -> EvalConfig {
    EvalConfig::with_eps(1e-11)
}

fn separated(a: &ValueWithError, b: &ValueWithError) -> bool {
    (a.value - b.value).abs() > a.abs_error + b.abs_error
}

#[test]
fn bounds_on_grid() {
    let n = 500;
    for i in 0..n {
        let x = -1.99 + (10.0 + 1.99) * f64::from(i) / f64::from(n);
        let h = eval_h(x, &cfg()).unwrap();
        let upper = ((x + 3.0) / (x + 2.0)).powi(2);
        assert!(h.upper() > 1.0 && h.lower() < upper, "x = {x}: {h:?}");
    }
}

#[test]
fn monotone_composites() {
    let xs: Vec<f64> = (1..=220).map(|i| -1.0 + 0.05 * f64::from(i)).collect();
    let hs: Vec<_> = xs.iter().map(|&x| eval_h(x, &cfg()).unwrap()).collect();
    let mut checked = 0;
    for i in 1..xs.len() {
        let (x0, x1) = (xs[i - 1], xs[i]);
        let down = [hs[i - 1].scale(1.0 / (x0 + 1.0)), hs[i].scale(1.0 / (x1 + 1.0))];
        let up = [hs[i - 1].scale(x0 + 1.0), hs[i].scale(x1 + 1.0)];
        if separated(&down[0], &down[1]) {
            assert!(down[0].value > down[1].value, "h/(x+1) rises at {x1}");
            checked += 1;
        }
        if separated(&up[0], &up[1]) {
            assert!(up[0].value < up[1].value, "h(x+1) falls at {x1}");
            checked += 1;
        }
    }
    assert!(checked > 400);
}

#[test]
fn functional_equation() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let mut xs = vec![0.0, 0.25, 0.5, 1.0, 1.5];
    xs.extend((0..20).map(|_| r.random_range(-0.9..5.0)));
    for x in xs {
        let res = fe_residual(x, &cfg()).unwrap();
        assert!(res.value.abs() <= res.abs_error, "x = {x}: {res:?}");
        assert!(res.abs_error < 1e-9);
    }
}

#[test]
fn pairing_equivalence() {
    for x in [-1.5, -0.5, 0.0, 0.5, 1.0, 2.5, 7.0] {
        let paired = eval_h(x, &cfg()).unwrap();
        let unpaired = eval_h_unpaired(x, &EvalConfig::with_eps(1e-9)).unwrap();
        assert!(!separated(&paired, &unpaired), "x = {x}: {paired:?} {unpaired:?}");
    }
}

#[test]
fn closed_form_points() {
    let h = |x| eval_h(x, &cfg()).unwrap();
    assert!(h(0.5).contains(1.5, 0.0));
    assert!(h(1.0).contains(SQRT_2, 0.0));
    // h(-1/2) = f(-1/2, 1/2) / 2
    let lhs = h(-0.5);
    let rhs = tmprod_core::eval_f(-0.5, 0.5, &cfg()).unwrap().scale(0.5);
    assert!(!separated(&lhs, &rhs));
}

#[test]
fn derivatives_against_finite_differences() {
    let step = 1e-5;
    let tight = EvalConfig::with_eps(1e-14);
    let log_h = |x: f64| eval_h(x, &tight).unwrap().value.ln();
    for x in [0.0, 0.5, 1.0, 2.0] {
        let d1 = log_h_derivative(x, 1, &tight).unwrap().value;
        let fd1 = (log_h(x + step) - log_h(x - step)) / (2.0 * step);
        assert!(((d1 - fd1) / d1).abs() < 1e-6, "k=1 x={x}: {d1} {fd1}");

        let d2 = log_h_derivative(x, 2, &tight).unwrap().value;
        let d1p = log_h_derivative(x + step, 1, &tight).unwrap().value;
        let d1m = log_h_derivative(x - step, 1, &tight).unwrap().value;
        let fd2 = (d1p - d1m) / (2.0 * step);
        assert!(((d2 - fd2) / d2).abs() < 1e-6, "k=2 x={x}: {d2} {fd2}");
    }
}

#[test]
fn truncated_grid_brackets() {
    let rows = emit_plot_grid(-1.5, 4.0, 0.01, 100).unwrap();
    assert_eq!(rows.len(), 551);
    for row in &rows {
        // truncation after n = 100 moves log h by at most 2 |log(1 - 1/(203 + x))|
        let slack = (-2.0 * (-1.0 / (203.0 + row.x)).ln_1p()).exp();
        let upper = ((row.x + 3.0) / (row.x + 2.0)).powi(2);
        assert!(row.h * slack > 1.0 && row.h / slack < upper, "{row:?}");
    }
    assert!(emit_plot_grid(-3.0, 4.0, 0.01, 100).is_err());
    assert_eq!(emit_plot_grid(0.0, 0.0, 0.01, 100).unwrap().len(), 1);
}
