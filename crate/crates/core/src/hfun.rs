//! `h(x) = f(x/2, (x+1)/2) = prod_{n >= 1} ((2n + x) / (2n + 1 + x))^{u_n}` on `x > -2`.

use std::io::Write;

use serde::Serialize;

use crate::dirichlet::shifted_sum;
use crate::engine::{self, Kernel};
use crate::error::{domain, Error, Result};
use crate::fmt::sig17;
use crate::product::{eval_f, EvalConfig};
use crate::thue_morse::tm_sign_f64;
use crate::value::ValueWithError;

/// Largest number of rows [`emit_plot_grid`] will produce.
pub const MAX_GRID_ROWS: usize = 10_000_000;

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() && x > -2.0 {
        Ok(())
    } else {
        Err(domain(format!("h is evaluated on x > -2, got {x}")))
    }
}

/// `h(x)`, evaluated through the paired factors `(2n + x) / (2n + 1 + x)`.
pub fn eval_h(x: f64, cfg: &EvalConfig) -> Result<ValueWithError> {
    check_x(x)?;
    eval_f(x / 2.0, (x + 1.0) / 2.0, cfg)
}

/// `h(x)` as `exp(sum_{m >= 2} u_m log(m + x))`, the unpaired series summed
/// in blocks of at least two terms. Independent of [`eval_h`] apart from the
/// engine; the rounding budget is larger because the summands do not decay.
pub fn eval_h_unpaired(x: f64, cfg: &EvalConfig) -> Result<ValueWithError> {
    check_x(x)?;
    cfg.validate()?;
    let kernel = Kernel::new(2, move |m| (m as f64 + x).ln());
    let level = cfg.level.max(1);
    Ok(engine::tm_weighted_sum(&kernel, level, cfg.target_eps, cfg.n_max)?.exp())
}

/// `f(b, c) = ((c + 1) / (b + 1)) h(b) / h(c)`.
pub fn f_from_h(b: f64, c: f64, cfg: &EvalConfig) -> Result<ValueWithError> {
    for (name, v) in [("b", b), ("c", c)] {
        if !(v.is_finite() && v > -1.0) {
            return Err(domain(format!("{name} = {v} must exceed -1")));
        }
    }
    let hb = eval_h(b, cfg)?;
    let hc = eval_h(c, cfg)?;
    Ok(hb.div(&hc).scale((c + 1.0) / (b + 1.0)))
}

/// `h(x) - ((x + 1) / (x + 3/2)) h(x + 1/2) h(2x)`, which vanishes identically.
pub fn fe_residual(x: f64, cfg: &EvalConfig) -> Result<ValueWithError> {
    if !(x.is_finite() && x > -1.0) {
        return Err(domain(format!("functional equation residual needs x > -1, got {x}")));
    }
    let lhs = eval_h(x, cfg)?;
    let rhs = eval_h(x + 0.5, cfg)?.mul(&eval_h(2.0 * x, cfg)?).scale((x + 1.0) / (x + 1.5));
    Ok(lhs.sub(&rhs))
}

/// `k`-th derivative of `log h` at `x`:
/// `(-1)^{k-1} (k-1)! sum_{n >= 2} u_n / (n + x)^k`.
pub fn log_h_derivative(x: f64, k: u32, cfg: &EvalConfig) -> Result<ValueWithError> {
    check_x(x)?;
    if !(1..=30).contains(&k) {
        return Err(domain(format!("derivative order {k} outside 1..=30")));
    }
    cfg.validate()?;
    let factorial: f64 = (1..k).map(f64::from).product();
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    // the sum is scaled by (k-1)!, so ask for proportionally less error
    let s = shifted_sum(k, x, cfg.target_eps / factorial)?;
    Ok(s.scale(sign * factorial))
}

/// `prod_{n=1}^{trunc} ((2n + x) / (2n + 1 + x))^{u_n}` with no tail.
pub fn truncated_h(x: f64, trunc: u64) -> Result<f64> {
    check_x(x)?;
    let mut acc = engine::Neumaier::default();
    for n in 1..=trunc {
        acc.add(tm_sign_f64(n) * (-1.0 / (2.0 * n as f64 + 1.0 + x)).ln_1p());
    }
    Ok(acc.value().exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlotRow {
    pub x: f64,
    pub h: f64,
}

/// Grid `x_min, x_min + step, ..., <= x_max` of truncated products.
pub fn emit_plot_grid(x_min: f64, x_max: f64, step: f64, trunc: u64) -> Result<Vec<PlotRow>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(domain(format!("grid step must be positive, got {step}")));
    }
    check_x(x_min)?;
    if !(x_max.is_finite() && x_max >= x_min) {
        return Err(domain(format!("grid end {x_max} precedes start {x_min}")));
    }
    if trunc == 0 {
        return Err(domain("truncation point must be positive"));
    }
    let span = ((x_max - x_min) / step + 1e-9).floor();
    if span >= MAX_GRID_ROWS as f64 {
        return Err(Error::Resource(format!("grid would have more than {MAX_GRID_ROWS} rows")));
    }
    (0..=span as usize)
        .map(|i| {
            let x = x_min + i as f64 * step;
            Ok(PlotRow { x, h: truncated_h(x, trunc)? })
        })
        .collect()
}

/// CSV with header `x,h`, one row per grid point, 17 significant digits.
pub fn write_plot_csv<W: Write>(rows: &[PlotRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "x,h")?;
    for r in rows {
        writeln!(out, "{},{}", sig17(r.x), sig17(r.h))?;
    }
    Ok(())
}
