//! Dirichlet-type sums `S_k(a) = sum_{n >= 2} u_n / (n + a)^k`, the Taylor
//! expansion of `log h` they generate, and four series for `h(0)`.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::{self, Kernel, DEFAULT_LEVEL, DEFAULT_MAX_BLOCKS};
use crate::error::{check_eps, domain, Error, Result};
use crate::value::{ulp_of, ValueWithError};

/// Rough value of `h(0)`, good to the five decimals it carries.
pub const H0_APPROX: f64 = 1.62816;

pub const MAX_TAYLOR_ORDER: u32 = 60;

/// `sum_{n >= start} u_n (mul n + add)^{-k}`.
///
/// Conditionally convergent `k = 1` sums always get at least level 2.
pub(crate) fn inverse_power_sum(
    k: u32,
    mul: f64,
    add: f64,
    start: u64,
    eps: f64,
    level: u32,
    max_blocks: u64,
) -> Result<ValueWithError> {
    if k == 0 {
        return Err(domain("exponent k must be at least 1"));
    }
    if mul * start as f64 + add <= 0.0 {
        return Err(domain(format!("base {mul} n + {add} is not positive at n = {start}")));
    }
    let exponent = -i32::try_from(k).map_err(|_| domain("exponent too large"))?;
    let kernel = Kernel::new(start, move |n| (mul * n as f64 + add).powi(exponent));
    let level = if k == 1 { level.max(2) } else { level.max(1) };
    engine::tm_weighted_sum(&kernel, level, eps, max_blocks)
}

/// `S_k(a) = sum_{n >= 2} u_n / (n + a)^k` for `a >= 0`.
///
/// Summation by parts gives `|S_k(a)| <= 2 / (2 + a)^k`.
pub fn dirichlet_s(k: u32, a: f64, eps: f64) -> Result<ValueWithError> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(domain(format!("shift a = {a} must be a non-negative real")));
    }
    shifted_sum(k, a, eps)
}

/// Same sum as [`dirichlet_s`] for any shift `x > -2`.
pub(crate) fn shifted_sum(k: u32, x: f64, eps: f64) -> Result<ValueWithError> {
    check_eps(eps)?;
    if !(x.is_finite() && x > -2.0) {
        return Err(domain(format!("shift {x} must exceed -2")));
    }
    inverse_power_sum(k, 1.0, x, 2, eps, DEFAULT_LEVEL, DEFAULT_MAX_BLOCKS)
}

/// `sum_{n >= 2} u_{2n+1} / (2n+1)^k`, computed as `-sum_{n >= 2} u_n / (2n+1)^k`.
pub fn odd_index_sum(k: u32, eps: f64) -> Result<ValueWithError> {
    check_eps(eps)?;
    Ok(inverse_power_sum(k, 2.0, 1.0, 2, eps, DEFAULT_LEVEL, DEFAULT_MAX_BLOCKS)?.scale(-1.0))
}

/// `sum_{n >= 2} u_{2n} / (2n)^k`, computed as `sum_{n >= 2} u_n / (2n)^k`.
pub fn even_index_sum(k: u32, eps: f64) -> Result<ValueWithError> {
    check_eps(eps)?;
    inverse_power_sum(k, 2.0, 0.0, 2, eps, DEFAULT_LEVEL, DEFAULT_MAX_BLOCKS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesVariant {
    /// `sum_{n >= 0} u_n / (n + 1)^k`
    Shifted,
    /// `sum_{n >= 1} u_n / n^k`
    Plain,
}

impl fmt::Display for SeriesVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesVariant::Shifted => "shifted",
            SeriesVariant::Plain => "plain",
        })
    }
}

impl FromStr for SeriesVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shifted" => Ok(SeriesVariant::Shifted),
            "plain" => Ok(SeriesVariant::Plain),
            other => Err(Error::Config(format!("unknown series variant {other:?}"))),
        }
    }
}

/// The two Thue-Morse Dirichlet series of Allouche and Cohen.
pub fn allouche_cohen_series(variant: SeriesVariant, k: u32, eps: f64) -> Result<ValueWithError> {
    check_eps(eps)?;
    match variant {
        SeriesVariant::Shifted => {
            inverse_power_sum(k, 1.0, 1.0, 0, eps, DEFAULT_LEVEL, DEFAULT_MAX_BLOCKS)
        }
        SeriesVariant::Plain => {
            inverse_power_sum(k, 1.0, 0.0, 1, eps, DEFAULT_LEVEL, DEFAULT_MAX_BLOCKS)
        }
    }
}

/// `log h(x) = log h(a) + sum_k c_k (x - a)^k` with `c_k = (-1)^{k-1} S_k(a) / k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorSeries {
    pub anchor: f64,
    pub log_h_anchor: f64,
    /// `c_1, ..., c_K`.
    pub coefficients: Vec<f64>,
    pub coefficient_errors: Vec<f64>,
    pub radius: f64,
}

/// Bound on `sum_{k > order} 2 q^k / k` for `q < 1`.
fn geometric_tail(q: f64, order: u32) -> f64 {
    if q >= 1.0 {
        return f64::INFINITY;
    }
    2.0 * q.powi(order as i32 + 1) / ((order + 1) as f64 * (1.0 - q))
}

fn smallest_order(q: f64, eps: f64, cap: u32) -> u32 {
    (1..=cap).find(|&k| geometric_tail(q, k) <= eps).unwrap_or(cap)
}

impl TaylorSeries {
    pub fn order(&self) -> u32 {
        self.coefficients.len() as u32
    }

    /// Bound on the omitted terms at distance `r` from the anchor, from
    /// `|c_k| <= 2 / (k (2 + a)^k)`.
    pub fn truncation_bound(&self, r: f64) -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        geometric_tail(r / (2.0 + self.anchor), self.order())
    }

    /// `k`-th derivative of `log h` at the anchor, `k! c_k`.
    pub fn derivative(&self, k: u32) -> Option<f64> {
        let c = *self.coefficients.get(k.checked_sub(1)? as usize)?;
        Some((1..=k).map(f64::from).product::<f64>() * c)
    }

    /// `log h(x)` for `|x - a| <= radius`.
    pub fn evaluate(&self, x: f64) -> Result<ValueWithError> {
        let d = x - self.anchor;
        let r = d.abs();
        if r.is_nan() || r > self.radius {
            return Err(domain(format!(
                "x = {x} lies outside [{} - {r}, {} + {r}]",
                self.anchor,
                self.anchor,
                r = self.radius
            )));
        }
        let mut poly = 0.0;
        for c in self.coefficients.iter().rev() {
            poly = (poly + c) * d;
        }
        let mut err = self.truncation_bound(r);
        let mut scale = 0.0;
        let mut rk = 1.0;
        for (c, e) in self.coefficients.iter().zip(&self.coefficient_errors) {
            rk *= r;
            err += e * rk;
            scale += c.abs() * rk;
        }
        let value = self.log_h_anchor + poly;
        err += 2.0 * self.order() as f64 * f64::EPSILON * scale + ulp_of(value);
        Ok(ValueWithError::with_error(value, err))
    }
}

/// Smallest order whose truncation bound at distance `r` is below `eps / 2`.
pub fn taylor_order_for(a: f64, r: f64, eps: f64) -> u32 {
    smallest_order(r / (2.0 + a), eps / 2.0, MAX_TAYLOR_ORDER)
}

/// Taylor coefficients of `log h` about `a`, each sum computed to `eps / (2 order)`.
pub fn taylor_log_h(a: f64, log_h_anchor: f64, order: u32, eps: f64) -> Result<TaylorSeries> {
    check_eps(eps)?;
    if !(a.is_finite() && a >= 0.0) {
        return Err(domain(format!("anchor a = {a} must be non-negative")));
    }
    if order == 0 || order > MAX_TAYLOR_ORDER {
        return Err(domain(format!("order {order} outside 1..={MAX_TAYLOR_ORDER}")));
    }
    let eps_k = eps / (2.0 * f64::from(order));
    let mut coefficients = Vec::with_capacity(order as usize);
    let mut coefficient_errors = Vec::with_capacity(order as usize);
    for k in 1..=order {
        let s = dirichlet_s(k, a, eps_k)?;
        let w = if k % 2 == 1 { 1.0 } else { -1.0 } / f64::from(k);
        let c = s.scale(w);
        coefficients.push(c.value);
        coefficient_errors.push(c.abs_error);
    }
    Ok(TaylorSeries { anchor: a, log_h_anchor, coefficients, coefficient_errors, radius: 1.0 })
}

/// `sum_{k >= 1} t_k` where `|t_k| <= 2 q^k / k`; `term(k, eps_k)` returns `t_k`.
fn log_series(
    q: f64,
    eps: f64,
    mut term: impl FnMut(u32, f64) -> Result<ValueWithError>,
) -> Result<ValueWithError> {
    let order = smallest_order(q, eps / 2.0, 200);
    let eps_k = eps / (2.0 * f64::from(order));
    let mut total = ValueWithError::exact(0.0);
    for k in 1..=order {
        total = total.add(&term(k, eps_k)?);
    }
    total.abs_error += geometric_tail(q, order);
    Ok(total)
}

fn alternating(k: u32) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Four independent series for `h(0)`, from the Taylor expansion of `log h`
/// between the closed-form points `h(1/2) = 3/2` and `h(1) = sqrt 2`:
///
/// 1. about `a = 1` at `x = 0`: `sqrt2 exp(-sum_k S_k(1) / k)`
/// 2. about `a = 0` at `x = 1`: `sqrt2 exp(sum_k (-1)^k S_k(0) / k)`
/// 3. about `a = 1/2` at `x = 0`: `3/2 exp(sum_k sum_{n>=2} u_{2n+1} (2n+1)^{-k} / k)`
/// 4. about `a = 0` at `x = 1/2`: `3/2 exp(sum_k (-1)^k sum_{n>=2} u_{2n} (2n)^{-k} / k)`
pub fn h0_four_ways(eps: f64) -> Result<[ValueWithError; 4]> {
    check_eps(eps)?;
    // each log-series error is pushed through exp with a prefactor below 3
    let log_eps = eps / 4.0;
    let routes = [
        (SQRT_2, log_series(1.0 / 3.0, log_eps, |k, e| Ok(dirichlet_s(k, 1.0, e)?.scale(-1.0 / f64::from(k))))?),
        (SQRT_2, log_series(0.5, log_eps, |k, e| Ok(dirichlet_s(k, 0.0, e)?.scale(alternating(k) / f64::from(k))))?),
        (1.5, log_series(0.2, log_eps, |k, e| Ok(odd_index_sum(k, e)?.scale(1.0 / f64::from(k))))?),
        (1.5, log_series(0.25, log_eps, |k, e| Ok(even_index_sum(k, e)?.scale(alternating(k) / f64::from(k))))?),
    ];
    Ok(routes.map(|(pre, log)| log.exp().scale(pre)))
}
