//! Products `prod_{n >= n0} R(n)^{u_n}` with `R` given in shifted monic form
//! `R(n) = prod_i (n + b_i) / prod_i (n + c_i)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{self, Kernel, Neumaier, ROUNDING_UNIT};
use crate::error::{check_eps, domain, Error, Result};
use crate::thue_morse::tm_sign_f64;
use crate::value::{ulp_of, ValueWithError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalProductSpec {
    pub start_index: u64,
    pub numerator_shifts: Vec<f64>,
    pub denominator_shifts: Vec<f64>,
}

impl RationalProductSpec {
    pub fn new(start_index: u64, numerator_shifts: Vec<f64>, denominator_shifts: Vec<f64>) -> Self {
        Self { start_index, numerator_shifts, denominator_shifts }
    }

    /// `prod_{n >= start} ((n + b) / (n + c))^{u_n}`.
    pub fn single(start_index: u64, b: f64, c: f64) -> Self {
        Self::new(start_index, vec![b], vec![c])
    }

    /// Numerator and denominator shifts matched up by position.
    pub fn factor_pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.numerator_shifts.iter().copied().zip(self.denominator_shifts.iter().copied())
    }

    fn shifts(&self) -> impl Iterator<Item = f64> + '_ {
        self.numerator_shifts.iter().chain(&self.denominator_shifts).copied()
    }

    /// First index from which every factor `n + s` is positive.
    fn positive_from(&self) -> u64 {
        self.shifts()
            .filter(|&s| s <= 0.0)
            .map(|s| (-s).floor() as u64 + 1)
            .fold(self.start_index, u64::max)
    }
}

/// Why a product was rejected by [`check_convergence`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Diagnostic {
    #[error("start index {0} is not 0 or 1")]
    StartIndex(u64),
    #[error("shift {0} is not a finite real")]
    NonFiniteShift(f64),
    #[error("numerator has degree {numerator} but denominator has degree {denominator}")]
    DegreeMismatch { numerator: usize, denominator: usize },
    #[error("numerator factor n + ({shift}) vanishes at n = {n}")]
    ZeroTerm { n: u64, shift: f64 },
    #[error("denominator factor n + ({shift}) vanishes at n = {n}")]
    PoleTerm { n: u64, shift: f64 },
}

/// Convergence gate: equal degrees (monic factors make the leading
/// coefficients equal) and no factor vanishing at an evaluated index.
pub fn check_convergence(spec: &RationalProductSpec) -> std::result::Result<(), Diagnostic> {
    if spec.start_index > 1 {
        return Err(Diagnostic::StartIndex(spec.start_index));
    }
    if let Some(s) = spec.shifts().find(|s| !s.is_finite()) {
        return Err(Diagnostic::NonFiniteShift(s));
    }
    let (p, q) = (spec.numerator_shifts.len(), spec.denominator_shifts.len());
    if p != q {
        return Err(Diagnostic::DegreeMismatch { numerator: p, denominator: q });
    }
    let vanishes_at = |s: f64| {
        (s.fract() == 0.0 && s <= -(spec.start_index as f64)).then(|| (-s) as u64)
    };
    for &shift in &spec.numerator_shifts {
        if let Some(n) = vanishes_at(shift) {
            return Err(Diagnostic::ZeroTerm { n, shift });
        }
    }
    for &shift in &spec.denominator_shifts {
        if let Some(n) = vanishes_at(shift) {
            return Err(Diagnostic::PoleTerm { n, shift });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMethod {
    /// Plain partial sum up to `n_max` with the Abel tail bound. Slow; kept
    /// as an oracle for the other two.
    Direct,
    /// Level-`L` block acceleration.
    Blocked,
    /// Expansion of `log R(n)` in powers of `1/n`, summed through the
    /// Dirichlet sums `sum u_n / n^k`.
    Series,
}

impl fmt::Display for EvalMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalMethod::Direct => "direct",
            EvalMethod::Blocked => "blocked",
            EvalMethod::Series => "series",
        })
    }
}

impl FromStr for EvalMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(EvalMethod::Direct),
            "blocked" => Ok(EvalMethod::Blocked),
            "series" => Ok(EvalMethod::Series),
            other => Err(Error::Config(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub method: EvalMethod,
    pub level: u32,
    pub target_eps: f64,
    /// Block budget for `Blocked`/`Series`, truncation index for `Direct`.
    pub n_max: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            method: EvalMethod::Blocked,
            level: engine::DEFAULT_LEVEL,
            target_eps: 1e-12,
            n_max: engine::DEFAULT_MAX_BLOCKS,
        }
    }
}

impl EvalConfig {
    pub fn with_eps(target_eps: f64) -> Self {
        Self { target_eps, ..Self::default() }
    }

    pub fn direct(n_max: u64) -> Self {
        Self { method: EvalMethod::Direct, n_max, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        check_eps(self.target_eps)?;
        if self.level > engine::MAX_LEVEL {
            return Err(Error::Config(format!("level {} exceeds {}", self.level, engine::MAX_LEVEL)));
        }
        if self.n_max == 0 {
            return Err(Error::Config("n_max must be positive".into()));
        }
        Ok(())
    }
}

/// `log R(n)` split into factor pairs so that each pair is an accurate `ln_1p`.
fn log_ratio(pairs: &[(f64, f64)], n: u64) -> f64 {
    let x = n as f64;
    pairs.iter().map(|&(b, c)| ((b - c) / (x + c)).ln_1p()).sum()
}

/// Signed log-domain contribution of `n` in `[from, to)`, where factors may be negative.
fn head_log(pairs: &[(f64, f64)], from: u64, to: u64) -> (ValueWithError, f64) {
    let mut acc = Neumaier::default();
    let mut mag = 0.0;
    let mut sign = 1.0;
    for n in from..to {
        let x = n as f64;
        for &(b, c) in pairs {
            let term = (x + b).abs().ln() - (x + c).abs().ln();
            acc.add(tm_sign_f64(n) * term);
            mag += (x + b).abs().ln().abs() + (x + c).abs().ln().abs();
            if (x + b) * (x + c) < 0.0 {
                sign = -sign;
            }
        }
    }
    let v = acc.value();
    let mut out = ValueWithError::with_error(v, ROUNDING_UNIT * mag + ulp_of(v));
    out.terms_used = to.saturating_sub(from);
    (out, sign)
}

fn pairs_of(spec: &RationalProductSpec) -> Vec<(f64, f64)> {
    spec.factor_pairs().filter(|(b, c)| b != c).collect()
}

/// Evaluates the product with a certified (or, if the block check fails,
/// estimated) absolute error bound.
pub fn eval_product(spec: &RationalProductSpec, cfg: &EvalConfig) -> Result<ValueWithError> {
    cfg.validate()?;
    check_convergence(spec)?;
    let pairs = pairs_of(spec);
    if pairs.is_empty() {
        return Ok(ValueWithError::exact(1.0));
    }
    let positive_from = spec.positive_from();
    let (head, sign) = head_log(&pairs, spec.start_index, positive_from);
    let kernel = Kernel::new(positive_from, |n| log_ratio(&pairs, n));
    let tail = match cfg.method {
        EvalMethod::Direct => engine::truncated_sum(&kernel, cfg.n_max.max(positive_from))?,
        EvalMethod::Blocked => {
            engine::tm_weighted_sum(&kernel, cfg.level, cfg.target_eps, cfg.n_max)?
        }
        EvalMethod::Series => series_log_sum(&pairs, positive_from, cfg)?,
    };
    Ok(head.add(&tail).exp().scale(sign))
}

/// `log prod_{n >= from} R(n)^{u_n}` via the expansion
/// `log R(n) = sum_k (-1)^{k-1} P_k / (k n^k)` with power sums
/// `P_k = sum_i (b_i^k - c_i^k)`.
///
/// Terms below `n0 = max(from, 2, 2 max|s| + 1)` are summed directly, which
/// keeps the expansion ratio `max|s| / n0` at most one half and lets the
/// tail over `k` be bounded by a geometric series.
fn series_log_sum(pairs: &[(f64, f64)], from: u64, cfg: &EvalConfig) -> Result<ValueWithError> {
    let smax = pairs.iter().flat_map(|&(b, c)| [b.abs(), c.abs()]).fold(0.0, f64::max);
    let n0 = from.max(2).max((2.0 * smax).ceil() as u64 + 1);
    let (head, _) = head_log(pairs, from, n0);

    let ratio = smax / n0 as f64;
    let factors = 2.0 * pairs.len() as f64;
    let tail_after = |k: u32| {
        2.0 * factors * ratio.powi(k as i32 + 1) / ((k + 1) as f64 * (1.0 - ratio))
    };
    let order = (1..=400).find(|&k| tail_after(k) <= cfg.target_eps / 2.0).unwrap_or(400);

    let mut total = ValueWithError::exact(0.0);
    for k in 1..=order {
        let power_sum: f64 = pairs.iter().map(|&(b, c)| b.powi(k as i32) - c.powi(k as i32)).sum();
        if power_sum == 0.0 {
            continue;
        }
        let weight = if k % 2 == 1 { 1.0 } else { -1.0 } * power_sum / k as f64;
        let eps_k = cfg.target_eps / (2.0 * order as f64 * weight.abs().max(1.0));
        let d = crate::dirichlet::inverse_power_sum(k, 1.0, 0.0, n0, eps_k, cfg.level, cfg.n_max)?;
        total = total.add(&d.scale(weight));
    }
    total.abs_error += tail_after(order);
    Ok(head.add(&total))
}

/// `f(b, c) = prod_{n >= 1} ((n + b) / (n + c))^{u_n}`.
pub fn eval_f(b: f64, c: f64, cfg: &EvalConfig) -> Result<ValueWithError> {
    for (name, v) in [("b", b), ("c", c)] {
        if !v.is_finite() {
            return Err(domain(format!("{name} = {v} is not finite")));
        }
        if v.fract() == 0.0 && v <= -1.0 {
            return Err(domain(format!("{name} = {v} is a negative integer")));
        }
    }
    eval_product(&RationalProductSpec::single(1, b, c), cfg)
}

/// The finite product `prod_{n = start}^{last} R(n)^{u_n}`, without any tail.
pub fn partial_product(spec: &RationalProductSpec, last: u64) -> Result<f64> {
    check_convergence(spec)?;
    if last < spec.start_index {
        return Ok(1.0);
    }
    let pairs = pairs_of(spec);
    let (log, sign) = head_log(&pairs, spec.start_index, last + 1);
    Ok(sign * log.value.exp())
}
