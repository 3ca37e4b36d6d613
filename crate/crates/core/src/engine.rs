//! Thue-Morse weighted summation `S = sum_{n >= start} u_n g(n)`.
//!
//! At level `L` the sum is regrouped into blocks of length `2^L`:
//!
//! ```text
//! S = head + sum_{m >= m0} u_m K_L(m),   K_L(m) = sum_{j < 2^L} u_j g(2^L m + j)
//! ```
//!
//! using `u_{2^L m + j} = u_m u_j`. The first `L` moments of the block signs
//! vanish, so `K_L` decays `L` powers of `m` faster than `g`. Because the
//! prefix sums of `u` stay in `{-2, -1, 0}`, summation by parts bounds the
//! tail after block `M - 1` by `2 |K_L(M)|` whenever `K_L` keeps one sign
//! and decreases in magnitude from `M` on. That property is checked on
//! sampled blocks; when the check fails the engine falls back to a
//! doubling-difference estimate and marks the result uncertified.

use crate::error::{check_eps, domain, Error, Result};
use crate::thue_morse::{block_signs, tm_sign_f64, MAX_INDEX};
use crate::value::{ulp_of, ValueWithError};

pub const DEFAULT_LEVEL: u32 = 3;
pub const MAX_LEVEL: u32 = 10;
pub const DEFAULT_MAX_BLOCKS: u64 = 1 << 26;

/// Relative error charged per evaluated summand in the rounding budget.
pub const ROUNDING_UNIT: f64 = 1.0 / (1u64 << 50) as f64;

/// Summand of a Thue-Morse weighted series.
///
/// `monotone_from` is the caller's promise that `g` has constant sign and
/// non-increasing magnitude from that index on. Blocked summation only relies
/// on it to place the first block; the block kernel is checked separately.
pub struct Kernel<F> {
    eval: F,
    start: u64,
    monotone_from: u64,
}

impl<F: Fn(u64) -> f64> Kernel<F> {
    pub fn new(start: u64, eval: F) -> Self {
        Self { eval, start, monotone_from: start }
    }

    pub fn with_monotone_from(mut self, n: u64) -> Self {
        self.monotone_from = n;
        self
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn monotone_from(&self) -> u64 {
        self.monotone_from
    }

    /// Evaluates `g(n)`, rejecting non-finite output.
    pub fn eval(&self, n: u64) -> Result<f64> {
        let v = (self.eval)(n);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { index: n })
        }
    }
}

/// Neumaier's variant of compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `2 |g(N + 1)|`, the summation-by-parts bound on `|sum_{n > N} u_n g(n)|`.
pub fn abel_tail_bound<F: Fn(u64) -> f64>(g: &Kernel<F>, n: u64) -> Result<f64> {
    if n < g.monotone_from {
        return Err(domain(format!(
            "tail bound at N = {n} requested before the kernel is monotone (from {})",
            g.monotone_from
        )));
    }
    if n >= MAX_INDEX {
        return Err(Error::Resource(format!("index {n} out of range")));
    }
    Ok(2.0 * g.eval(n + 1)?.abs())
}

struct Blocks<'a, F> {
    g: &'a Kernel<F>,
    signs: &'static [i8],
    width: u64,
}

impl<'a, F: Fn(u64) -> f64> Blocks<'a, F> {
    fn new(g: &'a Kernel<F>, level: u32) -> Self {
        Self { g, signs: block_signs(level), width: 1u64 << level }
    }

    fn last_block(&self) -> u64 {
        MAX_INDEX / self.width - 1
    }

    /// `(K_L(m), sum_j |g(2^L m + j)|)`.
    fn value(&self, m: u64) -> Result<(f64, f64)> {
        if m > self.last_block() {
            return Err(Error::Resource(format!("block {m} exceeds the index range")));
        }
        let base = m * self.width;
        let mut acc = Neumaier::default();
        let mut mag = 0.0;
        for (j, &s) in self.signs.iter().enumerate() {
            let v = self.g.eval(base + j as u64)?;
            acc.add(if s > 0 { v } else { -v });
            mag += v.abs();
        }
        Ok((acc.value(), mag))
    }

    /// Sampled check that `K_L` keeps one sign and does not grow on `[from, 64 from]`.
    ///
    /// Samples whose magnitude is below their own rounding noise carry no
    /// sign information and are skipped.
    fn tail_is_monotone(&self, from: u64) -> Result<bool> {
        const SAMPLES: usize = 64;
        let top = from.saturating_mul(SAMPLES as u64).min(self.last_block());
        let mut idx: Vec<u64> = (from..from.saturating_add(4)).filter(|&m| m <= top).collect();
        let ratio = (top.max(from) as f64 / from.max(1) as f64).ln() / (SAMPLES - 1) as f64;
        for i in 1..SAMPLES {
            let m = (from.max(1) as f64 * (ratio * i as f64).exp()).round() as u64;
            idx.push(m.clamp(from, top.max(from)));
        }
        idx.sort_unstable();
        idx.dedup();

        let mut sign = 0.0;
        let (mut prev, mut prev_noise) = (f64::INFINITY, 0.0);
        for m in idx {
            let (k, mag) = self.value(m)?;
            let noise = ROUNDING_UNIT * mag;
            if k.abs() <= noise {
                continue;
            }
            if sign == 0.0 {
                sign = k.signum();
            } else if k.signum() != sign {
                return Ok(false);
            }
            if k.abs() > prev + prev_noise + noise {
                return Ok(false);
            }
            prev = k.abs();
            prev_noise = noise;
        }
        Ok(true)
    }
}

/// Accelerated evaluation of `sum_{n >= start} u_n g(n)`.
///
/// Terms before the first full block are added one by one. Blocks are summed
/// in ascending order until `2 (|K_L(m)| + noise)` drops below `target_eps`,
/// or `K_L(m)` sinks into its own rounding noise, or `max_blocks` blocks have
/// been added. The reported error adds `ROUNDING_UNIT` times the total
/// magnitude of every evaluated summand.
pub fn tm_weighted_sum<F: Fn(u64) -> f64>(
    g: &Kernel<F>,
    level: u32,
    target_eps: f64,
    max_blocks: u64,
) -> Result<ValueWithError> {
    if level > MAX_LEVEL {
        return Err(Error::Config(format!("level {level} exceeds {MAX_LEVEL}")));
    }
    check_eps(target_eps)?;
    if max_blocks == 0 {
        return Err(Error::Config("block budget must be at least 1".into()));
    }
    let blocks = Blocks::new(g, level);
    let width = blocks.width;
    let first = g.start.max(g.monotone_from);
    let m_start = first.div_ceil(width).max(1);
    if m_start > blocks.last_block() {
        return Err(Error::Resource(format!("start index {first} out of range")));
    }

    let mut acc = Neumaier::default();
    let mut mag = 0.0;
    let mut terms = 0u64;
    for n in g.start..m_start * width {
        let v = g.eval(n)?;
        acc.add(tm_sign_f64(n) * v);
        mag += v.abs();
        terms += 1;
    }

    let limit = m_start.saturating_add(max_blocks).min(blocks.last_block());
    let mut m = m_start;
    let mut budget_exceeded = false;
    let (tail_k, tail_noise) = loop {
        let (k, kmag) = blocks.value(m)?;
        let noise = ROUNDING_UNIT * kmag;
        if 2.0 * (k.abs() + noise) <= target_eps || k.abs() <= noise {
            break (k, noise);
        }
        if m >= limit {
            budget_exceeded = true;
            break (k, noise);
        }
        acc.add(tm_sign_f64(m) * k);
        mag += kmag;
        terms += width;
        m += 1;
    };

    let (tail_err, certified) = if blocks.tail_is_monotone(m)? {
        (2.0 * (tail_k.abs() + tail_noise), true)
    } else {
        let mut prev = acc.value();
        let mut checkpoint = m.saturating_mul(2).max(m + 1);
        let est = loop {
            while m < checkpoint {
                if m >= limit {
                    budget_exceeded = true;
                    break;
                }
                let (k, kmag) = blocks.value(m)?;
                acc.add(tm_sign_f64(m) * k);
                mag += kmag;
                terms += width;
                m += 1;
            }
            let cur = acc.value();
            let diff = (cur - prev).abs();
            if diff <= target_eps || budget_exceeded {
                break diff;
            }
            prev = cur;
            checkpoint = checkpoint.saturating_mul(2);
        };
        (est, false)
    };

    let value = acc.value();
    Ok(ValueWithError {
        value,
        abs_error: tail_err + ROUNDING_UNIT * mag + ulp_of(value),
        terms_used: terms,
        level,
        certified,
        budget_exceeded,
    })
}

/// Direct partial sum `sum_{n = start}^{last} u_n g(n)` with the Abel bound on
/// the omitted tail.
///
/// The bound is certified when `last >= monotone_from` and sampled values of
/// `g` past `last` confirm it; otherwise the error is the difference between
/// the partial sums at `last` and at the midpoint.
pub fn truncated_sum<F: Fn(u64) -> f64>(g: &Kernel<F>, last: u64) -> Result<ValueWithError> {
    if last < g.start {
        return Err(domain(format!("truncation point {last} precedes the start index {}", g.start)));
    }
    if last >= MAX_INDEX / 64 {
        return Err(Error::Resource(format!("truncation point {last} out of range")));
    }
    let mid_at = g.start + (last - g.start) / 2;
    let mut acc = Neumaier::default();
    let mut mag = 0.0;
    let mut mid = 0.0;
    for n in g.start..=last {
        let v = g.eval(n)?;
        acc.add(tm_sign_f64(n) * v);
        mag += v.abs();
        if n == mid_at {
            mid = acc.value();
        }
    }
    let value = acc.value();
    let blocks = Blocks::new(g, 0);
    let certified = last >= g.monotone_from && blocks.tail_is_monotone(last + 1)?;
    let next = g.eval(last + 1)?.abs();
    let tail = if certified {
        2.0 * (next + ROUNDING_UNIT * next)
    } else {
        (value - mid).abs()
    };
    Ok(ValueWithError {
        value,
        abs_error: tail + ROUNDING_UNIT * mag + ulp_of(value),
        terms_used: last - g.start + 1,
        level: 0,
        certified,
        budget_exceeded: false,
    })
}
