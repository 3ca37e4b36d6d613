//! The Thue-Morse sequence in its ±1 form, `u_n = (-1)^{s_2(n)}`.
//!
//! Everything here is a pure function of its arguments. The only state is
//! the table of block sign patterns used by the summation engine, built once
//! per level on first use and read-only afterwards.

use std::sync::OnceLock;

use crate::error::{domain, Error, Result};

/// Largest index accepted by the checked entry points.
pub const MAX_INDEX: u64 = i64::MAX as u64;

/// Largest level `L` for which [`tm_block_signs`] will allocate `2^L` signs.
pub const MAX_BLOCK_LEVEL: u32 = 30;

/// Levels up to this one are cached for the summation engine.
pub const MAX_CACHED_LEVEL: u32 = 10;

/// Number of ones in the binary expansion of `n`.
#[inline]
pub fn digit_sum(n: u64) -> u32 {
    n.count_ones()
}

/// `u_n`, as `+1` or `-1`.
#[inline]
pub fn tm_sign(n: u64) -> i8 {
    debug_assert!(n <= MAX_INDEX, "Thue-Morse index {n} out of range");
    1 - 2 * (n.count_ones() & 1) as i8
}

#[inline]
pub(crate) fn tm_sign_f64(n: u64) -> f64 {
    if n.count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A single term of the sequence together with its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TmWeight {
    index: u64,
    sign: i8,
}

impl TmWeight {
    /// Rejects indices above [`MAX_INDEX`] instead of wrapping.
    pub fn at(index: u64) -> Result<Self> {
        if index > MAX_INDEX {
            return Err(domain(format!("index {index} exceeds 2^63 - 1")));
        }
        Ok(Self { index, sign: tm_sign(index) })
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }
}

/// `U_N = u_1 + ... + u_N` for `N >= 1`.
///
/// Consecutive pairs `(u_{2k}, u_{2k+1})` cancel, so `u_0 + ... + u_N` is `0`
/// for odd `N` and `u_N` for even `N`. Subtracting `u_0 = 1` gives the result
/// in constant time; it always lies in `{-2, -1, 0}` with the parity of `N`.
pub fn tm_prefix_sum(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(domain("prefix sums start at N = 1"));
    }
    if n > MAX_INDEX {
        return Err(domain(format!("index {n} exceeds 2^63 - 1")));
    }
    let through_n = if n % 2 == 1 { 0 } else { i64::from(tm_sign(n)) };
    Ok(through_n - 1)
}

/// `(u_0, ..., u_{2^L - 1})`.
///
/// Satisfies `u_{2^L n + j} = u_n u_j` for `0 <= j < 2^L`, which is what lets
/// the engine regroup a sum into blocks of length `2^L`.
pub fn tm_block_signs(level: u32) -> Result<Vec<i8>> {
    if level > MAX_BLOCK_LEVEL {
        return Err(Error::Resource(format!(
            "block level {level} exceeds the maximum of {MAX_BLOCK_LEVEL}"
        )));
    }
    if level <= MAX_CACHED_LEVEL {
        return Ok(block_signs(level).to_vec());
    }
    let len = 1usize << level;
    let mut out = Vec::new();
    out.try_reserve_exact(len)
        .map_err(|e| Error::Resource(format!("cannot allocate {len} signs: {e}")))?;
    out.push(1i8);
    while out.len() < len {
        let half = out.len();
        for j in 0..half {
            let s = out[j];
            out.push(-s);
        }
    }
    Ok(out)
}

static BLOCK_CACHE: [OnceLock<Box<[i8]>>; (MAX_CACHED_LEVEL + 1) as usize] =
    [const { OnceLock::new() }; (MAX_CACHED_LEVEL + 1) as usize];

/// Cached block pattern for `level <= MAX_CACHED_LEVEL`.
pub(crate) fn block_signs(level: u32) -> &'static [i8] {
    assert!(level <= MAX_CACHED_LEVEL);
    BLOCK_CACHE[level as usize].get_or_init(|| {
        let mut v = vec![1i8];
        for _ in 0..level {
            let neg: Vec<i8> = v.iter().map(|s| -s).collect();
            v.extend(neg);
        }
        v.into_boxed_slice()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_prefix(n: u64) -> i64 {
        (1..=n).map(|k| i64::from(tm_sign(k))).sum()
    }

    #[test]
    fn digit_sums() {
        assert_eq!(digit_sum(0), 0);
        assert_eq!(digit_sum(3), 2);
        assert_eq!(digit_sum(11), 3);
    }

    #[test]
    fn signs() {
        assert_eq!(tm_sign(0), 1);
        assert_eq!(tm_sign(1), -1);
        assert_eq!(tm_sign(6), 1);
        // 6 = 2*3, 3 = 2*1 + 1: u_6 = u_3 = -u_1 = 1
        assert_eq!(tm_sign(6), -tm_sign(1));
    }

    #[test]
    fn prefix_sums_small() {
        assert_eq!(tm_prefix_sum(1).unwrap(), -1);
        assert_eq!(tm_prefix_sum(2).unwrap(), -2);
        assert_eq!(tm_prefix_sum(4).unwrap(), -2);
        assert!(tm_prefix_sum(0).is_err());
        for n in 1..5000 {
            assert_eq!(tm_prefix_sum(n).unwrap(), brute_prefix(n), "N = {n}");
        }
    }

    #[test]
    fn index_range_is_checked() {
        assert!(TmWeight::at(MAX_INDEX).is_ok());
        assert!(TmWeight::at(MAX_INDEX + 1).is_err());
        assert!(tm_prefix_sum(u64::MAX).is_err());
        assert_eq!(TmWeight::at(7).unwrap().sign(), -1);
    }

    #[test]
    fn block_patterns() {
        assert_eq!(tm_block_signs(0).unwrap(), vec![1]);
        assert_eq!(tm_block_signs(1).unwrap(), vec![1, -1]);
        assert_eq!(tm_block_signs(2).unwrap(), vec![1, -1, -1, 1]);
        assert!(matches!(tm_block_signs(31), Err(Error::Resource(_))));
        let big = tm_block_signs(12).unwrap();
        for (j, s) in big.iter().enumerate() {
            assert_eq!(*s, tm_sign(j as u64));
        }
    }

    #[test]
    fn doubling_structure() {
        for level in 0..MAX_CACHED_LEVEL {
            let a = tm_block_signs(level).unwrap();
            let b = tm_block_signs(level + 1).unwrap();
            let neg: Vec<i8> = a.iter().map(|s| -s).collect();
            assert_eq!(&b[..a.len()], &a[..]);
            assert_eq!(&b[a.len()..], &neg[..]);
        }
    }

    #[test]
    fn block_factorisation() {
        for level in 0..=6u32 {
            let signs = block_signs(level);
            let w = 1u64 << level;
            for n in 0..200u64 {
                for j in 0..w {
                    assert_eq!(tm_sign(w * n + j), tm_sign(n) * signs[j as usize]);
                }
            }
        }
    }
}
