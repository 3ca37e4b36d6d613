use serde::{Deserialize, Serialize};

/// A computed real together with an absolute error bound.
///
/// `certified` means the bound is rigorous: an Abel tail bound plus a
/// worst-case rounding budget. Otherwise it is a doubling-difference estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueWithError {
    pub value: f64,
    pub abs_error: f64,
    /// Number of summand evaluations that went into `value`.
    pub terms_used: u64,
    /// Block level of the summation that produced the value (the largest one
    /// when several results were combined).
    pub level: u32,
    pub certified: bool,
    /// The summation hit its block budget before reaching the requested tolerance.
    pub budget_exceeded: bool,
}

impl ValueWithError {
    /// An exactly known value.
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            abs_error: 0.0,
            terms_used: 0,
            level: 0,
            certified: true,
            budget_exceeded: false,
        }
    }

    pub fn with_error(value: f64, abs_error: f64) -> Self {
        Self { abs_error, ..Self::exact(value) }
    }

    pub fn lower(&self) -> f64 {
        self.value - self.abs_error
    }

    pub fn upper(&self) -> f64 {
        self.value + self.abs_error
    }

    /// True when `target` lies within the error bound plus `slack`.
    pub fn contains(&self, target: f64, slack: f64) -> bool {
        (self.value - target).abs() <= self.abs_error + slack
    }

    fn merge_meta(&self, other: &Self, value: f64, abs_error: f64) -> Self {
        Self {
            value,
            abs_error,
            terms_used: self.terms_used + other.terms_used,
            level: self.level.max(other.level),
            certified: self.certified && other.certified,
            budget_exceeded: self.budget_exceeded || other.budget_exceeded,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let v = self.value + other.value;
        let e = self.abs_error + other.abs_error + ulp_of(v);
        self.merge_meta(other, v, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let v = self.value - other.value;
        let e = self.abs_error + other.abs_error + ulp_of(v);
        self.merge_meta(other, v, e)
    }

    /// Multiplication by an exactly known constant.
    pub fn scale(&self, c: f64) -> Self {
        let v = self.value * c;
        Self { value: v, abs_error: self.abs_error * c.abs() + ulp_of(v), ..*self }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let v = self.value * other.value;
        let e = self.value.abs() * other.abs_error
            + other.value.abs() * self.abs_error
            + self.abs_error * other.abs_error
            + ulp_of(v);
        self.merge_meta(other, v, e)
    }

    /// Quotient; the bound is infinite when the divisor's interval contains zero.
    pub fn div(&self, other: &Self) -> Self {
        let v = self.value / other.value;
        let d = other.value.abs();
        let e = if d > other.abs_error {
            (self.abs_error * d + self.value.abs() * other.abs_error) / (d * (d - other.abs_error))
                + ulp_of(v)
        } else {
            f64::INFINITY
        };
        self.merge_meta(other, v, e)
    }

    /// `exp` of a log-domain value: `|e^{s+d} - e^s| <= e^s (e^{|d|} - 1)`.
    pub fn exp(&self) -> Self {
        let v = self.value.exp();
        Self { value: v, abs_error: v * self.abs_error.exp_m1() + ulp_of(v), ..*self }
    }

    /// Natural log of a positive value.
    pub fn ln(&self) -> Self {
        let v = self.value.ln();
        let e = if self.value > self.abs_error {
            -(-self.abs_error / self.value).ln_1p() + ulp_of(v)
        } else {
            f64::INFINITY
        };
        Self { value: v, abs_error: e, ..*self }
    }
}

/// Two units in the last place, covering one rounded operation with margin.
pub(crate) fn ulp_of(v: f64) -> f64 {
    2.0 * f64::EPSILON * v.abs()
}
