//! Workloads shared by the benchmarks.

use tmprod_core::{EvalConfig, EvalMethod};

pub const H_POINTS: [f64; 4] = [-1.5, 0.0, 0.5, 3.0];

pub fn config(method: EvalMethod, level: u32, eps: f64) -> EvalConfig {
    EvalConfig { method, level, target_eps: eps, ..EvalConfig::default() }
}
