//! Certified evaluation of products `prod R(n)^{u_n}` weighted by the ±1
//! Thue-Morse sequence `u_n = (-1)^{s_2(n)}`, of the two-parameter family
//! `f(b, c) = prod_{n >= 1} ((n + b) / (n + c))^{u_n}`, and of
//! `h(x) = f(x/2, (x+1)/2)`.
//!
//! All sums run through one engine ([`engine::tm_weighted_sum`]) that
//! regroups the series into Thue-Morse blocks and bounds the tail by
//! summation by parts.

pub mod dirichlet;
pub mod engine;
mod error;
pub mod fmt;
pub mod hfun;
pub mod identities;
pub mod product;
pub mod thue_morse;
mod value;

pub use dirichlet::{
    allouche_cohen_series, dirichlet_s, even_index_sum, h0_four_ways, odd_index_sum,
    taylor_log_h, taylor_order_for, SeriesVariant, TaylorSeries, H0_APPROX,
};
pub use engine::{abel_tail_bound, tm_weighted_sum, truncated_sum, Kernel};
pub use error::{Error, Result};
pub use hfun::{
    emit_plot_grid, eval_h, eval_h_unpaired, f_from_h, fe_residual, log_h_derivative,
    truncated_h, write_plot_csv, PlotRow,
};
pub use identities::{
    builtin_catalog, catalog_json, combine, find_identity, split_identity,
    split_identity_from_zero, verify_identity, ClosedForm, Identity, IdentityReport,
};
pub use product::{
    check_convergence, eval_f, eval_product, partial_product, Diagnostic, EvalConfig, EvalMethod,
    RationalProductSpec,
};
pub use thue_morse::{digit_sum, tm_block_signs, tm_prefix_sum, tm_sign, TmWeight};
pub use value::ValueWithError;
