//! Band-limiting and half-line projections of symbols, and continuous BMO norms.

mod analytic;
mod bmo;
mod grid;
mod l2;
mod linf;

pub use analytic::{analytic_project, Side};
pub use bmo::{
    bmo_of_grid_values, bmo_r_norm, bmoe_norm, bmoe_norm_fn, bmoe_norm_values, scale_profile, vmo_profile,
    BmoEstimate, BmoeEstimate, GridSpec, ScaleProfile,
};
pub use grid::{integrate_against, GridFunction, KernelIntegral, Symbol, TailModel, TrigPolynomial};
pub use l2::{band_limit_at, project_l2};
pub use linf::{default_radius, mod_out_span, project_linf, LinfProjection, SpanFit};
