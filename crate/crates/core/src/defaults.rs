//! The versioned table of default resolutions, tolerances and families.

use serde::Serialize;

use crate::error::Result;
use crate::hermite::{gauss_rule, QuadratureRule};
use crate::semigroups::TimeGrid;

pub const DEFAULTS_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Defaults {
    pub version: u32,
    pub time_grid: TimeGrid,
    /// Gauss-Hermite points per axis for the inner `γ_d` norms, by dimension.
    pub gauss_points: [usize; 4],
    pub family_max_order: u32,
    pub family_extension_order: u32,
    pub random_members: usize,
    pub random_max_order: u32,
    pub seed: u64,
    pub stability_slack: f64,
    pub conjugate_lower_band: f64,
    pub hardy_slack: f64,
    pub closed_form_tol: f64,
    pub representation_tol: f64,
}

pub fn defaults() -> Defaults {
    Defaults {
        version: DEFAULTS_VERSION,
        time_grid: default_time_grid(),
        gauss_points: [80, 36, 14, 8],
        family_max_order: 16,
        family_extension_order: 25,
        random_members: 20,
        random_max_order: 9,
        seed: 0,
        stability_slack: 0.05,
        conjugate_lower_band: 0.45,
        hardy_slack: 1e-6,
        closed_form_tol: 1e-3,
        representation_tol: crate::operators::REPRESENTATION_TOL,
    }
}

/// 400 log-spaced points on `[1e-12, 80]`.
pub fn default_time_grid() -> TimeGrid {
    TimeGrid {
        t_min: 1e-12,
        t_max: 80.0,
        count: 400,
    }
}

/// Gauss-Hermite rule used for inner norms in dimension `dim` (1 to 4).
pub fn default_inner_rule(dim: usize) -> Result<QuadratureRule> {
    let n = defaults().gauss_points[dim.clamp(1, 4) - 1];
    gauss_rule(dim, n)
}
