//! Unramified abelian covers: orbit counting on torsion, tower rank bounds
//! and the point-counting identities behind them.

pub mod bounds;
pub mod cover;
pub mod divisors;
pub mod orbits;

pub use bounds::{
    main_bound, tower_bounds, write_tower_csv, CoverKind, CoverSpec, MainBound, TowerConfig,
    TowerRow,
};
pub use cover::{verify_cover_identities, CoverReport};
pub use divisors::{dirichlet_prediction, divisor_count, divisor_sum_ratio};
pub use orbits::{
    burnside_count, full_group, orbit_count_content, orbit_count_full, validate_content, MatMod,
    OrbitMethod, OrbitResult,
};
