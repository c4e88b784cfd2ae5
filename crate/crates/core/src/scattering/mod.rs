//! Wall types, truncated wall functions, scattering diagrams and mirror
//! structure constants.

mod mirror;
mod series;
mod wall;

pub use mirror::{mirror_product, mirror_pushforward_check, multiplicity_ev, MirrorTable, TableViolation};
pub use series::{wall_function, CurveClassMonoid, SeriesRing, TruncatedSeries};
pub use wall::{
    diagrams_equivalent, kappa, pullback_coefficients, pushforward_diagram, skeleton_from_coefficients,
    validate_wall_type, verify_wall_relation, ScatteringDiagram, Wall, Witness,
};
