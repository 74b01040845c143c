//! Conductors of elliptic fibrations over the projective line, geometric
//! rank bounds and their behavior under unramified covers.

pub mod bounds;
pub mod kodaira;
pub mod local;

pub use bounds::{geometric_bound, pullback_conductor, Pullback};
pub use kodaira::{classify, KodairaType, Valuations};
pub use local::{
    candidate_places, conductor_degree, kodaira_classify, ConductorReport, LocalConductorDatum,
    Place,
};
