//! Fibered surfaces over a base curve: surface definitions, reduction mod p,
//! the discriminant locus and average Frobenius traces.

pub mod badprimes;
pub mod discriminant;
pub mod function;
pub mod reduce;
pub mod spec;
pub mod trace;

pub use badprimes::{compute_bad_primes, BadPrimeSet, BadReason};
pub use discriminant::{discriminant_locus, DiscriminantLocus};
pub use function::{BaseFunction, FunctionField};
pub use spec::{FiberModel, SurfaceSpec};
pub use trace::{
    average_trace, trace_bound_check, write_trace_csv, TraceBoundReport, TraceEngine, TraceSample,
};
