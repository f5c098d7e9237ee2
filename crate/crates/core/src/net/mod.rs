//! Placeholder; filled in next.
pub mod vocab;
pub mod params;
pub mod model;
pub mod train;
pub mod metrics;
pub mod checkpoint;
pub mod gradcheck;

pub use metrics::Metrics;
pub use model::forward;
pub use params::ModelParams;
pub use train::Hyper;
