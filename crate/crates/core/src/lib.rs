//! Numerical toolkit for the generalized point pair function
//! `p^alpha_G(x, y) = |x-y| / sqrt(|x-y|^2 + alpha d_G(x) d_G(y))`
//! and its comparison with hyperbolic-type metrics.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod optimize;
pub mod search;
pub mod specfun;

pub use bounds::{BoundRecord, ViolationReport, Witness};
pub use error::{Error, Result};
pub use geometry::{DomainShape, Face, PairSampler, Point};
pub use metrics::{gpp, MetricId, SMode};
pub use search::SearchResult;
