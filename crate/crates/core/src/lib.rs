//! Estimation of r-convex supports by the r-convex hull of a sample.

pub mod error;
pub mod experiment;
pub mod geom;
pub mod hull;
pub mod io;
pub mod metrics;
pub mod oracles;
pub mod support;

pub use error::{Error, Result};
pub use geom::{Aabb, Point2, UnitVec};
pub use hull::{PointCloud, RHull, Semantics};
pub use support::{SamplingLaw, SupportShape};
