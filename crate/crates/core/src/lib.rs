//! Random-walk functional limit theorems made computable.
//!
//! * [`rw_engine`]: walks, rescaled trajectories, centre of mass, Brownian paths.
//! * [`path_metrics`]: sup and Skorokhod distances, moduli, path functionals.
//! * [`hull_geometry`]: Hausdorff distance, convex hulls and their functionals.
//! * [`limit_laws`]: reference distributions and covariance algebra.
//! * [`experiments`]: Monte Carlo checks with reproducible reports.

pub mod error;
pub mod experiments;
pub mod fixtures;
pub mod hull_geometry;
pub mod limit_laws;
pub mod path_metrics;
pub mod rng;
pub mod rw_engine;

pub use error::{Error, Result};
pub use hull_geometry::{convex_hull, ConvexBody, Estimate, PointSet};
pub use limit_laws::{ComKernel, CovSpec};
pub use path_metrics::{MetricMode, MetricResult, Region, TimeChange};
pub use rw_engine::{IncrementLaw, TimeGrid, Trajectory, TrajectoryKind, Walk};
