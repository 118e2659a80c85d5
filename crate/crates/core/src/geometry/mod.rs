//! Exact geometry: convex point sets, distance census, realization of
//! configurations, and the soundness harness that checks the deduction
//! rules against real polygons.

mod census;
mod harness;
mod points;
mod random;
mod realize;
mod regular;

use thiserror::Error;

pub use census::{census, DistanceCensus, Polygon};
pub use harness::{run_soundness, SoundnessParams, SoundnessReport, Violation, ViolationKind};
pub use points::{orient, parse_point_file, ConvexPointSet, Point};
pub use random::gen_random_convex;
pub use realize::{anchor_frame, realize_configuration, Frame};
pub use regular::RegularPolygon;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("points {triple:?} are not in strictly convex clockwise position")]
    NotConvex { triple: [usize; 3] },
    #[error("top and bottom intervals overlap")]
    Overlap,
    #[error("could not generate a convex {0}-gon")]
    Generation(usize),
    #[error("{0}")]
    Parse(String),
}
