//! Proof search for upper bounds on the number of large distances among
//! the vertices of a convex polygon.
//!
//! The search works on [`Configuration`]s: two runs of polygon vertices and,
//! for every diagonal between them, the set of distance labels it may take.
//! [`deduce`] narrows these sets with geometric facts about convex polygons,
//! [`search`] grows configurations level by level and prunes those that
//! cannot carry too many target distances, and [`geometry`] provides exact
//! point sets used to check the rules against real polygons.

pub mod certificate;
pub mod config;
pub mod deduce;
pub mod geometry;
pub mod label;
pub mod search;

pub use config::{level_of, Configuration, Ratio, Span, SpecError, TargetSpec};
pub use deduce::{propagate_to_fixpoint, Contradiction, Engine, Rule};
pub use label::{DistanceLabel, LabelSet};
