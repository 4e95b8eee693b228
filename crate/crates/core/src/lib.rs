//! Builds, certifies and bounds point sets in `R^d` in which every three
//! points span an angle below `pi/3 + c`.
//!
//! The pipeline is:
//!
//! 1. [`construct::greedy_hypergraph`] picks `k`-subsets of `[d]` whose pairwise
//!    intersections stay below `ceil(c*k)`.
//! 2. [`construct::embed_hypercube`] maps each subset to its characteristic
//!    vector, a vertex of `{0,1}^d`.
//! 3. [`verify::max_angle`] certifies the angle property with exact integer
//!    predicates.
//!
//! [`bounds`] evaluates the closed-form quantities that go with the
//! construction (guaranteed edge counts, envelopes, cap and ball bounds) and
//! [`oracle`] holds the small-scale ground truth generators.

pub mod angle;
pub mod bounds;
pub mod cli;
pub mod construct;
pub mod error;
pub mod exact;
pub mod format;
pub mod oracle;
pub mod points;
pub mod precision;
pub mod subset;
pub mod verify;

pub use angle::{AngleSpec, Mode};
pub use error::{Error, Result};
pub use points::{EuclideanPointSet, LatticePointSet, PointSet};
pub use precision::{Precision, Real};
pub use subset::{BoundedIntersectionHypergraph, ConstructionParams, KSubset};
