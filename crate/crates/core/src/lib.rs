//! Numerics for two-view epipolar geometry.
//!
//! The crate measures how far a putative point correspondence is from
//! satisfying the epipolar constraint of a fundamental matrix, using several
//! error criteria with different cost/accuracy trade-offs:
//!
//! * the signed algebraic residual,
//! * the symmetric epipolar distance (SED),
//! * the Sampson (first-order geometric) error,
//! * an iteratively relinearized correction that refines the Sampson step,
//! * the exact reprojection error via the optimal two-view correction.
//!
//! Around the criteria it provides random scene generation, a gradient-walk
//! generator that manufactures correspondences with a prescribed reprojection
//! error, and brute-force oracles used to validate the fast paths.

pub mod criteria;
mod error;
pub mod geometry;
mod numerics;
pub mod oracle;
pub mod recg;
pub mod scenegen;

pub use error::{Error, Result};
pub use geometry::{
    signed_distance, Camera, Correspondence, EpipolarLines, EpipoleLocation, FundamentalMatrix,
    HomoLine, Point2,
};
