//! Exact certification of K-instability and of the absence of anticanonical
//! polar cylinders for the infinite series of quasi-smooth well-formed del
//! Pezzo hypersurfaces in weighted projective 3-space.

pub mod catalog;
pub mod certify;
pub mod cli;
pub mod cylinder;
pub mod diagnostic;
pub mod exactmath;
pub mod geometry;
pub mod intersection;
pub mod report;
pub mod stability;
