//! Exact and numeric toolkit for averaged configurations of planar 3-RPR parallel
//! manipulators: constraint polynomials, direct kinematics, flexion order, the
//! parametrized realisation-pair families and the geometric order-two criterion.

pub mod averaging;
pub mod error;
pub mod families;
pub mod flexion;
pub mod geometry;
pub mod kinematics;
pub mod ratpoly;
pub mod stachel;

pub use error::{Error, Result};
