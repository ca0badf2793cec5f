//! Weak Lefschetz property checks for Artinian complete intersections.

pub mod bounds;
pub mod engine;
pub mod field;
pub mod harness;
pub mod jacobian;
pub mod linalg;
pub mod poly;
