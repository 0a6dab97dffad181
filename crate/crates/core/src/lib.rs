//! Minimum guard sets for orthogonal polygons via pixelations and tree decompositions.

pub mod geom;
pub mod pixelate;
pub mod twd;
pub mod models;
pub mod solver;
pub mod gen;
pub mod instance;
pub mod render;
pub mod bench;
