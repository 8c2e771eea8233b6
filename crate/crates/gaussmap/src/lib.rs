//! Discrete Gauss map invariants of polyhedral vertex stars, spherical
//! polygons and closed triangle meshes.

pub mod arrangement;
pub mod chord;
pub mod degree;
pub mod error;
pub mod fixtures;
pub mod index;
pub mod mesh;
pub mod sampling;
pub mod sphere;
pub mod star;
pub mod verify;

pub use error::{Error, Result};
