//! Frenet immersed finite elements and the selective discontinuous Galerkin
//! (SDG) scheme for 2D elliptic interface problems on Cartesian meshes.

pub mod assembly;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod ife;
pub mod jet;
pub mod mesh;
pub mod problems;
pub mod quadrature;
pub mod solve_post;

pub use error::{Error, Result};
pub use exec::Execution;
