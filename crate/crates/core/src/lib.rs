//! Exact Čech-cohomological computations for algebraic line bundles with
//! connections on smooth toric atlases.
//!
//! Functions are Laurent polynomials over ℚ, 1-forms are written in the
//! logarithmic basis `θ_k = dt_k / t_k`, and transition functions are unit
//! monomials `c · t^a`. On this data the crate decides existence of
//! connections (the Atiyah obstruction), computes curvature, integrability and
//! logarithmic regularity, first Chern classes via Mayer–Vietoris, and the
//! groups `Pic`, `Pic_c`, `Pic_ci` at desk scale.

pub mod algebra;
pub mod atlas;
pub mod bundle;
pub mod cech;
pub mod connection;
pub mod error;
pub mod io;
pub mod linalg;
pub mod picard;
pub mod syntax;
pub mod topology;

pub use error::{Error, Result};
