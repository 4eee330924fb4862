//! Numerical and exact tools for the volume functional of unit vector
//! fields on punctured odd-dimensional round spheres: quadrature on
//! spheres and parallels, Euler-form flux, Poincaré indices via degree
//! integrals, closed-form lower bounds, and an exact symbolic check of
//! the Euler-class representative.

pub mod bounds;
pub mod combinatorics;
pub mod error;
pub mod exterior;
pub mod fields;
pub mod functionals;
pub mod matrix;
pub mod probe;
pub mod quad;
pub mod sphere;
pub mod topology;

pub use error::{Error, Result};
pub use fields::{DerivMode, FieldKind, VectorFieldSpec};
pub use functionals::{FluxScan, VolumeEstimate};
pub use matrix::{ShapeArray, SmallMatrix};
pub use quad::{GridKind, GridSpec, QuadratureGrid};
pub use sphere::{AdaptedFrame, ParallelSpec, SpherePoint};
pub use topology::{IndexReport, SphereMap};
