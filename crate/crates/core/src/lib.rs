//! Exact wall-and-chamber computations for stability conditions on smooth
//! projective surfaces, driven entirely by lattice data.

pub mod characters;
pub mod error;
pub mod lattice;
pub mod presets;
pub mod rational;
pub mod stability;
pub mod walls;

pub use characters::{ChernCharacter, OneDimClass};
pub use error::{Error, Result};
pub use lattice::{DivisorClass, ExtendedClass, SurfaceLattice};
pub use rational::Rational;
pub use stability::{FamilyKind, FamilySpec, StabilityVector};
