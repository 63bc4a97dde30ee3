//! Explicit arithmetic lattices acting on products of trees: presentations
//! over `F_q(t)` and over the Hurwitz quaternions, one-vertex cube complexes,
//! congruence quotients, and directional spectra.

pub mod cubical;
pub mod error;
pub mod ff_lattice;
pub mod finite_field;
pub mod hurwitz;
pub mod presentation;
pub mod quotient;
pub mod spectral;

pub use error::{Error, Result};
pub use finite_field::{FieldCtx, Fq2, Zech};
pub use presentation::{CentralityCertificate, Direction, GenLabel, Letter, Presentation, Square};
