//! Exact computations with cone-supported formal Laurent series and the
//! Grothendieck groups of positively graded basic algebras.
//!
//! The crate is organised bottom-up:
//!
//! - [`order`]: additive total orders on Zⁿ and weight certificates;
//! - [`support`]: translated finitely generated monoids used as supports;
//! - [`series`]: lazily evaluated Laurent series, products and inverses;
//! - [`grothmod`]: Grothendieck-group classes and series matrices;
//! - [`grmod`]: quiver algebras with relations, graded modules, Cartan matrices;
//! - [`homalg`]: baric truncations, projective covers, minimal resolutions,
//!   complexes, homology and Euler classes;
//! - [`io`]: JSON and text formats shared with the command-line tool;
//! - [`checks`]: end-to-end consistency checks on small example algebras.

pub mod checks;
pub mod error;
pub mod grmod;
pub mod grothmod;
pub mod homalg;
pub mod io;
pub mod linalg;
pub mod order;
pub mod scalar;
pub mod series;
pub mod support;

pub use error::{Error, Result};
pub use grmod::{AlgebraTruncation, GradedModule, QuiverPresentation};
pub use grothmod::{Basis, BasisKind, K0Vector, SeriesMatrix};
pub use homalg::{Bimodule, ChainComplex, MinimalResolution, ModuleMorphism};
pub use order::{Degree, OrderSpec};
pub use scalar::Scalar;
pub use series::LaurentSeries;
pub use support::ConeSupport;
