//! Exact structure-constant Lie algebras over Q and Q(i), with checks and
//! searches for invariant and bi-invariant complex structures.

pub mod algebra;
pub mod catalog;
pub mod cohomology;
pub mod complexify;
pub mod endo;
pub mod error;
pub mod format;
pub mod linalg;
pub mod nilpotent;
pub mod poly;
pub mod sampling;
pub mod scalar;
pub mod structures;

pub use algebra::{direct_sum, LieAlgebra, ValidationReport, MAX_DIM};
pub use catalog::{builtin, CatalogEntry};
pub use endo::EndoMap;
pub use error::{Error, Result};
pub use linalg::{Matrix, Subspace, Vector};
pub use nilpotent::{CharSequence, SeriesProfile};
pub use scalar::{Field, Rational, Scalar};
pub use structures::{Certificate, NijenhuisResidual, Status, Verdict};
