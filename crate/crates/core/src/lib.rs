//! Graded commutative algebra over polynomial rings: Gröbner bases for
//! submodules of free modules, resolutions, Ext, Koszul homology,
//! Hilbert–Samuel coefficients, homological degrees and Buchsbaum–Rim
//! multiplicities.
//!
//! Everything is generic over the coefficient [`Field`]; the aliases below
//! pin the two scalar types used in practice.

pub mod brim;
pub mod error;
pub mod field;
pub mod gb;
pub mod graded;
pub mod hilbert;
pub mod hilbert_series;
pub mod homology;
pub mod invariants;
pub mod koszul;
pub mod module;
pub mod monomial;
pub mod poly;
pub mod resolution;
pub mod sampler;

pub use error::{Error, Result};
pub use field::{Field, Fp, Rational};
pub use gb::{SubmoduleGb, Truncation};
pub use graded::GradedModule;
pub use hilbert_series::{HilbertSeries, Length};
pub use module::{FreeModule, ModuleMap, ModuleOrder, Term, Vector};
pub use monomial::Monomial;
pub use poly::{CoeffField, Poly, PolyRing};

/// Default characteristic.
pub const DEFAULT_PRIME: u32 = 32003;

pub type F32003 = Fp<DEFAULT_PRIME>;
pub type Poly32003 = Poly<F32003>;
pub type PolyQ = Poly<Rational>;
