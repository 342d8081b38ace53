//! Exact polynomial algebra for studying rational maps between projective
//! varieties: Groebner bases, Hilbert data, inverse maps and sampling of
//! parameter loci.

pub mod birational;
pub mod error;
pub mod field;
pub mod groebner;
pub mod invariants;
pub mod linalg;
pub mod locus;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod session;

pub use birational::RationalMap;
pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use groebner::{GroebnerBasis, Ideal};
pub use invariants::VarietyPresentation;
pub use monomial::{Monomial, MonomialOrder};
pub use parse::parse_poly;
pub use poly::Poly;
pub use ring::{Limits, PolyRing, RingRef};
