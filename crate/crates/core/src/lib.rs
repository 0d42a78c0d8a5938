//! Symbolic calculus for props (symmetric monoidal categories on one
//! object): free props as port-ordered DAGs, normalization modulo the
//! bialgebra-family relations, free Lie / PBW structure maps with Eulerian
//! idempotents, and truncated Yang-Baxter / twist series.
//!
//! Everything is generic over the coefficient ring through
//! [`scalar::Scalar`]; the two rings used in practice are exact rationals
//! and truncated `h`-series, with concrete aliases below.

pub mod diagram;
pub mod error;
pub mod evalmod;
pub mod expr;
pub mod freelie;
pub mod hseries;
pub mod linalg;
pub mod lincomb;
pub mod lyndon;
pub mod pbw;
pub mod perm;
pub mod rewrite;
pub mod rules;
pub mod scalar;
pub mod signature;
pub mod tensor;
pub mod twist;
pub mod ybe;

pub use diagram::{CanonicalDiagram, Diagram};
pub use error::{Error, Result};
pub use hseries::HSeries;
pub use lincomb::LinComb;
pub use perm::Permutation;
pub use rewrite::{NormalForm, OrderedDiagram};
pub use scalar::{Rational, Scalar};
pub use signature::{Gen, Signature, Variant};

/// Truncated `h`-series with rational coefficients (the quantum lane).
pub type HRat = HSeries<Rational>;

/// Diagram combinations over exact rationals (the classical lane).
pub type RatLinComb = LinComb<Rational>;

/// Diagram combinations over truncated `h`-series.
pub type HLinComb = LinComb<HRat>;

/// Normal forms over exact rationals.
pub type RatNormalForm = NormalForm<Rational>;

/// Normal forms over truncated `h`-series.
pub type HNormalForm = NormalForm<HRat>;

/// Enveloping-algebra elements over exact rationals.
pub type RatPbw = pbw::PBWElement<Rational>;

/// Enveloping-algebra elements with Laurent `h`-coefficients (the
/// localized lane).
pub type HPbw = pbw::PBWElement<HRat>;

/// Free Lie elements over exact rationals.
pub type RatLie = freelie::LieElement<Rational>;
