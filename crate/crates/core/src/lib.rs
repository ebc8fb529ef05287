//! Circuit evaluation over finite semirings.
//!
//! The crate provides, over table-defined finite semirings:
//! - algebraic groundwork: axiom validation, idempotents, stability data,
//!   generated subsemirings and product-set chains ([`semiring`],
//!   [`semigroup`], [`coeff`]);
//! - the complexity classification of circuit evaluation ([`classify`]) and
//!   the power-semiring construction ([`powerset`]);
//! - circuits as gate DAGs with parsing, normal form and the naive
//!   topological evaluator ([`circuit`]), plus the Boolean-CVP reductions
//!   ([`cvp`]);
//! - the reduction of arbitrary circuits to type-admitting circuits with an
//!   affine recomposition ([`reduction`]);
//! - rank functions and the phased evaluator for type-admitting circuits
//!   ([`rank`], [`phased`]);
//! - syntactic monoids, the accepting-set congruence and the
//!   grammar-intersection front end ([`lang`]).

pub mod circuit;
pub mod classify;
pub mod coeff;
pub mod cvp;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod lang;
pub mod phased;
pub mod powerset;
pub mod rank;
pub mod reduction;
pub mod semigroup;
pub mod semiring;
mod textfmt;

pub use error::{Error, Result};
pub use semigroup::{Elem, FiniteSemigroup};
pub use semiring::FiniteSemiring;
