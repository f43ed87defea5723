//! Finite F-quasigroups, NK-loops and generalized modules over the ring
//! generated by four commuting indeterminates.
//!
//! Elements of a structure of order `n` are the indices `0..n`; tables are
//! Latin squares stored row-major.

pub mod cayley;
pub mod cli;
pub mod corpus;
pub mod endo;
pub mod equivalence;
pub mod error;
pub mod genmodule;
pub mod lemmas;
pub mod polyring;
pub mod structure;

pub use cayley::{is_f_quasigroup, LoopTable, QuasigroupTable, TableFile};
pub use endo::{Endo, EndoContext};
pub use equivalence::{build_fq, recover_form, rho, sigma, ArithmeticForm, PointedFQ};
pub use error::{Error, Result};
pub use genmodule::{GenModule, PointedGenModule};
pub use polyring::{Monomial, Polynomial};
pub use structure::{FactReport, FactRow};

/// Polynomials with arbitrary-precision coefficients.
pub type Poly = polyring::Polynomial<num_bigint::BigInt>;

/// Polynomials with machine-word coefficients; arithmetic reports overflow.
pub type Poly64 = polyring::Polynomial<i64>;
