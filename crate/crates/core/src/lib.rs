//! Exact symbolic toolkit for Poisson algebras: brackets on Laurent
//! polynomial rings, the Poisson deleting-derivations chain, derivations of
//! Poisson tori, and normal forms in the simple quotient of the `G2`
//! semiclassical limit.

pub mod context;
pub mod error;
pub mod fraction;
pub mod ore;
pub mod parse;
pub mod pdda;
pub mod poisson;
pub mod poly;
pub mod rational;
pub mod schema;
pub mod suites;
pub mod centre;
pub mod cli;
pub mod lattice;
pub mod linalg;
pub mod quotient;
pub mod report;
pub mod torus;

pub use context::VarContext;
pub use error::{AlgebraError, Result};
pub use fraction::{FractionElement, FractionField};
pub use ore::PoissonOreData;
pub use parse::parse_expr;
pub use pdda::{run_chain, Chain, ChainStage};
pub use poisson::{DerivationSpec, PoissonStructure, WeightVector};
pub use poly::{LaurentPoly, Monomial};
pub use rational::Rational;
pub use schema::Algebra;
pub use quotient::{Params, Quotient};
pub use torus::{decompose_derivation, Decomposition, TorusStructure};
