//! Numerics for the Mellin-Barnes kernels of moderate-growth Whittaker
//! functions on GL(4,R): the O(4) representation combinatorics behind them,
//! the holonomic (Capelli / first-order) systems they satisfy as shift
//! identities, archimedean standard and exterior-square L- and ε-factors,
//! and the Bump-Friedberg zeta integrals with their test-vector identities.

pub mod bf;
pub mod corpus;
pub mod gamma;
pub mod gamma_expr;
pub mod kernels;
pub mod lfactors;
pub mod mellin_op;
pub mod quadrature;
pub mod rep;
pub mod report;

pub use gamma::C64;
pub use quadrature::KernelValue;
pub use rep::{Family, GeneratorIndex, HighestWeight, InducingDatum};
pub use report::{IdentityReport, RunConfig};
