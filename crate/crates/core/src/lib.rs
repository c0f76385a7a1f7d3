//! Exact (q,t)-Bratteli diagrams built from Macdonald branching rules.
//!
//! The vertex set is Young's lattice. Edges carry the Macdonald multiplicity
//! `κ(λ, Λ)`, dimensions are weighted path counts, and the coherent measures
//! `M_n` are computed exactly together with growth samplers that realize them.
//! Hall-Littlewood, Schur and Jack specializations come with brute-force
//! oracles (unipotent matrices over `F_p`, RSK, charge) to check the
//! identities the construction relies on.

pub mod branching;
pub mod coeff;
pub mod error;
pub mod exec;
pub mod macdonald;
pub mod oracles;
pub mod partition;
pub mod report;
pub mod samplers;
pub mod special;
pub mod suite;

pub use coeff::{ExactRational, Field, LaurentPoly, RationalFunction};
pub use error::{Error, Result};
pub use partition::{Cell, CoverStep, Partition};
