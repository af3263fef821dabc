//! Construction and structural verification of pancake graphs
//! `P_n = Cay(S_n, PR_n)`, the Cayley graphs of the symmetric group with the
//! prefix reversals as connection set.
//!
//! Composition convention: `(g·s)(k) = g(s(k))`, so the edge `g ~ g·r_{1j}`
//! reverses the first `j` entries of `g`'s one-line form. Every module uses it.

pub mod automorphisms;
pub mod connectivity;
pub mod domination;
pub mod error;
pub mod graph;
pub mod permutations;
pub mod suite;

pub use automorphisms::{AutGroup, CopyStructureCertificate, GroupAutoStabilizer, GrrCertificate};
pub use connectivity::{ConnectivityCertificate, VertexCut};
pub use domination::EfficientDominatingSet;
pub use error::{Error, Result};
pub use graph::{Block, BlockKind, PancakeGraph, VertexId};
pub use permutations::{prefix_reversal, GeneratorSet, Permutation};
pub use suite::{run_suite, Suite, SuiteOptions, VerificationReport};
